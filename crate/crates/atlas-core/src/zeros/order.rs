//! Order certification for a located zero: a two-stage test (small |f'|
//! plus winding two) declares a double; winding three or more is an error,
//! never a silent report.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::ZeroError;
use crate::zeros::winding::winding_circle;

/// Order of a certified zero of the map's value channel at `s0`.
pub fn zero_order(
    map: &(impl AnalyticMap + ?Sized),
    s0: Complex64,
    tol: f64,
    cfg: &Tolerances,
) -> Result<u32, ZeroError> {
    let jet = map.jet(s0, tol)?;
    let scale = cfg.double_zero_scale;
    let residual_tol = cfg
        .zero_residual
        .max(jet.d2().norm() * scale * scale)
        .max(64.0 * jet.err[0]);
    if jet.f().norm() > residual_tol {
        return Err(ZeroError::AmbiguousOrder(s0));
    }
    let fp = jet.d1().norm();
    let threshold = cfg.order_factor * (1.0 + jet.d2().norm() * scale);

    // Choose a circle radius with |f| bounded below on it; shrink on grazes.
    let mut rho = 4.0 * scale;
    let mut last = None;
    for _ in 0..6 {
        match winding_circle(map, s0, rho, tol) {
            Ok(w) => {
                return match w {
                    1 => Ok(1),
                    2 if fp < threshold => Ok(2),
                    2 => Err(ZeroError::AmbiguousOrder(s0)),
                    0 => Err(ZeroError::AmbiguousOrder(s0)),
                    _ => Err(ZeroError::OrderExceedsTwo(s0)),
                };
            }
            Err(e @ ZeroError::BoundaryTooCloseToZero { .. }) => {
                last = Some(e);
                rho *= 0.6180339887498949;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(ZeroError::AmbiguousOrder(s0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::FnMap;
    use crate::series::SeriesSpec;

    #[test]
    fn zeta_first_zero_is_simple() {
        let spec = SeriesSpec::zeta();
        let cfg = Tolerances::default();
        // |zeta'| ~ 0.79 there, far above the double-zero threshold.
        let order = zero_order(
            &spec.map(1e-10),
            Complex64::new(0.5, 14.134725141734694),
            1e-10,
            &cfg,
        )
        .unwrap();
        assert_eq!(order, 1);
    }

    #[test]
    fn synthetic_triple_zero_is_an_error() {
        let map = FnMap {
            f: |s: Complex64| {
                let u = s - Complex64::new(0.25, 0.25);
                [
                    u * u * u,
                    3.0 * u * u,
                    6.0 * u,
                    Complex64::new(6.0, 0.0),
                ]
            },
            pole: None,
        };
        let cfg = Tolerances::default();
        let err = zero_order(&map, Complex64::new(0.25, 0.25), 1e-12, &cfg);
        assert!(matches!(err, Err(ZeroError::OrderExceedsTwo(_))), "{err:?}");
    }

    #[test]
    fn synthetic_double_zero_certifies() {
        let map = FnMap {
            f: |s: Complex64| {
                let u = s - Complex64::new(-0.5, 1.0);
                [u * u, 2.0 * u, Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]
            },
            pole: None,
        };
        let cfg = Tolerances::default();
        assert_eq!(
            zero_order(&map, Complex64::new(-0.5, 1.0), 1e-12, &cfg).unwrap(),
            2
        );
    }
}
