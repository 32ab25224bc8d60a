//! Local inverse by Newton continuation from an anchor zero along the image
//! segment from 0 to the target value.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::config::Tolerances;
use crate::error::InvolutionError;

/// Track the pre-image of a straight image path from `from_value` to `z`,
/// starting at `start` (with f(start) = from_value).
pub(crate) fn continue_along(
    map: &(impl AnalyticMap + ?Sized),
    start: Complex64,
    from_value: Complex64,
    z: Complex64,
    cfg: &Tolerances,
) -> Result<Complex64, InvolutionError> {
    let mut s = start;
    let leg = (z - from_value).norm().max(1e-300);
    // Initial image step sized so the first pre-image hop is O(hop_max).
    // The cap must stay below the sheet separation near the image point 1,
    // where every domain tail carries a nearby pre-image copy.
    let hop_max = 0.12f64;
    let d0 = map
        .jet(start, cfg.eval)
        .map_err(InvolutionError::Eval)?
        .d1()
        .norm()
        .max(1e-6);
    let mut dtau = (0.5 * hop_max * d0 / leg).clamp(1e-7, 0.25);
    let mut tau = 0.0f64;
    let mut guard = 0usize;
    while tau < 1.0 {
        guard += 1;
        if guard > 3000 {
            return Err(InvolutionError::Divergence(s));
        }
        let tau_next = (tau + dtau).min(1.0);
        let target = from_value + (z - from_value) * tau_next;
        // Newton solve f(x) = target from the current point.
        let mut x = s;
        let mut ok = false;
        for _ in 0..24 {
            let jet = map.jet(x, cfg.eval).map_err(InvolutionError::Eval)?;
            let g = jet.f() - target;
            // The reachable residual is capped by the evaluation noise.
            let tol_res = (1e-12 * (1.0 + target.norm())).max(8.0 * jet.err[0]);
            if g.norm() < tol_res {
                ok = true;
                break;
            }
            let d = jet.d1();
            if d.norm() < 1e-290 {
                break;
            }
            let mut step = g / d;
            if step.norm() > 2.0 * hop_max {
                break;
            }
            if step.norm() > hop_max {
                step *= hop_max / step.norm();
            }
            x -= step;
        }
        if ok && (x - s).norm() < hop_max {
            s = x;
            tau = tau_next;
            dtau = (dtau * 2.0).min(0.25);
        } else {
            dtau *= 0.5;
            if dtau < 1e-10 {
                return Err(InvolutionError::BranchPointOnPath(s));
            }
        }
    }
    Ok(s)
}

/// Inverse image of `z` on the branch through the anchor zero: Newton
/// continuation along the segment from 0 to z. Branch consistency is
/// enforced by the continuation itself; a path running into a derivative
/// zero is retried once with a perpendicular detour.
pub fn local_inverse(
    map: &(impl AnalyticMap + ?Sized),
    anchor_zero: Complex64,
    z: Complex64,
    cfg: &Tolerances,
) -> Result<Complex64, InvolutionError> {
    let zero = Complex64::new(0.0, 0.0);
    match continue_along(map, anchor_zero, zero, z, cfg) {
        Ok(s) => Ok(s),
        Err(InvolutionError::BranchPointOnPath(_)) => {
            // One perpendicular detour through the midpoint.
            let mid = 0.5 * z + Complex64::new(0.0, 1.0) * z * 0.25;
            let s_mid = continue_along(map, anchor_zero, zero, mid, cfg)?;
            continue_along(map, s_mid, mid, z, cfg)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesSpec;

    #[test]
    fn round_trip_near_first_zeta_zero() {
        let spec = SeriesSpec::zeta();
        let cfg = Tolerances::default();
        let rho = Complex64::new(0.5, 14.134725141734694);
        let map = spec.map(1e-12);
        // f(local_inverse(z)) = z for a spread of small targets.
        for z in [
            Complex64::new(0.05, 0.02),
            Complex64::new(-0.1, 0.08),
            Complex64::new(0.02, -0.12),
        ] {
            let s = local_inverse(&map, rho, z, &cfg).unwrap();
            let back = spec.eval(s, 1e-12).unwrap().value;
            assert!((back - z).norm() < 1e-10, "{back} vs {z}");
            assert!((s - rho).norm() < 0.5);
        }
        // The anchor itself inverts 0.
        let s0 = local_inverse(&map, rho, Complex64::new(0.0, 0.0), &cfg).unwrap();
        assert!((s0 - rho).norm() < 1e-9);
    }
}
