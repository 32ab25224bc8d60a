//! Argument-principle counting: the winding number of the target function
//! over positively oriented rectangle boundaries and circles, computed by
//! phase continuation with adaptive subdivision so that no accepted step
//! turns the phase by pi/2 or more.

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::error::ZeroError;
use crate::geom::Rect;

const MAX_DEPTH: usize = 44;
/// Evaluated |f| must stay above this multiple of the evaluation bound.
const BOUNDARY_SAFETY: f64 = 32.0;

/// Value and logarithmic-derivative magnitude at a boundary sample.
#[derive(Clone, Copy)]
struct Sample {
    f: Complex64,
    /// |f'/f|, bounding the phase-rotation rate per unit of arc length.
    rate: f64,
}

struct Walker<'a, M: AnalyticMap + ?Sized> {
    map: &'a M,
    tol: f64,
    total: f64,
    min_abs: f64,
    evals: usize,
}

impl<'a, M: AnalyticMap + ?Sized> Walker<'a, M> {
    fn sample(&mut self, s: Complex64) -> Result<Sample, ZeroError> {
        let jet = self.map.jet(s, self.tol)?;
        let v = jet.f();
        let floor = BOUNDARY_SAFETY * jet.err[0].max(1e-300);
        if !v.norm().is_finite() || v.norm() < floor {
            return Err(ZeroError::BoundaryTooCloseToZero {
                attempts: 0,
                min_abs: v.norm(),
            });
        }
        self.min_abs = self.min_abs.min(v.norm());
        self.evals += 1;
        Ok(Sample {
            f: v,
            rate: jet.d1().norm() / v.norm(),
        })
    }

    /// Phase increment along the parameterized arc from `a` to `b`. A step
    /// is accepted only when the aliasing guard holds: the phase cannot have
    /// rotated more than ~a quarter turn given the sampled |f'/f| rates and
    /// the chord length, so the principal-value delta is the true delta.
    fn walk(
        &mut self,
        point: &impl Fn(f64) -> Complex64,
        ta: f64,
        fa: Sample,
        tb: f64,
        fb: Sample,
        depth: usize,
    ) -> Result<(), ZeroError> {
        let delta = (fb.f / fa.f).arg();
        let chord = (point(tb) - point(ta)).norm();
        let guard = chord * fa.rate.max(fb.rate);
        if delta.abs() < std::f64::consts::FRAC_PI_2 && guard < 1.2 && depth >= 1 {
            self.total += delta;
            return Ok(());
        }
        // A persistent near-half-turn flip under deep subdivision is the
        // signature of a zero sitting on (or next to) the contour: report it
        // as such so the caller perturbs the box instead of giving up.
        if depth >= 28 && delta.abs() >= 0.9 * std::f64::consts::FRAC_PI_2 {
            return Err(ZeroError::BoundaryTooCloseToZero {
                attempts: 0,
                min_abs: fa.f.norm().min(fb.f.norm()),
            });
        }
        if depth >= MAX_DEPTH {
            return Err(ZeroError::PhaseJump(point(0.5 * (ta + tb))));
        }
        let tm = 0.5 * (ta + tb);
        let fm = self.sample(point(tm))?;
        self.walk(point, ta, fa, tm, fm, depth + 1)?;
        self.walk(point, tm, fm, tb, fb, depth + 1)
    }
}

/// Winding number of `map` along the positively oriented boundary of `rect`,
/// with no pole correction applied. Fails if the boundary approaches a zero
/// of the map or the phase cannot be continued reliably.
pub fn winding_rect(
    map: &(impl AnalyticMap + ?Sized),
    rect: Rect,
    tol: f64,
) -> Result<i64, ZeroError> {
    let corners = rect.corners();
    let mut w = Walker {
        map,
        tol,
        total: 0.0,
        min_abs: f64::INFINITY,
        evals: 0,
    };
    let mut values = Vec::with_capacity(4);
    for c in corners.iter() {
        values.push(w.sample(*c)?);
    }
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        let fa = values[k];
        let fb = values[(k + 1) % 4];

        let seg = move |t: f64| a + (b - a) * t;
        w.walk(&seg, 0.0, fa, 1.0, fb, 0)?;
    }
    let turns = w.total / std::f64::consts::TAU;
    let n = turns.round();
    if (turns - n).abs() > 0.15 {
        return Err(ZeroError::PhaseJump(rect.center()));
    }
    Ok(n as i64)
}

/// Winding number along a circle of radius `rho` around `center`.
pub fn winding_circle(
    map: &(impl AnalyticMap + ?Sized),
    center: Complex64,
    rho: f64,
    tol: f64,
) -> Result<i64, ZeroError> {
    let mut w = Walker {
        map,
        tol,
        total: 0.0,
        min_abs: f64::INFINITY,
        evals: 0,
    };
    let point = move |t: f64| {
        let theta = std::f64::consts::TAU * t;
        center + Complex64::new(rho * theta.cos(), rho * theta.sin())
    };
    // Eight seed arcs keep the initial steps well under a half turn.
    let seeds = 8usize;
    let mut vals = Vec::with_capacity(seeds + 1);
    for k in 0..=seeds {
        vals.push(w.sample(point(k as f64 / seeds as f64))?);
    }
    for k in 0..seeds {
        let (ta, tb) = (k as f64 / seeds as f64, (k + 1) as f64 / seeds as f64);
        w.walk(&point, ta, vals[k], tb, vals[k + 1], 0)?;
    }
    let turns = w.total / std::f64::consts::TAU;
    let n = turns.round();
    if (turns - n).abs() > 0.15 {
        return Err(ZeroError::PhaseJump(center));
    }
    Ok(n as i64)
}

/// Number of zeros of `map` inside `rect`, counted with multiplicity.
/// Perturbs the box (inflating by 1 + 2^-6, at most five times) when the
/// boundary passes too close to a zero, and corrects for an interior pole
/// of the map's value channel. Returns the count together with the box the
/// count was actually certified on.
pub fn count_zeros(
    map: &(impl AnalyticMap + ?Sized),
    rect: Rect,
    tol: f64,
) -> Result<(i64, Rect), ZeroError> {
    let mut attempt_rect = rect;
    let mut last_err = None;
    for attempt in 0..=5 {
        // Keep the pole away from the boundary: expanding is allowed to
        // swallow it (the winding is corrected), but a boundary graze is not.
        if let Some(p) = map.pole() {
            let d = attempt_rect.boundary_distance(p);
            if d < 1e-3 {
                attempt_rect = attempt_rect.inflate(1.0 + 2f64.powi(-6));
                last_err = Some(ZeroError::PoleNearBoundary(d));
                continue;
            }
        }
        match winding_rect(map, attempt_rect, tol) {
            Ok(w) => {
                let pole_corr = map
                    .pole()
                    .map(|p| {
                        if attempt_rect.contains(p) {
                            map.pole_order() as i64
                        } else {
                            0
                        }
                    })
                    .unwrap_or(0);
                let count = w + pole_corr;
                if count < 0 {
                    return Err(ZeroError::PhaseJump(attempt_rect.center()));
                }
                return Ok((count, attempt_rect));
            }
            Err(e @ (ZeroError::BoundaryTooCloseToZero { .. } | ZeroError::PhaseJump(_))) => {
                last_err = Some(e);
                attempt_rect = attempt_rect.inflate(1.0 + 2f64.powi(-6));
            }
            Err(e) => return Err(e),
        }
        let _ = attempt;
    }
    Err(match last_err {
        Some(ZeroError::BoundaryTooCloseToZero { min_abs, .. }) => {
            ZeroError::BoundaryTooCloseToZero {
                attempts: 5,
                min_abs,
            }
        }
        Some(e) => e,
        None => ZeroError::PhaseJump(rect.center()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::FnMap;
    use crate::series::SeriesSpec;

    fn poly_map(roots: Vec<Complex64>) -> FnMap<impl Fn(Complex64) -> [Complex64; 4] + Sync> {
        FnMap {
            f: move |s: Complex64| {
                let mut f = Complex64::new(1.0, 0.0);
                let mut d1 = Complex64::new(0.0, 0.0);
                let mut d2 = Complex64::new(0.0, 0.0);
                let mut d3 = Complex64::new(0.0, 0.0);
                for &r in &roots {
                    let u = s - r;
                    d3 = d3 * u + 3.0 * d2;
                    d2 = d2 * u + 2.0 * d1;
                    d1 = d1 * u + f;
                    f *= u;
                }
                [f, d1, d2, d3]
            },
            pole: None,
        }
    }

    #[test]
    fn counts_polynomial_roots() {
        let map = poly_map(vec![
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.4, 0.1),
            Complex64::new(2.0, 2.0),
        ]);
        let rect = Rect::new(-1.0, 1.0, -1.0, 1.0);
        let (n, _) = count_zeros(&map, rect, 1e-12).unwrap();
        assert_eq!(n, 2);
        let (n_all, _) = count_zeros(&map, Rect::new(-3.0, 3.0, -3.0, 3.0), 1e-12).unwrap();
        assert_eq!(n_all, 3);
    }

    #[test]
    fn double_root_counts_twice() {
        let map = poly_map(vec![Complex64::new(0.5, 0.5), Complex64::new(0.5, 0.5)]);
        let (n, _) = count_zeros(&map, Rect::new(0.0, 1.0, 0.0, 1.0), 1e-12).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn zeta_first_zero_box() {
        let spec = SeriesSpec::zeta();
        let (n, _) = count_zeros(
            &spec.map(1e-10),
            Rect::new(0.4, 0.6, 14.0, 14.3),
            1e-10,
        )
        .unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn euler_region_is_zero_free() {
        let spec = SeriesSpec::zeta();
        let (n, _) = count_zeros(&spec.map(1e-10), Rect::new(2.0, 3.0, 0.0, 1.0), 1e-10).unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn pole_in_box_is_corrected() {
        // Box around s = 1 for zeta: no zeros, simple pole inside. The raw
        // winding is -1; the corrected count must be 0.
        let spec = SeriesSpec::zeta();
        let (n, _) =
            count_zeros(&spec.map(1e-10), Rect::new(0.5, 1.5, -0.4, 0.4), 1e-10).unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn right_of_uniform_threshold_no_zeros() {
        let spec = SeriesSpec::davenport_heilbronn();
        let sigma = spec.uniform_limit_threshold(0.5).unwrap();
        let (n, _) = count_zeros(
            &spec.map(1e-10),
            Rect::new(sigma + 0.01, sigma + 6.0, 0.0, 40.0),
            1e-10,
        )
        .unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn circle_winding_matches_multiplicity() {
        let map = poly_map(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.8, 0.0),
        ]);
        assert_eq!(
            winding_circle(&map, Complex64::new(0.0, 0.0), 0.3, 1e-12).unwrap(),
            2
        );
        assert_eq!(
            winding_circle(&map, Complex64::new(0.0, 0.0), 1.5, 1e-12).unwrap(),
            3
        );
    }
}
