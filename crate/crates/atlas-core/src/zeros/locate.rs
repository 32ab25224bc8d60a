//! Zero location: recursive quadtree subdivision driven by argument-principle
//! counts, Newton refinement from box centers, and double-zero handling at
//! the cluster scale.

use num_complex::Complex64;

use crate::analytic::{AnalyticMap, Jet};
use crate::config::Tolerances;
use crate::error::ZeroError;
use crate::geom::Rect;
use crate::zeros::winding::{count_zeros, winding_circle};
use crate::zeros::{Target, ZeroRecord};

/// Newton iteration with residual-based damping. Returns the refined point
/// and its jet.
pub fn newton_refine(
    map: &(impl AnalyticMap + ?Sized),
    start: Complex64,
    tol_eval: f64,
    cfg: &Tolerances,
) -> Result<(Complex64, Jet), ZeroError> {
    let mut z = start;
    let mut jet = map.jet(z, tol_eval)?;
    for _ in 0..60 {
        let d = jet.d1();
        if d.norm() < 1e-290 {
            return Err(ZeroError::NewtonStall(z));
        }
        let full = jet.f() / d;
        let mut lambda = 1.0f64;
        let mut accepted = None;
        for _ in 0..9 {
            let cand = z - full * lambda;
            let cj = map.jet(cand, tol_eval)?;
            if cj.f().norm() <= jet.f().norm() * (1.0 - 0.25 * lambda) + 1e-300 {
                accepted = Some((cand, cj));
                break;
            }
            lambda *= 0.5;
        }
        let Some((cand, cj)) = accepted else {
            // Residual no longer shrinks: converged to float noise or stuck.
            if jet.f().norm() <= (cfg.zero_residual).max(64.0 * jet.err[0]) {
                return Ok((z, jet));
            }
            return Err(ZeroError::NewtonStall(z));
        };
        let step = (cand - z).norm();
        z = cand;
        jet = cj;
        if step <= cfg.newton_step * (1.0 + z.norm()) {
            return Ok((z, jet));
        }
    }
    if jet.f().norm() <= (cfg.zero_residual).max(64.0 * jet.err[0]) {
        Ok((z, jet))
    } else {
        Err(ZeroError::NewtonStall(z))
    }
}

struct Locator<'a, M: AnalyticMap + ?Sized> {
    map: &'a M,
    target: Target,
    tol: f64,
    cfg: &'a Tolerances,
    out: Vec<ZeroRecord>,
}

impl<'a, M: AnalyticMap + ?Sized> Locator<'a, M> {
    fn certify_simple(&mut self, rect: Rect, z: Complex64, jet: Jet) -> Result<(), ZeroError> {
        // The isolating quadtree box can be large; recentering it on the
        // refined zero may capture a neighbor just across the old split
        // line. Start from a modest radius and shrink until the count is 1.
        let floor = 32.0 * self.cfg.newton_step * (1.0 + z.norm());
        let mut half = (rect.diameter() * 0.5)
            .min(4.0 * self.cfg.double_zero_scale)
            .max(floor);
        let mut certified = None;
        for _ in 0..12 {
            let cert = Rect::from_center(z, half, half);
            match count_zeros(self.map, cert, self.tol) {
                Ok((1, used)) => {
                    certified = Some(used);
                    break;
                }
                Ok(_) => {
                    half /= 3.0;
                    if half < floor {
                        break;
                    }
                }
                Err(e @ ZeroError::Eval(_)) => return Err(e),
                Err(_) => {
                    half /= 2.5;
                    if half < floor {
                        break;
                    }
                }
            }
        }
        let Some(cert) = certified else {
            return Err(ZeroError::PhaseJump(z));
        };
        self.out.push(ZeroRecord {
            location: z,
            target: self.target,
            order: 1,
            residual: jet.f().norm(),
            strip: None,
            on_curves: Vec::new(),
            certificate_box: cert,
            certificate_count: 1,
        });
        Ok(())
    }

    /// A two-zero cluster at or below the double-zero scale: refine the
    /// critical point of the value channel (a simple zero of the derivative
    /// channel between the pair) and certify winding 2 around it.
    fn certify_double(&mut self, rect: Rect) -> Result<(), ZeroError> {
        let dmap = crate::analytic::Shifted {
            base: self.map,
            by: 1,
        };
        let (v, _) = newton_refine(&dmap, rect.center(), self.tol, self.cfg)?;
        if !rect.inflate(3.0).contains(v) {
            return Err(ZeroError::NewtonStall(v));
        }
        let jet = self.map.jet(v, self.tol)?;
        let cluster_tol = self
            .cfg
            .zero_residual
            .max(jet.d2().norm() * rect.diameter() * rect.diameter())
            .max(64.0 * jet.err[0]);
        if jet.f().norm() > cluster_tol {
            // Two genuine zeros further apart than the residual model allows.
            return Err(ZeroError::AmbiguousOrder(v));
        }
        let rho = (3.0 * rect.diameter()).max(8.0 * self.cfg.double_zero_scale);
        let w = winding_circle(self.map, v, rho, self.tol)?;
        if w != 2 {
            return Err(ZeroError::AmbiguousOrder(v));
        }
        let cert = Rect::from_center(v, rho, rho);
        self.out.push(ZeroRecord {
            location: v,
            target: self.target,
            order: 2,
            residual: jet.f().norm(),
            strip: None,
            on_curves: Vec::new(),
            certificate_box: cert,
            certificate_count: 2,
        });
        Ok(())
    }

    fn subdivide(&mut self, rect: Rect, count: i64, depth: usize) -> Result<(), ZeroError> {
        if count == 0 {
            return Ok(());
        }
        if depth > 60 {
            return Err(ZeroError::NewtonStall(rect.center()));
        }
        let diam = rect.diameter();
        if count == 1 {
            match newton_refine(self.map, rect.center(), self.tol, self.cfg) {
                // The refined zero must lie in the box that was counted;
                // Newton is free to wander to a neighbor otherwise.
                Ok((z, jet))
                    if rect.inflate(1.0 + 1e-9).contains(z)
                        && jet.f().norm()
                            <= self.cfg.zero_residual.max(64.0 * jet.err[0]) =>
                {
                    return self.certify_simple(rect, z, jet);
                }
                _ if diam > 64.0 * self.cfg.newton_step => {
                    // Newton wandered: localize harder before retrying.
                    return self.split(rect, count, depth);
                }
                Ok((z, _)) => return Err(ZeroError::NewtonStall(z)),
                Err(e) => return Err(e),
            }
        }
        if diam <= self.cfg.double_zero_scale {
            if count == 2 {
                return self.certify_double(rect);
            }
            return Err(ZeroError::OrderExceedsTwo(rect.center()));
        }
        match self.split(rect, count, depth) {
            // A two-zero cluster that no jittered split line can separate is
            // below the resolvable scale: certify it as a double.
            Err(_) if count == 2 && diam <= 8.0 * self.cfg.double_zero_scale => {
                self.certify_double(rect)
            }
            other => other,
        }
    }

    fn split(&mut self, rect: Rect, count: i64, depth: usize) -> Result<(), ZeroError> {
        // Children are counted on their exact rectangles so that sibling
        // boxes stay disjoint (a perturbed child box could swallow a zero
        // already owned by its neighbor). A zero on a split line makes the
        // walk fail or the counts disagree; jittering the split point moves
        // the line off the zero.
        let mut last: Option<ZeroError> = None;
        for &jit in &[0.0, 0.07, -0.05, 0.11, -0.13, 0.171] {
            let children = rect.split_at(0.5 + jit, 0.5 + jit);
            let mut counts = [0i64; 4];
            let mut ok = true;
            for (k, child) in children.iter().enumerate() {
                match exact_count(self.map, *child, self.tol) {
                    Ok(n) => counts[k] = n,
                    Err(e) => {
                        last = Some(e);
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || counts.iter().sum::<i64>() != count {
                continue;
            }
            for k in 0..4 {
                self.subdivide(children[k], counts[k], depth + 1)?;
            }
            return Ok(());
        }
        Err(last.unwrap_or(ZeroError::PhaseJump(rect.center())))
    }
}

/// Winding count on the exact rectangle (no perturbation), with the pole
/// correction applied.
fn exact_count(
    map: &(impl AnalyticMap + ?Sized),
    rect: Rect,
    tol: f64,
) -> Result<i64, ZeroError> {
    if let Some(p) = map.pole() {
        if rect.boundary_distance(p) < 1e-3 {
            return Err(ZeroError::PoleNearBoundary(rect.boundary_distance(p)));
        }
    }
    let w = crate::zeros::winding::winding_rect(map, rect, tol)?;
    let pole_corr = map
        .pole()
        .map(|p| {
            if rect.contains(p) {
                map.pole_order() as i64
            } else {
                0
            }
        })
        .unwrap_or(0);
    Ok(w + pole_corr)
}

/// Locate all zeros of `map` in `window`, counted with multiplicity, each
/// with a certificate box whose winding equals the record's order.
pub fn locate_zeros(
    map: &(impl AnalyticMap + ?Sized),
    target: Target,
    window: Rect,
    tol: f64,
    cfg: &Tolerances,
) -> Result<Vec<ZeroRecord>, ZeroError> {
    let (total, used) = count_zeros(map, window, tol)?;
    let mut loc = Locator {
        map,
        target,
        tol,
        cfg,
        out: Vec::new(),
    };
    loc.subdivide(used, total, 0)?;
    let mut out = loc.out;
    let found: i64 = out.iter().map(|r| r.order as i64).sum();
    if found != total {
        return Err(ZeroError::ComponentTrackingLoss(format!(
            "window count {total} but located {found} (with multiplicity)"
        )));
    }
    out.sort_by(|a, b| {
        (a.location.im, a.location.re)
            .partial_cmp(&(b.location.im, b.location.re))
            .unwrap()
    });
    for w in out.windows(2) {
        let gap = (w[1].location - w[0].location).norm();
        if gap < 1e-7 * (1.0 + w[0].location.norm()) {
            return Err(ZeroError::ComponentTrackingLoss(format!(
                "duplicate records at {} and {}",
                w[0].location, w[1].location
            )));
        }
    }
    Ok(out)
}
