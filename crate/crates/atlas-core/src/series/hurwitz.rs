//! Euler-Maclaurin evaluation of the Hurwitz zeta function and its first
//! three derivatives in `s`, valid in the whole plane away from s = 1.
//!
//! zeta(s, a) = sum_{n=0}^{N-1} (n+a)^{-s}
//!            + (N+a)^{1-s}/(s-1)
//!            + (N+a)^{-s}/2
//!            + sum_{k=1}^{M} B_{2k}/(2k)! * (s)_{2k-1} * (N+a)^{-s-2k+1}
//!            + R_{M,N}(s)
//!
//! with |R| <= |B_{2M+2}/(2M+2)! * (s)_{2M+1} * (N+a)^{-s-2M-1}|
//!             * |s+2M+1| / (Re s + 2M + 1),   valid for Re s > -(2M+1).

use num_complex::Complex64;

use crate::analytic::Jet;
use crate::error::EvalError;

/// B_{2k}/(2k)! for k = 1..=20.
const B2K_OVER_FACT: [f64; 20] = [
    0.083333333333333333,
    -1.3888888888888889e-3,
    3.3068783068783069e-5,
    -8.2671957671957672e-7,
    2.0876756987868099e-8,
    -5.2841901386874932e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.5860620562778445e-15,
    -2.1748686985580619e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.5347070396294675e-21,
    -8.9535174270375469e-23,
    2.2679524523376831e-24,
    -5.7447906688722024e-26,
    1.4551724756148649e-27,
    -3.6859949406653102e-29,
    9.3367342570950447e-31,
    -2.3650224157006299e-32,
];

/// Number of Bernoulli tail terms used by default.
const DEFAULT_M: usize = 12;
const MAX_M: usize = 19;

/// e^{-s x} as a complex number, split so the real exp and sincos are shared.
#[inline]
fn exp_neg_s_x(s: Complex64, x: f64) -> Complex64 {
    let r = (-s.re * x).exp();
    let (sin, cos) = (-s.im * x).sin_cos();
    Complex64::new(r * cos, r * sin)
}

/// Evaluator for one Hurwitz zeta `zeta(s, a)` with a fixed truncation point.
/// Construct once per (a, height range) and reuse across a grid; the log
/// table is the dominant setup cost.
#[derive(Debug, Clone)]
pub struct HurwitzEval {
    pub a: f64,
    n_terms: usize,
    m_terms: usize,
    logs: Vec<f64>,
    log_q: f64,
    q_pow: [f64; 2],
}

impl HurwitzEval {
    /// `t_max` is the largest |Im s| the evaluator will be asked for.
    pub fn new(a: f64, t_max: f64) -> Self {
        assert!(a > 0.0 && a <= 1.0, "Hurwitz parameter must be in (0, 1]");
        let n_terms = (24.0_f64).max(1.4 * (t_max.abs() + 8.0)).ceil() as usize;
        Self::with_terms(a, n_terms, DEFAULT_M)
    }

    pub fn with_terms(a: f64, n_terms: usize, m_terms: usize) -> Self {
        let m_terms = m_terms.min(MAX_M);
        let logs: Vec<f64> = (0..n_terms).map(|n| (n as f64 + a).ln()).collect();
        let q = n_terms as f64 + a;
        let log_q = q.ln();
        HurwitzEval {
            a,
            n_terms,
            m_terms,
            logs,
            log_q,
            q_pow: [q, 1.0 / q],
        }
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    /// Evaluate the jet of zeta(s, a). The remainder bound is checked against
    /// `tol`; if it does not close the caller should rebuild with more terms.
    pub fn jet(&self, s: Complex64) -> Result<Jet, EvalError> {
        if (s - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
            return Err(EvalError::EvaluationAtPole(s));
        }
        let mut v = [Complex64::new(0.0, 0.0); 4];
        let mut comp = [Complex64::new(0.0, 0.0); 4]; // Kahan compensation
        let mut abs_sum = 0.0f64;

        // Head sum with shared powers; derivatives pick up (-log)^j factors.
        // Compensated summation keeps the rounding term at O(eps * abs_sum)
        // even when sigma < 0 makes the head terms large.
        let add = |v: &mut [Complex64; 4], comp: &mut [Complex64; 4], k: usize, x: Complex64| {
            let y = x - comp[k];
            let t = v[k] + y;
            comp[k] = (t - v[k]) - y;
            v[k] = t;
        };
        for &lg in &self.logs {
            let w = exp_neg_s_x(s, lg);
            add(&mut v, &mut comp, 0, w);
            let wl = w * lg;
            add(&mut v, &mut comp, 1, -wl);
            let wl2 = wl * lg;
            add(&mut v, &mut comp, 2, wl2);
            add(&mut v, &mut comp, 3, -wl2 * lg);
            abs_sum += w.norm();
        }

        let l = self.log_q;
        // Integral term Q^{1-s}/(s-1) and derivatives.
        let q1s = exp_neg_s_x(s, l) * self.q_pow[0];
        let d = s - Complex64::new(1.0, 0.0);
        let d1 = 1.0 / d;
        let d2 = d1 * d1;
        let d3 = d2 * d1;
        let d4 = d2 * d2;
        v[0] += q1s * d1;
        v[1] += q1s * (-l * d1 - d2);
        v[2] += q1s * (l * l * d1 + 2.0 * l * d2 + 2.0 * d3);
        v[3] += q1s * (-l * l * l * d1 - 3.0 * l * l * d2 - 6.0 * l * d3 - 6.0 * d4);

        // Boundary half term Q^{-s}/2.
        let qs = exp_neg_s_x(s, l);
        let half = qs * 0.5;
        v[0] += half;
        v[1] -= half * l;
        v[2] += half * l * l;
        v[3] -= half * l * l * l;

        // Bernoulli tail. Pochhammer jets are built by the product rule.
        // p[j] holds d^j/ds^j of (s)(s+1)...(s+i-1).
        let mut p = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let mut factors = 0usize;
        let qinv2 = self.q_pow[1] * self.q_pow[1];
        // Q^{-s-2k+1} = Q^{-s} * Q^{1-2k}
        let mut q_shift = self.q_pow[1]; // Q^{1-2k} for k=1
        for k in 1..=self.m_terms {
            while factors < 2 * k - 1 {
                let f = s + factors as f64;
                p[3] = p[3] * f + 3.0 * p[2];
                p[2] = p[2] * f + 2.0 * p[1];
                p[1] = p[1] * f + p[0];
                p[0] *= f;
                factors += 1;
            }
            let b = B2K_OVER_FACT[k - 1];
            let base = qs * q_shift * b;
            // d^j of P(s) e^{-Ls}: binomial over (-L)^{j-m} P^{(m)}.
            v[0] += base * p[0];
            v[1] += base * (p[1] - l * p[0]);
            v[2] += base * (p[2] - 2.0 * l * p[1] + l * l * p[0]);
            v[3] += base * (p[3] - 3.0 * l * p[2] + 3.0 * l * l * p[1] - l * l * l * p[0]);
            q_shift *= qinv2;
        }

        // Remainder bound from the first omitted term.
        let m = self.m_terms;
        while factors < 2 * m + 1 {
            let f = s + factors as f64;
            p[3] = p[3] * f + 3.0 * p[2];
            p[2] = p[2] * f + 2.0 * p[1];
            p[1] = p[1] * f + p[0];
            p[0] *= f;
            factors += 1;
        }
        let sigma = s.re;
        if sigma + 2.0 * m as f64 + 1.0 <= 0.0 {
            return Err(EvalError::ContinuationUnavailable {
                s,
                sigma_min: -(2.0 * m as f64 + 1.0),
            });
        }
        let b_next = B2K_OVER_FACT[m];
        let rem = b_next.abs()
            * p[0].norm()
            * qs.norm()
            * q_shift
            * (s + (2 * m + 1) as f64).norm()
            / (sigma + 2.0 * m as f64 + 1.0);
        // Crude but conservative inflation for differentiated remainders;
        // float noise scales with the log-weighted head magnitude per order.
        let kappa = l + 3.0 + (2.0 * m as f64 + 2.0).ln();
        let noise = abs_sum * 4.0 * f64::EPSILON + 1e-305;
        let lg1 = 1.0 + l;
        let err = [
            rem + noise,
            (rem * kappa + noise * lg1) * 1.5,
            (rem * kappa * kappa + noise * lg1 * lg1) * 2.0,
            (rem * kappa * kappa * kappa + noise * lg1 * lg1 * lg1) * 3.0,
        ];
        Ok(Jet { v, err })
    }
}

/// One-shot Hurwitz zeta jet with automatic truncation growth until the
/// remainder bound closes below `tol`. Growth stops once the bound stops
/// improving (the float-noise floor scales with the head magnitude, so
/// larger N eventually makes things worse at negative sigma). The returned
/// jet is best-effort with an honest bound; tolerance enforcement is the
/// caller's business.
pub fn hurwitz_jet(s: Complex64, a: f64, tol: f64) -> Result<Jet, EvalError> {
    let mut n = (24.0_f64).max(1.4 * (s.im.abs() + 8.0)).ceil() as usize;
    let mut m = DEFAULT_M;
    let mut best: Option<Jet> = None;
    for _ in 0..6 {
        let eval = HurwitzEval::with_terms(a, n, m);
        let jet = eval.jet(s)?;
        if jet.err[0] <= tol {
            return Ok(jet);
        }
        match &best {
            Some(b) if jet.err[0] >= b.err[0] => break,
            _ => best = Some(jet),
        }
        n = n * 3 / 2 + 8;
        m = (m + 3).min(MAX_M);
    }
    Ok(best.expect("at least one attempt ran"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hurwitz_at_one_matches_basel() {
        let j = hurwitz_jet(Complex64::new(2.0, 0.0), 1.0, 1e-13).unwrap();
        assert_relative_eq!(
            j.f().re,
            std::f64::consts::PI.powi(2) / 6.0,
            max_relative = 1e-12
        );
        assert!(j.f().im.abs() < 1e-12);
    }

    #[test]
    fn hurwitz_half_identity() {
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        let s = Complex64::new(2.0, 0.0);
        let h = hurwitz_jet(s, 0.5, 1e-13).unwrap().f();
        let z = hurwitz_jet(s, 1.0, 1e-13).unwrap().f();
        assert_relative_eq!(h.re, 3.0 * z.re, max_relative = 1e-12);
    }

    #[test]
    fn quarters_identity() {
        // zeta(s,1/4) + zeta(s,3/4) = 4^s (1 - 2^{-s}) zeta(s), checked at a
        // complex point to exercise the oscillatory path.
        let s = Complex64::new(1.5, 9.0);
        let a = hurwitz_jet(s, 0.25, 1e-12).unwrap().f();
        let b = hurwitz_jet(s, 0.75, 1e-12).unwrap().f();
        let z = hurwitz_jet(s, 1.0, 1e-12).unwrap().f();
        let four_s = Complex64::new(4.0f64.ln(), 0.0);
        let four_s = (s * four_s).exp();
        let two_ms = (-s * Complex64::new(2.0f64.ln(), 0.0)).exp();
        let rhs = four_s * (Complex64::new(1.0, 0.0) - two_ms) * z;
        assert!((a + b - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = Complex64::new(0.5, 14.0);
        let h = 1e-5;
        let jc = hurwitz_jet(s, 0.4, 1e-13).unwrap();
        let jp = hurwitz_jet(s + h, 0.4, 1e-13).unwrap();
        let jm = hurwitz_jet(s - h, 0.4, 1e-13).unwrap();
        let fd1 = (jp.f() - jm.f()) / (2.0 * h);
        let fd2 = (jp.f() - 2.0 * jc.f() + jm.f()) / (h * h);
        assert!((jc.d1() - fd1).norm() < 1e-6);
        assert!((jc.d2() - fd2).norm() < 1e-3);
        let fd3 = (jp.d2() - jm.d2()) / (2.0 * h);
        assert!((jc.d3() - fd3).norm() < 1e-4 * (1.0 + jc.d3().norm()));
    }

    #[test]
    fn negative_sigma_still_bounded() {
        // Continuation far left of the convergence half-plane. The head
        // terms reach (N+1)^4 there, so the honest absolute noise floor sits
        // near 1e-8 while the value itself is O(100).
        let j = hurwitz_jet(Complex64::new(-4.0, 21.0), 1.0, 1e-7).unwrap();
        assert!(j.err[0] < 1e-7);
        assert!(j.f().norm() > 1.0);
        assert!(j.err[0] < 1e-9 * j.f().norm());
    }

    #[test]
    fn pole_is_rejected() {
        let err = hurwitz_jet(Complex64::new(1.0, 0.0), 1.0, 1e-10);
        assert!(matches!(err, Err(EvalError::EvaluationAtPole(_))));
    }
}
