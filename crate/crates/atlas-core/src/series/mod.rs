//! Normalized general Dirichlet series: evaluation, analytic continuation
//! for the preset families, derivatives, convergence-abscissa estimators,
//! uniform-limit thresholds, and Euler products.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticMap, Jet};
use crate::error::EvalError;

pub mod characters;
pub mod eta;
pub mod hurwitz;
pub mod primes;
pub mod specfile;

use characters::DirichletCharacter;
use eta::EtaEval;
use hurwitz::hurwitz_jet;

/// Disk of this radius around a pole is excluded from evaluation and scans.
pub const POLE_EXCLUSION_RADIUS: f64 = 1e-3;
/// Margin added to the convergence abscissa for capability-`none` series.
pub const CONVERGENCE_MARGIN: f64 = 0.5;
/// Effective prefix length for preset families with closed-form coefficients.
const PRESET_PREFIX: usize = 1 << 20;

/// Davenport-Heilbronn weight: (sqrt(10 - 2 sqrt 5) - 2) / (sqrt 5 - 1).
pub fn davenport_heilbronn_xi() -> f64 {
    let r5 = 5.0f64.sqrt();
    ((10.0 - 2.0 * r5).sqrt() - 2.0) / (r5 - 1.0)
}

/// How the continued function is computed left of the convergence half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Continuation {
    /// Evaluate only for Re s > sigma_c + margin.
    None,
    /// Zeta via the accelerated alternating series.
    EtaAcceleration,
    /// Sums of Hurwitz zeta values by Euler-Maclaurin.
    HurwitzEulerMaclaurin,
}

/// Method actually used for one evaluation, recorded for reproducibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    EtaAcceleration,
    HurwitzEulerMaclaurin,
    DirectSeries,
    LinearCombination,
    EulerProduct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Zeta,
    DirichletL {
        modulus: u32,
        index: u32,
    },
    /// q^{-s} sum_r w_r zeta(s, r/q); residue q stands for n = 0 mod q.
    HurwitzCombination {
        denominator: u32,
    },
    LinearCombination,
    Custom,
}

/// Result of a single evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub error_bound: f64,
    pub terms_used: usize,
    pub method: Method,
}

/// Finite-prefix estimates of the convergence abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbscissaEstimate {
    pub sigma_c: f64,
    pub d: f64,
    pub sigma_u_upper: f64,
    /// (eps, sigma_eps) pairs for a canonical ladder of eps values.
    pub sigma_eps: Vec<(f64, f64)>,
    pub prefix_length: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Engine {
    Zeta,
    /// Residue weights w_r for r = 1..=q (index 0 <-> residue 1).
    HurwitzSum {
        q: u32,
        weights: Vec<Complex64>,
    },
    Combination(Vec<(Complex64, SeriesSpec)>),
    Direct {
        coeffs: Vec<Complex64>,
        exponents: Vec<f64>,
    },
}

/// A normalized general Dirichlet series sum a_n e^{-lambda_n s} with
/// a_1 = 1 and lambda_1 = 0, plus the continuation capability metadata
/// needed to evaluate it in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub family: Family,
    pub continuation: Continuation,
    pub pole: Option<Complex64>,
    pub multiplicative: bool,
    engine: Engine,
    /// sup_n |a_n| when known analytically; None for custom tables.
    coef_sup: Option<f64>,
    /// For linear combinations: the raw a_1 divided out to restore a_1 = 1.
    pub normalization: Complex64,
    id: String,
}

impl SeriesSpec {
    // ----- presets ---------------------------------------------------------

    pub fn zeta() -> Self {
        SeriesSpec {
            family: Family::Zeta,
            continuation: Continuation::EtaAcceleration,
            pole: Some(Complex64::new(1.0, 0.0)),
            multiplicative: true,
            engine: Engine::Zeta,
            coef_sup: Some(1.0),
            normalization: Complex64::new(1.0, 0.0),
            id: "zeta".into(),
        }
    }

    pub fn dirichlet_l(modulus: u32, index: u32) -> Result<Self, EvalError> {
        let chi = DirichletCharacter::new(modulus, index)?;
        let weights: Vec<Complex64> = (1..=modulus as u64).map(|r| chi.eval(r)).collect();
        let pole = if chi.is_principal() {
            Some(Complex64::new(1.0, 0.0))
        } else {
            None
        };
        Ok(SeriesSpec {
            family: Family::DirichletL { modulus, index },
            continuation: Continuation::HurwitzEulerMaclaurin,
            pole,
            multiplicative: true,
            engine: Engine::HurwitzSum {
                q: modulus,
                weights,
            },
            coef_sup: Some(1.0),
            normalization: Complex64::new(1.0, 0.0),
            id: format!("L:{modulus}:{index}"),
        })
    }

    /// General periodic Hurwitz combination: coefficient w_r on residue r
    /// (1..=q). Requires w_1 = 1 for normalization.
    pub fn hurwitz_combination(q: u32, weights: Vec<Complex64>) -> Result<Self, EvalError> {
        if q < 2 || weights.len() != q as usize {
            return Err(EvalError::InvalidSpec(format!(
                "need exactly q = {q} residue weights, got {}",
                weights.len()
            )));
        }
        if (weights[0] - Complex64::new(1.0, 0.0)).norm() > 1e-14 {
            return Err(EvalError::InvalidSpec(
                "weight on residue 1 must be 1 (normalization a_1 = 1)".into(),
            ));
        }
        let total: Complex64 = weights.iter().sum();
        let pole = if total.norm() > 1e-12 {
            Some(Complex64::new(1.0, 0.0))
        } else {
            None
        };
        let sup = weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Ok(SeriesSpec {
            family: Family::HurwitzCombination { denominator: q },
            continuation: Continuation::HurwitzEulerMaclaurin,
            pole,
            multiplicative: false,
            engine: Engine::HurwitzSum { q, weights },
            coef_sup: Some(sup),
            normalization: Complex64::new(1.0, 0.0),
            id: format!("hurwitz-combination:{q}"),
        })
    }

    /// The Davenport-Heilbronn function: period-5 coefficients
    /// (1, xi, -xi, -1, 0). Entire, satisfies a Riemann-type functional
    /// equation, and carries off-critical-line zeros.
    pub fn davenport_heilbronn() -> Self {
        let xi = davenport_heilbronn_xi();
        let mut spec = Self::hurwitz_combination(
            5,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(xi, 0.0),
                Complex64::new(-xi, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .expect("static weights are valid");
        spec.id = "dh".into();
        spec
    }

    /// Linear combination of same-type children. The raw combination has
    /// a_1 = sum of weights; it is divided out so the result is normalized,
    /// which leaves zeros (and the double-zero geometry) unchanged.
    pub fn linear_combination(
        parts: Vec<(Complex64, SeriesSpec)>,
    ) -> Result<Self, EvalError> {
        if parts.is_empty() {
            return Err(EvalError::InvalidSpec("empty combination".into()));
        }
        let same_type = parts
            .windows(2)
            .all(|w| w[0].1.exponents_are_log_n() == w[1].1.exponents_are_log_n());
        if !same_type {
            return Err(EvalError::InvalidSpec(
                "combination children must share the same exponent sequence".into(),
            ));
        }
        let raw_a1: Complex64 = parts.iter().map(|(w, _)| *w).sum();
        if raw_a1.norm() < 1e-12 {
            return Err(EvalError::InvalidSpec(
                "combination weights sum to zero; cannot normalize a_1 = 1".into(),
            ));
        }
        let scale = 1.0 / raw_a1;
        let parts: Vec<(Complex64, SeriesSpec)> =
            parts.into_iter().map(|(w, c)| (w * scale, c)).collect();
        let pole = parts.iter().find_map(|(_, c)| c.pole);
        let sup = parts
            .iter()
            .map(|(w, c)| w.norm() * c.coef_sup.unwrap_or(1.0))
            .sum::<f64>();
        let id = format!(
            "combo({})",
            parts
                .iter()
                .map(|(w, c)| format!("{:+.6}{:+.6}i*{}", w.re, w.im, c.id))
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(SeriesSpec {
            family: Family::LinearCombination,
            continuation: Continuation::HurwitzEulerMaclaurin,
            pole,
            multiplicative: false,
            engine: Engine::Combination(parts),
            coef_sup: Some(sup),
            normalization: raw_a1,
            id,
        })
    }

    /// The pair combination L(q, i, s) + w L(q, j, s), normalized.
    pub fn l_pair_combination(q: u32, i: u32, j: u32, w: f64) -> Result<Self, EvalError> {
        let mut spec = Self::linear_combination(vec![
            (Complex64::new(1.0, 0.0), Self::dirichlet_l(q, i)?),
            (Complex64::new(w, 0.0), Self::dirichlet_l(q, j)?),
        ])?;
        spec.id = format!("combo:{q}:{i}:{j}:{w}");
        Ok(spec)
    }

    /// Real-coefficient symmetrization of the conjugate character pair
    /// {j, phi(q) - j}: the combination e^{i theta} L(q,j) + e^{-i theta}
    /// L(q, phi-j) with theta = -arg(eps)/2, normalized. It satisfies a
    /// Riemann-type functional equation with constant +1, so its Hardy-style
    /// rotation is real on the critical line and real-weight combinations of
    /// such functions can carry double zeros on the line.
    pub fn self_dual_pair(q: u32, j: u32) -> Result<Self, EvalError> {
        let chi = DirichletCharacter::new(q, j)?;
        if chi.is_principal() || 2 * j == chi.phi {
            return Err(EvalError::InvalidSpec(
                "self-dual symmetrization needs a complex (non-real) character".into(),
            ));
        }
        let theta = -chi.root_number().arg() / 2.0;
        let c = Complex64::from_polar(1.0, theta) / (2.0 * theta.cos());
        let partner = chi.phi - j;
        let mut spec = Self::linear_combination(vec![
            (c, Self::dirichlet_l(q, j)?),
            (c.conj(), Self::dirichlet_l(q, partner)?),
        ])?;
        spec.id = format!("S:{q}:{j}");
        Ok(spec)
    }

    /// Weight at which the modulus-7 self-dual family
    /// `self_dual_pair(7,1) + a * L(7,3)` reaches its double-zero
    /// configuration: the functional-equation-paired zeros near t = 31.586
    /// collide on the critical line. Calibrated by bisection on the
    /// off-line/on-line transition of the located pair; the certification
    /// zone around it is ~1e-8 wide.
    pub const DOUBLE_ZERO_WEIGHT_MOD7: f64 = 0.522137937526;

    /// The modulus-7 combination carrying a certified double zero near
    /// s = 0.5 + 31.586 i.
    pub fn double_zero_combination_mod7() -> Self {
        let pair = Self::self_dual_pair(7, 1).expect("static parameters are valid");
        let Engine::Combination(parts) = pair.engine else {
            unreachable!("self_dual_pair builds a combination");
        };
        let mut all = parts;
        all.push((
            Complex64::new(Self::DOUBLE_ZERO_WEIGHT_MOD7, 0.0),
            Self::dirichlet_l(7, 3).expect("static parameters are valid"),
        ));
        // Children of self_dual_pair are already normalized to unit sum; the
        // constructor renormalizes the extended combination.
        let mut spec = Self::linear_combination(all).expect("valid combination");
        spec.id = "combo:7".into();
        spec
    }

    /// Custom series from explicit coefficient and exponent tables
    /// (evaluation restricted to the convergence half-plane).
    pub fn custom(coeffs: Vec<Complex64>, exponents: Vec<f64>) -> Result<Self, EvalError> {
        if coeffs.len() != exponents.len() || coeffs.len() < 2 {
            return Err(EvalError::InvalidSpec(
                "coefficient and exponent tables must have equal length >= 2".into(),
            ));
        }
        if (coeffs[0] - Complex64::new(1.0, 0.0)).norm() > 1e-14 {
            return Err(EvalError::InvalidSpec("a_1 must equal 1".into()));
        }
        if exponents[0].abs() > 1e-14 {
            return Err(EvalError::InvalidSpec("lambda_1 must equal 0".into()));
        }
        if exponents.windows(2).any(|w| w[1] <= w[0]) {
            return Err(EvalError::InvalidSpec(
                "exponents must be strictly increasing".into(),
            ));
        }
        let n = exponents.len();
        if exponents[n - 1] < (n as f64).ln() {
            return Err(EvalError::InvalidSpec(format!(
                "exponents grow too slowly on the stored prefix: lambda_{n} = {} < ln {n}",
                exponents[n - 1]
            )));
        }
        Ok(SeriesSpec {
            family: Family::Custom,
            continuation: Continuation::None,
            pole: None,
            multiplicative: false,
            engine: Engine::Direct { coeffs, exponents },
            coef_sup: None,
            normalization: Complex64::new(1.0, 0.0),
            id: format!("custom[{n}]"),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn exponents_are_log_n(&self) -> bool {
        !matches!(self.engine, Engine::Direct { .. })
    }

    // ----- coefficients and exponents --------------------------------------

    /// a_n, 1-based. Returns None beyond the stored prefix of a custom table.
    pub fn coefficient(&self, n: u64) -> Option<Complex64> {
        debug_assert!(n >= 1);
        match &self.engine {
            Engine::Zeta => Some(Complex64::new(1.0, 0.0)),
            Engine::HurwitzSum { q, weights } => {
                let r = n % *q as u64;
                let idx = if r == 0 { *q as usize - 1 } else { r as usize - 1 };
                Some(weights[idx])
            }
            Engine::Combination(parts) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (w, c) in parts {
                    acc += *w * c.coefficient(n)?;
                }
                Some(acc)
            }
            Engine::Direct { coeffs, .. } => coeffs.get(n as usize - 1).copied(),
        }
    }

    pub fn exponent(&self, n: u64) -> Option<f64> {
        match &self.engine {
            Engine::Direct { exponents, .. } => exponents.get(n as usize - 1).copied(),
            _ => Some((n as f64).ln()),
        }
    }

    pub fn prefix_len(&self) -> usize {
        match &self.engine {
            Engine::Direct { coeffs, .. } => coeffs.len(),
            Engine::Combination(parts) => parts
                .iter()
                .map(|(_, c)| c.prefix_len())
                .min()
                .unwrap_or(PRESET_PREFIX),
            _ => PRESET_PREFIX,
        }
    }

    // ----- evaluation -------------------------------------------------------

    fn pole_guard(&self, s: Complex64) -> Result<(), EvalError> {
        if let Some(p) = self.pole {
            if (s - p).norm() < POLE_EXCLUSION_RADIUS {
                return Err(EvalError::EvaluationAtPole(s));
            }
        }
        Ok(())
    }

    /// Full jet (value through third derivative) with error bounds.
    pub fn jet(&self, s: Complex64, tol: f64) -> Result<Jet, EvalError> {
        self.pole_guard(s)?;
        let (jet, _, _) = self.jet_impl(s, tol)?;
        Ok(jet)
    }

    fn jet_impl(&self, s: Complex64, tol: f64) -> Result<(Jet, usize, Method), EvalError> {
        match &self.engine {
            Engine::Zeta => {
                let eta = EtaEval::new(s.im.abs(), s.re.min(0.0), tol.min(1e-12));
                let (jet, dmod) = eta.zeta_jet(s);
                if dmod > 0.05 && jet.err[0] <= tol {
                    return Ok((jet, eta.terms(), Method::EtaAcceleration));
                }
                // Near the zeros of 1 - 2^{1-s} the quotient loses digits;
                // Euler-Maclaurin on zeta(s, 1) is uniformly stable.
                let jet = hurwitz_jet(s, 1.0, tol)?;
                Ok((jet, 0, Method::HurwitzEulerMaclaurin))
            }
            Engine::HurwitzSum { q, weights } => {
                let (jet, terms) = hurwitz_sum_jet(s, *q, weights, tol)?;
                Ok((jet, terms, Method::HurwitzEulerMaclaurin))
            }
            Engine::Combination(parts) => {
                let mut v = [Complex64::new(0.0, 0.0); 4];
                let mut err = [0.0f64; 4];
                let mut terms = 0;
                for (w, child) in parts {
                    let (j, t, _) = child.jet_impl(s, tol / (2.0 * w.norm().max(1e-30)))?;
                    for k in 0..4 {
                        v[k] += *w * j.v[k];
                        err[k] += w.norm() * j.err[k];
                    }
                    terms += t;
                }
                Ok((Jet { v, err }, terms, Method::LinearCombination))
            }
            Engine::Direct { coeffs, exponents } => {
                let (jet, terms) = direct_series_jet(s, coeffs, exponents, self.coef_bound(), tol)?;
                Ok((jet, terms, Method::DirectSeries))
            }
        }
    }

    fn coef_bound(&self) -> f64 {
        match (&self.engine, self.coef_sup) {
            (_, Some(s)) => s,
            (Engine::Direct { coeffs, .. }, None) => {
                coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
            }
            _ => 1.0,
        }
    }

    /// Evaluate f(s) to absolute accuracy `tol`.
    pub fn eval(&self, s: Complex64, tol: f64) -> Result<EvalResult, EvalError> {
        if tol <= 0.0 {
            return Err(EvalError::InvalidSpec("tolerance must be positive".into()));
        }
        self.pole_guard(s)?;
        let (jet, terms_used, method) = self.jet_impl(s, tol)?;
        if !jet.err[0].is_finite() || jet.err[0] > tol {
            return Err(EvalError::ToleranceUnreachable {
                s,
                tol,
                best: jet.err[0],
            });
        }
        Ok(EvalResult {
            value: jet.f(),
            error_bound: jet.err[0],
            terms_used,
            method,
        })
    }

    /// Evaluate f'(s) or f''(s).
    pub fn eval_derivative(
        &self,
        s: Complex64,
        order: u32,
        tol: f64,
    ) -> Result<EvalResult, EvalError> {
        if !(order == 1 || order == 2) {
            return Err(EvalError::InvalidSpec(format!(
                "derivative order must be 1 or 2, got {order}"
            )));
        }
        self.pole_guard(s)?;
        let (jet, terms_used, method) = self.jet_impl(s, tol)?;
        let k = order as usize;
        if !jet.err[k].is_finite() || jet.err[k] > tol {
            return Err(EvalError::ToleranceUnreachable {
                s,
                tol,
                best: jet.err[k],
            });
        }
        Ok(EvalResult {
            value: jet.v[k],
            error_bound: jet.err[k],
            terms_used,
            method,
        })
    }

    // ----- abscissae and thresholds ----------------------------------------

    /// Finite-prefix surrogates for the limsup formulas defining sigma_c and
    /// D, maximized over n in [N/2, N].
    pub fn estimate_abscissae(&self, n_prefix: usize) -> Result<AbscissaEstimate, EvalError> {
        if n_prefix < 16 {
            return Err(EvalError::PrefixTooShort {
                need: 16,
                have: n_prefix,
            });
        }
        if n_prefix > self.prefix_len() {
            return Err(EvalError::PrefixTooShort {
                need: n_prefix,
                have: self.prefix_len(),
            });
        }
        let mut partial = Complex64::new(0.0, 0.0);
        let mut sigma_c = f64::NEG_INFINITY;
        let mut d = f64::NEG_INFINITY;
        for n in 1..=n_prefix as u64 {
            let a = self
                .coefficient(n)
                .ok_or(EvalError::PrefixTooShort {
                    need: n as usize,
                    have: self.prefix_len(),
                })?;
            partial += a;
            if n >= (n_prefix as u64).div_ceil(2) && n >= 2 {
                let lambda = self.exponent(n).unwrap();
                let mag = partial.norm();
                if mag > 0.0 {
                    sigma_c = sigma_c.max(mag.ln() / lambda);
                }
                d = d.max((n as f64).ln() / lambda);
            }
        }
        if !sigma_c.is_finite() {
            // All sampled partial sums vanished; the constant head a_1 = 1
            // still witnesses log|1| = 0 at the sampled scale.
            sigma_c = 0.0;
        }
        let ladder = [0.75, 0.5, 0.25, 0.1];
        let sigma_eps = ladder
            .iter()
            .filter_map(|&eps| self.uniform_limit_threshold(eps).ok().map(|s| (eps, s)))
            .collect();
        Ok(AbscissaEstimate {
            sigma_c,
            d,
            sigma_u_upper: sigma_c + d,
            sigma_eps,
            prefix_length: n_prefix,
        })
    }

    /// Tail majorant sum_{n >= 2} |a_n| e^{-lambda_n sigma}, bounded by the
    /// stored prefix plus an integral tail. Only valid (and only used) where
    /// the bound closes.
    fn tail_bound(&self, sigma: f64, k_prefix: usize) -> Result<f64, EvalError> {
        let mut head = 0.0f64;
        for n in 2..=k_prefix as u64 {
            let a = self.coefficient(n).ok_or(EvalError::PrefixTooShort {
                need: n as usize,
                have: self.prefix_len(),
            })?;
            let lambda = self.exponent(n).unwrap();
            head += a.norm() * (-lambda * sigma).exp();
        }
        let tail = if self.exponents_are_log_n() {
            // Ordinary exponents: sum_{n > K} n^{-sigma} <= K^{1-sigma}/(sigma-1).
            if sigma <= 1.0 + 1e-9 {
                return Err(EvalError::BoundDoesNotClose(format!(
                    "integral tail needs sigma > 1, got {sigma}"
                )));
            }
            let sup = self.coef_bound();
            sup * (k_prefix as f64).powf(1.0 - sigma) / (sigma - 1.0)
        } else {
            // Table exponents: extrapolate with the smallest late increment,
            // which must be positive and non-decreasing over the tail of the
            // stored prefix for the geometric majorant to be trustworthy.
            let Engine::Direct { exponents, .. } = &self.engine else {
                unreachable!()
            };
            let start = exponents.len() * 3 / 4;
            let incs: Vec<f64> = exponents[start..].windows(2).map(|w| w[1] - w[0]).collect();
            let non_decreasing = incs.windows(2).all(|w| w[1] >= w[0] - 1e-12);
            let d_min = incs.iter().copied().fold(f64::INFINITY, f64::min);
            if !non_decreasing || !(d_min > 0.0) || sigma <= 0.0 {
                return Err(EvalError::BoundDoesNotClose(
                    "exponent growth not established by the stored prefix".into(),
                ));
            }
            let lam_k = *exponents.last().unwrap();
            let x = (-d_min * sigma).exp();
            self.coef_bound() * (-lam_k * sigma).exp() * x / (1.0 - x)
        };
        Ok(head + tail)
    }

    /// Smallest sigma_eps (to bisection resolution) with
    /// sum_{n >= 2} |a_n| e^{-lambda_n sigma} < eps for all sigma > sigma_eps;
    /// no zero of f lies to the right of it.
    pub fn uniform_limit_threshold(&self, eps: f64) -> Result<f64, EvalError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(EvalError::InvalidSpec(format!(
                "eps must lie in (0, 1), got {eps}"
            )));
        }
        let k_prefix = self.prefix_len().min(4096);
        if k_prefix < 8 {
            return Err(EvalError::PrefixTooShort {
                need: 8,
                have: k_prefix,
            });
        }
        let mut hi = 64.0f64;
        if self.tail_bound(hi, k_prefix)? >= eps {
            return Err(EvalError::BoundDoesNotClose(format!(
                "tail bound still {} at sigma = {hi}",
                self.tail_bound(hi, k_prefix)?
            )));
        }
        let mut lo = if self.exponents_are_log_n() { 1.0 + 1e-6 } else { 1e-6 };
        if let Ok(b) = self.tail_bound(lo, k_prefix) {
            if b < eps {
                return Ok(lo);
            }
        }
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            match self.tail_bound(mid, k_prefix) {
                Ok(b) if b < eps => hi = mid,
                _ => lo = mid,
            }
        }
        Ok(hi)
    }

    // ----- Euler product ----------------------------------------------------

    /// Partial Euler product over primes p <= prime_bound.
    pub fn euler_product_eval(
        &self,
        s: Complex64,
        prime_bound: u64,
    ) -> Result<EvalResult, EvalError> {
        if !self.multiplicative {
            return Err(EvalError::NotMultiplicative);
        }
        if prime_bound < 2 {
            return Err(EvalError::InvalidSpec("prime bound must be >= 2".into()));
        }
        let sigma = s.re;
        if sigma <= 1.0 + 1e-9 {
            return Err(EvalError::ContinuationUnavailable { s, sigma_min: 1.0 });
        }
        let primes = primes::primes_up_to(prime_bound);
        let mut value = Complex64::new(1.0, 0.0);
        for &p in &primes {
            let a_p = self.coefficient(p).unwrap();
            if a_p.norm() == 0.0 {
                continue;
            }
            let lambda = self.exponent(p).unwrap();
            let factor = Complex64::new(1.0, 0.0) - a_p * (-s * lambda).exp();
            if factor.norm() < 1e-14 {
                return Err(EvalError::FactorVanishes {
                    p,
                    modulus: factor.norm(),
                });
            }
            value /= factor;
        }
        // log-tail over omitted primes: |log prod_{p > P}| <= 2 sup |a|
        // sum_{n > P} n^{-sigma}.
        let sup = self.coef_bound();
        let tail = 2.0 * sup * (prime_bound as f64).powf(1.0 - sigma) / (sigma - 1.0);
        let error_bound = value.norm() * (tail.exp() - 1.0)
            + value.norm() * 1e-15 * primes.len() as f64;
        Ok(EvalResult {
            value,
            error_bound,
            terms_used: primes.len(),
            method: Method::EulerProduct,
        })
    }

    /// View this spec (or one of its derivatives) as an [`AnalyticMap`].
    pub fn map(&self, tol: f64) -> SpecMap<'_> {
        SpecMap {
            spec: self,
            tol,
            shift: 0,
        }
    }

    pub fn derivative_map(&self, tol: f64) -> SpecMap<'_> {
        SpecMap {
            spec: self,
            tol,
            shift: 1,
        }
    }

    pub fn second_derivative_map(&self, tol: f64) -> SpecMap<'_> {
        SpecMap {
            spec: self,
            tol,
            shift: 2,
        }
    }
}

/// q^{-s} sum_r w_r zeta(s, r/q) with the product rule applied for the
/// q^{-s} prefactor.
fn hurwitz_sum_jet(
    s: Complex64,
    q: u32,
    weights: &[Complex64],
    tol: f64,
) -> Result<(Jet, usize), EvalError> {
    let qf = q as f64;
    let lq = qf.ln();
    let qsn = (-s.re * lq).exp(); // |q^{-s}|
    let mut h = [Complex64::new(0.0, 0.0); 4];
    let mut herr = [0.0f64; 4];
    let mut terms = 0usize;
    let active: f64 = weights.iter().filter(|w| w.norm() > 0.0).count().max(1) as f64;
    for (i, w) in weights.iter().enumerate() {
        if w.norm() == 0.0 {
            continue;
        }
        let a = (i as f64 + 1.0) / qf;
        let child_tol = tol / (qsn * 2.0 * active * w.norm());
        let jet = hurwitz_jet(s, a, child_tol)?;
        for k in 0..4 {
            h[k] += *w * jet.v[k];
            herr[k] += w.norm() * jet.err[k];
        }
        terms += 1;
    }
    // g = e^{-s ln q} h
    let qs = (-s * lq).exp();
    let v = [
        qs * h[0],
        qs * (h[1] - lq * h[0]),
        qs * (h[2] - 2.0 * lq * h[1] + lq * lq * h[0]),
        qs * (h[3] - 3.0 * lq * h[2] + 3.0 * lq * lq * h[1] - lq * lq * lq * h[0]),
    ];
    let err = [
        qsn * herr[0],
        qsn * (herr[1] + lq * herr[0]),
        qsn * (herr[2] + 2.0 * lq * herr[1] + lq * lq * herr[0]),
        qsn * (herr[3] + 3.0 * lq * herr[2] + 3.0 * lq * lq * herr[1] + lq * lq * lq * herr[0]),
    ];
    Ok((Jet { v, err }, terms))
}

/// Truncated direct summation in the convergence half-plane, with the
/// geometric/integral tail majorant described on [`SeriesSpec::tail_bound`].
fn direct_series_jet(
    s: Complex64,
    coeffs: &[Complex64],
    exponents: &[f64],
    coef_sup: f64,
    tol: f64,
) -> Result<(Jet, usize), EvalError> {
    let sigma = s.re;
    if sigma <= 0.0 {
        return Err(EvalError::ContinuationUnavailable { s, sigma_min: 0.0 });
    }
    let mut v = [Complex64::new(0.0, 0.0); 4];
    let mut abs_sum = 0.0;
    for (a, &lambda) in coeffs.iter().zip(exponents) {
        let w = *a * (-s * lambda).exp();
        v[0] += w;
        let w1 = w * lambda;
        v[1] -= w1;
        let w2 = w1 * lambda;
        v[2] += w2;
        v[3] -= w2 * lambda;
        abs_sum += w.norm() * (1.0 + lambda).powi(3);
    }
    let n = exponents.len();
    let start = n * 3 / 4;
    let incs: Vec<f64> = exponents[start..].windows(2).map(|w| w[1] - w[0]).collect();
    let d_min = incs.iter().copied().fold(f64::INFINITY, f64::min);
    if !(d_min > 0.0) {
        return Err(EvalError::BoundDoesNotClose(
            "exponent increments vanish on the stored prefix".into(),
        ));
    }
    let lam_last = *exponents.last().unwrap();
    let x = (-d_min * sigma).exp();
    let lam_factor = (1.0 + lam_last + d_min / sigma).powi(3);
    let tail = coef_sup * (-lam_last * sigma).exp() * x / (1.0 - x) * lam_factor;
    let noise = abs_sum * 4.0 * f64::EPSILON;
    let _ = tol;
    let err = [tail + noise; 4];
    Ok((Jet { v, err }, n))
}

/// [`AnalyticMap`] view of a series spec, optionally shifted to expose a
/// derivative as the value channel.
#[derive(Clone, Copy)]
pub struct SpecMap<'a> {
    pub spec: &'a SeriesSpec,
    pub tol: f64,
    pub shift: usize,
}

impl AnalyticMap for SpecMap<'_> {
    fn jet(&self, s: Complex64, tol: f64) -> Result<Jet, EvalError> {
        let j = self.spec.jet(s, tol.min(self.tol))?;
        if self.shift == 0 {
            return Ok(j);
        }
        let mut v = [Complex64::new(0.0, 0.0); 4];
        let mut err = [0.0; 4];
        for k in 0..4 {
            if k + self.shift < 4 {
                v[k] = j.v[k + self.shift];
                err[k] = j.err[k + self.shift];
            } else {
                err[k] = f64::INFINITY;
            }
        }
        Ok(Jet { v, err })
    }

    fn pole(&self) -> Option<Complex64> {
        self.spec.pole
    }

    fn pole_order(&self) -> u32 {
        1 + self.shift as u32
    }
}

#[cfg(test)]
mod tests;
