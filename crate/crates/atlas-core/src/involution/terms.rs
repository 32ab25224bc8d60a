//! Prime-indexed argument terms: the angles under which the segment between
//! a_p e^{-lambda_p/2} and a_p e^{-lambda_p delta} is seen from the point
//! e^{i lambda_p t} of the unit circle. For delta = 1/2 every term vanishes;
//! under the Ramanujan-type decay |a_n| e^{-lambda_n delta} -> 0 the terms
//! decay like the coefficient envelope.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EvalError, InvolutionError};
use crate::series::{primes::primes_up_to, SeriesSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgumentTermSeries {
    pub t: f64,
    pub delta: f64,
    pub primes: Vec<u64>,
    /// Principal-value angles, one per prime.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// max |term| over the top decade of primes.
    pub max_tail_term: f64,
    /// Whether |term_p| <= 4 |a_p| e^{-lambda_p min(delta, 1/2)} held for
    /// every computed prime beyond the first ten.
    pub envelope_holds: bool,
}

pub fn argument_terms(
    spec: &SeriesSpec,
    t: f64,
    delta: f64,
    prime_bound: u64,
) -> Result<ArgumentTermSeries, InvolutionError> {
    if !spec.multiplicative {
        return Err(InvolutionError::Eval(EvalError::NotMultiplicative));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(InvolutionError::Eval(EvalError::InvalidSpec(format!(
            "delta must lie in (0,1), got {delta}"
        ))));
    }
    if prime_bound < 2 {
        return Err(InvolutionError::Eval(EvalError::InvalidSpec(
            "prime bound must be >= 2".into(),
        )));
    }
    let primes = primes_up_to(prime_bound);
    let mut terms = Vec::with_capacity(primes.len());
    let mut partial_sums = Vec::with_capacity(primes.len());
    let mut acc = 0.0f64;
    let mut envelope_holds = true;
    for (i, &p) in primes.iter().enumerate() {
        let a_p = spec.coefficient(p).unwrap_or_default();
        let lambda = spec.exponent(p).unwrap_or((p as f64).ln());
        let e_it = Complex64::from_polar(1.0, lambda * t);
        let num = e_it - a_p * (-lambda * delta).exp();
        let den = e_it - a_p * (-lambda * 0.5).exp();
        if den.norm() < 1e-12 {
            return Err(InvolutionError::UnitCircleCollision(p));
        }
        let term = (num / den).arg();
        acc += term;
        terms.push(term);
        partial_sums.push(acc);
        if i >= 10 {
            let bound = 4.0 * a_p.norm() * (-lambda * delta.min(0.5)).exp();
            if term.abs() > bound + 1e-15 {
                envelope_holds = false;
            }
        }
    }
    let tail_start = primes
        .iter()
        .position(|&p| p * 10 > prime_bound)
        .unwrap_or(0);
    let max_tail_term = terms[tail_start..]
        .iter()
        .map(|t| t.abs())
        .fold(0.0, f64::max);
    Ok(ArgumentTermSeries {
        t,
        delta,
        primes,
        terms,
        partial_sums,
        max_tail_term,
        envelope_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_half_gives_exact_zeros() {
        let spec = SeriesSpec::zeta();
        let res = argument_terms(&spec, 10.0, 0.5, 1000).unwrap();
        assert!(res.terms.iter().all(|t| *t == 0.0));
        assert_eq!(res.partial_sums.last().copied().unwrap(), 0.0);
    }

    #[test]
    fn decay_envelope_for_zeta_coefficients() {
        let spec = SeriesSpec::zeta();
        let res = argument_terms(&spec, 10.0, 0.6, 10_000).unwrap();
        assert!(res.envelope_holds);
        // Terms decay like p^{-1/2} overall; the tail maximum is small.
        assert!(res.max_tail_term < 4.0 * (res.primes[res.primes.len() / 10] as f64).powf(-0.5));
        // Partial sums stay bounded on the computed prefix.
        let total_abs: f64 = res.terms.iter().map(|t| t.abs()).sum();
        assert!(total_abs.is_finite());
    }

    #[test]
    fn multiplicativity_is_required() {
        let dh = SeriesSpec::davenport_heilbronn();
        assert!(argument_terms(&dh, 5.0, 0.6, 100).is_err());
    }

    #[test]
    fn l_function_terms_also_decay() {
        let spec = SeriesSpec::dirichlet_l(5, 2).unwrap();
        let res = argument_terms(&spec, 31.0, 0.7, 5000).unwrap();
        assert!(res.envelope_holds);
    }
}
