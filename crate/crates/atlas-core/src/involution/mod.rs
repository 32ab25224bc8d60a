//! The zero-pair involution machinery: local inverses anchored at zeros,
//! the involution swapping a functional-equation-paired zero couple across
//! the union H of their two fundamental domains, the ratio f/(f o phi), and
//! the prime-indexed argument-term series with its decay envelope.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

mod inverse;
mod map;
mod terms;

pub use inverse::local_inverse;
pub use map::{build_involution, verify_involution, InvolutionMap};
pub use terms::{argument_terms, ArgumentTermSeries};

/// Serializable summary of an involution lab run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabReport {
    pub spec_id: String,
    pub s1: Complex64,
    pub s2: Complex64,
    pub disc_radius: f64,
    pub samples: usize,
    pub max_involution_residual: f64,
    pub max_value_residual: f64,
    pub max_phi_deviation: f64,
    /// Histogram of |Phi - 1| over the samples (log10 buckets from 1e-16).
    pub phi_histogram: Vec<(f64, usize)>,
}
