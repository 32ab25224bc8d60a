//! A small abstraction over "an analytic function we can evaluate with
//! derivatives and error bounds". The zero finder, tracer, and partitioner
//! are written against this trait so they can also be driven by synthetic
//! test functions.

use num_complex::Complex64;

use crate::error::EvalError;

/// Value and first three derivatives at a point, with absolute error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// `v[k]` is the k-th derivative, k = 0..=3.
    pub v: [Complex64; 4],
    /// Absolute error bound for each entry of `v`.
    pub err: [f64; 4],
}

impl Jet {
    pub fn exact(v: [Complex64; 4]) -> Self {
        Jet { v, err: [0.0; 4] }
    }

    pub fn f(&self) -> Complex64 {
        self.v[0]
    }

    pub fn d1(&self) -> Complex64 {
        self.v[1]
    }

    pub fn d2(&self) -> Complex64 {
        self.v[2]
    }

    pub fn d3(&self) -> Complex64 {
        self.v[3]
    }
}

/// An analytic map on a region of the s-plane.
pub trait AnalyticMap: Sync {
    /// Evaluate value and derivatives at `s` targeting absolute accuracy `tol`.
    fn jet(&self, s: Complex64, tol: f64) -> Result<Jet, EvalError>;

    /// Location of the pole of the *value* channel, if any.
    fn pole(&self) -> Option<Complex64> {
        None
    }

    /// Order of the pole seen by the value channel (1 for a simple pole).
    /// Derivative channels of a simple pole see higher orders; shifted maps
    /// override accordingly.
    fn pole_order(&self) -> u32 {
        1
    }

    fn value(&self, s: Complex64, tol: f64) -> Result<Complex64, EvalError> {
        Ok(self.jet(s, tol)?.f())
    }
}

/// View an [`AnalyticMap`] shifted by one derivative: the value channel of
/// `Shifted(m)` is `m'`, its first derivative `m''`, and so on. The third
/// derivative of the underlying map is propagated as a finite-difference
/// estimate only when requested; we simply truncate since no caller needs
/// the fourth derivative of the base map.
pub struct Shifted<'a, M: AnalyticMap + ?Sized> {
    pub base: &'a M,
    /// How many derivative orders to shift by (1 or 2).
    pub by: usize,
}

impl<'a, M: AnalyticMap + ?Sized> AnalyticMap for Shifted<'a, M> {
    fn jet(&self, s: Complex64, tol: f64) -> Result<Jet, EvalError> {
        let j = self.base.jet(s, tol)?;
        let mut v = [Complex64::new(0.0, 0.0); 4];
        let mut err = [0.0; 4];
        for k in 0..4 {
            if k + self.by < 4 {
                v[k] = j.v[k + self.by];
                err[k] = j.err[k + self.by];
            } else {
                // Truncated order: flag with an infinite bound so misuse is loud.
                v[k] = Complex64::new(0.0, 0.0);
                err[k] = f64::INFINITY;
            }
        }
        Ok(Jet { v, err })
    }

    fn pole(&self) -> Option<Complex64> {
        self.base.pole()
    }

    fn pole_order(&self) -> u32 {
        self.base.pole_order() + self.by as u32
    }
}

/// Adapter for closures, used by tests and synthetic harness cases. The
/// closure returns the full jet; error bounds are zero.
pub struct FnMap<F: Fn(Complex64) -> [Complex64; 4] + Sync> {
    pub f: F,
    pub pole: Option<Complex64>,
}

impl<F: Fn(Complex64) -> [Complex64; 4] + Sync> AnalyticMap for FnMap<F> {
    fn jet(&self, s: Complex64, _tol: f64) -> Result<Jet, EvalError> {
        Ok(Jet::exact((self.f)(s)))
    }

    fn pole(&self) -> Option<Complex64> {
        self.pole
    }
}
