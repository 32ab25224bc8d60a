//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised while evaluating a series or its derivatives.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation at the pole s = {0}")]
    EvaluationAtPole(Complex64),
    #[error("continuation unavailable at s = {s} (supported only for Re s > {sigma_min})")]
    ContinuationUnavailable { s: Complex64, sigma_min: f64 },
    #[error("tolerance {tol} unreachable at s = {s} (best bound {best})")]
    ToleranceUnreachable { s: Complex64, tol: f64, best: f64 },
    #[error("series is not flagged multiplicative; Euler product undefined")]
    NotMultiplicative,
    #[error("Euler product factor vanishes at p = {p} (|1 - a_p p^-s| = {modulus:e})")]
    FactorVanishes { p: u64, modulus: f64 },
    #[error("tail bound does not close: {0}")]
    BoundDoesNotClose(String),
    #[error("coefficient prefix too short: need {need}, have {have}")]
    PrefixTooShort { need: usize, have: usize },
    #[error("invalid series specification: {0}")]
    InvalidSpec(String),
}

/// Errors raised by level-set extraction and classification.
#[derive(Debug, Clone, Error)]
pub enum TraceError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("grid resolution insufficient: {0}")]
    ResolutionInsufficient(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
}

/// Errors raised by zero counting, location, and merge-tree assembly.
#[derive(Debug, Clone, Error)]
pub enum ZeroError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("box boundary stays too close to a zero after {attempts} perturbations (min |f| = {min_abs:e})")]
    BoundaryTooCloseToZero { attempts: usize, min_abs: f64 },
    #[error("phase continuation hit the subdivision limit on a boundary edge near {0}")]
    PhaseJump(Complex64),
    #[error("Newton refinement stalled near {0}")]
    NewtonStall(Complex64),
    #[error("zero at {0} has order exceeding two; numerical breakdown or counterexample")]
    OrderExceedsTwo(Complex64),
    #[error("order of zero at {0} is ambiguous at working precision")]
    AmbiguousOrder(Complex64),
    #[error("lost track of a level-set component while building the merge tree: {0}")]
    ComponentTrackingLoss(String),
    #[error("no derivative zero found near the merge point {0}")]
    DerivativeZeroNotFound(Complex64),
    #[error("pole lies within {0} of the box boundary")]
    PoleNearBoundary(f64),
}

/// Errors raised by fundamental-domain assembly.
#[derive(Debug, Clone, Error)]
pub enum DomainError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error("boundary assembly failed: chain gap near {0}")]
    BoundaryAssemblyFailure(Complex64),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("strip zeros straddle the window edge; refusing partial partition")]
    ZerosStraddleWindow,
    #[error("continuation crossed another branch point near {0}")]
    ContinuationCrossedBranchPoint(Complex64),
}

/// Errors raised by the involution machinery.
#[derive(Debug, Clone, Error)]
pub enum InvolutionError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("branch point on the continuation path near {0}")]
    BranchPointOnPath(Complex64),
    #[error("Newton continuation diverged near {0}")]
    Divergence(Complex64),
    #[error("zero pairing precondition failed: {0}")]
    PairingPreconditionFailed(String),
    #[error("no injectivity radius found for the zero pair")]
    InjectivityRadiusNotFound,
    #[error("denominator of Phi underflows at {0} away from the removable points")]
    DenominatorUnderflow(Complex64),
    #[error("argument term denominator degenerates at p = {0}")]
    UnitCircleCollision(u64),
}
