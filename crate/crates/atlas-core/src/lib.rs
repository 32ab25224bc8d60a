//! Analytic continuation of general Dirichlet series and the geometry of
//! their mappings: pre-image curves of lines and circles, zeros of the
//! function and its derivatives, strip decompositions, merge trees,
//! fundamental domains, and the zero-pair involution machinery, together
//! with executable checks for the structural theorems that relate them.

pub mod analytic;
pub mod config;
pub mod document;
pub mod domains;
pub mod error;
pub mod geom;
pub mod grid;
pub mod involution;
pub mod series;
pub mod trace;
pub mod verify;
pub mod zeros;

pub use analytic::{AnalyticMap, FnMap, Jet, Shifted};
pub use config::Tolerances;
pub use error::{DomainError, EvalError, InvolutionError, TraceError, ZeroError};
pub use geom::Rect;
pub use grid::{FieldGrid, GridWindow};
pub use series::{AbscissaEstimate, Continuation, EvalResult, Family, Method, SeriesSpec};
pub use trace::{CurveClass, LevelSet, MarkKind, MarkedPoint, Source, StripRecord, TracedCurve};
pub use document::AtlasDocument;
pub use domains::{EtaArc, FundamentalDomain};
pub use verify::{CheckReport, Verdict};
pub use zeros::{MergeTree, Target, ZeroRecord};
