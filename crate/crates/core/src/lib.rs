//! Exact computation of type sequences, dual chains, lengths and
//! Gorenstein-type classification for one-dimensional local analytically
//! irreducible rings `R ⊆ K[[X]]` over a finite extension `K/k`.
//!
//! Rings are represented modulo their conductor `X^N K[[X]]`, which turns
//! every quantity into exact finite-dimensional linear algebra over `k`.

pub mod doc;
pub mod error;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod ring;
pub mod scalar;
pub mod semigroup;
pub mod series;
pub mod typeseq;
pub mod verify;

pub use doc::{analyze, AnalysisReport, LoadedRing, RingDocument};
pub use error::{Error, Result};
pub use field::{ExtensionField, FieldElement, Generator};
pub use linalg::{RowReducer, Subspace};
pub use parse::{parse_element_expr, parse_polynomial, parse_series_expr, parse_tower};
pub use scalar::{BaseField, Scalar};
pub use ring::{DualChain, FractionalIdeal, GsrSpec, RingModel, SemigroupData, DEFAULT_DEGREE_CAP};
pub use semigroup::{semigroup_from_generators, semigroup_ts_oracle};
pub use series::TruncSeries;
pub use typeseq::{
    associated_gsr, bounds_check, classify, compare_with_gsr, type_sequence, BoundRow, BoundsTable,
    Classification, Flags, GsrComparison, Label, TypeSequenceReport,
};
pub use verify::{
    corpus, random_generated, random_gsr, run_fuzz, run_suite, run_suite_with_generators, CheckResult,
    FuzzMode, FuzzParams, FuzzReport, SuiteReport, CHECK_REGISTRY,
};
