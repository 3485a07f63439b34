//! Exact computation with finitely presented coarse spaces.
//!
//! Every notion is evaluated relative to explicit relations on a finite
//! point set: covers are checked against a named bounding relation, games are
//! played to a fixed horizon, and all arithmetic is exact.

pub mod covers;
pub mod decomposition;
pub mod error;
pub mod fixtures;
pub mod maps;
pub mod metric;
pub mod property_a;
pub mod rational;
pub mod relations;
pub mod verdict;

pub use covers::{DimensionCertificate, PropertyCCertificate, SearchMode, SearchOutcome, SubsetFamily};
pub use decomposition::{
    Challenge, Decomposer, Decomposition, GameTranscript, Move, Outcome, Part, Response, WeakDecomposition,
};
pub use error::{Error, Result};
pub use maps::{CoarseMap, ProductSpace};
pub use metric::{FiniteMetric, Hops, HopDistance, Radius};
pub use property_a::{Level, PropertyAConfig, PropertyAWitness, SparseVector};
pub use rational::Rational;
pub use relations::{Entourage, Filtration, PointSet, Space};
pub use verdict::{Failure, Verdict};
