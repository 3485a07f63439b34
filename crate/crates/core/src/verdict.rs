//! Outcomes of checks: a list of failures, each carrying a witness.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::relations::PointSet;

type Pair = (usize, usize);

/// A single violated condition together with the smallest witness found.
///
/// `family` fields are 0-based positions within a certificate's sequence of
/// families; `level` fields index filtration levels the same way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum Failure {
    NotReflexive { level: Option<usize>, point: usize },
    NotSymmetric { level: Option<usize>, pair: Pair },
    NotMonotone { level: usize, pair: Pair },
    SpaceMismatch { expected: usize, found: usize },
    NotDisjoint { family: Option<usize>, first: PointSet, second: PointSet, pair: Pair },
    NotBounded { family: Option<usize>, pair: Pair },
    Uncovered { points: Vec<usize> },
    TooManyFamilies { families: usize, levels: usize },
    NormNotOne {
        point: usize,
        #[serde(with = "rational")]
        norm: Rational,
    },
    VariationTooLarge {
        pair: Pair,
        #[serde(with = "rational")]
        variation: Rational,
        #[serde(with = "rational")]
        bound: Rational,
    },
    SupportEscapes { point: usize, support: usize },
    NormBelowBound {
        point: usize,
        #[serde(with = "rational")]
        norm: Rational,
        #[serde(with = "rational")]
        bound: Rational,
    },
    LipschitzViolated {
        pair: Pair,
        #[serde(with = "rational")]
        difference: Rational,
        #[serde(with = "rational")]
        bound: Rational,
    },
    NoSupportBound { max_power: u64 },
    TargetMismatch { member: PointSet },
    PartNotUnionOfBlocks { member: PointSet, part: usize },
    PartsDoNotCoverTarget { member: PointSet, missing: Vec<usize>, extra: Vec<usize> },
    BlockNotInFamily { member: PointSet, part: usize, block: PointSet },
    DuplicateBlock { member: PointSet, part: usize, block: PointSet },
    ArityMismatch { member: PointSet, expected: usize, found: usize },
    ArityExceeded { limit: usize, found: usize },
    WrongEntourage,
    NotBornologous { level: usize, pair: Pair },
    NotProper { pair: Pair },
    NotClose { point: usize, pair: Pair },
    Other { message: String },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Failure::*;
        match self {
            NotReflexive { level, point } => write!(f, "not reflexive at point {point} (level {level:?})"),
            NotSymmetric { level, pair } => write!(f, "not symmetric: {pair:?} without its inverse (level {level:?})"),
            NotMonotone { level, pair } => write!(f, "level {level} pair {pair:?} missing from the next level"),
            SpaceMismatch { expected, found } => write!(f, "expected {expected} points, found {found}"),
            NotDisjoint { family, first, second, pair } => {
                write!(f, "members {first:?} and {second:?} meet through {pair:?}{}", Position(*family))
            }
            NotBounded { family, pair } => write!(f, "pair {pair:?} of the family diagonal escapes the bound{}", Position(*family)),
            Uncovered { points } => write!(f, "uncovered points {points:?}"),
            TooManyFamilies { families, levels } => write!(f, "{families} families for {levels} challenge levels"),
            NormNotOne { point, norm } => write!(f, "norm at {point} is {}", rational::format(norm)),
            VariationTooLarge { pair, variation, bound } => write!(
                f,
                "variation {} over {pair:?} exceeds {}",
                rational::format(variation),
                rational::format(bound)
            ),
            SupportEscapes { point, support } => write!(f, "support point {support} of {point} escapes the support bound"),
            NormBelowBound { point, norm, bound } => write!(
                f,
                "norm {} at {point} below {}",
                rational::format(norm),
                rational::format(bound)
            ),
            LipschitzViolated { pair, difference, bound } => write!(
                f,
                "difference {} over {pair:?} exceeds {}",
                rational::format(difference),
                rational::format(bound)
            ),
            NoSupportBound { max_power } => write!(f, "no support bound with hop power <= {max_power}"),
            TargetMismatch { member } => write!(f, "decomposition target {member:?} is not the member it decomposes"),
            PartNotUnionOfBlocks { member, part } => write!(f, "part {part} of {member:?} is not the union of its blocks"),
            PartsDoNotCoverTarget { member, missing, extra } => {
                write!(f, "parts of {member:?} miss {missing:?} and add {extra:?}")
            }
            BlockNotInFamily { member, part, block } => write!(f, "block {block:?} (part {part} of {member:?}) not in the family"),
            DuplicateBlock { member, part, block } => write!(f, "block {block:?} repeated in part {part} of {member:?}"),
            ArityMismatch { member, expected, found } => write!(f, "{member:?} has {found} parts, expected {expected}"),
            ArityExceeded { limit, found } => write!(f, "arity {found} exceeds the limit {limit}"),
            WrongEntourage => write!(f, "decomposition recorded for a different entourage"),
            NotBornologous { level, pair } => write!(f, "image of level {level} pair {pair:?} is not controlled"),
            NotProper { pair } => write!(f, "preimage of a bounded set is unbounded at {pair:?}"),
            NotClose { point, pair } => write!(f, "maps not close at {point}: {pair:?}"),
            Other { message } => f.write_str(message),
        }
    }
}

/// Result of a predicate: holds iff there are no failures.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub failures: Vec<Failure>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict::default()
    }

    pub fn fails(failure: Failure) -> Self {
        Verdict { failures: vec![failure] }
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn push(&mut self, failure: Failure) {
        self.failures.push(failure);
    }

    pub fn absorb(&mut self, other: Verdict) {
        self.failures.extend(other.failures);
    }

    pub fn first(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

impl From<Option<Failure>> for Verdict {
    fn from(f: Option<Failure>) -> Self {
        Verdict { failures: f.into_iter().collect() }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return f.write_str("holds");
        }
        for (i, failure) in self.failures.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{failure}")?;
        }
        Ok(())
    }
}

/// Renders an optional family index as a trailing ` (family i)`.
struct Position(Option<usize>);

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(i) => write!(f, " (family {i})"),
            None => Ok(()),
        }
    }
}
