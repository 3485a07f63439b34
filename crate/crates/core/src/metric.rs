//! Finite metrics as relation filtrations, and the hop distance of a relation.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Add;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::relations::{Entourage, Filtration, PointSet, Space};

/// A finite metric with exact rational distances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MetricRepr")]
pub struct FiniteMetric {
    space: Space,
    #[serde(with = "rational::matrix")]
    dist: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct MetricRepr {
    space: Space,
    #[serde(with = "rational::matrix")]
    dist: Vec<Vec<Rational>>,
}

impl TryFrom<MetricRepr> for FiniteMetric {
    type Error = Error;

    fn try_from(r: MetricRepr) -> Result<Self> {
        FiniteMetric::new(r.space, r.dist)
    }
}

impl FiniteMetric {
    /// Validates all metric axioms, reporting the first violation.
    pub fn new(space: Space, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = space.size();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::Metric(format!("distance matrix must be {n}×{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let d = &dist[i][j];
                if d.is_negative() {
                    return Err(Error::Metric(format!("negative distance at ({i},{j})")));
                }
                if (i == j) != d.is_zero() {
                    return Err(Error::Metric(format!("separation fails at ({i},{j})")));
                }
                if *d != dist[j][i] {
                    return Err(Error::Metric(format!("asymmetric at ({i},{j})")));
                }
                for k in 0..n {
                    if *d > &dist[i][k] + &dist[k][j] {
                        return Err(Error::Metric(format!("triangle inequality fails at ({i},{k},{j})")));
                    }
                }
            }
        }
        Ok(FiniteMetric { space, dist })
    }

    /// The path on `n` points with unit steps.
    pub fn path(n: usize) -> Result<Self> {
        let dist = (0..n)
            .map(|i| (0..n).map(|j| rational::int(i.abs_diff(j) as i64)).collect())
            .collect();
        FiniteMetric::new(Space::new(n)?, dist)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().flatten().max().cloned().unwrap_or_else(rational::zero)
    }

    /// One level per radius, in the given order.
    pub fn filtration(&self, radii: &[Rational]) -> Result<Filtration> {
        let levels = radii.iter().map(|r| entourage_at_radius(self, r)).collect();
        Filtration::validated(self.space.clone(), levels)
    }
}

/// `{(i, j) | d(i, j) ≤ r}`.
pub fn entourage_at_radius(m: &FiniteMetric, r: &Rational) -> Entourage {
    Entourage::from_fn(m.space.size(), |i, j| m.dist[i][j] <= *r)
}

/// The largest distance realised by a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radius {
    pub value: Rational,
    /// Set when the relation was empty and the value defaulted to zero.
    pub degenerate: bool,
}

pub fn radius_of_entourage(m: &FiniteMetric, e: &Entourage) -> Result<Radius> {
    if e.points() != m.space.size() {
        return Err(Error::SpaceMismatch { left: m.space.size(), right: e.points() });
    }
    let value = e.pairs().into_iter().map(|(i, j)| &m.dist[i][j]).max().cloned();
    Ok(match value {
        Some(value) => Radius { value, degenerate: false },
        None => Radius { value: rational::zero(), degenerate: true },
    })
}

/// A value in ℕ ∪ {∞}; `Infinite` orders above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hops {
    Finite(u64),
    Infinite,
}

impl Hops {
    pub fn finite(self) -> Option<u64> {
        match self {
            Hops::Finite(k) => Some(k),
            Hops::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Hops::Finite(_))
    }
}

impl Add for Hops {
    type Output = Hops;

    fn add(self, rhs: Hops) -> Hops {
        match (self, rhs) {
            (Hops::Finite(a), Hops::Finite(b)) => a.checked_add(b).map_or(Hops::Infinite, Hops::Finite),
            _ => Hops::Infinite,
        }
    }
}

impl fmt::Display for Hops {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hops::Finite(k) => write!(f, "{k}"),
            Hops::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Hops {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Hops::Finite(k) => s.serialize_u64(*k),
            Hops::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Hops {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(k) => Ok(Hops::Finite(k)),
            Raw::Text(t) if t == "inf" => Ok(Hops::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a count or \"inf\", got {t:?}"))),
        }
    }
}

/// `D(x, y) = min{k | (x, y) ∈ E^k}` for a reflexive symmetric `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopDistance {
    base: Entourage,
    table: Vec<Vec<Hops>>,
}

impl HopDistance {
    pub fn new(base: &Entourage) -> Result<Self> {
        base.require_reflexive_symmetric("hop distance base")?;
        let n = base.points();
        let adjacency: Vec<Vec<usize>> = (0..n).map(|i| base.successors(i)).collect();
        let table = (0..n)
            .map(|source| {
                let mut row = vec![Hops::Infinite; n];
                row[source] = Hops::Finite(0);
                let mut queue = VecDeque::from([(source, 0u64)]);
                while let Some((p, d)) = queue.pop_front() {
                    for &q in &adjacency[p] {
                        if row[q] == Hops::Infinite {
                            row[q] = Hops::Finite(d + 1);
                            queue.push_back((q, d + 1));
                        }
                    }
                }
                row
            })
            .collect();
        Ok(HopDistance { base: base.clone(), table })
    }

    pub fn base(&self) -> &Entourage {
        &self.base
    }

    pub fn points(&self) -> usize {
        self.table.len()
    }

    pub fn get(&self, x: usize, y: usize) -> Hops {
        self.table[x][y]
    }

    /// `min_{a ∈ A} D(x, a)`; the empty set is at distance ∞.
    pub fn set_distance(&self, x: usize, a: &PointSet) -> Hops {
        a.iter().map(|&p| self.table[x][p]).min().unwrap_or(Hops::Infinite)
    }
}
