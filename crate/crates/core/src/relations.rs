//! Finite ground sets and the algebra of binary relations on them.
//!
//! Relations are stored as dense bit matrices up to [`DENSE_LIMIT`] points and
//! as sorted pair sets above it. Equality is always pair-set equality, so the
//! two representations are interchangeable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verdict::{Failure, Verdict};

/// A subset of the points of a space, by index.
pub type PointSet = BTreeSet<usize>;

/// Largest space stored as a dense bit matrix.
pub const DENSE_LIMIT: usize = 4096;

/// The ground set: `size` points indexed `0..size`, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr")]
pub struct Space {
    size: usize,
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct SpaceRepr {
    size: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<SpaceRepr> for Space {
    type Error = Error;

    fn try_from(r: SpaceRepr) -> Result<Self> {
        match r.labels {
            Some(labels) => Space::with_labels(labels).and_then(|s| {
                if s.size == r.size {
                    Ok(s)
                } else {
                    Err(Error::Labels(format!("{} labels for {} points", s.size, r.size)))
                }
            }),
            None => Space::new(r.size),
        }
    }
}

impl Space {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(Space { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let distinct: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
        if distinct.len() != labels.len() {
            return Err(Error::Labels("labels must be distinct".into()));
        }
        Ok(Space { size: labels.len(), labels: Some(labels) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, point: usize) -> String {
        match &self.labels {
            Some(l) => l[point].clone(),
            None => point.to_string(),
        }
    }

    pub fn all_points(&self) -> PointSet {
        (0..self.size).collect()
    }
}

#[derive(Clone, Debug)]
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { words, bits: vec![0; n * words] }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    fn mask(&self, set: &PointSet) -> Vec<u64> {
        let mut m = vec![0u64; self.words];
        for &p in set {
            m[p / 64] |= 1 << (p % 64);
        }
        m
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(BitMatrix),
    Sparse(BTreeSet<(usize, usize)>),
}

/// A binary relation on a space of `points` points.
#[derive(Clone)]
pub struct Entourage {
    points: usize,
    repr: Repr,
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { left: a, right: b })
    }
}

impl Entourage {
    fn blank(points: usize) -> Self {
        let repr = if points <= DENSE_LIMIT {
            Repr::Dense(BitMatrix::new(points))
        } else {
            Repr::Sparse(BTreeSet::new())
        };
        Entourage { points, repr }
    }

    fn put(&mut self, i: usize, j: usize) {
        match &mut self.repr {
            Repr::Dense(m) => m.set(i, j),
            Repr::Sparse(s) => {
                s.insert((i, j));
            }
        }
    }

    pub fn empty(points: usize) -> Self {
        Self::blank(points)
    }

    /// The diagonal Δ.
    pub fn diagonal(points: usize) -> Self {
        let mut e = Self::blank(points);
        for i in 0..points {
            e.put(i, i);
        }
        e
    }

    pub fn full(points: usize) -> Self {
        Self::from_fn(points, |_, _| true)
    }

    pub fn from_pairs<I>(points: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut e = Self::blank(points);
        for (i, j) in pairs {
            for p in [i, j] {
                if p >= points {
                    return Err(Error::PointOutOfRange { index: p, size: points });
                }
            }
            e.put(i, j);
        }
        Ok(e)
    }

    pub fn from_fn(points: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut e = Self::blank(points);
        for i in 0..points {
            for j in 0..points {
                if f(i, j) {
                    e.put(i, j);
                }
            }
        }
        e
    }

    /// `a × b`.
    pub fn cartesian(points: usize, a: &PointSet, b: &PointSet) -> Result<Self> {
        Self::from_pairs(points, a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))))
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    pub fn to_dense(&self) -> Self {
        let mut m = BitMatrix::new(self.points);
        for (i, j) in self.pairs() {
            m.set(i, j);
        }
        Entourage { points: self.points, repr: Repr::Dense(m) }
    }

    pub fn to_sparse(&self) -> Self {
        Entourage { points: self.points, repr: Repr::Sparse(self.pairs().into_iter().collect()) }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        if i >= self.points || j >= self.points {
            return false;
        }
        match &self.repr {
            Repr::Dense(m) => m.get(i, j),
            Repr::Sparse(s) => s.contains(&(i, j)),
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Dense(m) => m.bits.iter().map(|w| w.count_ones() as usize).sum(),
            Repr::Sparse(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match &self.repr {
            Repr::Dense(m) => (0..self.points).flat_map(|i| m.row_iter(i).map(move |j| (i, j))).collect(),
            Repr::Sparse(s) => s.iter().copied().collect(),
        }
    }

    /// `{ j | (i, j) ∈ self }` in increasing order.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        match &self.repr {
            Repr::Dense(m) => m.row_iter(i).collect(),
            Repr::Sparse(s) => s.range((i, 0)..=(i, usize::MAX)).map(|&(_, j)| j).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64, keep: impl Fn(bool, bool) -> bool) -> Result<Self> {
        check_same(self.points, other.points)?;
        match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => {
                let bits = a.bits.iter().zip(&b.bits).map(|(&x, &y)| f(x, y)).collect();
                Ok(Entourage { points: self.points, repr: Repr::Dense(BitMatrix { bits, ..a.clone() }) })
            }
            _ => {
                let all: BTreeSet<(usize, usize)> = self.pairs().into_iter().chain(other.pairs()).collect();
                let pairs = all.into_iter().filter(|&(i, j)| keep(self.contains(i, j), other.contains(i, j)));
                Entourage::from_pairs(self.points, pairs)
            }
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b, |a, b| a && b)
    }

    /// First pair of `self` missing from `other`, if any.
    pub fn first_missing_from(&self, other: &Self) -> Option<(usize, usize)> {
        self.pairs().into_iter().find(|&(i, j)| !other.contains(i, j))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        if self.points != other.points {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => a.bits.iter().zip(&b.bits).all(|(&x, &y)| x & !y == 0),
            _ => self.first_missing_from(other).is_none(),
        }
    }

    /// Relational composition `self ∘ other = {(x, z) | ∃y (x, y) ∈ self, (y, z) ∈ other}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same(self.points, other.points)?;
        match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => {
                let mut out = BitMatrix::new(self.points);
                for i in 0..self.points {
                    let base = i * out.words;
                    for j in a.row_iter(i) {
                        for (w, &word) in b.row(j).iter().enumerate() {
                            out.bits[base + w] |= word;
                        }
                    }
                }
                Ok(Entourage { points: self.points, repr: Repr::Dense(out) })
            }
            _ => {
                let mut next: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for (j, k) in other.pairs() {
                    next.entry(j).or_default().push(k);
                }
                let mut out = BTreeSet::new();
                for (i, j) in self.pairs() {
                    if let Some(ks) = next.get(&j) {
                        out.extend(ks.iter().map(|&k| (i, k)));
                    }
                }
                Ok(Entourage { points: self.points, repr: Repr::Sparse(out) }.normalized())
            }
        }
    }

    fn normalized(self) -> Self {
        if self.points <= DENSE_LIMIT && !self.is_dense() {
            self.to_dense()
        } else {
            self
        }
    }

    /// `{(y, x) | (x, y) ∈ self}`.
    pub fn inverse(&self) -> Self {
        let mut e = Self::blank(self.points);
        for (i, j) in self.pairs() {
            e.put(j, i);
        }
        e
    }

    /// `k`-fold composition; `power(0)` is the diagonal.
    pub fn power(&self, k: u64) -> Self {
        let mut result = Entourage::diagonal(self.points);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base).expect("same space");
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base).expect("same space");
            }
        }
        result
    }

    /// `E[A] = {x | (x, a) ∈ E for some a ∈ A}`.
    pub fn image(&self, a: &PointSet) -> PointSet {
        match &self.repr {
            Repr::Dense(m) => {
                let mask = m.mask(a);
                (0..self.points)
                    .filter(|&x| m.row(x).iter().zip(&mask).any(|(&r, &k)| r & k != 0))
                    .collect()
            }
            Repr::Sparse(s) => s.iter().filter(|(_, y)| a.contains(y)).map(|&(x, _)| x).collect(),
        }
    }

    /// Pairs with both coordinates in `set`.
    pub fn restrict(&self, set: &PointSet) -> Self {
        let mut e = Self::blank(self.points);
        for (i, j) in self.pairs() {
            if set.contains(&i) && set.contains(&j) {
                e.put(i, j);
            }
        }
        e
    }

    pub fn first_non_reflexive(&self) -> Option<usize> {
        (0..self.points).find(|&i| !self.contains(i, i))
    }

    pub fn is_reflexive(&self) -> bool {
        self.first_non_reflexive().is_none()
    }

    pub fn first_asymmetric(&self) -> Option<(usize, usize)> {
        self.pairs().into_iter().find(|&(i, j)| !self.contains(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetric().is_none()
    }

    /// Input check shared by operations that need `Δ ⊆ E = E⁻¹`.
    pub fn require_reflexive_symmetric(&self, what: &str) -> Result<()> {
        if let Some(p) = self.first_non_reflexive() {
            return Err(Error::Precondition(format!("{what} is not reflexive at point {p}")));
        }
        if let Some(pair) = self.first_asymmetric() {
            return Err(Error::Precondition(format!("{what} is not symmetric at {pair:?}")));
        }
        Ok(())
    }
}

impl PartialEq for Entourage {
    fn eq(&self, other: &Self) -> bool {
        if self.points != other.points {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => a.bits == b.bits,
            _ => self.pairs() == other.pairs(),
        }
    }
}

impl Eq for Entourage {}

impl fmt::Debug for Entourage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Entourage({}; {:?})", self.points, self.pairs())
    }
}

#[derive(Serialize, Deserialize)]
struct EntourageRepr {
    points: usize,
    pairs: Vec<(usize, usize)>,
}

impl Serialize for Entourage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EntourageRepr { points: self.points, pairs: self.pairs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Entourage {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EntourageRepr::deserialize(d)?;
        Entourage::from_pairs(r.points, r.pairs).map_err(serde::de::Error::custom)
    }
}

/// A nondecreasing chain of reflexive symmetric relations: a coarse structure
/// presented at finitely many scales.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FiltrationRepr")]
pub struct Filtration {
    space: Space,
    levels: Vec<Entourage>,
}

#[derive(Deserialize)]
struct FiltrationRepr {
    space: Space,
    levels: Vec<Entourage>,
}

impl TryFrom<FiltrationRepr> for Filtration {
    type Error = Error;

    fn try_from(r: FiltrationRepr) -> Result<Self> {
        Filtration::validated(r.space, r.levels)
    }
}

impl Filtration {
    /// Checks only shape (nonempty, matching sizes); see [`Filtration::check_presentation`].
    pub fn new(space: Space, levels: Vec<Entourage>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Precondition("a filtration needs at least one level".into()));
        }
        for l in &levels {
            check_same(space.size(), l.points())?;
        }
        Ok(Filtration { space, levels })
    }

    /// [`Filtration::new`] plus every presentation invariant.
    pub fn validated(space: Space, levels: Vec<Entourage>) -> Result<Self> {
        let f = Filtration::new(space, levels)?;
        let verdict = f.check_presentation();
        if verdict.is_ok() {
            Ok(f)
        } else {
            Err(Error::Precondition(format!("invalid filtration: {verdict}")))
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn points(&self) -> usize {
        self.space.size()
    }

    pub fn levels(&self) -> &[Entourage] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Entourage {
        &self.levels[i]
    }

    pub fn top(&self) -> &Entourage {
        self.levels.last().expect("nonempty")
    }

    /// Every violated invariant, with the first witness per level.
    pub fn check_presentation(&self) -> Verdict {
        let mut v = Verdict::holds();
        for (i, level) in self.levels.iter().enumerate() {
            if let Some(point) = level.first_non_reflexive() {
                v.push(Failure::NotReflexive { level: Some(i), point });
            }
            if let Some(pair) = level.first_asymmetric() {
                v.push(Failure::NotSymmetric { level: Some(i), pair });
            }
            if let Some(next) = self.levels.get(i + 1) {
                if let Some(pair) = level.first_missing_from(next) {
                    v.push(Failure::NotMonotone { level: i, pair });
                }
            }
        }
        v
    }
}
