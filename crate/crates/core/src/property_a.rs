//! Unit ℓ¹ vectors varying slowly along a relation, built from a multi-scale
//! cover by partitions of unity on the hop distance.
//!
//! Level `i` of a configuration (0-based) works at scale `n^(i+1)`: its family
//! must be `E^(n^(i+1))`-disjoint.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::covers::{boundedness_failure, disjointness_failure, PropertyCCertificate, SubsetFamily};
use crate::error::{Error, Result};
use crate::metric::{HopDistance, Hops};
use crate::rational::{self, Rational};
use crate::relations::{Entourage, PointSet};
use crate::verdict::{Failure, Verdict};

/// A finitely supported vector with exact entries; zeros are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseVector {
    #[serde(with = "rational::map")]
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn new(entries: BTreeMap<usize, Rational>) -> Self {
        SparseVector { entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn entries(&self) -> &BTreeMap<usize, Rational> {
        &self.entries
    }

    pub fn get(&self, p: usize) -> Rational {
        self.entries.get(&p).cloned().unwrap_or_else(rational::zero)
    }

    pub fn add_at(&mut self, p: usize, value: &Rational) {
        let slot = self.entries.entry(p).or_insert_with(rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&p);
        }
    }

    pub fn support(&self) -> PointSet {
        self.entries.keys().copied().collect()
    }

    pub fn norm(&self) -> Rational {
        self.entries.values().map(|v| v.abs()).sum()
    }

    /// `‖self − other‖₁`.
    pub fn distance(&self, other: &SparseVector) -> Rational {
        let keys: PointSet = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.into_iter().map(|k| (self.get(k) - other.get(k)).abs()).sum()
    }

    pub fn scaled(&self, factor: &Rational) -> SparseVector {
        SparseVector::new(self.entries.iter().map(|(&k, v)| (k, v * factor)).collect())
    }
}

/// One scale of a configuration: a family, one chosen point per member (in
/// the family's canonical member order), and a relation bounding the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub family: SubsetFamily,
    pub representatives: Vec<usize>,
    pub bound: Entourage,
}

impl Level {
    /// Picks the smallest point of each member.
    pub fn with_default_representatives(family: SubsetFamily, bound: Entourage) -> Self {
        let representatives = family.members().iter().map(|m| *m.first().expect("nonempty")).collect();
        Level { family, representatives, bound }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyAConfig {
    pub base: Entourage,
    pub n: u64,
    pub levels: Vec<Level>,
}

impl PropertyAConfig {
    pub fn points(&self) -> usize {
        self.base.points()
    }

    /// Checks disjointness at `E^(n^i)`, boundedness and the cover; shape
    /// errors (sizes, representatives, the base relation) are `Err`.
    pub fn check(&self) -> Result<Verdict> {
        let c = Construction::new(self)?;
        let mut v = Verdict::holds();
        for (i, level) in self.levels.iter().enumerate() {
            let scale = u64::try_from(c.scales[i])
                .map_err(|_| Error::Precondition(format!("scale n^{} does not fit in 64 bits", i + 1)))?;
            let separation = self.base.power(scale);
            v.absorb(disjointness_failure(&level.family, &separation, Some(i)).into());
            v.absorb(boundedness_failure(&level.family, &level.bound, Some(i)).into());
        }
        let covered: PointSet = self.levels.iter().flat_map(|l| l.family.covered()).collect();
        let points: Vec<usize> = (0..self.points()).filter(|p| !covered.contains(p)).collect();
        if !points.is_empty() {
            v.push(Failure::Uncovered { points });
        }
        Ok(v)
    }

    /// Reads a cover certificate whose `i`-th challenge level contains
    /// `E^(n^(i+1))` as a configuration, one level per family, every level
    /// bounded by the certificate's bound.
    pub fn from_property_c(cert: &PropertyCCertificate, base: Entourage, n: u64) -> Result<Self> {
        if cert.domain.as_ref().is_some_and(|d| d.len() != cert.points()) {
            return Err(Error::Precondition("certificate covers a proper subspace".into()));
        }
        let mut scale: u64 = 1;
        for i in 0..cert.families.len() {
            scale = scale
                .checked_mul(n)
                .ok_or_else(|| Error::Precondition(format!("scale n^{} does not fit in 64 bits", i + 1)))?;
            if let Some(pair) = base.power(scale).first_missing_from(cert.challenge.level(i)) {
                return Err(Error::Precondition(format!(
                    "challenge level {i} misses pair {pair:?} of the base relation to the power {scale}"
                )));
            }
        }
        let levels = cert
            .families
            .iter()
            .map(|f| Level::with_default_representatives(f.clone(), cert.bound.clone()))
            .collect();
        Ok(PropertyAConfig { base, n, levels })
    }

    fn require_valid(&self) -> Result<Construction<'_>> {
        let v = self.check()?;
        if !v.is_ok() {
            return Err(Error::Precondition(format!("configuration does not verify: {v}")));
        }
        Construction::new(self)
    }
}

/// A configuration with its hop distance computed; evaluates the
/// construction without requiring the cover invariants.
pub struct Construction<'a> {
    cfg: &'a PropertyAConfig,
    hops: HopDistance,
    /// `scales[i] = n^(i+1)`.
    scales: Vec<u128>,
}

impl<'a> Construction<'a> {
    pub fn new(cfg: &'a PropertyAConfig) -> Result<Self> {
        if cfg.n < 2 {
            return Err(Error::Precondition(format!("n must exceed 1, got {}", cfg.n)));
        }
        if cfg.levels.is_empty() {
            return Err(Error::Precondition("a configuration needs at least one level".into()));
        }
        let points = cfg.points();
        for (i, level) in cfg.levels.iter().enumerate() {
            for found in [level.family.points(), level.bound.points()] {
                if found != points {
                    return Err(Error::SpaceMismatch { left: points, right: found });
                }
            }
            if level.representatives.len() != level.family.len() {
                return Err(Error::Precondition(format!(
                    "level {i} has {} representatives for {} members",
                    level.representatives.len(),
                    level.family.len()
                )));
            }
            for (m, &r) in level.family.members().iter().zip(&level.representatives) {
                if !m.contains(&r) {
                    return Err(Error::Precondition(format!("level {i}: representative {r} is outside its member")));
                }
            }
        }
        let hops = HopDistance::new(&cfg.base)?;
        let n = u128::from(cfg.n);
        let scales = (1..=cfg.levels.len() as u32)
            .map(|e| n.checked_pow(e).ok_or_else(|| Error::Precondition("n^k overflows".into())))
            .collect::<Result<_>>()?;
        Ok(Construction { cfg, hops, scales })
    }

    pub fn hops(&self) -> &HopDistance {
        &self.hops
    }

    pub fn depth(&self) -> usize {
        self.scales.len()
    }

    fn scale_quarter(&self, level: usize) -> Rational {
        Rational::new(BigInt::from(self.scales[level]), BigInt::from(4))
    }

    /// `D(x, U) < n^i / 4`, tested as `4D < n^i`.
    fn near(&self, level: usize, d: Hops) -> bool {
        d.finite().is_some_and(|d| 4 * u128::from(d) < self.scales[level])
    }

    /// `max(0, n^i/4 − D(x, U))` for member `member` of level `level`.
    pub fn phi(&self, level: usize, member: usize, x: usize) -> Rational {
        let u = &self.cfg.levels[level].family.members()[member];
        match self.hops.set_distance(x, u) {
            d if self.near(level, d) => {
                self.scale_quarter(level) - rational::int(d.finite().expect("finite") as i64)
            }
            _ => rational::zero(),
        }
    }

    /// Members of level `level` whose `phi` at `x` is nonzero.
    pub fn nonzero_members(&self, level: usize, x: usize) -> Vec<usize> {
        let family = &self.cfg.levels[level].family;
        (0..family.len()).filter(|&j| self.near(level, self.hops.set_distance(x, &family.members()[j]))).collect()
    }

    pub fn capital_phi(&self, level: usize, x: usize) -> Rational {
        let family = &self.cfg.levels[level].family;
        (0..family.len()).map(|j| self.phi(level, j, x)).sum()
    }

    /// Representatives of the members within a quarter scale of `x`.
    pub fn near_representatives(&self, level: usize, x: usize) -> PointSet {
        let reps = &self.cfg.levels[level].representatives;
        self.nonzero_members(level, x).into_iter().map(|j| reps[j]).collect()
    }

    /// `b_x = Σᵢ n^(k−i+1) Φᵢ(x) χ_{Dⁱ_x}` with levels numbered from 1.
    pub fn b(&self, x: usize) -> SparseVector {
        let k = self.depth();
        let mut out = SparseVector::default();
        for level in 0..k {
            let weight = Rational::from_integer(BigInt::from(self.scales[k - level - 1]));
            let value = weight * self.capital_phi(level, x);
            if value.is_zero() {
                continue;
            }
            for r in self.near_representatives(level, x) {
                out.add_at(r, &value);
            }
        }
        out
    }

    /// `n(n^k − 1)/(n − 1)`.
    pub fn lipschitz_constant(&self) -> Rational {
        let n = BigInt::from(self.cfg.n);
        let nk = BigInt::from(self.scales[self.depth() - 1]);
        Rational::new(&n * (nk - 1), n - 1)
    }

    /// `n^(k+1)/4`.
    pub fn norm_lower_bound(&self) -> Rational {
        let nk = BigInt::from(self.scales[self.depth() - 1]);
        Rational::new(nk * BigInt::from(self.cfg.n), BigInt::from(4))
    }

    /// Smallest `t ≤ n^k` such that `(s, x) ∈ (⋃ Sᵢ)∘E^t` for every `x` and
    /// every `s` in `supports[x]`.
    fn support_power(&self, supports: &[PointSet]) -> Option<u64> {
        let union = self.bound_union();
        let mut needed = 0u64;
        for (x, support) in supports.iter().enumerate() {
            for &s in support {
                let reach: PointSet = union.successors(s).into_iter().collect();
                needed = needed.max(self.hops.set_distance(x, &reach).finite()?);
            }
        }
        let cap = u64::try_from(self.scales[self.depth() - 1]).unwrap_or(u64::MAX);
        (needed <= cap).then_some(needed)
    }

    fn bound_union(&self) -> Entourage {
        self.cfg
            .levels
            .iter()
            .try_fold(Entourage::empty(self.cfg.points()), |acc, l| acc.union(&l.bound))
            .expect("levels share the space")
    }

    fn support_relation(&self, t: u64) -> Entourage {
        self.bound_union().compose(&self.cfg.base.power(t)).expect("same space")
    }
}

/// `b_x` for a configuration satisfying all its invariants.
pub fn build_b(cfg: &PropertyAConfig, x: usize) -> Result<SparseVector> {
    let c = cfg.require_valid()?;
    if x >= cfg.points() {
        return Err(Error::PointOutOfRange { index: x, size: cfg.points() });
    }
    Ok(c.b(x))
}

/// Unit vectors `a_x`, a relation `S` with `supp a_x ⊆ S[x]`, and the
/// variation bound guaranteed along the base relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyAWitness {
    pub a: Vec<SparseVector>,
    pub support_bound: Entourage,
    #[serde(with = "rational")]
    pub epsilon_bound: Rational,
}

/// Normalises `b_x`; requires `8/(n − 1) < epsilon`.
pub fn build_witness(cfg: &PropertyAConfig, epsilon: &Rational) -> Result<PropertyAWitness> {
    if cfg.n < 2 {
        return Err(Error::Precondition(format!("n must exceed 1, got {}", cfg.n)));
    }
    let epsilon_bound = rational::ratio(8, cfg.n as i64 - 1);
    if epsilon_bound >= *epsilon {
        return Err(Error::Precondition(format!(
            "8/(n-1) = {} is not below epsilon = {}",
            rational::format(&epsilon_bound),
            rational::format(epsilon)
        )));
    }
    let c = cfg.require_valid()?;
    let mut a = Vec::with_capacity(cfg.points());
    for x in 0..cfg.points() {
        let b = c.b(x);
        let norm = b.norm();
        if norm.is_zero() {
            return Err(Error::Precondition(format!("b vanishes at point {x}")));
        }
        a.push(b.scaled(&norm.recip()));
    }
    let supports: Vec<PointSet> = a.iter().map(SparseVector::support).collect();
    let t = c
        .support_power(&supports)
        .ok_or_else(|| Error::Precondition("no support relation of the expected shape".into()))?;
    Ok(PropertyAWitness { a, support_bound: c.support_relation(t), epsilon_bound })
}

/// Checks `‖a_x‖₁ = 1`, `‖a_x − a_y‖₁ ≤ epsilon_bound` on `e`, and
/// `supp a_x ⊆ S[x]`.
pub fn verify_witness(w: &PropertyAWitness, e: &Entourage) -> Verdict {
    let points = w.a.len();
    let mut v = Verdict::holds();
    for found in [e.points(), w.support_bound.points()] {
        if found != points {
            v.push(Failure::SpaceMismatch { expected: points, found });
        }
    }
    if !v.is_ok() {
        return v;
    }
    for (point, ax) in w.a.iter().enumerate() {
        let norm = ax.norm();
        if norm != rational::one() {
            v.push(Failure::NormNotOne { point, norm });
        }
    }
    for (x, y) in e.pairs() {
        let variation = w.a[x].distance(&w.a[y]);
        if variation > w.epsilon_bound {
            v.push(Failure::VariationTooLarge { pair: (x, y), variation, bound: w.epsilon_bound.clone() });
            break;
        }
    }
    for (point, ax) in w.a.iter().enumerate() {
        if let Some(&support) = ax.entries().keys().find(|&&s| !w.support_bound.contains(s, point)) {
            v.push(Failure::SupportEscapes { point, support });
        }
    }
    v
}

/// Checks the norm lower bound, the Lipschitz bound on every pair at finite
/// hop distance, and that some `(⋃ Sᵢ)∘E^t` with `t ≤ n^k` controls supports.
pub fn verify_b_bounds(cfg: &PropertyAConfig) -> Result<Verdict> {
    let c = Construction::new(cfg)?;
    let bs: Vec<SparseVector> = (0..cfg.points()).map(|x| c.b(x)).collect();
    let mut v = Verdict::holds();
    let lower = c.norm_lower_bound();
    for (point, b) in bs.iter().enumerate() {
        let norm = b.norm();
        if norm < lower {
            v.push(Failure::NormBelowBound { point, norm, bound: lower.clone() });
        }
    }
    let lipschitz = c.lipschitz_constant();
    'pairs: for z in 0..bs.len() {
        for w in z + 1..bs.len() {
            if let Hops::Finite(d) = c.hops.get(z, w) {
                let difference = bs[z].distance(&bs[w]);
                let bound = &lipschitz * rational::int(d as i64);
                if difference > bound {
                    v.push(Failure::LipschitzViolated { pair: (z, w), difference, bound });
                    break 'pairs;
                }
            }
        }
    }
    let supports: Vec<PointSet> = bs.iter().map(SparseVector::support).collect();
    if c.support_power(&supports).is_none() {
        let max_power = u64::try_from(c.scales[c.depth() - 1]).unwrap_or(u64::MAX);
        v.push(Failure::NoSupportBound { max_power });
    }
    Ok(v)
}
