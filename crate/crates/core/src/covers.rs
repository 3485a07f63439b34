//! Families of subsets, the disjointness and boundedness predicates, saturated
//! unions, and cover certificates together with the procedures that search
//! for and combine them.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relations::{Entourage, Filtration, PointSet, Space};
use crate::verdict::{Failure, Verdict};

/// A family of distinct nonempty subsets, kept in canonical order (by
/// smallest element, then lexicographically).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr")]
pub struct SubsetFamily {
    points: usize,
    members: Vec<PointSet>,
}

#[derive(Deserialize)]
struct FamilyRepr {
    points: usize,
    members: Vec<PointSet>,
}

impl TryFrom<FamilyRepr> for SubsetFamily {
    type Error = Error;

    fn try_from(r: FamilyRepr) -> Result<Self> {
        SubsetFamily::new(r.points, r.members)
    }
}

fn check_members(points: usize, members: &[PointSet]) -> Result<()> {
    for m in members {
        if let Some(&p) = m.iter().next_back().filter(|&&p| p >= points) {
            return Err(Error::PointOutOfRange { index: p, size: points });
        }
    }
    Ok(())
}

impl SubsetFamily {
    /// Rejects empty or repeated members.
    pub fn new(points: usize, members: Vec<PointSet>) -> Result<Self> {
        check_members(points, &members)?;
        if members.iter().any(BTreeSet::is_empty) {
            return Err(Error::Family("members must be nonempty".into()));
        }
        let sorted: BTreeSet<PointSet> = members.iter().cloned().collect();
        if sorted.len() != members.len() {
            return Err(Error::Family("members must be distinct".into()));
        }
        Ok(SubsetFamily { points, members: sorted.into_iter().collect() })
    }

    /// Drops empty and repeated members instead of rejecting them.
    pub fn normalized<I: IntoIterator<Item = PointSet>>(points: usize, members: I) -> Result<Self> {
        let members: Vec<PointSet> = members.into_iter().filter(|m| !m.is_empty()).collect();
        check_members(points, &members)?;
        let sorted: BTreeSet<PointSet> = members.into_iter().collect();
        Ok(SubsetFamily { points, members: sorted.into_iter().collect() })
    }

    pub fn empty(points: usize) -> Self {
        SubsetFamily { points, members: Vec::new() }
    }

    /// `{{p} | p ∈ set}`.
    pub fn singletons(points: usize, set: &PointSet) -> Result<Self> {
        SubsetFamily::normalized(points, set.iter().map(|&p| PointSet::from([p])))
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, member: &PointSet) -> bool {
        self.members.binary_search(member).is_ok()
    }

    /// Union of all members.
    pub fn covered(&self) -> PointSet {
        self.members.iter().flatten().copied().collect()
    }

    /// Members of both families, deduplicated.
    pub fn merge(&self, other: &SubsetFamily) -> Result<Self> {
        check_same(self.points, other.points)?;
        SubsetFamily::normalized(self.points, self.members.iter().chain(&other.members).cloned())
    }

    /// `{U ∩ set}` without empty intersections.
    pub fn restrict(&self, set: &PointSet) -> Self {
        let members = self.members.iter().map(|m| m & set);
        SubsetFamily::normalized(self.points, members).expect("subsets stay in range")
    }
}

fn check_same(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { left: a, right: b })
    }
}

/// `Δ_𝒰 = ⋃ U × U`.
pub fn family_diagonal(u: &SubsetFamily) -> Entourage {
    let pairs = u.members.iter().flat_map(|m| m.iter().flat_map(move |&x| m.iter().map(move |&y| (x, y))));
    Entourage::from_pairs(u.points, pairs).expect("members are in range")
}

/// The lexicographically first pair of `e` joining two distinct members,
/// with those members (smallest indices first).
fn disjointness_witness(u: &SubsetFamily, e: &Entourage) -> Option<(usize, usize, (usize, usize))> {
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); u.points];
    for (i, m) in u.members.iter().enumerate() {
        for &p in m {
            owners[p].push(i);
        }
    }
    for (x, y) in e.pairs() {
        if x >= u.points || y >= u.points {
            continue;
        }
        for &a in &owners[x] {
            if let Some(&b) = owners[y].iter().find(|&&b| b != a) {
                return Some((a, b, (x, y)));
            }
        }
    }
    None
}

pub(crate) fn disjointness_failure(u: &SubsetFamily, e: &Entourage, family: Option<usize>) -> Option<Failure> {
    disjointness_witness(u, e).map(|(a, b, pair)| Failure::NotDisjoint {
        family,
        first: u.members[a].clone(),
        second: u.members[b].clone(),
        pair,
    })
}

/// Holds iff `(A × B) ∩ e = ∅` for all distinct members `A`, `B`.
pub fn is_disjoint(u: &SubsetFamily, e: &Entourage) -> Verdict {
    if u.points != e.points() {
        return Verdict::fails(Failure::SpaceMismatch { expected: u.points, found: e.points() });
    }
    disjointness_failure(u, e, None).into()
}

pub(crate) fn boundedness_failure(u: &SubsetFamily, k: &Entourage, family: Option<usize>) -> Option<Failure> {
    family_diagonal(u).first_missing_from(k).map(|pair| Failure::NotBounded { family, pair })
}

/// Holds iff `Δ_𝒰 ⊆ k`.
pub fn is_bounded_by(u: &SubsetFamily, k: &Entourage) -> Verdict {
    if u.points != k.points() {
        return Verdict::fails(Failure::SpaceMismatch { expected: u.points, found: k.points() });
    }
    boundedness_failure(u, k, None).into()
}

fn uncovered(families: &[SubsetFamily], domain: &PointSet) -> Option<Failure> {
    let covered: PointSet = families.iter().flat_map(SubsetFamily::covered).collect();
    let points: Vec<usize> = domain.difference(&covered).copied().collect();
    (!points.is_empty()).then_some(Failure::Uncovered { points })
}

/// Holds iff every one of `points` points lies in some member of some family.
pub fn is_cover(families: &[SubsetFamily], points: usize) -> Verdict {
    if let Some(f) = families.iter().find(|f| f.points != points) {
        return Verdict::fails(Failure::SpaceMismatch { expected: points, found: f.points });
    }
    uncovered(families, &(0..points).collect()).into()
}

/// `V` together with every member `U` such that `l ∩ (U × V) ≠ ∅`.
pub fn saturated_neighborhood(v: &PointSet, u: &SubsetFamily, l: &Entourage) -> PointSet {
    let reach = l.image(v);
    let mut out = v.clone();
    for m in &u.members {
        if !m.is_disjoint(&reach) {
            out.extend(m);
        }
    }
    out
}

/// `{N_l(V, 𝒰) | V ∈ 𝒱}` together with the members of `𝒰` touched by no `V`.
pub fn saturated_union(v: &SubsetFamily, u: &SubsetFamily, l: &Entourage) -> Result<SubsetFamily> {
    check_same(v.points, u.points)?;
    check_same(v.points, l.points())?;
    let reach = l.image(&v.covered());
    let merged = v.members.iter().map(|m| saturated_neighborhood(m, u, l));
    let untouched = u.members.iter().filter(|m| m.is_disjoint(&reach)).cloned();
    SubsetFamily::normalized(v.points, merged.chain(untouched))
}

/// `l ∪ (l∘Δ_𝒰∘l) ∪ (l∘Δ_𝒰∘l∘Δ_𝒰∘l)`: the separation a family must have
/// from `𝒰` for the saturated union to stay `l`-disjoint.
pub fn saturation_challenge(l: &Entourage, u: &SubsetFamily) -> Result<Entourage> {
    check_same(l.points(), u.points)?;
    l.require_reflexive_symmetric("saturation entourage")?;
    let d = family_diagonal(u);
    let once = l.compose(&d)?.compose(l)?;
    let twice = once.compose(&d)?.compose(l)?;
    l.union(&once)?.union(&twice)
}

/// A relation containing `Δ` of `saturated_union(v, u, l)` whenever `v` is
/// `saturation_challenge(l, u)`-disjoint: `Δ_𝒰 ∪ D⁻¹∘D` with
/// `D = Δ_𝒱 ∪ Δ_𝒱∘l∘Δ_𝒰`.
pub fn saturation_bound(v: &SubsetFamily, u: &SubsetFamily, l: &Entourage) -> Result<Entourage> {
    let dv = family_diagonal(v);
    let du = family_diagonal(u);
    let d = dv.union(&dv.compose(l)?.compose(&du)?)?;
    du.union(&d.inverse().compose(&d)?)
}

/// Answers a challenge `L₁ ⊆ … ⊆ L_m` with families `𝒰¹, …, 𝒰ⁿ` (`n ≤ m`)
/// covering `domain`, the `i`-th `Lᵢ`-disjoint, all bounded by `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCCertificate {
    pub challenge: Filtration,
    pub families: Vec<SubsetFamily>,
    pub bound: Entourage,
    /// The subspace being covered; the whole space when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<PointSet>,
}

fn space_failures(points: usize, families: &[SubsetFamily], relations: &[&Entourage]) -> Verdict {
    let mut v = Verdict::holds();
    for found in families.iter().map(|f| f.points).chain(relations.iter().map(|e| e.points())) {
        if found != points {
            v.push(Failure::SpaceMismatch { expected: points, found });
        }
    }
    v
}

impl PropertyCCertificate {
    pub fn points(&self) -> usize {
        self.challenge.points()
    }

    pub fn domain(&self) -> PointSet {
        self.domain.clone().unwrap_or_else(|| (0..self.points()).collect())
    }

    pub fn verify(&self) -> Verdict {
        let n = self.points();
        let mut v = space_failures(n, &self.families, &[&self.bound]);
        if !v.is_ok() {
            return v;
        }
        let levels = self.challenge.levels();
        if self.families.len() > levels.len() {
            v.push(Failure::TooManyFamilies { families: self.families.len(), levels: levels.len() });
        }
        if let Some(f) = uncovered(&self.families, &self.domain()) {
            v.push(f);
        }
        for (i, (family, level)) in self.families.iter().zip(levels).enumerate() {
            v.absorb(disjointness_failure(family, level, Some(i)).into());
            v.absorb(boundedness_failure(family, &self.bound, Some(i)).into());
        }
        v
    }
}

/// Families `𝒰⁰, …, 𝒰ⁿ` covering `domain`, each `scale`-disjoint and
/// bounded by `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCertificate {
    pub scale: Entourage,
    pub families: Vec<SubsetFamily>,
    pub bound: Entourage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<PointSet>,
}

impl DimensionCertificate {
    pub fn points(&self) -> usize {
        self.scale.points()
    }

    pub fn domain(&self) -> PointSet {
        self.domain.clone().unwrap_or_else(|| (0..self.points()).collect())
    }

    pub fn verify(&self) -> Verdict {
        let mut v = space_failures(self.points(), &self.families, &[&self.bound]);
        if !v.is_ok() {
            return v;
        }
        if let Some(f) = uncovered(&self.families, &self.domain()) {
            v.push(f);
        }
        for (i, family) in self.families.iter().enumerate() {
            v.absorb(disjointness_failure(family, &self.scale, Some(i)).into());
            v.absorb(boundedness_failure(family, &self.bound, Some(i)).into());
        }
        v
    }

    /// The same cover read as an answer to the constant challenge at `scale`.
    pub fn to_property_c(&self) -> Result<PropertyCCertificate> {
        let levels = vec![self.scale.clone(); self.families.len().max(1)];
        Ok(PropertyCCertificate {
            challenge: Filtration::validated(Space::new(self.points())?, levels)?,
            families: self.families.clone(),
            bound: self.bound.clone(),
            domain: self.domain.clone(),
        })
    }

    fn from_property_c(scale: &Entourage, c: PropertyCCertificate) -> Self {
        DimensionCertificate { scale: scale.clone(), families: c.families, bound: c.bound, domain: c.domain }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exact,
    Greedy,
}

impl FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(SearchMode::Exact),
            "greedy" => Ok(SearchMode::Greedy),
            other => Err(format!("unknown search mode {other:?}; expected exact or greedy")),
        }
    }
}

/// Default cap on the number of points exact search will accept.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(DimensionCertificate),
    /// Exact search exhausted every assignment; `explored` counts search nodes.
    Refuted { explored: u64 },
    /// Greedy search got stuck; nothing is implied.
    Unknown,
}

struct Search<'a> {
    scale: &'a Entourage,
    bound: &'a Entourage,
    order: Vec<usize>,
    slots: usize,
    /// `blocks[f]` lists the blocks of family `f`, as point lists.
    blocks: Vec<Vec<Vec<usize>>>,
    explored: u64,
}

impl Search<'_> {
    fn separated(&self, p: usize, q: usize) -> bool {
        !self.scale.contains(p, q) && !self.scale.contains(q, p)
    }

    fn fits(&self, p: usize, family: usize, block: Option<usize>) -> bool {
        self.blocks[family].iter().enumerate().all(|(b, members)| {
            if Some(b) == block {
                members.iter().all(|&q| self.bound.contains(p, q) && self.bound.contains(q, p))
            } else {
                members.iter().all(|&q| self.separated(p, q))
            }
        })
    }

    /// Moves for the next point in canonical order: existing blocks first,
    /// then a new block; a new family only opens after all earlier ones.
    fn moves(&self, p: usize) -> Vec<(usize, Option<usize>)> {
        let mut out = Vec::new();
        if !self.bound.contains(p, p) {
            return out;
        }
        for f in 0..self.slots {
            let opened = !self.blocks[f].is_empty();
            for b in 0..self.blocks[f].len() {
                if self.fits(p, f, Some(b)) {
                    out.push((f, Some(b)));
                }
            }
            if self.fits(p, f, None) {
                out.push((f, None));
            }
            if !opened {
                break;
            }
        }
        out
    }

    fn apply(&mut self, p: usize, (f, b): (usize, Option<usize>)) {
        match b {
            Some(b) => self.blocks[f][b].push(p),
            None => self.blocks[f].push(vec![p]),
        }
    }

    fn undo(&mut self, (f, b): (usize, Option<usize>)) {
        match b {
            Some(b) => {
                self.blocks[f][b].pop();
            }
            None => {
                self.blocks[f].pop();
            }
        }
    }

    fn exact(&mut self, depth: usize) -> bool {
        self.explored += 1;
        let Some(&p) = self.order.get(depth) else {
            return true;
        };
        for m in self.moves(p) {
            self.apply(p, m);
            if self.exact(depth + 1) {
                return true;
            }
            self.undo(m);
        }
        false
    }

    fn greedy(&mut self) -> bool {
        for i in 0..self.order.len() {
            let p = self.order[i];
            match self.moves(p).first() {
                Some(&m) => self.apply(p, m),
                None => return false,
            }
        }
        true
    }

    fn families(&self, points: usize) -> Vec<SubsetFamily> {
        self.blocks
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| {
                let members = f.iter().map(|b| b.iter().copied().collect()).collect();
                SubsetFamily::new(points, members).expect("blocks are disjoint and nonempty")
            })
            .collect()
    }
}

/// Decides whether `domain` (default: every point) has a cover by `n + 1`
/// `scale`-disjoint families bounded by `bound`.
pub fn search_dimension_certificate(
    scale: &Entourage,
    bound: &Entourage,
    n: usize,
    mode: SearchMode,
    limit: usize,
    domain: Option<&PointSet>,
) -> Result<SearchOutcome> {
    check_same(scale.points(), bound.points())?;
    scale.require_reflexive_symmetric("scale")?;
    bound.require_reflexive_symmetric("bound")?;
    let points = scale.points();
    let order: Vec<usize> = match domain {
        Some(d) => {
            check_members(points, std::slice::from_ref(d))?;
            d.iter().copied().collect()
        }
        None => (0..points).collect(),
    };
    if mode == SearchMode::Exact && order.len() > limit {
        return Err(Error::SearchTooLarge { size: order.len(), limit });
    }
    let mut search = Search { scale, bound, order, slots: n + 1, blocks: vec![Vec::new(); n + 1], explored: 0 };
    let found = match mode {
        SearchMode::Exact => search.exact(0),
        SearchMode::Greedy => search.greedy(),
    };
    if !found {
        return Ok(match mode {
            SearchMode::Exact => SearchOutcome::Refuted { explored: search.explored },
            SearchMode::Greedy => SearchOutcome::Unknown,
        });
    }
    Ok(SearchOutcome::Found(DimensionCertificate {
        scale: scale.clone(),
        families: search.families(points),
        bound: bound.clone(),
        domain: domain.cloned(),
    }))
}

/// Sweeps points in index order, placing each in the first family and block
/// that keeps the `i`-th family `Lᵢ`-disjoint and everything bounded.
pub fn greedy_property_c(
    challenge: &Filtration,
    bound: &Entourage,
    domain: Option<&PointSet>,
) -> Result<Option<PropertyCCertificate>> {
    let points = challenge.points();
    check_same(points, bound.points())?;
    let order: Vec<usize> = domain.map_or_else(|| (0..points).collect(), |d| d.iter().copied().collect());
    let levels = challenge.levels();
    let mut blocks: Vec<Vec<Vec<usize>>> = vec![Vec::new(); levels.len()];
    'points: for &p in &order {
        if !bound.contains(p, p) {
            return Ok(None);
        }
        for (f, level) in levels.iter().enumerate() {
            let apart = |q: usize| !level.contains(p, q) && !level.contains(q, p);
            let close = |q: usize| bound.contains(p, q) && bound.contains(q, p);
            let choice = (0..=blocks[f].len()).find(|&b| {
                blocks[f].iter().enumerate().all(|(c, members)| {
                    if c == b {
                        members.iter().all(|&q| close(q))
                    } else {
                        members.iter().all(|&q| apart(q))
                    }
                })
            });
            if let Some(b) = choice {
                if b == blocks[f].len() {
                    blocks[f].push(vec![p]);
                } else {
                    blocks[f][b].push(p);
                }
                continue 'points;
            }
        }
        return Ok(None);
    }
    let mut families: Vec<SubsetFamily> = blocks
        .iter()
        .map(|f| SubsetFamily::new(points, f.iter().map(|b| b.iter().copied().collect()).collect()))
        .collect::<Result<_>>()?;
    while families.last().is_some_and(SubsetFamily::is_empty) {
        families.pop();
    }
    Ok(Some(PropertyCCertificate {
        challenge: challenge.clone(),
        families,
        bound: bound.clone(),
        domain: domain.cloned(),
    }))
}

fn require_valid(c: &PropertyCCertificate, what: &str) -> Result<()> {
    let v = c.verify();
    if v.is_ok() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} does not verify: {v}")))
    }
}

fn all_members(certs: &[&PropertyCCertificate], points: usize) -> Result<SubsetFamily> {
    SubsetFamily::normalized(points, certs.iter().flat_map(|c| c.families.iter().flat_map(|f| f.members.clone())))
}

fn is_vacuous(c: &PropertyCCertificate) -> bool {
    c.families.iter().all(SubsetFamily::is_empty) && c.domain().is_empty()
}

/// Folds `𝒲ᵢ = 𝒱ᵢ ∪_{Lᵢ} 𝒰ᵢ` level by level and collects the bound.
fn saturate_levels(
    challenge: &Filtration,
    outer: &[SubsetFamily],
    inner: &[SubsetFamily],
    domain: PointSet,
) -> Result<PropertyCCertificate> {
    let points = challenge.points();
    let empty = SubsetFamily::empty(points);
    let mut families = Vec::new();
    let mut bound = Entourage::empty(points);
    for i in 0..outer.len().max(inner.len()) {
        let v = outer.get(i).unwrap_or(&empty);
        let u = inner.get(i).unwrap_or(&empty);
        let l = challenge.level(i);
        families.push(saturated_union(v, u, l)?);
        bound = bound.union(&saturation_bound(v, u, l)?)?;
    }
    let out = PropertyCCertificate { challenge: challenge.clone(), families, bound, domain: Some(domain) };
    require_valid(&out, "combined certificate")?;
    Ok(out)
}

fn separation_check(outer: &[SubsetFamily], challenge: &Filtration, inner: &SubsetFamily, what: &str) -> Result<()> {
    for (i, v) in outer.iter().enumerate() {
        let k = saturation_challenge(challenge.level(i), inner)?;
        if let Some(f) = disjointness_failure(v, &k, Some(i)) {
            return Err(Error::Precondition(format!("{what} is not separated enough from the other cover: {f}")));
        }
    }
    Ok(())
}

/// Covers `X₁ ∪ X₂` from certificates on each piece. `b`'s `i`-th family must
/// be disjoint at `saturation_challenge(Lᵢ, 𝒰)`, with `𝒰` every member of `a`.
pub fn combine_covers_finite_union(a: &PropertyCCertificate, b: &PropertyCCertificate) -> Result<PropertyCCertificate> {
    if a.challenge != b.challenge {
        return Err(Error::Precondition("certificates answer different challenges".into()));
    }
    require_valid(a, "first certificate")?;
    require_valid(b, "second certificate")?;
    if is_vacuous(b) {
        return Ok(a.clone());
    }
    if is_vacuous(a) {
        return Ok(b.clone());
    }
    let u = all_members(&[a], a.points())?;
    separation_check(&b.families, &b.challenge, &u, "second certificate")?;
    let domain = &a.domain() | &b.domain();
    saturate_levels(&a.challenge, &b.families, &a.families, domain)
}

/// Covers `Y ∪ ⋃ X_α` from uniform certificates on the pieces `X_α` and a
/// core certificate on `Y`. The pieces minus `Y` must be `separation`-disjoint,
/// `separation` must contain `saturation_challenge(L_m, 𝒰)`, and the core's
/// `i`-th family must be `saturation_challenge(Lᵢ, 𝒰)`-disjoint, where `𝒰`
/// collects every piece member.
pub fn combine_covers_infinite_union(
    pieces: &[PropertyCCertificate],
    core: &PropertyCCertificate,
    separation: &Entourage,
) -> Result<PropertyCCertificate> {
    let first = pieces.first().ok_or_else(|| Error::Precondition("no pieces".into()))?;
    for (i, p) in pieces.iter().enumerate() {
        if p.challenge != first.challenge || p.bound != first.bound {
            return Err(Error::Precondition(format!("piece {i} does not share the challenge and bound of piece 0")));
        }
        require_valid(p, &format!("piece {i}"))?;
    }
    if core.challenge != first.challenge {
        return Err(Error::Precondition("core certificate answers a different challenge".into()));
    }
    require_valid(core, "core certificate")?;
    if pieces.len() == 1 && is_vacuous(core) {
        return Ok(first.clone());
    }
    let points = first.points();
    check_same(points, separation.points())?;
    let refs: Vec<&PropertyCCertificate> = pieces.iter().collect();
    let u = all_members(&refs, points)?;
    let challenge = &first.challenge;
    let needed = saturation_challenge(challenge.top(), &u)?;
    if let Some(pair) = needed.first_missing_from(separation) {
        return Err(Error::Precondition(format!("separation misses {pair:?} of the saturation challenge")));
    }
    let core_set = core.domain();
    let outside: Vec<PointSet> = pieces.iter().map(|p| &p.domain() - &core_set).collect();
    for (i, a) in outside.iter().enumerate() {
        for (j, b) in outside.iter().enumerate().skip(i + 1) {
            let hit = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).find(|&(x, y)| {
                separation.contains(x, y) || separation.contains(y, x)
            });
            if let Some(pair) = hit {
                return Err(Error::Precondition(format!("pieces {i} and {j} minus the core meet at {pair:?}")));
            }
        }
    }
    separation_check(&core.families, challenge, &u, "core certificate")?;
    let depth = pieces.iter().map(|p| p.families.len()).max().unwrap_or(0);
    let restricted: Vec<SubsetFamily> = (0..depth)
        .map(|i| {
            let members = pieces.iter().zip(&outside).flat_map(|(p, rest)| {
                p.families.get(i).map(|f| f.restrict(rest).members.clone()).unwrap_or_default()
            });
            SubsetFamily::normalized(points, members)
        })
        .collect::<Result<_>>()?;
    let domain = pieces.iter().fold(core_set, |acc, p| &acc | &p.domain());
    saturate_levels(challenge, &core.families, &restricted, domain)
}

/// The infinite-union combination for covers at a single scale.
pub fn combine_dimension_infinite_union(
    pieces: &[DimensionCertificate],
    core: &DimensionCertificate,
    separation: &Entourage,
) -> Result<DimensionCertificate> {
    let width = pieces.iter().chain([core]).map(|c| c.families.len()).max().unwrap_or(1).max(1);
    let widen = |c: &DimensionCertificate| -> Result<PropertyCCertificate> {
        let mut pc = c.to_property_c()?;
        pc.challenge = Filtration::validated(pc.challenge.space().clone(), vec![c.scale.clone(); width])?;
        Ok(pc)
    };
    let pcs: Vec<PropertyCCertificate> = pieces.iter().map(widen).collect::<Result<_>>()?;
    let combined = combine_covers_infinite_union(&pcs, &widen(core)?, separation)?;
    Ok(DimensionCertificate::from_property_c(&core.scale, combined))
}
