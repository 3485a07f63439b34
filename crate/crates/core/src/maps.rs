//! Coarse maps between presented spaces, transfer of families and
//! decompositions along them, products, and the permanence strategies
//! (pullback, fibering, product, union).
//!
//! A presentation's bounded sets are the `S` with `S × S` inside its top
//! level.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::covers::{boundedness_failure, SubsetFamily};
use crate::decomposition::{Decomposer, Decomposition, Move, Part, Response, WeakDecomposition};
use crate::error::{Error, Result};
use crate::relations::{Entourage, Filtration, PointSet, Space};
use crate::verdict::{Failure, Verdict};

/// A total function between the points of two presented spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct CoarseMap {
    source: Filtration,
    target: Filtration,
    graph: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preimage_bounds: Option<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawMap {
    source: Filtration,
    target: Filtration,
    graph: Vec<usize>,
    #[serde(default)]
    preimage_bounds: Option<Vec<usize>>,
}

impl TryFrom<RawMap> for CoarseMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        let map = CoarseMap::new(raw.source, raw.target, raw.graph)?;
        match raw.preimage_bounds {
            Some(table) => map.with_preimage_bounds(table),
            None => Ok(map),
        }
    }
}

impl CoarseMap {
    /// Checks totality only; see [`is_bornologous`] and [`CoarseMap::validated`].
    pub fn new(source: Filtration, target: Filtration, graph: Vec<usize>) -> Result<Self> {
        if graph.len() != source.points() {
            return Err(Error::SpaceMismatch { left: source.points(), right: graph.len() });
        }
        if let Some(&index) = graph.iter().find(|&&y| y >= target.points()) {
            return Err(Error::PointOutOfRange { index, size: target.points() });
        }
        Ok(CoarseMap { source, target, graph, preimage_bounds: None })
    }

    /// [`CoarseMap::new`] plus bornology.
    pub fn validated(source: Filtration, target: Filtration, graph: Vec<usize>) -> Result<Self> {
        let map = CoarseMap::new(source, target, graph)?;
        let verdict = is_bornologous(&map);
        if verdict.is_ok() {
            Ok(map)
        } else {
            Err(Error::Precondition(format!("map is not bornologous: {verdict}")))
        }
    }

    pub fn identity(space: &Filtration) -> Self {
        CoarseMap { source: space.clone(), target: space.clone(), graph: (0..space.points()).collect(), preimage_bounds: None }
    }

    /// Declares, for each target level `j`, a source level `table[j]`
    /// containing `(f × f)⁻¹(F_j)`; every entry is checked.
    pub fn with_preimage_bounds(mut self, table: Vec<usize>) -> Result<Self> {
        if table.len() != self.target.levels().len() {
            return Err(Error::Precondition(format!(
                "{} preimage bounds for {} target levels",
                table.len(),
                self.target.levels().len()
            )));
        }
        for (j, &i) in table.iter().enumerate() {
            let level = self.source.levels().get(i).ok_or_else(|| {
                Error::Precondition(format!("preimage bound for level {j} names missing source level {i}"))
            })?;
            if let Some(pair) = pullback_entourage(&self, self.target.level(j)).first_missing_from(level) {
                return Err(Error::Precondition(format!(
                    "preimage of target level {j} has pair {pair:?} outside source level {i}"
                )));
            }
        }
        self.preimage_bounds = Some(table);
        Ok(self)
    }

    pub fn source(&self) -> &Filtration {
        &self.source
    }

    pub fn target(&self) -> &Filtration {
        &self.target
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    pub fn apply(&self, x: usize) -> usize {
        self.graph[x]
    }

    /// The declared source level bounding preimages of target level `j`.
    pub fn preimage_bound(&self, j: usize) -> Option<&Entourage> {
        let i = *self.preimage_bounds.as_ref()?.get(j)?;
        Some(self.source.level(i))
    }

    /// `x ↦ next(self(x))`.
    pub fn then(&self, next: &CoarseMap) -> Result<CoarseMap> {
        if self.target.points() != next.source.points() {
            return Err(Error::SpaceMismatch { left: self.target.points(), right: next.source.points() });
        }
        let graph = self.graph.iter().map(|&y| next.graph[y]).collect();
        CoarseMap::new(self.source.clone(), next.target.clone(), graph)
    }

    fn image(&self, set: &PointSet) -> PointSet {
        set.iter().map(|&x| self.graph[x]).collect()
    }

    fn preimage(&self, set: &PointSet) -> PointSet {
        (0..self.graph.len()).filter(|&x| set.contains(&self.graph[x])).collect()
    }
}

/// `(f × f)(e)`.
pub fn pushforward(f: &CoarseMap, e: &Entourage) -> Result<Entourage> {
    if e.points() != f.source.points() {
        return Err(Error::SpaceMismatch { left: f.source.points(), right: e.points() });
    }
    Entourage::from_pairs(f.target.points(), e.pairs().into_iter().map(|(x, y)| (f.graph[x], f.graph[y])))
}

/// `(f × f)⁻¹(e)` for `e` on the target.
pub fn pullback_entourage(f: &CoarseMap, e: &Entourage) -> Entourage {
    Entourage::from_fn(f.source.points(), |x, y| e.contains(f.graph[x], f.graph[y]))
}

/// `{f⁻¹(U)}`, empty preimages dropped.
pub fn pullback_family(f: &CoarseMap, u: &SubsetFamily) -> Result<SubsetFamily> {
    if u.points() != f.target.points() {
        return Err(Error::SpaceMismatch { left: f.target.points(), right: u.points() });
    }
    SubsetFamily::normalized(f.source.points(), u.members().iter().map(|m| f.preimage(m)))
}

/// Every source level maps into the target's top level.
pub fn is_bornologous(f: &CoarseMap) -> Verdict {
    let top = f.target.top();
    let mut v = Verdict::holds();
    for (level, l) in f.source.levels().iter().enumerate() {
        if let Some(pair) = l.pairs().into_iter().find(|&(x, y)| !top.contains(f.graph[x], f.graph[y])) {
            v.push(Failure::NotBornologous { level, pair });
        }
    }
    v
}

/// Preimages of bounded sets are bounded. Two-point sets suffice: `f` is
/// proper iff `(f x, f y)` in the target top forces `(x, y)` into the
/// source top.
pub fn is_proper(f: &CoarseMap) -> Verdict {
    let (top_s, top_t) = (f.source.top(), f.target.top());
    let n = f.source.points();
    let witness = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| top_t.contains(f.graph[x], f.graph[y]) && !top_s.contains(x, y));
    witness.map(|pair| Failure::NotProper { pair }).into()
}

/// `{(f x, g x)} ⊆ e`; `e` must itself lie in the target's top level.
pub fn is_close(f: &CoarseMap, g: &CoarseMap, e: &Entourage) -> Verdict {
    if f.source.points() != g.source.points() || f.target.points() != g.target.points() {
        return Verdict::fails(Failure::Other { message: "maps have different source or target".into() });
    }
    if e.points() != f.target.points() {
        return Verdict::fails(Failure::SpaceMismatch { expected: f.target.points(), found: e.points() });
    }
    let mut v = Verdict::holds();
    if let Some(pair) = e.first_missing_from(f.target.top()) {
        v.push(Failure::Other { message: format!("closeness relation pair {pair:?} is not controlled") });
    }
    let witness = (0..f.graph.len()).find(|&x| !e.contains(f.graph[x], g.graph[x]));
    if let Some(point) = witness {
        v.push(Failure::NotClose { point, pair: (f.graph[point], g.graph[point]) });
    }
    v
}

/// `f: X → Y` and `g: Y → X` are coarse maps with `g∘f` close to `id_X`
/// under `close_source` and `f∘g` close to `id_Y` under `close_target`.
pub fn check_coarse_equivalence(
    f: &CoarseMap,
    g: &CoarseMap,
    close_source: &Entourage,
    close_target: &Entourage,
) -> Result<Verdict> {
    if f.source.points() != g.target.points() || f.target.points() != g.source.points() {
        return Err(Error::Precondition("maps do not run in opposite directions".into()));
    }
    let mut v = Verdict::holds();
    for map in [f, g] {
        v.absorb(is_bornologous(map));
        v.absorb(is_proper(map));
    }
    v.absorb(is_close(&f.then(g)?, &CoarseMap::identity(&f.source), close_source));
    v.absorb(is_close(&g.then(f)?, &CoarseMap::identity(&f.target), close_target));
    Ok(v)
}

/// Pulls a target decomposition, verified at `(f × f)(l)`, back to one of
/// `f⁻¹(source)` over `f⁻¹(target)` at `l`. Members with equal preimages
/// keep the first decomposition.
pub fn pullback_decomposition(f: &CoarseMap, dec: &WeakDecomposition, l: &Entourage) -> Result<WeakDecomposition> {
    let pushed = pushforward(f, l)?;
    let mut shape = dec.clone();
    shape.entourage = pushed;
    let verdict = shape.verify();
    if !verdict.is_ok() {
        return Err(Error::Precondition(format!("decomposition fails at the pushed-forward entourage: {verdict}")));
    }
    let source = pullback_family(f, &dec.source)?;
    let target = pullback_family(f, &dec.target)?;
    let mut pieces = Vec::with_capacity(source.len());
    for member in source.members() {
        let owner = dec.source.members().iter().position(|m| f.preimage(m) == *member).expect("member is a preimage");
        let parts = dec.pieces[owner]
            .parts
            .iter()
            .map(|p| Part::from_blocks(p.blocks.iter().map(|b| f.preimage(b)).filter(|b| !b.is_empty()).collect()))
            .collect();
        pieces.push(Decomposition { target: member.clone(), parts });
    }
    Ok(WeakDecomposition { source, target, entourage: l.clone(), arity: dec.arity, pieces })
}

/// `{((x, y), (x', y')) | (x, x') ∈ a, (y, y') ∈ b}` with `(x, y)` at index
/// `x·|Y| + y`.
pub fn product_relation(a: &Entourage, b: &Entourage) -> Entourage {
    let m = b.points();
    let pairs: Vec<(usize, usize)> = a
        .pairs()
        .into_iter()
        .flat_map(|(x, x2)| b.pairs().into_iter().map(move |(y, y2)| (x * m + y, x2 * m + y2)))
        .collect();
    Entourage::from_pairs(a.points() * m, pairs).expect("indices in range")
}

/// `X × Y` presented by the products `L_{min(i, a−1)} × F_{min(i, b−1)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpace {
    pub left: Filtration,
    pub right: Filtration,
    pub space: Filtration,
}

impl ProductSpace {
    pub fn new(left: Filtration, right: Filtration) -> Result<Self> {
        let (a, b) = (left.levels().len(), right.levels().len());
        let levels = (0..a.max(b))
            .map(|i| product_relation(left.level(i.min(a - 1)), right.level(i.min(b - 1))))
            .collect();
        let labels = (0..left.points())
            .flat_map(|x| {
                let (l, r) = (&left, &right);
                (0..r.points()).map(move |y| format!("({},{})", l.space().label(x), r.space().label(y)))
            })
            .collect();
        let space = Filtration::validated(Space::with_labels(labels)?, levels)?;
        Ok(ProductSpace { left, right, space })
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        x * self.right.points() + y
    }

    pub fn first_projection(&self) -> CoarseMap {
        let m = self.right.points();
        let graph = (0..self.space.points()).map(|z| z / m).collect();
        CoarseMap::new(self.space.clone(), self.left.clone(), graph).expect("projection is total")
    }

    pub fn second_projection(&self) -> CoarseMap {
        let m = self.right.points();
        let graph = (0..self.space.points()).map(|z| z % m).collect();
        CoarseMap::new(self.space.clone(), self.right.clone(), graph).expect("projection is total")
    }
}

/// The subspace presentation on `set`, renumbered in increasing order,
/// together with the inclusion's graph.
pub fn restrict_filtration(space: &Filtration, set: &PointSet) -> Result<(Filtration, Vec<usize>)> {
    if let Some(&index) = set.iter().find(|&&p| p >= space.points()) {
        return Err(Error::PointOutOfRange { index, size: space.points() });
    }
    let inclusion: Vec<usize> = set.iter().copied().collect();
    let levels = space
        .levels()
        .iter()
        .map(|l| Entourage::from_fn(inclusion.len(), |i, j| l.contains(inclusion[i], inclusion[j])))
        .collect();
    let labels = inclusion.iter().map(|&p| space.space().label(p)).collect();
    Ok((Filtration::validated(Space::with_labels(labels)?, levels)?, inclusion))
}

/// The bounded subspace `b` of `x` times `y`, with the projection
/// `f: B × Y → Y`, the section `g(y) = (b₀, y)`, and the equivalence check
/// under `(B × B) × Δ_Y` and `Δ_Y`.
#[derive(Debug, Clone)]
pub struct BoundedFactor {
    pub product: ProductSpace,
    pub projection: CoarseMap,
    pub section: CoarseMap,
    pub verdict: Verdict,
}

pub fn bounded_factor_equivalence(x: &Filtration, b: &PointSet, b0: usize, y: &Filtration) -> Result<BoundedFactor> {
    if !b.contains(&b0) {
        return Err(Error::Precondition(format!("basepoint {b0} is not in the bounded set")));
    }
    let (sub, inclusion) = restrict_filtration(x, b)?;
    if let Some(pair) = Entourage::full(sub.points()).first_missing_from(sub.top()) {
        let pair = (inclusion[pair.0], inclusion[pair.1]);
        return Err(Error::Precondition(format!("set is unbounded: pair {pair:?} outside the top level")));
    }
    let base = inclusion.iter().position(|&p| p == b0).expect("basepoint in set");
    let product = ProductSpace::new(sub, y.clone())?;
    let projection = product.second_projection();
    let graph = (0..y.points()).map(|v| product.index(base, v)).collect();
    let section = CoarseMap::new(y.clone(), product.space.clone(), graph)?;
    let close_product = product_relation(&Entourage::full(b.len()), &Entourage::diagonal(y.points()));
    let verdict =
        check_coarse_equivalence(&projection, &section, &close_product, &Entourage::diagonal(y.points()))?;
    Ok(BoundedFactor { product, projection, section, verdict })
}

fn resign(reason: impl Into<String>) -> Response {
    Response::Resign { reason: reason.into() }
}

fn bounded(family: &SubsetFamily, bound: &Entourage) -> bool {
    boundedness_failure(family, bound, None).is_none()
}

/// Plays on the source of `map` by letting `inner` play on the target.
///
/// An assertion `L` is passed on as `(f × f)(L) ∪ Δ`. Each current member
/// `A` is cut along the inner decomposition of some inner member containing
/// `f(A)`, giving blocks `A ∩ f⁻¹(W)`.
pub struct PulledBackStrategy {
    map: CoarseMap,
    inner: Box<dyn Decomposer>,
    inner_family: SubsetFamily,
}

impl PulledBackStrategy {
    /// `initial` is the family the inner game starts from.
    pub fn new(map: CoarseMap, inner: Box<dyn Decomposer>, initial: SubsetFamily) -> Self {
        PulledBackStrategy { map, inner, inner_family: initial }
    }

    /// Inner play starting from the whole target.
    pub fn whole(map: CoarseMap, inner: Box<dyn Decomposer>) -> Self {
        let all = map.target.space().all_points();
        let initial = SubsetFamily::normalized(map.target.points(), [all]).expect("points in range");
        PulledBackStrategy::new(map, inner, initial)
    }

    pub fn inner_family(&self) -> &SubsetFamily {
        &self.inner_family
    }
}

impl Decomposer for PulledBackStrategy {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        let pushed = match pushforward(&self.map, asserted)
            .and_then(|k| k.union(&Entourage::diagonal(self.map.target.points())))
        {
            Ok(k) => k,
            Err(e) => return resign(e.to_string()),
        };
        let owners: Vec<usize> = match current
            .members()
            .iter()
            .map(|a| {
                let image = self.map.image(a);
                self.inner_family.members().iter().position(|b| image.is_subset(b))
            })
            .collect::<Option<_>>()
        {
            Some(o) => o,
            None => return resign("a current member lies in no inner member"),
        };
        let mv = match self.inner.respond(&pushed, &self.inner_family) {
            Response::Decompose(mv) => mv,
            Response::Resign { reason } => return resign(format!("inner strategy resigned: {reason}")),
            Response::Cover { .. } => return resign("inner strategy answered with a cover"),
        };
        let inner_dec = &mv.decomposition;
        let mut pieces = Vec::with_capacity(current.len());
        for (a, &owner) in current.members().iter().zip(&owners) {
            let Some(piece) = inner_dec.piece_for(&self.inner_family.members()[owner]) else {
                return resign("inner move skips a member");
            };
            let parts = piece
                .parts
                .iter()
                .map(|p| {
                    let blocks = p.blocks.iter().map(|w| a & &self.map.preimage(w)).filter(|s| !s.is_empty());
                    Part::from_blocks(blocks.collect())
                })
                .collect();
            pieces.push(Decomposition { target: a.clone(), parts });
        }
        let blocks = pieces.iter().flat_map(|p| p.parts.iter().flat_map(|part| part.blocks.iter().cloned()));
        let target = SubsetFamily::normalized(current.points(), blocks).expect("blocks in range");
        self.inner_family = mv.family.clone();
        Response::Decompose(Move::new(WeakDecomposition {
            source: current.clone(),
            target,
            entourage: asserted.clone(),
            arity: inner_dec.arity,
            pieces,
        }))
    }
}

/// Supplies a strategy for the game starting at a family reached by base
/// play, or `None` when it has none.
pub type FiberProvider = Box<dyn FnMut(&SubsetFamily) -> Option<Box<dyn Decomposer>>>;

/// Plays the base game through [`PulledBackStrategy`] until the base family
/// is bounded by `base_bound`, then hands the pulled-back family to a
/// fiber strategy.
pub struct FiberingStrategy {
    base: PulledBackStrategy,
    base_bound: Entourage,
    provider: FiberProvider,
    fiber: Option<Box<dyn Decomposer>>,
}

impl FiberingStrategy {
    pub fn new(base: PulledBackStrategy, base_bound: Entourage, provider: FiberProvider) -> Self {
        FiberingStrategy { base, base_bound, provider, fiber: None }
    }
}

impl Decomposer for FiberingStrategy {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        if self.fiber.is_none() && bounded(self.base.inner_family(), &self.base_bound) {
            match (self.provider)(current) {
                Some(s) => self.fiber = Some(s),
                None => return resign(format!("no fiber strategy for {:?}", current.members())),
            }
        }
        match &mut self.fiber {
            Some(fiber) => fiber.respond(asserted, current),
            None => self.base.respond(asserted, current),
        }
    }
}

/// Fibers `left × right` over the first projection: `x_strategy` plays on
/// the left factor until its family is bounded by `x_bound`; each family
/// `{V × Y}` then plays a fresh `y_strategy` pulled back along the second
/// projection.
pub fn product_strategy(
    product: &ProductSpace,
    x_strategy: Box<dyn Decomposer>,
    x_bound: Entourage,
    mut y_strategy: impl FnMut() -> Box<dyn Decomposer> + 'static,
) -> FiberingStrategy {
    let base = PulledBackStrategy::whole(product.first_projection(), x_strategy);
    let second = product.second_projection();
    let provider: FiberProvider =
        Box::new(move |_| Some(Box::new(PulledBackStrategy::whole(second.clone(), y_strategy())) as Box<dyn Decomposer>));
    FiberingStrategy::new(base, x_bound, provider)
}

struct Branch {
    strategy: Box<dyn Decomposer>,
    family: SubsetFamily,
}

/// Answers `L` for `L` in the core.
pub type CoreOracle = Box<dyn FnMut(&Entourage) -> Option<(PointSet, Box<dyn Decomposer>)>>;

/// Plays on `⋃ X_α`. The first assertion `L` is answered by splitting the
/// whole space into `Y_L` and the `L`-disjoint pieces `X_α ∖ Y_L`; after
/// that the core and each piece play their own games side by side.
///
/// Piece strategies play on their own `X_α` (from `{X_α}`) and are cut down
/// to `X_α ∖ Y_L`.
pub struct UnionStrategy {
    space: Filtration,
    pieces: Vec<(PointSet, Option<Box<dyn Decomposer>>)>,
    core: CoreOracle,
    win_bound: Entourage,
    branches: Option<Vec<Branch>>,
}

impl UnionStrategy {
    pub fn new(
        space: Filtration,
        pieces: Vec<(PointSet, Box<dyn Decomposer>)>,
        core: CoreOracle,
        win_bound: Entourage,
    ) -> Self {
        let pieces = pieces.into_iter().map(|(p, s)| (p, Some(s))).collect();
        UnionStrategy { space, pieces, core, win_bound, branches: None }
    }

    fn first_move(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        let [whole] = current.members() else {
            return resign("the opening needs a single member");
        };
        let points = current.points();
        let Some((core, core_strategy)) = (self.core)(asserted) else {
            return resign("no core for the assertion");
        };
        let rests: Vec<PointSet> = self.pieces.iter().map(|(p, _)| p - &core).collect();
        for (i, a) in rests.iter().enumerate() {
            for b in &rests[i + 1..] {
                if let Some(pair) = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).find(|&(x, y)| asserted.contains(x, y)) {
                    return resign(format!("pieces {a:?} and {b:?} meet through {pair:?} outside the core"));
                }
            }
        }
        let mut branches = Vec::new();
        let family_of = |s: &PointSet| SubsetFamily::normalized(points, [s.clone()]).expect("in range");
        if !core.is_empty() {
            branches.push(Branch { strategy: core_strategy, family: family_of(&core) });
        }
        let mut second = Vec::new();
        for ((piece, strategy), rest) in self.pieces.iter_mut().zip(&rests) {
            if rest.is_empty() || second.contains(rest) {
                continue;
            }
            let inner = strategy.take().expect("each piece opens once");
            let restricted = PulledBackStrategy::new(CoarseMap::identity(&self.space), inner, family_of(piece));
            branches.push(Branch { strategy: Box::new(restricted), family: family_of(rest) });
            second.push(rest.clone());
        }
        let first = if core.is_empty() { vec![] } else { vec![core.clone()] };
        let target = SubsetFamily::normalized(points, first.iter().chain(&second).cloned()).expect("in range");
        let piece = Decomposition { target: whole.clone(), parts: vec![Part::from_blocks(first), Part::from_blocks(second)] };
        self.branches = Some(branches);
        Response::Decompose(Move::new(WeakDecomposition {
            source: current.clone(),
            target,
            entourage: asserted.clone(),
            arity: 2,
            pieces: vec![piece],
        }))
    }
}

impl Decomposer for UnionStrategy {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        let Some(branches) = &mut self.branches else {
            return self.first_move(asserted, current);
        };
        let points = current.points();
        let mut moves: Vec<(SubsetFamily, WeakDecomposition)> = Vec::with_capacity(branches.len());
        for branch in branches.iter_mut() {
            let old = branch.family.clone();
            let dec = if bounded(&old, &self.win_bound) {
                WeakDecomposition::identity(&old, asserted)
            } else {
                match branch.strategy.respond(asserted, &old) {
                    Response::Decompose(mv) => mv.decomposition,
                    Response::Resign { reason } => return resign(format!("branch resigned: {reason}")),
                    Response::Cover { .. } => return resign("branch answered with a cover"),
                }
            };
            branch.family = dec.target.clone();
            moves.push((old, dec));
        }
        let arity = moves.iter().map(|(_, d)| d.arity).max().unwrap_or(1);
        let mut pieces = Vec::with_capacity(current.len());
        for member in current.members() {
            let Some(piece) = moves.iter().find_map(|(_, d)| d.piece_for(member)) else {
                return resign(format!("no branch owns {member:?}"));
            };
            let mut piece = piece.clone();
            piece.parts.resize(arity, Part::empty());
            pieces.push(piece);
        }
        let used: BTreeSet<PointSet> =
            pieces.iter().flat_map(|p| p.parts.iter().flat_map(|part| part.blocks.iter().cloned())).collect();
        let target = SubsetFamily::normalized(points, used).expect("in range");
        let dec = WeakDecomposition { source: current.clone(), target, entourage: asserted.clone(), arity, pieces };
        Response::Decompose(Move::new(dec))
    }
}
