//! Brute-force reference implementations. Nothing here calls the algorithms
//! under test; only plain sets of pairs and direct formula evaluation.

use std::collections::BTreeSet;

use coarse_core::covers::SubsetFamily;
use coarse_core::decomposition::{Decomposition, WeakDecomposition};
use coarse_core::rational::{self, Rational};
use coarse_core::relations::{Entourage, PointSet};

pub type Pairs = BTreeSet<(usize, usize)>;

pub fn pairs(e: &Entourage) -> Pairs {
    e.pairs().into_iter().collect()
}

pub fn compose(a: &Pairs, b: &Pairs) -> Pairs {
    let mut out = Pairs::new();
    for &(x, y) in a {
        for &(y2, z) in b {
            if y == y2 {
                out.insert((x, z));
            }
        }
    }
    out
}

pub fn inverse(a: &Pairs) -> Pairs {
    a.iter().map(|&(x, y)| (y, x)).collect()
}

pub fn diagonal(n: usize) -> Pairs {
    (0..n).map(|x| (x, x)).collect()
}

/// Repeated composition, one factor at a time.
pub fn power(a: &Pairs, n: usize, k: u64) -> Pairs {
    let mut out = diagonal(n);
    for _ in 0..k {
        out = compose(&out, a);
    }
    out
}

/// `S[A] = {y | (y, a) ∈ S, a ∈ A}`.
pub fn image(s: &Pairs, a: &PointSet) -> PointSet {
    s.iter().filter(|(_, t)| a.contains(t)).map(|&(y, _)| y).collect()
}

/// Family diagonal `⋃ U × U`.
pub fn family_diagonal(members: &[PointSet]) -> Pairs {
    members.iter().flat_map(|m| m.iter().flat_map(move |&x| m.iter().map(move |&y| (x, y)))).collect()
}

pub fn members(u: &SubsetFamily) -> Vec<PointSet> {
    u.members().to_vec()
}

/// No pair of `l` joins two different members.
pub fn disjoint(members: &[PointSet], l: &Pairs) -> Option<(usize, usize)> {
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if a == b {
                continue;
            }
            for &x in a {
                for &y in b {
                    if l.contains(&(x, y)) || l.contains(&(y, x)) {
                        return Some((x, y));
                    }
                }
            }
        }
    }
    None
}

pub fn bounded(members: &[PointSet], k: &Pairs) -> Option<(usize, usize)> {
    family_diagonal(members).into_iter().find(|p| !k.contains(p))
}

pub fn covered(members: &[PointSet]) -> PointSet {
    members.iter().flatten().copied().collect()
}

/// Hop distance by Floyd-Warshall; `None` is ∞.
pub fn hops(e: &Pairs, n: usize) -> Vec<Vec<Option<u64>>> {
    let mut d = vec![vec![None; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = Some(0);
    }
    for &(x, y) in e {
        if x != y {
            d[x][y] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].map_or(true, |c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

pub fn set_hops(d: &[Vec<Option<u64>>], x: usize, a: &PointSet) -> Option<u64> {
    a.iter().filter_map(|&p| d[x][p]).min()
}

/// `max(0, scale/4 − D(x, U))` with `D = ∞` giving 0.
pub fn phi(d: &[Vec<Option<u64>>], scale: u64, member: &PointSet, x: usize) -> Rational {
    match set_hops(d, x, member) {
        Some(h) => {
            let v = rational::ratio(scale as i64, 4) - rational::int(h as i64);
            if v > rational::zero() {
                v
            } else {
                rational::zero()
            }
        }
        None => rational::zero(),
    }
}

/// `b^n_x(y) = Σ_i n^(k−i+1) Φ_i(x) χ_{D^i_x}(y)` as a dense vector.
pub fn b_vector(
    d: &[Vec<Option<u64>>],
    n: u64,
    levels: &[(Vec<PointSet>, Vec<usize>)],
    points: usize,
    x: usize,
) -> Vec<Rational> {
    let k = levels.len() as u32;
    let mut b = vec![rational::zero(); points];
    for (i0, (members, reps)) in levels.iter().enumerate() {
        let i = i0 as u32 + 1;
        let scale = n.pow(i);
        let weight = rational::int(n.pow(k - i + 1) as i64);
        let cap_phi: Rational = members.iter().map(|m| phi(d, scale, m, x)).sum();
        for (m, &rep) in members.iter().zip(reps) {
            let near = set_hops(d, x, m).is_some_and(|h| rational::int(h as i64) < rational::ratio(scale as i64, 4));
            if near {
                b[rep] += &weight * &cap_phi;
            }
        }
    }
    b
}

pub fn l1(v: &[Rational]) -> Rational {
    v.iter().map(|q| if *q < rational::zero() { -q } else { q.clone() }).sum()
}

pub fn l1_distance(a: &[Rational], b: &[Rational]) -> Rational {
    l1(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

/// Independent check of one piece: parts cover the member exactly, each part
/// is a union of target members lying inside it, and blocks sharing a part
/// are `l`-disjoint.
pub fn piece_ok(piece: &Decomposition, target: &[PointSet], l: &Pairs) -> Result<(), String> {
    let mut union = PointSet::new();
    for (pi, part) in piece.parts.iter().enumerate() {
        for block in &part.blocks {
            if !target.contains(block) {
                return Err(format!("block {block:?} of part {pi} is not a target member"));
            }
            if !block.is_subset(&piece.target) {
                return Err(format!("block {block:?} leaves its member"));
            }
            union.extend(block.iter().copied());
        }
        let blocks: Vec<PointSet> = part.blocks.clone();
        if let Some(p) = disjoint(&blocks, l) {
            return Err(format!("part {pi} joins blocks through {p:?}"));
        }
        for (i, a) in blocks.iter().enumerate() {
            if blocks[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
                return Err(format!("part {pi} has overlapping blocks"));
            }
        }
    }
    if union != piece.target {
        return Err(format!("parts cover {union:?}, member is {:?}", piece.target));
    }
    Ok(())
}

/// The whole weak decomposition, at its own entourage and arity.
pub fn weak_ok(w: &WeakDecomposition) -> Result<(), String> {
    let sources = members(&w.source);
    let targets = members(&w.target);
    if w.pieces.len() != sources.len() {
        return Err(format!("{} pieces for {} members", w.pieces.len(), sources.len()));
    }
    let l = pairs(&w.entourage);
    for (member, piece) in sources.iter().zip(&w.pieces) {
        if piece.target != *member {
            return Err(format!("piece for {member:?} decomposes {:?}", piece.target));
        }
        if piece.parts.len() > w.arity {
            return Err(format!("{} parts exceed arity {}", piece.parts.len(), w.arity));
        }
        piece_ok(piece, &targets, &l)?;
    }
    // Every target member is used by some piece.
    let used: BTreeSet<&PointSet> = w.pieces.iter().flat_map(|p| p.parts.iter().flat_map(|q| q.blocks.iter())).collect();
    if let Some(m) = targets.iter().find(|m| !used.contains(m)) {
        return Err(format!("target member {m:?} is never used"));
    }
    Ok(())
}
