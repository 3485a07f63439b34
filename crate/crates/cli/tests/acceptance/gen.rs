//! Seeded random instances.

use coarse_core::covers::SubsetFamily;
use coarse_core::decomposition::{Decomposition, Part, WeakDecomposition};
use coarse_core::property_a::{Level, PropertyAConfig};
use coarse_core::relations::{Entourage, PointSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn relation(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Entourage {
    Entourage::from_fn(n, |_, _| rng.gen_bool(density))
}

/// Reflexive and symmetric: a random graph with loops.
pub fn graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Entourage {
    let mut pairs = Vec::new();
    for x in 0..n {
        pairs.push((x, x));
        for y in x + 1..n {
            if rng.gen_bool(density) {
                pairs.push((x, y));
                pairs.push((y, x));
            }
        }
    }
    Entourage::from_pairs(n, pairs).expect("in range")
}

pub fn subset(rng: &mut ChaCha8Rng, n: usize) -> PointSet {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Connected components of `e` inside `set`.
pub fn components(e: &Entourage, set: &PointSet) -> Vec<PointSet> {
    let mut left = set.clone();
    let mut out = Vec::new();
    while let Some(&start) = left.iter().next() {
        let mut comp = PointSet::from([start]);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for y in e.successors(x).into_iter().chain((0..e.points()).filter(|&y| e.contains(y, x))) {
                if left.contains(&y) && comp.insert(y) {
                    frontier.push(y);
                }
            }
        }
        left.retain(|p| !comp.contains(p));
        out.push(comp);
    }
    out
}

fn apart(e: &Entourage, a: &PointSet, b: &PointSet) -> bool {
    a.iter().all(|&x| b.iter().all(|&y| !e.contains(x, y) && !e.contains(y, x)))
}

/// Greedy random `l`-disjoint family: small members grown around random
/// seeds, kept only when apart from everything already chosen.
pub fn disjoint_family(rng: &mut ChaCha8Rng, l: &Entourage, within: &PointSet, attempts: usize) -> SubsetFamily {
    let n = l.points();
    let pool: Vec<usize> = within.iter().copied().collect();
    let mut chosen: Vec<PointSet> = Vec::new();
    for _ in 0..attempts {
        let Some(&seed) = pool.choose(rng) else { break };
        let mut member = PointSet::from([seed]);
        for _ in 0..rng.gen_range(0..3) {
            if let Some(&extra) = pool.choose(rng) {
                member.insert(extra);
            }
        }
        let fresh = chosen.iter().all(|c| c.is_disjoint(&member) && apart(l, c, &member));
        if fresh {
            chosen.push(member);
        }
    }
    SubsetFamily::normalized(n, chosen).expect("in range")
}

/// A valid configuration: random `E^(n^i)`-disjoint levels, then the
/// components of `E`, which stay apart at every power, to finish the cover.
pub fn property_a_config(rng: &mut ChaCha8Rng, points: usize, n: u64, k: usize) -> PropertyAConfig {
    let base = graph(rng, points, 0.25);
    let all: PointSet = (0..points).collect();
    let mut levels = Vec::new();
    for i in 1..=k {
        let family = if i == k {
            SubsetFamily::normalized(points, components(&base, &all)).expect("in range")
        } else {
            let separation = base.power(n.pow(i as u32));
            disjoint_family(rng, &separation, &all, 4)
        };
        let members = family.members().to_vec();
        let representatives = members
            .iter()
            .map(|m| *m.iter().nth(rng.gen_range(0..m.len())).expect("nonempty"))
            .collect();
        let bound = coarse_core::covers::family_diagonal(&family);
        levels.push(Level { family, representatives, bound });
    }
    PropertyAConfig { base, n, levels }
}

/// Splits each member of `source` into `arity` parts at random; the blocks
/// are the `l`-components of each part, so blocks in a part are `l`-apart.
pub fn weak_decomposition(
    rng: &mut ChaCha8Rng,
    source: &SubsetFamily,
    l: &Entourage,
    arity: usize,
) -> WeakDecomposition {
    let n = source.points();
    let mut pieces = Vec::new();
    let mut blocks = Vec::new();
    for member in source.members() {
        let mut parts = vec![PointSet::new(); arity];
        for &p in member {
            parts[rng.gen_range(0..arity)].insert(p);
        }
        let parts: Vec<Part> = parts
            .iter()
            .map(|part| {
                let comps = components(l, part);
                blocks.extend(comps.iter().cloned());
                Part::from_blocks(comps)
            })
            .collect();
        pieces.push(Decomposition { target: member.clone(), parts });
    }
    let target = SubsetFamily::normalized(n, blocks).expect("in range");
    WeakDecomposition { source: source.clone(), target, entourage: l.clone(), arity, pieces }
}

/// A random partition into at most `parts` nonempty members.
pub fn partition(rng: &mut ChaCha8Rng, n: usize, parts: usize) -> SubsetFamily {
    let mut members = vec![PointSet::new(); parts];
    for p in 0..n {
        members[rng.gen_range(0..parts)].insert(p);
    }
    SubsetFamily::normalized(n, members.into_iter().filter(|m| !m.is_empty())).expect("in range")
}
