//! Criteria 1 and 2.

use coarse_core::metric::{HopDistance, Hops};
use coarse_core::relations::{Entourage, PointSet};
use rand::Rng;

use crate::oracle::{self, Pairs};
use crate::{gen, rng, Tally, Verdict};

fn every_relation(n: usize) -> impl Iterator<Item = Entourage> {
    (0u64..1 << (n * n)).map(move |bits| Entourage::from_fn(n, |i, j| bits >> (i * n + j) & 1 == 1))
}

fn every_subset(n: usize) -> impl Iterator<Item = PointSet> {
    (0u32..1 << n).map(move |bits| (0..n).filter(|p| bits >> p & 1 == 1).collect())
}

fn show(e: &Entourage) -> String {
    format!("{:?}", e.pairs())
}

/// Implementation against the oracle, and the laws, for one relation.
fn unary(t: &mut Tally, a: &Entourage) {
    let n = a.points();
    let pa = oracle::pairs(a);
    t.check(oracle::pairs(&a.inverse()) == oracle::inverse(&pa), || format!("inverse of {}", show(a)));
    t.check(a.inverse().inverse() == *a, || format!("inverse not an involution on {}", show(a)));
    let powers: Vec<Entourage> = (0..=6).map(|k| a.power(k)).collect();
    for (k, p) in powers.iter().enumerate().take(4) {
        t.check(oracle::pairs(p) == oracle::power(&pa, n, k as u64), || format!("power {k} of {}", show(a)));
    }
    for m in 0..=3usize {
        for k in 0..=3usize {
            let joined = powers[m].compose(&powers[k]).expect("same space");
            t.check(joined == powers[m + k], || format!("A^{m}∘A^{k} ≠ A^{} for {}", m + k, show(a)));
        }
    }
}

fn binary(t: &mut Tally, a: &Entourage, b: &Entourage, subsets: &[PointSet]) {
    let (pa, pb) = (oracle::pairs(a), oracle::pairs(b));
    let ab = a.compose(b).expect("same space");
    let pab: Pairs = oracle::compose(&pa, &pb);
    t.check(oracle::pairs(&ab) == pab, || format!("compose {} with {}", show(a), show(b)));
    let anti = b.inverse().compose(&a.inverse()).expect("same space");
    t.check(ab.inverse() == anti, || format!("(A∘B)⁻¹ ≠ B⁻¹∘A⁻¹ for A={} B={}", show(a), show(b)));
    for s in subsets {
        let lhs = ab.image(s);
        t.check(lhs == a.image(&b.image(s)), || format!("(A∘B)[{s:?}] ≠ A[B[{s:?}]] for A={} B={}", show(a), show(b)));
        t.check(lhs == oracle::image(&pab, s), || format!("image oracle disagrees on {s:?}"));
    }
}

fn ternary(t: &mut Tally, a: &Entourage, b: &Entourage, c: &Entourage) {
    let left = a.compose(b).and_then(|ab| ab.compose(c)).expect("same space");
    let right = b.compose(c).and_then(|bc| a.compose(&bc)).expect("same space");
    t.check(left == right, || format!("associativity fails for {} {} {}", show(a), show(b), show(c)));
}

pub fn laws() -> Verdict {
    let mut t = Tally::default();
    for n in 1..=4 {
        for a in every_relation(n) {
            unary(&mut t, &a);
        }
    }
    for n in 1..=3 {
        let all: Vec<Entourage> = every_relation(n).collect();
        let subsets: Vec<PointSet> = every_subset(n).collect();
        for a in &all {
            for b in &all {
                binary(&mut t, a, b, &subsets);
            }
        }
    }
    for n in 1..=2 {
        let all: Vec<Entourage> = every_relation(n).collect();
        for a in &all {
            for b in &all {
                for c in &all {
                    ternary(&mut t, a, b, c);
                }
            }
        }
    }
    let mut r = rng(1);
    for _ in 0..20_000 {
        let n = r.gen_range(3..=4);
        let d = r.gen_range(0.1..0.6);
        let (a, b, c) = (gen::relation(&mut r, n, d), gen::relation(&mut r, n, d), gen::relation(&mut r, n, d));
        ternary(&mut t, &a, &b, &c);
        let subsets: Vec<PointSet> = every_subset(n).collect();
        binary(&mut t, &a, &b, &subsets);
    }
    for _ in 0..1000 {
        let n = r.gen_range(1..=8);
        let d = r.gen_range(0.05..0.5);
        let (a, b, c) = (gen::relation(&mut r, n, d), gen::relation(&mut r, n, d), gen::relation(&mut r, n, d));
        unary(&mut t, &a);
        let subsets: Vec<PointSet> = (0..16).map(|_| gen::subset(&mut r, n)).collect();
        binary(&mut t, &a, &b, &subsets);
        ternary(&mut t, &a, &b, &c);
    }
    t.verdict(
        "unary laws on every relation of size ≤ 4, pairs exhaustive at size ≤ 3, triples exhaustive at size ≤ 2 \
         and 20000 sampled at sizes 3–4, plus 1000 random instances of size ≤ 8",
    )
}

fn every_graph(n: usize) -> impl Iterator<Item = Entourage> {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    (0u64..1 << edges.len()).map(move |bits| {
        let mut pairs: Vec<(usize, usize)> = (0..n).map(|x| (x, x)).collect();
        for (i, &(x, y)) in edges.iter().enumerate() {
            if bits >> i & 1 == 1 {
                pairs.push((x, y));
                pairs.push((y, x));
            }
        }
        Entourage::from_pairs(n, pairs).expect("in range")
    })
}

fn add(a: Hops, b: Hops) -> Hops {
    match (a, b) {
        (Hops::Finite(x), Hops::Finite(y)) => Hops::Finite(x + y),
        _ => Hops::Infinite,
    }
}

fn distance_clauses(t: &mut Tally, e: &Entourage, subsets: &[PointSet]) {
    let n = e.points();
    let d = HopDistance::new(e).expect("reflexive symmetric");
    let table = oracle::hops(&oracle::pairs(e), n);
    let get = |x: usize, y: usize| d.get(x, y);
    for x in 0..n {
        for y in 0..n {
            let expected = table[x][y].map_or(Hops::Infinite, Hops::Finite);
            t.check(get(x, y) == expected, || format!("D({x},{y}) = {:?}, oracle {expected:?} on {}", get(x, y), show(e)));
            t.check(get(x, y) == get(y, x), || format!("D not symmetric at ({x},{y}) on {}", show(e)));
            t.check((get(x, y) == Hops::Finite(0)) == (x == y), || format!("D({x},{y}) = 0 iff x = y fails"));
            for z in 0..n {
                t.check(get(x, y) <= add(get(x, z), get(z, y)), || format!("triangle fails at ({x},{y}) via {z}"));
            }
        }
    }
    for a in subsets {
        for w in 0..n {
            let dw = d.set_distance(w, a);
            let expected = oracle::set_hops(&table, w, a).map_or(Hops::Infinite, Hops::Finite);
            t.check(dw == expected, || format!("D({w}, {a:?}) = {dw:?}, oracle {expected:?}"));
            for z in 0..n {
                let dz = d.set_distance(z, a);
                let ok = match (get(w, z), dw, dz) {
                    (Hops::Infinite, _, _) => true,
                    (Hops::Finite(_), Hops::Infinite, Hops::Infinite) => true,
                    (Hops::Finite(k), Hops::Finite(p), Hops::Finite(q)) => p.abs_diff(q) <= k,
                    _ => false,
                };
                t.check(ok, || format!("|D({w},A) − D({z},A)| > D({w},{z}) for A = {a:?} on {}", show(e)));
            }
        }
    }
}

pub fn distance() -> Verdict {
    let mut t = Tally::default();
    for n in 1..=5 {
        let subsets: Vec<PointSet> = every_subset(n).collect();
        for e in every_graph(n) {
            distance_clauses(&mut t, &e, &subsets);
        }
    }
    let mut r = rng(2);
    for _ in 0..500 {
        let n = r.gen_range(1..=10);
        let arg = r.gen_range(0.05..0.5);
        let e = gen::graph(&mut r, n, arg);
        let mut subsets: Vec<PointSet> = (0..32).map(|_| gen::subset(&mut r, n)).collect();
        subsets.push(PointSet::new());
        distance_clauses(&mut t, &e, &subsets);
    }
    t.verdict("every reflexive symmetric relation on ≤ 5 points with every subset A, 500 random on ≤ 10 points with 33 subsets each")
}
