//! Criteria 3, 4 and 5.

use std::path::PathBuf;

use coarse_cli::document::load;
use coarse_cli::{Certificate, Document};
use coarse_core::covers::{greedy_property_c, PropertyCCertificate};
use coarse_core::fixtures::{band, clusters, p5_property_a};
use coarse_core::property_a::{build_b, build_witness, verify_b_bounds, verify_witness, Construction, PropertyAConfig};
use coarse_core::rational::{self, int, ratio, Rational};
use coarse_core::relations::{Entourage, Filtration, PointSet, Space};
use rand::Rng;

use crate::oracle::{self, Pairs};
use crate::{gen, rng, Tally, Verdict};

fn levels_of(cfg: &PropertyAConfig) -> Vec<(Vec<PointSet>, Vec<usize>)> {
    cfg.levels.iter().map(|l| (l.family.members().to_vec(), l.representatives.clone())).collect()
}

fn dense(v: &coarse_core::property_a::SparseVector, points: usize) -> Vec<Rational> {
    (0..points).map(|p| v.get(p)).collect()
}

fn abs(q: Rational) -> Rational {
    if q < rational::zero() {
        -q
    } else {
        q
    }
}

/// `E^t`; a reflexive relation on `p` points stops growing by `t = p`.
fn oracle_power(e: &Pairs, points: usize, t: u64) -> Pairs {
    oracle::power(e, points, t.min(points as u64))
}

pub fn phi() -> Verdict {
    let mut t = Tally::default();
    let mut r = rng(3);
    let mut configs = 0;
    while configs < 500 {
        let points = r.gen_range(1..=10);
        let n = r.gen_range(2..=5);
        let k = r.gen_range(1..=3);
        let cfg = gen::property_a_config(&mut r, points, n, k);
        configs += 1;
        let valid = cfg.check().map(|v| v.is_ok()).unwrap_or(false);
        t.check(valid, || format!("generated configuration is invalid: {cfg:?}"));
        let c = Construction::new(&cfg).expect("shape");
        let d = oracle::hops(&oracle::pairs(&cfg.base), points);
        for (i, level) in cfg.levels.iter().enumerate() {
            let scale = n.pow(i as u32 + 1);
            let members = level.family.members();
            let cap: Vec<Rational> = (0..points)
                .map(|x| members.iter().map(|m| oracle::phi(&d, scale, m, x)).sum::<Rational>())
                .collect();
            for x in 0..points {
                let nonzero = members.iter().filter(|m| oracle::phi(&d, scale, m, x) != rational::zero()).count();
                t.check(nonzero <= 1, || format!("{nonzero} nonzero φ at point {x}, level {i}"));
                t.check(c.nonzero_members(i, x).len() <= 1, || format!("implementation reports several φ at {x}"));
                for (j, m) in members.iter().enumerate() {
                    let expected = oracle::phi(&d, scale, m, x);
                    t.check(c.phi(i, j, x) == expected, || format!("φ({i},{j},{x}) disagrees with the formula"));
                }
                t.check(c.capital_phi(i, x) == cap[x], || format!("Φ({i},{x}) disagrees with the formula"));
                for z in 0..points {
                    if let Some(h) = d[x][z] {
                        let diff = abs(&cap[x] - &cap[z]);
                        t.check(diff <= int(h as i64), || {
                            format!("|Φ({x}) − Φ({z})| = {} > D = {h} at level {i}", rational::format(&diff))
                        });
                    }
                }
            }
        }
    }
    t.verdict("500 random valid configurations on ≤ 10 points, n ∈ 2..=5, k ∈ 1..=3, φ and Φ against the formula")
}

fn b_checks(t: &mut Tally, cfg: &PropertyAConfig) {
    let points = cfg.points();
    let n = cfg.n;
    let k = cfg.levels.len() as u32;
    let e = oracle::pairs(&cfg.base);
    let d = oracle::hops(&e, points);
    let levels = levels_of(cfg);
    let lower = ratio(n.pow(k + 1) as i64, 4);
    let lipschitz = ratio((n * (n.pow(k) - 1)) as i64, (n - 1) as i64);
    let bound: Pairs = cfg.levels.iter().flat_map(|l| oracle::pairs(&l.bound)).collect();
    let s = oracle::compose(&bound, &oracle_power(&e, points, n.pow(k)));
    let bs: Vec<Vec<Rational>> = (0..points).map(|x| oracle::b_vector(&d, n, &levels, points, x)).collect();
    for x in 0..points {
        let built = build_b(cfg, x).expect("valid configuration");
        t.check(dense(&built, points) == bs[x], || format!("b_{x} disagrees with the formula"));
        let norm = oracle::l1(&bs[x]);
        t.check(norm >= lower, || format!("‖b_{x}‖ = {} < {}", rational::format(&norm), rational::format(&lower)));
        for (y, value) in bs[x].iter().enumerate() {
            if *value != rational::zero() {
                t.check(s.contains(&(y, x)), || format!("support point {y} of b_{x} escapes (⋃Sᵢ)∘E^(n^k)"));
            }
        }
    }
    for z in 0..points {
        for w in 0..points {
            if let Some(h) = d[z][w] {
                let diff = oracle::l1_distance(&bs[z], &bs[w]);
                let cap = &lipschitz * int(h as i64);
                t.check(diff <= cap, || {
                    format!("‖b_{z} − b_{w}‖ = {} > {}", rational::format(&diff), rational::format(&cap))
                });
            }
        }
    }
    let verdict = verify_b_bounds(cfg).expect("valid configuration");
    t.check(verdict.is_ok(), || format!("verify_b_bounds rejects a valid configuration: {verdict}"));
}

pub fn b_bounds() -> Verdict {
    let mut t = Tally::default();
    let mut r = rng(4);
    let shapes: Vec<(u64, usize)> = [2, 3, 5].iter().flat_map(|&n| (1..=3).map(move |k| (n, k))).collect();
    for i in 0..200 {
        let (n, k) = shapes[i % shapes.len()];
        let points = r.gen_range(1..=10);
        let cfg = gen::property_a_config(&mut r, points, n, k);
        b_checks(&mut t, &cfg);
    }
    let p5 = p5_property_a();
    b_checks(&mut t, &p5);
    let b2 = build_b(&p5, 2).expect("valid");
    let b0 = build_b(&p5, 0).expect("valid");
    t.check(b2.entries().iter().eq([(&0, &ratio(27, 4))]), || format!("P5 b_2 = {b2:?}, expected {{0: 27/4}}"));
    t.check(b0.entries().iter().eq([(&0, &ratio(27, 2))]), || format!("P5 b_0 = {b0:?}, expected {{0: 27/2}}"));
    t.check(b2.norm() == ratio(27, 4) && b0.norm() == ratio(27, 2), || "P5 norms".into());
    t.verdict("200 random valid configurations (n ∈ {2,3,5} × k ∈ {1,2,3} in rotation) and the P5 worked example")
}

/// Smallest `n` with `8/(n − 1) < ε`.
fn n_min(epsilon: &Rational) -> u64 {
    (2..).find(|&n| ratio(8, n as i64 - 1) < *epsilon).expect("some n works")
}

struct Instance {
    name: String,
    cert: PropertyCCertificate,
    base: Entourage,
    n: u64,
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Corpus certificates, each read at its first level as the base relation.
fn corpus_certificates() -> Vec<(String, PropertyCCertificate)> {
    let mut out = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let name = path.file_name().expect("file").to_string_lossy().into_owned();
        match load(&path) {
            Ok(Document::Certificate(Certificate::PropertyC(c))) => out.push((name, c)),
            Ok(Document::Certificate(Certificate::Dimension(c))) => {
                out.push((name, c.to_property_c().expect("dimension certificate reads as a cover")))
            }
            _ => {}
        }
    }
    out
}

fn instances() -> (Vec<Instance>, usize) {
    let spaces: Vec<(&str, Entourage)> =
        vec![("P5", band(5, 1)), ("P9", band(9, 1)), ("two clusters", clusters(6, 3))];
    let ns: Vec<u64> = (2..=17).collect();
    let mut out = Vec::new();
    for (name, base) in &spaces {
        let points = base.points();
        for &n in &ns {
            let levels: Vec<Entourage> = (1..=points as u32)
                .map(|i| base.power(n.checked_pow(i).unwrap_or(u64::MAX)))
                .collect();
            let challenge = Filtration::validated(Space::new(points).expect("nonempty"), levels).expect("monotone");
            let bounds = [base.power(n), base.power(n * n), Entourage::full(points)];
            for bound in bounds {
                if let Some(cert) = greedy_property_c(&challenge, &bound, None).expect("shapes agree") {
                    out.push(Instance { name: format!("{name} greedy"), cert, base: base.clone(), n });
                }
            }
        }
    }
    let mut from_corpus = 0;
    for (name, cert) in corpus_certificates() {
        let base = cert.challenge.level(0).clone();
        for &n in &ns {
            if PropertyAConfig::from_property_c(&cert, base.clone(), n).is_ok() {
                from_corpus += 1;
                out.push(Instance { name: name.clone(), cert: cert.clone(), base: base.clone(), n });
            }
        }
    }
    (out, from_corpus)
}

pub fn property_a() -> Verdict {
    let mut t = Tally::default();
    let epsilons = [int(9), int(5), int(3), int(1)];
    let (all, from_corpus) = instances();
    let mut runs = 0;
    for inst in &all {
        let verified = inst.cert.verify();
        t.check(verified.is_ok(), || format!("{}: certificate does not verify: {verified}", inst.name));
        let Ok(cfg) = PropertyAConfig::from_property_c(&inst.cert, inst.base.clone(), inst.n) else {
            t.check(false, || format!("{}: challenge does not fit n = {}", inst.name, inst.n));
            continue;
        };
        let points = cfg.points();
        let k = cfg.levels.len() as u32;
        let e = oracle::pairs(&inst.base);
        for eps in &epsilons {
            // Each ε is run on its first eight admissible n, and ε = 1 also at 17.
            let lo = n_min(eps);
            if inst.n < lo || (inst.n >= lo + 8 && !(inst.n == 17 && *eps == int(1))) {
                continue;
            }
            runs += 1;
            let n = inst.n;
            let w = match build_witness(&cfg, eps) {
                Ok(w) => w,
                Err(err) => {
                    t.check(false, || format!("{} n={n}: build_witness failed: {err}", inst.name));
                    continue;
                }
            };
            let verdict = verify_witness(&w, &inst.base);
            t.check(verdict.is_ok(), || format!("{} n={n}: witness rejected: {verdict}", inst.name));
            t.check(w.epsilon_bound == ratio(8, n as i64 - 1) && w.epsilon_bound < *eps, || {
                format!("epsilon_bound {} for n = {n}", rational::format(&w.epsilon_bound))
            });
            let a: Vec<Vec<Rational>> = w.a.iter().map(|v| dense(v, points)).collect();
            let finer = ratio(8 * (n.pow(k) - 1) as i64, (n.pow(k) * (n - 1)) as i64);
            for (x, ax) in a.iter().enumerate() {
                t.check(oracle::l1(ax) == rational::one(), || format!("‖a_{x}‖ ≠ 1 for {} n={n}", inst.name));
                for (s, value) in ax.iter().enumerate() {
                    if *value != rational::zero() {
                        t.check(w.support_bound.contains(s, x), || format!("supp a_{x} ∌ {s} in S[{x}]"));
                    }
                }
            }
            for &(x, y) in &e {
                let variation = oracle::l1_distance(&a[x], &a[y]);
                t.check(variation <= finer, || {
                    format!("‖a_{x} − a_{y}‖ = {} > {} ({} n={n})", rational::format(&variation), rational::format(&finer), inst.name)
                });
                t.check(variation <= w.epsilon_bound, || format!("variation above 8/(n−1) at ({x},{y})"));
            }
            let bound: Pairs = cfg.levels.iter().flat_map(|l| oracle::pairs(&l.bound)).collect();
            let shape = oracle::compose(&bound, &oracle_power(&e, points, n.pow(k)));
            t.check(oracle::pairs(&w.support_bound).is_subset(&shape), || {
                format!("{} n={n}: support relation exceeds (⋃Sᵢ)∘E^(n^k)", inst.name)
            });
        }
    }
    t.verdict(&format!(
        "{runs} (certificate, n, ε) runs over {} certificates ({from_corpus} from the corpus), ε ∈ {{9,5,3,1}} with \
         the first eight admissible n each and n = 17 at ε = 1",
        all.len()
    ))
}
