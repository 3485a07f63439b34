//! Small named instances shared by tests, benchmarks and the sample corpus.

use crate::covers::{PropertyCCertificate, SubsetFamily};
use crate::decomposition::{Decomposition, Part};
use crate::property_a::{Level, PropertyAConfig};
use crate::relations::{Entourage, Filtration, PointSet, Space};

/// `{(i, j) : |i − j| ≤ r}` on `0..n`: the radius-`r` relation of the path.
pub fn band(n: usize, r: usize) -> Entourage {
    Entourage::from_fn(n, |i, j| i.abs_diff(j) <= r)
}

pub fn set(points: &[usize]) -> PointSet {
    points.iter().copied().collect()
}

/// Panics on out-of-range points; fixtures are written by hand.
pub fn family(n: usize, members: &[&[usize]]) -> SubsetFamily {
    SubsetFamily::new(n, members.iter().map(|m| set(m)).collect()).expect("fixture family")
}

/// Clusters of `size` consecutive points; related iff in the same cluster.
pub fn clusters(n: usize, size: usize) -> Entourage {
    Entourage::from_fn(n, |i, j| i / size == j / size)
}

/// The path on nine points split into a bounded family and a two-part
/// decomposition of it at `band(9, 1)`.
pub fn p9_split() -> (SubsetFamily, Decomposition) {
    let y = family(9, &[&[0, 1], &[4, 5], &[8], &[2, 3], &[6, 7]]);
    let dec = Decomposition {
        target: (0..9).collect(),
        parts: vec![
            Part::from_blocks(vec![set(&[0, 1]), set(&[4, 5]), set(&[8])]),
            Part::from_blocks(vec![set(&[2, 3]), set(&[6, 7])]),
        ],
    };
    (y, dec)
}

/// Two families answering the challenge `band(9, 1) ⊆ band(9, 3)` with
/// bound `band(9, 2)`.
pub fn p9_property_c() -> PropertyCCertificate {
    let challenge = Filtration::validated(Space::new(9).expect("nonempty"), vec![band(9, 1), band(9, 3)])
        .expect("monotone levels");
    PropertyCCertificate {
        challenge,
        families: vec![family(9, &[&[0, 1], &[3, 4, 5], &[8]]), family(9, &[&[2], &[6, 7]])],
        bound: band(9, 2),
        domain: None,
    }
}

/// The path on five points with n = 3: the endpoints, then everything.
pub fn p5_property_a() -> PropertyAConfig {
    PropertyAConfig {
        base: band(5, 1),
        n: 3,
        levels: vec![
            Level::with_default_representatives(family(5, &[&[0], &[4]]), Entourage::full(5)),
            Level::with_default_representatives(family(5, &[&[0, 1, 2, 3, 4]]), Entourage::full(5)),
        ],
    }
}
