//! Regenerates the sample documents under `corpus/`.
//!
//! Usage: cargo run -p coarse-cli --example write_corpus -- <dir>

use std::fs;
use std::path::PathBuf;

use coarse_cli::{Certificate, Document, MetricSpace};
use coarse_core::covers::{search_dimension_certificate, DimensionCertificate, SearchMode, SearchOutcome, SubsetFamily};
use coarse_core::decomposition::{
    gamec_play, play_fdc, Adversary, Challenge, CertificateCoverStrategy, ConstantChallenger, DimensionStrategy,
    Decomposition, Part, WeakDecomposition,
};
use coarse_core::fixtures::{band, clusters, family, p5_property_a, p9_property_c, p9_split, set};
use coarse_core::maps::CoarseMap;
use coarse_core::metric::FiniteMetric;
use coarse_core::property_a::{build_witness, Level, PropertyAConfig};
use coarse_core::rational::int;
use coarse_core::relations::{Entourage, Filtration, Space};

fn path_space(n: usize, radii: &[i64]) -> MetricSpace {
    MetricSpace { metric: FiniteMetric::path(n).unwrap(), scales: radii.iter().map(|&r| int(r)).collect() }
}

/// Two clusters of three points, distance 1 inside a cluster and 5 across.
fn two_clusters() -> MetricSpace {
    let dist = (0..6)
        .map(|i| (0..6).map(|j| int(if i == j { 0 } else if i / 3 == j / 3 { 1 } else { 5 })).collect())
        .collect();
    let metric = FiniteMetric::new(Space::new(6).unwrap(), dist).unwrap();
    MetricSpace { metric, scales: vec![int(1)] }
}

fn whole(n: usize) -> SubsetFamily {
    SubsetFamily::new(n, vec![(0..n).collect()]).unwrap()
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    fs::create_dir_all(dir.join("invalid")).unwrap();
    let mut docs: Vec<(&str, Document)> = Vec::new();

    let point = MetricSpace { metric: FiniteMetric::path(1).unwrap(), scales: vec![] };
    let p3 = path_space(3, &[1, 2]);
    let p5 = path_space(5, &[1, 2, 4]);
    let p9 = path_space(9, &[1, 2, 3]);
    let clustered = two_clusters();
    let p3_levels = p3.metric.filtration(&p3.scales).unwrap();
    let p5_levels = p5.metric.filtration(&p5.scales).unwrap();

    let p9_dimension = match search_dimension_certificate(&band(9, 1), &band(9, 1), 1, SearchMode::Exact, 16, None)
        .unwrap()
    {
        SearchOutcome::Found(c) => c,
        other => panic!("P9 has a dimension-one cover: {other:?}"),
    };
    let clusters_dimension = DimensionCertificate {
        scale: clusters(6, 3),
        families: vec![family(6, &[&[0, 1, 2], &[3, 4, 5]])],
        bound: clusters(6, 3),
        domain: None,
    };
    let (split, dec) = p9_split();
    let p9_decomposition = WeakDecomposition {
        source: whole(9),
        target: split.clone(),
        entourage: band(9, 1),
        arity: 2,
        pieces: vec![dec],
    };
    let p3_decomposition = WeakDecomposition {
        source: whole(3),
        target: family(3, &[&[0], &[1], &[2]]),
        entourage: band(3, 1),
        arity: 2,
        pieces: vec![Decomposition {
            target: (0..3).collect(),
            parts: vec![Part::from_blocks(vec![set(&[0]), set(&[2])]), Part::from_blocks(vec![set(&[1])])],
        }],
    };
    let config = p5_property_a();
    let witness = build_witness(&config, &int(5)).unwrap();
    // Valid for every n: the clusters stay apart at every power of the base.
    let clusters_config = PropertyAConfig {
        base: clusters(6, 3),
        n: 17,
        levels: vec![Level::with_default_representatives(family(6, &[&[0, 1, 2], &[3, 4, 5]]), clusters(6, 3))],
    };
    let halve = CoarseMap::validated(p5_levels.clone(), p3_levels.clone(), vec![0, 0, 1, 1, 2]).unwrap();
    let double = CoarseMap::validated(p3_levels, p5_levels, vec![0, 2, 4]).unwrap();
    let challenge = Challenge::new(vec![band(9, 1), band(9, 2)], band(9, 1)).unwrap();

    let fdc = play_fdc(
        &whole(9),
        &mut ConstantChallenger::new(band(9, 1)),
        &mut DimensionStrategy::new(p9_dimension.clone()),
        &band(9, 1),
        4,
    );
    let gamec = gamec_play(
        6,
        &(0..6).collect(),
        &mut Adversary::new(clusters(6, 3)).unwrap(),
        &mut CertificateCoverStrategy::new(clusters_dimension.clone()),
        &clusters(6, 3),
        4,
    )
    .unwrap();
    let p9_filtration =
        Filtration::validated(Space::new(9).unwrap(), vec![band(9, 1), band(9, 2), Entourage::full(9)]).unwrap();

    docs.push(("point.json", Document::Space(point)));
    docs.push(("p3.json", Document::Space(p3)));
    docs.push(("p5.json", Document::Space(p5)));
    docs.push(("p9.json", Document::Space(p9)));
    docs.push(("p9_filtration.json", Document::Filtration(p9_filtration)));
    docs.push(("two_clusters.json", Document::Space(clustered)));
    docs.push(("p3_family.json", Document::Family(family(3, &[&[0], &[1, 2]]))));
    docs.push(("p3_decomposition.json", Document::Certificate(Certificate::Decomposition(p3_decomposition))));
    docs.push(("p9_split_family.json", Document::Family(split)));
    docs.push(("p9_dimension.json", Document::Certificate(Certificate::Dimension(p9_dimension))));
    docs.push(("p9_property_c.json", Document::Certificate(Certificate::PropertyC(p9_property_c()))));
    docs.push(("p9_decomposition.json", Document::Certificate(Certificate::Decomposition(p9_decomposition))));
    docs.push(("p9_challenge.json", Document::Certificate(Certificate::Challenge(challenge))));
    docs.push(("two_clusters_dimension.json", Document::Certificate(Certificate::Dimension(clusters_dimension))));
    docs.push(("p5_property_a.json", Document::Certificate(Certificate::PropertyAConfig(config))));
    docs.push(("p5_property_a_witness.json", Document::Certificate(Certificate::PropertyAWitness(witness))));
    docs.push(("two_clusters_property_a.json", Document::Certificate(Certificate::PropertyAConfig(clusters_config))));
    docs.push(("p5_to_p3.json", Document::Certificate(Certificate::Map(halve))));
    docs.push(("p3_to_p5.json", Document::Certificate(Certificate::Map(double))));
    docs.push(("p9_fdc_transcript.json", Document::Transcript(fdc)));
    docs.push(("two_clusters_gamec_transcript.json", Document::Transcript(gamec)));

    for (name, doc) in &docs {
        fs::write(dir.join(name), coarse_cli::document::render(doc)).unwrap();
    }
    // Point 9 does not exist on five points; loading must fail.
    fs::write(
        dir.join("invalid/p5_family_out_of_range.json"),
        "{\n  \"kind\": \"family\",\n  \"payload\": {\n    \"points\": 5,\n    \"members\": [\n      [\n        0,\n        9\n      ]\n    ]\n  }\n}\n",
    )
    .unwrap();
    println!("wrote {} documents to {}", docs.len() + 1, dir.display());
}
