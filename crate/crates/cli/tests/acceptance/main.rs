//! Acceptance criteria, one PASS/FAIL line each. Every check is exact: no
//! tolerances anywhere. Exits non-zero when any criterion fails.

mod algebra;
mod gen;
mod oracle;
mod witness;

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result of one criterion: whether it holds and what was checked.
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn pass(detail: impl Into<String>) -> Self {
        Verdict { pass: true, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Verdict { pass: false, detail: detail.into() }
    }
}

/// Collects the first counterexample while counting checks.
#[derive(Default)]
pub struct Tally {
    pub checks: u64,
    pub failure: Option<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn verdict(self, scope: &str) -> Verdict {
        match self.failure {
            None => Verdict::pass(format!("{} checks: {scope}", self.checks)),
            Some(f) => Verdict::fail(format!("{f} ({} checks: {scope})", self.checks)),
        }
    }
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

type Criterion = (u32, &'static str, fn() -> Verdict);

const CRITERIA: &[Criterion] = &[
    (1, "relation algebra laws", algebra::laws),
    (2, "hop distance clauses", algebra::distance),
    (3, "phi: one nonzero term, Phi 1-Lipschitz", witness::phi),
    (4, "b^n_x: norm, support, Lipschitz", witness::b_bounds),
    (5, "property C to property A witnesses", witness::property_a),
    (6, "saturated union", games::saturation),
    (7, "composing weak decompositions", games::compose),
    (8, "implication pipeline on P9", games::pipeline),
    (9, "game-theoretic property C at desk scale", games::game_c),
    (10, "transfer and permanence", games::transfer),
    (11, "CLI determinism and re-verification", cli::documents),
];

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for &(id, name, run) in CRITERIA {
        let start = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {id:>2} {name} [{:.1}s]: {}", start.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
