//! Referees for the decomposition games and the cover game.
//!
//! Player one asserts entourages; player two answers. A referee checks every
//! answer and stops at the first invalid one, so a transcript is always a
//! sequence of verified rounds followed by an outcome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::WeakDecomposition;
use crate::covers::{
    boundedness_failure, disjointness_failure, saturated_union, saturation_bound, saturation_challenge,
    SubsetFamily,
};
use crate::error::{Error, Result};
use crate::relations::{Entourage, PointSet};
use crate::verdict::{Failure, Verdict};

/// A finite challenge `L₁ ⊆ … ⊆ L_m` with the bound a winning family must
/// respect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawChallenge")]
pub struct Challenge {
    pub entourages: Vec<Entourage>,
    pub win_bound: Entourage,
}

#[derive(Deserialize)]
struct RawChallenge {
    entourages: Vec<Entourage>,
    win_bound: Entourage,
}

impl TryFrom<RawChallenge> for Challenge {
    type Error = Error;

    fn try_from(raw: RawChallenge) -> Result<Self> {
        Challenge::new(raw.entourages, raw.win_bound)
    }
}

impl Challenge {
    pub fn new(entourages: Vec<Entourage>, win_bound: Entourage) -> Result<Self> {
        let points = win_bound.points();
        win_bound.require_reflexive_symmetric("win bound")?;
        for (i, l) in entourages.iter().enumerate() {
            if l.points() != points {
                return Err(Error::SpaceMismatch { left: points, right: l.points() });
            }
            l.require_reflexive_symmetric(&format!("challenge entourage {i}"))?;
            if i > 0 {
                if let Some(pair) = entourages[i - 1].first_missing_from(l) {
                    return Err(Error::Precondition(format!(
                        "challenge entourage {} pair {pair:?} missing from entourage {i}",
                        i - 1
                    )));
                }
            }
        }
        Ok(Challenge { entourages, win_bound })
    }

    /// `l` repeated `rounds` times.
    pub fn constant(l: Entourage, rounds: usize, win_bound: Entourage) -> Result<Self> {
        Challenge::new(vec![l; rounds], win_bound)
    }

    pub fn points(&self) -> usize {
        self.win_bound.points()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    One,
    Two,
}

/// A new family together with a decomposition of the current family over it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub family: SubsetFamily,
    pub decomposition: WeakDecomposition,
}

impl Move {
    pub fn new(decomposition: WeakDecomposition) -> Self {
        Move { family: decomposition.target.clone(), decomposition }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "response", rename_all = "snake_case")]
pub enum Response {
    Decompose(Move),
    Cover { family: SubsetFamily },
    Resign { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub asserted: Entourage,
    pub response: Response,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Won,
    Lost { reason: String },
    Invalid { mover: Player, verdict: Verdict },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Decomposition,
    Cover,
}

/// Everything a referee saw. For the cover game `final_family` merges every
/// family played.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub kind: GameKind,
    pub initial: SubsetFamily,
    pub win_bound: Entourage,
    pub rounds: Vec<Round>,
    pub outcome: Outcome,
    pub final_family: SubsetFamily,
}

impl GameTranscript {
    pub fn won(&self) -> bool {
        self.outcome == Outcome::Won
    }

    pub fn asserted(&self) -> Vec<Entourage> {
        self.rounds.iter().map(|r| r.asserted.clone()).collect()
    }
}

/// Player two in a decomposition game. Strategies are built fresh for each
/// game; the reply may depend on the calls made so far but on nothing else.
pub trait Decomposer {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response;
}

/// Player two in the cover game; `covered` is everything covered so far.
pub trait CoverStrategy {
    fn respond(&mut self, asserted: &Entourage, covered: &PointSet) -> Response;
}

/// Player one; `None` means no further assertion.
pub trait Challenger {
    fn next(&mut self, rounds: &[Round]) -> Option<Entourage>;
}

impl<T: Decomposer + ?Sized> Decomposer for Box<T> {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        (**self).respond(asserted, current)
    }
}

impl<T: CoverStrategy + ?Sized> CoverStrategy for Box<T> {
    fn respond(&mut self, asserted: &Entourage, covered: &PointSet) -> Response {
        (**self).respond(asserted, covered)
    }
}

impl<T: Challenger + ?Sized> Challenger for Box<T> {
    fn next(&mut self, rounds: &[Round]) -> Option<Entourage> {
        (**self).next(rounds)
    }
}

/// Asserts a fixed sequence, then stops.
#[derive(Debug, Clone)]
pub struct SequenceChallenger {
    levels: Vec<Entourage>,
}

impl SequenceChallenger {
    pub fn new(levels: Vec<Entourage>) -> Self {
        SequenceChallenger { levels }
    }
}

impl Challenger for SequenceChallenger {
    fn next(&mut self, rounds: &[Round]) -> Option<Entourage> {
        self.levels.get(rounds.len()).cloned()
    }
}

/// Asserts the same entourage forever.
#[derive(Debug, Clone)]
pub struct ConstantChallenger {
    level: Entourage,
}

impl ConstantChallenger {
    pub fn new(level: Entourage) -> Self {
        ConstantChallenger { level }
    }
}

impl Challenger for ConstantChallenger {
    fn next(&mut self, _: &[Round]) -> Option<Entourage> {
        Some(self.level.clone())
    }
}

/// Walks up a ladder of entourages, each round staying put or climbing to a
/// uniformly chosen higher rung. The ladder should be increasing.
#[derive(Debug, Clone)]
pub struct RandomChallenger {
    ladder: Vec<Entourage>,
    rung: usize,
    rng: ChaCha8Rng,
}

impl RandomChallenger {
    pub fn new(ladder: Vec<Entourage>, seed: u64) -> Result<Self> {
        if ladder.is_empty() {
            return Err(Error::Precondition("empty ladder".into()));
        }
        Ok(RandomChallenger { ladder, rung: 0, rng: ChaCha8Rng::seed_from_u64(seed) })
    }
}

impl Challenger for RandomChallenger {
    fn next(&mut self, _: &[Round]) -> Option<Entourage> {
        self.rung = self.rng.gen_range(self.rung..self.ladder.len());
        Some(self.ladder[self.rung].clone())
    }
}

/// Player one in the cover game: starts at `initial`, then answers a family
/// `𝒰` played at `L` with `saturation_challenge(L, 𝒰)`.
#[derive(Debug, Clone)]
pub struct Adversary {
    initial: Entourage,
}

impl Adversary {
    pub fn new(initial: Entourage) -> Result<Self> {
        initial.require_reflexive_symmetric("initial assertion")?;
        Ok(Adversary { initial })
    }
}

impl Challenger for Adversary {
    fn next(&mut self, rounds: &[Round]) -> Option<Entourage> {
        let Some(last) = rounds.last() else {
            return Some(self.initial.clone());
        };
        match &last.response {
            Response::Cover { family } => saturation_challenge(&last.asserted, family).ok(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArityRule {
    AtMost(usize),
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameConfig {
    pub win_bound: Entourage,
    pub max_rounds: usize,
    pub arity: ArityRule,
}

fn assertion_failure(asserted: &Entourage, points: usize) -> Option<Failure> {
    if asserted.points() != points {
        return Some(Failure::SpaceMismatch { expected: points, found: asserted.points() });
    }
    if let Some(point) = asserted.first_non_reflexive() {
        return Some(Failure::NotReflexive { level: None, point });
    }
    asserted.first_asymmetric().map(|pair| Failure::NotSymmetric { level: None, pair })
}

fn check_move(asserted: &Entourage, current: &SubsetFamily, mv: &Move, arity: ArityRule) -> Verdict {
    let dec = &mv.decomposition;
    let mut v = Verdict::holds();
    if dec.source != *current {
        v.push(Failure::Other { message: "decomposition source is not the current family".into() });
    }
    if dec.target != mv.family {
        v.push(Failure::Other { message: "decomposition target is not the announced family".into() });
    }
    if dec.entourage != *asserted {
        v.push(Failure::WrongEntourage);
    }
    if let ArityRule::AtMost(limit) = arity {
        if dec.arity > limit {
            v.push(Failure::ArityExceeded { limit, found: dec.arity });
        }
    }
    if v.is_ok() {
        v.absorb(dec.verify());
    }
    v
}

fn bounded(family: &SubsetFamily, bound: &Entourage) -> bool {
    boundedness_failure(family, bound, None).is_none()
}

/// Plays from `initial` until player two reaches a family bounded by the win
/// bound, resigns, errs, or `max_rounds` pass.
pub fn play_decomposition_game(
    initial: &SubsetFamily,
    p1: &mut dyn Challenger,
    p2: &mut dyn Decomposer,
    config: &GameConfig,
) -> GameTranscript {
    let points = initial.points();
    let mut current = initial.clone();
    let mut rounds = Vec::new();
    let finish = |rounds, outcome, current| GameTranscript {
        kind: GameKind::Decomposition,
        initial: initial.clone(),
        win_bound: config.win_bound.clone(),
        rounds,
        outcome,
        final_family: current,
    };
    if config.win_bound.points() != points {
        let verdict = Verdict::fails(Failure::SpaceMismatch { expected: points, found: config.win_bound.points() });
        return finish(rounds, Outcome::Invalid { mover: Player::One, verdict }, current);
    }
    if bounded(&current, &config.win_bound) {
        return finish(rounds, Outcome::Won, current);
    }
    for _ in 0..config.max_rounds {
        let Some(asserted) = p1.next(&rounds) else {
            return finish(rounds, Outcome::Lost { reason: "challenge exhausted".into() }, current);
        };
        if let Some(f) = assertion_failure(&asserted, points) {
            let outcome = Outcome::Invalid { mover: Player::One, verdict: Verdict::fails(f) };
            return finish(rounds, outcome, current);
        }
        let response = p2.respond(&asserted, &current);
        let verdict = match &response {
            Response::Decompose(mv) => check_move(&asserted, &current, mv, config.arity),
            Response::Cover { .. } => {
                Verdict::fails(Failure::Other { message: "cover answer in a decomposition game".into() })
            }
            Response::Resign { reason } => {
                let outcome = Outcome::Lost { reason: reason.clone() };
                rounds.push(Round { asserted, response });
                return finish(rounds, outcome, current);
            }
        };
        if !verdict.is_ok() {
            rounds.push(Round { asserted, response });
            return finish(rounds, Outcome::Invalid { mover: Player::Two, verdict }, current);
        }
        if let Response::Decompose(mv) = &response {
            current = mv.family.clone();
        }
        rounds.push(Round { asserted, response });
        if bounded(&current, &config.win_bound) {
            return finish(rounds, Outcome::Won, current);
        }
    }
    let reason = format!("no bounded family within {} rounds", config.max_rounds);
    finish(rounds, Outcome::Lost { reason }, current)
}

/// The finite decomposition game: two-part decompositions.
pub fn play_fdc(
    initial: &SubsetFamily,
    p1: &mut dyn Challenger,
    p2: &mut dyn Decomposer,
    win_bound: &Entourage,
    max_rounds: usize,
) -> GameTranscript {
    let config = GameConfig { win_bound: win_bound.clone(), max_rounds, arity: ArityRule::AtMost(2) };
    play_decomposition_game(initial, p1, p2, &config)
}

/// The weak game: decompositions of any arity.
pub fn play_weak(
    initial: &SubsetFamily,
    p1: &mut dyn Challenger,
    p2: &mut dyn Decomposer,
    win_bound: &Entourage,
    max_rounds: usize,
) -> GameTranscript {
    let config = GameConfig { win_bound: win_bound.clone(), max_rounds, arity: ArityRule::Any };
    play_decomposition_game(initial, p1, p2, &config)
}

/// The strong game: player one commits to the whole challenge up front.
pub fn run_sfdc(initial: &SubsetFamily, challenge: &Challenge, p2: &mut dyn Decomposer) -> GameTranscript {
    let mut p1 = SequenceChallenger::new(challenge.entourages.clone());
    let config = GameConfig {
        win_bound: challenge.win_bound.clone(),
        max_rounds: challenge.entourages.len(),
        arity: ArityRule::AtMost(2),
    };
    play_decomposition_game(initial, &mut p1, p2, &config)
}

/// Reads a won decomposition game as a committed challenge (the assertions
/// made) and the moves that answered it.
pub fn transcript_to_sfdc(t: &GameTranscript) -> Result<(Challenge, Vec<Move>)> {
    if t.kind != GameKind::Decomposition || !t.won() {
        return Err(Error::Precondition("transcript is not a won decomposition game".into()));
    }
    let challenge = Challenge::new(t.asserted(), t.win_bound.clone())?;
    let moves = t
        .rounds
        .iter()
        .map(|r| match &r.response {
            Response::Decompose(mv) => Ok(mv.clone()),
            _ => Err(Error::Precondition("round without a decomposition".into())),
        })
        .collect::<Result<_>>()?;
    Ok((challenge, moves))
}

/// The cover game on `domain`: each round player two plays a family that is
/// disjoint at the assertion and bounded by `win_bound`; it wins once the
/// families cover `domain`.
pub fn gamec_play(
    points: usize,
    domain: &PointSet,
    p1: &mut dyn Challenger,
    p2: &mut dyn CoverStrategy,
    win_bound: &Entourage,
    max_rounds: usize,
) -> Result<GameTranscript> {
    let initial = SubsetFamily::normalized(points, [domain.clone()])?;
    if win_bound.points() != points {
        return Err(Error::SpaceMismatch { left: points, right: win_bound.points() });
    }
    let mut rounds = Vec::new();
    let mut played = SubsetFamily::empty(points);
    let finish = |rounds, outcome, played| GameTranscript {
        kind: GameKind::Cover,
        initial: initial.clone(),
        win_bound: win_bound.clone(),
        rounds,
        outcome,
        final_family: played,
    };
    let mut covered = PointSet::new();
    if domain.is_subset(&covered) {
        return Ok(finish(rounds, Outcome::Won, played));
    }
    for _ in 0..max_rounds {
        let Some(asserted) = p1.next(&rounds) else {
            return Ok(finish(rounds, Outcome::Lost { reason: "challenge exhausted".into() }, played));
        };
        if let Some(f) = assertion_failure(&asserted, points) {
            let outcome = Outcome::Invalid { mover: Player::One, verdict: Verdict::fails(f) };
            return Ok(finish(rounds, outcome, played));
        }
        let response = p2.respond(&asserted, &covered);
        let verdict = match &response {
            Response::Cover { family } if family.points() != points => {
                Verdict::fails(Failure::SpaceMismatch { expected: points, found: family.points() })
            }
            Response::Cover { family } => {
                let mut v: Verdict = disjointness_failure(family, &asserted, None).into();
                v.absorb(boundedness_failure(family, win_bound, None).into());
                v
            }
            Response::Decompose(_) => {
                Verdict::fails(Failure::Other { message: "decomposition answer in the cover game".into() })
            }
            Response::Resign { reason } => {
                let outcome = Outcome::Lost { reason: reason.clone() };
                rounds.push(Round { asserted, response });
                return Ok(finish(rounds, outcome, played));
            }
        };
        if !verdict.is_ok() {
            rounds.push(Round { asserted, response });
            return Ok(finish(rounds, Outcome::Invalid { mover: Player::Two, verdict }, played));
        }
        if let Response::Cover { family } = &response {
            covered.extend(family.covered());
            played = played.merge(family)?;
        }
        rounds.push(Round { asserted, response });
        if domain.is_subset(&covered) {
            return Ok(finish(rounds, Outcome::Won, played));
        }
    }
    let reason = format!("domain not covered within {max_rounds} rounds");
    Ok(finish(rounds, Outcome::Lost { reason }, played))
}

/// Folds a won cover game into one family disjoint at the first assertion:
/// `𝒱_k = 𝒰_k`, `𝒱_i = 𝒱_{i+1} ∪_{Lᵢ} 𝒰ᵢ`. Each assertion must contain
/// `saturation_challenge` of the previous round. Returns the family and a
/// relation bounding it.
pub fn gamec_collapse(t: &GameTranscript) -> Result<(SubsetFamily, Entourage)> {
    if t.kind != GameKind::Cover || !t.won() {
        return Err(Error::Precondition("transcript is not a won cover game".into()));
    }
    let points = t.initial.points();
    let mut steps = Vec::with_capacity(t.rounds.len());
    for r in &t.rounds {
        match &r.response {
            Response::Cover { family } => steps.push((&r.asserted, family)),
            _ => return Err(Error::Precondition("round without a family".into())),
        }
    }
    for (i, w) in steps.windows(2).enumerate() {
        let required = saturation_challenge(w[0].0, w[0].1)?;
        if let Some(pair) = required.first_missing_from(w[1].0) {
            return Err(Error::Precondition(format!(
                "assertion {} lacks pair {pair:?} required after round {i}",
                i + 1
            )));
        }
    }
    let Some(((_, last), rest)) = steps.split_last() else {
        return Ok((SubsetFamily::empty(points), t.win_bound.clone()));
    };
    let mut family = (*last).clone();
    let mut bound = t.win_bound.clone();
    for (l, u) in rest.iter().rev() {
        bound = bound.union(&saturation_bound(&family, u, l)?)?;
        family = saturated_union(&family, u, l)?;
    }
    let first = steps[0].0;
    if let Some(f) = disjointness_failure(&family, first, None).or_else(|| boundedness_failure(&family, &bound, None)) {
        return Err(Error::Precondition(format!("collapsed family fails: {f}")));
    }
    Ok((family, bound))
}
