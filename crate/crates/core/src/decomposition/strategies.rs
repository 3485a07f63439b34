//! Ready-made players.

use std::collections::VecDeque;

use super::games::{CoverStrategy, Decomposer, Move, Response};
use super::{Decomposition, Part, WeakDecomposition};
use crate::covers::{
    boundedness_failure, search_dimension_certificate, DimensionCertificate, SearchMode, SearchOutcome,
    SubsetFamily,
};
use crate::relations::{Entourage, PointSet};

fn resign(reason: impl Into<String>) -> Response {
    Response::Resign { reason: reason.into() }
}

/// Answers any assertion inside `scale` by cutting every current member
/// along the certificate's families; resigns otherwise.
#[derive(Debug, Clone)]
pub struct DimensionStrategy {
    cert: DimensionCertificate,
}

impl DimensionStrategy {
    pub fn new(cert: DimensionCertificate) -> Self {
        DimensionStrategy { cert }
    }
}

impl Decomposer for DimensionStrategy {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        if let Some(pair) = asserted.first_missing_from(&self.cert.scale) {
            return resign(format!("assertion pair {pair:?} exceeds the certified scale"));
        }
        let arity = self.cert.families.len();
        let pieces: Vec<Decomposition> = current
            .members()
            .iter()
            .map(|z| Decomposition {
                target: z.clone(),
                parts: self
                    .cert
                    .families
                    .iter()
                    .map(|f| Part::from_blocks(f.restrict(z).members().to_vec()))
                    .collect(),
            })
            .collect();
        let blocks = pieces.iter().flat_map(|p| p.parts.iter().flat_map(|part| part.blocks.iter().cloned()));
        let target = match SubsetFamily::normalized(current.points(), blocks) {
            Ok(t) => t,
            Err(e) => return resign(e.to_string()),
        };
        Response::Decompose(Move::new(WeakDecomposition {
            source: current.clone(),
            target,
            entourage: asserted.clone(),
            arity,
            pieces,
        }))
    }
}

/// Replays fixed moves in order, resigning when an assertion differs from
/// the entourage the next move was made for.
#[derive(Debug, Clone)]
pub struct ScriptedStrategy {
    moves: VecDeque<Move>,
}

impl ScriptedStrategy {
    pub fn new(moves: Vec<Move>) -> Self {
        ScriptedStrategy { moves: moves.into() }
    }

    pub fn from_chain(chain: Vec<WeakDecomposition>) -> Self {
        ScriptedStrategy::new(chain.into_iter().map(Move::new).collect())
    }
}

impl Decomposer for ScriptedStrategy {
    fn respond(&mut self, asserted: &Entourage, _: &SubsetFamily) -> Response {
        match self.moves.pop_front() {
            Some(mv) if mv.decomposition.entourage == *asserted => Response::Decompose(mv),
            Some(_) => resign("assertion differs from the scripted one"),
            None => resign("script exhausted"),
        }
    }
}

/// Splits every unbounded member into `parts` families of blocks bounded by
/// `bound`, found by search; members already bounded stay whole.
#[derive(Debug, Clone)]
pub struct SearchStrategy {
    bound: Entourage,
    parts: usize,
    mode: SearchMode,
    limit: usize,
}

impl SearchStrategy {
    pub fn new(bound: Entourage, parts: usize, mode: SearchMode, limit: usize) -> Self {
        SearchStrategy { bound, parts: parts.max(1), mode, limit }
    }
}

impl Decomposer for SearchStrategy {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        let points = current.points();
        let mut pieces = Vec::with_capacity(current.len());
        for z in current.members() {
            let whole = SubsetFamily::normalized(points, [z.clone()]).expect("member in range");
            if boundedness_failure(&whole, &self.bound, None).is_none() {
                let mut piece = Decomposition::trivial(z.clone());
                piece.parts.resize(self.parts, Part::empty());
                pieces.push(piece);
                continue;
            }
            match search_dimension_certificate(asserted, &self.bound, self.parts - 1, self.mode, self.limit, Some(z)) {
                Ok(SearchOutcome::Found(cert)) => {
                    let mut parts: Vec<Part> =
                        cert.families.iter().map(|f| Part::from_blocks(f.members().to_vec())).collect();
                    parts.resize(self.parts, Part::empty());
                    pieces.push(Decomposition { target: z.clone(), parts });
                }
                Ok(_) => return resign(format!("no split of {z:?} found")),
                Err(e) => return resign(e.to_string()),
            }
        }
        let blocks = pieces.iter().flat_map(|p| p.parts.iter().flat_map(|part| part.blocks.iter().cloned()));
        let target = SubsetFamily::normalized(points, blocks).expect("blocks in range");
        Response::Decompose(Move::new(WeakDecomposition {
            source: current.clone(),
            target,
            entourage: asserted.clone(),
            arity: self.parts,
            pieces,
        }))
    }
}

/// Cover-game player: sweeps uncovered points of `domain` in order, putting
/// each into the first block that keeps the family disjoint at the assertion
/// and bounded by `bound`; points that fit nowhere wait for a later round.
#[derive(Debug, Clone)]
pub struct GreedyCoverStrategy {
    domain: PointSet,
    bound: Entourage,
}

impl GreedyCoverStrategy {
    pub fn new(domain: PointSet, bound: Entourage) -> Self {
        GreedyCoverStrategy { domain, bound }
    }
}

impl CoverStrategy for GreedyCoverStrategy {
    fn respond(&mut self, asserted: &Entourage, covered: &PointSet) -> Response {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &p in self.domain.difference(covered) {
            let fits = |block: &Vec<usize>| block.iter().all(|&q| self.bound.contains(p, q) && self.bound.contains(q, p));
            let clear = |block: &Vec<usize>| block.iter().all(|&q| !asserted.contains(p, q) && !asserted.contains(q, p));
            let home = blocks.iter().position(|b| fits(b) && blocks.iter().filter(|o| *o != b).all(clear));
            match home {
                Some(i) => blocks[i].push(p),
                None if blocks.iter().all(clear) && self.bound.contains(p, p) => blocks.push(vec![p]),
                None => {}
            }
        }
        let members = blocks.into_iter().map(|b| b.into_iter().collect());
        Response::Cover { family: SubsetFamily::normalized(asserted.points(), members).expect("points in range") }
    }
}

/// Cover-game player holding a zero-dimensional certificate: plays its one
/// family while the assertion stays inside the certified scale.
#[derive(Debug, Clone)]
pub struct CertificateCoverStrategy {
    cert: DimensionCertificate,
}

impl CertificateCoverStrategy {
    pub fn new(cert: DimensionCertificate) -> Self {
        CertificateCoverStrategy { cert }
    }
}

impl CoverStrategy for CertificateCoverStrategy {
    fn respond(&mut self, asserted: &Entourage, _: &PointSet) -> Response {
        if let Some(pair) = asserted.first_missing_from(&self.cert.scale) {
            return resign(format!("assertion pair {pair:?} exceeds the certified scale"));
        }
        match self.cert.families.as_slice() {
            [family] => Response::Cover { family: family.clone() },
            _ => resign("certificate has more than one family"),
        }
    }
}

/// Cover-game player replaying fixed families.
#[derive(Debug, Clone)]
pub struct ScriptedCoverStrategy {
    families: VecDeque<SubsetFamily>,
}

impl ScriptedCoverStrategy {
    pub fn new(families: Vec<SubsetFamily>) -> Self {
        ScriptedCoverStrategy { families: families.into() }
    }
}

impl CoverStrategy for ScriptedCoverStrategy {
    fn respond(&mut self, _: &Entourage, _: &PointSet) -> Response {
        match self.families.pop_front() {
            Some(family) => Response::Cover { family },
            None => resign("script exhausted"),
        }
    }
}
