//! Decompositions of families over families, their composition, and the
//! decomposition games built on them.

mod games;
mod strategies;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use games::{
    gamec_collapse, gamec_play, play_decomposition_game, play_fdc, play_weak, run_sfdc, transcript_to_sfdc,
    Adversary, ArityRule, Challenge, Challenger, ConstantChallenger, CoverStrategy, Decomposer, GameConfig,
    GameKind, GameTranscript, Move, Outcome, Player, RandomChallenger, Response, Round, SequenceChallenger,
};
pub use strategies::{
    CertificateCoverStrategy, DimensionStrategy, GreedyCoverStrategy, ScriptedCoverStrategy, ScriptedStrategy,
    SearchStrategy,
};

use crate::covers::{disjointness_failure, PropertyCCertificate, SubsetFamily};
use crate::error::{Error, Result};
use crate::relations::{Entourage, PointSet};
use crate::verdict::{Failure, Verdict};

/// One part of a decomposition: a set written as a union of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub points: PointSet,
    pub blocks: Vec<PointSet>,
}

impl Part {
    pub fn from_blocks(blocks: Vec<PointSet>) -> Self {
        Part { points: blocks.iter().flatten().copied().collect(), blocks }
    }

    pub fn empty() -> Self {
        Part { points: PointSet::new(), blocks: Vec::new() }
    }
}

/// `target = X¹ ∪ … ∪ X^d`, each part a disjoint union of family members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub target: PointSet,
    pub parts: Vec<Part>,
}

impl Decomposition {
    /// A set decomposed as itself: one part, one block.
    pub fn trivial(target: PointSet) -> Self {
        Decomposition { parts: vec![Part::from_blocks(vec![target.clone()])], target }
    }

    pub fn arity(&self) -> usize {
        self.parts.len()
    }

    fn padded(mut self, arity: usize) -> Self {
        while self.parts.len() < arity {
            self.parts.push(Part::empty());
        }
        self
    }
}

/// Checks that the parts union to the target, each part is the union of its
/// blocks, blocks are distinct members of `family`, and blocks within a part
/// are `l`-disjoint.
pub fn verify_decomposition(dec: &Decomposition, family: &SubsetFamily, l: &Entourage) -> Verdict {
    let member = &dec.target;
    let mut v = Verdict::holds();
    let union: PointSet = dec.parts.iter().flat_map(|p| p.points.iter().copied()).collect();
    if union != *member {
        v.push(Failure::PartsDoNotCoverTarget {
            member: member.clone(),
            missing: member.difference(&union).copied().collect(),
            extra: union.difference(member).copied().collect(),
        });
    }
    for (i, part) in dec.parts.iter().enumerate() {
        let blocks_union: PointSet = part.blocks.iter().flatten().copied().collect();
        if blocks_union != part.points {
            v.push(Failure::PartNotUnionOfBlocks { member: member.clone(), part: i });
        }
        let mut seen = BTreeSet::new();
        for block in &part.blocks {
            if !family.contains(block) {
                v.push(Failure::BlockNotInFamily { member: member.clone(), part: i, block: block.clone() });
            }
            if !seen.insert(block) {
                v.push(Failure::DuplicateBlock { member: member.clone(), part: i, block: block.clone() });
            }
        }
        if let Ok(blocks) = SubsetFamily::normalized(l.points(), part.blocks.iter().cloned()) {
            v.absorb(disjointness_failure(&blocks, l, Some(i)).into());
        }
    }
    v
}

/// A weak `(entourage, arity)`-decomposition of every member of `source`
/// over `target`; `pieces[i]` decomposes the `i`-th member of `source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakDecomposition {
    pub source: SubsetFamily,
    pub target: SubsetFamily,
    pub entourage: Entourage,
    pub arity: usize,
    pub pieces: Vec<Decomposition>,
}

impl WeakDecomposition {
    /// Every member decomposed as itself.
    pub fn identity(family: &SubsetFamily, entourage: &Entourage) -> Self {
        WeakDecomposition {
            source: family.clone(),
            target: family.clone(),
            entourage: entourage.clone(),
            arity: 1,
            pieces: family.members().iter().cloned().map(Decomposition::trivial).collect(),
        }
    }

    pub fn piece_for(&self, member: &PointSet) -> Option<&Decomposition> {
        self.source.members().binary_search(member).ok().and_then(|i| self.pieces.get(i))
    }

    pub fn verify(&self) -> Verdict {
        let mut v = Verdict::holds();
        let points = self.source.points();
        for found in [self.target.points(), self.entourage.points()] {
            if found != points {
                v.push(Failure::SpaceMismatch { expected: points, found });
            }
        }
        if !v.is_ok() {
            return v;
        }
        if self.pieces.len() != self.source.len() {
            v.push(Failure::Other {
                message: format!("{} pieces for {} source members", self.pieces.len(), self.source.len()),
            });
            return v;
        }
        for (member, piece) in self.source.members().iter().zip(&self.pieces) {
            if piece.target != *member {
                v.push(Failure::TargetMismatch { member: member.clone() });
                continue;
            }
            if piece.arity() != self.arity {
                v.push(Failure::ArityMismatch { member: member.clone(), expected: self.arity, found: piece.arity() });
            }
            v.absorb(verify_decomposition(piece, &self.target, &self.entourage));
        }
        v
    }
}

/// Refines `outer` (𝒳 over 𝒴 at `L₁`, arity `d₁`) by `inner` (𝒴 over 𝒵 at
/// `L₂`, arity `d₂`) into 𝒳 over 𝒵 at `L₁ ∩ L₂` with arity `d₁·d₂`; part
/// `(i, k)` has index `i·d₂ + k`.
pub fn compose_weak(outer: &WeakDecomposition, inner: &WeakDecomposition) -> Result<WeakDecomposition> {
    let d1 = outer.arity;
    let d2 = inner.arity;
    let mut pieces = Vec::with_capacity(outer.pieces.len());
    for piece in &outer.pieces {
        let mut parts = Vec::with_capacity(d1 * d2);
        for i in 0..d1 {
            let used = piece.parts.get(i).map(|p| p.blocks.as_slice()).unwrap_or_default();
            let mut refined: Vec<Vec<PointSet>> = vec![Vec::new(); d2];
            for block in used {
                let sub = inner.piece_for(block).ok_or_else(|| {
                    Error::Precondition(format!("no inner decomposition for block {block:?}"))
                })?;
                for (k, slot) in refined.iter_mut().enumerate() {
                    for z in sub.parts.get(k).map(|p| p.blocks.as_slice()).unwrap_or_default() {
                        if !slot.contains(z) {
                            slot.push(z.clone());
                        }
                    }
                }
            }
            parts.extend(refined.into_iter().map(Part::from_blocks));
        }
        pieces.push(Decomposition { target: piece.target.clone(), parts });
    }
    Ok(WeakDecomposition {
        source: outer.source.clone(),
        target: inner.target.clone(),
        entourage: outer.entourage.intersection(&inner.entourage)?,
        arity: d1 * d2,
        pieces,
    })
}

/// Composes a chain `𝒴₀ → 𝒴₁ → … → 𝒴_n` into a single decomposition of
/// `𝒴₀` over `𝒴_n`.
pub fn first_turn_collapse(chain: &[WeakDecomposition]) -> Result<WeakDecomposition> {
    let (first, rest) = chain.split_first().ok_or_else(|| Error::Precondition("empty chain".into()))?;
    rest.iter().try_fold(first.clone(), |acc, next| compose_weak(&acc, next))
}

/// Turns a cover certificate into a chain of two-part decompositions answering
/// its challenge, starting from the family `{domain}`.
///
/// Step `j` splits the uncovered remainder `R_{j−1}` into `R_j` and the
/// members of `𝒰ʲ` cut down to `R_{j−1}`; every other member decomposes as
/// itself.
pub fn sfdc_from_propc(cert: &PropertyCCertificate) -> Result<Vec<WeakDecomposition>> {
    let verdict = cert.verify();
    if !verdict.is_ok() {
        return Err(Error::Precondition(format!("certificate does not verify: {verdict}")));
    }
    let points = cert.points();
    let mut remainder = cert.domain();
    let mut settled: Vec<PointSet> = Vec::new();
    let mut current = SubsetFamily::normalized(points, [remainder.clone()])?;
    let mut chain = Vec::with_capacity(cert.families.len());
    for (j, family) in cert.families.iter().enumerate() {
        let fresh: Vec<PointSet> = family.restrict(&remainder).members().to_vec();
        let next_remainder: PointSet = &remainder - &family.covered();
        let mut members = settled.clone();
        members.extend(fresh.iter().cloned());
        members.push(next_remainder.clone());
        let target = SubsetFamily::normalized(points, members)?;
        let pieces = current
            .members()
            .iter()
            .map(|m| {
                if *m == remainder {
                    let first = if next_remainder.is_empty() { vec![] } else { vec![next_remainder.clone()] };
                    Decomposition {
                        target: m.clone(),
                        parts: vec![Part::from_blocks(first), Part::from_blocks(fresh.clone())],
                    }
                } else {
                    Decomposition::trivial(m.clone()).padded(2)
                }
            })
            .collect();
        chain.push(WeakDecomposition {
            source: current.clone(),
            target: target.clone(),
            entourage: cert.challenge.level(j).clone(),
            arity: 2,
            pieces,
        });
        settled.extend(fresh);
        remainder = next_remainder;
        current = target;
    }
    Ok(chain)
}
