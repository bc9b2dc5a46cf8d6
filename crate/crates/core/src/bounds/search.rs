//! Exhaustive search for independent sequences within caps.
//!
//! For every candidate `A` the search computes, by dynamic programming over
//! unqualified sets, the longest chain whose witnesses can all be taken from
//! subsets of `A` with at most `k` members. Only the witness sets that
//! complete a chain set matter, so each chain set `B` is summarized by the
//! bitmask of witnesses `X` with `B ∪ X ∈ Γ`. A step `B' ⊂ B` is possible
//! exactly when some witness completes `B` but not `B'`.
//!
//! The extracted sequence is then shrunk to `A = ∪X_i` and the best
//! certificate over all candidates is kept.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{BoundsError, IndependentSequenceCertificate, RateBound, Verdict};
use crate::set::{subsets_of_size, ParticipantSet};
use crate::structure::{AccessStructure, QualifiedTable};
use crate::Rational;

/// Witness masks are `u128`, so a candidate may have at most 128 witnesses.
const MAX_WITNESSES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    /// Longest chain considered.
    pub max_m: usize,
    /// Largest candidate `A` considered.
    pub max_a: usize,
    pub time_budget: Option<Duration>,
}

impl SearchCaps {
    /// `m ≤ k + 1`, `|A| ≤ k`, no time limit.
    pub fn for_order(k: usize) -> Self {
        SearchCaps {
            max_m: k + 1,
            max_a: k,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Best certificate with bound at most 1, if any.
    pub best: Option<IndependentSequenceCertificate>,
    /// False when the time budget ran out or some candidate had too many
    /// witnesses; `best` is still sound but may not be optimal.
    pub exhaustive: bool,
    pub candidates_examined: usize,
}

impl SearchOutcome {
    pub fn bound(&self) -> Option<RateBound> {
        self.best.clone().map(RateBound::from_certificate)
    }
}

enum CandidateResult {
    Found(IndependentSequenceCertificate),
    Nothing,
    Skipped,
}

/// Searches `g` for the independent sequence with the smallest bound.
///
/// Ties are broken by [`IndependentSequenceCertificate::preference_key`], so
/// the result does not depend on thread scheduling (unless the time budget
/// interrupts the search).
pub fn search_bound(g: &AccessStructure, caps: &SearchCaps) -> Result<SearchOutcome, BoundsError> {
    if caps.max_m == 0 || caps.max_a == 0 {
        return Err(BoundsError::InvalidCaps {
            max_m: caps.max_m,
            max_a: caps.max_a,
        });
    }
    let table = g.qualified_table().ok_or(BoundsError::TooManyParticipants {
        n: g.n(),
        max: QualifiedTable::MAX_N,
    })?;
    let deadline = caps.time_budget.map(|d| Instant::now() + d);
    let n = g.n();
    let candidates: Vec<ParticipantSet> = (1..=caps.max_a.min(n))
        .flat_map(|size| subsets_of_size(n, size))
        .collect();
    let results: Vec<CandidateResult> = candidates
        .par_iter()
        .map(|&a| best_for_candidate(g, &table, a, caps.max_m, deadline))
        .collect();
    let mut best: Option<IndependentSequenceCertificate> = None;
    let mut exhaustive = true;
    for r in results {
        match r {
            CandidateResult::Found(cert) => {
                let better = best
                    .as_ref()
                    .is_none_or(|b| cert.preference_key() < b.preference_key());
                if better {
                    best = Some(cert);
                }
            }
            CandidateResult::Nothing => {}
            CandidateResult::Skipped => exhaustive = false,
        }
    }
    if let Some(cert) = &best {
        assert_eq!(
            super::verify_certificate(g, cert),
            Verdict::Accepted,
            "search produced an invalid certificate"
        );
    }
    Ok(SearchOutcome {
        best,
        exhaustive,
        candidates_examined: candidates.len(),
    })
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

fn best_for_candidate(
    g: &AccessStructure,
    table: &QualifiedTable,
    a: ParticipantSet,
    max_m: usize,
    deadline: Option<Instant>,
) -> CandidateResult {
    if expired(deadline) {
        return CandidateResult::Skipped;
    }
    let mut witnesses: Vec<ParticipantSet> = a
        .subsets()
        .filter(|x| (1..=g.k()).contains(&x.len()))
        .collect();
    if witnesses.len() > MAX_WITNESSES {
        return CandidateResult::Skipped;
    }
    witnesses.sort();
    let size = 1usize << g.n();
    let completes = |b: usize| -> u128 {
        let b = ParticipantSet::from_bits(b as u64);
        witnesses
            .iter()
            .enumerate()
            .filter(|(_, x)| table.is_qualified(b.union(**x)))
            .fold(0u128, |acc, (i, _)| acc | 1 << i)
    };
    let mut comp = vec![0u128; size];
    let mut longest = vec![0u8; size];
    let cap = max_m.min(u8::MAX as usize) as u8;
    comp[0] = completes(0);
    for b in 1..size {
        if b % 4096 == 0 && expired(deadline) {
            return CandidateResult::Skipped;
        }
        if table.is_qualified(ParticipantSet::from_bits(b as u64)) {
            continue;
        }
        comp[b] = completes(b);
        let mut best = 0u8;
        // proper submasks, including the empty set
        let mut s = (b - 1) & b;
        loop {
            let usable = s == 0
                || (longest[s] > 0 && !table.is_qualified(ParticipantSet::from_bits(s as u64)));
            if usable && comp[b] & !comp[s] != 0 {
                best = best.max(longest[s] + 1);
                if best >= cap {
                    best = cap;
                    break;
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & b;
        }
        longest[b] = best;
    }
    let Some((end, &m)) = longest
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0)
        .max_by_key(|(b, &l)| (l, std::cmp::Reverse(*b)))
    else {
        return CandidateResult::Nothing;
    };
    let (chain, xs) = extract(&comp, &longest, &witnesses, end, m as usize);
    match IndependentSequenceCertificate::from_sequence(g, chain, xs) {
        Ok(cert) if cert.bound <= Rational::from_integer(1) => CandidateResult::Found(cert),
        Ok(_) => CandidateResult::Nothing,
        Err(e) => panic!("extracted chain does not verify: {e}"),
    }
}

/// Walks back from `end` picking, at each step, the numerically first
/// predecessor that still admits a chain of the needed length and the first
/// witness (in lexicographic order) that separates the two sets.
fn extract(
    comp: &[u128],
    longest: &[u8],
    witnesses: &[ParticipantSet],
    end: usize,
    m: usize,
) -> (Vec<ParticipantSet>, Vec<ParticipantSet>) {
    let mut chain = Vec::with_capacity(m);
    let mut xs = Vec::with_capacity(m);
    let mut b = end;
    for need in (1..=m).rev() {
        let pred = if need == 1 {
            0
        } else {
            let mut s = (b - 1) & b;
            loop {
                if s != 0 && longest[s] as usize >= need - 1 && comp[b] & !comp[s] != 0 {
                    break s;
                }
                assert!(s != 0, "no predecessor found during extraction");
                s = (s - 1) & b;
            }
        };
        let sep = comp[b] & !comp[pred];
        chain.push(ParticipantSet::from_bits(b as u64));
        xs.push(witnesses[sep.trailing_zeros() as usize]);
        b = pred;
    }
    chain.reverse();
    xs.reverse();
    (chain, xs)
}
