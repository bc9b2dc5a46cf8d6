//! Independent sequences and the information-rate upper bounds they certify.
//!
//! A chain `∅ ≠ B_1 ⊂ … ⊂ B_m ∉ Γ` is made independent by a set `A` when
//! there are witnesses `X_i ⊆ A` with `B_i ∪ X_i ∈ Γ` and
//! `B_{i-1} ∪ X_i ∉ Γ` (taking `B_0 = ∅`). Then the optimal information rate
//! is at most `|A|/(m+1)` if `A ∈ Γ` and `|A|/m` otherwise.

use std::fmt;

use thiserror::Error;

use crate::reduction::ReductionResult;
use crate::scheme::LinearScheme;
use crate::set::ParticipantSet;
use crate::structure::AccessStructure;
use crate::Rational;

pub mod replay;
pub mod search;

pub use replay::{replay_lemma_sequence, ReplayOutcome, Template};
pub use search::{search_bound, SearchCaps, SearchOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("certificate does not verify: {0}")]
    UnverifiedCertificate(Violation),
    #[error("chain and witnesses are not independent: {0}")]
    IndependenceViolated(Violation),
    #[error("invalid role configuration: {0}")]
    ConfigInvalid(String),
    #[error("search caps must be positive (max_m = {max_m}, max_a = {max_a})")]
    InvalidCaps { max_m: usize, max_a: usize },
    #[error("search supports at most {max} participants, structure has {n}")]
    TooManyParticipants { n: usize, max: usize },
}

/// The first clause a candidate certificate breaks, in checking order.
///
/// Indices are 1-based positions in the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LengthMismatch { chain: usize, witnesses: usize },
    EmptySequence,
    OutOfRange { set: ParticipantSet },
    EmptyFirst,
    NotStrict { index: usize },
    LastQualified,
    WitnessIncomplete { index: usize },
    WitnessPremature { index: usize },
    NotCovered { missing: ParticipantSet },
    QualifiedFlag { expected: bool },
    BoundMismatch { claimed: Rational, expected: Rational },
}

impl Violation {
    /// Stable machine-readable name of the clause.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::LengthMismatch { .. } => "length-mismatch",
            Violation::EmptySequence => "empty-sequence",
            Violation::OutOfRange { .. } => "out-of-range",
            Violation::EmptyFirst => "empty-first",
            Violation::NotStrict { .. } => "not-strict",
            Violation::LastQualified => "last-qualified",
            Violation::WitnessIncomplete { .. } => "witness-incomplete",
            Violation::WitnessPremature { .. } => "witness-premature",
            Violation::NotCovered { .. } => "not-covered",
            Violation::QualifiedFlag { .. } => "qualified-flag",
            Violation::BoundMismatch { .. } => "bound-mismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.code())?;
        match self {
            Violation::LengthMismatch { chain, witnesses } => {
                write!(f, "{chain} chain sets but {witnesses} witnesses")
            }
            Violation::EmptySequence => write!(f, "the chain is empty"),
            Violation::OutOfRange { set } => write!(f, "{set} names an unknown participant"),
            Violation::EmptyFirst => write!(f, "B_1 is empty"),
            Violation::NotStrict { index } => {
                write!(f, "B_{} is not a proper subset of B_{index}", index - 1)
            }
            Violation::LastQualified => write!(f, "the last chain set is qualified"),
            Violation::WitnessIncomplete { index } => {
                write!(f, "B_{index} ∪ X_{index} is not qualified")
            }
            Violation::WitnessPremature { index } => {
                write!(f, "B_{} ∪ X_{index} is already qualified", index - 1)
            }
            Violation::NotCovered { missing } => write!(f, "A misses witness members {missing}"),
            Violation::QualifiedFlag { expected } => {
                write!(f, "A qualified flag should be {expected}")
            }
            Violation::BoundMismatch { claimed, expected } => {
                write!(f, "claimed bound {claimed}, formula gives {expected}")
            }
        }
    }
}

/// Result of [`verify_certificate`]. Rejection is a verdict, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(Violation),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// An independent sequence together with the bound it certifies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndependentSequenceCertificate {
    pub chain: Vec<ParticipantSet>,
    pub witnesses: Vec<ParticipantSet>,
    pub a: ParticipantSet,
    pub a_qualified: bool,
    pub bound: Rational,
}

impl IndependentSequenceCertificate {
    /// Builds a certificate with `A = ∪X_i` and the bound that follows,
    /// after checking the independence clauses.
    pub fn from_sequence(
        g: &AccessStructure,
        chain: Vec<ParticipantSet>,
        witnesses: Vec<ParticipantSet>,
    ) -> Result<Self, BoundsError> {
        let (a, a_qualified) = minimize_a(g, &chain, &witnesses)?;
        let bound = formula_bound(a.len(), chain.len(), a_qualified);
        Ok(IndependentSequenceCertificate {
            chain,
            witnesses,
            a,
            a_qualified,
            bound,
        })
    }

    pub fn m(&self) -> usize {
        self.chain.len()
    }

    /// Total order used to pick among certificates: smaller bound, then
    /// smaller `|A|`, then shorter chain, then lexicographic sets.
    pub fn preference_key(
        &self,
    ) -> (Rational, usize, usize, &[ParticipantSet], &[ParticipantSet], ParticipantSet) {
        (
            self.bound,
            self.a.len(),
            self.m(),
            &self.chain,
            &self.witnesses,
            self.a,
        )
    }
}

/// `|A|/(m+1)` when `A` is qualified, `|A|/m` otherwise.
pub fn formula_bound(a_size: usize, m: usize, a_qualified: bool) -> Rational {
    let denom = if a_qualified { m + 1 } else { m };
    Rational::new(a_size as u64, denom as u64)
}

/// Checks the chain and witness clauses shared by every certificate.
fn check_sequence(
    g: &AccessStructure,
    chain: &[ParticipantSet],
    witnesses: &[ParticipantSet],
) -> Result<(), Violation> {
    if chain.len() != witnesses.len() {
        return Err(Violation::LengthMismatch {
            chain: chain.len(),
            witnesses: witnesses.len(),
        });
    }
    if chain.is_empty() {
        return Err(Violation::EmptySequence);
    }
    let all = g.participants();
    if let Some(&set) = chain.iter().chain(witnesses).find(|s| !s.is_subset(all)) {
        return Err(Violation::OutOfRange { set });
    }
    if chain[0].is_empty() {
        return Err(Violation::EmptyFirst);
    }
    for i in 1..chain.len() {
        if !chain[i - 1].is_proper_subset(chain[i]) {
            return Err(Violation::NotStrict { index: i + 1 });
        }
    }
    if g.is_qualified(*chain.last().expect("chain is nonempty")) {
        return Err(Violation::LastQualified);
    }
    let mut prev = ParticipantSet::EMPTY;
    for (i, (&b, &x)) in chain.iter().zip(witnesses).enumerate() {
        if !g.is_qualified(b.union(x)) {
            return Err(Violation::WitnessIncomplete { index: i + 1 });
        }
        if g.is_qualified(prev.union(x)) {
            return Err(Violation::WitnessPremature { index: i + 1 });
        }
        prev = b;
    }
    Ok(())
}

/// Checks every clause of `cert` against `g`, reporting the first failure.
pub fn verify_certificate(g: &AccessStructure, cert: &IndependentSequenceCertificate) -> Verdict {
    if let Err(v) = check_sequence(g, &cert.chain, &cert.witnesses) {
        return Verdict::Rejected(v);
    }
    if !cert.a.is_subset(g.participants()) {
        return Verdict::Rejected(Violation::OutOfRange { set: cert.a });
    }
    let union = union_of(&cert.witnesses);
    if !union.is_subset(cert.a) {
        return Verdict::Rejected(Violation::NotCovered {
            missing: union.difference(cert.a),
        });
    }
    let qualified = g.is_qualified(cert.a);
    if qualified != cert.a_qualified {
        return Verdict::Rejected(Violation::QualifiedFlag {
            expected: qualified,
        });
    }
    let expected = formula_bound(cert.a.len(), cert.m(), qualified);
    if cert.bound != expected {
        return Verdict::Rejected(Violation::BoundMismatch {
            claimed: cert.bound,
            expected,
        });
    }
    Verdict::Accepted
}

/// The bound certified by `cert`, which must verify against `g`.
pub fn certificate_bound(
    g: &AccessStructure,
    cert: &IndependentSequenceCertificate,
) -> Result<Rational, BoundsError> {
    match verify_certificate(g, cert) {
        Verdict::Accepted => Ok(cert.bound),
        Verdict::Rejected(v) => Err(BoundsError::UnverifiedCertificate(v)),
    }
}

fn union_of(sets: &[ParticipantSet]) -> ParticipantSet {
    sets.iter().fold(ParticipantSet::EMPTY, |acc, &s| acc.union(s))
}

/// The smallest admissible `A` for fixed witnesses, `∪X_i`, and whether it
/// is qualified.
pub fn minimize_a(
    g: &AccessStructure,
    chain: &[ParticipantSet],
    witnesses: &[ParticipantSet],
) -> Result<(ParticipantSet, bool), BoundsError> {
    check_sequence(g, chain, witnesses).map_err(BoundsError::IndependenceViolated)?;
    let a = union_of(witnesses);
    Ok((a, g.is_qualified(a)))
}

/// Carries a certificate for the quotient of a reduction back to the
/// original structure by substituting class representatives.
pub fn lift_certificate(
    cert: &IndependentSequenceCertificate,
    reduction: &ReductionResult,
) -> IndependentSequenceCertificate {
    let lift = |sets: &[ParticipantSet]| sets.iter().map(|&s| reduction.lift_set(s)).collect();
    IndependentSequenceCertificate {
        chain: lift(&cert.chain),
        witnesses: lift(&cert.witnesses),
        a: reduction.lift_set(cert.a),
        a_qualified: cert.a_qualified,
        bound: cert.bound,
    }
}

/// Where a rate bound comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundEvidence {
    Sequence(IndependentSequenceCertificate),
    /// An ideal scheme achieves rate 1, which is the largest possible value.
    IdealScheme(Box<LinearScheme>),
}

/// A value for the optimal information rate: an upper bound backed by an
/// independent sequence, or the exact value 1 backed by an ideal scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateBound {
    pub value: Rational,
    pub evidence: BoundEvidence,
}

impl RateBound {
    pub fn from_certificate(cert: IndependentSequenceCertificate) -> Self {
        RateBound {
            value: cert.bound,
            evidence: BoundEvidence::Sequence(cert),
        }
    }

    pub fn from_scheme(scheme: LinearScheme) -> Self {
        RateBound {
            value: Rational::from_integer(1),
            evidence: BoundEvidence::IdealScheme(Box::new(scheme)),
        }
    }

    pub fn certificate(&self) -> Option<&IndependentSequenceCertificate> {
        match &self.evidence {
            BoundEvidence::Sequence(c) => Some(c),
            BoundEvidence::IdealScheme(_) => None,
        }
    }
}
