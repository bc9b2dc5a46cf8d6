//! Ideality decision for structures meeting the `Ω(k+1)` hypotheses.
//!
//! Under the hypotheses a structure is ideal exactly when its reduction is a
//! threshold structure. The classifier backs both answers with evidence: an
//! explicit linear scheme in the ideal case, and an independent sequence
//! certifying a rate bound of at most `(k-1)/k` otherwise.

use thiserror::Error;

use crate::bounds::{
    lift_certificate, replay_lemma_sequence, search_bound, verify_certificate, BoundsError,
    IndependentSequenceCertificate, ReplayOutcome, SearchCaps, Template, Verdict,
};
use crate::field::{next_prime_above, FieldError, PrimeField};
use crate::reduction::{reduce, ReductionError, ReductionResult};
use crate::scheme::{
    build_threshold_vectors, verify_correctness, verify_privacy, LinearScheme, SchemeError,
    DEFAULT_STATE_CAP,
};
use crate::structure::{AccessStructure, HypothesisReport, StructureError};
use crate::Rational;

/// Ordered role tuples tried by lemma replay before falling back to search.
pub const REPLAY_TUPLE_CAP: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("the reduced structure is not a threshold structure")]
    NotReducedThreshold,
    #[error("the reduced structure is a threshold structure")]
    ReducedThreshold,
    #[error("the hypotheses on omega(k+1) do not hold")]
    HypothesesNotMet,
    #[error("field GF({p}) too small for {classes} equivalence classes")]
    FieldTooSmall { p: u64, classes: usize },
    #[error("no certificate with bound <= (k-1)/k within caps (m <= {}, |A| <= {})", caps.max_m, caps.max_a)]
    SearchExhausted { caps: SearchCaps },
    #[error("constructed scheme failed exhaustive verification")]
    SchemeVerificationFailed,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Ideal,
    NotIdeal,
    HypothesesNotMet,
    Unresolved,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ideal => "IDEAL",
            Status::NotIdeal => "NOT_IDEAL",
            Status::HypothesesNotMet => "HYPOTHESES_NOT_MET",
            Status::Unresolved => "UNRESOLVED",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// How a non-ideality certificate was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateSource {
    /// Lemma replay on the reduced structure; roles are original labels.
    Replay { template: Template, roles: Vec<usize> },
    /// Generic search, on the reduced structure or the original one.
    Search { on_quotient: bool, exhaustive: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonIdealEvidence {
    /// Certificate on the original structure.
    pub certificate: IndependentSequenceCertificate,
    pub source: CertificateSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Scheme(Box<LinearScheme>),
    Certificate(NonIdealEvidence),
    /// Caps the search ran out of.
    ExhaustedCaps(SearchCaps),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub status: Status,
    pub hypotheses: HypothesisReport,
    pub reduction: ReductionResult,
    pub evidence: Evidence,
    /// Whether the scheme went through exhaustive correctness and privacy
    /// checks (false when skipped or above the state cap).
    pub scheme_verified: bool,
    /// `n = k + 1`: the hypotheses then force the threshold structure.
    pub degenerate: bool,
}

impl Classification {
    pub fn scheme(&self) -> Option<&LinearScheme> {
        match &self.evidence {
            Evidence::Scheme(s) => Some(s),
            _ => None,
        }
    }

    pub fn certificate(&self) -> Option<&IndependentSequenceCertificate> {
        match &self.evidence {
            Evidence::Certificate(e) => Some(&e.certificate),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub caps: SearchCaps,
    /// Field for the ideal scheme; the smallest prime above the number of
    /// classes when `None`.
    pub field: Option<u64>,
    /// Run exhaustive correctness and privacy checks on the ideal scheme.
    pub verify_scheme: bool,
    pub state_cap: u64,
}

impl ClassifyOptions {
    pub fn for_order(k: usize) -> Self {
        ClassifyOptions {
            caps: SearchCaps::for_order(k),
            field: None,
            verify_scheme: true,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

/// `(k-1)/k`, the largest bound that rules out ideality.
pub fn nonideal_target(k: usize) -> Rational {
    Rational::new(k as u64 - 1, k as u64)
}

/// Smallest prime above the number of classes.
pub fn default_field(reduction: &ReductionResult) -> u64 {
    next_prime_above(reduction.classes.len() as u64)
}

pub fn classify(
    g: &AccessStructure,
    options: &ClassifyOptions,
) -> Result<Classification, ClassifierError> {
    let hypotheses = g.check_hypotheses()?;
    let reduction = reduce(g)?;
    let degenerate = g.n() == g.k() + 1;
    let mut out = Classification {
        status: Status::HypothesesNotMet,
        hypotheses,
        reduction,
        evidence: Evidence::None,
        scheme_verified: false,
        degenerate,
    };
    if !out.hypotheses.satisfied() {
        return Ok(out);
    }
    if out.reduction.quotient.is_threshold() {
        let p = options.field.unwrap_or_else(|| default_field(&out.reduction));
        let scheme = scheme_from_reduction(g, &out.reduction, p)?;
        if options.verify_scheme {
            match (
                verify_correctness(&scheme, options.state_cap),
                verify_privacy(&scheme, options.state_cap),
            ) {
                (Ok(c), Ok(pr)) => {
                    if !c.passed() || !pr.passed() {
                        return Err(ClassifierError::SchemeVerificationFailed);
                    }
                    out.scheme_verified = true;
                }
                (Err(SchemeError::CapExceeded { .. }), _)
                | (_, Err(SchemeError::CapExceeded { .. })) => {}
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            }
        }
        out.status = Status::Ideal;
        out.evidence = Evidence::Scheme(Box::new(scheme));
        return Ok(out);
    }
    match nonideal_from_reduction(g, &out.reduction, &options.caps) {
        Ok(evidence) => {
            out.status = Status::NotIdeal;
            out.evidence = Evidence::Certificate(evidence);
        }
        Err(ClassifierError::SearchExhausted { caps }) => {
            out.status = Status::Unresolved;
            out.evidence = Evidence::ExhaustedCaps(caps);
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// A vector-space scheme for `g` over `GF(p)`, built from a threshold
/// scheme on the reduced structure: every participant gets the vector of
/// its class.
pub fn certify_ideal(g: &AccessStructure, p: u64) -> Result<LinearScheme, ClassifierError> {
    let reduction = reduce(g)?;
    if !reduction.quotient.is_threshold() {
        return Err(ClassifierError::NotReducedThreshold);
    }
    scheme_from_reduction(g, &reduction, p)
}

fn scheme_from_reduction(
    g: &AccessStructure,
    reduction: &ReductionResult,
    p: u64,
) -> Result<LinearScheme, ClassifierError> {
    let field = PrimeField::new(p)?;
    let classes = reduction.classes.len();
    let assignment = build_threshold_vectors(g.k(), classes, &field, &reduction.class_of)
        .map_err(|e| match e {
            SchemeError::FieldTooSmall { p, .. } => ClassifierError::FieldTooSmall { p, classes },
            other => other.into(),
        })?;
    Ok(LinearScheme::new(g.clone(), field, assignment)?)
}

/// A certificate on `g` with bound at most `(k-1)/k`.
///
/// Lemma replay over all ordered role tuples of the reduced structure comes
/// first; generic search on the reduced structure, then on `g` itself, is the
/// fallback. Certificates longer than `caps.max_m` or with `|A|` above
/// `caps.max_a` are not accepted from either route.
pub fn certify_nonideal(
    g: &AccessStructure,
    caps: &SearchCaps,
) -> Result<NonIdealEvidence, ClassifierError> {
    if !g.check_hypotheses()?.satisfied() {
        return Err(ClassifierError::HypothesesNotMet);
    }
    let reduction = reduce(g)?;
    if reduction.quotient.is_threshold() {
        return Err(ClassifierError::ReducedThreshold);
    }
    nonideal_from_reduction(g, &reduction, caps)
}

fn nonideal_from_reduction(
    g: &AccessStructure,
    reduction: &ReductionResult,
    caps: &SearchCaps,
) -> Result<NonIdealEvidence, ClassifierError> {
    let target = nonideal_target(g.k());
    let q = &reduction.quotient;
    let within_caps = |c: &IndependentSequenceCertificate| {
        c.bound <= target && c.m() <= caps.max_m && c.a.len() <= caps.max_a
    };
    let finish = |cert: IndependentSequenceCertificate, source| {
        assert_eq!(
            verify_certificate(g, &cert),
            Verdict::Accepted,
            "certificate failed re-verification"
        );
        NonIdealEvidence {
            certificate: cert,
            source,
        }
    };

    if let Some((template, roles, cert)) = replay_search(q, &within_caps)? {
        let lifted = lift_certificate(&cert, reduction);
        let roles = roles
            .iter()
            .map(|&r| reduction.representatives[r - 1])
            .collect();
        return Ok(finish(lifted, CertificateSource::Replay { template, roles }));
    }
    let on_quotient = search_bound(q, caps)?;
    if let Some(cert) = on_quotient.best.filter(|c| within_caps(c)) {
        return Ok(finish(
            lift_certificate(&cert, reduction),
            CertificateSource::Search {
                on_quotient: true,
                exhaustive: on_quotient.exhaustive,
            },
        ));
    }
    if q != g {
        let direct = search_bound(g, caps)?;
        if let Some(cert) = direct.best.filter(|c| within_caps(c)) {
            return Ok(finish(
                cert,
                CertificateSource::Search {
                    on_quotient: false,
                    exhaustive: direct.exhaustive,
                },
            ));
        }
    }
    Err(ClassifierError::SearchExhausted { caps: *caps })
}

type ReplayHit = (Template, Vec<usize>, IndependentSequenceCertificate);

/// First verifying replay, trying role tuples in lexicographic order and the
/// templates in declaration order for each tuple.
fn replay_search(
    q: &AccessStructure,
    accept: &dyn Fn(&IndependentSequenceCertificate) -> bool,
) -> Result<Option<ReplayHit>, ClassifierError> {
    let n = q.n();
    let len = q.k() + 2;
    if len > n {
        return Ok(None);
    }
    let tuples: u64 = (0..len as u64).map(|i| n as u64 - i).product();
    if tuples > REPLAY_TUPLE_CAP {
        return Ok(None);
    }
    let templates: Vec<Template> = Template::ALL
        .into_iter()
        .filter(|t| q.k() >= t.min_order())
        .collect();
    let mut roles = Vec::with_capacity(len);
    let mut used = vec![false; n + 1];
    fn walk(
        q: &AccessStructure,
        len: usize,
        templates: &[Template],
        roles: &mut Vec<usize>,
        used: &mut [bool],
        accept: &dyn Fn(&IndependentSequenceCertificate) -> bool,
    ) -> Result<Option<ReplayHit>, ClassifierError> {
        if roles.len() == len {
            for &t in templates {
                if let ReplayOutcome::Verified(c) = replay_lemma_sequence(q, t, roles)? {
                    if accept(&c) {
                        return Ok(Some((t, roles.clone(), c)));
                    }
                }
            }
            return Ok(None);
        }
        for p in 1..=q.n() {
            if used[p] {
                continue;
            }
            used[p] = true;
            roles.push(p);
            let hit = walk(q, len, templates, roles, used, accept)?;
            roles.pop();
            used[p] = false;
            if hit.is_some() {
                return Ok(hit);
            }
        }
        Ok(None)
    }
    walk(q, len, &templates, &mut roles, &mut used, accept)
}
