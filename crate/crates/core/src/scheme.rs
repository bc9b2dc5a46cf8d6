//! Vector-space (linear) secret sharing over prime fields.
//!
//! A scheme assigns a nonzero vector of `GF(p)^k` to the dealer and to every
//! participant. To share `s` the dealer draws `v` uniformly among vectors with
//! `v · f(D) = s` and hands participant `i` the share `v · f(i)`. A set can
//! recover `s` exactly when `f(D)` lies in the span of its vectors.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{FieldError, PrimeField};
use crate::set::ParticipantSet;
use crate::structure::{AccessStructure, QualifiedTable};
use crate::Rational;

/// Default cap on `p^k`, the number of dealer states enumerated by the
/// exhaustive verifiers.
pub const DEFAULT_STATE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("vector for {who} has length {found}, expected {expected}")]
    DimensionMismatch {
        who: String,
        expected: usize,
        found: usize,
    },
    #[error("vector for {who} is zero")]
    ZeroVector { who: String },
    #[error("vector for {who} has an entry outside GF({p})")]
    EntryOutOfField { who: String, p: u64 },
    #[error("assignment covers {found} participants, structure has {expected}")]
    ParticipantCountMismatch { expected: usize, found: usize },
    #[error("field GF({p}) too small for {points} distinct evaluation points")]
    FieldTooSmall { p: u64, points: usize },
    #[error("class map entry {entry} outside 1..={classes}")]
    InvalidClassMap { entry: usize, classes: usize },
    #[error("secret {secret} is not an element of GF({p})")]
    SecretOutOfField { secret: u64, p: u64 },
    #[error("assignment does not realize the access structure")]
    NotVectorSpace,
    #[error("{set} is not qualified")]
    NotQualified { set: ParticipantSet },
    #[error("no share supplied for participant {participant}")]
    MissingShare { participant: usize },
    #[error("shares for {set} are inconsistent with any dealer vector")]
    InconsistentShares { set: ParticipantSet },
    #[error("{states} dealer states exceed the cap of {cap}")]
    CapExceeded { states: u64, cap: u64 },
    #[error("participant count {n} too large for exhaustive set enumeration")]
    TooManyParticipants { n: usize },
    #[error("information rate undefined: some participant receives no share")]
    RateUndefined,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Vectors `f(D)` and `f(1), …, f(n)` in `GF(p)^dimension`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorAssignment {
    dimension: usize,
    dealer: Vec<u64>,
    participants: Vec<Vec<u64>>,
}

impl VectorAssignment {
    pub fn new(
        field: &PrimeField,
        dimension: usize,
        dealer: Vec<u64>,
        participants: Vec<Vec<u64>>,
    ) -> Result<Self, SchemeError> {
        let check = |who: String, v: &[u64]| {
            if v.len() != dimension {
                return Err(SchemeError::DimensionMismatch {
                    who,
                    expected: dimension,
                    found: v.len(),
                });
            }
            if v.iter().any(|&x| x >= field.modulus()) {
                return Err(SchemeError::EntryOutOfField {
                    who,
                    p: field.modulus(),
                });
            }
            if v.iter().all(|&x| x == 0) {
                return Err(SchemeError::ZeroVector { who });
            }
            Ok(())
        };
        check("the dealer".into(), &dealer)?;
        for (i, v) in participants.iter().enumerate() {
            check(format!("participant {}", i + 1), v)?;
        }
        Ok(VectorAssignment {
            dimension,
            dealer,
            participants,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn dealer(&self) -> &[u64] {
        &self.dealer
    }

    pub fn participant_count(&self) -> usize {
        self.participants.len()
    }

    /// `f(p)` for the 1-based participant `p`.
    pub fn vector(&self, p: usize) -> &[u64] {
        &self.participants[p - 1]
    }

    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.participants
    }

    fn vectors_of(&self, set: ParticipantSet) -> Vec<&[u64]> {
        set.iter().map(|p| self.vector(p)).collect()
    }
}

/// Vandermonde assignment for a `(k, m)`-threshold structure lifted through a
/// class map: `f(D) = (1, 0, …, 0)` and class `j` gets `(1, j, j², …, j^{k-1})`.
/// `class_map[i - 1]` is the class (1-based) of participant `i`.
pub fn build_threshold_vectors(
    k: usize,
    classes: usize,
    field: &PrimeField,
    class_map: &[usize],
) -> Result<VectorAssignment, SchemeError> {
    let p = field.modulus();
    if p <= classes as u64 {
        return Err(SchemeError::FieldTooSmall { p, points: classes });
    }
    if let Some(&entry) = class_map.iter().find(|&&c| c == 0 || c > classes) {
        return Err(SchemeError::InvalidClassMap { entry, classes });
    }
    let mut dealer = vec![0u64; k];
    dealer[0] = 1;
    let participants = class_map
        .iter()
        .map(|&class| {
            let x = class as u64;
            (0..k as u64).map(|e| field.pow(x, e)).collect()
        })
        .collect();
    VectorAssignment::new(field, k, dealer, participants)
}

fn check_shape(
    g: &AccessStructure,
    asg: &VectorAssignment,
) -> Result<(), SchemeError> {
    if asg.dimension() != g.k() {
        return Err(SchemeError::DimensionMismatch {
            who: "the assignment".into(),
            expected: g.k(),
            found: asg.dimension(),
        });
    }
    if asg.participant_count() != g.n() {
        return Err(SchemeError::ParticipantCountMismatch {
            expected: g.n(),
            found: asg.participant_count(),
        });
    }
    Ok(())
}

/// Whether `asg` realizes `g`: a set is qualified iff its vectors span `f(D)`.
///
/// Only sets of size `k - 1` and `k` are examined. Smaller sets sit inside a
/// `(k-1)`-set and span less. A larger set spans the same space as one of its
/// `k`-subsets (the space has dimension `k`), and it is qualified iff some
/// `k`-subset is, so both sides of the equivalence reduce to `k`-subsets.
pub fn is_vector_space_structure(
    g: &AccessStructure,
    asg: &VectorAssignment,
    field: &PrimeField,
) -> Result<bool, SchemeError> {
    check_shape(g, asg)?;
    let k = g.k();
    for size in [k - 1, k] {
        for set in crate::set::subsets_of_size(g.n(), size) {
            let spans = field.in_span(&asg.vectors_of(set), asg.dealer());
            if spans != g.is_minimal(set) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Same predicate as [`is_vector_space_structure`], checked on all `2^n`
/// subsets.
pub fn is_vector_space_structure_exhaustive(
    g: &AccessStructure,
    asg: &VectorAssignment,
    field: &PrimeField,
) -> Result<bool, SchemeError> {
    check_shape(g, asg)?;
    let table = g
        .qualified_table()
        .ok_or(SchemeError::TooManyParticipants { n: g.n() })?;
    Ok(g
        .participants()
        .subsets()
        .all(|set| field.in_span(&asg.vectors_of(set), asg.dealer()) == table.is_qualified(set)))
}

/// An ideal linear scheme: secret space and every share space are `GF(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearScheme {
    field: PrimeField,
    assignment: VectorAssignment,
    structure: AccessStructure,
}

impl LinearScheme {
    pub fn new(
        structure: AccessStructure,
        field: PrimeField,
        assignment: VectorAssignment,
    ) -> Result<Self, SchemeError> {
        if !is_vector_space_structure(&structure, &assignment, &field)? {
            return Err(SchemeError::NotVectorSpace);
        }
        Ok(LinearScheme {
            field,
            assignment,
            structure,
        })
    }

    /// Skips the realization check, for exercising the verifiers on
    /// deliberately broken schemes.
    pub fn new_unchecked(
        structure: AccessStructure,
        field: PrimeField,
        assignment: VectorAssignment,
    ) -> Result<Self, SchemeError> {
        check_shape(&structure, &assignment)?;
        Ok(LinearScheme {
            field,
            assignment,
            structure,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn assignment(&self) -> &VectorAssignment {
        &self.assignment
    }

    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    /// Shares `v · f(i)` for every participant.
    pub fn shares_for(&self, v: &[u64]) -> Vec<u64> {
        self.assignment
            .vectors()
            .iter()
            .map(|f| self.field.dot(v, f))
            .collect()
    }

    pub fn secret_for(&self, v: &[u64]) -> u64 {
        self.field.dot(v, self.assignment.dealer())
    }

    fn dealer_states(&self, cap: u64) -> Result<u64, SchemeError> {
        let p = self.field.modulus();
        let states = (0..self.assignment.dimension())
            .try_fold(1u64, |acc, _| acc.checked_mul(p))
            .unwrap_or(u64::MAX);
        if states > cap {
            Err(SchemeError::CapExceeded { states, cap })
        } else {
            Ok(states)
        }
    }

    /// The dealer vector with index `index` in lexicographic order.
    fn nth_vector(&self, index: u64) -> Vec<u64> {
        let p = self.field.modulus();
        let k = self.assignment.dimension();
        let mut v = vec![0u64; k];
        let mut rest = index;
        for slot in v.iter_mut().rev() {
            *slot = rest % p;
            rest /= p;
        }
        v
    }
}

/// Output of [`deal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareTable {
    pub secret: u64,
    pub seed: u64,
    /// `shares[i - 1]` belongs to participant `i`.
    pub shares: Vec<u64>,
}

impl ShareTable {
    pub fn share(&self, participant: usize) -> u64 {
        self.shares[participant - 1]
    }

    /// `(participant, share)` pairs for the members of `set`.
    pub fn restricted(&self, set: ParticipantSet) -> Vec<(usize, u64)> {
        set.iter().map(|p| (p, self.share(p))).collect()
    }
}

/// Draws `v` uniformly from `{v : v · f(D) = secret}` with a ChaCha8 stream
/// seeded from `seed`, then computes every share.
pub fn deal(scheme: &LinearScheme, secret: u64, seed: u64) -> Result<ShareTable, SchemeError> {
    let field = scheme.field();
    let p = field.modulus();
    if secret >= p {
        return Err(SchemeError::SecretOutOfField { secret, p });
    }
    let dealer = scheme.assignment().dealer();
    let pivot = dealer
        .iter()
        .position(|&x| x != 0)
        .expect("dealer vector is nonzero");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = vec![0u64; dealer.len()];
    for (i, slot) in v.iter_mut().enumerate() {
        if i != pivot {
            *slot = rng.gen_range(0..p);
        }
    }
    let partial = field.dot(&v, dealer);
    v[pivot] = field.mul(field.sub(secret, partial), field.inv(dealer[pivot]));
    debug_assert_eq!(scheme.secret_for(&v), secret);
    Ok(ShareTable {
        secret,
        seed,
        shares: scheme.shares_for(&v),
    })
}

/// Recovers the secret from the shares of a qualified set.
///
/// `shares` may include participants outside `set`; they are ignored.
pub fn reconstruct(
    scheme: &LinearScheme,
    set: ParticipantSet,
    shares: &[(usize, u64)],
) -> Result<u64, SchemeError> {
    if !scheme.structure().is_qualified(set) {
        return Err(SchemeError::NotQualified { set });
    }
    let field = scheme.field();
    let asg = scheme.assignment();
    let mut values = Vec::with_capacity(set.len());
    for p in set.iter() {
        let &(_, s) = shares
            .iter()
            .find(|(q, _)| *q == p)
            .ok_or(SchemeError::MissingShare { participant: p })?;
        if s >= field.modulus() {
            return Err(SchemeError::InconsistentShares { set });
        }
        values.push(s);
    }
    let vectors = asg.vectors_of(set);
    let lambda = field
        .solve_combination(&vectors, asg.dealer())
        .ok_or(SchemeError::NotVectorSpace)?;
    // the shares must come from a single dealer vector: every linear relation
    // among the vectors has to hold among the shares too
    let rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.to_vec()).collect();
    let augmented: Vec<Vec<u64>> = vectors
        .iter()
        .zip(&values)
        .map(|(v, &s)| {
            let mut row = v.to_vec();
            row.push(s);
            row
        })
        .collect();
    if field.rank(&augmented) != field.rank(&rows) {
        return Err(SchemeError::InconsistentShares { set });
    }
    Ok(lambda
        .iter()
        .zip(&values)
        .fold(0, |acc, (&l, &s)| field.add(acc, field.mul(l, s))))
}

/// First failing `(dealer vector, minimal set)` pair in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessFailure {
    pub dealer_vector: Vec<u64>,
    pub set: ParticipantSet,
    pub expected: u64,
    /// `None` when reconstruction itself errored.
    pub recovered: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessReport {
    pub dealer_states: u64,
    pub sets_checked: usize,
    pub failure: Option<CorrectnessFailure>,
}

impl CorrectnessReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Deals every dealer vector and reconstructs from every minimal qualified set.
pub fn verify_correctness(scheme: &LinearScheme, cap: u64) -> Result<CorrectnessReport, SchemeError> {
    let states = scheme.dealer_states(cap)?;
    let basis = scheme.structure().basis();
    for index in 0..states {
        let v = scheme.nth_vector(index);
        let secret = scheme.secret_for(&v);
        let shares: Vec<(usize, u64)> = scheme
            .shares_for(&v)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i + 1, s))
            .collect();
        for &set in basis {
            let got = reconstruct(scheme, set, &shares).ok();
            if got != Some(secret) {
                return Ok(CorrectnessReport {
                    dealer_states: states,
                    sets_checked: basis.len(),
                    failure: Some(CorrectnessFailure {
                        dealer_vector: v,
                        set,
                        expected: secret,
                        recovered: got,
                    }),
                });
            }
        }
    }
    Ok(CorrectnessReport {
        dealer_states: states,
        sets_checked: basis.len(),
        failure: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivacyReport {
    pub dealer_states: u64,
    pub sets_checked: usize,
    /// Unqualified sets whose joint share distribution depends on the secret,
    /// in lexicographic order.
    pub leaking_sets: Vec<ParticipantSet>,
}

impl PrivacyReport {
    pub fn passed(&self) -> bool {
        self.leaking_sets.is_empty()
    }
}

/// Maximal unqualified sets of `g`, in lexicographic order.
pub fn maximal_unqualified_sets(table: &QualifiedTable) -> Vec<ParticipantSet> {
    let full = ParticipantSet::full(table.n());
    let mut out: Vec<ParticipantSet> = full
        .subsets()
        .filter(|&u| {
            !table.is_qualified(u)
                && full
                    .difference(u)
                    .iter()
                    .all(|p| table.is_qualified(u.with(p)))
        })
        .collect();
    out.sort();
    out
}

/// Whether the joint distribution of the shares of `set` is the same for
/// every secret, with the dealer vector uniform among those matching it.
pub fn share_distribution_is_secret_independent(
    scheme: &LinearScheme,
    set: ParticipantSet,
    cap: u64,
) -> Result<bool, SchemeError> {
    let states = scheme.dealer_states(cap)?;
    let p = scheme.field().modulus() as usize;
    let members = set.to_vec();
    let mut per_secret: Vec<HashMap<Vec<u64>, u64>> = vec![HashMap::new(); p];
    for index in 0..states {
        let v = scheme.nth_vector(index);
        let secret = scheme.secret_for(&v) as usize;
        let tuple: Vec<u64> = members
            .iter()
            .map(|&m| scheme.field().dot(&v, scheme.assignment().vector(m)))
            .collect();
        *per_secret[secret].entry(tuple).or_insert(0) += 1;
    }
    Ok(per_secret.iter().all(|d| *d == per_secret[0]))
}

/// Checks perfect privacy on every maximal unqualified set; subsets inherit
/// it as marginals of identical joint distributions.
pub fn verify_privacy(scheme: &LinearScheme, cap: u64) -> Result<PrivacyReport, SchemeError> {
    let states = scheme.dealer_states(cap)?;
    let table = scheme
        .structure()
        .qualified_table()
        .ok_or(SchemeError::TooManyParticipants {
            n: scheme.structure().n(),
        })?;
    let sets = maximal_unqualified_sets(&table);
    let mut leaking_sets = Vec::new();
    for &u in &sets {
        if !share_distribution_is_secret_independent(scheme, u, cap)? {
            leaking_sets.push(u);
        }
    }
    Ok(PrivacyReport {
        dealer_states: states,
        sets_checked: sets.len(),
        leaking_sets,
    })
}

/// `log|S| / max log|K(i)|` with `|S| = p^secret_dim` and
/// `|K(i)| = p^share_dims[i]`; logarithms in base `p`.
pub fn information_rate_from_dimensions(
    secret_dim: u64,
    share_dims: &[u64],
) -> Result<Rational, SchemeError> {
    let max = share_dims.iter().copied().max().unwrap_or(0);
    if max == 0 || share_dims.contains(&0) || secret_dim == 0 {
        return Err(SchemeError::RateUndefined);
    }
    Ok(Rational::new(secret_dim, max))
}

/// Every share and the secret are single field elements, so the rate is 1.
pub fn information_rate(scheme: &LinearScheme) -> Rational {
    let dims = vec![1u64; scheme.structure().n()];
    information_rate_from_dimensions(1, &dims).expect("every participant holds one element")
}
