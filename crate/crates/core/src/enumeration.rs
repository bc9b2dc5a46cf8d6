//! Exhaustive generation of small k-homogeneous structures and the
//! empirical theorem check built on it.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{verify_certificate, SearchCaps, Verdict};
use crate::classifier::{classify, nonideal_target, ClassifierError, ClassifyOptions, Status};
use crate::scheme::{verify_correctness, verify_privacy, DEFAULT_STATE_CAP};
use crate::set::{binomial, subsets_of_size, ParticipantSet};
use crate::structure::AccessStructure;

/// Largest number of candidate minimal sets, `C(n, k)`, enumerated.
pub const MAX_EDGES: u64 = 24;
/// Largest `n` for permutation-based canonical forms.
pub const MAX_CANONICAL_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("invalid parameters: n = {n}, k = {k} (need 2 <= k <= n)")]
    InvalidParameters { n: usize, k: usize },
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationFilter {
    pub n: usize,
    pub k: usize,
    /// `1, k ∉ Ω(k+1)` and `k+1 ∈ Ω(k+1)`.
    pub require_hypotheses: bool,
    /// One structure per isomorphism class.
    pub dedup_iso: bool,
}

impl EnumerationFilter {
    pub fn new(n: usize, k: usize) -> Self {
        EnumerationFilter {
            n,
            k,
            require_hypotheses: false,
            dedup_iso: false,
        }
    }
}

/// Precomputed edge masks: bit `i` stands for the `i`-th `k`-subset of
/// `{1..n}` in numeric order.
struct EdgeIndex {
    edges: Vec<ParticipantSet>,
    by_participant: Vec<u32>,
    // edges inside each (k+1)-subset
    by_window: Vec<u32>,
}

impl EdgeIndex {
    fn new(n: usize, k: usize) -> Self {
        let edges: Vec<ParticipantSet> = subsets_of_size(n, k).collect();
        let mask_of = |pred: &dyn Fn(ParticipantSet) -> bool| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, e)| pred(**e))
                .fold(0u32, |acc, (i, _)| acc | 1 << i)
        };
        let by_participant = (1..=n).map(|p| mask_of(&|e| e.contains(p))).collect();
        let by_window = subsets_of_size(n, k + 1)
            .map(|w| mask_of(&|e| e.is_subset(w)))
            .collect();
        EdgeIndex {
            edges,
            by_participant,
            by_window,
        }
    }

    fn covers(&self, mask: u32) -> bool {
        self.by_participant.iter().all(|&p| mask & p != 0)
    }

    fn meets_hypotheses(&self, mask: u32, k: usize) -> bool {
        let mut full = false;
        for &w in &self.by_window {
            let c = (mask & w).count_ones() as usize;
            if c == 1 || c == k {
                return false;
            }
            full |= c == k + 1;
        }
        full
    }

    fn structure(&self, n: usize, k: usize, mask: u32) -> AccessStructure {
        let chosen = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e);
        AccessStructure::from_sets(n, k, chosen).expect("covered edge sets form valid structures")
    }
}

fn check_filter(filter: &EnumerationFilter) -> Result<(), EnumerationError> {
    let (n, k) = (filter.n, filter.k);
    if k < 2 || k > n {
        return Err(EnumerationError::InvalidParameters { n, k });
    }
    let edges = binomial(n, k);
    if edges > MAX_EDGES {
        return Err(EnumerationError::CapExceeded(format!(
            "C({n},{k}) = {edges} candidate minimal sets, at most {MAX_EDGES} supported"
        )));
    }
    if filter.dedup_iso && n > MAX_CANONICAL_N {
        return Err(EnumerationError::CapExceeded(format!(
            "isomorphism dedup needs n <= {MAX_CANONICAL_N}, got {n}"
        )));
    }
    Ok(())
}

/// Every structure passing `filter`, in increasing order of the edge mask;
/// with `dedup_iso`, the canonical representatives sorted by canonical key.
/// Only edge sets covering every participant form structures, so coverage is
/// always required.
pub fn enumerate_structures(
    filter: &EnumerationFilter,
) -> Result<Vec<AccessStructure>, EnumerationError> {
    check_filter(filter)?;
    let (n, k) = (filter.n, filter.k);
    let index = EdgeIndex::new(n, k);
    let masks = 1u32..(1u32 << index.edges.len());
    let structures: Vec<AccessStructure> = masks
        .into_par_iter()
        .filter(|&m| index.covers(m))
        .filter(|&m| !filter.require_hypotheses || index.meets_hypotheses(m, k))
        .map(|m| index.structure(n, k, m))
        .collect();
    if !filter.dedup_iso {
        return Ok(structures);
    }
    let keyed: Vec<(CanonicalKey, AccessStructure)> = structures
        .into_par_iter()
        .map(|g| canonicalize(&g))
        .collect();
    let classes: BTreeMap<CanonicalKey, AccessStructure> = keyed.into_iter().collect();
    Ok(classes.into_values().collect())
}

/// Lexicographically least sorted basis over all relabelings.
pub type CanonicalKey = Vec<ParticipantSet>;

/// Canonical key of `g`; equal keys exactly for isomorphic structures.
pub fn canonical_form(g: &AccessStructure) -> Result<CanonicalKey, EnumerationError> {
    if g.n() > MAX_CANONICAL_N {
        return Err(EnumerationError::CapExceeded(format!(
            "canonical form needs n <= {MAX_CANONICAL_N}, got {}",
            g.n()
        )));
    }
    Ok(canonicalize(g).0)
}

fn canonicalize(g: &AccessStructure) -> (CanonicalKey, AccessStructure) {
    let n = g.n();
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut best: Option<CanonicalKey> = None;
    let mut best_perm = perm.clone();
    let mut relabeled = Vec::with_capacity(g.basis().len());
    loop {
        relabeled.clear();
        relabeled.extend(g.basis().iter().map(|b| b.relabel(&perm)));
        relabeled.sort();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled.clone());
            best_perm.clone_from(&perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    (best.expect("at least one permutation"), g.relabeled(&best_perm))
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Status, whether the reduction is threshold, and the problem found.
type Outcome = (Status, bool, Option<String>);

/// One structure that contradicts the expected outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremViolation {
    pub structure: AccessStructure,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheckReport {
    pub n: usize,
    pub k: usize,
    pub dedup: bool,
    pub examined: usize,
    pub counts: BTreeMap<Status, usize>,
    /// Structures whose reduction is not a threshold structure.
    pub non_threshold_reductions: usize,
    pub violations: Vec<TheoremViolation>,
    /// For `k = 2`: whether every examined structure is a complete graph.
    pub k2_all_complete: Option<bool>,
    pub wall_time: Duration,
}

impl TheoremCheckReport {
    pub fn count(&self, status: Status) -> usize {
        self.counts.get(&status).copied().unwrap_or(0)
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Classifies every hypothesis-satisfying structure on `n` participants and
/// records any outcome at odds with the characterization: an unresolved
/// structure, an ideal scheme failing verification, a non-ideal certificate
/// failing re-verification or exceeding `(k-1)/k`, or a status disagreeing
/// with whether the reduction is a threshold structure.
pub fn check_theorem(
    n: usize,
    k: usize,
    dedup: bool,
    caps: &SearchCaps,
) -> Result<TheoremCheckReport, EnumerationError> {
    if caps.max_m == 0 || caps.max_a == 0 {
        return Err(EnumerationError::CapExceeded(format!(
            "search caps must be positive (max_m = {}, max_a = {})",
            caps.max_m, caps.max_a
        )));
    }
    let start = Instant::now();
    let filter = EnumerationFilter {
        require_hypotheses: true,
        dedup_iso: dedup,
        ..EnumerationFilter::new(n, k)
    };
    let structures = enumerate_structures(&filter)?;
    let options = ClassifyOptions {
        caps: *caps,
        verify_scheme: false,
        ..ClassifyOptions::for_order(k)
    };
    let outcomes: Vec<Result<Outcome, ClassifierError>> = structures
        .par_iter()
        .map(|g| {
            let c = classify(g, &options)?;
            let threshold = c.reduction.quotient.is_threshold();
            let problem = match c.status {
                Status::Ideal => {
                    let scheme = c.scheme().expect("ideal carries a scheme");
                    let correct = verify_correctness(scheme, DEFAULT_STATE_CAP);
                    let private = verify_privacy(scheme, DEFAULT_STATE_CAP);
                    match (correct, private) {
                        (Ok(a), Ok(b)) if a.passed() && b.passed() => None,
                        (Ok(_), Ok(_)) => Some("ideal scheme failed verification".to_string()),
                        (Err(e), _) | (_, Err(e)) => Some(format!("scheme not verifiable: {e}")),
                    }
                }
                Status::NotIdeal => {
                    let cert = c.certificate().expect("not ideal carries a certificate");
                    if verify_certificate(g, cert) != Verdict::Accepted {
                        Some("certificate failed re-verification".to_string())
                    } else if cert.bound > nonideal_target(k) {
                        Some(format!("certificate bound {} exceeds (k-1)/k", cert.bound))
                    } else {
                        None
                    }
                }
                Status::Unresolved => Some("unresolved within search caps".to_string()),
                Status::HypothesesNotMet => Some("filter admitted a structure missing the hypotheses".to_string()),
            };
            let problem = problem.or_else(|| {
                let ideal = c.status == Status::Ideal;
                (ideal != threshold).then(|| "status disagrees with the reduction".to_string())
            });
            Ok((c.status, threshold, problem))
        })
        .collect();
    let mut counts = BTreeMap::new();
    let mut violations = Vec::new();
    let mut non_threshold_reductions = 0;
    for (g, outcome) in structures.iter().zip(outcomes) {
        let (status, threshold, problem) = outcome?;
        *counts.entry(status).or_insert(0) += 1;
        if !threshold {
            non_threshold_reductions += 1;
        }
        if let Some(reason) = problem {
            violations.push(TheoremViolation {
                structure: g.clone(),
                reason,
            });
        }
    }
    let k2_all_complete = (k == 2).then(|| structures.iter().all(|g| g.is_threshold()));
    Ok(TheoremCheckReport {
        n,
        k,
        dedup,
        examined: structures.len(),
        counts,
        non_threshold_reductions,
        violations,
        k2_all_complete,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(m: &[usize]) -> ParticipantSet {
        ParticipantSet::from_members(m.iter().copied())
    }

    /// Direct count of covering edge subsets.
    fn brute_force_count(n: usize, k: usize) -> usize {
        let edges: Vec<ParticipantSet> = subsets_of_size(n, k).collect();
        (1u32..1 << edges.len())
            .filter(|mask| {
                let union = edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(ParticipantSet::EMPTY, |a, (_, e)| a.union(*e));
                union == ParticipantSet::full(n)
            })
            .count()
    }

    #[test]
    fn small_counts() {
        let count = |n, k| enumerate_structures(&EnumerationFilter::new(n, k)).unwrap().len();
        assert_eq!(count(3, 2), 4);
        assert_eq!(count(4, 3), 11);
        assert_eq!(count(4, 3), brute_force_count(4, 3));
        assert_eq!(count(5, 2), brute_force_count(5, 2));
        assert_eq!(count(5, 3), brute_force_count(5, 3));
    }

    #[test]
    fn dedup_on_three() {
        let filter = EnumerationFilter {
            dedup_iso: true,
            ..EnumerationFilter::new(3, 2)
        };
        let classes = enumerate_structures(&filter).unwrap();
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn canonical_keys() {
        let p123 = AccessStructure::build(3, 2, [vec![1, 2], vec![2, 3]]).unwrap();
        let p213 = AccessStructure::build(3, 2, [vec![2, 1], vec![1, 3]]).unwrap();
        let tri = AccessStructure::threshold(3, 2).unwrap();
        assert_eq!(canonical_form(&p123), canonical_form(&p213));
        assert_ne!(canonical_form(&p123), canonical_form(&tri));
        let chain = AccessStructure::build(5, 3, [vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]]).unwrap();
        let mirror = chain.relabeled(&[5, 4, 3, 2, 1]);
        assert_eq!(canonical_form(&chain), canonical_form(&mirror));
        assert_eq!(
            canonical_form(&p123).unwrap(),
            vec![set(&[1, 2]), set(&[1, 3])]
        );
    }

    #[test]
    fn dedup_class_sizes_sum_to_total() {
        let all = enumerate_structures(&EnumerationFilter::new(4, 2)).unwrap();
        let mut sizes: BTreeMap<CanonicalKey, usize> = BTreeMap::new();
        for g in &all {
            *sizes.entry(canonical_form(g).unwrap()).or_insert(0) += 1;
        }
        let dedup = enumerate_structures(&EnumerationFilter {
            dedup_iso: true,
            ..EnumerationFilter::new(4, 2)
        })
        .unwrap();
        assert_eq!(dedup.len(), sizes.len());
        assert_eq!(sizes.values().sum::<usize>(), all.len());
        for g in &dedup {
            assert_eq!(canonical_form(g).unwrap(), g.basis().to_vec());
        }
    }

    #[test]
    fn hypothesis_filter_matches_structure_check() {
        for (n, k) in [(4, 2), (5, 2), (5, 3)] {
            let all = enumerate_structures(&EnumerationFilter::new(n, k)).unwrap();
            let expected: Vec<_> = all
                .into_iter()
                .filter(|g| g.check_hypotheses().unwrap().satisfied())
                .collect();
            let filtered = enumerate_structures(&EnumerationFilter {
                require_hypotheses: true,
                ..EnumerationFilter::new(n, k)
            })
            .unwrap();
            assert_eq!(filtered, expected);
        }
    }

    #[test]
    fn k2_hypotheses_force_complete_graph() {
        let hs = enumerate_structures(&EnumerationFilter {
            require_hypotheses: true,
            ..EnumerationFilter::new(4, 2)
        })
        .unwrap();
        assert_eq!(hs, vec![AccessStructure::threshold(4, 2).unwrap()]);
        let report = check_theorem(4, 2, false, &SearchCaps::for_order(2)).unwrap();
        assert_eq!(report.count(Status::Ideal), 1);
        assert!(report.passed());
        assert_eq!(report.k2_all_complete, Some(true));
    }

    #[test]
    fn caps() {
        let zero = SearchCaps {
            max_m: 0,
            max_a: 2,
            time_budget: None,
        };
        assert!(matches!(
            check_theorem(4, 2, false, &zero),
            Err(EnumerationError::CapExceeded(_))
        ));
        assert!(matches!(
            enumerate_structures(&EnumerationFilter::new(7, 3)),
            Err(EnumerationError::CapExceeded(_))
        ));
        assert!(matches!(
            enumerate_structures(&EnumerationFilter::new(3, 4)),
            Err(EnumerationError::InvalidParameters { .. })
        ));
    }

    #[test]
    fn deterministic_stream() {
        let f = EnumerationFilter::new(5, 3);
        assert_eq!(enumerate_structures(&f).unwrap(), enumerate_structures(&f).unwrap());
    }

    #[test]
    fn permutations_in_order() {
        let mut v = vec![1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![3, 2, 1]);
    }
}
