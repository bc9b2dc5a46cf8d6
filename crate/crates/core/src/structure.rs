//! k-homogeneous access structures and their counting statistics.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::set::{binomial, subsets_of_size, ParticipantSet, MAX_PARTICIPANTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("invalid parameters: n = {n}, k = {k} (need 2 <= k <= n <= 64)")]
    InvalidParameters { n: usize, k: usize },
    #[error("minimal set #{index} has {found} distinct members, expected {expected}")]
    WrongCardinality {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("minimal set #{index} names participant {participant}, outside 1..={n}")]
    OutOfRange {
        index: usize,
        participant: usize,
        n: usize,
    },
    #[error("minimal set #{index} duplicates minimal set #{first}")]
    Duplicate { index: usize, first: usize },
    #[error("participants {participants:?} belong to no minimal qualified set")]
    UncoveredParticipant { participants: Vec<usize> },
    #[error("the basis is empty")]
    EmptyBasis,
    #[error("subset size {m} outside {k}..={n}")]
    InvalidSize { m: usize, k: usize, n: usize },
    #[error("needs at least {needed} participants, got {found}")]
    TooSmall { needed: usize, found: usize },
    #[error("participant set {set} is not contained in 1..={n}")]
    SetOutOfRange { set: ParticipantSet, n: usize },
}

/// A k-homogeneous access structure given by its minimal qualified sets.
///
/// The basis is stored in lexicographic order. Values are immutable once
/// built and every instance satisfies the validation rules of [`build`].
///
/// [`build`]: AccessStructure::build
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AccessStructure {
    n: usize,
    k: usize,
    basis: Vec<ParticipantSet>,
    // bit patterns of the basis, sorted numerically, for membership lookups
    lookup: Vec<u64>,
}

impl std::fmt::Debug for AccessStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AccessStructure")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("basis", &self.basis)
            .finish()
    }
}

/// What the ideality characterization needs from `Ω(k+1, Γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub k: usize,
    pub omega: BTreeSet<usize>,
    pub excludes_one: bool,
    pub excludes_k: bool,
    pub contains_k_plus_one: bool,
}

impl HypothesisReport {
    pub fn satisfied(&self) -> bool {
        self.excludes_one && self.excludes_k && self.contains_k_plus_one
    }

    /// Human-readable reasons the hypotheses fail, empty when satisfied.
    pub fn failures(&self) -> Vec<String> {
        let size = self.k + 1;
        let mut out = Vec::new();
        if !self.excludes_one {
            out.push(format!("1 in omega({size})"));
        }
        if !self.excludes_k {
            out.push(format!("{} in omega({size})", self.k));
        }
        if !self.contains_k_plus_one {
            out.push(format!("{size} not in omega({size})"));
        }
        out
    }
}

impl AccessStructure {
    /// Validates `sets` as the minimal qualified sets of a k-homogeneous
    /// structure on `{1..n}`.
    pub fn build<S, I>(n: usize, k: usize, sets: S) -> Result<Self, StructureError>
    where
        S: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        if k < 2 || k > n || n > MAX_PARTICIPANTS {
            return Err(StructureError::InvalidParameters { n, k });
        }
        let mut basis = Vec::new();
        for (index, members) in sets.into_iter().enumerate() {
            let mut set = ParticipantSet::EMPTY;
            for p in members {
                if p == 0 || p > n {
                    return Err(StructureError::OutOfRange {
                        index,
                        participant: p,
                        n,
                    });
                }
                set.insert(p);
            }
            if set.len() != k {
                return Err(StructureError::WrongCardinality {
                    index,
                    expected: k,
                    found: set.len(),
                });
            }
            if let Some(first) = basis.iter().position(|&b| b == set) {
                return Err(StructureError::Duplicate { index, first });
            }
            basis.push(set);
        }
        Self::from_basis(n, k, basis)
    }

    /// Builds from already-formed sets; same validation as [`build`](Self::build).
    pub fn from_sets(
        n: usize,
        k: usize,
        sets: impl IntoIterator<Item = ParticipantSet>,
    ) -> Result<Self, StructureError> {
        Self::build(n, k, sets.into_iter().map(|s| s.iter()))
    }

    fn from_basis(
        n: usize,
        k: usize,
        mut basis: Vec<ParticipantSet>,
    ) -> Result<Self, StructureError> {
        if basis.is_empty() {
            return Err(StructureError::EmptyBasis);
        }
        let covered = basis
            .iter()
            .fold(ParticipantSet::EMPTY, |acc, &b| acc.union(b));
        let uncovered = ParticipantSet::full(n).difference(covered);
        if !uncovered.is_empty() {
            return Err(StructureError::UncoveredParticipant {
                participants: uncovered.to_vec(),
            });
        }
        basis.sort();
        let mut lookup: Vec<u64> = basis.iter().map(|b| b.bits()).collect();
        lookup.sort_unstable();
        Ok(AccessStructure {
            n,
            k,
            basis,
            lookup,
        })
    }

    /// The complete k-uniform structure on `n` participants.
    pub fn threshold(n: usize, k: usize) -> Result<Self, StructureError> {
        if k < 2 || k > n || n > MAX_PARTICIPANTS {
            return Err(StructureError::InvalidParameters { n, k });
        }
        Self::from_basis(n, k, subsets_of_size(n, k).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[ParticipantSet] {
        &self.basis
    }

    pub fn participants(&self) -> ParticipantSet {
        ParticipantSet::full(self.n)
    }

    /// Whether `set` is one of the minimal qualified sets.
    pub fn is_minimal(&self, set: ParticipantSet) -> bool {
        self.lookup.binary_search(&set.bits()).is_ok()
    }

    pub fn is_qualified(&self, q: ParticipantSet) -> bool {
        q.len() >= self.k && self.basis.iter().any(|b| b.is_subset(q))
    }

    /// Number of minimal qualified sets inside `q`.
    pub fn count_w(&self, q: ParticipantSet) -> usize {
        self.basis.iter().filter(|b| b.is_subset(q)).count()
    }

    /// The exact set of values `count_w` takes over all `m`-subsets.
    pub fn omega(&self, m: usize) -> Result<BTreeSet<usize>, StructureError> {
        if m < self.k || m > self.n {
            return Err(StructureError::InvalidSize {
                m,
                k: self.k,
                n: self.n,
            });
        }
        Ok(subsets_of_size(self.n, m).map(|q| self.count_w(q)).collect())
    }

    /// Restriction to `subset`, relabeled onto `{1..|subset|}` in increasing
    /// order. The returned vector maps new label `j` (at index `j - 1`) to the
    /// original participant.
    pub fn induced(
        &self,
        subset: ParticipantSet,
    ) -> Result<(AccessStructure, Vec<usize>), StructureError> {
        if !subset.is_subset(self.participants()) {
            return Err(StructureError::SetOutOfRange {
                set: subset,
                n: self.n,
            });
        }
        if subset.len() < self.k {
            return Err(StructureError::TooSmall {
                needed: self.k,
                found: subset.len(),
            });
        }
        let originals = subset.to_vec();
        let mut to_new = vec![0usize; self.n];
        for (j, &p) in originals.iter().enumerate() {
            to_new[p - 1] = j + 1;
        }
        let kept: Vec<ParticipantSet> = self
            .basis
            .iter()
            .filter(|b| b.is_subset(subset))
            .map(|b| b.relabel(&to_new))
            .collect();
        let covered = kept
            .iter()
            .fold(ParticipantSet::EMPTY, |acc, &b| acc.union(b));
        let uncovered = ParticipantSet::full(originals.len()).difference(covered);
        if !uncovered.is_empty() {
            return Err(StructureError::UncoveredParticipant {
                participants: uncovered.iter().map(|j| originals[j - 1]).collect(),
            });
        }
        let induced = Self::from_basis(originals.len(), self.k, kept)?;
        Ok((induced, originals))
    }

    pub fn is_threshold(&self) -> bool {
        self.basis.len() as u64 == binomial(self.n, self.k)
    }

    pub fn check_hypotheses(&self) -> Result<HypothesisReport, StructureError> {
        if self.n < self.k + 1 {
            return Err(StructureError::TooSmall {
                needed: self.k + 1,
                found: self.n,
            });
        }
        let omega = self.omega(self.k + 1)?;
        Ok(HypothesisReport {
            k: self.k,
            excludes_one: !omega.contains(&1),
            excludes_k: !omega.contains(&self.k),
            contains_k_plus_one: omega.contains(&(self.k + 1)),
            omega,
        })
    }

    /// Relabels participants: participant `i` becomes `perm[i - 1]`.
    pub fn relabeled(&self, perm: &[usize]) -> AccessStructure {
        assert_eq!(perm.len(), self.n);
        let basis = self.basis.iter().map(|b| b.relabel(perm)).collect();
        Self::from_basis(self.n, self.k, basis).expect("relabeling preserves validity")
    }

    /// Dense qualification table over all `2^n` subsets; `None` above
    /// [`QualifiedTable::MAX_N`].
    pub fn qualified_table(&self) -> Option<QualifiedTable> {
        QualifiedTable::new(self)
    }
}

/// Precomputed `is_qualified` for every subset of a small participant set.
#[derive(Clone)]
pub struct QualifiedTable {
    n: usize,
    words: Vec<u64>,
}

impl QualifiedTable {
    pub const MAX_N: usize = 24;

    pub fn new(structure: &AccessStructure) -> Option<Self> {
        let n = structure.n();
        if n > Self::MAX_N {
            return None;
        }
        let size = 1usize << n;
        let mut words = vec![0u64; size.div_ceil(64)];
        for b in structure.basis() {
            set_bit(&mut words, b.bits() as usize);
        }
        // upward closure, one dimension at a time
        for bit in 0..n {
            let step = 1usize << bit;
            for mask in 0..size {
                if mask & step != 0 && get_bit(&words, mask ^ step) {
                    set_bit(&mut words, mask);
                }
            }
        }
        Some(QualifiedTable { n, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_qualified(&self, q: ParticipantSet) -> bool {
        get_bit(&self.words, q.bits() as usize)
    }
}

fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1u64 << (i % 64);
}

fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}
