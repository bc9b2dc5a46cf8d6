//! Fixed-width participant sets.
//!
//! Participants are 1-based indices in `1..=64`; participant `i` occupies bit
//! `i - 1` of a single `u64` word.

use std::cmp::Ordering;
use std::fmt;

/// Largest participant count a [`ParticipantSet`] can hold.
pub const MAX_PARTICIPANTS: usize = 64;

/// A subset of `{1..n}` stored as a bit-vector.
///
/// Ordering is lexicographic on the sorted member lists, so `{1,2,3} <
/// {1,2,4} < {1,3} < {2}`. Sorting a basis with this order yields the
/// canonical file order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ParticipantSet(u64);

impl ParticipantSet {
    pub const EMPTY: ParticipantSet = ParticipantSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ParticipantSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The full set `{1..n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_PARTICIPANTS, "participant count {n} exceeds 64");
        if n == MAX_PARTICIPANTS {
            ParticipantSet(u64::MAX)
        } else {
            ParticipantSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(p: usize) -> Self {
        let mut s = Self::EMPTY;
        s.insert(p);
        s
    }

    /// Builds a set from 1-based members. Panics on a member outside `1..=64`;
    /// callers validating untrusted input should range-check first.
    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut s = Self::EMPTY;
        for p in members {
            s.insert(p);
        }
        s
    }

    pub fn insert(&mut self, p: usize) {
        assert!(
            (1..=MAX_PARTICIPANTS).contains(&p),
            "participant {p} outside 1..=64"
        );
        self.0 |= 1u64 << (p - 1);
    }

    pub fn remove(&mut self, p: usize) {
        if (1..=MAX_PARTICIPANTS).contains(&p) {
            self.0 &= !(1u64 << (p - 1));
        }
    }

    pub fn with(self, p: usize) -> Self {
        let mut s = self;
        s.insert(p);
        s
    }

    pub fn without(self, p: usize) -> Self {
        let mut s = self;
        s.remove(p);
        s
    }

    pub fn contains(self, p: usize) -> bool {
        (1..=MAX_PARTICIPANTS).contains(&p) && self.0 & (1u64 << (p - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ParticipantSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: ParticipantSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn union(self, other: ParticipantSet) -> Self {
        ParticipantSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ParticipantSet) -> Self {
        ParticipantSet(self.0 & other.0)
    }

    pub fn difference(self, other: ParticipantSet) -> Self {
        ParticipantSet(self.0 & !other.0)
    }

    /// Largest member, or `None` for the empty set.
    pub fn last(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(64 - self.0.leading_zeros() as usize)
        }
    }

    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Relabels members through `map`, where `map[i - 1]` is the new label of
    /// participant `i`.
    pub fn relabel(self, map: &[usize]) -> Self {
        self.iter().map(|p| map[p - 1]).collect()
    }

    /// All subsets of `self`, in increasing numeric order of their bit patterns
    /// (the empty set first).
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }
}

impl Ord for ParticipantSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ParticipantSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for ParticipantSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ParticipantSet::from_members(iter)
    }
}

impl fmt::Debug for ParticipantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{1,2,3}`; the empty set prints as `{}`.
impl fmt::Display for ParticipantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Iterator over the members of a [`ParticipantSet`].
#[derive(Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Carry-rippler enumeration of all submasks.
pub struct Subsets {
    set: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = ParticipantSet;

    fn next(&mut self) -> Option<ParticipantSet> {
        let cur = self.next?;
        let succ = cur.wrapping_sub(self.set) & self.set;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(ParticipantSet(cur))
    }
}

/// All `size`-element subsets of `{1..n}`, in increasing numeric order of their
/// bit patterns (Gosper's hack).
pub fn subsets_of_size(n: usize, size: usize) -> SizedSubsets {
    assert!(n <= MAX_PARTICIPANTS);
    let next = if size > n {
        None
    } else if size == 0 {
        Some(0)
    } else if size == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << size) - 1)
    };
    SizedSubsets { n, next }
}

pub struct SizedSubsets {
    n: usize,
    next: Option<u64>,
}

impl Iterator for SizedSubsets {
    type Item = ParticipantSet;

    fn next(&mut self) -> Option<ParticipantSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let succ = (((r ^ cur) >> 2) / c) | r;
                if self.n < 64 && succ >> self.n != 0 {
                    None
                } else {
                    Some(succ)
                }
            }
        };
        Some(ParticipantSet(cur))
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}
