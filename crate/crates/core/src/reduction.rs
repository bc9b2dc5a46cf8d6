//! Participant equivalence and the reduced access structure.
//!
//! Two distinct participants `a`, `b` are equivalent when no minimal
//! qualified set contains both, and swapping one for the other maps minimal
//! qualified sets to minimal qualified sets. Because every minimal set has
//! exactly `k` members, the swap condition only needs checking on
//! `(k-1)`-subsets `A` of the other participants: `A ∪ {a}` is minimal iff
//! `A ∪ {b}` is.

use thiserror::Error;

use crate::set::ParticipantSet;
use crate::structure::{AccessStructure, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("participant {participant} outside 1..={n}")]
    OutOfRange { participant: usize, n: usize },
    /// The pairwise relation is not transitive: `a ~ b`, `b ~ c`, `a !~ c`.
    #[error("equivalence is not transitive: {a} ~ {b} and {b} ~ {c} but not {a} ~ {c}")]
    IntransitivityDetected { a: usize, b: usize, c: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Outcome of reducing a structure by participant equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    /// Equivalence classes ordered by their smallest member.
    pub classes: Vec<ParticipantSet>,
    /// Smallest member of each class; quotient participant `j` is
    /// `representatives[j - 1]`.
    pub representatives: Vec<usize>,
    /// `class_of[p - 1]` is the quotient participant (1-based) of `p`.
    pub class_of: Vec<usize>,
    pub quotient: AccessStructure,
    /// False when the quotient still has equivalent participants, i.e. a
    /// second reduction pass would merge further.
    pub fixpoint: bool,
}

impl ReductionResult {
    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Maps a set of quotient participants to the matching set of
    /// representatives in the original structure.
    pub fn lift_set(&self, set: ParticipantSet) -> ParticipantSet {
        set.iter().map(|j| self.representatives[j - 1]).collect()
    }
}

fn check_participant(g: &AccessStructure, p: usize) -> Result<(), ReductionError> {
    if p == 0 || p > g.n() {
        Err(ReductionError::OutOfRange {
            participant: p,
            n: g.n(),
        })
    } else {
        Ok(())
    }
}

/// Whether `a ~ b`.
pub fn is_equivalent(g: &AccessStructure, a: usize, b: usize) -> Result<bool, ReductionError> {
    check_participant(g, a)?;
    check_participant(g, b)?;
    Ok(equivalent_unchecked(g, a, b))
}

fn equivalent_unchecked(g: &AccessStructure, a: usize, b: usize) -> bool {
    if a == b {
        return true;
    }
    let pair = ParticipantSet::from_members([a, b]);
    if g.basis().iter().any(|m| pair.is_subset(*m)) {
        return false;
    }
    // Each minimal set through `a` must reappear with `a` swapped for `b`,
    // and vice versa. With (i) in force neither set contains the other
    // participant, so the links have the same size when they match.
    let links = |x: usize| {
        g.basis()
            .iter()
            .filter(move |m| m.contains(x))
            .map(move |m| m.without(x))
    };
    links(a).all(|rest| g.is_minimal(rest.with(b))) && links(b).all(|rest| g.is_minimal(rest.with(a)))
}

/// Partition of `{1..n}` into equivalence classes, ordered by smallest member.
pub fn equivalence_classes(g: &AccessStructure) -> Result<Vec<ParticipantSet>, ReductionError> {
    let n = g.n();
    let mut assigned = ParticipantSet::EMPTY;
    let mut classes: Vec<ParticipantSet> = Vec::new();
    for a in 1..=n {
        if assigned.contains(a) {
            continue;
        }
        let class: ParticipantSet = (a..=n)
            .filter(|&b| !assigned.contains(b) && equivalent_unchecked(g, a, b))
            .collect();
        // every pair inside the class must be related, and no member may be
        // related to a participant already placed in an earlier class
        for b in class.iter() {
            for c in class.iter().filter(|&c| c > b) {
                if !equivalent_unchecked(g, b, c) {
                    return Err(ReductionError::IntransitivityDetected { a: b, b: a, c });
                }
            }
        }
        for b in class.iter().filter(|&b| b != a) {
            for earlier in &classes {
                let rep = earlier.first().expect("classes are nonempty");
                if let Some(c) = earlier.iter().find(|&c| equivalent_unchecked(g, b, c)) {
                    return Err(if !equivalent_unchecked(g, a, c) {
                        ReductionError::IntransitivityDetected { a: c, b, c: a }
                    } else {
                        // a ~ c ~ rep, yet a was left out of rep's class
                        ReductionError::IntransitivityDetected { a, b: c, c: rep }
                    });
                }
            }
        }
        assigned = assigned.union(class);
        classes.push(class);
    }
    Ok(classes)
}

/// Reduces `g`: one representative (the smallest member) per equivalence
/// class, quotient induced on the representatives.
pub fn reduce(g: &AccessStructure) -> Result<ReductionResult, ReductionError> {
    let classes = equivalence_classes(g)?;
    let representatives: Vec<usize> = classes
        .iter()
        .map(|c| c.first().expect("classes are nonempty"))
        .collect();
    let mut class_of = vec![0usize; g.n()];
    for (j, class) in classes.iter().enumerate() {
        for p in class.iter() {
            class_of[p - 1] = j + 1;
        }
    }
    let rep_set: ParticipantSet = representatives.iter().copied().collect();
    let (quotient, _) = g.induced(rep_set)?;
    let m = quotient.n();
    let fixpoint =
        (1..=m).all(|x| ((x + 1)..=m).all(|y| !equivalent_unchecked(&quotient, x, y)));
    Ok(ReductionResult {
        classes,
        representatives,
        class_of,
        quotient,
        fixpoint,
    })
}
