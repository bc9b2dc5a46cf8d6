//! Fixed-shape independent sequences built from named participant roles.
//!
//! Each [`Template`] takes `k + 2` distinct participants and lays them out as
//! a chain of length `k` with witnesses whose union has `k - 1` members. When
//! the template's membership side-conditions hold in the structure, the
//! result certifies a bound of `(k-1)/k`.

use std::fmt;

use super::{
    verify_certificate, BoundsError, IndependentSequenceCertificate, Verdict, Violation,
};
use crate::set::ParticipantSet;
use crate::structure::AccessStructure;

/// The sequence shapes available for replay.
///
/// Role order per template (all lists 1-based as written):
/// - `OutsiderLast`, `OutsiderInSupport`: `u_i, u_j, m_1, …, m_{k-1}, v`
/// - `ExtensionHead`: `a_1, a_2, q_1, …, q_{k-1}, b`
/// - `ExtensionSwap`: `u_1, u_2, a_3, …, a_{k+1}, b`
/// - `EquivalenceProbe`: `l_1, …, l_{k-2}, a_k, a_{k+1}, b, x`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Template {
    /// Chain grows from `u_i` through the `m`'s and ends by adding `v`.
    OutsiderLast,
    /// Chain grows through the `m`'s and ends by adding `u_j`.
    OutsiderInSupport,
    /// Chain starts at `q_{k-2}`, picks up `b`, and ends with `a_2`.
    ExtensionHead,
    /// Chain starts at `u_1`, picks up `b`, and ends with `a_{k+1}`.
    ExtensionSwap,
    /// Chain starts at `l_1`, picks up `b`, and ends with the outsider `x`.
    EquivalenceProbe,
}

impl Template {
    pub const ALL: [Template; 5] = [
        Template::OutsiderLast,
        Template::OutsiderInSupport,
        Template::ExtensionHead,
        Template::ExtensionSwap,
        Template::EquivalenceProbe,
    ];

    /// Smallest `k` for which the template is defined.
    pub fn min_order(self) -> usize {
        match self {
            Template::OutsiderLast | Template::OutsiderInSupport => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Template::OutsiderLast => "outsider-last",
            Template::OutsiderInSupport => "outsider-in-support",
            Template::ExtensionHead => "extension-head",
            Template::ExtensionSwap => "extension-swap",
            Template::EquivalenceProbe => "equivalence-probe",
        }
    }

    /// Chain and witnesses for `roles`, which must already be validated.
    fn layout(self, k: usize, roles: &[usize]) -> (Vec<ParticipantSet>, Vec<ParticipantSet>) {
        // `r(i)` is the participant in role slot `i` (0-based)
        let r = |i: usize| roles[i];
        // members of the 1-based role range `lo..=hi` offset by `base`, empty when lo > hi
        let range = |base: usize, lo: usize, hi: usize| -> ParticipantSet {
            (lo..=hi).map(|t| r(base + t - 1)).collect()
        };
        let one = ParticipantSet::singleton;
        let mut chain = Vec::with_capacity(k);
        let mut xs = Vec::with_capacity(k);
        match self {
            Template::OutsiderLast => {
                let (ui, uj, v) = (r(0), r(1), r(k + 1));
                let m = |lo, hi| range(2, lo, hi);
                for t in 1..k {
                    chain.push(one(ui).union(m(1, t - 1)));
                }
                chain.push(chain[k - 2].with(v));
                let m_last = r(k);
                for t in 1..=k.saturating_sub(2) {
                    xs.push(one(uj).union(m(t, k - 3)).with(m_last));
                }
                xs.push(one(uj));
                xs.push(one(m_last));
            }
            Template::OutsiderInSupport => {
                let (ui, uj, v) = (r(0), r(1), r(k + 1));
                let m = |lo, hi| range(2, lo, hi);
                for t in 1..k {
                    chain.push(m(1, t));
                }
                chain.push(m(1, k - 1).with(uj));
                for t in 1..=k.saturating_sub(2) {
                    xs.push(one(ui).union(m(t + 1, k - 2)).with(v));
                }
                xs.push(one(v));
                xs.push(one(ui));
            }
            Template::ExtensionHead => {
                let (a1, a2, b) = (r(0), r(1), r(k + 1));
                let q = |lo, hi| range(2, lo, hi);
                chain.push(q(k - 2, k - 2));
                for t in 2..k {
                    chain.push(q(k - t, k - 2).with(b));
                }
                chain.push(chain[k - 2].with(a2));
                let q_last = r(k);
                for t in 1..=k - 3 {
                    xs.push(ParticipantSet::from_members([a1, a2]).union(q(2, k - 2 - t)).with(q_last));
                }
                xs.push(ParticipantSet::from_members([a1, a2]));
                xs.push(one(q_last));
                xs.push(one(a1));
            }
            Template::ExtensionSwap => {
                let (u1, u2, b) = (r(0), r(1), r(k + 1));
                // a_j sits in slot j - 1 for 3 <= j <= k + 1
                let a = |lo: usize, hi: usize| -> ParticipantSet {
                    (lo..=hi).map(|j| r(j - 1)).collect()
                };
                chain.push(one(u1));
                for t in 2..k {
                    chain.push(one(u1).union(a(3, t)).with(b));
                }
                chain.push(chain[k - 2].with(r(k)));
                for t in 1..=k - 3 {
                    xs.push(one(u2).union(a(t + 3, k + 1)));
                }
                xs.push(a(k, k + 1));
                xs.push(one(u2));
                xs.push(one(r(k - 1)));
            }
            Template::EquivalenceProbe => {
                let l = |lo, hi| range(0, lo, hi);
                let (ak, ak1, b, x) = (r(k - 2), r(k - 1), r(k), r(k + 1));
                chain.push(one(r(0)));
                for t in 2..k {
                    chain.push(l(1, t - 1).with(b));
                }
                chain.push(chain[k - 2].with(x));
                xs.push(l(2, k - 2).with(ak).with(ak1));
                for t in 2..=k - 2 {
                    xs.push(l(t, k - 2).with(ak));
                }
                xs.push(one(ak));
                xs.push(one(ak1));
            }
        }
        (chain, xs)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Template {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Template::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown template '{s}'"))
    }
}

/// Outcome of a replay attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayOutcome {
    Verified(IndependentSequenceCertificate),
    /// The side-conditions fail in this structure; the clause is the first
    /// one the laid-out sequence breaks.
    Rejected(Violation),
}

impl ReplayOutcome {
    pub fn certificate(self) -> Option<IndependentSequenceCertificate> {
        match self {
            ReplayOutcome::Verified(c) => Some(c),
            ReplayOutcome::Rejected(_) => None,
        }
    }
}

/// Lays out `template` with the given roles and verifies the result.
pub fn replay_lemma_sequence(
    g: &AccessStructure,
    template: Template,
    roles: &[usize],
) -> Result<ReplayOutcome, BoundsError> {
    let k = g.k();
    if k < template.min_order() {
        return Err(BoundsError::ConfigInvalid(format!(
            "{template} needs k >= {}, structure has k = {k}",
            template.min_order()
        )));
    }
    if roles.len() != k + 2 {
        return Err(BoundsError::ConfigInvalid(format!(
            "{template} takes {} roles, got {}",
            k + 2,
            roles.len()
        )));
    }
    if let Some(&p) = roles.iter().find(|&&p| p == 0 || p > g.n()) {
        return Err(BoundsError::ConfigInvalid(format!(
            "participant {p} outside 1..={}",
            g.n()
        )));
    }
    let distinct: ParticipantSet = roles.iter().copied().collect();
    if distinct.len() != roles.len() {
        return Err(BoundsError::ConfigInvalid("roles are not distinct".into()));
    }
    let (chain, witnesses) = template.layout(k, roles);
    let union = witnesses
        .iter()
        .fold(ParticipantSet::EMPTY, |acc, &x| acc.union(x));
    let a_qualified = g.is_qualified(union);
    let cert = IndependentSequenceCertificate {
        bound: super::formula_bound(union.len(), chain.len(), a_qualified),
        chain,
        witnesses,
        a: union,
        a_qualified,
    };
    Ok(match verify_certificate(g, &cert) {
        Verdict::Accepted => ReplayOutcome::Verified(cert),
        Verdict::Rejected(v) => ReplayOutcome::Rejected(v),
    })
}
