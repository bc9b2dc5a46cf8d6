//! Brute-force oracles shared by the integration tests. Everything here works
//! from the raw basis or from first definitions, never from the library's
//! own shortcuts.
#![allow(dead_code)]

use homsec::bounds::{formula_bound, IndependentSequenceCertificate};
use homsec::reduction::{is_equivalent, reduce};
use homsec::scheme::{
    is_vector_space_structure, is_vector_space_structure_exhaustive, VectorAssignment,
};
use homsec::set::ParticipantSet;
use homsec::{AccessStructure, PrimeField};
use rand::Rng;

pub fn set(m: &[usize]) -> ParticipantSet {
    ParticipantSet::from_members(m.iter().copied())
}

/// All `k`-subsets of `{1..n}` as member lists, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every valid structure on `n` participants with uniformity `k`: each
/// nonempty family of `k`-subsets that covers `{1..n}`.
pub fn all_structures(n: usize, k: usize) -> Vec<AccessStructure> {
    let edges = k_subsets(n, k);
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << edges.len()) {
        let chosen: Vec<Vec<usize>> = (0..edges.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| edges[i].clone())
            .collect();
        let covered = (1..=n).all(|p| chosen.iter().any(|e| e.contains(&p)));
        if covered {
            out.push(AccessStructure::build(n, k, chosen).expect("covering family is valid"));
        }
    }
    out
}

/// A random valid structure: each edge kept with probability 1/2, then one
/// edge added per uncovered participant.
pub fn random_structure<R: Rng>(rng: &mut R, n: usize, k: usize) -> AccessStructure {
    let edges = k_subsets(n, k);
    let mut chosen: Vec<Vec<usize>> = edges.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    for p in 1..=n {
        if !chosen.iter().any(|e| e.contains(&p)) {
            let with_p: Vec<&Vec<usize>> = edges.iter().filter(|e| e.contains(&p)).collect();
            chosen.push(with_p[rng.gen_range(0..with_p.len())].clone());
        }
    }
    AccessStructure::build(n, k, chosen).expect("covering family is valid")
}

pub fn subsets_of(n: usize) -> impl Iterator<Item = ParticipantSet> {
    (0u64..(1u64 << n)).map(ParticipantSet::from_bits)
}

pub fn naive_qualified(g: &AccessStructure, q: ParticipantSet) -> bool {
    g.basis().iter().any(|b| b.bits() & !q.bits() == 0)
}

pub fn naive_minimal(g: &AccessStructure, q: ParticipantSet) -> bool {
    g.basis().contains(&q)
}

pub fn naive_count(g: &AccessStructure, q: ParticipantSet) -> usize {
    g.basis().iter().filter(|b| b.bits() & !q.bits() == 0).count()
}

/// Checks every definitional clause of an independent sequence and its
/// bound, straight from the definition.
pub fn naive_clauses(g: &AccessStructure, c: &IndependentSequenceCertificate) -> bool {
    let m = c.chain.len();
    let all = g.participants();
    let inside = |s: &ParticipantSet| s.bits() & !all.bits() == 0;
    if m == 0 || c.witnesses.len() != m {
        return false;
    }
    if !c.chain.iter().chain(&c.witnesses).all(inside) || !inside(&c.a) {
        return false;
    }
    if c.chain[0].bits() == 0 {
        return false;
    }
    for i in 1..m {
        let (lo, hi) = (c.chain[i - 1].bits(), c.chain[i].bits());
        if lo & !hi != 0 || lo == hi {
            return false;
        }
    }
    if naive_qualified(g, c.chain[m - 1]) {
        return false;
    }
    for i in 0..m {
        let prev = if i == 0 { ParticipantSet::EMPTY } else { c.chain[i - 1] };
        if !naive_qualified(g, c.chain[i].union(c.witnesses[i])) {
            return false;
        }
        if naive_qualified(g, prev.union(c.witnesses[i])) {
            return false;
        }
    }
    let union = c.witnesses.iter().fold(0u64, |acc, x| acc | x.bits());
    if union & !c.a.bits() != 0 {
        return false;
    }
    let q = naive_qualified(g, c.a);
    if q != c.a_qualified {
        return false;
    }
    let size = c.a.len() as u64;
    let denom = if q { m as u64 + 1 } else { m as u64 };
    c.bound == homsec::Rational::new(size, denom) && c.bound == formula_bound(c.a.len(), m, q)
}

// ---------------------------------------------------------------------------
// property checks; each returns a description of the first failure

pub fn check_monotone(g: &AccessStructure) -> Result<(), String> {
    for q in subsets_of(g.n()) {
        let qualified = g.is_qualified(q);
        if qualified != naive_qualified(g, q) {
            return Err(format!("{g:?}: is_qualified({q}) disagrees with the basis"));
        }
        if qualified {
            for p in 1..=g.n() {
                if !g.is_qualified(q.with(p)) {
                    return Err(format!("{g:?}: {q} qualified but {} is not", q.with(p)));
                }
            }
        }
        if g.is_minimal(q) != naive_minimal(g, q) {
            return Err(format!("{g:?}: is_minimal({q}) disagrees with the basis"));
        }
    }
    Ok(())
}

pub fn check_omega(g: &AccessStructure) -> Result<(), String> {
    let (n, k) = (g.n(), g.k());
    for q in subsets_of(n) {
        let w = g.count_w(q);
        if w != naive_count(g, q) {
            return Err(format!("{g:?}: w({q}) = {w}, expected {}", naive_count(g, q)));
        }
        if (w > 0) != g.is_qualified(q) {
            return Err(format!("{g:?}: w({q}) = {w} contradicts qualification"));
        }
    }
    for m in k..=n {
        let expected: std::collections::BTreeSet<usize> = subsets_of(n)
            .filter(|q| q.len() == m)
            .map(|q| naive_count(g, q))
            .collect();
        let got = g.omega(m).map_err(|e| format!("{g:?}: omega({m}) failed: {e}"))?;
        if got != expected {
            return Err(format!("{g:?}: omega({m}) = {got:?}, expected {expected:?}"));
        }
    }
    if g.omega(k).unwrap().iter().any(|&w| w > 1) {
        return Err(format!("{g:?}: a k-set contains two minimal sets"));
    }
    if n > k {
        let report = g.check_hypotheses().unwrap();
        let omega = g.omega(k + 1).unwrap();
        if report.omega != omega
            || report.excludes_one == omega.contains(&1)
            || report.excludes_k == omega.contains(&k)
            || report.contains_k_plus_one != omega.contains(&(k + 1))
        {
            return Err(format!("{g:?}: hypothesis report inconsistent with omega"));
        }
    }
    Ok(())
}

/// Literal equivalence: never together in a minimal set, and interchangeable
/// over every subset of the other participants.
pub fn naive_equivalent(g: &AccessStructure, a: usize, b: usize) -> bool {
    if a == b {
        return true;
    }
    let pair = set(&[a, b]);
    if g.basis().iter().any(|m| pair.bits() & !m.bits() == 0) {
        return false;
    }
    let rest = g.participants().bits() & !pair.bits();
    subsets_of(g.n())
        .filter(|s| s.bits() & !rest == 0)
        .all(|s| naive_minimal(g, s.with(a)) == naive_minimal(g, s.with(b)))
}

pub fn check_equivalence(g: &AccessStructure) -> Result<(), String> {
    for a in 1..=g.n() {
        for b in 1..=g.n() {
            let fast = is_equivalent(g, a, b).map_err(|e| e.to_string())?;
            if fast != naive_equivalent(g, a, b) {
                return Err(format!("{g:?}: equivalence of {a} and {b} disagrees"));
            }
        }
    }
    Ok(())
}

pub fn check_reduction(g: &AccessStructure) -> Result<(), String> {
    let r = reduce(g).map_err(|e| format!("{g:?}: {e}"))?;
    // classes partition the participants into naive equivalence classes
    let union = r.classes.iter().fold(0u64, |acc, c| {
        if acc & c.bits() != 0 {
            u64::MAX
        } else {
            acc | c.bits()
        }
    });
    if union != g.participants().bits() {
        return Err(format!("{g:?}: classes do not partition the participants"));
    }
    for (j, c) in r.classes.iter().enumerate() {
        let rep = r.representatives[j];
        if c.first() != Some(rep) {
            return Err(format!("{g:?}: representative of {c} is {rep}"));
        }
        for p in c.iter() {
            if r.class_of[p - 1] != j + 1 {
                return Err(format!("{g:?}: class_of({p}) wrong"));
            }
            for q in 1..=g.n() {
                if naive_equivalent(g, p, q) != c.contains(q) {
                    return Err(format!("{g:?}: {p}, {q} misclassified"));
                }
            }
        }
    }
    // quotient minimal sets are exactly the class images of the basis
    let image: std::collections::BTreeSet<ParticipantSet> = g
        .basis()
        .iter()
        .map(|b| b.iter().map(|p| r.class_of[p - 1]).collect())
        .collect();
    let quotient: std::collections::BTreeSet<ParticipantSet> =
        r.quotient.basis().iter().copied().collect();
    if image != quotient {
        return Err(format!("{g:?}: quotient basis is not the image of the basis"));
    }
    // idempotence
    let again = reduce(&r.quotient).map_err(|e| format!("{g:?}: second pass: {e}"))?;
    if !r.fixpoint || !again.is_trivial() || again.quotient != r.quotient {
        return Err(format!("{g:?}: reduction is not idempotent"));
    }
    Ok(())
}

fn nonzero_vector<R: Rng>(rng: &mut R, p: u64, dim: usize) -> Vec<u64> {
    loop {
        let v: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// The structure an assignment realizes, when it is k-homogeneous and
/// covers every participant.
pub fn realized_structure(
    n: usize,
    k: usize,
    field: &PrimeField,
    asg: &VectorAssignment,
) -> Option<AccessStructure> {
    let spans = |s: ParticipantSet| {
        let rows: Vec<&[u64]> = s.iter().map(|p| asg.vector(p)).collect();
        field.in_span(&rows, asg.dealer())
    };
    let qualified: Vec<ParticipantSet> = subsets_of(n).filter(|&s| spans(s)).collect();
    let minimal: Vec<ParticipantSet> = qualified
        .iter()
        .copied()
        .filter(|&s| s.iter().all(|p| !spans(s.without(p))))
        .collect();
    if minimal.is_empty() || minimal.iter().any(|m| m.len() != k) {
        return None;
    }
    AccessStructure::from_sets(n, k, minimal).ok()
}

/// Random assignments: the size-(k-1)/k shortcut must agree with the check
/// over all subsets, both against `g` and against whatever structure the
/// assignment realizes.
pub fn check_vector_space_shortcut<R: Rng>(
    rng: &mut R,
    g: &AccessStructure,
    trials: usize,
) -> Result<(), String> {
    let (n, k) = (g.n(), g.k());
    for p in [2u64, 3, 5, 7] {
        let field = PrimeField::new(p).unwrap();
        for _ in 0..trials {
            let mut dealer = vec![0u64; k];
            dealer[0] = 1;
            let vectors = (0..n).map(|_| nonzero_vector(rng, p, k)).collect();
            let asg = VectorAssignment::new(&field, k, dealer, vectors).unwrap();
            let fast = is_vector_space_structure(g, &asg, &field).unwrap();
            let full = is_vector_space_structure_exhaustive(g, &asg, &field).unwrap();
            if fast != full {
                return Err(format!("{g:?} over GF({p}): shortcut {fast}, full {full}, {asg:?}"));
            }
            if let Some(h) = realized_structure(n, k, &field, &asg) {
                let fast = is_vector_space_structure(&h, &asg, &field).unwrap();
                let full = is_vector_space_structure_exhaustive(&h, &asg, &field).unwrap();
                if !(fast && full) {
                    return Err(format!("{h:?} over GF({p}): realized structure rejected"));
                }
            }
        }
    }
    Ok(())
}

/// Rank, span membership and solved combinations against enumeration of
/// every coefficient vector.
pub fn check_linear_algebra(field: &PrimeField, rows: &[Vec<u64>], target: &[u64]) -> Result<(), String> {
    let p = field.modulus();
    let combos = |r: usize| -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..r {
            out = out
                .into_iter()
                .flat_map(|c| (0..p).map(move |x| {
                    let mut c = c.clone();
                    c.push(x);
                    c
                }))
                .collect();
        }
        out
    };
    let combine = |idx: &[usize], c: &[u64]| -> Vec<u64> {
        let dim = target.len();
        (0..dim)
            .map(|j| {
                idx.iter()
                    .zip(c)
                    .fold(0u64, |acc, (&i, &x)| (acc + x * rows[i][j]) % p)
            })
            .collect()
    };
    let independent = |idx: &[usize]| {
        combos(idx.len())
            .iter()
            .filter(|c| c.iter().any(|&x| x != 0))
            .all(|c| combine(idx, c).iter().any(|&x| x != 0))
    };
    let mut brute_rank = 0;
    for mask in 0u32..(1 << rows.len()) {
        let idx: Vec<usize> = (0..rows.len()).filter(|i| mask >> i & 1 == 1).collect();
        if idx.len() > brute_rank && independent(&idx) {
            brute_rank = idx.len();
        }
    }
    if field.rank(rows) != brute_rank {
        return Err(format!("rank of {rows:?} over GF({p}): got {}, expected {brute_rank}", field.rank(rows)));
    }
    let all: Vec<usize> = (0..rows.len()).collect();
    let reachable = combos(rows.len()).iter().any(|c| combine(&all, c) == target);
    let refs: Vec<&[u64]> = rows.iter().map(|r| r.as_slice()).collect();
    if field.in_span(&refs, target) != reachable {
        return Err(format!("in_span({rows:?}, {target:?}) over GF({p}) wrong"));
    }
    match field.solve_combination(&refs, target) {
        Some(c) if combine(&all, &c) != target => {
            return Err(format!("solve_combination returned a wrong combination for {rows:?}"))
        }
        Some(_) if !reachable => return Err("solution for an unreachable target".into()),
        None if reachable => return Err("no solution for a reachable target".into()),
        _ => {}
    }
    Ok(())
}

pub fn random_matrix<R: Rng>(rng: &mut R, p: u64, rows: usize, dim: usize) -> Vec<Vec<u64>> {
    (0..rows)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..p)).collect())
        .collect()
}
