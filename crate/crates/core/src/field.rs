//! Arithmetic in GF(p) and Gaussian elimination over it.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    TooLarge(u64),
}

/// The prime field GF(p). Elements are `u64` values reduced into `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    (n + 1..).find(|&c| is_prime(c)).expect("primes are unbounded")
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 32 {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Rank of the matrix whose rows are `rows`.
    pub fn rank(&self, rows: &[Vec<u64>]) -> usize {
        let mut m: Vec<Vec<u64>> = rows.to_vec();
        self.row_reduce(&mut m)
    }

    /// Brings `m` to row echelon form in place and returns its rank.
    fn row_reduce(&self, m: &mut [Vec<u64>]) -> usize {
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = self.inv(m[rank][col]);
            for x in m[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for r in 0..m.len() {
                if r != rank && m[r][col] != 0 {
                    let factor = m[r][col];
                    let pivot_row = m[rank].clone();
                    for (x, &y) in m[r].iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(factor, y));
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// Finds coefficients `λ` with `Σ λ_i · vectors[i] = target`, or `None`
    /// when `target` is outside their span. Free coefficients are set to zero.
    pub fn solve_combination(&self, vectors: &[&[u64]], target: &[u64]) -> Option<Vec<u64>> {
        let dim = target.len();
        let count = vectors.len();
        // augmented system: one row per coordinate, one column per vector
        let mut m: Vec<Vec<u64>> = (0..dim)
            .map(|r| {
                let mut row: Vec<u64> = vectors.iter().map(|v| v[r]).collect();
                row.push(target[r]);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..count {
            let Some(pivot) = (rank..dim).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = self.inv(m[rank][col]);
            for x in m[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for r in 0..dim {
                if r != rank && m[r][col] != 0 {
                    let factor = m[r][col];
                    let pivot_row = m[rank].clone();
                    for (x, &y) in m[r].iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(factor, y));
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if m[rank..].iter().any(|row| row[count] != 0) {
            return None;
        }
        let mut lambda = vec![0u64; count];
        for (r, &col) in pivots.iter().enumerate() {
            lambda[col] = m[r][count];
        }
        Some(lambda)
    }

    /// Whether `target` lies in the span of `vectors`.
    pub fn in_span(&self, vectors: &[&[u64]], target: &[u64]) -> bool {
        self.solve_combination(vectors, target).is_some()
    }
}
