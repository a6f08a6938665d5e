//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision; no routine falls back to floating
//! point. Matrices are dense and small (rank at most 26 for every lattice in
//! use), so the algorithms favour clarity over asymptotics.

mod matrix;
mod smith;
mod solve;

pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use smith::{hermite_normal_form, hermite_saturation, smith_normal_form, SmithForm};
pub use solve::{rational_solve, AffineSolutionSpace};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix does not have full column rank")]
    RankDeficient,
    #[error("rows have different lengths")]
    Ragged,
}

/// Inertia indices of a nondegenerate symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Signature { positive, negative }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }

    /// `n₊ − n₋`.
    pub fn index(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn flipped(&self) -> Self {
        Signature::new(self.negative, self.positive)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.positive == 1
    }

    pub fn is_indefinite(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;
    fn add(self, o: Signature) -> Signature {
        Signature::new(self.positive + o.positive, self.negative + o.negative)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// Signature by symmetric congruence diagonalization over ℚ.
///
/// Uses a 1×1 pivot when some remaining diagonal entry is nonzero, otherwise
/// a 2×2 block `[[0, b], [b, 0]]`, which contributes one positive and one
/// negative square.
pub fn signature(g: &RatMatrix) -> Result<Signature, ExactError> {
    assert!(g.is_symmetric(), "signature needs a symmetric matrix");
    let n = g.rows();
    let mut a = g.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if let Some(p) = (k..n).find(|&i| !a[(i, i)].is_zero()) {
            a.swap_rows(p, k);
            a.swap_cols(p, k);
            let d = a[(k, k)].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &d;
                for j in k..n {
                    let delta = &f * &a[(k, j)];
                    a[(i, j)] = &a[(i, j)] - delta;
                }
                for j in k..n {
                    let delta = &f * &a[(j, k)];
                    a[(j, i)] = &a[(j, i)] - delta;
                }
            }
            k += 1;
            continue;
        }
        // zero diagonal: find an off-diagonal entry for a block pivot
        let Some((i, j)) = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[(i, j)].is_zero())
        else {
            return Err(ExactError::SingularMatrix);
        };
        a.swap_rows(i, k);
        a.swap_cols(i, k);
        let j = if j == k { i } else { j };
        a.swap_rows(j, k + 1);
        a.swap_cols(j, k + 1);
        let b = a[(k, k + 1)].clone();
        for r in k + 2..n {
            let c0 = &a[(r, k + 1)] / &b;
            let c1 = &a[(r, k)] / &b;
            if c0.is_zero() && c1.is_zero() {
                continue;
            }
            for col in k..n {
                let delta = &c0 * &a[(k, col)] + &c1 * &a[(k + 1, col)];
                a[(r, col)] = &a[(r, col)] - delta;
            }
            for row in k..n {
                let delta = &c0 * &a[(row, k)] + &c1 * &a[(row, k + 1)];
                a[(row, r)] = &a[(row, r)] - delta;
            }
        }
        pos += 1;
        neg += 1;
        k += 2;
    }
    Ok(Signature::new(pos, neg))
}

/// Invariant factors `d_1 | d_2 | …` of `⊕ ℤ/f` over the given orders.
///
/// Orders equal to 0 or ±1 contribute nothing.
pub fn merge_invariant_factors(factors: &[Int]) -> Vec<Int> {
    use std::collections::BTreeMap;
    let mut by_prime: BTreeMap<Int, Vec<Int>> = BTreeMap::new();
    for f in factors {
        let f = f.abs();
        for (p, e) in factorize(&f) {
            by_prime.entry(p.clone()).or_default().push(num_traits::pow(p, e));
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![Int::from(1); len];
    for mut powers in by_prime.into_values() {
        powers.sort();
        // largest powers go to the last factors
        let offset = len - powers.len();
        for (i, q) in powers.into_iter().enumerate() {
            out[offset + i] *= q;
        }
    }
    out
}

/// Trial-division factorization; inputs in this crate are small.
pub fn factorize(n: &Int) -> Vec<(Int, usize)> {
    use num_integer::Integer;
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = Int::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > Int::from(1) {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}
