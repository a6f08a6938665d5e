use num_integer::Integer;
use serde::Serialize;

use crate::exactmath::{factorize, is_prime, merge_invariant_factors, Int, Signature};

/// Rank, signature and discriminant group of a lattice, for lattices known
/// only through these invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInvariants {
    rank: usize,
    signature: Signature,
    invariant_factors: Vec<Int>,
}

impl LatticeInvariants {
    /// Factors are re-normalized into a divisibility chain; 1s are dropped.
    pub fn new(rank: usize, signature: Signature, factors: Vec<Int>) -> Self {
        assert_eq!(rank, signature.rank(), "signature must match the rank");
        LatticeInvariants {
            rank,
            signature,
            invariant_factors: merge_invariant_factors(&factors),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn discriminant_order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    pub fn length(&self, q: Option<u64>) -> usize {
        match q {
            None => self.invariant_factors.len(),
            Some(q) => {
                let q = Int::from(q);
                self.invariant_factors
                    .iter()
                    .filter(|d| d.is_multiple_of(&q))
                    .count()
            }
        }
    }

    /// Every invariant factor equals `p` (vacuously true when unimodular).
    pub fn is_p_elementary(&self, p: u64) -> bool {
        let p = Int::from(p);
        self.invariant_factors.iter().all(|d| *d == p)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut factors = self.invariant_factors.clone();
        factors.extend(other.invariant_factors.iter().cloned());
        LatticeInvariants::new(
            self.rank + other.rank,
            self.signature + other.signature,
            factors,
        )
    }

    /// Invariants of `L(n)`; the factors are those of `n·G`.
    pub fn rescale(&self, n: i64) -> Self {
        assert!(n != 0, "cannot rescale by zero");
        let n_big = Int::from(n.unsigned_abs());
        let mut factors: Vec<Int> = self.invariant_factors.iter().map(|d| d * &n_big).collect();
        // unit factors of the original also become n
        factors.extend(std::iter::repeat(n_big).take(self.rank - self.invariant_factors.len()));
        let sig = if n < 0 {
            self.signature.flipped()
        } else {
            self.signature
        };
        LatticeInvariants::new(self.rank, sig, factors)
    }

    /// Primes dividing the discriminant.
    pub fn primes(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for d in &self.invariant_factors {
            for (p, _) in factorize(d) {
                let p: u64 = p.try_into().expect("catalog primes are small");
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Prime powers `p^k` dividing some invariant factor.
    pub fn prime_powers(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for p in self.primes() {
            let mut q = p;
            while self.length(Some(q)) > 0 {
                out.push(q);
                q *= p;
            }
        }
        out
    }

    pub fn elementary_prime(&self) -> Option<u64> {
        let first: u64 = self.invariant_factors.first()?.try_into().ok()?;
        (is_prime(first) && self.is_p_elementary(first)).then_some(first)
    }

    pub fn summary(&self) -> InvariantSummary {
        InvariantSummary {
            rank: self.rank,
            signature: self.signature,
            invariant_factors: self
                .invariant_factors
                .iter()
                .map(super::int_to_json)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantSummary {
    pub rank: usize,
    pub signature: Signature,
    pub invariant_factors: Vec<serde_json::Value>,
}

impl std::fmt::Display for LatticeInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let factors: Vec<String> = self.invariant_factors.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "rank {}, signature {}, discriminant [{}]",
            self.rank,
            self.signature,
            factors.join(", ")
        )
    }
}
