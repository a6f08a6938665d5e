//! Dense univariate polynomials over ℚ, lowest degree first.

use num_traits::{One, Zero};

use crate::exactmath::Rat;

pub(crate) type Poly = Vec<Rat>;

pub(crate) fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn add(a: &[Rat], b: &[Rat]) -> Poly {
    let n = a.len().max(b.len());
    let z = Rat::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

pub(crate) fn scale(a: &[Rat], c: &Rat) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

pub(crate) fn sub(a: &[Rat], b: &[Rat]) -> Poly {
    add(a, &scale(b, &-Rat::one()))
}

pub(crate) fn mul(a: &[Rat], b: &[Rat]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[Rat], b: &[Rat]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    let mut q = Vec::new();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        if q.len() <= shift {
            q.resize(shift + 1, Rat::zero());
        }
        q[shift] = c.clone();
        for (i, y) in b.iter().enumerate().take(db + 1) {
            r[shift + i] -= &c * y;
        }
        r = trim(r);
    }
    (trim(q), r)
}

/// `(g, s)` with `s·a ≡ g (mod b)` and `g = gcd(a, b)`.
pub(crate) fn ext_gcd(a: &[Rat], b: &[Rat]) -> (Poly, Poly) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1): (Poly, Poly) = (vec![Rat::one()], Vec::new());
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}
