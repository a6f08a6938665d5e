use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactmath::{Int, Rat};

use super::poly::{self, Poly};
use super::LefschetzError;

/// `Φ_m` with integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<Int> {
    assert!(m >= 1, "cyclotomic polynomials start at m = 1");
    // x^m − 1 divided by Φ_d for every proper divisor d
    let mut num: Poly = vec![Rat::zero(); m as usize + 1];
    num[0] = -Rat::one();
    num[m as usize] = Rat::one();
    for d in (1..m).filter(|d| m % d == 0) {
        let (q, r) = poly::divrem(&num, &modulus(d));
        debug_assert!(r.is_empty());
        num = q;
    }
    num.into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// An element of `ℚ(ζ_m) = ℚ[x]/Φ_m` in the power basis `1, ζ, …, ζ^{φ(m)−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    m: u64,
    coeffs: Vec<Rat>,
}

fn modulus(m: u64) -> Poly {
    static CACHE: OnceLock<Mutex<HashMap<u64, Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache lock").get(&m) {
        return p.clone();
    }
    let p: Poly = cyclotomic_polynomial(m)
        .into_iter()
        .map(Rat::from_integer)
        .collect();
    cache.lock().expect("cache lock").insert(m, p.clone());
    p
}

impl Cyclotomic {
    /// Reduces an arbitrary polynomial in `ζ`.
    pub fn from_poly(m: u64, p: &[Rat]) -> Self {
        let phi = modulus(m);
        let dim = phi.len() - 1;
        let (_, r) = poly::divrem(p, &phi);
        let mut coeffs = r;
        coeffs.resize(dim, Rat::zero());
        Cyclotomic { m, coeffs }
    }

    pub fn from_int(m: u64, c: i64) -> Self {
        Cyclotomic::from_poly(m, &[Rat::from_integer(Int::from(c))])
    }

    pub fn zero(m: u64) -> Self {
        Cyclotomic::from_int(m, 0)
    }

    pub fn one(m: u64) -> Self {
        Cyclotomic::from_int(m, 1)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut p = vec![Rat::zero(); e + 1];
        p[e] = Rat::one();
        Cyclotomic::from_poly(m, &p)
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// Coordinates in the power basis; length `φ(m)`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), LefschetzError> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(LefschetzError::OrderMismatch(self.m, other.m))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LefschetzError> {
        self.check(other)?;
        Ok(Cyclotomic {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LefschetzError> {
        self.check(other)?;
        Ok(Cyclotomic::from_poly(
            self.m,
            &poly::mul(&self.coeffs, &other.coeffs),
        ))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Inverse via the extended Euclidean algorithm against `Φ_m`.
    pub fn inv(&self) -> Result<Self, LefschetzError> {
        if self.is_zero() {
            return Err(LefschetzError::DivisionByZero);
        }
        let (g, s) = poly::ext_gcd(&self.coeffs, &modulus(self.m));
        // Φ_m is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(poly::degree(&g), Some(0));
        let c = Rat::one() / &g[0];
        Ok(Cyclotomic::from_poly(self.m, &poly::scale(&s, &c)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, LefschetzError> {
        self.try_mul(&other.inv()?)
    }

    /// Numerical value at `e^{2πi/m}` as `(re, im)`; for sanity checks only.
    pub fn approximate(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let theta = 2.0 * std::f64::consts::PI / self.m as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let a = theta * k as f64;
            (re + c * a.cos(), im + c * a.sin())
        })
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_add(rhs).expect("same order")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_mul(rhs).expect("same order")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
