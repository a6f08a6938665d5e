use serde::{Deserialize, Serialize};

use crate::exactmath::{is_prime, Signature};

use super::LatticeError;

/// `(r, a, δ)` together with the signature; `δ` only for `p = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PElementaryInvariants {
    pub p: u64,
    pub r: usize,
    pub a: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<u8>,
    pub signature: Signature,
}

impl std::fmt::Display for PElementaryInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.delta {
            Some(d) => write!(f, "(r={}, a={}, δ={d})", self.r, self.a),
            None => write!(f, "(p={}, r={}, a={})", self.p, self.r, self.a),
        }
    }
}

/// Existence of an even hyperbolic `p`-elementary lattice of rank `r` with
/// discriminant group `(ℤ/p)^a`, for an odd prime `p`.
pub fn exists_hyperbolic_p_elementary(p: u64, r: usize, a: usize) -> Result<bool, LatticeError> {
    if p == 2 || !is_prime(p) {
        return Err(LatticeError::EvenPrime(p));
    }
    if a > r || r % 2 != 0 {
        return Ok(false);
    }
    if a % 2 == 0 && r % 4 != 2 {
        return Ok(false);
    }
    if a % 2 == 1 {
        let sign_is_plus = (r / 2 - 1) % 2 == 0;
        let expected = if sign_is_plus { 1 } else { 3 };
        if p % 4 != expected {
            return Ok(false);
        }
    }
    if r % 8 != 2 && !(r > a && a > 0) {
        return Ok(false);
    }
    Ok(true)
}

/// Existence of an even 2-elementary lattice with the given signature,
/// length `a` and parity `δ`.
///
/// These are the classical existence conditions for 2-elementary forms;
/// they hold for every signature, definite or not.
pub fn exists_two_elementary(signature: Signature, a: usize, delta: u8) -> bool {
    let r = signature.rank();
    let sig = signature.index().rem_euclid(8);
    if a > r || (r - a) % 2 != 0 || delta > 1 {
        return false;
    }
    if delta == 0 && sig % 4 != 0 {
        return false;
    }
    if a == 0 && (delta != 0 || sig != 0) {
        return false;
    }
    if a == 1 && sig != 1 && sig != 7 {
        return false;
    }
    if a == 2 && sig == 4 && delta != 0 {
        return false;
    }
    if delta == 0 && a == r && sig != 0 {
        return false;
    }
    true
}
