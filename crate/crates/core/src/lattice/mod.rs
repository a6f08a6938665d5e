//! Even lattices, their discriminant forms and p-elementary invariants.

mod discriminant;
mod elementary;
mod invariants;

pub mod catalog;

pub use discriminant::{
    reduce_mod, DiscriminantForm, DiscriminantGroup, Element, FormSummary, ENUMERATION_LIMIT,
};
pub use elementary::{exists_hyperbolic_p_elementary, exists_two_elementary, PElementaryInvariants};
pub use invariants::{InvariantSummary, LatticeInvariants};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{self, hermite_normal_form, Int, IntMatrix, Rat, RatMatrix, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice must have rank at least 1")]
    Empty,
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("Gram matrix is singular")]
    Singular,
    #[error("lattice is not even: diagonal entry {0} is odd")]
    Odd(String),
    #[error("cannot rescale by zero")]
    ZeroScale,
    #[error("lattice is not 2-elementary")]
    Not2Elementary,
    #[error("lattice is not {0}-elementary")]
    NotPElementary(u64),
    #[error("{0} is not an odd prime")]
    EvenPrime(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("discriminant group of order {0} is too large to enumerate")]
    TooLarge(String),
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("no catalog lattice with invariants {0}")]
    UnrealizableInvariants(String),
    #[error("`{0}` has known invariants but no Gram matrix")]
    NoGram(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// An even nondegenerate lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    name: Option<String>,
    det: Int,
    signature: Signature,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if gram.rows() == 0 {
            return Err(LatticeError::Empty);
        }
        if gram.rows() != gram.cols() || !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if let Some(i) = (0..gram.rows()).find(|&i| gram[(i, i)].is_odd()) {
            return Err(LatticeError::Odd(gram[(i, i)].to_string()));
        }
        let det = gram.det();
        if det.is_zero() {
            return Err(LatticeError::Singular);
        }
        let signature =
            exactmath::signature(&gram.to_rational()).map_err(|_| LatticeError::Singular)?;
        Ok(Lattice {
            gram,
            name: None,
            det,
            signature,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Lattice::new(IntMatrix::from_i64(rows))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> &Int {
        &self.det
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: self.gram.block_diag(&other.gram),
            name: match (&self.name, &other.name) {
                (Some(a), Some(b)) => Some(format!("{a} + {b}")),
                _ => None,
            },
            det: &self.det * &other.det,
            signature: self.signature + other.signature,
        }
    }

    /// `L(n)`: the Gram matrix multiplied by `n`.
    pub fn rescale(&self, n: i64) -> Result<Lattice, LatticeError> {
        if n == 0 {
            return Err(LatticeError::ZeroScale);
        }
        let n_big = Int::from(n);
        let signature = if n < 0 {
            self.signature.flipped()
        } else {
            self.signature
        };
        Ok(Lattice {
            gram: self.gram.scale(&n_big),
            name: self.name.as_ref().map(|s| format!("({s})({n})")),
            det: &self.det * num_traits::pow(n_big, self.rank()),
            signature,
        })
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        DiscriminantGroup::of_gram(&self.gram)
    }

    pub fn discriminant_form(&self) -> DiscriminantForm {
        DiscriminantForm::of_gram(&self.gram)
    }

    /// Invariant factors of the discriminant group (each > 1).
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.discriminant_group().invariant_factors().to_vec()
    }

    /// Length of the discriminant group, or with `q = p^k` the number of
    /// invariant factors divisible by `q`.
    pub fn length(&self, q: Option<u64>) -> usize {
        self.invariants().length(q)
    }

    pub fn is_p_elementary(&self, p: u64) -> bool {
        self.invariants().is_p_elementary(p)
    }

    /// `δ = 0` iff the discriminant form takes integral values.
    pub fn delta_invariant(&self) -> Result<u8, LatticeError> {
        if !self.is_p_elementary(2) {
            return Err(LatticeError::Not2Elementary);
        }
        let form = self.discriminant_form();
        let integral = if form.group().order() <= Int::from(1u64 << 12) {
            form.is_integral_valued()?
        } else {
            // a quadratic form on an elementary 2-group is determined by its
            // values on generators and pairwise sums
            let n = form.q_values().len();
            form.q_values().iter().all(|q| q.is_integer())
                && (0..n).all(|i| {
                    (i + 1..n).all(|j| {
                        let mut e = vec![0i64; n];
                        e[i] = 1;
                        e[j] = 1;
                        form.q(&e).is_integer()
                    })
                })
        };
        Ok(if integral { 0 } else { 1 })
    }

    pub fn two_elementary_invariants(&self) -> Result<PElementaryInvariants, LatticeError> {
        let delta = self.delta_invariant()?;
        Ok(PElementaryInvariants {
            p: 2,
            r: self.rank(),
            a: self.length(None),
            delta: Some(delta),
            signature: self.signature,
        })
    }

    pub fn p_elementary_invariants(&self, p: u64) -> Result<PElementaryInvariants, LatticeError> {
        if p == 2 {
            return self.two_elementary_invariants();
        }
        if !exactmath::is_prime(p) {
            return Err(LatticeError::NotPrime(p));
        }
        if !self.is_p_elementary(p) {
            return Err(LatticeError::NotPElementary(p));
        }
        Ok(PElementaryInvariants {
            p,
            r: self.rank(),
            a: self.length(None),
            delta: None,
            signature: self.signature,
        })
    }

    /// Rank, signature and discriminant group, forgetting the Gram matrix.
    pub fn invariants(&self) -> LatticeInvariants {
        LatticeInvariants::new(self.rank(), self.signature, self.invariant_factors())
    }

    /// The prime `p` with discriminant group `(ℤ/p)^a`, `a ≥ 1`, if any.
    pub fn elementary_prime(&self) -> Option<u64> {
        let factors = self.invariant_factors();
        let first = factors.first()?.to_u64()?;
        (exactmath::is_prime(first) && factors.iter().all(|d| *d == Int::from(first)))
            .then_some(first)
    }

    /// The overlattice spanned by `L` and the given rational vectors (in
    /// coordinates of the basis of `L`).
    ///
    /// Fails with `Odd` if the result is not even and `InvalidArgument` if it
    /// is not integral.
    pub fn overlattice(&self, glue: &[Vec<Rat>]) -> Result<Overlattice, LatticeError> {
        let n = self.rank();
        if glue.iter().any(|v| v.len() != n) {
            return Err(LatticeError::InvalidArgument(
                "glue vector has the wrong length".into(),
            ));
        }
        let denom = glue
            .iter()
            .flatten()
            .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let mut rows: Vec<Vec<Int>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { denom.clone() } else { Int::zero() }).collect())
            .collect();
        for v in glue {
            rows.push(v.iter().map(|x| (x * &denom).to_integer()).collect());
        }
        let gens = IntMatrix::from_rows(rows).expect("rows have equal length");
        let scaled = hermite_normal_form(&gens);
        let basis = scaled
            .to_rational()
            .map(|x| x / Rat::from_integer(denom.clone()));
        let gram_q = basis.mul(&self.gram.to_rational()).mul(&basis.transpose());
        if gram_q.entries().any(|x| !x.is_integer()) {
            return Err(LatticeError::InvalidArgument(
                "glue vectors do not span an integral overlattice".into(),
            ));
        }
        let gram = gram_q.map(|x| x.to_integer());
        let lattice = Lattice::new(gram)?;
        let index = (self.det.clone() / &lattice.det).abs().sqrt();
        Ok(Overlattice {
            lattice,
            basis,
            index,
        })
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            gram: self.gram.to_rows(),
            name: self.name.clone(),
        }
    }

    pub fn from_json(json: &LatticeJson) -> Result<Self, LatticeError> {
        let gram = IntMatrix::from_rows(json.gram.clone()).map_err(|_| LatticeError::NotSymmetric)?;
        let lattice = Lattice::new(gram)?;
        Ok(match &json.name {
            Some(n) => lattice.with_name(n.clone()),
            None => lattice,
        })
    }
}

/// A finite-index overlattice together with its basis in the coordinates of
/// the original lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlattice {
    pub lattice: Lattice,
    /// Rows are basis vectors.
    pub basis: RatMatrix,
    pub index: Int,
}

/// Serialized form `{gram, name}`; integers are JSON numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    #[serde(with = "int_rows")]
    pub gram: Vec<Vec<Int>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
}

mod int_rows {
    use super::Int;
    use serde::ser::SerializeSeq;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(rows: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            let vals: Vec<Value> = r.iter().map(super::int_to_json).collect();
            seq.serialize_element(&vals)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
        let rows: Vec<Vec<Value>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| {
                        let text = match &v {
                            Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                            Value::String(s) => s.clone(),
                            _ => return Err(D::Error::custom(format!("not an integer: {v}"))),
                        };
                        text.parse::<Int>()
                            .map_err(|_| D::Error::custom(format!("not an integer: {v}")))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal
/// strings, so no value ever passes through a float.
pub fn int_to_json(x: &Int) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

#[cfg(test)]
mod tests;
