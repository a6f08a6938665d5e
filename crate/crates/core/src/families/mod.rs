//! Classification of K3 surfaces carrying a symplectic and a non-symplectic
//! automorphism of the same order, and of related extension questions.

mod registry;

pub use registry::{
    registry_lookup, FamilyDescriptor, FixedPointCount, FixtureTable, OmegaRank, Provenance,
    Registry, Sourced, REGISTRY_VERSION,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{euler_phi, Signature};
use crate::lattice::exists_two_elementary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid invariants (r, a, δ) = ({r}, {a}, {delta}): {reason}")]
    InvalidTriple {
        r: usize,
        a: usize,
        delta: u8,
        reason: String,
    },
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: u64 },
    #[error("rank T = {rank_t} is not a positive multiple of φ(m) = {phi}")]
    NotDivisible { rank_t: usize, phi: u64 },
    #[error("prime {0} is not one of 5, 7, 11, 13, 17, 19")]
    UnsupportedPrime(u64),
    #[error("no recorded symplectic fixed-point count for order {0}")]
    Unsupported(u64),
    #[error("registry: {0}")]
    Registry(String),
}

/// `(r, a, δ)` of the invariant lattice of a non-symplectic involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvolutionInvariants {
    pub r: usize,
    pub a: usize,
    pub delta: u8,
}

impl InvolutionInvariants {
    /// Checks `1 ≤ r ≤ 20`, `a ≤ min(r, 22 − r)` and `δ ∈ {0, 1}`. Whether
    /// the triple is realized is a separate question ([`Self::is_realizable`]).
    pub fn new(r: usize, a: usize, delta: u8) -> Result<Self, FamilyError> {
        let err = |reason: &str| FamilyError::InvalidTriple {
            r,
            a,
            delta,
            reason: reason.into(),
        };
        if !(1..=20).contains(&r) {
            return Err(err("r must lie in 1..=20"));
        }
        if a > r.min(22 - r) {
            return Err(err("a must not exceed min(r, 22 - r)"));
        }
        if delta > 1 {
            return Err(err("δ must be 0 or 1"));
        }
        Ok(InvolutionInvariants { r, a, delta })
    }

    /// Some even 2-elementary lattice of signature `(1, r − 1)` has these
    /// invariants.
    pub fn is_realizable(&self) -> bool {
        exists_two_elementary(Signature::new(1, self.r - 1), self.a, self.delta)
    }

    /// Every triple accepted by [`Self::new`].
    pub fn grid() -> impl Iterator<Item = InvolutionInvariants> {
        (1..=20usize).flat_map(|r| {
            (0..=r.min(22 - r)).flat_map(move |a| {
                (0..=1u8).map(move |delta| InvolutionInvariants { r, a, delta })
            })
        })
    }
}

impl fmt::Display for InvolutionInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.a, self.delta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedLocusKind {
    Empty,
    TwoElliptic,
    Curves,
}

/// Fixed locus of a non-symplectic involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusP2 {
    pub kind: FixedLocusKind,
    /// Number of fixed curves.
    pub k: usize,
    /// Genus of the one curve that may be non-rational; the other `k − 1`
    /// curves are rational.
    pub g: usize,
}

impl FixedLocusP2 {
    pub fn rational_curves(&self) -> usize {
        match self.kind {
            FixedLocusKind::Curves if self.g == 0 => self.k,
            FixedLocusKind::Curves => self.k - 1,
            _ => 0,
        }
    }
}

impl fmt::Display for FixedLocusP2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FixedLocusKind::Empty => write!(f, "empty"),
            FixedLocusKind::TwoElliptic => write!(f, "two elliptic curves"),
            FixedLocusKind::Curves if self.g == 0 => write!(f, "{} rational curves", self.k),
            FixedLocusKind::Curves if self.k == 1 => write!(f, "a curve of genus {}", self.g),
            FixedLocusKind::Curves => write!(
                f,
                "{} rational curves and a curve of genus {}",
                self.k - 1,
                self.g
            ),
        }
    }
}

/// Fixed locus from `(r, a, δ)`: `(r − a)/2 + 1` curves, one of genus
/// `(22 − r − a)/2`, apart from `(10, 10, 0)` (empty) and `(10, 8, 0)` (two
/// elliptic curves).
pub fn involution_invariants_to_fixed_locus(
    inv: InvolutionInvariants,
) -> Result<FixedLocusP2, FamilyError> {
    if !inv.is_realizable() {
        return Err(FamilyError::InvalidTriple {
            r: inv.r,
            a: inv.a,
            delta: inv.delta,
            reason: "no even hyperbolic 2-elementary lattice has these invariants".into(),
        });
    }
    Ok(match (inv.r, inv.a, inv.delta) {
        (10, 10, 0) => FixedLocusP2 {
            kind: FixedLocusKind::Empty,
            k: 0,
            g: 0,
        },
        (10, 8, 0) => FixedLocusP2 {
            kind: FixedLocusKind::TwoElliptic,
            k: 2,
            g: 1,
        },
        (r, a, _) => FixedLocusP2 {
            kind: FixedLocusKind::Curves,
            k: (r - a) / 2 + 1,
            g: (22 - r - a) / 2,
        },
    })
}

/// `δ = 1`: `a > 16 − r`. `δ = 0`: `a > 16 − r` or `(r, a) = (10, 6)`.
pub fn admits_symplectic_involution(inv: InvolutionInvariants) -> bool {
    let above = inv.a + inv.r > 16;
    above || (inv.delta == 0 && inv.r == 10 && inv.a == 6)
}

/// `n` isolated points and `k` curves fixed by a non-symplectic automorphism
/// of order 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusP3 {
    pub n: usize,
    pub k: usize,
}

impl FixedLocusP3 {
    /// The holomorphic Lefschetz formula gives `n = 3 + Σ (1 − g(C))`; with at
    /// most one non-rational curve this is `g = 3 + k − n`, and the fixed
    /// genus is at most 5. Only points (`k = 0`) forces `n = 3`.
    pub fn is_admissible(&self) -> bool {
        let (n, k) = (self.n as i64, self.k as i64);
        if k == 0 {
            return n == 3;
        }
        let g = 3 + k - n;
        n <= 9 && k <= 6 && (0..=5).contains(&g)
    }

    /// Genus of the non-rational fixed curve, if any.
    pub fn genus(&self) -> Option<usize> {
        (self.k > 0).then(|| 3 + self.k - self.n).filter(|&g| g > 0)
    }
}

pub fn admits_symplectic_order3(fl: FixedLocusP3) -> Result<bool, FamilyError> {
    if !fl.is_admissible() {
        return Err(FamilyError::UnknownFamily(format!(
            "order-3 fixed locus ({}, {})",
            fl.n, fl.k
        )));
    }
    Ok(fl.k + 3 == fl.n && (6..=9).contains(&fl.n))
}

/// Answer to "can a K3 surface carry a symplectic and a non-symplectic
/// automorphism of order `m`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoexistenceVerdict {
    Impossible,
    AtMostCountable,
    /// Not for the generic member of any family; special members may.
    GenericImpossible,
    /// Not for the generic member of the two-dimensional family.
    GenericTwoDimImpossible,
    /// Decided family by family from the invariants.
    CriterionByInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coexistence {
    pub m: u64,
    pub verdict: CoexistenceVerdict,
    /// A registry family whose members do carry both automorphisms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<(u64, String)>,
}

pub fn same_order_coexistence(m: u64) -> Result<Coexistence, FamilyError> {
    use CoexistenceVerdict::*;
    let (verdict, example) = match m {
        2 | 3 => (CriterionByInvariants, None),
        4 => (GenericTwoDimImpossible, Some("rigid")),
        5 => (AtMostCountable, Some("4,0")),
        6 => (GenericImpossible, Some("12,1")),
        7 | 8 => (Impossible, None),
        _ => {
            return Err(FamilyError::OutOfRange {
                what: "order",
                value: m,
            })
        }
    };
    Ok(Coexistence {
        m,
        verdict,
        example: example.map(|k| (m, k.to_string())),
    })
}

/// Complex dimension of the family: `rank T − 2` for involutions,
/// `rank T / φ(m) − 1` otherwise.
pub fn moduli_dimension(rank_t: usize, m: u64) -> Result<usize, FamilyError> {
    if m < 2 {
        return Err(FamilyError::OutOfRange {
            what: "order",
            value: m,
        });
    }
    let phi = euler_phi(m);
    if rank_t == 0 || rank_t as u64 % phi != 0 {
        return Err(FamilyError::NotDivisible { rank_t, phi });
    }
    if m == 2 {
        return rank_t.checked_sub(2).ok_or(FamilyError::OutOfRange {
            what: "rank T",
            value: rank_t as u64,
        });
    }
    Ok(rank_t / phi as usize - 1)
}

/// Possible ranks for a K3 surface with a symplectic and a non-symplectic
/// automorphism of order `m`, smallest `NS` first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub m: u64,
    pub rho: Vec<usize>,
    #[serde(rename = "rankT")]
    pub rank_t: Vec<usize>,
    pub moduli: Vec<usize>,
}

impl TableRow {
    /// Cells as printed: comma lists, `-` when empty, and bounds when every
    /// rank is allowed (`φ(m) = 1`).
    pub fn cells(&self) -> [String; 4] {
        let list = |v: &[usize]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }
        };
        if euler_phi(self.m) == 1 && !self.rho.is_empty() {
            return [
                self.m.to_string(),
                format!(">={}", self.rho[0]),
                format!("<={}", self.rank_t[0]),
                format!("<={}", self.moduli[0]),
            ];
        }
        [
            self.m.to_string(),
            list(&self.rho),
            list(&self.rank_t),
            list(&self.moduli),
        ]
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cells().join(" | "))
    }
}

/// `ρ ≥ rank Ω + 1` because `NS` contains `Ω` and an ample class, and
/// `φ(m)` divides `rank T = 22 − ρ`, which is at least 2.
pub fn tablerank_row_with(registry: &Registry, m: u64) -> Result<TableRow, FamilyError> {
    if !(2..=8).contains(&m) {
        return Err(FamilyError::OutOfRange {
            what: "order",
            value: m,
        });
    }
    let omega = registry
        .omega_rank(m)
        .ok_or_else(|| FamilyError::Registry(format!("no rank recorded for Omega({m})")))?;
    let rho_min = omega.rank + 1;
    let phi = euler_phi(m) as usize;
    let mut row = TableRow {
        m,
        rho: Vec::new(),
        rank_t: Vec::new(),
        moduli: Vec::new(),
    };
    for rank_t in (2..=22usize.saturating_sub(rho_min)).rev() {
        if rank_t % phi != 0 {
            continue;
        }
        row.rho.push(22 - rank_t);
        row.rank_t.push(rank_t);
        row.moduli.push(moduli_dimension(rank_t, m)?);
    }
    Ok(row)
}

pub fn tablerank_row(m: u64) -> Result<TableRow, FamilyError> {
    tablerank_row_with(Registry::builtin(), m)
}

/// Whether a surface with a non-symplectic automorphism of prime order `p`
/// also has one of order `2p`.
pub fn p_to_2p_extension(p: u64, fixes_a_curve: bool) -> Result<bool, FamilyError> {
    match p {
        5 | 13 | 17 | 19 => Ok(true),
        7 | 11 => Ok(fixes_a_curve),
        _ => Err(FamilyError::UnsupportedPrime(p)),
    }
}

/// Number of fixed points of a symplectic automorphism of order `n`.
pub fn symplectic_fixed_points(n: u64) -> Result<usize, FamilyError> {
    Registry::builtin().symplectic_fixed_points(n)
}

#[cfg(test)]
mod tests;
