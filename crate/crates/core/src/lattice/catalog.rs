//! Named lattices.
//!
//! Root lattices are negative definite; positive variants come from
//! `rescale(-1)`.

use std::sync::OnceLock;

use num_traits::One;

use crate::exactmath::{Int, IntMatrix, Rat, Signature};

use super::{exists_two_elementary, Lattice, LatticeError, LatticeInvariants};

/// A lattice with a Gram matrix, or one known only through invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeData {
    Gram(Lattice),
    Invariants(LatticeInvariants),
}

impl LatticeData {
    pub fn invariants(&self) -> LatticeInvariants {
        match self {
            LatticeData::Gram(l) => l.invariants(),
            LatticeData::Invariants(i) => i.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            LatticeData::Gram(l) => l.rank(),
            LatticeData::Invariants(i) => i.rank(),
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            LatticeData::Gram(l) => l.signature(),
            LatticeData::Invariants(i) => i.signature(),
        }
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        match self {
            LatticeData::Gram(l) => Some(l),
            LatticeData::Invariants(_) => None,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        match (self, other) {
            (LatticeData::Gram(a), LatticeData::Gram(b)) => LatticeData::Gram(a.direct_sum(b)),
            _ => LatticeData::Invariants(self.invariants().direct_sum(&other.invariants())),
        }
    }

    pub fn rescale(&self, n: i64) -> Result<Self, LatticeError> {
        match self {
            LatticeData::Gram(l) => Ok(LatticeData::Gram(l.rescale(n)?)),
            LatticeData::Invariants(i) => {
                if n == 0 {
                    return Err(LatticeError::ZeroScale);
                }
                Ok(LatticeData::Invariants(i.rescale(n)))
            }
        }
    }
}

fn from_edges(n: usize, edges: &[(usize, usize)]) -> Lattice {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = Int::from(-2);
    }
    for &(a, b) in edges {
        g[(a, b)] = Int::one();
        g[(b, a)] = Int::one();
    }
    Lattice::new(g).expect("Dynkin Gram matrices are nondegenerate")
}

/// `U(n)` with Gram `[[0, n], [n, 0]]`.
pub fn hyperbolic(n: i64) -> Result<Lattice, LatticeError> {
    if n == 0 {
        return Err(LatticeError::ZeroScale);
    }
    Lattice::from_i64(&[&[0, n], &[n, 0]])
}

pub fn a(n: usize) -> Result<Lattice, LatticeError> {
    if n == 0 {
        return Err(LatticeError::InvalidArgument("A_n needs n ≥ 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(from_edges(n, &edges))
}

/// `D_n` for `n ≥ 4`: a chain of `n − 1` nodes with one extra node on the
/// second-to-last.
pub fn d(n: usize) -> Result<Lattice, LatticeError> {
    if n < 4 {
        return Err(LatticeError::InvalidArgument("D_n needs n ≥ 4".into()));
    }
    let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
    edges.push((n - 3, n - 1));
    Ok(from_edges(n, &edges))
}

/// `E_6`, `E_7`, `E_8`: a chain of `n − 1` nodes with one extra node on the
/// node three steps from the far end.
pub fn e(n: usize) -> Result<Lattice, LatticeError> {
    if !(6..=8).contains(&n) {
        return Err(LatticeError::InvalidArgument("E_n needs 6 ≤ n ≤ 8".into()));
    }
    let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
    edges.push((n - 4, n - 1));
    Ok(from_edges(n, &edges))
}

/// `⟨k⟩` for even nonzero `k`.
pub fn rank_one(k: i64) -> Result<Lattice, LatticeError> {
    if k == 0 {
        return Err(LatticeError::Singular);
    }
    Lattice::from_i64(&[&[k]])
}

pub fn h5() -> Lattice {
    Lattice::from_i64(&[&[2, 1], &[1, -2]]).expect("valid Gram")
}

pub fn k7() -> Lattice {
    Lattice::from_i64(&[&[-4, 1], &[1, -2]]).expect("valid Gram")
}

/// The Nikulin lattice: `⟨−2⟩⁸` extended by half the sum of its basis.
pub fn nikulin() -> Lattice {
    let base = (1..8).fold(rank_one(-2).expect("valid"), |acc, _| {
        acc.direct_sum(&rank_one(-2).expect("valid"))
    });
    let half = Rat::new(Int::one(), Int::from(2));
    base.overlattice(&[vec![half; 8]])
        .expect("the all-ones glue vector is isotropic")
        .lattice
}

/// Blocks for the 2-elementary search, in tie-break order.
const TWO_ELEMENTARY_BLOCKS: [&str; 11] = [
    "U", "U(2)", "<2>", "E8", "E8(2)", "N", "D4", "E7", "D6", "D8", "<-2>",
];

struct Block {
    name: &'static str,
    lattice: Lattice,
    signature: Signature,
    a: usize,
    delta: u8,
}

fn block_lattice(name: &str) -> Lattice {
    let l = match name {
        "U" => hyperbolic(1),
        "U(2)" => hyperbolic(2),
        "<2>" => rank_one(2),
        "<-2>" => rank_one(-2),
        "E8" => e(8),
        "E8(2)" => e(8).and_then(|l| l.rescale(2)),
        "E7" => e(7),
        "N" => Ok(nikulin()),
        "D4" => d(4),
        "D6" => d(6),
        "D8" => d(8),
        _ => unreachable!("not a search block"),
    };
    l.expect("catalog blocks are valid")
}

fn blocks() -> &'static [Block] {
    static BLOCKS: OnceLock<Vec<Block>> = OnceLock::new();
    BLOCKS.get_or_init(|| {
        TWO_ELEMENTARY_BLOCKS
            .iter()
            .map(|&name| {
                let lattice = block_lattice(name);
                let inv = lattice.two_elementary_invariants().expect("blocks are 2-elementary");
                Block {
                    name,
                    signature: lattice.signature(),
                    a: inv.a,
                    delta: inv.delta.expect("p = 2"),
                    lattice,
                }
            })
            .collect()
    })
}

/// A 2-elementary lattice with the given signature, length and parity,
/// built as a sum of as few catalog blocks as possible.
///
/// Returns the expression and the lattice; the invariants of the result are
/// recomputed before returning.
pub fn two_elementary(
    signature: Signature,
    a: usize,
    delta: u8,
) -> Result<(String, Lattice), LatticeError> {
    let unrealizable = || {
        LatticeError::UnrealizableInvariants(format!(
            "signature {signature}, a={a}, δ={delta}"
        ))
    };
    if !exists_two_elementary(signature, a, delta) {
        return Err(unrealizable());
    }
    let blocks = blocks();
    let mut chosen = Vec::new();
    for depth in 1..=signature.rank() {
        if search(blocks, signature, a, delta, depth, 0, &mut chosen) {
            let names: Vec<&str> = chosen.iter().map(|&i| blocks[i].name).collect();
            let lattice = chosen
                .iter()
                .skip(1)
                .fold(blocks[chosen[0]].lattice.clone(), |acc, &i| {
                    acc.direct_sum(&blocks[i].lattice)
                });
            let inv = lattice.two_elementary_invariants()?;
            assert!(
                inv.signature == signature && inv.a == a && inv.delta == Some(delta),
                "block invariants are additive"
            );
            let expr = names.join(" + ");
            return Ok((expr.clone(), lattice.with_name(expr)));
        }
    }
    Err(unrealizable())
}

fn search(
    blocks: &[Block],
    target: Signature,
    a: usize,
    delta: u8,
    depth: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    let (mut sig, mut len, mut d) = (Signature::new(0, 0), 0, 0);
    for &i in chosen.iter() {
        sig = sig + blocks[i].signature;
        len += blocks[i].a;
        d |= blocks[i].delta;
    }
    if sig.positive > target.positive || sig.negative > target.negative || len > a {
        return false;
    }
    if chosen.len() == depth {
        return sig == target && len == a && d == delta;
    }
    for i in start..blocks.len() {
        chosen.push(i);
        if search(blocks, target, a, delta, depth, i, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// `S_(r,a,δ)`: the hyperbolic 2-elementary lattice of rank `r`.
pub fn s_lattice(r: usize, a: usize, delta: u8) -> Result<(String, Lattice), LatticeError> {
    if r == 0 {
        return Err(LatticeError::Empty);
    }
    two_elementary(Signature::new(1, r - 1), a, delta)
}

/// Orthogonal complement of the coinvariant lattice of a cyclic symplectic
/// group of order `m` inside the K3 lattice.
pub fn omega_perp(m: u64) -> Result<(Option<&'static str>, LatticeData), LatticeError> {
    let expr = match m {
        2 => "U + U + U + E8(2)",
        3 => "U + U(3) + U(3) + A2 + A2",
        5 => "U + U(5) + U(5)",
        4 => {
            let factors = [2, 2, 4, 4, 4, 4].map(Int::from).to_vec();
            return Ok((
                None,
                LatticeData::Invariants(LatticeInvariants::new(8, Signature::new(3, 5), factors)),
            ));
        }
        _ => return Err(LatticeError::UnknownName(format!("OmegaPerp({m})"))),
    };
    let l = match m {
        2 => hyperbolic(1)?
            .direct_sum(&hyperbolic(1)?)
            .direct_sum(&hyperbolic(1)?)
            .direct_sum(&e(8)?.rescale(2)?),
        3 => hyperbolic(1)?
            .direct_sum(&hyperbolic(3)?)
            .direct_sum(&hyperbolic(3)?)
            .direct_sum(&a(2)?)
            .direct_sum(&a(2)?),
        _ => hyperbolic(1)?
            .direct_sum(&hyperbolic(5)?)
            .direct_sum(&hyperbolic(5)?),
    };
    Ok((Some(expr), LatticeData::Gram(l.with_name(expr))))
}

/// The coinvariant lattice of a cyclic symplectic group of order `m`.
///
/// Only order 2 has a Gram matrix here; the others are recorded by rank,
/// signature and discriminant group, which is all the obstruction tests use.
pub fn omega(m: u64) -> Result<LatticeData, LatticeError> {
    let inv = |rank: usize, factors: &[i64]| {
        LatticeData::Invariants(LatticeInvariants::new(
            rank,
            Signature::new(0, rank),
            factors.iter().map(|&f| Int::from(f)).collect(),
        ))
    };
    match m {
        2 => Ok(LatticeData::Gram(e(8)?.rescale(2)?.with_name("E8(2)"))),
        3 => Ok(inv(12, &[3; 6])),
        4 => Ok(inv(14, &[2, 2, 4, 4, 4, 4])),
        5 => Ok(inv(16, &[5; 4])),
        _ => Err(LatticeError::UnknownName(format!("Omega({m})"))),
    }
}
