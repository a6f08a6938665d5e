//! Overlattices from isotropic subgroups, and necessary conditions for
//! primitive embeddings.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{smith_normal_form, Int, IntMatrix, Signature};
use crate::expr::{self, LatticeExpr};
use crate::lattice::catalog::LatticeData;
use crate::lattice::{
    exists_hyperbolic_p_elementary, exists_two_elementary, DiscriminantForm, Element, Lattice,
    LatticeError, LatticeInvariants, Overlattice, PElementaryInvariants,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlueError {
    #[error("rank of the sublattice ({0}) exceeds the rank of the ambient lattice ({1})")]
    RankMismatch(usize, usize),
    #[error("lattice is not unimodular")]
    NotUnimodular,
    #[error("not a lattice expression: {0}")]
    NotExpression(String),
    #[error("overlattice index must be at least 2")]
    BadIndex,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A subgroup of a discriminant group on which `q` and `b` vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSubgroup {
    pub generators: Vec<Element>,
    /// All elements, sorted.
    pub elements: Vec<Element>,
}

impl IsotropicSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn add(x: &[i64], y: &[i64], orders: &[i64]) -> Element {
    x.iter()
        .zip(y)
        .zip(orders)
        .map(|((a, b), o)| (a + b).rem_euclid(*o))
        .collect()
}

fn span(gens: &[Element], orders: &[i64]) -> BTreeSet<Element> {
    let mut set = BTreeSet::new();
    set.insert(vec![0; orders.len()]);
    let mut queue: VecDeque<Element> = VecDeque::from([vec![0; orders.len()]]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = add(&x, g, orders);
            if set.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    set
}

/// All isotropic subgroups of the given order.
pub fn isotropic_subgroups(
    form: &DiscriminantForm,
    order: usize,
) -> Result<Vec<IsotropicSubgroup>, GlueError> {
    let orders = form.group().small_orders()?;
    let elements = form.elements()?;
    let isotropic: Vec<&Element> = elements
        .iter()
        .filter(|x| form.q(x).is_zero())
        .collect();
    let zero = vec![0i64; orders.len()];
    let mut seen: HashSet<BTreeSet<Element>> = HashSet::new();
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<Element>, BTreeSet<Element>)> =
        vec![(Vec::new(), BTreeSet::from([zero]))];
    while let Some((gens, set)) = frontier.pop() {
        if set.len() == order {
            out.push(IsotropicSubgroup {
                generators: gens,
                elements: set.into_iter().collect(),
            });
            continue;
        }
        for x in &isotropic {
            if set.contains(*x) || !set.iter().all(|h| form.b(x, h).is_zero()) {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push((*x).clone());
            let next = span(&next_gens, &orders);
            if next.len() > order || order % next.len() != 0 || !seen.insert(next.clone()) {
                continue;
            }
            frontier.push((next_gens, next));
        }
    }
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    Ok(out)
}

/// All even overlattices `W ⊇ L` with `[W : L] = index`, sorted by Gram
/// matrix.
pub fn overlattices(l: &Lattice, index: usize) -> Result<Vec<Overlattice>, GlueError> {
    if index < 2 {
        return Err(GlueError::BadIndex);
    }
    let form = l.discriminant_form();
    let order = form.group().order();
    let index_sq = Int::from(index) * Int::from(index);
    if (&order % &index_sq) != Int::zero() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for h in isotropic_subgroups(&form, index)? {
        let glue: Vec<_> = h.generators.iter().map(|g| form.dual_vector(g)).collect();
        let over = l.overlattice(&glue)?;
        debug_assert_eq!(over.index, Int::from(index));
        out.push(over);
    }
    out.sort_by(|a, b| a.lattice.gram().to_rows().cmp(&b.lattice.gram().to_rows()));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingStatus {
    Obstructed,
    Inconclusive,
    EmbeddedByConstruction,
}

/// A violated necessary condition for `S ↪ W` primitive, with
/// `m = rank W − rank S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "test", rename_all = "snake_case")]
pub enum Obstruction {
    /// (a) some inertia index of `S` exceeds that of `W`.
    Signature { s: Signature, w: Signature },
    /// (b) `l_q(W) > l_q(S) + m` at a prime power `q`.
    LengthUpper {
        q: u64,
        l_w: usize,
        l_s: usize,
        m: usize,
    },
    /// (c) `l_p(W) < l_p(S) − m` at a prime `p`.
    LengthLower {
        p: u64,
        l_w: usize,
        l_s: usize,
        m: usize,
    },
}

impl Obstruction {
    pub fn label(&self) -> &'static str {
        match self {
            Obstruction::Signature { .. } => "a",
            Obstruction::LengthUpper { .. } => "b",
            Obstruction::LengthLower { .. } => "c",
        }
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::Signature { s, w } => {
                write!(f, "(a) signature {s} does not fit in {w}")
            }
            Obstruction::LengthUpper { q, l_w, l_s, m } => {
                write!(f, "(b) at q={q}: {l_w} > {l_s} + {m}")
            }
            Obstruction::LengthLower { p, l_w, l_s, m } => {
                write!(f, "(c) at p={p}: {l_w} < {l_s} - {m}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingVerdict {
    pub status: EmbeddingStatus,
    pub reason: String,
    /// Every violated condition; the first one is the reason.
    pub violations: Vec<Obstruction>,
    /// Columns are the images of the basis of `S` in the basis of `W`.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_matrix")]
    pub witness: Option<IntMatrix>,
}

fn ser_matrix<S: serde::Serializer>(m: &Option<IntMatrix>, s: S) -> Result<S::Ok, S::Error> {
    let rows: Option<Vec<Vec<serde_json::Value>>> = m.as_ref().map(|m| {
        m.to_rows()
            .iter()
            .map(|r| r.iter().map(crate::lattice::int_to_json).collect())
            .collect()
    });
    serde::Serialize::serialize(&rows, s)
}

impl EmbeddingVerdict {
    fn inconclusive(reason: impl Into<String>) -> Self {
        EmbeddingVerdict {
            status: EmbeddingStatus::Inconclusive,
            reason: reason.into(),
            violations: Vec::new(),
            witness: None,
        }
    }
}

/// Tests (a), (b), (c) on the invariants of `S` and `W`. Only necessary
/// conditions are checked, so the verdict is never a positive one.
pub fn primitive_embedding_length_obstruction(
    s: &LatticeInvariants,
    w: &LatticeInvariants,
) -> Result<EmbeddingVerdict, GlueError> {
    if s.rank() > w.rank() {
        return Err(GlueError::RankMismatch(s.rank(), w.rank()));
    }
    let m = w.rank() - s.rank();
    let mut violations = Vec::new();
    let (ss, ws) = (s.signature(), w.signature());
    if ss.positive > ws.positive || ss.negative > ws.negative {
        violations.push(Obstruction::Signature { s: ss, w: ws });
    }
    for q in w.prime_powers() {
        let (l_w, l_s) = (w.length(Some(q)), s.length(Some(q)));
        if l_w > l_s + m {
            violations.push(Obstruction::LengthUpper { q, l_w, l_s, m });
        }
    }
    for p in s.primes() {
        let (l_w, l_s) = (w.length(Some(p)), s.length(Some(p)));
        if l_s > m && l_w < l_s - m {
            violations.push(Obstruction::LengthLower { p, l_w, l_s, m });
        }
    }
    Ok(match violations.first() {
        Some(first) => EmbeddingVerdict {
            status: EmbeddingStatus::Obstructed,
            reason: first.to_string(),
            violations,
            witness: None,
        },
        None => EmbeddingVerdict::inconclusive("no signature or length obstruction"),
    })
}

/// What a complement `L` with `S ⊕ L ≅ W` must look like, and whether such
/// an `L` can exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitVerdict {
    /// `None` when the signature of `S` does not fit in that of `W`.
    pub complement: Option<LatticeInvariants>,
    pub elementary: Option<PElementaryInvariants>,
    /// `None` when the existence question is outside the decidable cases.
    pub exists: Option<bool>,
    pub reason: String,
}

/// Decides whether `W ≅ S ⊕ L` for some even `L`, with `S` unimodular.
///
/// The complement has the rank and signature difference and the
/// discriminant form of `W`. Existence is decided when `W` is
/// `p`-elementary and the complement is hyperbolic (odd `p`), or `W` is
/// 2-elementary with a Gram matrix (so `δ` is known).
pub fn split_off_unimodular(s: &Lattice, w: &LatticeData) -> Result<SplitVerdict, GlueError> {
    if !s.is_unimodular() {
        return Err(GlueError::NotUnimodular);
    }
    let wi = w.invariants();
    if s.rank() > wi.rank() {
        return Err(GlueError::RankMismatch(s.rank(), wi.rank()));
    }
    let (ss, ws) = (s.signature(), wi.signature());
    if ss.positive > ws.positive || ss.negative > ws.negative {
        return Ok(SplitVerdict {
            complement: None,
            elementary: None,
            exists: Some(false),
            reason: format!("signature {ss} does not fit in {ws}"),
        });
    }
    let sig = Signature::new(ws.positive - ss.positive, ws.negative - ss.negative);
    let r = sig.rank();
    let complement = LatticeInvariants::new(r, sig, wi.invariant_factors().to_vec());
    let a = complement.length(None);
    let verdict = |elementary, exists, reason: String| {
        Ok(SplitVerdict {
            complement: Some(complement.clone()),
            elementary,
            exists,
            reason,
        })
    };
    if a > r {
        return verdict(
            None,
            Some(false),
            format!("discriminant length {a} exceeds complement rank {r}"),
        );
    }
    if r == 0 {
        return verdict(None, Some(true), "complement is zero".into());
    }
    let Some(p) = complement.elementary_prime().or(if a == 0 { Some(2) } else { None }) else {
        return verdict(None, None, "W is not p-elementary".into());
    };
    if p == 2 {
        let Some(wl) = w.lattice() else {
            return verdict(None, None, "δ of W is unknown without a Gram matrix".into());
        };
        let delta = wl.delta_invariant()?;
        let inv = PElementaryInvariants {
            p,
            r,
            a,
            delta: Some(delta),
            signature: sig,
        };
        let exists = exists_two_elementary(sig, a, delta);
        return verdict(
            Some(inv),
            Some(exists),
            format!("2-elementary existence for signature {sig}, a={a}, δ={delta}: {exists}"),
        );
    }
    let inv = PElementaryInvariants {
        p,
        r,
        a,
        delta: None,
        signature: sig,
    };
    if sig.positive != 1 && sig.negative != 1 {
        return verdict(
            Some(inv),
            None,
            format!("complement signature {sig} is not hyperbolic"),
        );
    }
    let exists = exists_hyperbolic_p_elementary(p, r, a)?;
    verdict(
        Some(inv),
        Some(exists),
        format!("hyperbolic {p}-elementary existence for r={r}, a={a}: {exists}"),
    )
}

/// Coefficient bound and largest target rank for the vector search in
/// [`direct_summand_embedding`].
const SEARCH_BOUND: i64 = 2;
const SEARCH_MAX_RANK: usize = 4;

/// `EmbeddedByConstruction` when every block of `S` lands primitively in its
/// own group of blocks of `W`: an identical block when there is one,
/// otherwise one or two unused blocks of total rank at most 4, searched for
/// vectors with the right Gram matrix (coefficients in `[-2, 2]`). Distinct groups are orthogonal,
/// so the images add up to a primitive embedding. The witness is checked
/// against both Gram matrices.
pub fn direct_summand_embedding(
    s: &LatticeExpr,
    w: &LatticeExpr,
) -> Result<EmbeddingVerdict, GlueError> {
    let s_blocks = s.blocks()?;
    let w_blocks = w.blocks()?;
    let grams = |blocks: &[LatticeExpr]| -> Result<Option<Vec<Lattice>>, GlueError> {
        let mut out = Vec::new();
        for b in blocks {
            match b.evaluate()? {
                LatticeData::Gram(l) => out.push(l),
                LatticeData::Invariants(_) => return Ok(None),
            }
        }
        Ok(Some(out))
    };
    let (Some(sl), Some(wl)) = (grams(&s_blocks)?, grams(&w_blocks)?) else {
        return Ok(EmbeddingVerdict::inconclusive(
            "some block has no Gram matrix to build a witness",
        ));
    };
    let mut offsets = Vec::with_capacity(wl.len());
    let mut total = 0;
    for l in &wl {
        offsets.push(total);
        total += l.rank();
    }
    let mut used = vec![false; w_blocks.len()];
    // (block of S, columns of the image in the coordinates of W)
    let mut images: Vec<Option<IntMatrix>> = vec![None; s_blocks.len()];
    for (i, b) in s_blocks.iter().enumerate() {
        if let Some(j) = (0..w_blocks.len()).find(|&j| !used[j] && w_blocks[j] == *b) {
            used[j] = true;
            let mut img = IntMatrix::zeros(total, sl[i].rank());
            for k in 0..sl[i].rank() {
                img[(offsets[j] + k, k)] = Int::from(1);
            }
            images[i] = Some(img);
        }
    }
    let mut rewritten = Vec::new();
    for i in 0..s_blocks.len() {
        if images[i].is_some() {
            continue;
        }
        let free: Vec<usize> = (0..w_blocks.len()).filter(|&j| !used[j]).collect();
        let mut groups: Vec<Vec<usize>> = free.iter().map(|&j| vec![j]).collect();
        for (x, &j) in free.iter().enumerate() {
            for &k in &free[x + 1..] {
                groups.push(vec![j, k]);
            }
        }
        let found = groups.into_iter().find_map(|g| {
            let gram = g
                .iter()
                .skip(1)
                .fold(wl[g[0]].gram().clone(), |acc, &j| acc.block_diag(wl[j].gram()));
            search_primitive_embedding(sl[i].gram(), &gram).map(|m| (g, m))
        });
        let Some((group, local)) = found else {
            return Ok(EmbeddingVerdict::inconclusive(format!(
                "block {} has no unused counterpart in {w}",
                s_blocks[i]
            )));
        };
        let mut img = IntMatrix::zeros(total, sl[i].rank());
        let mut row = 0;
        for &j in &group {
            used[j] = true;
            for k in 0..wl[j].rank() {
                for c in 0..sl[i].rank() {
                    img[(offsets[j] + k, c)] = local[(row + k, c)].clone();
                }
            }
            row += wl[j].rank();
        }
        let names: Vec<String> = group.iter().map(|&j| w_blocks[j].to_string()).collect();
        rewritten.push(format!("{} into {}", s_blocks[i], names.join(" + ")));
        images[i] = Some(img);
    }
    let s_rank: usize = sl.iter().map(Lattice::rank).sum();
    let mut witness = IntMatrix::zeros(total, s_rank);
    let mut col = 0;
    for img in images.iter().flatten() {
        for c in 0..img.cols() {
            for r in 0..total {
                witness[(r, col + c)] = img[(r, c)].clone();
            }
        }
        col += img.cols();
    }
    let gram_w = wl.iter().skip(1).fold(wl[0].gram().clone(), |acc, l| acc.block_diag(l.gram()));
    let gram_s = sl.iter().skip(1).fold(sl[0].gram().clone(), |acc, l| acc.block_diag(l.gram()));
    assert_eq!(
        witness.congruence(&gram_w),
        gram_s,
        "witness preserves the form"
    );
    debug_assert!(is_primitive(&witness));
    let reason = if rewritten.is_empty() {
        format!("{s} is a direct summand of {w}")
    } else {
        format!("{s} embeds blockwise in {w} ({})", rewritten.join("; "))
    };
    Ok(EmbeddingVerdict {
        status: EmbeddingStatus::EmbeddedByConstruction,
        reason,
        violations: Vec::new(),
        witness: Some(witness),
    })
}

/// Columns span a primitive sublattice iff every invariant factor is 1.
fn is_primitive(m: &IntMatrix) -> bool {
    let d = smith_normal_form(m).diagonal();
    d.len() >= m.cols() && d[..m.cols()].iter().all(|x| x.abs() == Int::from(1))
}

/// Images `x_1, …, x_k` with `x_i · x_j = s_ij` under `g`, found by
/// backtracking over coefficient vectors in the search box, and primitive.
fn search_primitive_embedding(s: &IntMatrix, g: &IntMatrix) -> Option<IntMatrix> {
    let (k, n) = (s.rows(), g.rows());
    if k > n || n > SEARCH_MAX_RANK {
        return None;
    }
    let width = (2 * SEARCH_BOUND + 1) as usize;
    let candidates: Vec<Vec<i64>> = (0..width.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let c = (code % width) as i64 - SEARCH_BOUND;
                    code /= width;
                    c
                })
                .collect()
        })
        .filter(|v: &Vec<i64>| v.iter().any(|&c| c != 0))
        .collect();
    let gi: Vec<Vec<i64>> = g
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).ok()).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let si: Vec<Vec<i64>> = s
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).ok()).collect::<Option<_>>())
        .collect::<Option<_>>()?;
    let dot = |x: &[i64], y: &[i64]| -> i64 {
        (0..n)
            .map(|a| x[a] * (0..n).map(|b| gi[a][b] * y[b]).sum::<i64>())
            .sum()
    };
    fn go(
        i: usize,
        chosen: &mut Vec<usize>,
        cands: &[Vec<i64>],
        si: &[Vec<i64>],
        dot: &dyn Fn(&[i64], &[i64]) -> i64,
        done: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == si.len() {
            return done(chosen);
        }
        for (c, x) in cands.iter().enumerate() {
            if dot(x, x) != si[i][i] {
                continue;
            }
            if chosen
                .iter()
                .enumerate()
                .any(|(j, &p)| dot(&cands[p], x) != si[j][i])
            {
                continue;
            }
            chosen.push(c);
            if go(i + 1, chosen, cands, si, dot, done) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let to_matrix = |chosen: &[usize]| {
        IntMatrix::from_fn(n, k, |r, c| Int::from(candidates[chosen[c]][r]))
    };
    let mut result = None;
    let mut done = |chosen: &[usize]| {
        let m = to_matrix(chosen);
        if is_primitive(&m) {
            result = Some(m);
            true
        } else {
            false
        }
    };
    go(0, &mut Vec::new(), &candidates, &si, &dot, &mut done);
    result
}

/// Source-text variant of [`direct_summand_embedding`].
pub fn direct_summand_embedding_src(s: &str, w: &str) -> Result<EmbeddingVerdict, GlueError> {
    let parse = |src: &str| expr::parse(src).map_err(|e| GlueError::NotExpression(e.to_string()));
    direct_summand_embedding(&parse(s)?, &parse(w)?)
}

/// Exact check that `W` contains `L` with the given index.
pub fn check_overlattice(l: &Lattice, over: &Overlattice, index: usize) -> bool {
    let n = Int::from(index);
    let back = over.basis.inverse();
    // the original basis must have integral coordinates in the new one
    let integral = back
        .map(|inv| inv.entries().all(|x| x.is_integer()))
        .unwrap_or(false);
    integral && over.lattice.det().abs() * &n * &n == l.det().abs()
}
