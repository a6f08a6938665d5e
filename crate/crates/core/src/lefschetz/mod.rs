//! Holomorphic Lefschetz number of a non-symplectic automorphism of order `m`,
//! expanded in the power basis of `ℚ(ζ_m)` and solved for fixed-point counts.
//!
//! With `n_t` isolated points of type `t` (local action
//! `diag(ζ^{t+1}, ζ^{m−t})`) and `h = Σ (1 − g(C))` over fixed curves,
//!
//! ```text
//! 1 + ζ^{m−1} = Σ_t n_t a(t) + h (1 + ζ)/(1 − ζ)²,   a(t) = 1/det(I − A_{m,t}).
//! ```

mod cyclotomic;
mod fixtures;
mod poly;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use fixtures::{check_printed_system, PrintedSystem, PrintedSystemKind};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{euler_phi, rational_solve, AffineSolutionSpace, Int, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("division by zero in the cyclotomic field")]
    DivisionByZero,
    #[error("elements of Q(zeta_{0}) and Q(zeta_{1}) cannot be combined")]
    OrderMismatch(u64, u64),
    #[error("local action of type {t} for order {m} is degenerate")]
    DegenerateType { m: u64, t: usize },
    #[error("type {t} is not an isolated type for order {m} (valid: 1..={max})")]
    InvalidType { m: u64, t: usize, max: usize },
    #[error("order must be at least {min}, got {m}")]
    InvalidOrder { m: u64, min: u64 },
    #[error("type {0} is listed both as unknown and as forced zero")]
    OverlappingTypes(usize),
    #[error("empty range {0}..={1}")]
    EmptyRange(i64, i64),
    #[error("box has {0} points, more than the enumeration limit")]
    EnumerationTooLarge(String),
    #[error("malformed fixture: {0}")]
    Fixture(String),
}

/// Which determinant the point contribution inverts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `(1 − ζ^{t+1})(1 − ζ^{m−t})`, from the local action matrix.
    #[default]
    Matrix,
    /// `(1 − ζ^t)(1 − ζ^{m−t+1})`; vanishes at `t = 1`.
    Fraction,
}

impl std::str::FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matrix" => Ok(Convention::Matrix),
            "fraction" => Ok(Convention::Fraction),
            _ => Err(format!("unknown convention `{s}` (matrix|fraction)")),
        }
    }
}

/// Largest isolated type index: `(m − 2)/2` for even `m`, `(m − 1)/2` for
/// odd `m` (types `t` and `m − 1 − t` have the same local action).
pub fn max_isolated_type(m: u64) -> usize {
    ((m - 1) / 2) as usize
}

fn check_order(m: u64, min: u64) -> Result<(), LefschetzError> {
    if m < min {
        Err(LefschetzError::InvalidOrder { m, min })
    } else {
        Ok(())
    }
}

fn one_minus_zeta_pow(m: u64, k: i64) -> Cyclotomic {
    &Cyclotomic::one(m) - &Cyclotomic::zeta_pow(m, k)
}

/// `a(t) = 1 / det(I − A_{m,t})`.
pub fn point_contribution(
    m: u64,
    t: usize,
    convention: Convention,
) -> Result<Cyclotomic, LefschetzError> {
    check_order(m, 3)?;
    let max = max_isolated_type(m);
    if t == 0 || t > max {
        return Err(LefschetzError::InvalidType { m, t, max });
    }
    let (e1, e2) = match convention {
        Convention::Matrix => (t as i64 + 1, m as i64 - t as i64),
        Convention::Fraction => (t as i64, m as i64 - t as i64 + 1),
    };
    let det = &one_minus_zeta_pow(m, e1) * &one_minus_zeta_pow(m, e2);
    det.inv().map_err(|_| LefschetzError::DegenerateType { m, t })
}

/// `b = (1 + ζ)(1 − g)/(1 − ζ)²`.
pub fn curve_contribution(m: u64, genus: i64) -> Result<Cyclotomic, LefschetzError> {
    check_order(m, 2)?;
    let one_plus = &Cyclotomic::one(m) + &Cyclotomic::zeta_pow(m, 1);
    let one_minus = one_minus_zeta_pow(m, 1);
    let base = one_plus.try_div(&(&one_minus * &one_minus))?;
    Ok(base.scale(&Rat::from_integer(Int::from(1 - genus))))
}

/// `L(η) = 1 + ζ^{m−1}`.
pub fn lefschetz_number(m: u64) -> Result<Cyclotomic, LefschetzError> {
    check_order(m, 2)?;
    Ok(&Cyclotomic::one(m) + &Cyclotomic::zeta_pow(m, m as i64 - 1))
}

/// The curve term `h`: known, or a bounded unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveTerm {
    Fixed(i64),
    Range(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocusHypothesis {
    pub m: u64,
    pub unknown_types: Vec<usize>,
    pub forced_zero_types: Vec<usize>,
    pub h: CurveTerm,
}

impl FixedLocusHypothesis {
    pub fn new(m: u64, unknown_types: &[usize], h: CurveTerm) -> Self {
        FixedLocusHypothesis {
            m,
            unknown_types: unknown_types.to_vec(),
            forced_zero_types: Vec::new(),
            h,
        }
    }

    fn validate(&self) -> Result<(), LefschetzError> {
        check_order(self.m, 2)?;
        let max = max_isolated_type(self.m);
        for &t in self.unknown_types.iter().chain(&self.forced_zero_types) {
            if t == 0 || t > max {
                return Err(LefschetzError::InvalidType { m: self.m, t, max });
            }
        }
        if let Some(&t) = self
            .unknown_types
            .iter()
            .find(|t| self.forced_zero_types.contains(t))
        {
            return Err(LefschetzError::OverlappingTypes(t));
        }
        if let CurveTerm::Range(lo, hi) = self.h {
            if lo > hi {
                return Err(LefschetzError::EmptyRange(lo, hi));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    Points(usize),
    Curves,
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::Points(t) => write!(f, "n{t}"),
            Unknown::Curves => write!(f, "h"),
        }
    }
}

/// One rational equation per power-basis coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzSystem {
    pub m: u64,
    pub unknowns: Vec<Unknown>,
    pub matrix: RatMatrix,
    pub rhs: Vec<Rat>,
    /// Value of `h` when it is not an unknown.
    pub fixed_h: Option<i64>,
}

pub fn build_system(
    hyp: &FixedLocusHypothesis,
    convention: Convention,
) -> Result<LefschetzSystem, LefschetzError> {
    hyp.validate()?;
    let m = hyp.m;
    let mut types = hyp.unknown_types.clone();
    types.sort_unstable();
    types.dedup();
    let mut columns: Vec<Cyclotomic> = Vec::new();
    let mut unknowns = Vec::new();
    for &t in &types {
        columns.push(point_contribution(m, t, convention)?);
        unknowns.push(Unknown::Points(t));
    }
    let b = curve_contribution(m, 0)?;
    let mut rhs = lefschetz_number(m)?;
    let fixed_h = match hyp.h {
        CurveTerm::Fixed(h) => {
            rhs = &rhs - &b.scale(&Rat::from_integer(Int::from(h)));
            Some(h)
        }
        CurveTerm::Range(..) => {
            columns.push(b);
            unknowns.push(Unknown::Curves);
            None
        }
    };
    let rows = euler_phi(m) as usize;
    let matrix = RatMatrix::from_fn(rows, columns.len(), |i, j| columns[j].coeffs()[i].clone());
    Ok(LefschetzSystem {
        m,
        unknowns,
        matrix,
        rhs: rhs.coeffs().to_vec(),
        fixed_h,
    })
}

/// Enumeration box: `0 ≤ n_t ≤ max_points`, `h` in its range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_points: i64,
    pub h_range: (i64, i64),
}

impl Default for Bounds {
    /// The Euler number 24 of a K3 surface bounds the number of isolated
    /// fixed points.
    fn default() -> Self {
        Bounds {
            max_points: 24,
            h_range: (-24, 24),
        }
    }
}

/// Boxes with more points than this are refused.
pub const ENUMERATION_LIMIT: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Solution {
    /// Type `t` to `n_t`.
    pub points: BTreeMap<usize, i64>,
    pub h: i64,
}

/// Nonnegative integer solutions in the box, in lexicographic order of the
/// unknowns (types ascending, then `h`).
pub fn solve_nonneg(sys: &LefschetzSystem, bounds: Bounds) -> Result<Vec<Solution>, LefschetzError> {
    let ranges: Vec<(i64, i64)> = sys
        .unknowns
        .iter()
        .map(|u| match u {
            Unknown::Points(_) => (0, bounds.max_points),
            Unknown::Curves => bounds.h_range,
        })
        .collect();
    let raw = integer_points(&sys.matrix, &sys.rhs, &ranges)?;
    let mut out: Vec<Solution> = raw
        .into_iter()
        .map(|x| {
            let mut points = BTreeMap::new();
            let mut h = sys.fixed_h.unwrap_or(0);
            for (u, v) in sys.unknowns.iter().zip(x) {
                match u {
                    Unknown::Points(t) => {
                        points.insert(*t, v);
                    }
                    Unknown::Curves => h = v,
                }
            }
            Solution { points, h }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Integer points of `{x : A x = b}` inside the box, found by enumerating
/// the free variables of the reduced echelon form. Sorted lexicographically.
pub fn integer_points(
    a: &RatMatrix,
    b: &[Rat],
    ranges: &[(i64, i64)],
) -> Result<Vec<Vec<i64>>, LefschetzError> {
    assert_eq!(a.cols(), ranges.len());
    for &(lo, hi) in ranges {
        if lo > hi {
            return Err(LefschetzError::EmptyRange(lo, hi));
        }
    }
    let AffineSolutionSpace::Affine {
        particular,
        kernel,
        pivots,
        free,
    } = rational_solve(a, b)
    else {
        return Ok(Vec::new());
    };
    let size: u128 = free
        .iter()
        .map(|&f| (ranges[f].1 - ranges[f].0 + 1) as u128)
        .product();
    if size > ENUMERATION_LIMIT {
        return Err(LefschetzError::EnumerationTooLarge(size.to_string()));
    }
    let mut out = Vec::new();
    let mut lambda: Vec<i64> = free.iter().map(|&f| ranges[f].0).collect();
    loop {
        let mut x: Vec<Rat> = particular.clone();
        for (l, k) in lambda.iter().zip(&kernel) {
            if *l != 0 {
                let l = Rat::from_integer(Int::from(*l));
                for (xi, ki) in x.iter_mut().zip(k) {
                    *xi += &l * ki;
                }
            }
        }
        let ok = pivots.iter().all(|&p| {
            x[p].is_integer()
                && x[p]
                    .to_integer()
                    .to_i64()
                    .is_some_and(|v| ranges[p].0 <= v && v <= ranges[p].1)
        });
        if ok {
            out.push(
                x.iter()
                    .map(|v| v.to_integer().to_i64().expect("bounded"))
                    .collect(),
            );
        }
        // odometer over the free variables
        let mut i = lambda.len();
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            if lambda[i] < ranges[free[i]].1 {
                lambda[i] += 1;
                break;
            }
            lambda[i] = ranges[free[i]].0;
        }
    }
}

/// `A x = b` with every entry of `x` nonnegative.
pub fn satisfies(a: &RatMatrix, b: &[Rat], x: &[i64]) -> bool {
    let xr: Vec<Rat> = x.iter().map(|&v| Rat::from_integer(Int::from(v))).collect();
    a.mul_vec(&xr) == b && x.iter().all(|v| !v.is_negative())
}

/// The rational number `p/q` as a string, `p` for integers.
pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
