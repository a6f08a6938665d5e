use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactError, Int, IntMatrix};

/// Smith decomposition `U · M · V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | …`, including zeros and ones.
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &Int) {
    for j in 0..m.cols() {
        let delta = factor * &m[(source, j)];
        m[(target, j)] += delta;
    }
}

fn add_col_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &Int) {
    for i in 0..m.rows() {
        let delta = factor * &m[(i, source)];
        m[(i, target)] += delta;
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.map_or(true, |(pi, pj)| x.abs() < a[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SmithForm { d: a, u, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                add_row_multiple(&mut a, i, t, &q);
                add_row_multiple(&mut u, i, t, &q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                add_col_multiple(&mut a, j, t, &q);
                add_col_multiple(&mut v, j, t, &q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = a[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            if let Some(i) = offender {
                let one = Int::one();
                add_row_multiple(&mut a, t, i, &one);
                add_row_multiple(&mut u, t, i, &one);
                continue;
            }
            break;
        }
        if a[(t, t)].is_negative() {
            let minus = -Int::one();
            for j in 0..cols {
                a[(t, j)] = &a[(t, j)] * &minus;
            }
            for j in 0..rows {
                u[(t, j)] = &u[(t, j)] * &minus;
            }
        }
    }
    SmithForm { d: a, u, v }
}

/// Row-style Hermite normal form; zero rows are dropped.
///
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-combine every row below r into row r at column c
        for i in r + 1..rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let x = a[(r, c)].clone();
            let y = a[(i, c)].clone();
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (xg, yg) = (&x / &g, &y / &g);
            for j in 0..cols {
                let ar = a[(r, j)].clone();
                let ai = a[(i, j)].clone();
                a[(r, j)] = &s * &ar + &t * &ai;
                a[(i, j)] = &xg * &ai - &yg * &ar;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            for j in 0..cols {
                a[(r, j)] = -a[(r, j)].clone();
            }
        }
        let p = a[(r, c)].clone();
        for i in 0..r {
            let q = a[(i, c)].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            let q = -q;
            add_row_multiple(&mut a, i, r, &q);
        }
        r += 1;
    }
    a.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Basis (as columns) of the primitive closure `(span B ⊗ ℚ) ∩ ℤⁿ` of
/// the column span of `b`, returned in canonical Hermite form.
pub fn hermite_saturation(b: &IntMatrix) -> Result<IntMatrix, ExactError> {
    let k = b.cols();
    let snf = smith_normal_form(b);
    if snf.rank() != k {
        return Err(ExactError::RankDeficient);
    }
    let u_inv = snf
        .u
        .unimodular_inverse()
        .expect("Smith transform is unimodular");
    let basis = u_inv.select_cols(&(0..k).collect::<Vec<_>>());
    Ok(hermite_normal_form(&basis.transpose()).transpose())
}
