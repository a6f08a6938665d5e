use num_traits::{One, Zero};

use super::{Rat, RatMatrix};

/// Solution set of `A x = b` over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolutionSpace {
    Inconsistent,
    Affine {
        /// Particular solution with every free variable set to zero.
        particular: Vec<Rat>,
        /// Kernel basis; vector `i` has a 1 at `free[i]` and 0 at the other
        /// free positions.
        kernel: Vec<Vec<Rat>>,
        pivots: Vec<usize>,
        free: Vec<usize>,
    },
}

impl AffineSolutionSpace {
    pub fn is_consistent(&self) -> bool {
        !matches!(self, AffineSolutionSpace::Inconsistent)
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            AffineSolutionSpace::Inconsistent => None,
            AffineSolutionSpace::Affine { kernel, .. } => Some(kernel.len()),
        }
    }

    /// `particular + Σ λ_i kernel_i`.
    pub fn point(&self, lambda: &[Rat]) -> Option<Vec<Rat>> {
        let AffineSolutionSpace::Affine {
            particular, kernel, ..
        } = self
        else {
            return None;
        };
        assert_eq!(lambda.len(), kernel.len());
        let mut x = particular.clone();
        for (l, k) in lambda.iter().zip(kernel) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += l * ki;
            }
        }
        Some(x)
    }
}

/// Exact solution of `A x = b` by reduced row echelon form.
pub fn rational_solve(a: &RatMatrix, b: &[Rat]) -> AffineSolutionSpace {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = RatMatrix::from_fn(rows, cols + 1, |i, j| {
        if j < cols {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        let piv = m[(r, c)].clone();
        for j in c..=cols {
            m[(r, j)] = &m[(r, j)] / &piv;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..=cols {
                let d = &f * &m[(r, j)];
                m[(i, j)] = &m[(i, j)] - d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| !m[(i, cols)].is_zero()) {
        return AffineSolutionSpace::Inconsistent;
    }

    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[(i, cols)].clone();
    }
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[(i, f)].clone();
            }
            v
        })
        .collect();
    AffineSolutionSpace::Affine {
        particular,
        kernel,
        pivots,
        free,
    }
}
