use std::collections::HashSet;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactmath::{smith_normal_form, Int, IntMatrix, Rat};

use super::LatticeError;

/// Elements above this size are never enumerated.
pub const ENUMERATION_LIMIT: u64 = 1 << 16;

/// Reduces `x` into `[0, m)`.
pub fn reduce_mod(x: &Rat, m: i64) -> Rat {
    let m = Rat::from_integer(Int::from(m));
    let q = (x / &m).floor();
    x - q * m
}

/// `L^∨ / L` as a product of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<Int>,
    /// Generators as dual vectors, in coordinates of the lattice basis.
    generators: Vec<Vec<Rat>>,
    /// Rows of the Smith transform `U` that read off group coordinates from
    /// `G·x` for a dual vector `x`.
    projection: IntMatrix,
}

impl DiscriminantGroup {
    pub(crate) fn of_gram(gram: &IntMatrix) -> Self {
        let snf = smith_normal_form(gram);
        let diag = snf.diagonal();
        let keep: Vec<usize> = (0..diag.len()).filter(|&i| diag[i] > Int::one()).collect();
        let u_inv = snf
            .u
            .unimodular_inverse()
            .expect("Smith transform is unimodular")
            .to_rational();
        let g_inv = gram
            .to_rational()
            .inverse()
            .expect("lattice Gram matrices are nonsingular");
        let generators = keep
            .iter()
            .map(|&i| g_inv.mul_vec(&u_inv.column(i)))
            .collect();
        DiscriminantGroup {
            invariant_factors: keep.iter().map(|&i| diag[i].clone()).collect(),
            generators,
            projection: snf.u.select_rows(&keep),
        }
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Minimal number of generators.
    pub fn length(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Number of invariant factors divisible by `q`.
    pub fn length_at(&self, q: u64) -> usize {
        let q = Int::from(q);
        self.invariant_factors
            .iter()
            .filter(|d| d.is_multiple_of(&q))
            .count()
    }

    /// Orders as machine integers, if the group is small enough to enumerate.
    pub fn small_orders(&self) -> Result<Vec<i64>, LatticeError> {
        let order = self.order();
        if order > Int::from(ENUMERATION_LIMIT) {
            return Err(LatticeError::TooLarge(order.to_string()));
        }
        Ok(self
            .invariant_factors
            .iter()
            .map(|d| d.to_i64().expect("bounded by the enumeration limit"))
            .collect())
    }

    /// Group coordinates of a dual vector `x` (so `G·x` must be integral).
    pub fn coordinates(&self, gram: &IntMatrix, x: &[Rat]) -> Vec<Int> {
        let y: Vec<Int> = gram
            .to_rational()
            .mul_vec(x)
            .into_iter()
            .map(|v| {
                assert!(v.is_integer(), "vector is not in the dual lattice");
                v.to_integer()
            })
            .collect();
        self.projection
            .mul_vec(&y)
            .into_iter()
            .zip(&self.invariant_factors)
            .map(|(c, d)| c.mod_floor(d))
            .collect()
    }
}

/// Discriminant quadratic form `q: A → ℚ/2ℤ` with bilinear form `b: A×A → ℚ/ℤ`,
/// stored on the generators of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantForm {
    group: DiscriminantGroup,
    q_values: Vec<Rat>,
    b_matrix: Vec<Vec<Rat>>,
}

/// An element of a discriminant group in generator coordinates.
pub type Element = Vec<i64>;

impl DiscriminantForm {
    pub(crate) fn of_gram(gram: &IntMatrix) -> Self {
        let group = DiscriminantGroup::of_gram(gram);
        let g = gram.to_rational();
        let dot = |x: &[Rat], y: &[Rat]| -> Rat {
            g.mul_vec(y)
                .iter()
                .zip(x)
                .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
        };
        let gens = group.generators();
        let q_values = gens.iter().map(|x| reduce_mod(&dot(x, x), 2)).collect();
        let b_matrix = gens
            .iter()
            .map(|x| gens.iter().map(|y| reduce_mod(&dot(x, y), 1)).collect())
            .collect();
        DiscriminantForm {
            group,
            q_values,
            b_matrix,
        }
    }

    /// Builds a form from generator data; used for forms without a lattice.
    pub fn from_generator_data(
        invariant_factors: Vec<Int>,
        q_values: Vec<Rat>,
        b_matrix: Vec<Vec<Rat>>,
    ) -> Self {
        let n = invariant_factors.len();
        assert_eq!(q_values.len(), n);
        assert!(b_matrix.len() == n && b_matrix.iter().all(|r| r.len() == n));
        DiscriminantForm {
            group: DiscriminantGroup {
                invariant_factors,
                generators: Vec::new(),
                projection: IntMatrix::zeros(n, 0),
            },
            q_values: q_values.iter().map(|q| reduce_mod(q, 2)).collect(),
            b_matrix: b_matrix
                .iter()
                .map(|r| r.iter().map(|b| reduce_mod(b, 1)).collect())
                .collect(),
        }
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    pub fn q_values(&self) -> &[Rat] {
        &self.q_values
    }

    pub fn b_matrix(&self) -> &[Vec<Rat>] {
        &self.b_matrix
    }

    /// `q(Σ cᵢ gᵢ) = Σ cᵢ² q(gᵢ) + 2 Σ_{i<j} cᵢ cⱼ b(gᵢ, gⱼ)` mod 2.
    pub fn q(&self, c: &[i64]) -> Rat {
        let n = c.len();
        let mut acc = Rat::zero();
        for i in 0..n {
            if c[i] == 0 {
                continue;
            }
            acc += &self.q_values[i] * Int::from(c[i] * c[i]);
            for j in i + 1..n {
                if c[j] != 0 {
                    acc += &self.b_matrix[i][j] * Int::from(2 * c[i] * c[j]);
                }
            }
        }
        reduce_mod(&acc, 2)
    }

    pub fn b(&self, x: &[i64], y: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    acc += &self.b_matrix[i][j] * Int::from(xi * yj);
                }
            }
        }
        reduce_mod(&acc, 1)
    }

    /// All elements in mixed-radix order.
    pub fn elements(&self) -> Result<Vec<Element>, LatticeError> {
        let orders = self.group.small_orders()?;
        Ok(enumerate_group(&orders))
    }

    /// Dual vector `Σ cᵢ gᵢ` in lattice coordinates.
    pub fn dual_vector(&self, c: &[i64]) -> Vec<Rat> {
        let gens = self.group.generators();
        let dim = gens.first().map_or(0, Vec::len);
        let mut v = vec![Rat::zero(); dim];
        for (ci, g) in c.iter().zip(gens) {
            for (vk, gk) in v.iter_mut().zip(g) {
                *vk += gk * Int::from(*ci);
            }
        }
        v
    }

    /// Whether `q` takes only integral values on the whole group.
    pub fn is_integral_valued(&self) -> Result<bool, LatticeError> {
        Ok(self.elements()?.iter().all(|e| self.q(e).is_integer()))
    }

    /// Orthogonal sum of two forms.
    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        let n1 = self.q_values.len();
        let n = n1 + other.q_values.len();
        let mut b = vec![vec![Rat::zero(); n]; n];
        for i in 0..n1 {
            b[i][..n1].clone_from_slice(&self.b_matrix[i]);
        }
        for i in n1..n {
            b[i][n1..].clone_from_slice(&other.b_matrix[i - n1]);
        }
        let mut factors = self.group.invariant_factors.clone();
        factors.extend(other.group.invariant_factors.iter().cloned());
        let mut q = self.q_values.clone();
        q.extend(other.q_values.iter().cloned());
        DiscriminantForm::from_generator_data(factors, q, b)
    }

    /// Negated form `−q`.
    pub fn negated(&self) -> Self {
        DiscriminantForm::from_generator_data(
            self.group.invariant_factors.clone(),
            self.q_values.iter().map(|q| -q.clone()).collect(),
            self.b_matrix
                .iter()
                .map(|r| r.iter().map(|b| -b.clone()).collect())
                .collect(),
        )
    }

    /// Decides whether the two forms are isometric by searching for images
    /// of the generators that preserve orders, `q` and `b`.
    pub fn is_isometric(&self, other: &Self) -> Result<bool, LatticeError> {
        if self.group.order() != other.group.order() {
            return Ok(false);
        }
        let src_orders = self.group.small_orders()?;
        let dst_orders = other.group.small_orders()?;
        let mut lhs_factors = self.group.invariant_factors.clone();
        let mut rhs_factors = other.group.invariant_factors.clone();
        lhs_factors.sort();
        rhs_factors.sort();
        if lhs_factors != rhs_factors {
            return Ok(false);
        }
        let targets = enumerate_group(&dst_orders);
        let candidates: Vec<Vec<usize>> = (0..src_orders.len())
            .map(|i| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(_, y)| {
                        is_killed_by(y, src_orders[i], &dst_orders)
                            && other.q(y) == self.q_values[i]
                    })
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        let sources = enumerate_group(&src_orders);
        let mut chosen = Vec::with_capacity(src_orders.len());
        Ok(self.extend_isometry(other, &targets, &candidates, &dst_orders, &sources, &mut chosen))
    }

    fn extend_isometry(
        &self,
        other: &Self,
        targets: &[Element],
        candidates: &[Vec<usize>],
        dst_orders: &[i64],
        sources: &[Element],
        chosen: &mut Vec<usize>,
    ) -> bool {
        let i = chosen.len();
        if i == candidates.len() {
            // injectivity on the whole group
            let mut seen = HashSet::with_capacity(sources.len());
            for s in sources {
                let mut img = vec![0i64; dst_orders.len()];
                for (k, &c) in s.iter().enumerate() {
                    let t = &targets[chosen[k]];
                    for (slot, (&tv, &o)) in img.iter_mut().zip(t.iter().zip(dst_orders)) {
                        *slot = (*slot + c * tv).rem_euclid(o);
                    }
                }
                if !seen.insert(img) {
                    return false;
                }
            }
            return true;
        }
        for &cand in &candidates[i] {
            let y = &targets[cand];
            let compatible = chosen
                .iter()
                .enumerate()
                .all(|(j, &cj)| other.b(&targets[cj], y) == self.b_matrix[j][i]);
            if !compatible {
                continue;
            }
            chosen.push(cand);
            if self.extend_isometry(other, targets, candidates, dst_orders, sources, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Generator-level data for serialization.
    pub fn summary(&self) -> FormSummary {
        FormSummary {
            invariant_factors: self
                .group
                .invariant_factors
                .iter()
                .map(|d| d.to_string())
                .collect(),
            q_values: self.q_values.iter().map(|q| q.to_string()).collect(),
            b_matrix: self
                .b_matrix
                .iter()
                .map(|r| r.iter().map(|b| b.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSummary {
    pub invariant_factors: Vec<String>,
    pub q_values: Vec<String>,
    pub b_matrix: Vec<Vec<String>>,
}

fn is_killed_by(y: &[i64], n: i64, orders: &[i64]) -> bool {
    y.iter().zip(orders).all(|(&c, &o)| (c * n) % o == 0)
}

pub(crate) fn enumerate_group(orders: &[i64]) -> Vec<Element> {
    let total: i64 = orders.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0i64; orders.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for (c, &o) in cur.iter_mut().zip(orders).rev() {
            *c += 1;
            if *c < o {
                break;
            }
            *c = 0;
        }
    }
    out
}
