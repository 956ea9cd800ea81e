use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{round_div, IntMatrix};
use crate::error::{Error, Result};

/// `u * source * v == d` with `u`, `v` unimodular and `d` in Smith form.
///
/// `u_inv` is carried along so that quotient generators can be read off
/// without inverting `u` afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    pub source: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Re-checks every defining property from the stored matrices alone.
    pub fn verify(&self) -> Result<()> {
        let (m, n) = (self.source.rows(), self.source.cols());
        let shape_ok = self.u.rows() == m
            && self.u.cols() == m
            && self.u_inv.rows() == m
            && self.u_inv.cols() == m
            && self.v.rows() == n
            && self.v.cols() == n
            && self.d.rows() == m
            && self.d.cols() == n;
        if !shape_ok {
            return Err(Error::Inconsistency("smith decomposition has wrong shape".into()));
        }
        if self.u.mul(&self.source)?.mul(&self.v)? != self.d {
            return Err(Error::Inconsistency("U * A * V != D".into()));
        }
        if self.u.mul(&self.u_inv)? != IntMatrix::identity(m) {
            return Err(Error::Inconsistency("U * U^-1 != I".into()));
        }
        for (name, t) in [("U", &self.u), ("V", &self.v)] {
            if t.determinant()?.abs() != BigInt::one() {
                return Err(Error::Inconsistency(format!("{name} is not unimodular")));
            }
        }
        if !self.d.is_diagonal() {
            return Err(Error::Inconsistency("D is not diagonal".into()));
        }
        let diag = self.d.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return Err(Error::Inconsistency("negative diagonal entry".into()));
        }
        for w in diag.windows(2) {
            if w[0].is_zero() && !w[1].is_zero() {
                return Err(Error::Inconsistency("zeros are not trailing".into()));
            }
            if !w[0].is_zero() && !w[1].is_multiple_of(&w[0]) {
                return Err(Error::Inconsistency("divisibility chain broken".into()));
            }
        }
        Ok(())
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    /// row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for mat in [&mut self.a, &mut self.u] {
            let (src, dst) = pick(mat, t, i);
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
        // inverse: col_t += q * col_i
        for row in &mut self.u_inv {
            let add = q * &row[i];
            row[t] += add;
        }
    }

    /// col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                if !row[t].is_zero() {
                    let sub = q * &row[t];
                    row[j] -= sub;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
        for row in &mut self.u_inv {
            row[i] = -&row[i];
        }
    }
}

fn pick(mat: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = mat.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = mat.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Smith normal form with explicit unimodular transforms.
///
/// Pivots are chosen by least absolute value in the remaining block and
/// reductions use nearest-integer quotients.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.row_vecs(),
        u: identity_rows(rows),
        u_inv: identity_rows(rows),
        v: identity_rows(cols),
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(m, w);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let pivot = w.a[t][t].clone();
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = round_div(&w.a[i][t], &pivot);
                    w.row_axpy(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = round_div(&w.a[t][j], &pivot);
                    w.col_axpy(j, t, &q);
                }
            }
            let dirty = (t + 1..rows).any(|i| !w.a[i][t].is_zero())
                || (t + 1..cols).any(|j| !w.a[t][j].is_zero());
            if dirty {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into row t
                    w.row_axpy(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    finish(m, w)
}

fn finish(m: &IntMatrix, w: Work) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = w;
    for t in 0..rows.min(cols) {
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    SmithDecomposition {
        source: m.clone(),
        u: IntMatrix::from_rows(rows, &w.u).expect("square"),
        u_inv: IntMatrix::from_rows(rows, &w.u_inv).expect("square"),
        d: IntMatrix::from_rows(cols, &w.a).expect("shape"),
        v: IntMatrix::from_rows(cols, &w.v).expect("square"),
    }
}
