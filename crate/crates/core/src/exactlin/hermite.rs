//! Incremental Hermite normal form of the lattice spanned by a stream of
//! integer vectors.
//!
//! Rows are kept in echelon form with strictly increasing pivot columns and
//! positive pivots. After [`HermiteAccumulator::normalize`], every entry above
//! a pivot lies in `[0, pivot)`, which makes the basis unique for the lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug)]
pub struct HermiteAccumulator {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl HermiteAccumulator {
    pub fn new(dim: usize) -> Self {
        HermiteAccumulator {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<I>(dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        let mut acc = Self::new(dim);
        for v in vectors {
            acc.insert(v);
        }
        acc.normalize();
        acc
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the spanning set. Returns true when the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice dimension");
        let mut grew = false;
        let mut start = 0;
        loop {
            let Some(col) = (start..self.dim).find(|&c| !v[c].is_zero()) else {
                if grew {
                    self.normalize();
                }
                return grew;
            };
            match self.pivots.binary_search(&col) {
                Err(pos) => {
                    if v[col].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows.insert(pos, v);
                    self.pivots.insert(pos, col);
                    self.normalize();
                    return true;
                }
                Ok(pos) => {
                    let a = self.rows[pos][col].clone();
                    let b = v[col].clone();
                    if b.is_multiple_of(&a) {
                        let q = &b / &a;
                        sub_scaled(&mut v, &self.rows[pos], &q);
                    } else {
                        let ext = a.extended_gcd(&b);
                        let (g, s, t) = (ext.gcd, ext.x, ext.y);
                        let bg = &b / &g;
                        let ag = &a / &g;
                        let row = &self.rows[pos];
                        let new_row: Vec<BigInt> =
                            row.iter().zip(&v).map(|(r, x)| &s * r + &t * x).collect();
                        let new_v: Vec<BigInt> =
                            row.iter().zip(&v).map(|(r, x)| &bg * r - &ag * x).collect();
                        let mut new_row = new_row;
                        if new_row[col].is_negative() {
                            new_row.iter_mut().for_each(|x| *x = -&*x);
                        }
                        self.rows[pos] = new_row;
                        v = new_v;
                        grew = true;
                    }
                    start = col + 1;
                }
            }
        }
    }

    /// Reduces entries above each pivot into `[0, pivot)`.
    pub fn normalize(&mut self) {
        for j in 0..self.rows.len() {
            let pc = self.pivots[j];
            let (upper, lower) = self.rows.split_at_mut(j);
            let pivot_row = &lower[0];
            let p = &pivot_row[pc];
            for row in upper.iter_mut() {
                let q = row[pc].div_floor(p);
                if !q.is_zero() {
                    sub_scaled(row, pivot_row, &q);
                }
            }
        }
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the current echelon basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if rest[..pc].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = rest[pc].div_rem(&row[pc]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                sub_scaled(&mut rest, row, &q);
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Basis vectors as the columns of a `dim x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.rows).expect("consistent row lengths")
    }
}

fn sub_scaled(target: &mut [BigInt], row: &[BigInt], q: &BigInt) {
    for (t, r) in target.iter_mut().zip(row) {
        if !r.is_zero() {
            *t -= q * r;
        }
    }
}
