//! Second symmetric power in the monomial basis `e_i e_j`, `i <= j`,
//! ordered lexicographically.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::matrix::bigvec;
use crate::exactlin::IntMatrix;

pub fn sym2_dim(r: usize) -> usize {
    r * (r + 1) / 2
}

/// Position of `e_i e_j` (either order).
pub fn sym2_index(r: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows before i hold r + (r - 1) + ... + (r - i + 1) monomials
    i * r - i * i.saturating_sub(1) / 2 + (j - i)
}

/// The monomial pair at a position.
pub fn sym2_pair(r: usize, index: usize) -> (usize, usize) {
    let mut rest = index;
    for i in 0..r {
        let len = r - i;
        if rest < len {
            return (i, i + rest);
        }
        rest -= len;
    }
    panic!("index {index} outside S^2 of rank {r}")
}

/// Polynomial product of two linear forms.
pub fn sym2_product(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let r = u.len();
    let mut out = vec![BigInt::zero(); sym2_dim(r)];
    for p in 0..r {
        if u[p].is_zero() && v[p].is_zero() {
            continue;
        }
        out[sym2_index(r, p, p)] += &u[p] * &v[p];
        for q in p + 1..r {
            let c = &u[p] * &v[q] + &u[q] * &v[p];
            if !c.is_zero() {
                out[sym2_index(r, p, q)] += c;
            }
        }
    }
    out
}

/// Matrix of `S^2(a)` for a linear map `a: Z^r -> Z^m` (columns are images of basis vectors).
pub fn sym2_map(a: &IntMatrix) -> IntMatrix {
    let (m, r) = (a.rows(), a.cols());
    let cols: Vec<Vec<BigInt>> = (0..sym2_dim(r))
        .map(|idx| {
            let (p, q) = sym2_pair(r, idx);
            sym2_product(&a.column(p), &a.column(q))
        })
        .collect();
    IntMatrix::from_columns(sym2_dim(m), &cols).expect("uniform column length")
}

/// An element of `S^2` of a lattice, as coefficients of the monomials `e_i e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadSpaceElement {
    pub lattice_rank: usize,
    #[serde(with = "bigvec")]
    pub coefficients: Vec<BigInt>,
}

impl QuadSpaceElement {
    pub fn new(lattice_rank: usize, coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.len() != sym2_dim(lattice_rank) {
            return Err(Error::Dimension {
                expected: sym2_dim(lattice_rank),
                got: coefficients.len(),
            });
        }
        Ok(QuadSpaceElement {
            lattice_rank,
            coefficients,
        })
    }

    pub fn zero(lattice_rank: usize) -> Self {
        QuadSpaceElement {
            lattice_rank,
            coefficients: vec![BigInt::zero(); sym2_dim(lattice_rank)],
        }
    }

    pub fn format(&self, names: &[String]) -> String {
        format_quadratic(&self.coefficients, names)
    }
}

/// Renders S^2 coefficients as a polynomial in the given variable names.
pub fn format_quadratic(coeffs: &[BigInt], names: &[String]) -> String {
    let r = names.len();
    let mut out = String::new();
    for (idx, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (i, j) = sym2_pair(r, idx);
        let mono = if i == j {
            format!("{}^2", names[i])
        } else {
            format!("{}*{}", names[i], names[j])
        };
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Renders a linear form in the given variable names.
pub fn format_linear(coeffs: &[BigInt], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
