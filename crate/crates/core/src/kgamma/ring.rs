//! `Z[x_1..x_n] / ((x_1 - 1)^{d_1}, ..., (x_n - 1)^{d_n})`, the K_0 of a split
//! product of projective spaces.
//!
//! Elements are stored in the y-monomial basis (`y_j = x_j - 1`), where the
//! relations read `y_j^{d_j} = 0` and multiplication is exponent addition
//! with truncation. The x-monomial basis is reachable through
//! [`TruncatedPolyRing::to_x`] and [`TruncatedPolyRing::from_x`]; both
//! directions are unitriangular integer transforms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::matrix::bigvec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPolyRing {
    degrees: Vec<usize>,
    rank: usize,
    exponents: Vec<Vec<usize>>,
    mul_table: Vec<Option<usize>>,
}

/// An element of a [`TruncatedPolyRing`], as y-monomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    #[serde(with = "bigvec")]
    coeffs: Vec<BigInt>,
}

impl TruncatedPolyRing {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::Input("at least one factor is required".into()));
        }
        if let Some(d) = degrees.iter().find(|&&d| d < 2) {
            return Err(Error::Input(format!("factor degree {d} must be at least 2")));
        }
        let rank: usize = degrees.iter().product();
        if rank > 4096 {
            return Err(Error::Input(format!("ring rank {rank} is too large")));
        }
        let exponents: Vec<Vec<usize>> = (0..rank).map(|i| decode(&degrees, i)).collect();
        let mut mul_table = vec![None; rank * rank];
        for i in 0..rank {
            for j in 0..rank {
                let sum: Vec<usize> = exponents[i]
                    .iter()
                    .zip(&exponents[j])
                    .map(|(a, b)| a + b)
                    .collect();
                if sum.iter().zip(&degrees).all(|(s, d)| s < d) {
                    mul_table[i * rank + j] = Some(encode(&degrees, &sum));
                }
            }
        }
        Ok(TruncatedPolyRing {
            degrees,
            rank,
            exponents,
            mul_table,
        })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn factors(&self) -> usize {
        self.degrees.len()
    }

    /// Number of monomials, i.e. the rank of the ring as a Z-module.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `sum (d_j - 1)`, the dimension of the product of projective spaces.
    pub fn dimension(&self) -> usize {
        self.degrees.iter().map(|d| d - 1).sum()
    }

    pub fn exponents(&self, index: usize) -> &[usize] {
        &self.exponents[index]
    }

    pub fn index_of(&self, exps: &[usize]) -> Option<usize> {
        (exps.len() == self.degrees.len() && exps.iter().zip(&self.degrees).all(|(e, d)| e < d))
            .then(|| encode(&self.degrees, exps))
    }

    pub fn total_degree(&self, index: usize) -> usize {
        self.exponents[index].iter().sum()
    }

    /// Monomial indices of total degree `d`.
    pub fn monomials_of_degree(&self, d: usize) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.total_degree(i) == d).collect()
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            coeffs: vec![BigInt::zero(); self.rank],
        }
    }

    pub fn one(&self) -> RingElement {
        self.monomial(0, BigInt::one())
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> RingElement {
        self.monomial(0, c.into())
    }

    pub fn monomial(&self, index: usize, coeff: BigInt) -> RingElement {
        let mut e = self.zero();
        e.coeffs[index] = coeff;
        e
    }

    /// `y_j` (zero-based `j`).
    pub fn y(&self, j: usize) -> RingElement {
        let mut exps = vec![0; self.factors()];
        exps[j] = 1;
        self.monomial(self.index_of(&exps).expect("d_j >= 2"), BigInt::one())
    }

    /// `x_j = 1 + y_j` (zero-based `j`).
    pub fn x(&self, j: usize) -> RingElement {
        self.add(&self.one(), &self.y(j))
    }

    /// y-monomial with the given exponents and coefficient; zero when truncated.
    pub fn y_monomial(&self, exps: &[usize], coeff: impl Into<BigInt>) -> RingElement {
        match self.index_of(exps) {
            Some(i) => self.monomial(i, coeff.into()),
            None => self.zero(),
        }
    }

    /// x-monomial `x^exps`, reduced by the relations.
    pub fn x_monomial(&self, exps: &[usize], coeff: impl Into<BigInt>) -> RingElement {
        let mut acc = self.constant(coeff);
        for (j, &e) in exps.iter().enumerate() {
            let xj = self.x(j);
            for _ in 0..e {
                acc = self.mul(&acc, &xj);
            }
        }
        acc
    }

    pub fn element(&self, coeffs: Vec<BigInt>) -> Result<RingElement> {
        if coeffs.len() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                got: coeffs.len(),
            });
        }
        Ok(RingElement { coeffs })
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, a: &RingElement, c: &BigInt) -> RingElement {
        RingElement {
            coeffs: a.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = vec![BigInt::zero(); self.rank];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let row = &self.mul_table[i * self.rank..(i + 1) * self.rank];
            for (bj, slot) in b.coeffs.iter().zip(row) {
                if let (false, Some(k)) = (bj.is_zero(), slot) {
                    out[*k] += ai * bj;
                }
            }
        }
        RingElement { coeffs: out }
    }

    pub fn pow(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The rank homomorphism `K_0 -> Z` (the constant y-coefficient).
    pub fn rank_of(&self, a: &RingElement) -> BigInt {
        a.coeffs[0].clone()
    }

    /// Smallest total degree of a y-monomial with nonzero coefficient.
    pub fn y_order(&self, a: &RingElement) -> Option<usize> {
        a.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.total_degree(i))
            .min()
    }

    /// Coefficients in the x-monomial basis.
    pub fn to_x(&self, a: &RingElement) -> Vec<BigInt> {
        // y^k = prod (x_j - 1)^{k_j} = sum_{i <= k} prod C(k_j, i_j) (-1)^{k_j - i_j} x^i
        self.change_basis(a.coeffs(), true)
    }

    /// Element from x-monomial coefficients.
    pub fn from_x(&self, coeffs: &[BigInt]) -> Result<RingElement> {
        if coeffs.len() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                got: coeffs.len(),
            });
        }
        // x^i = prod (1 + y_j)^{i_j} = sum_{k <= i} prod C(i_j, k_j) y^k
        Ok(RingElement {
            coeffs: self.change_basis(coeffs, false),
        })
    }

    pub fn coefficients(&self, a: &RingElement, basis: Basis) -> Vec<BigInt> {
        match basis {
            Basis::Y => a.coeffs.clone(),
            Basis::X => self.to_x(a),
        }
    }

    fn change_basis(&self, src: &[BigInt], alternating: bool) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rank];
        for (k, c) in src.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let top = &self.exponents[k];
            for (i, out_i) in out.iter_mut().enumerate() {
                let low = &self.exponents[i];
                if low.iter().zip(top).any(|(l, t)| l > t) {
                    continue;
                }
                let mut term = c.clone();
                for (l, t) in low.iter().zip(top) {
                    term *= binomial(*t as u64, *l as u64);
                    if alternating && (t - l) % 2 == 1 {
                        term = -term;
                    }
                }
                *out_i += term;
            }
        }
        out
    }

    /// Human-readable y-polynomial, highest degree first.
    pub fn format(&self, a: &RingElement) -> String {
        let mut idx: Vec<usize> = (0..self.rank).filter(|&i| !a.coeffs[i].is_zero()).collect();
        if idx.is_empty() {
            return "0".into();
        }
        idx.sort_by_key(|&i| (std::cmp::Reverse(self.total_degree(i)), i));
        let mut out = String::new();
        for (n, &i) in idx.iter().enumerate() {
            let c = &a.coeffs[i];
            let mono = self.format_monomial(i);
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&mag.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => out.push_str(&format!("{mag}*{mono}")),
            }
        }
        out
    }

    fn format_monomial(&self, i: usize) -> String {
        self.exponents[i]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                if e == 1 {
                    format!("y{}", j + 1)
                } else {
                    format!("y{}^{}", j + 1, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl RingElement {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn decode(degrees: &[usize], mut index: usize) -> Vec<usize> {
    let mut exps = vec![0; degrees.len()];
    for j in (0..degrees.len()).rev() {
        exps[j] = index % degrees[j];
        index /= degrees[j];
    }
    exps
}

fn encode(degrees: &[usize], exps: &[usize]) -> usize {
    exps.iter().zip(degrees).fold(0, |acc, (e, d)| acc * d + e)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `c (c-1) ... (c-k+1) / k!` for any integer `c`.
pub fn generalized_binomial(c: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= c - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}
