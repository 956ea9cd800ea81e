//! Gamma operations on rank-zero elements.

use num_traits::Zero;

use super::ring::{generalized_binomial, RingElement, TruncatedPolyRing};
use crate::error::{Error, Result};

/// `gamma_0(a), ..., gamma_max(a)` for a rank-zero element `a`.
///
/// Writing `a = sum c_m (x^m - 1)` over x-monomials, the total gamma series is
/// `prod_m (1 + (x^m - 1) t)^{c_m}`, expanded with generalized binomial
/// coefficients so that negative `c_m` need no separate inversion step.
pub fn gamma_series(ring: &TruncatedPolyRing, a: &RingElement, max: usize) -> Result<Vec<RingElement>> {
    let rank = ring.rank_of(a);
    if !rank.is_zero() {
        return Err(Error::Precondition(format!(
            "gamma operations need a rank-zero element, got rank {rank}"
        )));
    }
    // terms past the dimension vanish because (x^m - 1) is nilpotent of that order
    let cap = max.min(ring.dimension());
    let mut series = vec![ring.zero(); cap + 1];
    series[0] = ring.one();
    let x_coeffs = ring.to_x(a);
    for (m, c) in x_coeffs.iter().enumerate().skip(1) {
        if c.is_zero() {
            continue;
        }
        let exps = ring.exponents(m).to_vec();
        let u = ring.sub(&ring.x_monomial(&exps, 1), &ring.one());
        let mut factor = Vec::with_capacity(cap + 1);
        let mut u_pow = ring.one();
        for k in 0..=cap {
            factor.push(ring.scale(&u_pow, &generalized_binomial(c, k as u64)));
            u_pow = ring.mul(&u_pow, &u);
        }
        series = mul_series(ring, &series, &factor);
    }
    series.resize(max + 1, ring.zero());
    Ok(series)
}

/// `gamma_d(a)` for a rank-zero element `a`.
pub fn gamma_op(ring: &TruncatedPolyRing, a: &RingElement, d: i64) -> Result<RingElement> {
    if d < 0 {
        return Err(Error::Input(format!("gamma degree must be non-negative, got {d}")));
    }
    let d = d as usize;
    if d > ring.dimension() {
        ring.rank_of(a)
            .is_zero()
            .then(|| ring.zero())
            .ok_or_else(|| Error::Precondition("gamma operations need a rank-zero element".into()))
    } else {
        Ok(gamma_series(ring, a, d)?.pop().expect("series has d + 1 terms"))
    }
}

/// Chern class `c_i(x) = gamma_i(x - rank(x))`.
pub fn chern_class(ring: &TruncatedPolyRing, x: &RingElement, i: i64) -> Result<RingElement> {
    let shifted = ring.sub(x, &ring.constant(ring.rank_of(x)));
    gamma_op(ring, &shifted, i)
}

pub(crate) fn mul_series(
    ring: &TruncatedPolyRing,
    a: &[RingElement],
    b: &[RingElement],
) -> Vec<RingElement> {
    let n = a.len().min(b.len());
    let mut out = vec![ring.zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if !bj.is_zero() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(ai, bj));
            }
        }
    }
    out
}
