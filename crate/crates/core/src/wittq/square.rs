//! Square classes of Q and local Hilbert symbols.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Q^* / Q^*2`, represented by a squarefree integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    negative: bool,
    /// Sorted, distinct.
    primes: Vec<u64>,
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass {
            negative: false,
            primes: Vec::new(),
        }
    }

    pub fn minus_one() -> Self {
        SquareClass {
            negative: true,
            primes: Vec::new(),
        }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        if v == 0 {
            return Err(Error::Input("zero has no square class".into()));
        }
        Ok(SquareClass {
            negative: v < 0,
            primes: odd_multiplicity_primes(v.unsigned_abs()),
        })
    }

    /// Class of `num / den`.
    pub fn from_rational(num: &BigInt, den: &BigInt) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::Input("square classes need nonzero rationals".into()));
        }
        let to_u64 = |x: &BigInt| {
            x.abs()
                .to_u64()
                .ok_or_else(|| Error::Input(format!("{x} exceeds the supported range")))
        };
        let p = SquareClass {
            negative: num.is_negative() != den.is_negative(),
            primes: odd_multiplicity_primes(to_u64(num)?),
        };
        Ok(p.mul(&SquareClass {
            negative: false,
            primes: odd_multiplicity_primes(to_u64(den)?),
        }))
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        // symmetric difference of the sorted prime lists
        let (a, b) = (&self.primes, &other.primes);
        let (mut i, mut j) = (0, 0);
        let mut primes = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    primes.push(*x);
                    i += 1;
                }
                (Some(x), None) => {
                    primes.push(*x);
                    i += 1;
                }
                (_, Some(y)) => {
                    primes.push(*y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SquareClass {
            negative: self.negative != other.negative,
            primes,
        }
    }

    pub fn neg(&self) -> SquareClass {
        SquareClass {
            negative: !self.negative,
            primes: self.primes.clone(),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The squarefree integer representative.
    pub fn value(&self) -> BigInt {
        let v: BigInt = self.primes.iter().map(|&p| BigInt::from(p)).product();
        if self.negative {
            -v
        } else {
            v
        }
    }

    fn valuation(&self, p: u64) -> u32 {
        self.primes.binary_search(&p).is_ok() as u32
    }

    /// The representative with `p` divided out, reduced modulo `m`.
    fn unit_part_mod(&self, p: u64, m: u64) -> u64 {
        let mut r: u64 = if self.negative { m - 1 } else { 1 % m };
        for &q in &self.primes {
            if q != p {
                r = ((r as u128 * (q % m) as u128) % m as u128) as u64;
            }
        }
        r
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for SquareClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.value().to_string())
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses `"n"` or `"n/d"` into its square class.
pub fn parse_rational(s: &str) -> Result<SquareClass> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let parse = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| Error::Input(format!("'{s}' is not a rational number")))
    };
    SquareClass::from_rational(&parse(n)?, &parse(d)?)
}

/// Primes dividing `n` to an odd power, by trial division.
fn odd_multiplicity_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut strip = |n: &mut u64, p: u64| {
        let mut k = 0;
        while n.is_multiple_of(p) {
            *n /= p;
            k += 1;
        }
        if k % 2 == 1 {
            out.push(p);
        }
    };
    strip(&mut n, 2);
    let mut p = 3;
    while p * p <= n {
        strip(&mut n, p);
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::Input(format!("{p} is not a prime, so not a place of Q")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "oo" => Ok(Place::Infinity),
            _ => s
                .parse::<u64>()
                .map_err(|_| Error::Input(format!("'{s}' is not a place")))
                .and_then(Place::prime),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut r = 1u128 % m;
    let mut b = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Legendre symbol `(u / p)` for odd prime `p` not dividing `u`.
fn legendre(u: u64, p: u64) -> i8 {
    if pow_mod(u, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `(a, b)_v`: `+1` when `z^2 = a x^2 + b y^2` has a nontrivial solution over `Q_v`.
pub fn hilbert_symbol(a: &SquareClass, b: &SquareClass, place: Place) -> Result<i8> {
    match place {
        Place::Infinity => Ok(if a.negative && b.negative { -1 } else { 1 }),
        Place::Prime(p) if !is_prime(p) => Err(Error::Input(format!("{p} is not a prime"))),
        Place::Prime(2) => {
            let (alpha, beta) = (a.valuation(2), b.valuation(2));
            let u = a.unit_part_mod(2, 8);
            let v = b.unit_part_mod(2, 8);
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(v) + alpha as u64 * omega(v) + beta as u64 * omega(u);
            Ok(if e.is_multiple_of(2) { 1 } else { -1 })
        }
        Place::Prime(p) => {
            let (alpha, beta) = (a.valuation(p), b.valuation(p));
            let u = a.unit_part_mod(p, p);
            let v = b.unit_part_mod(p, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(v, p);
            }
            Ok(s)
        }
    }
}

impl SquareClass {
    /// Sign as an integer, for signature computations.
    pub fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn from_big(v: &BigInt) -> Result<Self> {
        Self::from_rational(v, &BigInt::one())
    }
}
