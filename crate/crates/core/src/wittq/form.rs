//! Diagonal quadratic forms over Q and their complete invariants.
//!
//! Isometry over Q is decided by dimension, signed discriminant, Hasse
//! symbols at every place and signature (the classification of forms over
//! number fields). Membership in `I^4` for a form already in `I^3` is read off
//! the signature modulo 16, since the real place carries all of `H^3(Q)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::square::{hilbert_symbol, Place, SquareClass};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagonalForm {
    pub entries: Vec<SquareClass>,
}

impl DiagonalForm {
    pub fn new(entries: Vec<SquareClass>) -> Self {
        DiagonalForm { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        Ok(DiagonalForm {
            entries: entries.iter().map(|&e| SquareClass::from_i64(e)).collect::<Result<_>>()?,
        })
    }

    pub fn zero() -> Self {
        DiagonalForm { entries: Vec::new() }
    }

    /// `m` copies of `<1, -1>`.
    pub fn hyperbolic(m: usize) -> Self {
        let mut entries = Vec::with_capacity(2 * m);
        for _ in 0..m {
            entries.push(SquareClass::one());
            entries.push(SquareClass::minus_one());
        }
        DiagonalForm { entries }
    }

    /// `<<a_1, ..., a_k>> = <1, -a_1> (x) ... (x) <1, -a_k>`.
    pub fn pfister(slots: &[SquareClass]) -> Self {
        let mut entries = vec![SquareClass::one()];
        for a in slots {
            let neg = a.neg();
            let scaled: Vec<SquareClass> = entries.iter().map(|e| e.mul(&neg)).collect();
            entries.extend(scaled);
        }
        DiagonalForm { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn orth(&self, other: &DiagonalForm) -> DiagonalForm {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        DiagonalForm { entries }
    }

    pub fn neg(&self) -> DiagonalForm {
        self.scale(&SquareClass::minus_one())
    }

    pub fn scale(&self, q: &SquareClass) -> DiagonalForm {
        DiagonalForm {
            entries: self.entries.iter().map(|e| e.mul(q)).collect(),
        }
    }

    /// Orthogonal sum of forms.
    pub fn sum<'a>(forms: impl IntoIterator<Item = &'a DiagonalForm>) -> DiagonalForm {
        forms
            .into_iter()
            .fold(DiagonalForm::zero(), |acc, f| acc.orth(f))
    }

    /// `{inf, 2}` and the odd primes dividing some entry.
    pub fn relevant_places(&self) -> BTreeSet<Place> {
        let mut places = BTreeSet::from([Place::Infinity, Place::Prime(2)]);
        for e in &self.entries {
            places.extend(e.primes().iter().map(|&p| Place::Prime(p)));
        }
        places
    }

    pub fn signature(&self) -> i64 {
        self.entries.iter().map(SquareClass::sign).sum()
    }

    /// `(-1)^{m(m-1)/2} prod a_i`.
    pub fn signed_discriminant(&self) -> SquareClass {
        let m = self.dim();
        let d = self
            .entries
            .iter()
            .fold(SquareClass::one(), |acc, e| acc.mul(e));
        if (m * m.saturating_sub(1) / 2) % 2 == 1 {
            d.neg()
        } else {
            d
        }
    }

    /// `prod_{i<j} (a_i, a_j)_v`.
    pub fn hasse(&self, place: Place) -> Result<i8> {
        let mut s = 1;
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                s *= hilbert_symbol(a, b, place)?;
            }
        }
        Ok(s)
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfisterSpec {
    pub slots: Vec<SquareClass>,
}

impl PfisterSpec {
    pub fn expand(&self) -> DiagonalForm {
        DiagonalForm::pfister(&self.slots)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittInvariants {
    pub dimension: usize,
    pub signed_discriminant: SquareClass,
    pub hasse: BTreeMap<Place, i8>,
    pub signature: i64,
}

/// Invariants of `f`, with Hasse symbols at its relevant places plus `extra`.
pub fn witt_invariants_at(f: &DiagonalForm, extra: &BTreeSet<Place>) -> Result<WittInvariants> {
    let mut places = f.relevant_places();
    places.extend(extra.iter().copied());
    let hasse = places
        .into_iter()
        .map(|v| Ok((v, f.hasse(v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(WittInvariants {
        dimension: f.dim(),
        signed_discriminant: f.signed_discriminant(),
        hasse,
        signature: f.signature(),
    })
}

pub fn witt_invariants(f: &DiagonalForm) -> Result<WittInvariants> {
    witt_invariants_at(f, &BTreeSet::new())
}

/// Isometry over Q by the complete invariant set.
pub fn isometric(f: &DiagonalForm, g: &DiagonalForm) -> Result<bool> {
    if f.dim() != g.dim() {
        return Ok(false);
    }
    let mut places = f.relevant_places();
    places.extend(g.relevant_places());
    Ok(witt_invariants_at(f, &places)? == witt_invariants_at(g, &places)?)
}

pub fn is_hyperbolic(f: &DiagonalForm) -> Result<bool> {
    if f.dim() % 2 == 1 {
        return Ok(false);
    }
    isometric(f, &DiagonalForm::hyperbolic(f.dim() / 2))
}

/// Whether `f` and `g` have the same class in the Witt ring of Q.
pub fn witt_equivalent(f: &DiagonalForm, g: &DiagonalForm) -> Result<bool> {
    is_hyperbolic(&f.orth(&g.neg()))
}

/// Membership of the Witt class of `f` in `I^n`, for `1 <= n <= 4`.
pub fn in_power_of_i(f: &DiagonalForm, n: u32) -> Result<bool> {
    if !(1..=4).contains(&n) {
        return Err(Error::Input(format!("I^{n} membership is supported for n in 1..=4")));
    }
    if f.dim() % 2 == 1 {
        return Ok(false);
    }
    if n >= 2 && !f.signed_discriminant().is_one() {
        return Ok(false);
    }
    if n >= 3 {
        let h = DiagonalForm::hyperbolic(f.dim() / 2);
        let places = f.relevant_places();
        for &v in &places {
            if f.hasse(v)? != h.hasse(v)? {
                return Ok(false);
            }
        }
    }
    if n >= 4 && f.signature().rem_euclid(16) != 0 {
        return Ok(false);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(e: &[i64]) -> DiagonalForm {
        DiagonalForm::from_i64(e).unwrap()
    }

    fn sc(v: i64) -> SquareClass {
        SquareClass::from_i64(v).unwrap()
    }

    #[test]
    fn pfister_expansion() {
        assert_eq!(DiagonalForm::pfister(&[sc(2), sc(3)]), f(&[1, -2, -3, 6]));
        let p = DiagonalForm::pfister(&[sc(-1), sc(-1), sc(-1)]);
        assert_eq!(p.dim(), 8);
        assert_eq!(p.signature(), 8);
    }

    #[test]
    fn invariants_of_small_forms() {
        let h = witt_invariants(&f(&[1, -1])).unwrap();
        assert_eq!(h.dimension, 2);
        assert!(h.signed_discriminant.is_one());
        assert_eq!(h.signature, 0);
        let p = witt_invariants(&DiagonalForm::pfister(&[sc(-1), sc(-1)])).unwrap();
        assert_eq!(p.signature, 4);
        assert_eq!(p.hasse[&Place::Infinity], 1);
        assert!(p.signed_discriminant.is_one());
    }

    #[test]
    fn equivalences() {
        assert!(witt_equivalent(&f(&[2, 3]), &f(&[2, 3])).unwrap());
        assert!(!witt_equivalent(&f(&[1, 1]), &f(&[1, -1])).unwrap());
        // <1, 1> and <2, 2> are isometric over Q
        assert!(isometric(&f(&[1, 1]), &f(&[2, 2])).unwrap());
        assert!(!isometric(&f(&[1, 1]), &f(&[3, 3])).unwrap());
        assert!(witt_equivalent(&f(&[5, -5, 7]), &f(&[7])).unwrap());
        assert!(!witt_equivalent(&f(&[5]), &f(&[1, 2])).unwrap());
    }

    #[test]
    fn powers_of_i() {
        for n in 1..=4 {
            assert!(in_power_of_i(&f(&[1, -1]), n).unwrap());
        }
        assert!(in_power_of_i(&DiagonalForm::pfister(&[sc(2), sc(3), sc(5)]), 3).unwrap());
        let p = DiagonalForm::pfister(&[sc(-1), sc(-1), sc(-1)]);
        assert!(in_power_of_i(&p, 3).unwrap());
        assert!(!in_power_of_i(&p, 4).unwrap());
        assert!(!in_power_of_i(&f(&[1, 1]), 2).unwrap());
        assert!(in_power_of_i(&f(&[1, 1]), 1).unwrap());
        assert!(in_power_of_i(&f(&[1]), 5).is_err());
    }
}
