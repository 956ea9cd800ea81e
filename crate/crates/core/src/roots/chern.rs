//! Second Chern classes of representations and the decomposable subgroup.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::character::{to_lattice_monomials, CharacterLattice, InvariantForms, WeylAction};
use super::sym2::{sym2_dim, sym2_product};
use crate::error::{Error, Result};
use crate::exactlin::matrix::bigvec;
use crate::exactlin::{IntMatrix, Lattice};

/// Weights of a representation of a split torus, in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMultiset {
    pub weights: Vec<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    #[serde(with = "bigvec")]
    pub vector: Vec<BigInt>,
    pub multiplicity: u64,
}

impl WeightMultiset {
    pub fn new(weights: Vec<(Vec<BigInt>, u64)>) -> Result<Self> {
        let rank = weights.first().map(|(v, _)| v.len()).unwrap_or(0);
        if let Some((v, _)) = weights.iter().find(|(v, _)| v.len() != rank) {
            return Err(Error::Dimension {
                expected: rank,
                got: v.len(),
            });
        }
        if weights.iter().map(|(_, m)| m).sum::<u64>() == 0 {
            return Err(Error::Input("a weight multiset needs total multiplicity at least 1".into()));
        }
        Ok(WeightMultiset {
            weights: weights
                .into_iter()
                .filter(|(_, m)| *m > 0)
                .map(|(vector, multiplicity)| Weight {
                    vector,
                    multiplicity,
                })
                .collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.weights[0].vector.len()
    }

    fn counts(&self) -> BTreeMap<Vec<BigInt>, u64> {
        let mut m = BTreeMap::new();
        for w in &self.weights {
            *m.entry(w.vector.clone()).or_insert(0) += w.multiplicity;
        }
        m
    }

    /// Sum of all weights with multiplicity.
    pub fn first_chern_class(&self) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); self.rank()];
        for w in &self.weights {
            for (acc, x) in s.iter_mut().zip(&w.vector) {
                *acc += x * BigInt::from(w.multiplicity);
            }
        }
        s
    }

    /// Whether every Weyl generator permutes the multiset.
    pub fn is_stable(&self, weyl: &WeylAction) -> Result<bool> {
        let counts = self.counts();
        for w in &weyl.generators {
            let mut moved = BTreeMap::new();
            for (v, m) in &counts {
                *moved.entry(w.mul_vec(v)?).or_insert(0) += m;
            }
            if moved != counts {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Second elementary symmetric function of the weights, over pairs of weight
/// instances, as ambient S^2 coefficients.
pub fn chern2_of_character(mult: &WeightMultiset, lattice: &CharacterLattice) -> Result<Vec<BigInt>> {
    let r = mult.rank();
    if r != lattice.ambient_rank {
        return Err(Error::Dimension {
            expected: lattice.ambient_rank,
            got: r,
        });
    }
    if let Some(w) = mult.weights.iter().find(|w| !lattice.lattice.contains(&w.vector)) {
        return Err(Error::Input(format!(
            "weight {} is not a character of the torus",
            super::sym2::format_linear(&w.vector, &lattice.coordinate_names)
        )));
    }
    if mult.first_chern_class().iter().any(|x| !x.is_zero()) {
        return Err(Error::Precondition("first Chern class of the weights is not zero".into()));
    }
    let mut out = vec![BigInt::zero(); sym2_dim(r)];
    let ws = &mult.weights;
    for (i, a) in ws.iter().enumerate() {
        let ma = BigInt::from(a.multiplicity);
        // C(m, 2) copies of a * a
        let same: BigInt = &ma * (&ma - BigInt::from(1)) / BigInt::from(2);
        if !same.is_zero() {
            add_scaled(&mut out, &sym2_product(&a.vector, &a.vector), &same);
        }
        for b in &ws[i + 1..] {
            let c = &ma * BigInt::from(b.multiplicity);
            add_scaled(&mut out, &sym2_product(&a.vector, &b.vector), &c);
        }
    }
    Ok(out)
}

fn add_scaled(acc: &mut [BigInt], v: &[BigInt], c: &BigInt) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += x * c;
        }
    }
}

/// How a preset specifies the image of the second Chern class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecGenerators {
    /// Representations given by their weights; `c_2` of each is computed.
    Weights { multisets: Vec<WeightMultiset> },
    /// Ambient S^2 coefficient vectors taken as given.
    Explicit {
        #[serde(with = "bigvec::nested")]
        forms: Vec<Vec<BigInt>>,
    },
}

/// The decomposable subgroup, in lattice monomials, together with its
/// generators in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecSubgroup {
    pub lattice: Lattice,
    #[serde(with = "bigvec::nested")]
    pub ambient_generators: Vec<Vec<BigInt>>,
}

pub fn dec_subgroup(
    generators: &DecGenerators,
    lattice: &CharacterLattice,
    weyl: &WeylAction,
    invariants: &InvariantForms,
) -> Result<DecSubgroup> {
    let ambient_generators = match generators {
        DecGenerators::Weights { multisets } => multisets
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if !m.is_stable(weyl)? {
                    return Err(Error::Inconsistency(format!(
                        "weight multiset #{k} is not Weyl-stable"
                    )));
                }
                chern2_of_character(m, lattice)
            })
            .collect::<Result<Vec<_>>>()?,
        DecGenerators::Explicit { forms } => forms.clone(),
    };
    let n = invariants.lattice.ambient_rank();
    let mut coords = Vec::with_capacity(ambient_generators.len());
    for (k, g) in ambient_generators.iter().enumerate() {
        let c = to_lattice_monomials(invariants, g)?.ok_or_else(|| {
            Error::Inconsistency(format!("Dec generator #{k} is not a quadratic form on the lattice"))
        })?;
        coords.push(c);
    }
    let dec = Lattice::from_generators(n, coords)?;
    if !dec.is_sublattice_of(&invariants.lattice) {
        return Err(Error::Inconsistency(
            "Dec is not contained in the Weyl-invariant quadratic forms".into(),
        ));
    }
    Ok(DecSubgroup {
        lattice: dec,
        ambient_generators,
    })
}

/// Linear map sending lattice monomial coordinates to ambient S^2 coordinates.
pub fn to_ambient(invariants: &InvariantForms, coords: &[BigInt]) -> Result<Vec<BigInt>> {
    let m: &IntMatrix = &invariants.to_ambient;
    m.mul_vec(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::vec_from_i64;

    fn full(n: usize) -> CharacterLattice {
        CharacterLattice::new((1..=n).map(|i| format!("x{i}")).collect(), Lattice::full(n)).unwrap()
    }

    #[test]
    fn opposite_pair() {
        let m = WeightMultiset::new(vec![(vec_from_i64(&[2, 0]), 1), (vec_from_i64(&[-2, 0]), 1)])
            .unwrap();
        assert_eq!(chern2_of_character(&m, &full(2)).unwrap(), vec_from_i64(&[-4, 0, 0]));
    }

    #[test]
    fn multiplicities_count_instances() {
        // {v, v, -2v}: e2 = v^2 - 2v^2 - 2v^2 = -3v^2
        let m = WeightMultiset::new(vec![(vec_from_i64(&[1]), 2), (vec_from_i64(&[-2]), 1)]).unwrap();
        assert_eq!(chern2_of_character(&m, &full(1)).unwrap(), vec_from_i64(&[-3]));
    }

    #[test]
    fn rejects_nonzero_first_class() {
        let m = WeightMultiset::new(vec![(vec_from_i64(&[1]), 1)]).unwrap();
        assert!(matches!(
            chern2_of_character(&m, &full(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rejects_weights_outside_lattice() {
        let l = CharacterLattice::new(vec!["x".into()], Lattice::from_i64(1, &[&[2]]).unwrap()).unwrap();
        let m = WeightMultiset::new(vec![(vec_from_i64(&[1]), 1), (vec_from_i64(&[-1]), 1)]).unwrap();
        assert!(chern2_of_character(&m, &l).unwrap_err().is_input());
    }
}
