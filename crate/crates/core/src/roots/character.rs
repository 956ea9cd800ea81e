//! Character lattices of maximal tori, Weyl actions and invariant quadratic forms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::sym2::{format_linear, sym2_dim, sym2_map};
use crate::error::{Error, Result};
use crate::exactlin::matrix::bigvec;
use crate::exactlin::{
    integer_kernel, lattice_membership, subquotient_structure, FinAbelianGroup, IntMatrix, Lattice,
    Membership,
};

/// A central subgroup `mu` of a split torus, given through the map of
/// character groups `Z^r -> mu^*`.
///
/// `mu^*` is presented as `(Z/n_1 + ... + Z/n_s) / <relations>` and the map
/// by an integer `s x r` matrix whose entries are read modulo the `n_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralQuotientDatum {
    pub ambient_rank: usize,
    pub mu_star: FinAbelianGroup,
    pub mu_map: IntMatrix,
    pub moduli: Vec<u64>,
    pub relations: Vec<Vec<i64>>,
}

impl CentralQuotientDatum {
    pub fn new(mu_map: IntMatrix, moduli: Vec<u64>, relations: Vec<Vec<i64>>) -> Result<Self> {
        let s = mu_map.rows();
        if moduli.len() != s {
            return Err(Error::Dimension {
                expected: s,
                got: moduli.len(),
            });
        }
        if let Some(r) = relations.iter().find(|r| r.len() != s) {
            return Err(Error::Dimension {
                expected: s,
                got: r.len(),
            });
        }
        let rel = Lattice::from_generators(s, Self::relation_columns(&moduli, &relations))?;
        let mu_star = subquotient_structure(&rel, &Lattice::full(s))?;
        let datum = CentralQuotientDatum {
            ambient_rank: mu_map.cols(),
            mu_star,
            mu_map,
            moduli,
            relations,
        };
        let image = datum.target_relations()?.sum(&Lattice::from_columns(&datum.mu_map)?)?;
        if image != Lattice::full(s) {
            return Err(Error::Config("the map onto mu^* is not surjective".into()));
        }
        Ok(datum)
    }

    fn relation_columns(moduli: &[u64], relations: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        let s = moduli.len();
        let mut cols: Vec<Vec<BigInt>> = (0..s)
            .map(|k| {
                (0..s)
                    .map(|i| if i == k { BigInt::from(moduli[k]) } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        cols.extend(relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()));
        cols
    }

    fn target_relations(&self) -> Result<Lattice> {
        Lattice::from_generators(
            self.moduli.len(),
            Self::relation_columns(&self.moduli, &self.relations),
        )
    }
}

/// A character lattice inside `Z^ambient_rank` together with names for the
/// ambient coordinates and a labelled basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterLattice {
    pub ambient_rank: usize,
    pub coordinate_names: Vec<String>,
    pub lattice: Lattice,
    pub named_basis: Vec<NamedVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedVector {
    pub label: String,
    #[serde(with = "bigvec")]
    pub vector: Vec<BigInt>,
}

impl CharacterLattice {
    pub fn new(coordinate_names: Vec<String>, lattice: Lattice) -> Result<Self> {
        if coordinate_names.len() != lattice.ambient_rank() {
            return Err(Error::Dimension {
                expected: lattice.ambient_rank(),
                got: coordinate_names.len(),
            });
        }
        let named_basis = lattice
            .basis()
            .iter()
            .map(|v| NamedVector {
                label: format_linear(v, &coordinate_names),
                vector: v.clone(),
            })
            .collect();
        Ok(CharacterLattice {
            ambient_rank: lattice.ambient_rank(),
            coordinate_names,
            lattice,
            named_basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Basis vectors as the columns of an `ambient x rank` matrix.
    pub fn basis_columns(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.named_basis.iter().map(|n| n.vector.clone()).collect();
        IntMatrix::from_columns(self.ambient_rank, &cols).expect("uniform length")
    }

    /// Coordinates of an ambient vector in the named basis, if it lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.lattice.coordinates(v)
    }

    pub fn labels(&self) -> Vec<String> {
        self.named_basis.iter().map(|n| n.label.clone()).collect()
    }
}

/// Kernel of `Z^r -> mu^*`.
pub fn character_lattice(
    datum: &CentralQuotientDatum,
    coordinate_names: Vec<String>,
) -> Result<CharacterLattice> {
    let r = datum.ambient_rank;
    let rel_cols = CentralQuotientDatum::relation_columns(&datum.moduli, &datum.relations);
    // kernel of [M | -R] projected to the first r coordinates
    let mut cols = datum.mu_map.column_vecs();
    cols.extend(rel_cols.iter().map(|c| c.iter().map(|x| -x).collect::<Vec<_>>()));
    let stacked = IntMatrix::from_columns(datum.mu_map.rows(), &cols)?;
    let kernel = integer_kernel(&stacked);
    let coords: Vec<usize> = (0..r).collect();
    CharacterLattice::new(coordinate_names, kernel.project(&coords))
}

/// Image of a character lattice under a map of ambient lattices.
pub fn project_to_semisimple(
    lattice: &CharacterLattice,
    projection: &IntMatrix,
    coordinate_names: Vec<String>,
) -> Result<CharacterLattice> {
    if projection.cols() != lattice.ambient_rank {
        return Err(Error::Dimension {
            expected: lattice.ambient_rank,
            got: projection.cols(),
        });
    }
    CharacterLattice::new(coordinate_names, lattice.lattice.image(projection)?)
}

/// Generators of a Weyl group acting on ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylAction {
    pub generators: Vec<IntMatrix>,
    pub order: Option<u64>,
}

impl WeylAction {
    pub fn trivial(rank: usize) -> Self {
        WeylAction {
            generators: vec![IntMatrix::identity(rank)],
            order: Some(1),
        }
    }

    /// The matrix of each generator in the basis of `lattice`.
    pub fn in_basis(&self, lattice: &CharacterLattice) -> Result<Vec<IntMatrix>> {
        let basis = lattice.basis_columns();
        let r = lattice.rank();
        let mut out = Vec::with_capacity(self.generators.len());
        for (g, w) in self.generators.iter().enumerate() {
            if w.rows() != lattice.ambient_rank || w.cols() != lattice.ambient_rank {
                return Err(Error::Dimension {
                    expected: lattice.ambient_rank,
                    got: w.cols(),
                });
            }
            let image = w.mul(&basis)?;
            let mut cols = Vec::with_capacity(r);
            for (j, col) in image.column_vecs().into_iter().enumerate() {
                let c = lattice.coordinates(&col).ok_or_else(|| {
                    Error::Precondition(format!(
                        "Weyl generator #{g} moves basis vector {} out of the lattice",
                        lattice.named_basis[j].label
                    ))
                })?;
                cols.push(c);
            }
            let a = IntMatrix::from_columns(r, &cols)?;
            if !a.determinant()?.abs().is_one() {
                return Err(Error::Precondition(format!(
                    "Weyl generator #{g} is not invertible on the lattice"
                )));
            }
            out.push(a);
        }
        Ok(out)
    }
}

/// The W-invariant part of `S^2` of a character lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantForms {
    /// In the monomials of the lattice basis.
    pub lattice: Lattice,
    /// Matrix of `S^2(basis)`: lattice monomials to ambient monomials.
    pub to_ambient: IntMatrix,
}

impl InvariantForms {
    pub fn ambient_lattice(&self) -> Result<Lattice> {
        self.lattice.image(&self.to_ambient)
    }
}

/// Kernel of the stacked `S^2(w) - 1` over the lattice monomials.
pub fn invariant_quadratic_lattice(
    lattice: &CharacterLattice,
    weyl: &WeylAction,
) -> Result<InvariantForms> {
    let r = lattice.rank();
    let n = sym2_dim(r);
    let mut current = Lattice::full(n);
    for a in weyl.in_basis(lattice)? {
        let mut m = sym2_map(&a);
        for i in 0..n {
            let d = m.get(i, i) - BigInt::one();
            m.set(i, i, d);
        }
        // restrict to the invariants found so far
        let basis = current.basis_matrix();
        let restricted = m.mul(&basis)?;
        let k = integer_kernel(&restricted);
        current = k.image(&basis)?;
    }
    Ok(InvariantForms {
        lattice: current,
        to_ambient: sym2_map(&lattice.basis_columns()),
    })
}

/// Coordinates, in lattice monomials, of an ambient quadratic form that is
/// integral on the lattice.
pub fn to_lattice_monomials(forms: &InvariantForms, ambient: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let s2 = Lattice::from_columns(&forms.to_ambient)?;
    match lattice_membership(ambient, &s2)? {
        Membership::Member { coordinates } => Ok(Some(coordinates)),
        Membership::NonMember { .. } => Ok(None),
    }
}
