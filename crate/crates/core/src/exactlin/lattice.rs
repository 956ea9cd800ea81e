use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::group::FinAbelianGroup;
use super::hermite::HermiteAccumulator;
use super::matrix::{bigint_str, bigvec, dot, IntMatrix};
use super::smith::{smith_normal_form, SmithDecomposition};
use crate::error::{Error, Result};

/// A sublattice of `Z^ambient_rank`, remembered both through the generators
/// it was built from and through its canonical Hermite basis.
#[derive(Clone)]
pub struct Lattice {
    ambient_rank: usize,
    generators: Vec<Vec<BigInt>>,
    hermite: HermiteAccumulator,
}

impl Lattice {
    pub fn from_generators(ambient_rank: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| g.len() != ambient_rank) {
            return Err(Error::Dimension {
                expected: ambient_rank,
                got: bad.len(),
            });
        }
        let generators: Vec<Vec<BigInt>> = generators
            .into_iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .collect();
        let hermite = HermiteAccumulator::from_vectors(ambient_rank, generators.iter().cloned());
        Ok(Lattice {
            ambient_rank,
            generators,
            hermite,
        })
    }

    pub fn from_i64(ambient_rank: usize, generators: &[&[i64]]) -> Result<Self> {
        Self::from_generators(
            ambient_rank,
            generators
                .iter()
                .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Lattice whose generators are the columns of `m`.
    pub fn from_columns(m: &IntMatrix) -> Result<Self> {
        Self::from_generators(m.rows(), m.column_vecs())
    }

    /// Builds directly from an accumulator; the Hermite basis doubles as the
    /// generator list.
    pub fn from_hermite(mut hermite: HermiteAccumulator) -> Self {
        hermite.normalize();
        Lattice {
            ambient_rank: hermite.dim(),
            generators: hermite.rows().to_vec(),
            hermite,
        }
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Self::from_hermite(HermiteAccumulator::new(ambient_rank))
    }

    pub fn full(ambient_rank: usize) -> Self {
        let gens = (0..ambient_rank)
            .map(|i| {
                (0..ambient_rank)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self::from_generators(ambient_rank, gens).expect("square identity")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.hermite.rank()
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient_rank, &self.generators).expect("consistent generators")
    }

    /// Canonical basis vectors (echelon, positive pivots, reduced above pivots).
    pub fn basis(&self) -> &[Vec<BigInt>] {
        self.hermite.rows()
    }

    /// Canonical basis as the columns of an `ambient_rank x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        self.hermite.basis_matrix()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient_rank && self.hermite.contains(v)
    }

    /// Coordinates of `v` in the canonical basis.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_rank {
            return None;
        }
        self.hermite.coordinates(v)
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient_rank == other.ambient_rank && self.basis().iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::Dimension {
                expected: self.ambient_rank,
                got: other.ambient_rank,
            });
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Lattice::from_generators(self.ambient_rank, gens)
    }

    /// Image under the linear map `m` (ambient_rank columns).
    pub fn image(&self, m: &IntMatrix) -> Result<Lattice> {
        let gens = self
            .generators
            .iter()
            .map(|g| m.mul_vec(g))
            .collect::<Result<Vec<_>>>()?;
        Lattice::from_generators(m.rows(), gens)
    }

    /// Restriction to a set of coordinates (a coordinate projection).
    pub fn project(&self, coords: &[usize]) -> Lattice {
        let gens = self
            .basis()
            .iter()
            .map(|b| coords.iter().map(|&c| b[c].clone()).collect())
            .collect();
        Lattice::from_generators(coords.len(), gens).expect("projected lengths agree")
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.basis() == other.basis()
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .basis()
            .iter()
            .map(|b| b.iter().map(ToString::to_string).collect())
            .collect();
        f.debug_struct("Lattice")
            .field("ambient_rank", &self.ambient_rank)
            .field("basis", &rows)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    ambient_rank: usize,
    #[serde(with = "bigvec::nested")]
    basis: Vec<Vec<BigInt>>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr {
            ambient_rank: self.ambient_rank,
            basis: self.basis().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LatticeRepr::deserialize(d)?;
        Lattice::from_generators(repr.ambient_rank, repr.basis).map_err(D::Error::custom)
    }
}

/// Evidence that a vector lies outside a lattice.
///
/// `Rank`: an integer functional vanishing on every generator but not on the
/// vector. `Modular`: a functional that is divisible by `prime^exponent` on
/// every generator but not on the vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonMembership {
    Rank {
        #[serde(with = "bigvec")]
        functional: Vec<BigInt>,
    },
    Modular {
        #[serde(with = "bigint_str")]
        prime: BigInt,
        exponent: u32,
        #[serde(with = "bigvec")]
        functional: Vec<BigInt>,
    },
}

impl NonMembership {
    pub fn functional(&self) -> &[BigInt] {
        match self {
            NonMembership::Rank { functional } | NonMembership::Modular { functional, .. } => {
                functional
            }
        }
    }

    /// Checks the certificate against the generators, independently of how it was produced.
    pub fn verify(&self, generators: &[Vec<BigInt>], v: &[BigInt]) -> bool {
        let w = self.functional();
        if w.len() != v.len() || generators.iter().any(|g| g.len() != w.len()) {
            return false;
        }
        match self {
            NonMembership::Rank { .. } => {
                generators.iter().all(|g| dot(w, g).is_zero()) && !dot(w, v).is_zero()
            }
            NonMembership::Modular { prime, exponent, .. } => {
                if *exponent == 0 || !is_probable_prime(prime) {
                    return false;
                }
                let modulus = num_traits::pow(prime.clone(), *exponent as usize);
                generators.iter().all(|g| dot(w, g).is_multiple_of(&modulus))
                    && !dot(w, v).is_multiple_of(&modulus)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// Coordinates with respect to the lattice's generators.
    Member {
        #[serde(with = "bigvec")]
        coordinates: Vec<BigInt>,
    },
    NonMember { certificate: NonMembership },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Decides `v in L` exactly and returns a certificate either way.
pub fn lattice_membership(v: &[BigInt], lattice: &Lattice) -> Result<Membership> {
    if v.len() != lattice.ambient_rank {
        return Err(Error::Dimension {
            expected: lattice.ambient_rank,
            got: v.len(),
        });
    }
    if v.iter().all(Zero::is_zero) {
        return Ok(Membership::Member {
            coordinates: vec![BigInt::zero(); lattice.generators.len()],
        });
    }
    let g = lattice.generator_matrix();
    let snf = smith_normal_form(&g);
    let w = snf.u.mul_vec(v)?;
    let factors = snf.d.diagonal();
    let rank = factors.iter().take_while(|d| !d.is_zero()).count();

    for (i, wi) in w.iter().enumerate().skip(rank) {
        if !wi.is_zero() {
            return Ok(Membership::NonMember {
                certificate: NonMembership::Rank {
                    functional: snf.u.row(i),
                },
            });
        }
    }
    let mut y = vec![BigInt::zero(); g.cols()];
    for i in 0..rank {
        let d = &factors[i];
        if !w[i].is_multiple_of(d) {
            let reduced = d / d.gcd(&w[i]);
            let prime = smallest_prime_factor(&reduced);
            let mut exponent = 0u32;
            let mut rest = d.clone();
            while rest.is_multiple_of(&prime) {
                rest /= &prime;
                exponent += 1;
            }
            return Ok(Membership::NonMember {
                certificate: NonMembership::Modular {
                    prime,
                    exponent,
                    functional: snf.u.row(i),
                },
            });
        }
        y[i] = &w[i] / d;
    }
    let coordinates = snf.v.mul_vec(&y)?;
    debug_assert_eq!(g.mul_vec(&coordinates)?, v);
    Ok(Membership::Member { coordinates })
}

fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let n = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            return p;
        }
        p += 1;
    }
    n
}

fn is_probable_prime(n: &BigInt) -> bool {
    n > &BigInt::one() && smallest_prime_factor(n) == *n
}

/// The structure of `sup / sub` together with the data needed to produce
/// explicit quotient elements.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FinAbelianGroup,
    /// Canonical basis of `sup`, as columns.
    pub sup_basis: IntMatrix,
    /// Coordinates of the generators of `sub` in `sup_basis`, as columns.
    pub sub_coordinates: IntMatrix,
    pub smith: SmithDecomposition,
}

impl Subquotient {
    pub fn compute(sub: &Lattice, sup: &Lattice) -> Result<Self> {
        if sub.ambient_rank != sup.ambient_rank {
            return Err(Error::Dimension {
                expected: sup.ambient_rank,
                got: sub.ambient_rank,
            });
        }
        let k = sup.rank();
        let mut coords = Vec::with_capacity(sub.generators.len());
        for (idx, g) in sub.generators.iter().enumerate() {
            match sup.coordinates(g) {
                Some(c) => coords.push(c),
                None => {
                    let shown: Vec<String> = g.iter().map(ToString::to_string).collect();
                    return Err(Error::Precondition(format!(
                        "generator #{idx} ({}) of the sublattice is not in the superlattice",
                        shown.join(", ")
                    )));
                }
            }
        }
        let sub_coordinates = IntMatrix::from_columns(k, &coords)?;
        let smith = smith_normal_form(&sub_coordinates);
        let factors = smith.invariant_factors();
        let free_rank = k - factors.len();
        let group = FinAbelianGroup::new(free_rank, factors)?;
        Ok(Subquotient {
            group,
            sup_basis: sup.basis_matrix(),
            sub_coordinates,
            smith,
        })
    }

    /// For each diagonal entry `d >= 2`, an element of `sup` whose class has order `d`.
    pub fn torsion_witnesses(&self) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
        let mut out = Vec::new();
        for (i, d) in self.smith.d.diagonal().iter().enumerate() {
            if d > &BigInt::one() {
                let coords = self.smith.u_inv.column(i);
                out.push((self.sup_basis.mul_vec(&coords)?, d.clone()));
            }
        }
        Ok(out)
    }
}

/// Isomorphism type of `sup / sub`.
pub fn subquotient_structure(sub: &Lattice, sup: &Lattice) -> Result<FinAbelianGroup> {
    Ok(Subquotient::compute(sub, sup)?.group)
}

/// Torsion part of `sup / sub` with an explicit witness per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub group: FinAbelianGroup,
    pub witnesses: Vec<TorsionWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionWitness {
    #[serde(with = "bigvec")]
    pub element: Vec<BigInt>,
    #[serde(with = "bigint_str")]
    pub order: BigInt,
}

pub fn saturation_torsion(sub: &Lattice, sup: &Lattice) -> Result<TorsionReport> {
    let sq = Subquotient::compute(sub, sup)?;
    let witnesses = sq
        .torsion_witnesses()?
        .into_iter()
        .map(|(element, order)| TorsionWitness { element, order })
        .collect();
    Ok(TorsionReport {
        group: sq.group.torsion(),
        witnesses,
    })
}

/// Checks that the class of `element` in `sup / sub` has exactly the given order.
pub fn verify_order(element: &[BigInt], order: &BigInt, sub: &Lattice) -> bool {
    if !order.is_positive() {
        return false;
    }
    let scaled: Vec<BigInt> = element.iter().map(|x| x * order).collect();
    if !sub.contains(&scaled) {
        return false;
    }
    let mut n = order.clone();
    let mut p = BigInt::from(2);
    let mut primes = Vec::new();
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            primes.push(p.clone());
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        primes.push(n);
    }
    primes.iter().all(|p| {
        let smaller = order / p;
        let v: Vec<BigInt> = element.iter().map(|x| x * &smaller).collect();
        !sub.contains(&v)
    })
}

/// `{c : m c = 0}` as a lattice in `Z^cols`.
///
/// Echelonizes the vectors `(m e_j, e_j)`; the rows whose pivot falls in the
/// identity block span exactly the pairs `(0, c)` with `m c = 0`.
pub fn integer_kernel(m: &IntMatrix) -> Lattice {
    let (k, n) = (m.rows(), m.cols());
    let mut acc = HermiteAccumulator::new(k + n);
    for j in 0..n {
        let mut v = m.column(j);
        v.extend((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
        acc.insert(v);
    }
    let kernel: Vec<Vec<BigInt>> = acc
        .rows()
        .iter()
        .zip(acc.pivots())
        .filter(|(_, &p)| p >= k)
        .map(|(row, _)| row[k..].to_vec())
        .collect();
    Lattice::from_generators(n, kernel).expect("kernel vectors have length cols")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }
}

/// `[sup : sub]`, or `Infinite` when the ranks differ.
pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<LatticeIndex> {
    let group = subquotient_structure(sub, sup)?;
    Ok(match group.order() {
        Some(n) => LatticeIndex::Finite(n),
        None => LatticeIndex::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::vec_from_i64;

    fn lat(r: usize, g: &[&[i64]]) -> Lattice {
        Lattice::from_i64(r, g).unwrap()
    }

    #[test]
    fn membership_zero_vector() {
        let l = lat(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(
            lattice_membership(&vec_from_i64(&[0, 0]), &l).unwrap(),
            Membership::Member {
                coordinates: vec_from_i64(&[0, 0])
            }
        );
    }

    #[test]
    fn membership_parity_obstruction() {
        let l = lat(2, &[&[2, 0], &[0, 2]]);
        let v = vec_from_i64(&[1, 0]);
        match lattice_membership(&v, &l).unwrap() {
            Membership::NonMember { certificate } => {
                assert!(certificate.verify(l.generators(), &v));
                assert!(matches!(certificate, NonMembership::Modular { ref prime, .. } if *prime == BigInt::from(2)));
            }
            other => panic!("expected non-membership, got {other:?}"),
        }
    }

    #[test]
    fn membership_coordinates_three_minus_two() {
        let l = lat(2, &[&[4, 4], &[2, 6]]);
        let m = lattice_membership(&vec_from_i64(&[8, 0]), &l).unwrap();
        assert_eq!(
            m,
            Membership::Member {
                coordinates: vec_from_i64(&[3, -2])
            }
        );
    }

    #[test]
    fn membership_needs_prime_power() {
        let l = lat(1, &[&[4]]);
        let v = vec_from_i64(&[2]);
        let Membership::NonMember { certificate } = lattice_membership(&v, &l).unwrap() else {
            panic!("2 is not in 4Z");
        };
        assert!(certificate.verify(l.generators(), &v));
        assert!(matches!(certificate, NonMembership::Modular { exponent: 2, .. }));
    }

    #[test]
    fn membership_rank_certificate() {
        let l = lat(3, &[&[1, 1, 0]]);
        let v = vec_from_i64(&[0, 0, 5]);
        let Membership::NonMember { certificate } = lattice_membership(&v, &l).unwrap() else {
            panic!("outside the rational span");
        };
        assert!(matches!(certificate, NonMembership::Rank { .. }));
        assert!(certificate.verify(l.generators(), &v));
        assert!(!certificate.verify(l.generators(), &vec_from_i64(&[2, 2, 0])));
    }

    #[test]
    fn membership_dimension_mismatch() {
        let l = Lattice::full(3);
        assert!(matches!(
            lattice_membership(&vec_from_i64(&[1, 2]), &l),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn subquotient_examples() {
        let two = lat(2, &[&[2, 0], &[0, 2]]);
        let g = subquotient_structure(&two, &Lattice::full(2)).unwrap();
        assert_eq!(g.invariant_factors, vec_from_i64(&[2, 2]));
        assert_eq!(g.free_rank, 0);

        let sub = lat(2, &[&[2, 2], &[4, 0], &[0, 4]]);
        let sup = lat(2, &[&[1, 3], &[0, 4]]);
        assert_eq!(subquotient_structure(&sub, &sup).unwrap(), FinAbelianGroup::cyclic(2));

        let sub = lat(2, &[&[8, 0], &[4, 4]]);
        let sup = lat(2, &[&[4, 4], &[2, 6]]);
        assert_eq!(subquotient_structure(&sub, &sup).unwrap(), FinAbelianGroup::cyclic(2));
    }

    #[test]
    fn subquotient_containment_failure_names_generator() {
        let sub = lat(2, &[&[2, 0], &[1, 1]]);
        let sup = lat(2, &[&[2, 0], &[0, 2]]);
        match subquotient_structure(&sub, &sup) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("#1"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn saturation_examples() {
        let t = saturation_torsion(&lat(2, &[&[2, 0]]), &Lattice::full(2)).unwrap();
        assert_eq!(t.group, FinAbelianGroup::cyclic(2));
        let w = &t.witnesses[0];
        assert_eq!(w.order, BigInt::from(2));
        assert!(w.element[0].is_odd() && w.element[1].is_zero());

        let t = saturation_torsion(&lat(2, &[&[2, 0], &[0, 1]]), &Lattice::full(2)).unwrap();
        assert_eq!(t.group, FinAbelianGroup::cyclic(2));
        assert!(verify_order(&t.witnesses[0].element, &BigInt::from(2), &lat(2, &[&[2, 0], &[0, 1]])));
    }

    #[test]
    fn index_examples() {
        let two = lat(2, &[&[2, 0], &[0, 2]]);
        assert_eq!(
            lattice_index(&two, &Lattice::full(2)).unwrap(),
            LatticeIndex::Finite(BigInt::from(4))
        );
        assert_eq!(
            lattice_index(&lat(2, &[&[2, 0]]), &Lattice::full(2)).unwrap(),
            LatticeIndex::Infinite
        );
    }

    #[test]
    fn hermite_basis_is_canonical() {
        let a = lat(3, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let b = lat(3, &[&[7, 8, 10], &[1, 2, 3], &[4, 5, 6], &[5, 7, 9]]);
        assert_eq!(a, b);
        assert_ne!(a, Lattice::full(3));
        assert_eq!(lat(3, &[&[1, 0, 0], &[1, 1, 0], &[3, 5, 1]]), Lattice::full(3));
    }

    #[test]
    fn kernel_of_small_matrices() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4, 6], &[1, 2, 3]]);
        let k = integer_kernel(&m);
        assert_eq!(k, lat(3, &[&[2, -1, 0], &[3, 0, -1]]));
        assert_eq!(integer_kernel(&IntMatrix::identity(3)).rank(), 0);
        assert_eq!(integer_kernel(&IntMatrix::zeros(2, 3)), Lattice::full(3));
        // saturated even when the rows share a factor
        let m = IntMatrix::from_i64_rows(&[&[4, 6]]);
        assert_eq!(integer_kernel(&m), lat(2, &[&[3, -2]]));
    }
}
