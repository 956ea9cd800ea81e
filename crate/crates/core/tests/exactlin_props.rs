use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use sdinv_core::exactlin::{
    lattice_index, lattice_membership, smith_normal_form, subquotient_structure, IntMatrix,
    Lattice, LatticeIndex, Membership,
};

fn matrix_strategy(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-50i64..=50, r * c).prop_map(move |e| {
            IntMatrix::from_entries(r, c, e.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn vectors(dim: usize, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    prop::collection::vec(
        prop::collection::vec(-9i64..=9, dim).prop_map(|v| v.into_iter().map(BigInt::from).collect()),
        count,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_invariants_hold(m in matrix_strategy(12)) {
        let s = smith_normal_form(&m);
        prop_assert!(s.verify().is_ok(), "{:?}", s.verify());
        prop_assert_eq!(smith_normal_form(&m), s);
    }

    #[test]
    fn quotient_of_lattice_by_itself_is_trivial(gens in vectors(4, 1..=6)) {
        let l = Lattice::from_generators(4, gens).unwrap();
        prop_assert!(subquotient_structure(&l, &l).unwrap().is_trivial());
    }

    #[test]
    fn index_matches_invariant_factors_and_determinants(
        sup_gens in vectors(3, 3..=3),
        mult in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3),
    ) {
        let sup = Lattice::from_generators(3, sup_gens).unwrap();
        prop_assume!(sup.rank() == 3);
        let basis = sup.basis_matrix();
        let mix = IntMatrix::from_entries(3, 3, mult.concat().into_iter().map(BigInt::from).collect()).unwrap();
        let sub = Lattice::from_columns(&basis.mul(&mix).unwrap()).unwrap();
        let group = subquotient_structure(&sub, &sup).unwrap();
        let index = lattice_index(&sub, &sup).unwrap();
        match index {
            LatticeIndex::Finite(n) => {
                prop_assert_eq!(Some(n.clone()), group.order());
                let det_sub = sub.basis_matrix().determinant().unwrap().abs();
                let det_sup = basis.determinant().unwrap().abs();
                prop_assert_eq!(n * det_sup, det_sub);
            }
            LatticeIndex::Infinite => {
                prop_assert!(sub.rank() < 3);
                prop_assert!(group.order().is_none());
            }
        }
    }

    #[test]
    fn membership_certificates_check_out(gens in vectors(4, 1..=5), v in prop::collection::vec(-20i64..=20, 4)) {
        let l = Lattice::from_generators(4, gens).unwrap();
        let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
        match lattice_membership(&v, &l).unwrap() {
            Membership::Member { coordinates } => {
                prop_assert!(l.contains(&v));
                let rebuilt = l.generator_matrix().mul_vec(&coordinates).unwrap();
                prop_assert_eq!(rebuilt, v);
            }
            Membership::NonMember { certificate } => {
                prop_assert!(!l.contains(&v));
                prop_assert!(certificate.verify(l.generators(), &v));
            }
        }
    }

    #[test]
    fn canonical_basis_ignores_order_and_redundancy(
        gens in vectors(4, 1..=5),
        seed in any::<u64>(),
        combo in prop::collection::vec(-3i64..=3, 5),
    ) {
        let a = Lattice::from_generators(4, gens.clone()).unwrap();
        let mut shuffled = gens.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed.rotate_left(i as u32) as usize) % (i + 1);
            shuffled.swap(i, j);
        }
        let mut redundant: Vec<BigInt> = vec![BigInt::zero(); 4];
        for (g, c) in gens.iter().zip(&combo) {
            for (r, x) in redundant.iter_mut().zip(g) {
                *r += x * c;
            }
        }
        shuffled.push(redundant);
        let b = Lattice::from_generators(4, shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        let again = Lattice::from_generators(4, a.basis().to_vec()).unwrap();
        prop_assert_eq!(a.basis(), again.basis());
    }
}
