use num_bigint::BigInt;
use sdinv_core::exactlin::{vec_from_i64, IntMatrix, Lattice};
use sdinv_core::roots::*;
use std::time::Instant;

fn lattice(rank: usize, vectors: Vec<Vec<i64>>) -> Lattice {
    Lattice::from_generators(rank, vectors.iter().map(|v| vec_from_i64(v)).collect()).unwrap()
}

/// `{x_i - y_i, 2 x_k (k < n), sum x_i}` in coordinates `(x1, y1, ..., xn, yn)`.
fn displayed_tg(n: usize) -> Lattice {
    let mut gens = Vec::new();
    for i in 0..n {
        let mut v = vec![0; 2 * n];
        v[2 * i] = 1;
        v[2 * i + 1] = -1;
        gens.push(v);
    }
    for k in 0..n - 1 {
        let mut v = vec![0; 2 * n];
        v[2 * k] = 2;
        gens.push(v);
    }
    gens.push((0..2 * n).map(|c| (c % 2 == 0) as i64).collect());
    lattice(2 * n, gens)
}

/// `{2 xb_k (k < n), sum xb_i}`.
fn displayed_th(n: usize) -> Lattice {
    let mut gens: Vec<Vec<i64>> = (0..n - 1)
        .map(|k| (0..n).map(|c| if c == k { 2 } else { 0 }).collect())
        .collect();
    gens.push(vec![1; n]);
    lattice(n, gens)
}

#[test]
fn pair_lattices_match_displayed_bases() {
    for n in 2..=8 {
        let a = analyze(&GroupPreset::by_name(&format!("sl2n:{n}")).unwrap()).unwrap();
        assert_eq!(a.t_g.lattice, displayed_tg(n), "T_G n={n}");
        assert_eq!(a.t_h.as_ref().unwrap().lattice, displayed_th(n), "T_H n={n}");
        let g = analyze(&GroupPreset::by_name(&format!("gl2n:{n}")).unwrap()).unwrap();
        assert_eq!(g.t_g.lattice, displayed_tg(n));
    }
    // the n = 2 example written out
    assert_eq!(displayed_tg(2), lattice(4, vec![vec![1, -1, 0, 0], vec![0, 0, 1, -1], vec![2, 0, 0, 0], vec![1, 0, 1, 0]]));
}

#[test]
fn semisimple_lattice_two_routes() {
    // T_H as the image of T_G, and directly as the kernel of Z^n -> mu^*
    for n in 2..=8 {
        let preset = GroupPreset::by_name(&format!("sl2n:{n}")).unwrap();
        let a = analyze(&preset).unwrap();
        let direct = CentralQuotientDatum::new(IntMatrix::identity(n), vec![2; n], vec![vec![1; n]]).unwrap();
        let names = (1..=n).map(|i| format!("xb{i}")).collect();
        let th = character_lattice(&direct, names).unwrap();
        assert_eq!(th.lattice, a.t_h.unwrap().lattice);
        let index = sdinv_core::exactlin::lattice_index(&th.lattice, &Lattice::full(n)).unwrap();
        assert_eq!(index.finite(), Some(&BigInt::from(1u64 << (n - 1))));
    }
}

#[test]
fn quartic_lattices_match_displayed_bases() {
    let a = analyze(&GroupPreset::by_name("sl4x4").unwrap()).unwrap();
    // (x1..x4, y1..y4)
    let tg = lattice(8, vec![
        vec![1, -1, 0, 0, 0, 0, 0, 0],
        vec![1, 0, -1, 0, 0, 0, 0, 0],
        vec![1, 0, 0, -1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, -1, 0, 0],
        vec![0, 0, 0, 0, 1, 0, -1, 0],
        vec![0, 0, 0, 0, 1, 0, 0, -1],
        vec![2, 0, 0, 0, 2, 0, 0, 0],
        vec![2, 0, 0, 0, -2, 0, 0, 0],
    ]);
    assert_eq!(a.t_g.lattice, tg);
    // (xb1..xb3, yb1..yb3)
    let th = lattice(6, vec![
        vec![1, -1, 0, 0, 0, 0],
        vec![1, 0, -1, 0, 0, 0],
        vec![0, 0, 0, 1, -1, 0],
        vec![0, 0, 0, 1, 0, -1],
        vec![2, 0, 0, 2, 0, 0],
        vec![2, 0, 0, -2, 0, 0],
    ]);
    assert_eq!(a.t_h.unwrap().lattice, th);
    let g = analyze(&GroupPreset::by_name("gl4x4").unwrap()).unwrap();
    assert_eq!(g.t_g.lattice, tg);
}

fn sq(n: usize, coeffs: &[(usize, usize, i64)]) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); sym2_dim(n)];
    for &(i, j, c) in coeffs {
        v[sym2_index(n, i, j)] += c;
    }
    v
}

#[test]
fn pair_invariants() {
    for n in 3..=8 {
        let a = analyze(&GroupPreset::by_name(&format!("sl2n:{n}")).unwrap()).unwrap();
        let mut gens: Vec<Vec<BigInt>> = (0..n - 1).map(|k| sq(n, &[(k, k, 4)])).collect();
        gens.push(sq(n, &(0..n).map(|i| (i, i, 2)).collect::<Vec<_>>()));
        let expected = Lattice::from_generators(sym2_dim(n), gens).unwrap();
        assert_eq!(a.invariants.ambient_lattice().unwrap(), expected, "n={n}");

        let mut dec: Vec<Vec<BigInt>> = (0..n).map(|k| sq(n, &[(k, k, 4)])).collect();
        dec.push(sq(n, &(0..n).map(|i| (i, i, 1 << (n - 1))).collect::<Vec<_>>()));
        let expected = Lattice::from_generators(sym2_dim(n), dec).unwrap();
        let dec_ambient = a.dec.as_ref().unwrap().lattice.image(&a.invariants.to_ambient).unwrap();
        assert_eq!(dec_ambient, expected, "n={n}");
        assert_eq!(a.candidate_generates, Some(true));
    }
    // n = 2: d1 xb1^2 + d2 xb2^2 with d1 + d2 = 0 mod 4
    let a = analyze(&GroupPreset::by_name("sl2n:2").unwrap()).unwrap();
    let inv = a.invariants.ambient_lattice().unwrap();
    assert_eq!(inv.rank(), 2);
    assert_eq!(inv, Lattice::from_generators(3, vec![sq(2, &[(0, 0, 1), (1, 1, -1)]), sq(2, &[(1, 1, 4)])]).unwrap());
    assert!(inv.contains(&sq(2, &[(0, 0, 1), (1, 1, -1)])));
    assert!(!inv.contains(&sq(2, &[(0, 0, 1), (1, 1, 1)])));
}

#[test]
fn pair_chern_classes() {
    for n in 2..=6 {
        let preset = GroupPreset::by_name(&format!("sl2n:{n}")).unwrap();
        let a = analyze(&preset).unwrap();
        let gens = &a.dec.as_ref().unwrap().ambient_generators;
        for (i, g) in gens.iter().take(n).enumerate() {
            assert_eq!(g, &sq(n, &[(i, i, -4)]));
        }
        // e2 of the sign vectors through (s1^2 - sum of squares) / 2 with s1 = 0
        let mut oracle = vec![BigInt::from(0); sym2_dim(n)];
        for mask in 0..1u64 << n {
            let v: Vec<BigInt> = (0..n).map(|i| BigInt::from(if mask >> i & 1 == 1 { -1 } else { 1 })).collect();
            for (o, x) in oracle.iter_mut().zip(sym2_product(&v, &v)) {
                *o -= x;
            }
        }
        let oracle: Vec<BigInt> = oracle.into_iter().map(|x| x / 2).collect();
        assert_eq!(gens[n], oracle);
        assert_eq!(oracle, sq(n, &(0..n).map(|i| (i, i, -(1i64 << (n - 1)))).collect::<Vec<_>>()));
    }
}

#[test]
fn indecomposable_for_pairs() {
    let start = Instant::now();
    for n in 2..=8 {
        let g = indecomposable_group(&GroupPreset::by_name(&format!("sl2n:{n}")).unwrap()).unwrap();
        assert_eq!(g.to_string(), "Z/2", "n={n}");
    }
    eprintln!("sl2n 2..8 in {:?}", start.elapsed());
}

#[test]
fn quartic_invariants() {
    let a = analyze(&GroupPreset::by_name("sl4x4").unwrap()).unwrap();
    let preset = GroupPreset::by_name("sl4x4").unwrap();
    let q1 = &preset.named_forms[0].vector;
    let q2 = &preset.named_forms[1].vector;
    let comb = |x: i64, y: i64| -> Vec<BigInt> { q1.iter().zip(q2).map(|(a, b)| a * x + b * y).collect() };
    let expected = Lattice::from_generators(21, vec![comb(4, 4), comb(2, 6)]).unwrap();
    assert_eq!(a.invariants.ambient_lattice().unwrap(), expected);
    assert_eq!(a.group.as_ref().unwrap().to_string(), "Z/2");
    assert_eq!(a.candidate_generates, Some(true));
    assert_eq!(a.witnesses.len(), 1);
    assert!(a.witnesses[0].named.is_some());
}

/// The explicit expression of `2 q1 + 6 q2` as a combination of products of
/// basis vectors of the semisimple lattice has integer coefficients.
#[test]
fn quartic_candidate_is_integral_in_the_basis() {
    let preset = GroupPreset::by_name("sl4x4").unwrap();
    let a = analyze(&preset).unwrap();
    let target = &preset.class_candidate.as_ref().unwrap().vector;
    let coords = to_lattice_monomials(&a.invariants, target).unwrap().expect("integral");
    assert_eq!(a.invariants.to_ambient.mul_vec(&coords).unwrap(), *target);

    // transcription with b1 = xb1 - xb2, b2 = xb1 - xb3, c1 = yb1 - yb2, c2 = yb1 - yb3,
    // p = xb1 + yb1, m = xb1 - yb1 (so 2p, 2m are the remaining basis vectors)
    let v = |c: [i64; 6]| vec_from_i64(&c);
    let b1 = v([1, -1, 0, 0, 0, 0]);
    let b2 = v([1, 0, -1, 0, 0, 0]);
    let c1 = v([0, 0, 0, 1, -1, 0]);
    let c2 = v([0, 0, 0, 1, 0, -1]);
    let p = v([1, 0, 0, 1, 0, 0]);
    let m = v([1, 0, 0, -1, 0, 0]);
    let lin = |terms: &[(i64, &Vec<BigInt>)]| -> Vec<BigInt> {
        let mut out = vec![BigInt::from(0); 6];
        for (c, x) in terms {
            for (o, y) in out.iter_mut().zip(x.iter()) {
                *o += y * c;
            }
        }
        out
    };
    let prod = |k: i64, a: &Vec<BigInt>, b: Vec<BigInt>| -> Vec<BigInt> {
        sym2_product(a, &b).into_iter().map(|x| x * k).collect()
    };
    let parts = [
        prod(2, &b1, lin(&[(1, &b1), (1, &b2), (-2, &p), (-2, &m)])),
        prod(12, &p, lin(&[(1, &p), (-1, &m)])),
        prod(2, &c1, lin(&[(3, &c1), (3, &c2), (-6, &p), (6, &m)])),
        prod(12, &m, lin(&[(1, &c2), (1, &m)])),
        prod(2, &b2, lin(&[(1, &b2), (-2, &p), (-2, &m)])),
        prod(6, &c2, lin(&[(1, &c2), (-2, &p)])),
    ];
    let mut total = vec![BigInt::from(0); 21];
    for part in &parts {
        for (t, x) in total.iter_mut().zip(part) {
            *t += x;
        }
    }
    assert_eq!(&total, target);
}

#[test]
fn weyl_generators_are_unimodular_on_the_lattice() {
    for name in GroupPreset::names() {
        let a = analyze(&GroupPreset::by_name(&name).unwrap()).unwrap();
        for w in &a.weyl_in_basis {
            assert_eq!(w.determinant().unwrap().magnitude(), &num_bigint::BigUint::from(1u8), "{name}");
        }
        // every invariant basis form is fixed exactly
        for b in a.invariants.lattice.basis() {
            for w in &a.weyl_in_basis {
                let img = sym2_map(w).mul_vec(b).unwrap();
                assert_eq!(&img, b, "{name}");
            }
        }
    }
}

#[test]
fn unknown_presets() {
    for bad in ["sl2n:9", "sl2n:1", "sl2n:x", "foo", "gl3n:2"] {
        assert!(GroupPreset::by_name(bad).unwrap_err().is_input(), "{bad}");
    }
    assert!(indecomposable_group(&GroupPreset::by_name("gl2n:3").unwrap()).unwrap_err().is_input());
}
