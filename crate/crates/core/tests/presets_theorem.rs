use num_bigint::BigInt;
use sdinv_core::exactlin::FinAbelianGroup;
use sdinv_core::kgamma::SeveriBrauerConfig;
use sdinv_core::presets::*;

fn z2() -> FinAbelianGroup {
    FinAbelianGroup::cyclic(2)
}

fn zero() -> FinAbelianGroup {
    FinAbelianGroup::trivial()
}

// Expected table: (n, Inv_H, Inv_G, Sdec/Dec H, Sdec/Dec G).
fn expected(n: usize) -> (FinAbelianGroup, FinAbelianGroup, FinAbelianGroup, FinAbelianGroup) {
    let inv_g = if n >= 3 { z2() } else { zero() };
    let sdec_h = if n <= 4 { z2() } else { zero() };
    let sdec_g = if (3..=4).contains(&n) { z2() } else { zero() };
    (z2(), inv_g, sdec_h, sdec_g)
}

fn order(g: &FinAbelianGroup) -> BigInt {
    g.order().unwrap()
}

#[test]
fn rows_match_the_table() {
    for n in 2..=8 {
        let row = assemble_theorem(n).unwrap();
        let (inv_h, inv_g, sdec_h, sdec_g) = expected(n);
        assert_eq!(row.inv3_ind_h.group, inv_h, "n = {n}");
        assert_eq!(row.inv3_ind_g.group, inv_g, "n = {n}");
        assert_eq!(row.sdec_mod_dec_h.group, sdec_h, "n = {n}");
        assert_eq!(row.sdec_mod_dec_g.group, sdec_g, "n = {n}");
        assert!(row.exactness_holds);
        assert_eq!(
            order(&row.sdec_mod_dec_h.group) * order(&row.chow2_tors.group),
            order(&row.inv3_ind_h.group)
        );
        assert!(matches!(row.inv3_ind_h.source, Source::Computed { .. }));
        assert_eq!(row.cites_restriction, n >= 6);
        if n <= 5 {
            assert!(matches!(row.chow2_tors.source, Source::Computed { .. }));
        } else {
            assert!(row.chow2_tors.source.is_cited());
        }
        // remark consistency: Z/2 from n = 5 on, trivial before
        let chow = if n >= 5 { z2() } else { zero() };
        assert_eq!(row.chow2_tors.group, chow, "n = {n}");
    }
}

#[test]
fn identity_suites_back_the_g_rows() {
    let r3 = assemble_theorem(3).unwrap();
    assert_eq!(r3.identity_checks.len(), 2);
    let r4 = assemble_theorem(4).unwrap();
    assert!(r4.identity_checks.iter().all(IdentityVerdict::all_passed));
    assert!(assemble_theorem(5).unwrap().identity_checks.is_empty());
    let r = assemble_theorem_with(4, &TheoremOptions { trials: 5, seed: 9 }).unwrap();
    assert_eq!(r.identity_checks[0].trials, 5);
}

#[test]
fn out_of_range() {
    assert!(assemble_theorem(1).unwrap_err().is_input());
    assert!(assemble_theorem(9).unwrap_err().is_input());
}

#[test]
fn n5_witnesses() {
    let row = assemble_theorem(5).unwrap();
    assert_eq!(row.chow_witnesses.len(), 1);
    assert!(!row.inv_witnesses.is_empty());
}

#[test]
fn sl4x4_default_and_hooks() {
    let r = sl4x4_report().unwrap();
    assert_eq!(r.inv3_ind.group, z2());
    assert_eq!(r.chow2_tors.group, zero());
    assert_eq!(r.sdec_mod_dec.group, z2());
    assert!(r.all_semi_decomposable);
    assert_eq!(r.witness.as_deref(), Some("2*q1 + 6*q2"));
    assert_eq!(r.candidate_generates, Some(true));

    let forced = sl4x4_report_with(&Sl4x4Options {
        forced_torsion: Some(z2()),
        variety: None,
    });
    assert!(matches!(forced, Err(sdinv_core::Error::Inconsistency(_))));

    let split = sl4x4_report_with(&Sl4x4Options {
        forced_torsion: None,
        variety: Some(SeveriBrauerConfig::split(vec![4, 4]).unwrap()),
    })
    .unwrap();
    assert_eq!(split.chow2_tors.group, zero());
    assert!(split.all_semi_decomposable);
}

#[test]
fn cited_facts_have_anchors() {
    let facts = cited_facts();
    assert!(facts.len() >= 6);
    for f in &facts {
        assert!(!f.anchor.trim().is_empty());
        assert!(!f.claim.trim().is_empty());
    }
    for n in 2..=8 {
        let row = assemble_theorem(n).unwrap();
        for e in [&row.inv3_ind_g, &row.chow2_tors, &row.sdec_mod_dec_g] {
            if let Source::Cited { facts } = &e.source {
                for id in facts {
                    cited_fact(id).unwrap();
                }
            }
        }
    }
}
