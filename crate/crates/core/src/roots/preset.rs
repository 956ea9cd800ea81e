//! Registered groups and their end-to-end analysis.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::character::{
    character_lattice, invariant_quadratic_lattice, project_to_semisimple, CentralQuotientDatum,
    CharacterLattice, InvariantForms, NamedVector, WeylAction,
};
use super::chern::{dec_subgroup, to_ambient, DecGenerators, DecSubgroup, WeightMultiset};
use super::sym2::{format_quadratic, sym2_dim, sym2_index};
use crate::error::{Error, Result};
use crate::exactlin::matrix::{bigint_str, bigvec};
use crate::exactlin::{
    lattice_membership, saturation_torsion, FinAbelianGroup, IntMatrix, Lattice, Membership,
};

/// A quotient of a split reductive group by a central subgroup, with
/// everything needed to compute its indecomposable invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPreset {
    pub name: String,
    pub description: String,
    pub datum: CentralQuotientDatum,
    pub ambient_names: Vec<String>,
    /// Map to the weight lattice of the simply connected cover, when the
    /// group is semisimple.
    pub projection: Option<Projection>,
    /// Acts on the coordinates of the lattice actually analysed.
    pub weyl: WeylAction,
    pub dec: Option<DecGenerators>,
    /// Ambient quadratic forms used to display results, such as `q1`, `q2`.
    pub named_forms: Vec<NamedVector>,
    /// A form whose class is expected to generate the indecomposable group.
    pub class_candidate: Option<NamedVector>,
    /// Generic variety attached to the preset, as a kgamma config name.
    pub generic_variety: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    pub matrix: IntMatrix,
    pub names: Vec<String>,
}

pub const MIN_N: usize = 2;
pub const MAX_N: usize = 8;

impl GroupPreset {
    pub fn names() -> Vec<String> {
        let mut v = Vec::new();
        for n in MIN_N..=MAX_N {
            v.push(format!("gl2n:{n}"));
        }
        for n in MIN_N..=MAX_N {
            v.push(format!("sl2n:{n}"));
        }
        v.push("gl4x4".into());
        v.push("sl4x4".into());
        v
    }

    pub fn by_name(name: &str) -> Result<Self> {
        let unknown = || Error::unknown("group preset", name, &Self::names());
        if let Some((family, n)) = name.split_once(':') {
            let n: usize = n.parse().map_err(|_| unknown())?;
            if !(MIN_N..=MAX_N).contains(&n) {
                return Err(unknown());
            }
            return match family {
                "gl2n" => Ok(gl2n(n)),
                "sl2n" => Ok(sl2n(n)),
                _ => Err(unknown()),
            };
        }
        match name {
            "gl4x4" => Ok(gl4x4()),
            "sl4x4" => Ok(sl4x4()),
            _ => Err(unknown()),
        }
    }

    pub fn is_semisimple(&self) -> bool {
        self.projection.is_some()
    }
}

fn pair_names(n: usize) -> Vec<String> {
    (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
}

fn indexed(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn unit(n: usize, i: usize, c: i64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::from(c);
    v
}

fn matrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> IntMatrix {
    let entries = (0..rows * cols).map(|k| BigInt::from(f(k / cols, k % cols))).collect();
    IntMatrix::from_entries(rows, cols, entries).expect("sized entries")
}

/// `mu` is the kernel of the product `mu_2^n -> mu_2`; its characters are
/// `(Z/2)^n / <(1, ..., 1)>`, and `x_i, y_i` both map to the i-th generator.
fn pairs_datum(n: usize) -> CentralQuotientDatum {
    let m = matrix(n, 2 * n, |r, c| (c / 2 == r) as i64);
    CentralQuotientDatum::new(m, vec![2; n], vec![vec![1; n]]).expect("surjective")
}

fn gl2n(n: usize) -> GroupPreset {
    let swaps = (0..n)
        .map(|i| {
            matrix(2 * n, 2 * n, |r, c| {
                let partner = |k: usize| if k / 2 == i { k ^ 1 } else { k };
                (partner(c) == r) as i64
            })
        })
        .collect();
    GroupPreset {
        name: format!("gl2n:{n}"),
        description: format!("(GL2)^{n} / mu"),
        datum: pairs_datum(n),
        ambient_names: pair_names(n),
        projection: None,
        weyl: WeylAction {
            generators: swaps,
            order: Some(1 << n),
        },
        dec: None,
        named_forms: Vec::new(),
        class_candidate: None,
        generic_variety: None,
    }
}

fn sl2n(n: usize) -> GroupPreset {
    let proj = matrix(n, 2 * n, |r, c| match (c / 2 == r, c % 2) {
        (true, 0) => 1,
        (true, _) => -1,
        _ => 0,
    });
    let flips = (0..n)
        .map(|i| matrix(n, n, |r, c| if r != c { 0 } else if r == i { -1 } else { 1 }))
        .collect();
    let mut multisets: Vec<WeightMultiset> = (0..n)
        .map(|i| WeightMultiset::new(vec![(unit(n, i, 2), 1), (unit(n, i, -2), 1)]).expect("weights"))
        .collect();
    let signs = (0..1u64 << n)
        .map(|mask| {
            let v = (0..n)
                .map(|i| BigInt::from(if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect();
            (v, 1)
        })
        .collect();
    multisets.push(WeightMultiset::new(signs).expect("weights"));

    let names = indexed("xb", n);
    let mut sum_sq = vec![BigInt::zero(); sym2_dim(n)];
    for i in 0..n {
        sum_sq[sym2_index(n, i, i)] = BigInt::from(1);
    }
    let candidate = (n >= 3).then(|| NamedVector {
        label: format!("2*({})", format_quadratic(&sum_sq, &names)),
        vector: sum_sq.iter().map(|x| x * 2).collect(),
    });
    GroupPreset {
        name: format!("sl2n:{n}"),
        description: format!("(SL2)^{n} / mu"),
        datum: pairs_datum(n),
        ambient_names: pair_names(n),
        projection: Some(Projection {
            matrix: proj,
            names: names.clone(),
        }),
        weyl: WeylAction {
            generators: flips,
            order: Some(1 << n),
        },
        dec: Some(DecGenerators::Weights { multisets }),
        named_forms: vec![NamedVector {
            label: "s".into(),
            vector: sum_sq,
        }],
        class_candidate: candidate,
        generic_variety: match n {
            2 => Some("conics1".into()),
            3 => Some("conics2".into()),
            4 => Some("conics3".into()),
            5 => Some("conics4".into()),
            _ => None,
        },
    }
}

/// `mu^* = (Z/4 + Z/4) / <(2, 2)>`, with `x_i` and `y_i` mapping to the two generators.
fn quartic_datum() -> CentralQuotientDatum {
    let m = matrix(2, 8, |r, c| (c / 4 == r) as i64);
    CentralQuotientDatum::new(m, vec![4, 4], vec![vec![2, 2]]).expect("surjective")
}

fn gl4x4() -> GroupPreset {
    let mut gens = Vec::new();
    for block in 0..2 {
        for k in 0..3 {
            let (a, b) = (4 * block + k, 4 * block + k + 1);
            gens.push(matrix(8, 8, |r, c| {
                let t = if c == a { b } else if c == b { a } else { c };
                (t == r) as i64
            }));
        }
    }
    let mut names = indexed("x", 4);
    names.extend(indexed("y", 4));
    GroupPreset {
        name: "gl4x4".into(),
        description: "(GL4 x GL4) / mu".into(),
        datum: quartic_datum(),
        ambient_names: names,
        projection: None,
        weyl: WeylAction {
            generators: gens,
            order: Some(576),
        },
        dec: None,
        named_forms: Vec::new(),
        class_candidate: None,
        generic_variety: None,
    }
}

fn sl4x4() -> GroupPreset {
    // x4 -> -(xb1 + xb2 + xb3), likewise for y4
    let proj = matrix(6, 8, |r, c| {
        let (block, k) = (c / 4, c % 4);
        if r / 3 != block {
            0
        } else if k == 3 {
            -1
        } else {
            (r % 3 == k) as i64
        }
    });
    let mut gens = Vec::new();
    for block in 0..2 {
        let o = 3 * block;
        for k in 0..2 {
            gens.push(matrix(6, 6, |r, c| {
                let t = if c == o + k { o + k + 1 } else if c == o + k + 1 { o + k } else { c };
                (t == r) as i64
            }));
        }
        // the transposition (3 4) on coefficient vectors: (a1, a2, a3) -> (a1 - a3, a2 - a3, -a3)
        gens.push(matrix(6, 6, |r, c| {
            if r / 3 != block || c / 3 != block {
                return (r == c) as i64;
            }
            match (r % 3, c % 3) {
                (_, 2) => -1,
                (i, j) => (i == j) as i64,
            }
        }));
    }
    let mut names = indexed("xb", 3);
    names.extend(indexed("yb", 3));
    let q = |block: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); sym2_dim(6)];
        for i in 0..3 {
            for j in i..3 {
                v[sym2_index(6, 3 * block + i, 3 * block + j)] = BigInt::from(1);
            }
        }
        v
    };
    let (q1, q2) = (q(0), q(1));
    let comb = |a: i64, b: i64| -> Vec<BigInt> {
        q1.iter().zip(&q2).map(|(x, y)| x * a + y * b).collect()
    };
    let mut amb = indexed("x", 4);
    amb.extend(indexed("y", 4));
    GroupPreset {
        name: "sl4x4".into(),
        description: "(SL4 x SL4) / mu".into(),
        datum: quartic_datum(),
        ambient_names: amb,
        projection: Some(Projection {
            matrix: proj,
            names,
        }),
        weyl: WeylAction {
            generators: gens,
            order: Some(576),
        },
        dec: Some(DecGenerators::Explicit {
            forms: vec![comb(8, 0), comb(4, 4)],
        }),
        named_forms: vec![
            NamedVector {
                label: "q1".into(),
                vector: q1.clone(),
            },
            NamedVector {
                label: "q2".into(),
                vector: q2.clone(),
            },
        ],
        class_candidate: Some(NamedVector {
            label: "2*q1 + 6*q2".into(),
            vector: comb(2, 6),
        }),
        generic_variety: Some("deg4pair".into()),
    }
}

/// A torsion class of `Inv / Dec` with its order and readable forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWitness {
    #[serde(with = "bigvec")]
    pub lattice_coordinates: Vec<BigInt>,
    #[serde(with = "bigvec")]
    pub ambient: Vec<BigInt>,
    pub display: String,
    pub named: Option<String>,
    #[serde(with = "bigint_str")]
    pub order: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsAnalysis {
    pub preset: String,
    pub description: String,
    pub t_g: CharacterLattice,
    pub t_h: Option<CharacterLattice>,
    pub weyl_in_basis: Vec<IntMatrix>,
    pub invariants: InvariantForms,
    /// Canonical basis of the invariant forms, written in ambient variables.
    pub invariant_display: Vec<String>,
    pub dec: Option<DecSubgroup>,
    pub group: Option<FinAbelianGroup>,
    pub witnesses: Vec<ClassWitness>,
    /// Whether the preset's candidate form lies in the invariants and generates `Inv / Dec`.
    pub candidate_generates: Option<bool>,
}

impl RootsAnalysis {
    /// The lattice whose quadratic forms are analysed.
    pub fn working_lattice(&self) -> &CharacterLattice {
        self.t_h.as_ref().unwrap_or(&self.t_g)
    }

    pub fn display_names(&self) -> &[String] {
        &self.working_lattice().coordinate_names
    }
}

pub fn analyze(preset: &GroupPreset) -> Result<RootsAnalysis> {
    let t_g = character_lattice(&preset.datum, preset.ambient_names.clone())?;
    let t_h = match &preset.projection {
        Some(p) => Some(project_to_semisimple(&t_g, &p.matrix, p.names.clone())?),
        None => None,
    };
    let working = t_h.as_ref().unwrap_or(&t_g);
    let names = working.coordinate_names.clone();
    let weyl_in_basis = preset.weyl.in_basis(working)?;
    let invariants = invariant_quadratic_lattice(working, &preset.weyl)?;
    let invariant_display = invariants
        .lattice
        .basis()
        .iter()
        .map(|b| Ok(describe(&to_ambient(&invariants, b)?, &names, &preset.named_forms)))
        .collect::<Result<Vec<_>>>()?;

    let mut dec = None;
    let mut group = None;
    let mut witnesses = Vec::new();
    let mut candidate_generates = None;
    if let Some(gens) = &preset.dec {
        let d = dec_subgroup(gens, working, &preset.weyl, &invariants)?;
        let report = saturation_torsion(&d.lattice, &invariants.lattice)?;
        let full = crate::exactlin::subquotient_structure(&d.lattice, &invariants.lattice)?;
        for w in &report.witnesses {
            // -w generates the same cyclic subgroup; prefer a positive leading term
            let mut element = w.element.clone();
            if element.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
                element.iter_mut().for_each(|c| *c = -&*c);
            }
            let ambient = to_ambient(&invariants, &element)?;
            witnesses.push(ClassWitness {
                display: format_quadratic(&ambient, &names),
                named: express(&ambient, &preset.named_forms)?,
                lattice_coordinates: element,
                ambient,
                order: w.order.clone(),
            });
        }
        if let Some(c) = &preset.class_candidate {
            candidate_generates = Some(candidate_generates_quotient(
                &c.vector,
                &invariants,
                &d.lattice,
                &full,
            )?);
        }
        dec = Some(d);
        group = Some(full);
    }
    Ok(RootsAnalysis {
        preset: preset.name.clone(),
        description: preset.description.clone(),
        t_g,
        t_h,
        weyl_in_basis,
        invariants,
        invariant_display,
        dec,
        group,
        witnesses,
        candidate_generates,
    })
}

/// `Inv^3(H)_ind` as the quotient of the invariant forms by the decomposable part.
pub fn indecomposable_group(preset: &GroupPreset) -> Result<FinAbelianGroup> {
    if preset.dec.is_none() {
        return Err(Error::Input(format!(
            "preset {} carries no Chern class data; indecomposable group is not computed",
            preset.name
        )));
    }
    analyze(preset)?
        .group
        .ok_or_else(|| Error::Inconsistency("missing quotient".into()))
}

fn candidate_generates_quotient(
    candidate: &[BigInt],
    invariants: &InvariantForms,
    dec: &Lattice,
    quotient: &FinAbelianGroup,
) -> Result<bool> {
    let Some(coords) = super::character::to_lattice_monomials(invariants, candidate)? else {
        return Ok(false);
    };
    if !invariants.lattice.contains(&coords) {
        return Ok(false);
    }
    // cyclic quotient of order n is generated by c iff c has order n
    let Some(n) = quotient.order() else {
        return Ok(false);
    };
    if quotient.invariant_factors.len() > 1 {
        return Ok(false);
    }
    Ok(crate::exactlin::verify_order(&coords, &n, dec))
}

/// Integer combination of named forms equal to `v`, rendered, if one exists.
fn express(v: &[BigInt], named: &[NamedVector]) -> Result<Option<String>> {
    if named.is_empty() {
        return Ok(None);
    }
    let gens: Vec<Vec<BigInt>> = named.iter().map(|n| n.vector.clone()).collect();
    let lattice = Lattice::from_generators(v.len(), gens)?;
    if lattice.generators().len() != named.len() {
        return Ok(None);
    }
    Ok(match lattice_membership(v, &lattice)? {
        Membership::Member { coordinates } => {
            let labels: Vec<String> = named.iter().map(|n| n.label.clone()).collect();
            Some(super::sym2::format_linear(&coordinates, &labels))
        }
        Membership::NonMember { .. } => None,
    })
}

fn describe(v: &[BigInt], names: &[String], named: &[NamedVector]) -> String {
    match express(v, named) {
        Ok(Some(s)) => s,
        _ => format_quadratic(v, names),
    }
}
