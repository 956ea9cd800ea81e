//! Randomized verification of Witt ring identities among quaternion norm
//! forms, and evaluation of the degree-3 invariants built from them.
//!
//! Cup products `[Q] u (q)` for `Q = (a, b)` are represented by the 3-fold
//! Pfister form `<<a, b, q>>`; congruence modulo `I^4` stands for equality in
//! `H^3`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::form::{in_power_of_i, isometric, witt_equivalent, DiagonalForm};
use super::square::{hilbert_symbol, Place, SquareClass};
use crate::error::{Error, Result};

/// Primes that may appear in sampled slots.
pub const SLOT_PRIMES: [i64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuaternionDatum {
    pub a: SquareClass,
    pub b: SquareClass,
}

impl QuaternionDatum {
    pub fn new(a: SquareClass, b: SquareClass) -> Self {
        QuaternionDatum { a, b }
    }

    /// `<<a, b>> = <1, -a, -b, ab>`.
    pub fn norm_form(&self) -> DiagonalForm {
        DiagonalForm::pfister(&[self.a.clone(), self.b.clone()])
    }

    /// `<<a, b, q>>`, the form standing for `[Q] u (q)`.
    pub fn cup(&self, q: &SquareClass) -> DiagonalForm {
        DiagonalForm::pfister(&[self.a.clone(), self.b.clone(), q.clone()])
    }

    pub fn local_symbol(&self, place: Place) -> Result<i8> {
        hilbert_symbol(&self.a, &self.b, place)
    }
}

impl fmt::Display for QuaternionDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Twofold,
    SquareSlot,
    Double,
    Alpha2,
    LemmaAlpha3Exact,
    LemmaAlpha3ModI4,
    PropStepQonetwo,
    Alpha4Full,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::Twofold,
        IdentityId::SquareSlot,
        IdentityId::Double,
        IdentityId::Alpha2,
        IdentityId::LemmaAlpha3Exact,
        IdentityId::LemmaAlpha3ModI4,
        IdentityId::PropStepQonetwo,
        IdentityId::Alpha4Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Twofold => "twofold",
            IdentityId::SquareSlot => "square_slot",
            IdentityId::Double => "double",
            IdentityId::Alpha2 => "alpha2",
            IdentityId::LemmaAlpha3Exact => "lemma_alpha3_exact",
            IdentityId::LemmaAlpha3ModI4 => "lemma_alpha3_modI4",
            IdentityId::PropStepQonetwo => "prop_step_Qonetwo",
            IdentityId::Alpha4Full => "alpha4_full",
        }
    }

    pub fn names() -> Vec<String> {
        Self::ALL.iter().map(|i| i.name().to_string()).collect()
    }

    pub fn level(self) -> CongruenceLevel {
        match self {
            IdentityId::LemmaAlpha3ModI4 | IdentityId::PropStepQonetwo | IdentityId::Alpha4Full => {
                CongruenceLevel::ModI4
            }
            _ => CongruenceLevel::ExactWitt,
        }
    }

    /// Sampled variables, in sampling order.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            IdentityId::Twofold => &["x", "y", "z"],
            IdentityId::SquareSlot => &["a"],
            IdentityId::Double => &["a", "b", "c"],
            IdentityId::Alpha2 => &["a", "b"],
            IdentityId::LemmaAlpha3Exact | IdentityId::LemmaAlpha3ModI4 => &["a", "b", "c"],
            IdentityId::PropStepQonetwo => &["a", "b", "c", "d", "x"],
            IdentityId::Alpha4Full => &["a", "b", "c", "d", "x", "y", "z"],
        }
    }

    /// The two sides of the identity at the given values.
    pub fn sides(self, v: &Sample) -> Result<(DiagonalForm, DiagonalForm)> {
        let g = |k: &str| v.get(k);
        let pf = |slots: &[SquareClass]| DiagonalForm::pfister(slots);
        let m1 = SquareClass::minus_one();
        Ok(match self {
            IdentityId::Twofold => {
                let (x, y, z) = (g("x")?, g("y")?, g("z")?);
                (
                    pf(&[x.clone(), y.clone()]).orth(&pf(&[x.clone(), z.clone()])),
                    pf(&[x.clone(), y.clone(), z.clone()]).orth(&pf(&[x, y.mul(&z)])),
                )
            }
            IdentityId::SquareSlot => {
                let a = g("a")?;
                (pf(&[a.clone(), a.clone()]), pf(&[a, m1]))
            }
            IdentityId::Double => {
                let (a, bc) = (g("a")?, g("b")?.mul(&g("c")?));
                let f = pf(&[a.clone(), bc.clone()]);
                (f.orth(&f), pf(&[a, bc, m1]))
            }
            IdentityId::Alpha2 => {
                let q = QuaternionDatum::new(g("a")?, g("b")?);
                (q.norm_form().orth(&q.norm_form()), q.cup(&m1))
            }
            IdentityId::LemmaAlpha3Exact | IdentityId::LemmaAlpha3ModI4 => {
                let (a, b, c) = (g("a")?, g("b")?, g("c")?);
                let bc = b.mul(&c);
                let qs = [
                    QuaternionDatum::new(a.clone(), b.clone()),
                    QuaternionDatum::new(a.clone(), c.clone()),
                    QuaternionDatum::new(a.clone(), bc.clone()),
                ];
                let lhs = norm_sum(&qs);
                let rhs = if self == IdentityId::LemmaAlpha3Exact {
                    let n = pf(&[a.clone(), bc]);
                    pf(&[a, b, c]).orth(&n).orth(&n)
                } else {
                    qs[0].cup(&c.neg()).orth(&qs[1].cup(&m1))
                };
                (lhs, rhs)
            }
            IdentityId::PropStepQonetwo => {
                let (a, b, c, d, x) = (g("a")?, g("b")?, g("c")?, g("d")?, g("x")?);
                let q1 = QuaternionDatum::new(a.clone(), b.clone());
                let q2 = QuaternionDatum::new(c.clone(), d.clone());
                let q1p = QuaternionDatum::new(a, b.mul(&x));
                let q2p = QuaternionDatum::new(c, d.mul(&x));
                let lhs = norm_sum(&[q1.clone(), q2.clone(), q1p.clone(), q2p]);
                let rhs = q1.cup(&x).orth(&q2.cup(&x.neg())).orth(&q1p.cup(&m1));
                (lhs, rhs)
            }
            IdentityId::Alpha4Full => {
                let chain = ChainConfiguration::from_sample(v)?;
                let q = chain.q();
                let [q1, q2, q3, _] = &chain.quaternions;
                let lhs = norm_sum(&chain.quaternions);
                let rhs = q1.cup(&q).orth(&q2.cup(&q.neg())).orth(&q3.cup(&m1));
                (lhs, rhs)
            }
        })
    }

    fn sample(self, rng: &mut ChaCha8Rng) -> Result<Sample> {
        let mut s = Sample::default();
        match self {
            IdentityId::PropStepQonetwo => {
                for k in ["a", "b", "c", "d"] {
                    s.insert(k, sample_slot(rng));
                }
                let ac = s.get("a")?.mul(&s.get("c")?);
                s.insert("x", sample_norm(rng, &ac)?);
            }
            IdentityId::Alpha4Full => {
                let chain = sample_chain_with(rng)?;
                s = chain.sample();
            }
            _ => {
                for k in self.variables() {
                    s.insert(k, sample_slot(rng));
                }
            }
        }
        Ok(s)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::unknown("identity", s, &Self::names()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CongruenceLevel {
    ExactWitt,
    ModI4,
}

/// Named sampled values, kept in sampling order for replay.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub values: BTreeMap<String, SquareClass>,
}

impl Sample {
    pub fn insert(&mut self, k: &str, v: SquareClass) {
        self.values.insert(k.to_string(), v);
    }

    pub fn get(&self, k: &str) -> Result<SquareClass> {
        self.values
            .get(k)
            .cloned()
            .ok_or_else(|| Error::Input(format!("sample is missing the value '{k}'")))
    }

    pub fn from_i64(pairs: &[(&str, i64)]) -> Result<Self> {
        let mut s = Sample::default();
        for (k, v) in pairs {
            s.insert(k, SquareClass::from_i64(*v)?);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub identity: IdentityId,
    pub trial: usize,
    pub seed: u64,
    pub sample: Sample,
    pub lhs: DiagonalForm,
    pub rhs: DiagonalForm,
    pub level: CongruenceLevel,
    pub passed: bool,
}

/// Checks one identity at explicit values.
pub fn check_identity(id: IdentityId, sample: &Sample) -> Result<(DiagonalForm, DiagonalForm, bool)> {
    let (lhs, rhs) = id.sides(sample)?;
    let passed = match id.level() {
        CongruenceLevel::ExactWitt => witt_equivalent(&lhs, &rhs)?,
        CongruenceLevel::ModI4 => in_power_of_i(&lhs.orth(&rhs.neg()), 4)?,
    };
    Ok((lhs, rhs, passed))
}

/// Runs `trials` independent samples from a generator seeded with `seed`.
pub fn verify_identity(id: IdentityId, trials: usize, seed: u64) -> Result<Vec<IdentityCase>> {
    if trials == 0 {
        return Err(Error::Input("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|trial| {
            let sample = id.sample(&mut rng)?;
            let (lhs, rhs, passed) = check_identity(id, &sample)?;
            Ok(IdentityCase {
                identity: id,
                trial,
                seed,
                sample,
                lhs,
                rhs,
                level: id.level(),
                passed,
            })
        })
        .collect()
}

/// `+-` a product of a random subset of [`SLOT_PRIMES`].
pub fn sample_slot(rng: &mut impl Rng) -> SquareClass {
    let mut v: i64 = if rng.gen_bool(0.5) { -1 } else { 1 };
    for p in SLOT_PRIMES {
        if rng.gen_bool(0.5) {
            v *= p;
        }
    }
    SquareClass::from_i64(v).expect("nonzero")
}

/// `u^2 - d v^2` with `d` the squarefree representative of `ac`.
pub fn norm_value(ac: &SquareClass, u: i64, v: i64) -> Result<SquareClass> {
    let d: i64 = ac
        .value()
        .try_into()
        .map_err(|_| Error::Input("norm parameter out of range".into()))?;
    let n = (u as i128) * (u as i128) - (d as i128) * (v as i128) * (v as i128);
    let n: i64 = n
        .try_into()
        .map_err(|_| Error::Input("norm value out of range".into()))?;
    SquareClass::from_i64(n)
}

/// A random nonzero norm from `Q(sqrt(ac))`.
pub fn sample_norm(rng: &mut impl Rng, ac: &SquareClass) -> Result<SquareClass> {
    for _ in 0..64 {
        let u = rng.gen_range(-40..=40);
        let v = rng.gen_range(0..=12);
        if let Ok(n) = norm_value(ac, u, v) {
            return Ok(n);
        }
    }
    Err(Error::Inconsistency("could not sample a nonzero norm".into()))
}

/// `Q1 = (a, b)`, `Q2 = (c, d)`, `Q3 = (a, bxyz)`, `Q4 = (c, dxyz)` with
/// `x, y, z` norms from `Q(sqrt(ac))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConfiguration {
    pub a: SquareClass,
    pub b: SquareClass,
    pub c: SquareClass,
    pub d: SquareClass,
    pub x: SquareClass,
    pub y: SquareClass,
    pub z: SquareClass,
    pub quaternions: [QuaternionDatum; 4],
}

impl ChainConfiguration {
    pub fn new(values: [SquareClass; 7]) -> Result<Self> {
        let [a, b, c, d, x, y, z] = values;
        let q = x.mul(&y).mul(&z);
        let quaternions = [
            QuaternionDatum::new(a.clone(), b.clone()),
            QuaternionDatum::new(c.clone(), d.clone()),
            QuaternionDatum::new(a.clone(), b.mul(&q)),
            QuaternionDatum::new(c.clone(), d.mul(&q)),
        ];
        Ok(ChainConfiguration {
            a,
            b,
            c,
            d,
            x,
            y,
            z,
            quaternions,
        })
    }

    fn from_sample(s: &Sample) -> Result<Self> {
        Self::new([
            s.get("a")?,
            s.get("b")?,
            s.get("c")?,
            s.get("d")?,
            s.get("x")?,
            s.get("y")?,
            s.get("z")?,
        ])
    }

    pub fn sample(&self) -> Sample {
        let mut s = Sample::default();
        for (k, v) in [
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("x", &self.x),
            ("y", &self.y),
            ("z", &self.z),
        ] {
            s.insert(k, v.clone());
        }
        s
    }

    /// `xyz`.
    pub fn q(&self) -> SquareClass {
        self.x.mul(&self.y).mul(&self.z)
    }
}

pub fn sample_chain_configuration(seed: u64) -> Result<ChainConfiguration> {
    sample_chain_with(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn sample_chain_with(rng: &mut ChaCha8Rng) -> Result<ChainConfiguration> {
    let (a, b, c, d) = (sample_slot(rng), sample_slot(rng), sample_slot(rng), sample_slot(rng));
    let ac = a.mul(&c);
    let (x, y, z) = (sample_norm(rng, &ac)?, sample_norm(rng, &ac)?, sample_norm(rng, &ac)?);
    let chain = ChainConfiguration::new([a, b, c, d, x, y, z])?;
    if !brauer_relation_holds(&chain.quaternions)? {
        return Err(Error::Inconsistency(
            "sampled chain configuration violates the Brauer relation".into(),
        ));
    }
    Ok(chain)
}

/// Whether `sum [Q_i] = 0` in `Br(Q)`, by local symbols at every place where
/// some symbol can be nontrivial.
pub fn brauer_relation_holds(qs: &[QuaternionDatum]) -> Result<bool> {
    let mut places = std::collections::BTreeSet::from([Place::Infinity, Place::Prime(2)]);
    for q in qs {
        for e in [&q.a, &q.b] {
            places.extend(e.primes().iter().map(|&p| Place::Prime(p)));
        }
    }
    for v in places {
        let mut s = 1;
        for q in qs {
            s *= q.local_symbol(v)?;
        }
        if s != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn norm_sum(qs: &[QuaternionDatum]) -> DiagonalForm {
    let forms: Vec<DiagonalForm> = qs.iter().map(QuaternionDatum::norm_form).collect();
    DiagonalForm::sum(&forms)
}

/// `e_3(sum N_{Q_i})`, read at the real place as `signature / 8 mod 2`.
pub fn alpha_eval(qs: &[QuaternionDatum]) -> Result<u8> {
    if !brauer_relation_holds(qs)? {
        return Err(Error::Precondition(
            "the quaternion classes do not sum to zero in the Brauer group".into(),
        ));
    }
    let sum = norm_sum(qs);
    if !in_power_of_i(&sum, 3)? {
        return Err(Error::Inconsistency("the sum of norm forms is not in I^3".into()));
    }
    Ok((sum.signature() / 8).rem_euclid(2) as u8)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlbertCheck {
    pub form: DiagonalForm,
    pub q: SquareClass,
    /// `<q> phi` isometric to `phi`.
    pub similar: bool,
    /// `([Q1] + [Q2]) u (q)` vanishes at the real place.
    pub cup_vanishes: bool,
    pub agree: bool,
}

/// Compares `q` being a similarity factor of the Albert form
/// `<a, b, -ab, -c, -d, cd>` with the vanishing of `([Q1] + [Q2]) u (q)`.
pub fn albert_similarity_check(
    a: &SquareClass,
    b: &SquareClass,
    c: &SquareClass,
    d: &SquareClass,
    q: &SquareClass,
) -> Result<AlbertCheck> {
    let form = DiagonalForm::new(vec![
        a.clone(),
        b.clone(),
        a.mul(b).neg(),
        c.neg(),
        d.neg(),
        c.mul(d),
    ]);
    let similar = isometric(&form.scale(q), &form)?;
    let q1 = QuaternionDatum::new(a.clone(), b.clone());
    let q2 = QuaternionDatum::new(c.clone(), d.clone());
    let cup = q1.cup(q).orth(&q2.cup(q));
    let cup_vanishes = (cup.signature() / 8).rem_euclid(2) == 0;
    Ok(AlbertCheck {
        form,
        q: q.clone(),
        similar,
        cup_vanishes,
        agree: similar == cup_vanishes,
    })
}
