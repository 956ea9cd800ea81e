//! Machine-checkable certificates.
//!
//! Each entry carries enough raw data to be re-verified from scratch with the
//! exact lattice routines: a checker never trusts a stored verdict. A SHA-256
//! digest over the entries additionally pins the whole document, so fields
//! with no mathematical content (labels, trial numbers) are covered too.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactlin::matrix::{bigint_str, bigvec};
use crate::exactlin::{
    lattice_index, subquotient_structure, verify_order, FinAbelianGroup, Lattice, LatticeIndex,
    NonMembership, SmithDecomposition,
};
use crate::wittq::{check_identity, IdentityCase, IdentityId, Sample};

pub const FORMAT: &str = "sdinv-cert/1";

/// External results the verdicts depend on beyond exact arithmetic.
pub fn assumptions() -> Vec<String> {
    vec![
        "quadratic forms over Q are classified by dimension, discriminant, local Hasse \
         invariants and signature"
            .into(),
        "H^3(Q, Z/2) is carried by the real place, so I^4(Q) is detected by signature mod 16"
            .into(),
    ]
}

/// A lattice as the span of explicit generators in `Z^ambient_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub ambient_rank: usize,
    #[serde(with = "bigvec::nested")]
    pub generators: Vec<Vec<BigInt>>,
}

impl Span {
    pub fn of(lattice: &Lattice) -> Self {
        Span {
            ambient_rank: lattice.ambient_rank(),
            generators: lattice.generators().to_vec(),
        }
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::from_generators(self.ambient_rank, self.generators.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertEntry {
    /// `basis` is the canonical Hermite basis of the span.
    HermiteBasis {
        label: String,
        span: Span,
        #[serde(with = "bigvec::nested")]
        basis: Vec<Vec<BigInt>>,
    },
    /// `U A V = D` with `U`, `V` unimodular and `D` in Smith form.
    Smith {
        label: String,
        decomposition: SmithDecomposition,
    },
    /// `vector = sum coordinates[i] * generators[i]`.
    MembershipYes {
        label: String,
        span: Span,
        #[serde(with = "bigvec")]
        vector: Vec<BigInt>,
        #[serde(with = "bigvec")]
        coordinates: Vec<BigInt>,
    },
    MembershipNo {
        label: String,
        span: Span,
        #[serde(with = "bigvec")]
        vector: Vec<BigInt>,
        certificate: NonMembership,
    },
    /// `sup / sub` has the stated structure.
    Subquotient {
        label: String,
        sub: Span,
        sup: Span,
        group: FinAbelianGroup,
    },
    /// `element` lies in `sup` and has exactly the stated order modulo `sub`.
    TorsionWitness {
        label: String,
        sub: Span,
        sup: Span,
        #[serde(with = "bigvec")]
        element: Vec<BigInt>,
        #[serde(with = "bigint_str")]
        order: BigInt,
    },
    /// `[sup : sub]`, absent when infinite.
    Index {
        label: String,
        sub: Span,
        sup: Span,
        index: Option<String>,
    },
    /// `torsion_order * split_index = prod epsilons`.
    CountingIdentity {
        label: String,
        #[serde(with = "bigint_str")]
        torsion_order: BigInt,
        #[serde(with = "bigint_str")]
        split_index: BigInt,
        #[serde(with = "bigvec")]
        epsilons: Vec<BigInt>,
    },
    IdentityTrial {
        identity: IdentityId,
        seed: u64,
        trial: usize,
        sample: Sample,
        passed: bool,
    },
}

impl CertEntry {
    pub fn kind(&self) -> &'static str {
        match self {
            CertEntry::HermiteBasis { .. } => "hermite_basis",
            CertEntry::Smith { .. } => "smith",
            CertEntry::MembershipYes { .. } => "membership_yes",
            CertEntry::MembershipNo { .. } => "membership_no",
            CertEntry::Subquotient { .. } => "subquotient",
            CertEntry::TorsionWitness { .. } => "torsion_witness",
            CertEntry::Index { .. } => "index",
            CertEntry::CountingIdentity { .. } => "counting_identity",
            CertEntry::IdentityTrial { .. } => "identity_trial",
        }
    }

    pub fn hermite(label: &str, lattice: &Lattice) -> Self {
        CertEntry::HermiteBasis {
            label: label.into(),
            span: Span::of(lattice),
            basis: lattice.basis().to_vec(),
        }
    }

    pub fn membership(
        label: &str,
        lattice: &Lattice,
        vector: &[BigInt],
        verdict: &crate::exactlin::Membership,
    ) -> Self {
        use crate::exactlin::Membership;
        // coordinates refer to the nonzero generators
        let span = Span {
            ambient_rank: lattice.ambient_rank(),
            generators: lattice
                .generators()
                .iter()
                .filter(|g| g.iter().any(|x| !x.is_zero()))
                .cloned()
                .collect(),
        };
        match verdict {
            Membership::Member { coordinates } => CertEntry::MembershipYes {
                label: label.into(),
                span,
                vector: vector.to_vec(),
                coordinates: coordinates.clone(),
            },
            Membership::NonMember { certificate } => CertEntry::MembershipNo {
                label: label.into(),
                span,
                vector: vector.to_vec(),
                certificate: certificate.clone(),
            },
        }
    }

    pub fn subquotient(label: &str, sub: &Lattice, sup: &Lattice, group: &FinAbelianGroup) -> Self {
        CertEntry::Subquotient {
            label: label.into(),
            sub: Span::of(sub),
            sup: Span::of(sup),
            group: group.clone(),
        }
    }

    pub fn torsion_witness(
        label: &str,
        sub: &Lattice,
        sup: &Lattice,
        element: &[BigInt],
        order: &BigInt,
    ) -> Self {
        CertEntry::TorsionWitness {
            label: label.into(),
            sub: Span::of(sub),
            sup: Span::of(sup),
            element: element.to_vec(),
            order: order.clone(),
        }
    }

    pub fn index(label: &str, sub: &Lattice, sup: &Lattice, index: &LatticeIndex) -> Self {
        CertEntry::Index {
            label: label.into(),
            sub: Span::of(sub),
            sup: Span::of(sup),
            index: index.finite().map(ToString::to_string),
        }
    }

    pub fn identity_trial(case: &IdentityCase) -> Self {
        CertEntry::IdentityTrial {
            identity: case.identity,
            seed: case.seed,
            trial: case.trial,
            sample: case.sample.clone(),
            passed: case.passed,
        }
    }

    /// Re-derives the claim from the stored data.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Inconsistency(msg));
        match self {
            CertEntry::HermiteBasis { span, basis, .. } => {
                if span.lattice()?.basis() != basis.as_slice() {
                    return fail("basis is not the Hermite basis of the span".into());
                }
            }
            CertEntry::Smith { decomposition, .. } => decomposition.verify()?,
            CertEntry::MembershipYes {
                span,
                vector,
                coordinates,
                ..
            } => {
                if coordinates.len() != span.generators.len() || vector.len() != span.ambient_rank {
                    return fail("membership coordinates have the wrong length".into());
                }
                let mut acc = vec![BigInt::zero(); span.ambient_rank];
                for (c, g) in coordinates.iter().zip(&span.generators) {
                    if g.len() != span.ambient_rank {
                        return fail("generator of the wrong length".into());
                    }
                    for (a, x) in acc.iter_mut().zip(g) {
                        *a += c * x;
                    }
                }
                if &acc != vector {
                    return fail("coordinates do not reproduce the vector".into());
                }
            }
            CertEntry::MembershipNo {
                span,
                vector,
                certificate,
                ..
            } => {
                if vector.len() != span.ambient_rank || !certificate.verify(&span.generators, vector) {
                    return fail("non-membership functional does not separate the vector".into());
                }
            }
            CertEntry::Subquotient { sub, sup, group, .. } => {
                let (sub, sup) = (sub.lattice()?, sup.lattice()?);
                if !sub.is_sublattice_of(&sup) {
                    return fail("sub is not contained in sup".into());
                }
                if &subquotient_structure(&sub, &sup)? != group {
                    return fail("subquotient structure differs".into());
                }
            }
            CertEntry::TorsionWitness {
                sub,
                sup,
                element,
                order,
                ..
            } => {
                let (sub, sup) = (sub.lattice()?, sup.lattice()?);
                if element.len() != sup.ambient_rank() || !sup.contains(element) {
                    return fail("witness does not lie in sup".into());
                }
                if !verify_order(element, order, &sub) {
                    return fail(format!("witness does not have order {order}"));
                }
            }
            CertEntry::Index { sub, sup, index, .. } => {
                let got = lattice_index(&sub.lattice()?, &sup.lattice()?)?;
                if got.finite().map(ToString::to_string) != *index {
                    return fail(format!("index is {got}"));
                }
            }
            CertEntry::CountingIdentity {
                torsion_order,
                split_index,
                epsilons,
                ..
            } => {
                let prod: BigInt = epsilons.iter().product();
                if torsion_order * split_index != prod || epsilons.is_empty() {
                    return fail("counting identity does not hold".into());
                }
            }
            CertEntry::IdentityTrial {
                identity,
                sample,
                passed,
                ..
            } => {
                let (_, _, ok) = check_identity(*identity, sample)?;
                if ok != *passed {
                    return fail(format!("identity {identity} evaluates to {ok}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub command: String,
    pub assumptions: Vec<String>,
    pub entries: Vec<CertEntry>,
    pub digest: String,
}

#[derive(Serialize)]
struct Digested<'a> {
    format: &'a str,
    command: &'a str,
    assumptions: &'a [String],
    entries: &'a [CertEntry],
}

impl Certificate {
    pub fn new(command: &str) -> Self {
        Certificate {
            format: FORMAT.into(),
            command: command.into(),
            assumptions: assumptions(),
            entries: Vec::new(),
            digest: String::new(),
        }
    }

    pub fn push(&mut self, entry: CertEntry) {
        self.entries.push(entry);
    }

    pub fn compute_digest(&self) -> Result<String> {
        let body = serde_json::to_vec(&Digested {
            format: &self.format,
            command: &self.command,
            assumptions: &self.assumptions,
            entries: &self.entries,
        })
        .map_err(|e| Error::Inconsistency(format!("cannot serialize certificate: {e}")))?;
        Ok(hex::encode(Sha256::digest(&body)))
    }

    pub fn seal(mut self) -> Result<Self> {
        self.digest = self.compute_digest()?;
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Inconsistency(format!("cannot serialize certificate: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed certificate: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub entries: usize,
    pub digest_ok: bool,
    /// `(entry index, kind, reason)` for every entry that failed.
    pub failures: Vec<(usize, String, String)>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.digest_ok && self.failures.is_empty()
    }
}

/// Verifies every entry independently, then the digest.
pub fn check_certificate(cert: &Certificate) -> Result<CheckReport> {
    if cert.format != FORMAT {
        return Err(Error::Input(format!(
            "unsupported certificate format '{}', expected '{FORMAT}'",
            cert.format
        )));
    }
    let failures = cert
        .entries
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.check().err().map(|err| (i, e.kind().to_string(), err.to_string())))
        .collect();
    Ok(CheckReport {
        entries: cert.entries.len(),
        digest_ok: cert.compute_digest()? == cert.digest,
        failures,
    })
}

pub fn check_certificate_json(text: &str) -> Result<CheckReport> {
    check_certificate(&Certificate::from_json(text)?)
}

/// `prod epsilon_d` split into the three operands of the counting identity.
pub fn counting_entry(label: &str, torsion: &BigInt, split: &BigInt, eps: &[BigInt]) -> CertEntry {
    CertEntry::CountingIdentity {
        label: label.into(),
        torsion_order: torsion.clone(),
        split_index: split.clone(),
        epsilons: eps.to_vec(),
    }
}
