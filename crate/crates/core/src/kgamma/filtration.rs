//! Quillen lattice, gamma filtration and graded torsion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::config::SeveriBrauerConfig;
use super::gamma::gamma_series;
use super::parse::parse_element;
use super::ring::{RingElement, TruncatedPolyRing};
use crate::error::{Error, Result};
use crate::exactlin::matrix::bigint_str;
use crate::exactlin::{
    lattice_index, lattice_membership, saturation_torsion, FinAbelianGroup, HermiteAccumulator,
    Lattice, LatticeIndex, Membership, TorsionReport,
};

/// Image of `K_0(X) -> K_0(X_E)`: the span of `ind(i) x^i`, in y-coordinates.
pub fn quillen_lattice(config: &SeveriBrauerConfig) -> Lattice {
    let ring = config.ring();
    Lattice::from_hermite(HermiteAccumulator::from_vectors(
        ring.rank(),
        quillen_generators(config, &ring).into_iter().map(RingElement::into_coeffs),
    ))
}

fn quillen_generators(config: &SeveriBrauerConfig, ring: &TruncatedPolyRing) -> Vec<RingElement> {
    (0..ring.rank())
        .map(|i| ring.x_monomial(ring.exponents(i), config.ind(i)))
        .collect()
}

/// `ind(i) (x^i - 1)` for every non-trivial `i`: a basis of the rank kernel.
pub fn gamma1_basis(config: &SeveriBrauerConfig) -> Vec<RingElement> {
    let ring = config.ring();
    (1..ring.rank())
        .map(|i| {
            let xi = ring.x_monomial(ring.exponents(i), config.ind(i));
            ring.sub(&xi, &ring.constant(config.ind(i)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaFiltration {
    pub config: SeveriBrauerConfig,
    /// `lattices[d] = Gamma^d` for `0 <= d <= dim + 1`; `Gamma^0` is the Quillen lattice.
    pub lattices: Vec<Lattice>,
    pub gamma1_basis: Vec<RingElement>,
}

/// Builds every `Gamma^d` as the smallest family of lattices containing
/// `gamma_k(b)` in degrees `d <= k` and closed under
/// `gamma_k(b) * Gamma^{max(d - k, 1)} -> Gamma^d`.
///
/// Iterating to a fixed point yields the span of all products of gammas of
/// `Gamma^1` basis elements with total degree at least `d`.
pub fn gamma_filtration(config: &SeveriBrauerConfig) -> Result<GammaFiltration> {
    config.validate()?;
    let ring = config.ring();
    let dim = ring.dimension();
    let basis = gamma1_basis(config);

    // gammas[k] = gamma_k of every basis element, zeros dropped
    let mut gammas: Vec<Vec<RingElement>> = vec![Vec::new(); dim + 1];
    for b in &basis {
        let series = gamma_series(&ring, b, dim)?;
        for (k, g) in series.into_iter().enumerate().skip(1) {
            if g.is_zero() {
                continue;
            }
            if ring.y_order(&g).is_some_and(|o| o < k) {
                return Err(Error::Inconsistency(format!(
                    "gamma_{k} of a Gamma^1 generator has y-order below {k}"
                )));
            }
            gammas[k].push(g);
        }
    }

    let mut acc: Vec<HermiteAccumulator> =
        (0..=dim + 1).map(|_| HermiteAccumulator::new(ring.rank())).collect();
    for (d, a) in acc.iter_mut().enumerate().skip(1) {
        for gk in gammas.iter().skip(d) {
            for g in gk {
                a.insert(g.coeffs().to_vec());
            }
        }
    }
    loop {
        let mut grew = false;
        for d in 1..=dim + 1 {
            for (k, gk) in gammas.iter().enumerate().skip(1) {
                let src: Vec<Vec<BigInt>> = acc[d.saturating_sub(k).max(1)].rows().to_vec();
                for g in gk {
                    for row in &src {
                        let r = ring.element(row.clone())?;
                        grew |= acc[d].insert(ring.mul(g, &r).into_coeffs());
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }

    let mut lattices = vec![quillen_lattice(config)];
    lattices.extend(acc.into_iter().skip(1).map(Lattice::from_hermite));

    let filtration = GammaFiltration {
        config: config.clone(),
        lattices,
        gamma1_basis: basis,
    };
    filtration.check(&ring)?;
    Ok(filtration)
}

impl GammaFiltration {
    pub fn dimension(&self) -> usize {
        self.lattices.len() - 2
    }

    /// `Gamma^d`, which is zero beyond the dimension.
    pub fn level(&self, d: usize) -> Lattice {
        self.lattices
            .get(d)
            .cloned()
            .unwrap_or_else(|| Lattice::zero(self.lattices[0].ambient_rank()))
    }

    fn check(&self, ring: &TruncatedPolyRing) -> Result<()> {
        let dim = self.dimension();
        let gamma1 = Lattice::from_generators(
            ring.rank(),
            self.gamma1_basis.iter().map(|b| b.coeffs().to_vec()).collect(),
        )?;
        if self.lattices[1] != gamma1 {
            return Err(Error::Inconsistency("Gamma^1 differs from the rank kernel".into()));
        }
        if self.lattices[dim + 1].rank() != 0 {
            return Err(Error::Inconsistency(format!("Gamma^{} is not zero", dim + 1)));
        }
        for d in 0..=dim {
            if !self.lattices[d + 1].is_sublattice_of(&self.lattices[d]) {
                return Err(Error::Inconsistency(format!("Gamma^{} is not inside Gamma^{d}", d + 1)));
            }
            for v in self.lattices[d].basis() {
                let low = v
                    .iter()
                    .enumerate()
                    .any(|(i, c)| !c.is_zero() && ring.total_degree(i) < d);
                if low {
                    return Err(Error::Inconsistency(format!(
                        "Gamma^{d} has an element of y-degree below {d}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub degree: usize,
    pub element: RingElement,
    pub display: String,
    pub lattice: Lattice,
    pub membership: Membership,
}

/// Decides whether the expression lies in `Gamma^d`.
pub fn filtration_membership(
    filtration: &GammaFiltration,
    expression: &str,
    d: usize,
) -> Result<MembershipReport> {
    let ring = filtration.config.ring();
    let element = parse_element(&ring, expression)?;
    let lattice = filtration.level(d);
    let membership = lattice_membership(element.coeffs(), &lattice)?;
    Ok(MembershipReport {
        degree: d,
        display: ring.format(&element),
        element,
        lattice,
        membership,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub degree: usize,
    /// `Gamma^{d/d+1}` including its free part.
    pub quotient: FinAbelianGroup,
    pub torsion: TorsionReport,
    /// Index of the image of `Gamma^d` in the degree-`d` part of the split ring.
    #[serde(with = "bigint_str")]
    pub epsilon: BigInt,
    /// Index of the degree-`d` image of `K_0(X)` intersected with y-degree `>= d`.
    #[serde(with = "bigint_str")]
    pub degree_filtration_index: BigInt,
    /// `epsilon / degree_filtration_index`, as `p` or `p/q`.
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedTorsionReport {
    pub config: String,
    pub pieces: Vec<GradedPiece>,
    #[serde(with = "bigint_str")]
    pub torsion_order: BigInt,
    #[serde(with = "bigint_str")]
    pub split_index: BigInt,
    #[serde(with = "bigint_str")]
    pub epsilon_product: BigInt,
    pub counting_identity_holds: bool,
}

impl GradedTorsionReport {
    pub fn epsilon(&self) -> Vec<BigInt> {
        self.pieces.iter().map(|p| p.epsilon.clone()).collect()
    }

    pub fn piece(&self, d: usize) -> Option<&GradedPiece> {
        self.pieces.iter().find(|p| p.degree == d)
    }
}

pub fn graded_torsion(filtration: &GammaFiltration) -> Result<GradedTorsionReport> {
    let config = &filtration.config;
    let ring = config.ring();
    let dim = filtration.dimension();
    let quillen = &filtration.lattices[0];

    // K_0(X) meet y-degree >= d, read off a Hermite basis in degree-ascending coordinates
    let mut order: Vec<usize> = (0..ring.rank()).collect();
    order.sort_by_key(|&i| (ring.total_degree(i), i));
    let permuted = quillen.project(&order);

    let mut pieces = Vec::with_capacity(dim + 1);
    for d in 0..=dim {
        let upper = &filtration.lattices[d];
        let lower = &filtration.lattices[d + 1];
        let torsion = saturation_torsion(lower, upper)?;
        let quotient = crate::exactlin::subquotient_structure(lower, upper)?;
        let monos = ring.monomials_of_degree(d);
        let epsilon = finite_index(&upper.project(&monos), d, "epsilon")?;

        let first = order.iter().position(|&i| ring.total_degree(i) == d).expect("degree present");
        let tail: Vec<Vec<BigInt>> = permuted
            .basis()
            .iter()
            .zip(permuted_pivots(&permuted))
            .filter(|(_, p)| *p >= first)
            .map(|(row, _)| row[first..first + monos.len()].to_vec())
            .collect();
        let graded = Lattice::from_generators(monos.len(), tail)?;
        let top = finite_index(&graded, d, "degree filtration")?;
        let g = epsilon.gcd(&top);
        let delta = if g == top {
            (&epsilon / &top).to_string()
        } else {
            format!("{}/{}", &epsilon / &g, &top / &g)
        };
        pieces.push(GradedPiece {
            degree: d,
            quotient,
            torsion,
            epsilon,
            degree_filtration_index: top,
            delta,
        });
    }

    let torsion_order: BigInt = pieces.iter().map(|p| p.torsion.group.torsion_order()).product();
    let epsilon_product: BigInt = pieces.iter().map(|p| p.epsilon.clone()).product();
    let split_index = match lattice_index(quillen, &Lattice::full(ring.rank()))? {
        LatticeIndex::Finite(n) => n,
        LatticeIndex::Infinite => {
            return Err(Error::Inconsistency("Quillen lattice is not of full rank".into()))
        }
    };
    if split_index != config.split_index() {
        return Err(Error::Inconsistency(format!(
            "Quillen lattice index {split_index} differs from the product of indices {}",
            config.split_index()
        )));
    }
    Ok(GradedTorsionReport {
        config: config.name.clone(),
        counting_identity_holds: &torsion_order * &split_index == epsilon_product,
        pieces,
        torsion_order,
        split_index,
        epsilon_product,
    })
}

fn permuted_pivots(l: &Lattice) -> Vec<usize> {
    l.basis()
        .iter()
        .map(|row| row.iter().position(|c| !c.is_zero()).expect("basis rows are nonzero"))
        .collect()
}

fn finite_index(l: &Lattice, d: usize, what: &str) -> Result<BigInt> {
    match lattice_index(l, &Lattice::full(l.ambient_rank()))? {
        LatticeIndex::Finite(n) => Ok(n),
        LatticeIndex::Infinite => Err(Error::Inconsistency(format!(
            "{what} lattice in degree {d} is not of full rank"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chow2Report {
    pub config: String,
    pub group: FinAbelianGroup,
    pub witnesses: Vec<crate::exactlin::TorsionWitness>,
    pub witness_display: Vec<String>,
    pub provenance: String,
}

/// Torsion of `Gamma^{2/3}`, reported as the torsion of the second Chow group.
pub fn chow2_torsion(config: &SeveriBrauerConfig) -> Result<Chow2Report> {
    let filtration = gamma_filtration(config)?;
    chow2_from_filtration(&filtration)
}

pub fn chow2_from_filtration(filtration: &GammaFiltration) -> Result<Chow2Report> {
    let ring = filtration.config.ring();
    let report = saturation_torsion(&filtration.level(3), &filtration.level(2))?;
    let witness_display = report
        .witnesses
        .iter()
        .map(|w| Ok(ring.format(&ring.element(w.element.clone())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Chow2Report {
        config: filtration.config.name.clone(),
        group: report.group,
        witnesses: report.witnesses,
        witness_display,
        provenance: "CH^2 torsion identified with Gamma^{2/3} torsion: the second Chow group \
                     of the generic variety is generated by Chern classes, and the product of \
                     Severi-Brauer varieties reduces to it by the projective bundle theorem"
            .into(),
    })
}
