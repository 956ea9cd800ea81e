//! K_0 of products of Severi-Brauer varieties and its gamma filtration.

pub mod config;
pub mod filtration;
pub mod gamma;
pub mod parse;
pub mod ring;

pub use config::SeveriBrauerConfig;
pub use filtration::{
    chow2_from_filtration, chow2_torsion, filtration_membership, gamma1_basis, gamma_filtration,
    graded_torsion, quillen_lattice, Chow2Report, GammaFiltration, GradedPiece,
    GradedTorsionReport, MembershipReport,
};
pub use gamma::{chern_class, gamma_op, gamma_series};
pub use parse::parse_element;
pub use ring::{Basis, RingElement, TruncatedPolyRing};
