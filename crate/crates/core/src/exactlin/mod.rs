//! Exact integer linear algebra: Hermite and Smith normal forms, lattice
//! membership with certificates, and finitely generated abelian groups
//! presented as subquotients of lattices.

pub mod group;
pub mod hermite;
pub mod lattice;
pub mod matrix;
pub mod smith;

pub use group::FinAbelianGroup;
pub use hermite::HermiteAccumulator;
pub use lattice::{
    integer_kernel, lattice_index, lattice_membership, saturation_torsion, subquotient_structure, verify_order,
    Lattice, LatticeIndex, Membership, NonMembership, Subquotient, TorsionReport, TorsionWitness,
};
pub use matrix::{vec_from_i64, IntMatrix};
pub use smith::{smith_normal_form, SmithDecomposition};
