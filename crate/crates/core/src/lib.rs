//! Exact computations behind the degree-3 cohomological invariants of
//! `(SL2)^n / mu`, `(GL2)^n / mu` and `(SL4 x SL4) / mu`.
//!
//! * [`exactlin`]: Hermite/Smith normal forms, lattices, abelian group structure.
//! * [`roots`]: character lattices, Weyl-invariant quadratic forms, the image
//!   of the second Chern class and the indecomposable invariant group.
//! * [`kgamma`]: K_0 of products of Severi-Brauer varieties, gamma operations
//!   and the gamma filtration with its graded torsion.
//! * [`wittq`]: quadratic forms over Q, Hilbert symbols, Witt classes and the
//!   randomized identity suites.
//! * [`presets`]: registered groups and the assembly of the main table.
//! * [`certificate`]: machine-checkable certificates and their checker.

pub mod certificate;
pub mod error;
pub mod exactlin;
pub mod kgamma;
pub mod presets;
pub mod roots;
pub mod wittq;

pub use error::{Error, Result};
pub use exactlin::{FinAbelianGroup, IntMatrix, Lattice};
