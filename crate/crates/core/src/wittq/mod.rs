//! Quadratic forms over Q: Hilbert symbols, Witt classes, powers of the
//! fundamental ideal and randomized checks of identities between quaternion
//! norm forms.
//!
//! Pfister forms follow `<<a>> = <1, -a>`, so `<<a, b>>` is the norm form of
//! the quaternion algebra `(a, b)`.

pub mod form;
pub mod identities;
pub mod square;

pub use form::{
    in_power_of_i, is_hyperbolic, isometric, witt_equivalent, witt_invariants, DiagonalForm,
    PfisterSpec, WittInvariants,
};
pub use identities::{
    albert_similarity_check, alpha_eval, brauer_relation_holds, check_identity,
    sample_chain_configuration, verify_identity, AlbertCheck, ChainConfiguration,
    CongruenceLevel, IdentityCase, IdentityId, QuaternionDatum, Sample,
};
pub use square::{hilbert_symbol, parse_rational, Place, SquareClass};
