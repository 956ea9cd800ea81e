//! Character lattices, Weyl-invariant quadratic forms and the image of the
//! second Chern class for quotients of products of `SL2`, `GL2`, `SL4`, `GL4`.

pub mod character;
pub mod chern;
pub mod preset;
pub mod sym2;

pub use character::{
    character_lattice, invariant_quadratic_lattice, project_to_semisimple, to_lattice_monomials,
    CentralQuotientDatum, CharacterLattice, InvariantForms, NamedVector, WeylAction,
};
pub use chern::{chern2_of_character, dec_subgroup, DecGenerators, DecSubgroup, WeightMultiset};
pub use preset::{
    analyze, indecomposable_group, ClassWitness, GroupPreset, Projection, RootsAnalysis, MAX_N, MIN_N,
};
pub use sym2::{format_linear, format_quadratic, sym2_dim, sym2_index, sym2_map, sym2_product, QuadSpaceElement};
