//! Exact Tutte-type invariants of matroids, matroid quotients and flag
//! matroids, computed through lattice-point generating functions of base
//! polytope tangent cones.

pub mod cone;
pub mod corpus;
pub mod equivariant;
pub mod error;
pub mod flag;
pub mod genfun;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod poly;
pub mod subset;
pub mod verify;

pub use cone::{
    cone_membership, flip_cone, tangent_cone_generators, triangulate_half_open, Direction, HalfOpenSimplicialCone,
    LatticeVector,
};
pub use equivariant::EquivariantPolynomial;
pub use error::{Error, Result};
pub use flag::{higgs_factorization, pseudo_bases, FlagBasis, FlagMatroid};
pub use genfun::{brion_series, GenFun, GenFunTerm, Shift, TermGroup};
pub use io::{parse_document, Diagram, Document, Input};
pub use matroid::{is_quotient, Matroid};
pub use poly::{AuxPolynomial, Var};
pub use subset::Subset;
pub use verify::{run_identity, Check, IdentityReport};
