//! Exact construction of the classical Lie algebras `A_n`, `B_n`, `C_n`, `D_n`
//! extended by a central torus, their Manin triples and Lie-bialgebra
//! structures, with exact verification of every defining identity.

pub mod algebra;
pub mod bialgebra;
pub mod double;
pub mod element;
pub mod error;
pub mod export;
pub mod generator;
pub mod linalg;
pub mod report;
pub mod reps;
pub mod scalar;
pub mod table;
pub mod tensor;

pub use algebra::{build_series, verify_jacobi, LieAlgebra};
pub use bialgebra::{
    build_r_matrix, cocommutator_explicit, cocommutator_from_structure, verify_chain_embedding, verify_coboundary,
    verify_cocycle, verify_cojacobi, verify_cybe, verify_delta_agreement, verify_subbialgebra,
    verify_twist_triviality, CocommutatorTable, RMatrix, Transcription, TwistMode,
};
pub use double::{
    crossed_brackets, pairing_eval, split, verify_compatibility, verify_form_invariance, verify_reconstruction,
    verify_self_duality, CartanRotation, ManinTriple, SplitMode, SplittingSpec, TripleCache,
};
pub use element::{Element, SparseVec};
pub use error::{Error, Result};
pub use generator::{enumerate_generators, Basis, GeneratorId, Kind, Series};
pub use reps::{
    bosonic_rep, casimir_check, fermionic_rep, verify_rep_homomorphism, CasimirElement, ExactRep, FloatRep, FockBasis,
    MatrixRep, SparseMatrix, Statistics,
};
pub use report::{Report, Residual, Violation};
pub use scalar::Scalar;
pub use table::StructureTable;
