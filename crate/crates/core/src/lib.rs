//! Spacetime algebras generated from U(N).
//!
//! Starting from an orthonormal basis of `N x N` hermitian matrices this
//! crate builds the structure constants of their commutators and
//! anticommutators, the `2N`- and `N²`-dimensional generators of
//! rotations, boosts and translations, the finite transformations they
//! generate, and the momentum matrices on reducible representations.
//! Every identity the construction relies on has a `verify_*` routine that
//! reports its numerical residual.
//!
//! Indices are 0-based throughout; the time direction is the last flat
//! index `N² - 1`.

pub mod algebra;
pub mod basis;
mod error;
pub mod export;
pub mod geometry;
pub mod linalg;
pub mod momentum;
pub mod report;
mod sign;
pub mod structure;

pub use algebra::{
    build_2n_generators, build_n2_generators, extract_copycat, verify_lorentz_weyl, verify_poincare_weyl,
    GeneratorSet2N, GeneratorSetN2,
};
pub use basis::{
    anti_rep, apply_basis_change, build_utility_basis, expand_in_basis, BasisChange, BasisKind, BasisLabel, Family,
    HermitianBasis,
};
pub use error::Error;
pub use geometry::{
    build_transform, covariance_check, interval_first_order_change, rotation_invariance_check,
    subspace_invariance_check, transform_event, Event, Transform, TransformParams,
};
pub use linalg::{ComplexMatrix, LinalgError, DEFAULT_TOL};
pub use momentum::{
    basis_change_covariance, build_similarity, cg_factorization_check, combine_reps, solve_momentum, BlockSide,
    CombinedRep, MomentumSolution, RepKind, SimilarityMap,
};
pub use num_complex::Complex64;
pub use report::{VerificationRecord, VerificationReport};
pub use sign::Sign;
pub use structure::{compute_structure_constants, verify_symmetries, verify_time_index, StructureConstants};

pub type Result<T, E = Error> = std::result::Result<T, E>;
