//! Norm-derivative orthogonality for finite-dimensional operators.
//!
//! The library computes the one-sided norm derivatives ρ'₊ and ρ'₋ for
//! Hilbert-space operators and for operators on real ℓ∞ⁿ, the induced
//! ρ-orthogonality and Birkhoff-James orthogonality predicates, numerical
//! and maximal numerical ranges, and constructive witnesses showing that
//! ρ-orthogonality is not symmetric except in the expected isometry cases.
//!
//! Everything is built on a self-contained dense linear algebra core
//! (cyclic Jacobi eigensolver, SVD via the Gram matrix, polar
//! decomposition); no external linear algebra dependency.

pub mod error;
pub mod matrix;
pub mod tol;

pub mod eig;
pub mod svd;

pub mod spectral;

pub mod rho;

pub mod linf;

pub mod symmetry;

pub mod selftest;

mod par;

pub use error::{Error, Result};
pub use matrix::{dot, norm2, Field, Matrix, C64};
pub use tol::Tolerances;

pub use eig::{hermitian_eig, EigenDecomposition};
pub use svd::{is_isometry, operator_norm, polar_decompose, svd, Svd};

pub use spectral::{
    is_extent_symmetric, maximal_numerical_range, norm_attainment_subspace, numerical_range,
    project_theta, real_extent, NormAttainmentSubspace, RangeKind, RangeSample, RealExtent,
};

pub use rho::{
    finite_difference_rho_minus, finite_difference_rho_plus, is_bj_orthogonal, is_rho_orthogonal,
    midpoint_shift, rho_operator, rho_vec, DerivativeReport, OrthogonalityVerdict,
};

pub use linf::{
    ext_support_functionals, linf_fixture_from_json, mt_ext, pointwise_witness_scan,
    rho_pm_linf_op, rho_pm_linf_vec, LinfFixture, LinfOperator, LinfVector, SupportFunctional,
};

pub use symmetry::{
    diagonal_truncation_study, identity_membership_in_s, left_witness, probe_left_symmetry,
    probe_right_symmetry, right_witness, w_symmetry_equivalence, Direction, SymmetryProbeReport,
    TruncationStudy, WitnessResult,
};
