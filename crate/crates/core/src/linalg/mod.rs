//! Dense real/complex matrix kernel.

pub mod eigen;
pub mod lu;
pub mod matrix;
pub mod polar;
pub mod unitary;

pub use eigen::{
    gram_schmidt_ordered, hermitian_eig, hermitian_eig_tol, orthonormal_basis, projection_range_basis, psd_sqrt,
    psd_sqrt_tol, rank, singular_values, HermitianEig,
};
pub use lu::{det, inverse, Lu};
pub use matrix::{inner, outer, real, vec_norm, Field, Matrix, C64, I, ONE, ZERO};
pub use polar::{closest_isometry, extend_partial_isometry, extend_to_unitary, polar_partial_isometry, Polar};
pub use unitary::{
    expm_skew_hermitian, orthogonal_det_sign, principal_unitary_log_path, unitary_eig, unitary_residual, UnitaryEig,
    UnitaryLog,
};
