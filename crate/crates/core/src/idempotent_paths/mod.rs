//! Paths between idempotents with the same diagonal.

pub mod compression;
pub mod connect;
pub mod grassmann;
pub mod reduction;

pub use compression::{affine_lift, expectation_compression_matrix, range_projection, CompressionSystem};
pub use connect::{connect_idempotents, connect_idempotents_traced, connect_irreducible, IdempotentConnection};
pub use grassmann::{base_unitary, check_in_omega, grassmann_path_in_omega, GrassmannCurve};
pub use reduction::{reduce_to_irreducible, ReductionStep, ReductionTrace};
