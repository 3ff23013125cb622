pub mod config;
pub mod diagonal;
pub mod error;
pub mod frames;
pub mod idempotent;
pub mod idempotent_paths;
pub mod linalg;
pub mod path;
pub mod pathio;
pub mod projection_paths;
pub mod random;
