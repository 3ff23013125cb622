//! Path validation and the JSON/CSV file formats.

pub mod format;
pub mod validate;

pub use format::{
    format_complex, frame_from_json, frame_to_json, matrix_from_json, matrix_to_json, parse_complex,
    parse_diagonal, path_from_json, path_to_json, PathFile, PathHeader,
};
pub use validate::{validate_path, write_residual_csv, ResidualRow, ValidationReport};
