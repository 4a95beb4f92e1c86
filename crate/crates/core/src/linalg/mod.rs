//! Dense complex linear algebra at desk scale (n ≲ 32).

pub mod eigen;
pub mod funcs;
pub mod json;
pub mod matrix;
pub mod norms;
pub mod polar;
pub mod svd;

pub use eigen::{hermitian_eig, hermitian_eigenvalues, EigSystem};
pub use funcs::{frac_power, geometric_mean, geometric_mean_with_floor};
pub use json::{matrix_from_json, matrix_to_json, read_matrix, write_matrix};
pub use matrix::{basis, inner, normalized, vec_norm, CMatrix, CVector};
pub use norms::{angle, numerical_radius, numerical_radius_witness, spectral_norm, DEFAULT_RADIUS_GRID, DEFAULT_REFINE_TOL};
pub use polar::{abs, abs_adjoint, polar, PolarParts};
pub use svd::{singular_values, svd, Svd};
