//! Exact linear algebra over the rationals.

mod eigen;
mod matrix;
mod subspace;

pub use eigen::{
    char_poly, eigen_decompose, poly_eval, primitive_idempotents, rational_roots, rational_roots_with_hints, rationalize,
    EigenDecomposition,
};
pub use matrix::Matrix;
pub use subspace::SubspaceBasis;
