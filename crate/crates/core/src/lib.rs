//! Exact computations with the alternating elements of the positive part of
//! quantum affine `sl_2`, tridiagonal systems of q-Serre type, the Leonard
//! systems built from them, and their realization on bilinear forms graphs.

pub mod alternating;
pub mod carrier;
pub mod drg;
pub mod error;
pub mod leonard;
pub mod linalg;
pub mod relations;
pub mod report;
pub mod scalar;
pub mod series;
pub mod td;
pub mod word;

pub use alternating::{generate_alternating, AlternatingFamily};
pub use carrier::{AlgebraCarrier, Flavor, FreeCarrier, MatrixCarrier, ShuffleCarrier};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use report::Report;
pub use scalar::{parse_rational, BParams, QParams, Rational};
pub use series::TruncatedSeries;
pub use word::{Kind, NCPoly, Word};
