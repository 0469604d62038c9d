//! Linear algebra kernels: exact fraction-free elimination, dense real
//! factorizations and eigenvalues, banded LU.

pub mod band_lu;
pub mod bareiss;
pub mod dense;

pub use band_lu::BandLu;
pub use dense::{DenseLu, DenseMatrix};
