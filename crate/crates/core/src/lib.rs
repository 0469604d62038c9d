//! Moment methods for the quantum Rabi model
//! `H = ω₀/2 σ_z + ω b†b + g(σ₊ + σ₋)(b† + b)`.
//!
//! * [`basis`]: basis labelling and the banded Hamiltonian in a symmetric
//!   (real) and a scaled (rational) form.
//! * [`moments`]: exact moments `μ_j` and connected moments `I_j`, numeric or
//!   as polynomials in (ω₀, ω, g).
//! * [`cmx`]: connected-moments expansion estimates of the ground energy.
//! * [`rrk`]: Rayleigh–Ritz in the Krylov space, with adaptive precision.
//! * [`reference`]: high-precision ground energies by inverse iteration.
//! * [`report`] and [`cli`]: diagnostic series, CSV files, command line.
//!
//! Numerical kernels are generic over the scalar traits in [`scalar`]; the
//! aliases below fix the concrete types used by the pipelines.

#![allow(clippy::needless_range_loop)]

pub mod band;
pub mod basis;
pub mod cli;
pub mod cmx;
pub mod error;
pub mod hp;
pub mod linalg;
pub mod moments;
pub mod params;
pub mod poly;
pub mod rational;
pub mod reference;
pub mod report;
pub mod rrk;
pub mod scalar;

pub use band::BandSparseMatrix;
pub use basis::{
    build_hamiltonian, build_parity, decode_index, encode_label, BasisLabel, Form, HamiltonianMatrix, Spin,
};
pub use cmx::{cmx_cioslowski, cmx_knowles, cmx_sweep, t_expansion_eval, CmxEstimate, CmxFormula};
pub use error::{Error, Result};
pub use hp::HighPrecisionReal;
pub use moments::{
    connected_moments, krylov_moments, symbolic_connected_moments, symbolic_moments, truncation_check,
    MomentTable, PolyMoment,
};
pub use params::ModelParams;
pub use poly::{Poly, Symbol};
pub use reference::{ground_energy, ReferenceEnergy};
pub use report::{convergence_series, ratio_series, DiagnosticSeries, Method, PointValue, SeriesKind};
pub use rrk::{rrk_all_roots, rrk_ground, rrk_sweep, RrkEstimate};
pub use scalar::{Precision, Real};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Banded matrix over exact rationals (scaled form).
pub type RationalMatrix = BandSparseMatrix<Rational>;
/// Banded matrix at arbitrary floating precision (symmetric form).
pub type RealMatrix = BandSparseMatrix<HighPrecisionReal>;
/// Banded matrix of polynomials in (ω₀, ω, g).
pub type PolyMatrix = BandSparseMatrix<Poly>;
/// Banded matrix in double precision.
pub type F64Matrix = BandSparseMatrix<f64>;
