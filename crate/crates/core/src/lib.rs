//! Matching numbers, NEB trees, and skew-symmetric inverse eigenvalue
//! problems on graphs.
//!
//! The crate has four layers:
//!
//! * [`graph`] — simple undirected graphs on `1..=n`, maximum matchings
//!   (blossom search plus a brute-force oracle), Tutte certificates,
//!   spanning trees through a matching, and matching-aligned relabelings.
//! * [`neb`] — the nearly-even-branching property of trees: NEB roots,
//!   witnesses for trees that are NEB nowhere, and minimal non-NEB subtrees.
//! * [`spectral`] — skew-symmetric matrices and their structured patterns:
//!   eigendecompositions, numeric and exact ranks, maximum skew rank
//!   certificates, analytic eigenvalue derivatives, and the spectrum
//!   Jacobian in the matched variables.
//! * [`solver`] — the constructive inverse eigenvalue solver: given a graph
//!   with matching number `k` and `k` distinct positive targets, build a
//!   real skew-symmetric matrix whose graph is exactly the input and whose
//!   spectrum is the targets as conjugate pairs plus `n - 2k` zeros.
//!
//! Numeric code is generic over the scalar (`f32` or `f64`) through the
//! [`Real`] trait; the exact-rank path runs on arbitrary-precision
//! rationals. Concrete aliases live at the crate root.

pub mod graph;
pub mod neb;
pub mod spectral;
pub mod solver;

/// Floating-point scalar for the numeric lane: `f32` or `f64`.
pub trait Real: nalgebra::RealField + num_traits::NumCast + Copy {}
impl<T> Real for T where T: nalgebra::RealField + num_traits::NumCast + Copy {}

/// Anything storable as a skew-matrix entry: real floats or exact rationals.
pub trait Entry: Clone + PartialEq + num_traits::Zero + std::ops::Neg<Output = Self> {}
impl<T> Entry for T where T: Clone + PartialEq + num_traits::Zero + std::ops::Neg<Output = Self> {}

/// Exact arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;

/// Skew-symmetric matrix over `f64`.
pub type SkewMatrix64 = spectral::SkewMatrix<f64>;
/// Skew-symmetric matrix over `f32`.
pub type SkewMatrix32 = spectral::SkewMatrix<f32>;
/// Skew-symmetric matrix with exact rational entries.
pub type SkewMatrixRational = spectral::SkewMatrix<Rational>;

pub use graph::{Graph, GraphError, Matching, TutteCertificate, VertexRelabeling};
pub use neb::{NebError, NebReport, RootedSubtreeRef};
pub use spectral::{MaxSkewRank, SkewEigen, SkewMatrix, SkewPattern, SkewSpectrum, SpectralError};
pub use solver::{SolverConfig, SolverError, SolverResult, SpectralTarget, VerifyReport};

/// Lossless-enough conversion of an `f64` constant into the working scalar.
pub(crate) fn scalar<T: Real>(x: f64) -> T {
    num_traits::cast(x).expect("numeric constant not representable")
}

/// Absolute value; picks the `Signed` impl since [`Real`] also sees the
/// conflicting `ComplexField::abs`.
pub(crate) fn fabs<T: Real>(x: T) -> T {
    num_traits::Signed::abs(&x)
}
