//! Local clustering in the erased configuration model.
//!
//! The crate samples i.i.d. power-law degree sequences, wires them into a
//! configuration multigraph by uniform half-edge matching, erases self-loops
//! and multi-edges, and measures the degree-resolved clustering spectrum
//! `c(k)`. Alongside the simulation it evaluates the closed-form scaling
//! limits of `c(k)` (three degree ranges plus the `k = B sqrt(n)` crossover
//! integral) so that simulated and predicted curves can be compared on the
//! same normalized axes.
//!
//! Numeric routines in [`asymptotics`], [`special`] and [`quadrature`] are
//! generic over the floating point type through [`Real`]; the aliases below
//! fix the common `f64` instantiations.

pub mod asymptotics;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod hidden;
pub mod ingest;
pub mod model;
pub mod num;
pub mod quadrature;
pub mod regime;
pub mod rng;
pub mod special;
pub mod triangles;

pub use error::{Error, Result};
pub use model::{DegreeSequence, ModelParams, MultiGraph, SimpleGraph, ZipfSampler};
pub use num::Real;
pub use regime::{RangeId, RegimeWindow, TriangleDecomposition};
pub use triangles::{BinnedSpectrum, ClusteringSpectrum, DegreeBasis};

/// Model constants `(tau, C, mu, A)` in double precision.
pub type Constants64 = asymptotics::Constants<f64>;
/// Model constants in single precision.
pub type Constants32 = asymptotics::Constants<f32>;
/// Quadrature settings in double precision.
pub type QuadratureSpec64 = quadrature::QuadratureSpec<f64>;
/// A predicted `c(k)` curve in double precision.
pub type TheoryCurve64 = asymptotics::TheoryCurve<f64>;
