//! Numerics for bounded analytic functions on the unit disk.
//!
//! A bounded function factors as `C z^p B(z) g(z)`: a Blaschke-type product
//! over the zero set times a zero-free factor driven by a finite boundary
//! measure. This crate evaluates both factors, builds a continuous branch of
//! the argument off a system of radial cuts, applies fractional integration
//! of negative order to the argument along rays, and tests boundedness of the
//! result inside Stolz regions against Frostman-type integrals of the
//! combined zero/boundary mass.
//!
//! Modules follow the pipeline:
//!
//! * [`geometry`]: points, Stolz regions, pseudohyperbolic disks.
//! * [`blaschke`]: zero sequences, product factors, compensated log-sums.
//! * [`measures`]: boundary measures, the combined mass, Frostman integrals.
//! * [`frac_calc`]: fractional integrals with an endpoint-singular weight.
//! * [`herglotz`]: the zero-free factor and its argument.
//! * [`local_zeros`]: local zero counts and the corrected logarithm.
//! * [`experiments`]: sweep drivers, generators, brute-force oracles.

// `!(x > 0.0)` style guards are deliberate: they keep NaN on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod experiments;
pub mod frac_calc;
pub mod geometry;
pub mod herglotz;
pub mod kahan;
pub mod local_zeros;
pub mod measures;

pub use blaschke::{Tail, ZeroSequence};
pub use geometry::{BoundaryPoint, DiskPoint, StolzRegion};
pub use measures::{BoundaryMeasure, BoundedFunctionSpec, CompleteMeasure};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex<f64>;
