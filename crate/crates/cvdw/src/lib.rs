//! Exact n-widths of periodic smoothness classes via extremal standard
//! functions.
//!
//! The library constructs the equioscillating functions
//! `Φ = G∗φ(K_β∗h_n)` built from ±1 step sources, analytic smoothing
//! kernels and Bernoulli convolution kernels, computes the Kolmogorov,
//! linear, Gel'fand and information widths of the Sobolev, Achieser and
//! Hardy–Sobolev periodic classes as norms of these functions, and verifies
//! the supporting comparison, rearrangement, Landau–Kolmogorov and Taikov
//! inequalities by independent randomized procedures.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod extremal;
pub mod kernel;
pub mod oscillation;
pub mod quad;
pub mod spectral;
pub mod spline;
pub mod standard;
pub mod widths;

pub use error::{Error, Result};
pub use kernel::{eval_d, eval_k, KernelSpec, LinkFunction, Multiplier};
pub use spectral::{
    analyze, compose_link, convolve, differentiate, periodic_integral, synthesize, FourierSeries,
    PeriodicGrid,
};
pub use spline::KnotVector;
pub use standard::{standard_function, StandardFunction, DEFAULT_GRID};
