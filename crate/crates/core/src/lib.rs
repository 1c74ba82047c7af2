//! Correlated and uncorrelated two-qubit Markovian noise channels, in Kraus
//! and Lindblad form, with quantum-speed-limit bounds and the
//! correlated/uncorrelated ratios built from them.
//!
//! - [`matops`]: dense complex matrices, Kronecker products, Hermitian
//!   eigenvalues, validated density matrices.
//! - [`channels`]: random-telegraph dephasing, phase damping and amplitude
//!   damping sets with time derivatives, memory mixing and CPTP checks.
//! - [`qsl`]: Mandelstam-Tamm, Kraus and Lindbladian speed limits, ratios and
//!   the triangle-inequality sandwich.
//! - [`lindblad`]: the two-atom thermal master equation and RK4 evolution.
//! - [`sweep`], [`config`], [`report`]: the sweep engine, CSV output and the
//!   CLI plumbing.

pub mod channels;
pub mod config;
pub mod error;
pub mod lindblad;
pub mod matops;
pub mod qsl;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
pub use matops::{ComplexMatrix, DensityMatrix};
