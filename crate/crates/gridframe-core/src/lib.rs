//! gridframe: reference-frame transforms and adaptive tracking for
//! three-phase power signals.
//!
//! The crate provides:
//!
//! - synthesis of balanced, sagged, and frequency-stepped three-phase
//!   voltage signals together with their phasor representations
//!   ([`signal_model`]);
//! - the static Clarke (αβ), Park (dq), and symmetrical-component
//!   transforms, including their complex-valued forms and an FM-demodulator
//!   view of the Park transform ([`transforms`]);
//! - covariance and 3×3 symmetric eigen-analysis showing that the Clarke
//!   projection coincides with the top-2 principal components for balanced
//!   systems ([`subspace`]);
//! - an online widely-linear estimator (ACLMS) that tracks the fundamental
//!   frequency and the voltage unbalance factor simultaneously, and the
//!   resulting self-balancing Clarke/Park transforms
//!   ([`adaptive_estimator`]);
//! - circularity analysis and balanced/unbalanced classification of the
//!   complex αβ voltage ([`diagnostics`]);
//! - the CSV/JSON wire formats shared with the CLI and the Python bindings
//!   ([`io`]).

pub mod adaptive_estimator;
pub mod diagnostics;
pub mod error;
pub mod io;
pub mod signal_model;
pub mod subspace;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
