//! Circularity analysis of complex αβ voltages and balanced/unbalanced
//! classification.
//!
//! A balanced system traces a circle in the αβ plane: its complex voltage
//! is second-order circular and the pseudo-covariance E[s²] vanishes.
//! Imbalance introduces a counter-rotating component that turns the
//! trajectory into an ellipse with non-zero pseudo-covariance. The
//! circularity coefficient |E[s²]|/E[|s|²] is 0 for the circle, 1 for a
//! degenerate (real) line, and 2|V̄₊||V̄₋|/(|V̄₊|²+|V̄₋|²) for a general
//! two-sequence signal.

use num_complex::Complex64;

use crate::adaptive_estimator::Vuf;
use crate::error::{Error, Result};
use crate::transforms::ComplexSeries;

/// Default |κ| cutoff separating Balanced from Unbalanced.
pub const DEFAULT_BALANCE_THRESHOLD: f64 = 0.02;

/// Second-order circularity statistics of a complex series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularityReport {
    /// E[|s|²].
    pub covariance: f64,
    /// E[s²].
    pub pseudo_covariance: Complex64,
    /// |E[s²]| / E[|s|²] ∈ [0, 1].
    pub circularity_coefficient: f64,
    /// (major, minor) ellipse axes √(cov ± |pseudo|).
    pub ellipse_axes: (f64, f64),
}

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceState {
    Balanced,
    Unbalanced,
}

impl BalanceState {
    pub fn as_str(&self) -> &'static str {
        match self {
            BalanceState::Balanced => "Balanced",
            BalanceState::Unbalanced => "Unbalanced",
        }
    }
}

/// Verdict derived from the estimated voltage unbalance factor.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceVerdict {
    pub state: BalanceState,
    pub vuf_magnitude: f64,
    pub notes: String,
}

/// Second-order circularity of a complex series.
pub fn circularity(s: &ComplexSeries) -> Result<CircularityReport> {
    if s.len() < 2 {
        return Err(Error::Validation(format!(
            "circularity needs at least 2 samples, got {}",
            s.len()
        )));
    }
    let n = s.len() as f64;
    let mut cov = 0.0;
    let mut pseudo = Complex64::new(0.0, 0.0);
    for &z in &s.samples {
        cov += z.norm_sqr();
        pseudo += z * z;
    }
    cov /= n;
    pseudo /= n;
    if cov <= 0.0 || !cov.is_finite() {
        return Err(Error::Validation(
            "degenerate series: zero or non-finite power".into(),
        ));
    }
    let coefficient = pseudo.norm() / cov;
    let major = (cov + pseudo.norm()).sqrt();
    let minor = (cov - pseudo.norm()).max(0.0).sqrt();
    Ok(CircularityReport {
        covariance: cov,
        pseudo_covariance: pseudo,
        circularity_coefficient: coefficient,
        ellipse_axes: (major, minor),
    })
}

/// Classify a voltage unbalance factor against a |κ| threshold; the
/// boundary is inclusive (|κ| = threshold is Balanced).
pub fn classify(vuf: &Vuf, threshold: f64) -> Result<BalanceVerdict> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Validation(format!(
            "balance threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let mag = vuf.magnitude();
    let state = if mag <= threshold {
        BalanceState::Balanced
    } else {
        BalanceState::Unbalanced
    };
    let mut notes = format!("|kappa| = {mag:.6} vs threshold {threshold}");
    if !vuf.is_physical() {
        notes.push_str("; non-physical estimate (|kappa| >= 1)");
    }
    if vuf.low_confidence {
        notes.push_str("; low-confidence extraction");
    }
    Ok(BalanceVerdict {
        state,
        vuf_magnitude: mag,
        notes,
    })
}
