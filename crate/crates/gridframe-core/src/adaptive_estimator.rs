//! Online widely-linear tracking of frequency and voltage unbalance, and
//! the self-balancing Clarke/Park transforms built on it.
//!
//! The complex αβ voltage of a (possibly unbalanced) three-phase signal is
//! a sum of two counter-rotating phasors and obeys the widely-linear
//! autoregression
//!
//! ```text
//! sₖ = h*·sₖ₋₁ + g*·s*ₖ₋₁
//! ```
//!
//! whose coefficients are adapted online with the augmented complex LMS
//! (ACLMS). The pair (h, g) encodes both the angular frequency ω and the
//! voltage unbalance factor κ = V̄₋/V̄₊ through
//!
//! ```text
//! e^{jω} = h* + g*·κ        e^{−jω} = h* + g*/κ*
//! ```
//!
//! which solve in closed form to
//!
//! ```text
//! e^{jω} = Re{h} + j·√(Im²{h} − |g|²)
//! κ      = (j/g*)·(Im{h} + √(Im²{h} − |g|²))
//! ```
//!
//! With κ̂ and ω̂ in hand, the balancing step removes the negative-sequence
//! component sample-by-sample and a running demodulation phase removes the
//! positive-sequence rotation:
//!
//! ```text
//! m̄ₖ = √2·(sₖ − κ̂*·s*ₖ)/(1 − |κ̂|²)      (adaptive Clarke)
//! m̃ₖ = e^{−jθₖ}·m̄ₖ,  θₖ = θₖ₋₁ + ω̂ₖ     (adaptive Park)
//! ```
//!
//! so that a converged run yields m̄ₖ = V̄₊·e^{jωk} and m̃ₖ = V̄₊ regardless
//! of imbalance or frequency drift.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::signal_model::SampleSeries;
use crate::transforms::{clarke_complex, ComplexSeries};

/// Default ACLMS learning rate.
pub const DEFAULT_MU: f64 = 0.01;
/// |g| below this is treated as the balanced limit where κ = 0.
pub const VUF_GATE: f64 = 1e-8;

/// State of the widely-linear autoregressive tracker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WlarState {
    pub h: Complex64,
    pub g: Complex64,
    pub mu: f64,
    /// Previous regressor sample; starts at 0, which makes the first step
    /// record its prediction error without moving the weights.
    pub prev_sample: Complex64,
    /// Number of samples processed so far.
    pub sample_index: usize,
}

impl WlarState {
    pub fn new(mu: f64) -> Result<Self> {
        Self::with_weights(mu, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn with_weights(mu: f64, h: Complex64, g: Complex64) -> Result<Self> {
        if mu <= 0.0 || !mu.is_finite() {
            return Err(Error::Validation(format!(
                "learning rate must be positive, got {mu}"
            )));
        }
        if !h.re.is_finite() || !h.im.is_finite() || !g.re.is_finite() || !g.im.is_finite() {
            return Err(Error::Validation("initial weights must be finite".into()));
        }
        Ok(WlarState {
            h,
            g,
            mu,
            prev_sample: Complex64::new(0.0, 0.0),
            sample_index: 0,
        })
    }
}

/// One ACLMS update. Returns the advanced state and the prediction error
///
/// ```text
/// ε = sₖ − (h*·sₖ₋₁ + g*·s*ₖ₋₁)
/// h ← h + μ·sₖ₋₁·ε*        g ← g + μ·s*ₖ₋₁·ε*
/// ```
pub fn aclms_step(state: &WlarState, s_k: Complex64) -> Result<(WlarState, Complex64)> {
    let prev = state.prev_sample;
    let prediction = state.h.conj() * prev + state.g.conj() * prev.conj();
    let eps = s_k - prediction;
    let h = state.h + state.mu * prev * eps.conj();
    let g = state.g + state.mu * prev.conj() * eps.conj();
    if !h.re.is_finite() || !h.im.is_finite() || !g.re.is_finite() || !g.im.is_finite() {
        return Err(Error::Divergence {
            sample_index: state.sample_index,
        });
    }
    Ok((
        WlarState {
            h,
            g,
            mu: state.mu,
            prev_sample: s_k,
            sample_index: state.sample_index + 1,
        },
        eps,
    ))
}

/// Instantaneous frequency estimate extracted from the WLAR weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyEstimate {
    /// ω̂ in rad/sample, in [0, π].
    pub omega_rad: f64,
    /// Set when the discriminant Im²{h} − |g|² was non-positive (transient
    /// regime): the discriminant is clamped to 0 and the estimate falls on
    /// the real axis.
    pub low_confidence: bool,
}

/// Voltage unbalance factor κ = V̄₋/V̄₊ extracted from the WLAR weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vuf {
    pub kappa: Complex64,
    /// Discriminant clamp flag, as in [`FrequencyEstimate`].
    pub low_confidence: bool,
}

impl Vuf {
    pub fn magnitude(&self) -> f64 {
        self.kappa.norm()
    }

    /// |κ| < 1, i.e. the positive sequence dominates.
    pub fn is_physical(&self) -> bool {
        self.kappa.norm() < 1.0
    }
}

fn clamped_discriminant(h: Complex64, g: Complex64) -> (f64, bool) {
    let disc = h.im * h.im - g.norm_sqr();
    if disc > 0.0 {
        (disc.sqrt(), false)
    } else {
        (0.0, true)
    }
}

/// Solve e^{jω̂} = Re{h} + j·√(Im²{h} − |g|²) for ω̂ ∈ [0, π].
pub fn extract_frequency(h: Complex64, g: Complex64) -> FrequencyEstimate {
    let (root, clamped) = clamped_discriminant(h, g);
    FrequencyEstimate {
        omega_rad: root.atan2(h.re),
        low_confidence: clamped,
    }
}

/// Solve κ = (j/g*)·(Im{h} + √(Im²{h} − |g|²)). Returns κ = 0 below the
/// balanced-limit gate on |g|, where the expression degenerates to 0/0.
pub fn extract_vuf(h: Complex64, g: Complex64) -> Vuf {
    let (root, clamped) = clamped_discriminant(h, g);
    if g.norm() < VUF_GATE {
        return Vuf {
            kappa: Complex64::new(0.0, 0.0),
            low_confidence: clamped,
        };
    }
    let kappa = Complex64::new(0.0, 1.0) / g.conj() * (h.im + root);
    Vuf {
        kappa,
        low_confidence: clamped,
    }
}

/// WLAR weights that exactly represent a two-sequence signal with angular
/// frequency `omega_rad` ∈ (0, π) and unbalance factor `kappa` (|κ| < 1):
///
/// ```text
/// h = cos ω − j·sin ω·(1 + |κ|²)/(1 − |κ|²)
/// g = 2j·sin ω·κ/(1 − |κ|²)
/// ```
pub fn wlar_weights(omega_rad: f64, kappa: Complex64) -> (Complex64, Complex64) {
    let balance = 1.0 - kappa.norm_sqr();
    let (sin, cos) = omega_rad.sin_cos();
    let h = Complex64::new(cos, -sin * (1.0 + kappa.norm_sqr()) / balance);
    let g = Complex64::new(0.0, 2.0 * sin / balance) * kappa;
    (h, g)
}

/// Balancing (adaptive Clarke) step: m̄ₖ = √2·(sₖ − κ*·s*ₖ)/(1 − |κ|²).
pub fn adaptive_clarke(s_k: Complex64, kappa: Complex64) -> Result<Complex64> {
    let mag_sq = kappa.norm_sqr();
    if mag_sq >= 1.0 {
        return Err(Error::Validation(format!(
            "unbalance factor magnitude {} is not below 1 (negative sequence dominates)",
            mag_sq.sqrt()
        )));
    }
    Ok(2.0_f64.sqrt() * (s_k - kappa.conj() * s_k.conj()) / (1.0 - mag_sq))
}

/// Rotating-frame (adaptive Park) step with an externally accumulated
/// demodulation phase.
pub fn adaptive_park(m_bar: Complex64, theta: f64) -> Complex64 {
    m_bar * Complex64::from_polar(1.0, -theta)
}

/// Adaptive Park over a whole series: θₖ = θₖ₋₁ + ω̂ₖ with θ₀ = 0.
pub fn adaptive_park_series(m_bar: &[Complex64], omega_hat: &[f64]) -> Result<Vec<Complex64>> {
    if m_bar.len() != omega_hat.len() {
        return Err(Error::Validation(format!(
            "m-bar series has {} samples but omega has {}",
            m_bar.len(),
            omega_hat.len()
        )));
    }
    let mut theta = 0.0;
    let mut out = Vec::with_capacity(m_bar.len());
    for (i, (&m, &w)) in m_bar.iter().zip(omega_hat.iter()).enumerate() {
        if i > 0 {
            theta += w;
        }
        out.push(adaptive_park(m, theta));
    }
    Ok(out)
}

/// Settings of the streaming pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub mu: f64,
    pub initial_h: Complex64,
    pub initial_g: Complex64,
    /// Used only to report the frequency estimate in hertz.
    pub sample_rate_hz: f64,
}

impl EstimatorConfig {
    pub fn new(mu: f64, sample_rate_hz: f64) -> Self {
        EstimatorConfig {
            mu,
            initial_h: Complex64::new(0.0, 0.0),
            initial_g: Complex64::new(0.0, 0.0),
            sample_rate_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu <= 0.0 || !self.mu.is_finite() {
            return Err(Error::Validation(format!(
                "learning rate must be positive, got {}",
                self.mu
            )));
        }
        if self.sample_rate_hz <= 0.0 || !self.sample_rate_hz.is_finite() {
            return Err(Error::Validation(format!(
                "sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        Ok(())
    }
}

/// One per-sample record of the streaming estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub h: Complex64,
    pub g: Complex64,
    /// ω̂ in rad/sample.
    pub freq_rad: f64,
    /// ω̂ converted to hertz.
    pub freq_hz: f64,
    pub kappa: Complex64,
    /// Adaptive Clarke output m̄ₖ.
    pub m_bar: Complex64,
    /// Adaptive Park output m̃ₖ.
    pub m_tilde: Complex64,
    /// Accumulated demodulation phase θₖ.
    pub theta: f64,
    pub low_confidence: bool,
}

/// Full per-sample trace of a pipeline run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimatorTrace {
    pub records: Vec<TraceRecord>,
}

impl EstimatorTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_record(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}

/// Streaming pipeline over a raw three-phase series: complex Clarke →
/// ACLMS update → (ω̂, κ̂) extraction → adaptive Clarke → adaptive Park,
/// one record per sample.
///
/// κ̂ and ω̂ are taken from the post-update weights of the same sample. A
/// transiently non-physical κ̂ (|κ̂| ≥ 1) is replaced by 0 for the
/// balancing step and the record is flagged low-confidence; only weight
/// divergence aborts the run.
pub fn run_pipeline(s: &SampleSeries, cfg: &EstimatorConfig) -> Result<EstimatorTrace> {
    cfg.validate()?;
    let clarke = clarke_complex(s);
    run_pipeline_complex(&clarke, cfg)
}

/// Same as [`run_pipeline`] but starting from an already Clarke-transformed
/// complex series.
pub fn run_pipeline_complex(
    clarke: &ComplexSeries,
    cfg: &EstimatorConfig,
) -> Result<EstimatorTrace> {
    cfg.validate()?;
    let mut state = WlarState::with_weights(cfg.mu, cfg.initial_h, cfg.initial_g)?;
    let rad_to_hz = cfg.sample_rate_hz / (2.0 * PI);
    let mut theta = 0.0_f64;
    let mut records = Vec::with_capacity(clarke.len());
    for (i, &s_k) in clarke.samples.iter().enumerate() {
        let k = clarke.start_index + i;
        let (next, _eps) = aclms_step(&state, s_k).map_err(|e| match e {
            Error::Divergence { .. } => Error::Divergence { sample_index: k },
            other => other,
        })?;
        state = next;
        let freq = extract_frequency(state.h, state.g);
        let vuf = extract_vuf(state.h, state.g);
        let (kappa, low_confidence) = if vuf.is_physical() {
            (vuf.kappa, freq.low_confidence || vuf.low_confidence)
        } else {
            (Complex64::new(0.0, 0.0), true)
        };
        let m_bar = adaptive_clarke(s_k, kappa)?;
        if i > 0 {
            theta += freq.omega_rad;
        }
        let m_tilde = adaptive_park(m_bar, theta);
        records.push(TraceRecord {
            k,
            h: state.h,
            g: state.g,
            freq_rad: freq.omega_rad,
            freq_hz: freq.omega_rad * rad_to_hz,
            kappa,
            m_bar,
            m_tilde,
            theta,
            low_confidence,
        });
    }
    Ok(EstimatorTrace { records })
}
