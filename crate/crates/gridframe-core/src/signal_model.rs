//! Synthetic three-phase voltage signals and their phasor representations.
//!
//! A three-phase measurement at discrete time `k` is modelled as
//!
//! ```text
//! va_k = Va cos(θ_k + φa)
//! vb_k = Vb cos(θ_k + φb − 2π/3)
//! vc_k = Vc cos(θ_k + φc + 2π/3)
//! ```
//!
//! where the phase `θ_k` accumulates the per-sample angular frequency
//! `ω = 2πfT`, so that frequency events never introduce waveform jumps.
//! Voltage sags (Type C and Type D) override the amplitude/phase set on
//! their sample interval.
//!
//! Phasors carry the RMS factor: `V̄a = (Va/√2)·e^{jφa}` and so on, with
//! the fixed 2π/3 separations folded into the b and c phasors. The
//! waveform is recovered as `s_k = Re{√2·V̄·e^{jθ_k}}` element-wise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Fixed phase offsets of phases a, b, c: 0, −2π/3, +2π/3.
pub fn phase_offsets() -> [f64; 3] {
    [0.0, -2.0 * PI / 3.0, 2.0 * PI / 3.0]
}

/// Kind of voltage sag, following the standard C/D characteristic-voltage
/// parameterization with a single depth `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SagType {
    /// Phase a unchanged; imaginary parts of the b/c phasors scaled by `d`.
    #[serde(rename = "C")]
    TypeC,
    /// Phase a scaled by `d`; real parts of the b/c phasors scaled by `d`.
    #[serde(rename = "D")]
    TypeD,
}

/// A voltage sag active on the half-open sample interval
/// `[start_index, end_index)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SagSpec {
    #[serde(rename = "type")]
    pub sag_type: SagType,
    /// Dimensionless depth in (0, 1]; depth 1 reproduces the pre-sag
    /// configuration exactly.
    pub depth: f64,
    pub start_index: usize,
    pub end_index: usize,
}

impl SagSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.depth.is_finite() || self.depth <= 0.0 || self.depth > 1.0 {
            return Err(Error::Config(format!(
                "sag depth must lie in (0, 1], got {}",
                self.depth
            )));
        }
        if self.start_index >= self.end_index {
            return Err(Error::Config(format!(
                "sag interval must satisfy start < end, got [{}, {})",
                self.start_index, self.end_index
            )));
        }
        Ok(())
    }
}

/// A step change of the fundamental frequency taking effect at
/// `start_index`. The waveform stays continuous because synthesis
/// accumulates phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEvent {
    pub start_index: usize,
    pub new_frequency_hz: f64,
}

/// Full description of a synthetic three-phase signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreePhaseConfig {
    /// Peak amplitudes (Va, Vb, Vc) in volts, strictly positive.
    pub amplitudes: [f64; 3],
    /// Phase offsets (φa, φb, φc) in radians, on top of the fixed
    /// 0 / −2π/3 / +2π/3 separations.
    pub phases_rad: [f64; 3],
    pub sample_rate_hz: f64,
    pub base_frequency_hz: f64,
    #[serde(default)]
    pub frequency_events: Vec<FrequencyEvent>,
    #[serde(default)]
    pub sag_events: Vec<SagSpec>,
    /// Variance of optional additive white Gaussian noise; 0 disables it.
    #[serde(default)]
    pub noise_variance: f64,
}

impl ThreePhaseConfig {
    /// Balanced system: equal amplitudes, zero phase offsets.
    pub fn balanced(amplitude: f64, base_frequency_hz: f64, sample_rate_hz: f64) -> Self {
        ThreePhaseConfig {
            amplitudes: [amplitude; 3],
            phases_rad: [0.0; 3],
            sample_rate_hz,
            base_frequency_hz,
            frequency_events: Vec::new(),
            sag_events: Vec::new(),
            noise_variance: 0.0,
        }
    }

    /// Configuration realizing the given imbalance ratios δb = V̄b/V̄a and
    /// δc = V̄c/V̄a with Va = 1 and φa = 0.
    pub fn from_imbalance(
        delta_b: Complex64,
        delta_c: Complex64,
        base_frequency_hz: f64,
        sample_rate_hz: f64,
    ) -> Self {
        ThreePhaseConfig {
            amplitudes: [1.0, delta_b.norm(), delta_c.norm()],
            phases_rad: [
                0.0,
                delta_b.arg() + 2.0 * PI / 3.0,
                delta_c.arg() - 2.0 * PI / 3.0,
            ],
            sample_rate_hz,
            base_frequency_hz,
            frequency_events: Vec::new(),
            sag_events: Vec::new(),
            noise_variance: 0.0,
        }
    }

    /// Normalized angular frequency ω = 2πfT in rad/sample at the base
    /// frequency.
    pub fn omega(&self) -> f64 {
        2.0 * PI * self.base_frequency_hz / self.sample_rate_hz
    }

    fn omega_of(&self, frequency_hz: f64) -> f64 {
        2.0 * PI * frequency_hz / self.sample_rate_hz
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &a) in self.amplitudes.iter().enumerate() {
            if a <= 0.0 || !a.is_finite() {
                return Err(Error::Config(format!(
                    "amplitude {} must be strictly positive, got {a}",
                    ['a', 'b', 'c'][i]
                )));
            }
        }
        for &p in &self.phases_rad {
            if !p.is_finite() {
                return Err(Error::Config("phases must be finite".into()));
            }
        }
        if self.sample_rate_hz <= 0.0 || !self.sample_rate_hz.is_finite() {
            return Err(Error::Config(format!(
                "sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        let check_omega = |f_hz: f64| -> Result<()> {
            let omega = self.omega_of(f_hz);
            if !(omega > 0.0 && omega < PI) {
                return Err(Error::Config(format!(
                    "frequency {f_hz} Hz maps to ω = {omega} rad/sample outside (0, π)"
                )));
            }
            Ok(())
        };
        check_omega(self.base_frequency_hz)?;
        let mut prev_start = 0usize;
        for (i, ev) in self.frequency_events.iter().enumerate() {
            check_omega(ev.new_frequency_hz)?;
            if i > 0 && ev.start_index < prev_start {
                return Err(Error::Config(
                    "frequency events must be sorted by start_index".into(),
                ));
            }
            prev_start = ev.start_index;
        }
        for sag in &self.sag_events {
            sag.validate()?;
        }
        if self.noise_variance < 0.0 || !self.noise_variance.is_finite() {
            return Err(Error::Config(format!(
                "noise variance must be non-negative, got {}",
                self.noise_variance
            )));
        }
        Ok(())
    }
}

/// Time-indexed trivariate samples (va, vb, vc).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    pub start_index: usize,
    pub samples: Vec<[f64; 3]>,
}

impl SampleSeries {
    pub fn new(start_index: usize, samples: Vec<[f64; 3]>) -> Self {
        SampleSeries {
            start_index,
            samples,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Complex phasors of the three phases plus the ratios normalized to
/// phase a: (1, δb, δc).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasorVector {
    /// (V̄a, V̄b, V̄c), RMS-scaled.
    pub phasors: [Complex64; 3],
    /// (1, δb, δc) with δi = V̄i/V̄a; the first entry is exactly 1.
    pub normalized: [Complex64; 3],
}

impl PhasorVector {
    /// Build from raw phasors. Fails when V̄a = 0 because the normalized
    /// ratios are then undefined.
    pub fn from_phasors(phasors: [Complex64; 3]) -> Result<Self> {
        if phasors[0].norm() == 0.0 {
            return Err(Error::Validation(
                "phase-a phasor must be non-zero to normalize".into(),
            ));
        }
        Ok(PhasorVector {
            phasors,
            normalized: [
                Complex64::new(1.0, 0.0),
                phasors[1] / phasors[0],
                phasors[2] / phasors[0],
            ],
        })
    }
}

fn raw_phasors(amplitudes: &[f64; 3], phases_rad: &[f64; 3]) -> [Complex64; 3] {
    let offsets = phase_offsets();
    let mut out = [Complex64::default(); 3];
    for i in 0..3 {
        out[i] = Complex64::from_polar(amplitudes[i] / SQRT_2, phases_rad[i] + offsets[i]);
    }
    out
}

/// Phasor representation of the base (pre-sag, base-frequency)
/// configuration.
pub fn phasor_vector(config: &ThreePhaseConfig) -> Result<PhasorVector> {
    config.validate()?;
    PhasorVector::from_phasors(raw_phasors(&config.amplitudes, &config.phases_rad))
}

/// Amplitude/phase set active while `sag` applies, as a stand-alone
/// configuration. The returned config carries no sag events of its own;
/// frequency events and the noise setting are preserved.
pub fn apply_sag(config: &ThreePhaseConfig, sag: &SagSpec) -> Result<ThreePhaseConfig> {
    config.validate()?;
    sag.validate()?;
    let mut out = config.clone();
    out.sag_events = Vec::new();
    // Depth 1 is the pre-sag configuration, bit-exactly.
    if sag.depth == 1.0 {
        return Ok(out);
    }
    let d = sag.depth;
    let base = raw_phasors(&config.amplitudes, &config.phases_rad);
    let sagged = match sag.sag_type {
        SagType::TypeC => [
            base[0],
            Complex64::new(base[1].re, d * base[1].im),
            Complex64::new(base[2].re, d * base[2].im),
        ],
        SagType::TypeD => [
            d * base[0],
            Complex64::new(d * base[1].re, base[1].im),
            Complex64::new(d * base[2].re, base[2].im),
        ],
    };
    let offsets = phase_offsets();
    for i in 0..3 {
        out.amplitudes[i] = SQRT_2 * sagged[i].norm();
        out.phases_rad[i] = sagged[i].arg() - offsets[i];
    }
    Ok(out)
}

/// Deterministic Gaussian noise source (SplitMix64 + Box-Muller), so that
/// seeded runs are bit-stable.
#[derive(Debug, Clone)]
pub struct GaussianNoise {
    state: u64,
    spare: Option<f64>,
}

impl GaussianNoise {
    pub fn new(seed: u64) -> Self {
        GaussianNoise {
            state: seed,
            spare: None,
        }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn next_uniform(&mut self) -> f64 {
        // 53-bit mantissa, uniform in (0, 1].
        ((self.next_u64() >> 11) + 1) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal deviate.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Synthesize `n` samples starting at k = 0, seeding the optional noise
/// generator with 0.
pub fn synth(config: &ThreePhaseConfig, n: usize) -> Result<SampleSeries> {
    synth_seeded(config, n, 0)
}

/// Synthesize `n` samples starting at k = 0 with an explicit noise seed.
/// The seed has no effect when `noise_variance` is 0.
pub fn synth_seeded(config: &ThreePhaseConfig, n: usize, seed: u64) -> Result<SampleSeries> {
    config.validate()?;
    let offsets = phase_offsets();

    // Amplitude/phase sets: index 0 is the base config, one extra set per
    // sag event, each derived from the base.
    let mut param_sets: Vec<([f64; 3], [f64; 3])> =
        vec![(config.amplitudes, config.phases_rad)];
    for sag in &config.sag_events {
        let sagged = apply_sag(config, sag)?;
        param_sets.push((sagged.amplitudes, sagged.phases_rad));
    }
    // Last sag event containing k wins.
    let set_at = |k: usize| -> usize {
        let mut active = 0;
        for (i, sag) in config.sag_events.iter().enumerate() {
            if k >= sag.start_index && k < sag.end_index {
                active = i + 1;
            }
        }
        active
    };

    let sigma = config.noise_variance.sqrt();
    let mut noise = (config.noise_variance > 0.0).then(|| GaussianNoise::new(seed));

    let mut samples = Vec::with_capacity(n);
    let mut theta = 0.0_f64;
    let mut event_idx = 0usize;
    let mut omega = config.omega();
    // Events starting at index 0 replace the base frequency outright.
    while event_idx < config.frequency_events.len()
        && config.frequency_events[event_idx].start_index == 0
    {
        omega = config.omega_of(config.frequency_events[event_idx].new_frequency_hz);
        event_idx += 1;
    }
    for k in 0..n {
        if k > 0 {
            while event_idx < config.frequency_events.len()
                && config.frequency_events[event_idx].start_index <= k
            {
                omega = config.omega_of(config.frequency_events[event_idx].new_frequency_hz);
                event_idx += 1;
            }
            theta += omega;
        }
        let (amps, phases) = &param_sets[set_at(k)];
        let mut row = [0.0_f64; 3];
        for i in 0..3 {
            row[i] = amps[i] * (theta + phases[i] + offsets[i]).cos();
            if let Some(rng) = noise.as_mut() {
                row[i] += sigma * rng.next_gaussian();
            }
        }
        samples.push(row);
    }
    Ok(SampleSeries::new(0, samples))
}
