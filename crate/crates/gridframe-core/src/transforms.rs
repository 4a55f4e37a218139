//! Static three-phase transforms: Clarke (αβ), Park (dq), and the
//! symmetrical-component transform, plus their complex-valued forms.
//!
//! Scaling conventions used throughout:
//!
//! - The 3×3 Clarke matrix carries the √(2/3) prefactor and is orthonormal.
//! - `clarke_complex` equals `vα + j·vβ` sample-wise and, for a two-sequence
//!   signal, equals `(V̄₊·e^{jωk} + V̄₋*·e^{−jωk})/√2` with V̄₊, V̄₋ as
//!   returned by [`sequence_from_waveform`].
//! - [`symmetrical`] applies the unitary 3-point DFT (1/√3 prefactor) to the
//!   RMS-scaled phasor vector, so its outputs are 1/√2 times the
//!   [`sequence_from_waveform`] values; ratios such as the voltage unbalance
//!   factor are identical in both scalings.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::signal_model::{phasor_vector, PhasorVector, SampleSeries, ThreePhaseConfig};

/// One Clarke-transformed sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClarkeOutput {
    pub v0: f64,
    pub valpha: f64,
    pub vbeta: f64,
}

/// Full (three-component) Clarke series.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkeSeries {
    pub start_index: usize,
    pub samples: Vec<ClarkeOutput>,
}

/// One αβ sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub beta: f64,
}

/// Reduced (two-component) Clarke series.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaBetaSeries {
    pub start_index: usize,
    pub samples: Vec<AlphaBeta>,
}

/// One Park-transformed (dq) sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqSample {
    pub d: f64,
    pub q: f64,
}

/// Park-transformed series.
#[derive(Debug, Clone, PartialEq)]
pub struct ParkSeries {
    pub start_index: usize,
    pub samples: Vec<DqSample>,
}

/// Time-indexed complex samples (αβ voltage or dq voltage).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    pub start_index: usize,
    pub samples: Vec<Complex64>,
}

impl ComplexSeries {
    pub fn new(start_index: usize, samples: Vec<Complex64>) -> Self {
        ComplexSeries {
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

/// Zero-, positive-, and negative-sequence phasors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequencePhasors {
    pub zero: Complex64,
    pub positive: Complex64,
    pub negative: Complex64,
}

/// Orthonormal 3×3 Clarke matrix, rows (zero, α, β).
pub fn clarke_matrix() -> [[f64; 3]; 3] {
    let s = (2.0 / 3.0_f64).sqrt();
    let h = 2.0_f64.sqrt() / 2.0;
    let r = 3.0_f64.sqrt() / 2.0;
    [
        [s * h, s * h, s * h],
        [s, -s / 2.0, -s / 2.0],
        [0.0, s * r, -s * r],
    ]
}

/// Last two rows of the Clarke matrix (the α and β projections).
pub fn reduced_clarke_matrix() -> [[f64; 3]; 2] {
    let m = clarke_matrix();
    [m[1], m[2]]
}

/// Complex Clarke vector c = √(2/3)·(1, e^{−j2π/3}, e^{j2π/3})ᵀ; the complex
/// αβ voltage is cᴴ·s.
pub fn clarke_vector() -> [Complex64; 3] {
    let s = (2.0 / 3.0_f64).sqrt();
    [
        Complex64::new(s, 0.0),
        s * Complex64::from_polar(1.0, -2.0 * PI / 3.0),
        s * Complex64::from_polar(1.0, 2.0 * PI / 3.0),
    ]
}

/// Unitary symmetrical-transform matrix, rows ordered (zero, positive,
/// negative).
///
/// With a = e^{−j2π/3}, the DFT row (1, a, a²) annihilates a balanced phasor
/// vector while (1, a², a) preserves it, so the positive-sequence output is
/// taken from (1, a², a); some textbook presentations label these two rows
/// the other way around.
pub fn symmetrical_matrix() -> [[Complex64; 3]; 3] {
    let w = 1.0 / 3.0_f64.sqrt();
    let a = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    let a2 = a * a;
    let one = Complex64::new(1.0, 0.0);
    [
        [w * one, w * one, w * one],
        [w * one, w * a2, w * a],
        [w * one, w * a, w * a2],
    ]
}

fn mat3_vec(m: &[[f64; 3]; 3], x: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, row) in m.iter().enumerate() {
        out[i] = row[0] * x[0] + row[1] * x[1] + row[2] * x[2];
    }
    out
}

/// Full Clarke transform of a sample series.
pub fn clarke_full(s: &SampleSeries) -> ClarkeSeries {
    let m = clarke_matrix();
    let samples = s
        .samples
        .iter()
        .map(|row| {
            let [v0, valpha, vbeta] = mat3_vec(&m, row);
            ClarkeOutput { v0, valpha, vbeta }
        })
        .collect();
    ClarkeSeries {
        start_index: s.start_index,
        samples,
    }
}

/// Reduced Clarke transform (α and β rows only).
pub fn clarke_reduced(s: &SampleSeries) -> AlphaBetaSeries {
    let m = reduced_clarke_matrix();
    let samples = s
        .samples
        .iter()
        .map(|row| AlphaBeta {
            alpha: m[0][0] * row[0] + m[0][1] * row[1] + m[0][2] * row[2],
            beta: m[1][0] * row[0] + m[1][1] * row[1] + m[1][2] * row[2],
        })
        .collect();
    AlphaBetaSeries {
        start_index: s.start_index,
        samples,
    }
}

/// Complex Clarke transform, sₖ = cᴴ·sₖ = vα + j·vβ.
pub fn clarke_complex(s: &SampleSeries) -> ComplexSeries {
    let c = clarke_vector();
    let samples = s
        .samples
        .iter()
        .map(|row| {
            c[0].conj() * row[0] + c[1].conj() * row[1] + c[2].conj() * row[2]
        })
        .collect();
    ComplexSeries::new(s.start_index, samples)
}

/// Rotation angles θₖ = ω₀·k for absolute sample indices starting at
/// `start_index`.
pub fn nominal_theta(start_index: usize, len: usize, omega0: f64) -> Vec<f64> {
    (0..len)
        .map(|i| omega0 * (start_index + i) as f64)
        .collect()
}

/// Park transform: rotates each αβ sample by −θₖ.
pub fn park(alpha_beta: &AlphaBetaSeries, theta: &[f64]) -> Result<ParkSeries> {
    if alpha_beta.samples.len() != theta.len() {
        return Err(Error::Validation(format!(
            "alpha-beta series has {} samples but theta has {}",
            alpha_beta.samples.len(),
            theta.len()
        )));
    }
    let samples = alpha_beta
        .samples
        .iter()
        .zip(theta.iter())
        .map(|(ab, &t)| {
            let (sin, cos) = t.sin_cos();
            DqSample {
                d: cos * ab.alpha + sin * ab.beta,
                q: -sin * ab.alpha + cos * ab.beta,
            }
        })
        .collect();
    Ok(ParkSeries {
        start_index: alpha_beta.start_index,
        samples,
    })
}

/// Symmetrical-component transform of raw phasors.
pub fn symmetrical_phasors(phasors: &[Complex64; 3]) -> SequencePhasors {
    let u = symmetrical_matrix();
    let apply = |row: &[Complex64; 3]| row[0] * phasors[0] + row[1] * phasors[1] + row[2] * phasors[2];
    SequencePhasors {
        zero: apply(&u[0]),
        positive: apply(&u[1]),
        negative: apply(&u[2]),
    }
}

/// Symmetrical-component transform of a phasor vector.
pub fn symmetrical(v: &PhasorVector) -> SequencePhasors {
    symmetrical_phasors(&v.phasors)
}

/// Sequence phasors straight from the waveform parameters:
///
/// ```text
/// V̄₊  = (1/√3)·[Va·e^{jφa} + Vb·e^{jφb} + Vc·e^{jφc}]
/// V̄₋* = (1/√3)·[Va·e^{−jφa} + Vb·e^{−j(φb+2π/3)} + Vc·e^{−j(φc−2π/3)}]
/// ```
///
/// These are √2 times the [`symmetrical`] outputs and satisfy
/// `clarke_complex = (V̄₊·e^{jωk} + V̄₋*·e^{−jωk})/√2`.
pub fn sequence_from_waveform(config: &ThreePhaseConfig) -> Result<SequencePhasors> {
    let v = phasor_vector(config)?;
    let seq = symmetrical(&v);
    let s2 = 2.0_f64.sqrt();
    Ok(SequencePhasors {
        zero: s2 * seq.zero,
        positive: s2 * seq.positive,
        negative: s2 * seq.negative,
    })
}

/// Default moving-average length for [`fm_demodulate`]: one nominal
/// period, round(2π/ω₀).
pub fn default_lpf_window(omega0: f64) -> usize {
    ((2.0 * PI / omega0).round() as usize).max(1)
}

/// Fixed-frequency FM demodulator: mixes the input down by ω₀, low-pass
/// filters with a moving average of `lpf_window` samples, and reports the
/// phase increment Δωₖ = angle(uₖ·u*ₖ₋₁) per sample. The first output is 0.
pub fn fm_demodulate(x: &ComplexSeries, omega0: f64, lpf_window: usize) -> Result<Vec<f64>> {
    if lpf_window == 0 {
        return Err(Error::Validation("lpf_window must be at least 1".into()));
    }
    if lpf_window > x.samples.len() {
        return Err(Error::Validation(format!(
            "lpf_window {} exceeds series length {}",
            lpf_window,
            x.samples.len()
        )));
    }
    let n = x.samples.len();
    let mut out = Vec::with_capacity(n);
    let mut window = Vec::with_capacity(n);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev_u = Complex64::new(0.0, 0.0);
    for (i, &xk) in x.samples.iter().enumerate() {
        let k = (x.start_index + i) as f64;
        let y = xk * Complex64::from_polar(1.0, -omega0 * k);
        window.push(y);
        acc += y;
        if window.len() > lpf_window {
            acc -= window[window.len() - 1 - lpf_window];
        }
        let u = acc / lpf_window.min(i + 1) as f64;
        out.push(if i == 0 { 0.0 } else { (u * prev_u.conj()).arg() });
        prev_u = u;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal_model::{apply_sag, synth, SagSpec, SagType};
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;
    const SQRT_3_2: f64 = 1.224744871391589;

    fn series_of(rows: Vec<[f64; 3]>) -> SampleSeries {
        SampleSeries::new(0, rows)
    }

    fn balanced_series(n: usize) -> (SampleSeries, f64) {
        let cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        (synth(&cfg, n).unwrap(), cfg.omega())
    }

    #[test]
    fn clarke_full_examples() {
        let s = series_of(vec![[1.0, -0.5, -0.5], [1.0, 1.0, 1.0], [0.0, 0.0, 0.0]]);
        let out = clarke_full(&s);
        assert!(out.samples[0].v0.abs() < TOL);
        assert!((out.samples[0].valpha - SQRT_3_2).abs() < TOL);
        assert!(out.samples[0].vbeta.abs() < TOL);
        assert!((out.samples[1].v0 - 3f64.sqrt()).abs() < TOL);
        assert!(out.samples[1].valpha.abs() < TOL);
        assert!(out.samples[1].vbeta.abs() < TOL);
        assert_eq!(
            out.samples[2],
            ClarkeOutput {
                v0: 0.0,
                valpha: 0.0,
                vbeta: 0.0
            }
        );
    }

    #[test]
    fn clarke_reduced_matches_full() {
        let s = series_of(vec![[1.0, -0.5, -0.5], [1.0, 1.0, 1.0], [0.3, -0.9, 0.4]]);
        let full = clarke_full(&s);
        let red = clarke_reduced(&s);
        for (f, r) in full.samples.iter().zip(red.samples.iter()) {
            assert_eq!(f.valpha, r.alpha);
            assert_eq!(f.vbeta, r.beta);
        }
        assert!((red.samples[0].alpha - SQRT_3_2).abs() < TOL);
        assert!(red.samples[1].alpha.abs() < TOL);
        assert!(red.samples[1].beta.abs() < TOL);
    }

    #[test]
    fn balanced_alpha_beta_is_circular() {
        let (s, _) = balanced_series(200);
        let red = clarke_reduced(&s);
        let r0 = red.samples[0].alpha.powi(2) + red.samples[0].beta.powi(2);
        for ab in &red.samples {
            let r = ab.alpha.powi(2) + ab.beta.powi(2);
            assert!((r - r0).abs() < TOL);
        }
        assert!((r0 - 1.5).abs() < TOL);
    }

    #[test]
    fn balanced_v0_vanishes() {
        let (s, _) = balanced_series(200);
        for c in &clarke_full(&s).samples {
            assert!(c.v0.abs() < TOL);
        }
    }

    #[test]
    fn clarke_complex_consistent_with_reduced() {
        let mut cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        cfg.amplitudes = [1.1, 0.7, 0.95];
        cfg.phases_rad = [0.2, -0.3, 0.1];
        let s = synth(&cfg, 150).unwrap();
        let red = clarke_reduced(&s);
        let cx = clarke_complex(&s);
        for (ab, z) in red.samples.iter().zip(cx.samples.iter()) {
            assert!((z - Complex64::new(ab.alpha, ab.beta)).norm() < TOL);
        }
    }

    #[test]
    fn clarke_complex_balanced_is_rotating_phasor() {
        let (s, omega) = balanced_series(100);
        let cx = clarke_complex(&s);
        for (k, z) in cx.samples.iter().enumerate() {
            let expect = SQRT_3_2 * Complex64::from_polar(1.0, omega * k as f64);
            assert!((z - expect).norm() < 1e-10);
        }
        let fixed = clarke_complex(&series_of(vec![[1.0, -0.5, -0.5]]));
        assert!((fixed.samples[0] - Complex64::new(SQRT_3_2, 0.0)).norm() < TOL);
        let zero = clarke_complex(&series_of(vec![[0.0, 0.0, 0.0]]));
        assert_eq!(zero.samples[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn clarke_matrix_is_orthonormal() {
        let m = clarke_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < TOL);
            }
        }
    }

    #[test]
    fn park_identity_and_quarter_turn() {
        let ab = AlphaBetaSeries {
            start_index: 0,
            samples: vec![AlphaBeta {
                alpha: 1.0,
                beta: 0.0,
            }],
        };
        let id = park(&ab, &[0.0]).unwrap();
        assert_eq!(id.samples[0], DqSample { d: 1.0, q: 0.0 });
        let quarter = park(&ab, &[PI / 2.0]).unwrap();
        assert!(quarter.samples[0].d.abs() < TOL);
        assert!((quarter.samples[0].q + 1.0).abs() < TOL);
    }

    #[test]
    fn park_at_signal_frequency_is_constant() {
        let (s, omega) = balanced_series(200);
        let red = clarke_reduced(&s);
        let theta = nominal_theta(s.start_index, s.len(), omega);
        let dq = park(&red, &theta).unwrap();
        let first = dq.samples[0];
        for p in &dq.samples {
            assert!((p.d - first.d).abs() < 1e-10);
            assert!((p.q - first.q).abs() < 1e-10);
        }
    }

    #[test]
    fn park_length_mismatch_rejected() {
        let ab = AlphaBetaSeries {
            start_index: 0,
            samples: vec![
                AlphaBeta {
                    alpha: 1.0,
                    beta: 0.0,
                };
                3
            ],
        };
        assert!(park(&ab, &[0.0; 2]).is_err());
    }

    #[test]
    fn symmetrical_balanced() {
        let cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let v = phasor_vector(&cfg).unwrap();
        let seq = symmetrical(&v);
        assert!(seq.zero.norm() < TOL);
        assert!(seq.negative.norm() < TOL);
        assert!((seq.positive - Complex64::new(SQRT_3_2, 0.0)).norm() < TOL);
    }

    #[test]
    fn symmetrical_common_mode() {
        let p = 1.0 / 2.0_f64.sqrt();
        let phasors = [Complex64::new(p, 0.0); 3];
        let seq = symmetrical_phasors(&phasors);
        assert!((seq.zero - Complex64::new(SQRT_3_2, 0.0)).norm() < TOL);
        assert!(seq.positive.norm() < TOL);
        assert!(seq.negative.norm() < TOL);
    }

    #[test]
    fn symmetrical_zero_input() {
        let seq = symmetrical_phasors(&[Complex64::new(0.0, 0.0); 3]);
        assert_eq!(seq.zero, Complex64::new(0.0, 0.0));
        assert_eq!(seq.positive, Complex64::new(0.0, 0.0));
        assert_eq!(seq.negative, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn symmetrical_matrix_is_unitary() {
        let u = symmetrical_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..3 {
                    dot += u[i][k] * u[j][k].conj();
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - Complex64::new(expect, 0.0)).norm() < TOL);
            }
        }
    }

    #[test]
    fn sequence_from_waveform_balanced() {
        let cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let seq = sequence_from_waveform(&cfg).unwrap();
        assert!((seq.positive - Complex64::new(3f64.sqrt(), 0.0)).norm() < TOL);
        assert!(seq.negative.norm() < TOL);
        assert!(seq.zero.norm() < TOL);
    }

    #[test]
    fn sequence_single_phase() {
        // Only phase a carries voltage; amplitudes must stay positive so the
        // b and c channels are made negligibly small instead of zero.
        let mut cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        cfg.amplitudes = [1.0, 1e-300, 1e-300];
        let seq = sequence_from_waveform(&cfg).unwrap();
        let expect = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        assert!((seq.positive - expect).norm() < 1e-12);
        // sequence_from_waveform returns V̄₋ itself; the defining sum gives
        // its conjugate, which is real here.
        assert!((seq.negative - expect).norm() < 1e-12);
    }

    #[test]
    fn reversed_rotation_annihilates_positive_sequence() {
        let mut cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        // Swap the b/c separations: phasor angles become +2π/3 and −2π/3.
        cfg.phases_rad = [0.0, 4.0 * PI / 3.0, -4.0 * PI / 3.0];
        let seq = sequence_from_waveform(&cfg).unwrap();
        assert!(seq.positive.norm() < TOL);
        assert!((seq.negative.norm() - 3f64.sqrt()).abs() < TOL);
    }

    #[test]
    fn sequence_reconstructs_complex_clarke() {
        let base = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let sag = SagSpec {
            sag_type: SagType::TypeC,
            depth: 0.55,
            start_index: 0,
            end_index: 1,
        };
        let cfg = apply_sag(&base, &sag).unwrap();
        let s = synth(&cfg, 240).unwrap();
        let cx = clarke_complex(&s);
        let seq = sequence_from_waveform(&cfg).unwrap();
        let omega = cfg.omega();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        for (k, z) in cx.samples.iter().enumerate() {
            let rot = Complex64::from_polar(1.0, omega * k as f64);
            let expect = inv_sqrt2 * (seq.positive * rot + seq.negative.conj() * rot.conj());
            assert!((z - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn fm_demodulator_nominal_and_offset() {
        let omega0 = 0.1 * PI;
        let n = 200;
        let nominal = ComplexSeries::new(
            0,
            (0..n)
                .map(|k| Complex64::from_polar(1.0, omega0 * k as f64))
                .collect(),
        );
        for &dw in fm_demodulate(&nominal, omega0, 1).unwrap().iter().skip(1) {
            assert!(dw.abs() < TOL);
        }
        let offset = ComplexSeries::new(
            0,
            (0..n)
                .map(|k| Complex64::from_polar(1.0, (omega0 + 0.01) * k as f64))
                .collect(),
        );
        for &dw in fm_demodulate(&offset, omega0, 1).unwrap().iter().skip(1) {
            assert!((dw - 0.01).abs() < 1e-10);
        }
    }

    #[test]
    fn fm_demodulator_beat_frequency_under_imbalance() {
        // Unbalanced input at nominal frequency: the counter-rotating term
        // beats at ≈ 2ω0.
        let base = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let sag = SagSpec {
            sag_type: SagType::TypeD,
            depth: 0.4,
            start_index: 0,
            end_index: 1,
        };
        let cfg = apply_sag(&base, &sag).unwrap();
        let omega0 = cfg.omega();
        let s = synth(&cfg, 400).unwrap();
        let dw = fm_demodulate(&clarke_complex(&s), omega0, 1).unwrap();
        let tail = &dw[10..];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        let mut crossings = 0usize;
        for w in tail.windows(2) {
            if (w[0] - mean) * (w[1] - mean) < 0.0 {
                crossings += 1;
            }
        }
        // The 2ω0 beat period is 10 samples here, i.e. one crossing
        // every ~5 samples.
        let half_period = tail.len() as f64 / crossings as f64;
        assert!(
            (4.0..6.0).contains(&half_period),
            "half period {half_period}"
        );
    }

    #[test]
    fn fm_demodulator_window_validation() {
        let x = ComplexSeries::new(0, vec![Complex64::new(1.0, 0.0); 4]);
        assert!(fm_demodulate(&x, 0.1, 0).is_err());
        assert!(fm_demodulate(&x, 0.1, 5).is_err());
        assert!(fm_demodulate(&x, 0.1, 4).is_ok());
        // Default window is one nominal period.
        assert_eq!(default_lpf_window(0.1 * PI), 20);
        assert_eq!(default_lpf_window(3.0), 2);
    }

    #[test]
    fn fm_demodulator_default_window_suppresses_beat() {
        // With a one-period moving average, the 2ω0 beat of an unbalanced
        // input is strongly attenuated relative to window 1.
        let base = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let sag = SagSpec {
            sag_type: SagType::TypeD,
            depth: 0.5,
            start_index: 0,
            end_index: 1,
        };
        let cfg = apply_sag(&base, &sag).unwrap();
        let omega0 = cfg.omega();
        let s = synth(&cfg, 600).unwrap();
        let cx = clarke_complex(&s);
        let span = |w: usize| {
            let dw = fm_demodulate(&cx, omega0, w).unwrap();
            let tail = &dw[100..];
            tail.iter().cloned().fold(f64::MIN, f64::max)
                - tail.iter().cloned().fold(f64::MAX, f64::min)
        };
        let raw = span(1);
        let filtered = span(default_lpf_window(omega0));
        assert!(filtered < 0.2 * raw, "filtered {filtered} vs raw {raw}");
    }

    proptest! {
        #[test]
        fn park_preserves_norm_and_det(alpha in -10.0..10.0f64, beta in -10.0..10.0f64, theta in -10.0..10.0f64) {
            let ab = AlphaBetaSeries { start_index: 0, samples: vec![AlphaBeta { alpha, beta }] };
            let dq = park(&ab, &[theta]).unwrap();
            let n_in = (alpha * alpha + beta * beta).sqrt();
            let n_out = (dq.samples[0].d.powi(2) + dq.samples[0].q.powi(2)).sqrt();
            prop_assert!((n_in - n_out).abs() < 1e-12 * (1.0 + n_in));
            let (s, c) = theta.sin_cos();
            prop_assert!((c * c + s * s - 1.0).abs() < 1e-15);
        }

        #[test]
        fn common_mode_rejected_by_reduced_clarke(v in -5.0..5.0f64) {
            let red = clarke_reduced(&SampleSeries::new(0, vec![[v, v, v]]));
            prop_assert!(red.samples[0].alpha.abs() < 1e-12);
            prop_assert!(red.samples[0].beta.abs() < 1e-12);
        }
    }
}
