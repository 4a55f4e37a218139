//! Python bindings for the gridframe core: signal synthesis, the static
//! Clarke/Park/symmetrical transforms, subspace analysis, and the adaptive
//! frequency/imbalance tracker.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gridframe_core::adaptive_estimator as est;
use gridframe_core::diagnostics;
use gridframe_core::error::Error;
use gridframe_core::signal_model as sm;
use gridframe_core::subspace;
use gridframe_core::transforms as tf;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Divergence { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_sag_type(name: &str) -> PyResult<sm::SagType> {
    match name {
        "C" | "c" => Ok(sm::SagType::TypeC),
        "D" | "d" => Ok(sm::SagType::TypeD),
        other => Err(PyValueError::new_err(format!(
            "unknown sag type `{other}`, expected \"C\" or \"D\""
        ))),
    }
}

fn to_series(samples: Vec<(f64, f64, f64)>) -> sm::SampleSeries {
    sm::SampleSeries::new(0, samples.into_iter().map(|(a, b, c)| [a, b, c]).collect())
}

/// Three-phase signal description: amplitudes, phase offsets, rates, and
/// optional frequency/sag events.
#[pyclass(name = "ThreePhaseConfig", from_py_object)]
#[derive(Clone)]
struct PyThreePhaseConfig {
    inner: sm::ThreePhaseConfig,
}

#[pymethods]
impl PyThreePhaseConfig {
    #[new]
    #[pyo3(signature = (amplitudes, phases_rad, sample_rate_hz, base_frequency_hz, noise_variance=0.0))]
    fn new(
        amplitudes: (f64, f64, f64),
        phases_rad: (f64, f64, f64),
        sample_rate_hz: f64,
        base_frequency_hz: f64,
        noise_variance: f64,
    ) -> PyResult<Self> {
        let inner = sm::ThreePhaseConfig {
            amplitudes: [amplitudes.0, amplitudes.1, amplitudes.2],
            phases_rad: [phases_rad.0, phases_rad.1, phases_rad.2],
            sample_rate_hz,
            base_frequency_hz,
            frequency_events: Vec::new(),
            sag_events: Vec::new(),
            noise_variance,
        };
        inner.validate().map_err(to_py_err)?;
        Ok(PyThreePhaseConfig { inner })
    }

    /// Balanced system with the given amplitude on each phase.
    #[staticmethod]
    fn balanced(amplitude: f64, base_frequency_hz: f64, sample_rate_hz: f64) -> PyResult<Self> {
        let inner = sm::ThreePhaseConfig::balanced(amplitude, base_frequency_hz, sample_rate_hz);
        inner.validate().map_err(to_py_err)?;
        Ok(PyThreePhaseConfig { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = gridframe_core::io::config_from_json(text).map_err(to_py_err)?;
        Ok(PyThreePhaseConfig { inner })
    }

    fn to_json(&self) -> String {
        gridframe_core::io::config_to_json(&self.inner)
    }

    /// Normalized angular frequency in rad/sample at the base frequency.
    fn omega(&self) -> f64 {
        self.inner.omega()
    }

    fn add_frequency_event(&mut self, start_index: usize, new_frequency_hz: f64) -> PyResult<()> {
        self.inner.frequency_events.push(sm::FrequencyEvent {
            start_index,
            new_frequency_hz,
        });
        self.inner.validate().map_err(to_py_err)
    }

    fn add_sag_event(
        &mut self,
        sag_type: &str,
        depth: f64,
        start_index: usize,
        end_index: usize,
    ) -> PyResult<()> {
        self.inner.sag_events.push(sm::SagSpec {
            sag_type: parse_sag_type(sag_type)?,
            depth,
            start_index,
            end_index,
        });
        self.inner.validate().map_err(to_py_err)
    }

    /// Configuration whose amplitudes/phases equal this one under the
    /// given sag.
    fn with_sag_applied(&self, sag_type: &str, depth: f64) -> PyResult<Self> {
        let sag = sm::SagSpec {
            sag_type: parse_sag_type(sag_type)?,
            depth,
            start_index: 0,
            end_index: 1,
        };
        let inner = sm::apply_sag(&self.inner, &sag).map_err(to_py_err)?;
        Ok(PyThreePhaseConfig { inner })
    }

    #[getter]
    fn amplitudes(&self) -> (f64, f64, f64) {
        let [a, b, c] = self.inner.amplitudes;
        (a, b, c)
    }

    #[getter]
    fn phases_rad(&self) -> (f64, f64, f64) {
        let [a, b, c] = self.inner.phases_rad;
        (a, b, c)
    }

    #[getter]
    fn sample_rate_hz(&self) -> f64 {
        self.inner.sample_rate_hz
    }

    #[getter]
    fn base_frequency_hz(&self) -> f64 {
        self.inner.base_frequency_hz
    }

    fn __repr__(&self) -> String {
        format!(
            "ThreePhaseConfig(amplitudes={:?}, phases_rad={:?}, fs={} Hz, f={} Hz)",
            self.inner.amplitudes,
            self.inner.phases_rad,
            self.inner.sample_rate_hz,
            self.inner.base_frequency_hz
        )
    }
}

/// Synthesize `n` samples of the configured three-phase signal.
#[pyfunction]
#[pyo3(signature = (config, n, seed=0))]
fn synth(config: &PyThreePhaseConfig, n: usize, seed: u64) -> PyResult<Vec<(f64, f64, f64)>> {
    let series = sm::synth_seeded(&config.inner, n, seed).map_err(to_py_err)?;
    Ok(series
        .samples
        .into_iter()
        .map(|[a, b, c]| (a, b, c))
        .collect())
}

/// Phasor representation: `(phasors, normalized)` triples of complex values.
#[pyfunction]
fn phasor_vector(config: &PyThreePhaseConfig) -> PyResult<(Vec<Complex64>, Vec<Complex64>)> {
    let v = sm::phasor_vector(&config.inner).map_err(to_py_err)?;
    Ok((v.phasors.to_vec(), v.normalized.to_vec()))
}

/// Full Clarke transform: `(v0, valpha, vbeta)` per sample.
#[pyfunction]
fn clarke_full(samples: Vec<(f64, f64, f64)>) -> Vec<(f64, f64, f64)> {
    tf::clarke_full(&to_series(samples))
        .samples
        .into_iter()
        .map(|c| (c.v0, c.valpha, c.vbeta))
        .collect()
}

/// Reduced Clarke transform: `(valpha, vbeta)` per sample.
#[pyfunction]
fn clarke_reduced(samples: Vec<(f64, f64, f64)>) -> Vec<(f64, f64)> {
    tf::clarke_reduced(&to_series(samples))
        .samples
        .into_iter()
        .map(|ab| (ab.alpha, ab.beta))
        .collect()
}

/// Complex Clarke voltage `valpha + j*vbeta` per sample.
#[pyfunction]
fn clarke_complex(samples: Vec<(f64, f64, f64)>) -> Vec<Complex64> {
    tf::clarke_complex(&to_series(samples)).samples
}

/// Park rotation of an alpha-beta series by per-sample angles theta.
#[pyfunction]
fn park(alpha_beta: Vec<(f64, f64)>, theta: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let ab = tf::AlphaBetaSeries {
        start_index: 0,
        samples: alpha_beta
            .into_iter()
            .map(|(alpha, beta)| tf::AlphaBeta { alpha, beta })
            .collect(),
    };
    let dq = tf::park(&ab, &theta).map_err(to_py_err)?;
    Ok(dq.samples.into_iter().map(|p| (p.d, p.q)).collect())
}

/// Symmetrical components `(zero, positive, negative)` of the
/// configuration's phasor vector.
#[pyfunction]
fn symmetrical(config: &PyThreePhaseConfig) -> PyResult<(Complex64, Complex64, Complex64)> {
    let v = sm::phasor_vector(&config.inner).map_err(to_py_err)?;
    let seq = tf::symmetrical(&v);
    Ok((seq.zero, seq.positive, seq.negative))
}

/// Sequence phasors in waveform scale (sqrt(2) times the symmetrical
/// transform outputs).
#[pyfunction]
fn sequence_from_waveform(
    config: &PyThreePhaseConfig,
) -> PyResult<(Complex64, Complex64, Complex64)> {
    let seq = tf::sequence_from_waveform(&config.inner).map_err(to_py_err)?;
    Ok((seq.zero, seq.positive, seq.negative))
}

/// Empirical covariance (1/N) sum s s^T of a three-phase series.
#[pyfunction]
fn empirical_covariance(samples: Vec<(f64, f64, f64)>) -> PyResult<[[f64; 3]; 3]> {
    let cov = subspace::empirical_covariance(&to_series(samples)).map_err(to_py_err)?;
    Ok(*cov.entries())
}

/// Analytic covariance for imbalance ratios delta_b, delta_c.
#[pyfunction]
fn analytic_covariance(delta_b: Complex64, delta_c: Complex64) -> [[f64; 3]; 3] {
    *subspace::analytic_covariance(delta_b, delta_c).entries()
}

/// Eigen-decomposition of a symmetric 3x3 matrix: `(eigenvalues,
/// eigenvectors)`, eigenvalues descending, eigenvectors row-wise.
#[pyfunction]
fn eigen3(matrix: [[f64; 3]; 3]) -> PyResult<([f64; 3], [[f64; 3]; 3])> {
    let cov = subspace::Covariance3::new(matrix).map_err(to_py_err)?;
    let eig = subspace::eigen3(&cov);
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// Number of eigenvalues above tol * lambda_max.
#[pyfunction]
#[pyo3(signature = (matrix, tol=1e-6))]
fn rank_estimate(matrix: [[f64; 3]; 3], tol: f64) -> PyResult<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(PyValueError::new_err("rank tolerance must be positive"));
    }
    let cov = subspace::Covariance3::new(matrix).map_err(to_py_err)?;
    Ok(subspace::rank_estimate(&cov, tol))
}

/// Project samples onto the top-r principal directions.
#[pyfunction]
fn pca_reduce(samples: Vec<(f64, f64, f64)>, r: usize) -> PyResult<Vec<Vec<f64>>> {
    subspace::pca_reduce(&to_series(samples), r).map_err(to_py_err)
}

/// Run the adaptive Clarke/Park pipeline; returns a dict of per-sample
/// lists (`k`, `h`, `g`, `freq_rad`, `freq_hz`, `kappa`, `m_bar`,
/// `m_tilde`, `low_confidence`).
#[pyfunction]
#[pyo3(signature = (samples, mu=0.01, sample_rate_hz=1000.0))]
fn run_pipeline<'py>(
    py: Python<'py>,
    samples: Vec<(f64, f64, f64)>,
    mu: f64,
    sample_rate_hz: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let trace = est::run_pipeline(
        &to_series(samples),
        &est::EstimatorConfig::new(mu, sample_rate_hz),
    )
    .map_err(to_py_err)?;
    let dict = PyDict::new(py);
    let n = trace.len();
    let mut k = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut freq_rad = Vec::with_capacity(n);
    let mut freq_hz = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    let mut m_bar = Vec::with_capacity(n);
    let mut m_tilde = Vec::with_capacity(n);
    let mut low_confidence = Vec::with_capacity(n);
    for r in &trace.records {
        k.push(r.k);
        h.push(r.h);
        g.push(r.g);
        freq_rad.push(r.freq_rad);
        freq_hz.push(r.freq_hz);
        kappa.push(r.kappa);
        m_bar.push(r.m_bar);
        m_tilde.push(r.m_tilde);
        low_confidence.push(r.low_confidence);
    }
    dict.set_item("k", k)?;
    dict.set_item("h", h)?;
    dict.set_item("g", g)?;
    dict.set_item("freq_rad", freq_rad)?;
    dict.set_item("freq_hz", freq_hz)?;
    dict.set_item("kappa", kappa)?;
    dict.set_item("m_bar", m_bar)?;
    dict.set_item("m_tilde", m_tilde)?;
    dict.set_item("low_confidence", low_confidence)?;
    Ok(dict)
}

/// WLAR weights `(h, g)` representing the given frequency and unbalance
/// factor.
#[pyfunction]
fn wlar_weights(omega_rad: f64, kappa: Complex64) -> PyResult<(Complex64, Complex64)> {
    if kappa.norm() >= 1.0 {
        return Err(PyValueError::new_err("|kappa| must be below 1"));
    }
    Ok(est::wlar_weights(omega_rad, kappa))
}

/// Frequency estimate `(omega_rad, low_confidence)` from WLAR weights.
#[pyfunction]
fn extract_frequency(h: Complex64, g: Complex64) -> (f64, bool) {
    let f = est::extract_frequency(h, g);
    (f.omega_rad, f.low_confidence)
}

/// Voltage unbalance factor `(kappa, low_confidence)` from WLAR weights.
#[pyfunction]
fn extract_vuf(h: Complex64, g: Complex64) -> (Complex64, bool) {
    let v = est::extract_vuf(h, g);
    (v.kappa, v.low_confidence)
}

/// Balancing step: removes the negative-sequence component from one
/// complex Clarke sample.
#[pyfunction]
fn adaptive_clarke(s: Complex64, kappa: Complex64) -> PyResult<Complex64> {
    est::adaptive_clarke(s, kappa).map_err(to_py_err)
}

/// FM demodulation of a complex series around omega0 with a moving-average
/// low-pass of `lpf_window` samples.
#[pyfunction]
fn fm_demodulate(samples: Vec<Complex64>, omega0: f64, lpf_window: usize) -> PyResult<Vec<f64>> {
    tf::fm_demodulate(&tf::ComplexSeries::new(0, samples), omega0, lpf_window).map_err(to_py_err)
}

/// Circularity statistics of a complex series as a dict.
#[pyfunction]
fn circularity<'py>(py: Python<'py>, samples: Vec<Complex64>) -> PyResult<Bound<'py, PyDict>> {
    let rep = diagnostics::circularity(&tf::ComplexSeries::new(0, samples)).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("covariance", rep.covariance)?;
    dict.set_item("pseudo_covariance", rep.pseudo_covariance)?;
    dict.set_item("coefficient", rep.circularity_coefficient)?;
    dict.set_item("ellipse_major", rep.ellipse_axes.0)?;
    dict.set_item("ellipse_minor", rep.ellipse_axes.1)?;
    Ok(dict)
}

/// Classify an unbalance factor: returns `(state, vuf_magnitude)` with
/// state "Balanced" or "Unbalanced".
#[pyfunction]
#[pyo3(signature = (kappa, threshold=0.02))]
fn classify(kappa: Complex64, threshold: f64) -> PyResult<(String, f64)> {
    let vuf = est::Vuf {
        kappa,
        low_confidence: false,
    };
    let verdict = diagnostics::classify(&vuf, threshold).map_err(to_py_err)?;
    Ok((verdict.state.as_str().to_string(), verdict.vuf_magnitude))
}

#[pymodule]
fn gridframe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyThreePhaseConfig>()?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    m.add_function(wrap_pyfunction!(phasor_vector, m)?)?;
    m.add_function(wrap_pyfunction!(clarke_full, m)?)?;
    m.add_function(wrap_pyfunction!(clarke_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(clarke_complex, m)?)?;
    m.add_function(wrap_pyfunction!(park, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrical, m)?)?;
    m.add_function(wrap_pyfunction!(sequence_from_waveform, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(eigen3, m)?)?;
    m.add_function(wrap_pyfunction!(rank_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(pca_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(wlar_weights, m)?)?;
    m.add_function(wrap_pyfunction!(extract_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(extract_vuf, m)?)?;
    m.add_function(wrap_pyfunction!(adaptive_clarke, m)?)?;
    m.add_function(wrap_pyfunction!(fm_demodulate, m)?)?;
    m.add_function(wrap_pyfunction!(circularity, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
