//! Scenario files: a signal configuration plus run length, estimator
//! settings, and the list of artifacts a run should produce.

use serde::{Deserialize, Serialize};

use gridframe_core::adaptive_estimator::{EstimatorConfig, DEFAULT_MU};
use gridframe_core::error::{Error, Result};
use gridframe_core::io::ComplexJson;
use gridframe_core::signal_model::ThreePhaseConfig;

/// Artifact kinds a scenario can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    /// Raw three-phase samples (`k,va,vb,vc`).
    Raw,
    /// Reduced-Clarke αβ series (`k,valpha,vbeta`).
    Clarke,
    /// Classical Park series at the base frequency (`k,vd,vq`).
    Park,
    /// Adaptive estimator trace.
    Trace,
    /// Empirical covariance and its eigen-decomposition (JSON).
    Covariance,
    /// Circularity report of the complex Clarke voltage (JSON).
    Circularity,
}

impl OutputKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputKind::Raw => "raw",
            OutputKind::Clarke => "clarke",
            OutputKind::Park => "park",
            OutputKind::Trace => "trace",
            OutputKind::Covariance => "covariance",
            OutputKind::Circularity => "circularity",
        }
    }
}

/// ACLMS settings carried by a scenario.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EstimatorSettings {
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default)]
    pub initial_h: ComplexJson,
    #[serde(default)]
    pub initial_g: ComplexJson,
}

fn default_mu() -> f64 {
    DEFAULT_MU
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        EstimatorSettings {
            mu: DEFAULT_MU,
            initial_h: ComplexJson::default(),
            initial_g: ComplexJson::default(),
        }
    }
}

/// A reproducible run description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub config: ThreePhaseConfig,
    /// Number of samples to synthesize; must be positive.
    pub duration: usize,
    #[serde(default)]
    pub estimator: EstimatorSettings,
    /// Requested artifacts; must be non-empty.
    pub outputs: Vec<OutputKind>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.duration == 0 {
            return Err(Error::Config("scenario duration must be positive".into()));
        }
        if self.outputs.is_empty() {
            return Err(Error::Config(
                "scenario must request at least one output".into(),
            ));
        }
        if self.estimator.mu <= 0.0 || !self.estimator.mu.is_finite() {
            return Err(Error::Config(format!(
                "estimator learning rate must be positive, got {}",
                self.estimator.mu
            )));
        }
        Ok(())
    }

    pub fn estimator_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            mu: self.estimator.mu,
            initial_h: self.estimator.initial_h.into(),
            initial_g: self.estimator.initial_g.into(),
            sample_rate_hz: self.config.sample_rate_hz,
        }
    }
}
