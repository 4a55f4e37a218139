//! Bundled demonstration scenarios: balanced circle, Type C/D sag
//! ellipses, the Park transient under a frequency step, and the
//! self-balancing adaptive Clarke run.

use std::fs;
use std::path::Path;

use gridframe_core::diagnostics::circularity;
use gridframe_core::error::Result;
use gridframe_core::io;
use gridframe_core::signal_model::{
    synth_seeded, FrequencyEvent, SagSpec, SagType, SampleSeries, ThreePhaseConfig,
};
use gridframe_core::subspace::{eigen3, empirical_covariance};
use gridframe_core::transforms::{clarke_complex, clarke_reduced, nominal_theta, park};
use gridframe_core::adaptive_estimator::run_pipeline;

use crate::scenario::{OutputKind, Scenario};

fn base_config() -> ThreePhaseConfig {
    ThreePhaseConfig::balanced(1.0, 50.0, 1000.0)
}

fn scenarios() -> Vec<(&'static str, Scenario)> {
    let mut list = Vec::new();

    list.push((
        "balanced_circle",
        Scenario {
            config: base_config(),
            duration: 2000,
            estimator: Default::default(),
            outputs: vec![OutputKind::Raw, OutputKind::Clarke, OutputKind::Circularity],
        },
    ));

    for (name, ty) in [
        ("type_c_ellipse", SagType::TypeC),
        ("type_d_ellipse", SagType::TypeD),
    ] {
        let mut config = base_config();
        config.sag_events.push(SagSpec {
            sag_type: ty,
            depth: 0.5,
            start_index: 0,
            end_index: 2000,
        });
        list.push((
            name,
            Scenario {
                config,
                duration: 2000,
                estimator: Default::default(),
                outputs: vec![OutputKind::Raw, OutputKind::Clarke, OutputKind::Circularity],
            },
        ));
    }

    let mut config = base_config();
    config.frequency_events.push(FrequencyEvent {
        start_index: 3000,
        new_frequency_hz: 49.5,
    });
    list.push((
        "park_transient",
        Scenario {
            config,
            duration: 10_000,
            estimator: Default::default(),
            outputs: vec![OutputKind::Raw, OutputKind::Park, OutputKind::Trace],
        },
    ));

    let mut config = base_config();
    config.sag_events.push(SagSpec {
        sag_type: SagType::TypeD,
        depth: 0.5,
        start_index: 0,
        end_index: 6000,
    });
    list.push((
        "self_balancing",
        Scenario {
            config,
            duration: 6000,
            estimator: Default::default(),
            outputs: vec![
                OutputKind::Raw,
                OutputKind::Clarke,
                OutputKind::Trace,
                OutputKind::Covariance,
                OutputKind::Circularity,
            ],
        },
    ));

    list
}

fn write_artifacts(dir: &Path, name: &str, scenario: &Scenario, seed: u64) -> Result<String> {
    let series: SampleSeries = synth_seeded(&scenario.config, scenario.duration, seed)?;
    let mut summary = format!("{name}: {} samples", series.len());
    for output in &scenario.outputs {
        let file = |ext: &str| dir.join(format!("{name}.{}.{ext}", output.as_str()));
        match output {
            OutputKind::Raw => {
                let mut f = fs::File::create(file("csv"))?;
                io::write_sample_series_csv(&mut f, &series)?;
            }
            OutputKind::Clarke => {
                let mut f = fs::File::create(file("csv"))?;
                io::write_alpha_beta_csv(&mut f, &clarke_reduced(&series))?;
            }
            OutputKind::Park => {
                let theta = nominal_theta(series.start_index, series.len(), scenario.config.omega());
                let dq = park(&clarke_reduced(&series), &theta)?;
                let mut f = fs::File::create(file("csv"))?;
                io::write_park_csv(&mut f, &dq)?;
            }
            OutputKind::Trace => {
                let trace = run_pipeline(&series, &scenario.estimator_config())?;
                let mut f = fs::File::create(file("csv"))?;
                io::write_trace_csv(&mut f, &trace)?;
                if let Some(last) = trace.final_record() {
                    summary.push_str(&format!(
                        ", final f = {:.3} Hz, |kappa| = {:.4}",
                        last.freq_hz,
                        last.kappa.norm()
                    ));
                }
                // Tail circularity of the adaptive Clarke output, for the
                // self-balancing comparison.
                let lo = 6 * trace.len() / 10;
                if trace.len() - lo >= 2 {
                    let tail = gridframe_core::transforms::ComplexSeries::new(
                        lo,
                        trace.records[lo..].iter().map(|r| r.m_bar).collect(),
                    );
                    if let Ok(rep) = circularity(&tail) {
                        summary.push_str(&format!(
                            ", adaptive circularity = {:.4}",
                            rep.circularity_coefficient
                        ));
                    }
                }
            }
            OutputKind::Covariance => {
                let cov = empirical_covariance(&series)?;
                let eig = eigen3(&cov);
                fs::write(file("json"), io::subspace_json(&cov, &eig))?;
            }
            OutputKind::Circularity => {
                let rep = circularity(&clarke_complex(&series))?;
                fs::write(file("json"), io::circularity_json(&rep))?;
                summary.push_str(&format!(
                    ", raw circularity = {:.4}",
                    rep.circularity_coefficient
                ));
            }
        }
    }
    Ok(summary)
}

/// Write every demo scenario and its artifacts under `dir`.
pub fn run(dir: &Path, seed: u64) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut summaries = Vec::new();
    for (name, scenario) in scenarios() {
        fs::write(
            dir.join(format!("{name}.scenario.json")),
            scenario.to_json(),
        )?;
        summaries.push(write_artifacts(dir, name, &scenario, seed)?);
    }
    Ok(summaries)
}
