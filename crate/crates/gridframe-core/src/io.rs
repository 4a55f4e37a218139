//! CSV and JSON wire formats.
//!
//! All CSV files carry a fixed header, LF line endings, and numbers printed
//! as the shortest decimal that round-trips to the same f64, so piping a
//! file through write → read is lossless.
//!
//! Formats:
//!
//! | payload            | header / shape                                       |
//! |--------------------|------------------------------------------------------|
//! | sample series      | `k,va,vb,vc`                                         |
//! | complex series     | `k,re,im`                                            |
//! | full Clarke        | `k,v0,valpha,vbeta`                                  |
//! | reduced Clarke     | `k,valpha,vbeta`                                     |
//! | Park               | `k,vd,vq`                                            |
//! | estimator trace    | `k,h_re,h_im,g_re,g_im,freq_rad,freq_hz,kappa_re,`   |
//! |                    | `kappa_im,mbar_re,mbar_im,mtilde_re,mtilde_im,`      |
//! |                    | `low_confidence`                                     |
//! | sequence phasors   | `{zero:{re,im}, positive:{re,im}, negative:{re,im}}` |
//! | covariance + eigen | `{matrix, eigenvalues, eigenvectors}`                |
//! | circularity        | `{covariance, pseudo_re, pseudo_im, coefficient,`    |
//! |                    | ` ellipse_major, ellipse_minor}`                     |
//! | verdict            | `{state, vuf_magnitude}`                             |

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::adaptive_estimator::EstimatorTrace;
use crate::diagnostics::{BalanceVerdict, CircularityReport};
use crate::error::{Error, Result};
use crate::signal_model::{SampleSeries, ThreePhaseConfig};
use crate::subspace::{Covariance3, EigenDecomposition};
use crate::transforms::{
    AlphaBeta, AlphaBetaSeries, ClarkeSeries, ComplexSeries, ParkSeries, SequencePhasors,
};

pub const SAMPLE_HEADER: &str = "k,va,vb,vc";
pub const COMPLEX_HEADER: &str = "k,re,im";
pub const CLARKE_HEADER: &str = "k,v0,valpha,vbeta";
pub const ALPHA_BETA_HEADER: &str = "k,valpha,vbeta";
pub const PARK_HEADER: &str = "k,vd,vq";
pub const TRACE_HEADER: &str = "k,h_re,h_im,g_re,g_im,freq_rad,freq_hz,kappa_re,kappa_im,mbar_re,mbar_im,mtilde_re,mtilde_im,low_confidence";

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

pub fn write_sample_series_csv<W: Write>(w: &mut W, s: &SampleSeries) -> Result<()> {
    writeln!(w, "{SAMPLE_HEADER}")?;
    for (i, row) in s.samples.iter().enumerate() {
        writeln!(w, "{},{},{},{}", s.start_index + i, row[0], row[1], row[2])?;
    }
    Ok(())
}

pub fn write_complex_series_csv<W: Write>(w: &mut W, s: &ComplexSeries) -> Result<()> {
    writeln!(w, "{COMPLEX_HEADER}")?;
    for (i, z) in s.samples.iter().enumerate() {
        writeln!(w, "{},{},{}", s.start_index + i, z.re, z.im)?;
    }
    Ok(())
}

pub fn write_clarke_csv<W: Write>(w: &mut W, s: &ClarkeSeries) -> Result<()> {
    writeln!(w, "{CLARKE_HEADER}")?;
    for (i, c) in s.samples.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            s.start_index + i,
            c.v0,
            c.valpha,
            c.vbeta
        )?;
    }
    Ok(())
}

pub fn write_alpha_beta_csv<W: Write>(w: &mut W, s: &AlphaBetaSeries) -> Result<()> {
    writeln!(w, "{ALPHA_BETA_HEADER}")?;
    for (i, ab) in s.samples.iter().enumerate() {
        writeln!(w, "{},{},{}", s.start_index + i, ab.alpha, ab.beta)?;
    }
    Ok(())
}

pub fn write_park_csv<W: Write>(w: &mut W, s: &ParkSeries) -> Result<()> {
    writeln!(w, "{PARK_HEADER}")?;
    for (i, dq) in s.samples.iter().enumerate() {
        writeln!(w, "{},{},{}", s.start_index + i, dq.d, dq.q)?;
    }
    Ok(())
}

pub fn write_trace_csv<W: Write>(w: &mut W, trace: &EstimatorTrace) -> Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in &trace.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            r.h.re,
            r.h.im,
            r.g.re,
            r.g.im,
            r.freq_rad,
            r.freq_hz,
            r.kappa.re,
            r.kappa.im,
            r.m_bar.re,
            r.m_bar.im,
            r.m_tilde.re,
            r.m_tilde.im,
            u8::from(r.low_confidence)
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// CSV readers
// ---------------------------------------------------------------------------

struct CsvRows<R: BufRead> {
    reader: R,
    line: usize,
    columns: usize,
}

impl<R: BufRead> CsvRows<R> {
    /// Open a CSV stream and check the header literally.
    fn open(mut reader: R, expected_header: &str) -> Result<Self> {
        let mut header = String::new();
        let n = reader.read_line(&mut header)?;
        if n == 0 {
            return Err(Error::Parse {
                line: 1,
                message: "empty input, expected a CSV header".into(),
            });
        }
        let trimmed = header.trim_end_matches(['\r', '\n']);
        if trimmed != expected_header {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `{expected_header}`, found `{trimmed}`"),
            });
        }
        Ok(CsvRows {
            reader,
            line: 1,
            columns: expected_header.split(',').count(),
        })
    }

    /// Next data row as (k, values); rows must keep k consecutive.
    fn next_row(&mut self) -> Result<Option<(usize, Vec<f64>)>> {
        let mut buf = String::new();
        loop {
            buf.clear();
            let n = self.reader.read_line(&mut buf)?;
            if n == 0 {
                return Ok(None);
            }
            self.line += 1;
            let text = buf.trim_end_matches(['\r', '\n']);
            if text.is_empty() {
                continue;
            }
            let fields: Vec<&str> = text.split(',').collect();
            if fields.len() != self.columns {
                return Err(Error::Parse {
                    line: self.line,
                    message: format!(
                        "expected {} fields, found {}",
                        self.columns,
                        fields.len()
                    ),
                });
            }
            let k: usize = fields[0].parse().map_err(|_| Error::Parse {
                line: self.line,
                message: format!("invalid sample index `{}`", fields[0]),
            })?;
            let mut values = Vec::with_capacity(self.columns - 1);
            for f in &fields[1..] {
                let v: f64 = f.parse().map_err(|_| Error::Parse {
                    line: self.line,
                    message: format!("invalid number `{f}`"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line: self.line,
                        message: format!("non-finite value `{f}`"),
                    });
                }
                values.push(v);
            }
            return Ok(Some((k, values)));
        }
    }
}

fn read_indexed<R, T, F>(reader: R, header: &str, mut build: F) -> Result<(usize, Vec<T>)>
where
    R: BufRead,
    F: FnMut(&[f64]) -> T,
{
    let mut rows = CsvRows::open(reader, header)?;
    let mut start_index = 0usize;
    let mut out: Vec<T> = Vec::new();
    while let Some((k, values)) = rows.next_row()? {
        if out.is_empty() {
            start_index = k;
        } else if k != start_index + out.len() {
            return Err(Error::Parse {
                line: rows.line,
                message: format!(
                    "non-consecutive sample index {k}, expected {}",
                    start_index + out.len()
                ),
            });
        }
        out.push(build(&values));
    }
    Ok((start_index, out))
}

pub fn read_sample_series_csv<R: BufRead>(reader: R) -> Result<SampleSeries> {
    let (start_index, samples) =
        read_indexed(reader, SAMPLE_HEADER, |v| [v[0], v[1], v[2]])?;
    Ok(SampleSeries::new(start_index, samples))
}

pub fn read_complex_series_csv<R: BufRead>(reader: R) -> Result<ComplexSeries> {
    let (start_index, samples) =
        read_indexed(reader, COMPLEX_HEADER, |v| Complex64::new(v[0], v[1]))?;
    Ok(ComplexSeries::new(start_index, samples))
}

pub fn read_alpha_beta_csv<R: BufRead>(reader: R) -> Result<AlphaBetaSeries> {
    let (start_index, samples) = read_indexed(reader, ALPHA_BETA_HEADER, |v| AlphaBeta {
        alpha: v[0],
        beta: v[1],
    })?;
    Ok(AlphaBetaSeries {
        start_index,
        samples,
    })
}

// ---------------------------------------------------------------------------
// JSON payloads
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(z: ComplexJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SequencePhasorsJson {
    pub zero: ComplexJson,
    pub positive: ComplexJson,
    pub negative: ComplexJson,
}

impl From<&SequencePhasors> for SequencePhasorsJson {
    fn from(s: &SequencePhasors) -> Self {
        SequencePhasorsJson {
            zero: s.zero.into(),
            positive: s.positive.into(),
            negative: s.negative.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub matrix: [[f64; 3]; 3],
    pub eigenvalues: [f64; 3],
    pub eigenvectors: [[f64; 3]; 3],
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CircularityJson {
    pub covariance: f64,
    pub pseudo_re: f64,
    pub pseudo_im: f64,
    pub coefficient: f64,
    pub ellipse_major: f64,
    pub ellipse_minor: f64,
}

impl From<&CircularityReport> for CircularityJson {
    fn from(r: &CircularityReport) -> Self {
        CircularityJson {
            covariance: r.covariance,
            pseudo_re: r.pseudo_covariance.re,
            pseudo_im: r.pseudo_covariance.im,
            coefficient: r.circularity_coefficient,
            ellipse_major: r.ellipse_axes.0,
            ellipse_minor: r.ellipse_axes.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub state: String,
    pub vuf_magnitude: f64,
}

impl From<&BalanceVerdict> for VerdictJson {
    fn from(v: &BalanceVerdict) -> Self {
        VerdictJson {
            state: v.state.as_str().to_string(),
            vuf_magnitude: v.vuf_magnitude,
        }
    }
}

pub fn sequence_phasors_json(s: &SequencePhasors) -> String {
    serde_json::to_string_pretty(&SequencePhasorsJson::from(s)).expect("serializable")
}

pub fn subspace_json(cov: &Covariance3, eig: &EigenDecomposition) -> String {
    serde_json::to_string_pretty(&SubspaceJson {
        matrix: *cov.entries(),
        eigenvalues: eig.eigenvalues,
        eigenvectors: eig.eigenvectors,
    })
    .expect("serializable")
}

pub fn circularity_json(r: &CircularityReport) -> String {
    serde_json::to_string_pretty(&CircularityJson::from(r)).expect("serializable")
}

pub fn verdict_json(v: &BalanceVerdict) -> String {
    serde_json::to_string_pretty(&VerdictJson::from(v)).expect("serializable")
}

/// Parse a [`ThreePhaseConfig`] from JSON, mapping serde errors to
/// line-level parse errors.
pub fn config_from_json(text: &str) -> Result<ThreePhaseConfig> {
    let cfg: ThreePhaseConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn config_to_json(cfg: &ThreePhaseConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal_model::{synth, ThreePhaseConfig};
    use crate::transforms::{clarke_complex, clarke_reduced};

    #[test]
    fn sample_series_round_trip_is_exact() {
        let cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let s = synth(&cfg, 64).unwrap();
        let mut buf = Vec::new();
        write_sample_series_csv(&mut buf, &s).unwrap();
        let back = read_sample_series_csv(buf.as_slice()).unwrap();
        assert_eq!(s, back);
        // LF endings only.
        assert!(!buf.contains(&b'\r'));
    }

    #[test]
    fn complex_series_round_trip_is_exact() {
        let cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let s = clarke_complex(&synth(&cfg, 32).unwrap());
        let mut buf = Vec::new();
        write_complex_series_csv(&mut buf, &s).unwrap();
        let back = read_complex_series_csv(buf.as_slice()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn alpha_beta_round_trip_is_exact() {
        let cfg = ThreePhaseConfig::balanced(1.0, 50.0, 1000.0);
        let ab = clarke_reduced(&synth(&cfg, 32).unwrap());
        let mut buf = Vec::new();
        write_alpha_beta_csv(&mut buf, &ab).unwrap();
        let back = read_alpha_beta_csv(buf.as_slice()).unwrap();
        assert_eq!(ab, back);
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = "k,va,vb,vc\n0,1.0,2.0,3.0\n1,nope,2.0,3.0\n";
        let err = read_sample_series_csv(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other}"),
        }
        let text = "k,va,vb\n";
        assert!(read_sample_series_csv(text.as_bytes()).is_err());
        let text = "k,va,vb,vc\n0,1.0,2.0,3.0\n5,1.0,2.0,3.0\n";
        let err = read_sample_series_csv(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn json_shapes_match_contracts() {
        let seq = SequencePhasors {
            zero: Complex64::new(0.0, 0.0),
            positive: Complex64::new(1.5, -0.5),
            negative: Complex64::new(0.25, 0.0),
        };
        let v: serde_json::Value =
            serde_json::from_str(&sequence_phasors_json(&seq)).unwrap();
        assert_eq!(v["positive"]["re"], 1.5);
        assert_eq!(v["positive"]["im"], -0.5);
        assert!(v["zero"].get("re").is_some());

        let rep = CircularityReport {
            covariance: 1.0,
            pseudo_covariance: Complex64::new(0.5, -0.25),
            circularity_coefficient: 0.559,
            ellipse_axes: (1.25, 0.66),
        };
        let v: serde_json::Value = serde_json::from_str(&circularity_json(&rep)).unwrap();
        for key in [
            "covariance",
            "pseudo_re",
            "pseudo_im",
            "coefficient",
            "ellipse_major",
            "ellipse_minor",
        ] {
            assert!(v.get(key).is_some(), "missing key {key}");
        }
    }

    #[test]
    fn config_json_errors_carry_lines() {
        let text = "{\n  \"amplitudes\": [1.0, 1.0],\n}";
        match config_from_json(text) {
            Err(Error::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
