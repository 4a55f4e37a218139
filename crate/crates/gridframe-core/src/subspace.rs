//! Covariance and principal-component analysis of three-phase signals.
//!
//! The empirical covariance of a noise-free three-phase voltage is rank-2
//! for any imbalance: it is a sum of the two rank-1 outer products formed
//! by the real and imaginary parts of the phasor vector. For a balanced
//! system the top-2 eigenvectors span exactly the rows of the reduced
//! Clarke matrix, which is what makes the Clarke transform a principal
//! component analyser in that regime.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal_model::SampleSeries;

const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues closer than this (relative to λmax) are treated as one
/// repeated eigenvalue whose eigenspace basis is canonicalized.
const CLUSTER_TOL: f64 = 1e-10;
/// Threshold below which an eigenvector component counts as zero for the
/// sign convention.
const SIGN_TOL: f64 = 1e-7;

/// Real symmetric 3×3 covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance3 {
    entries: [[f64; 3]; 3],
}

impl Covariance3 {
    /// Build from raw entries, rejecting non-symmetric input.
    pub fn new(entries: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if (entries[i][j] - entries[j][i]).abs() > SYMMETRY_TOL {
                    return Err(Error::Validation(format!(
                        "matrix is not symmetric: ({i},{j}) = {} vs ({j},{i}) = {}",
                        entries[i][j], entries[j][i]
                    )));
                }
            }
        }
        Ok(Covariance3 { entries })
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }
}

/// Eigen-decomposition of a symmetric 3×3 matrix: eigenvalues sorted in
/// descending order with `eigenvectors[i]` the unit eigenvector of
/// `eigenvalues[i]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: [f64; 3],
    pub eigenvectors: [[f64; 3]; 3],
}

/// Empirical covariance (1/N)·Σ sₖ·sₖᵀ, without mean subtraction.
pub fn empirical_covariance(s: &SampleSeries) -> Result<Covariance3> {
    if s.is_empty() {
        return Err(Error::Validation(
            "empirical covariance of an empty series".into(),
        ));
    }
    let mut acc = [[0.0_f64; 3]; 3];
    for row in &s.samples {
        for i in 0..3 {
            for j in i..3 {
                acc[i][j] += row[i] * row[j];
            }
        }
    }
    let n = s.len() as f64;
    let mut entries = [[0.0_f64; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = acc[i][j] / n;
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    Ok(Covariance3 { entries })
}

/// Analytic covariance of a three-phase signal with imbalance ratios
/// δb, δc (phase-a amplitude 1):
///
/// ```text
/// R = (1/2)·Re{v·vᴴ},   v = (1, δb, δc)ᵀ
/// ```
pub fn analytic_covariance(delta_b: Complex64, delta_c: Complex64) -> Covariance3 {
    let v = [Complex64::new(1.0, 0.0), delta_b, delta_c];
    let mut entries = [[0.0_f64; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let e = 0.5 * (v[i] * v[j].conj()).re;
            entries[i][j] = e;
            entries[j][i] = e;
        }
    }
    Covariance3 { entries }
}

fn frobenius(m: &[[f64; 3]; 3]) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

fn off_diagonal_norm(m: &[[f64; 3]; 3]) -> f64 {
    (2.0 * (m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2])).sqrt()
}

/// Eigen-decomposition by cyclic Jacobi rotations.
///
/// Within a repeated-eigenvalue cluster the eigenvectors are only defined
/// up to rotation, so the basis is canonicalized deterministically: the
/// coordinate axes are projected into the cluster subspace and
/// Gram-Schmidt orthonormalized in order, then every eigenvector is
/// flipped so that its first non-negligible component is positive.
pub fn eigen3(r: &Covariance3) -> EigenDecomposition {
    let mut a = r.entries;
    // q accumulates rotations; its columns are eigenvectors.
    let mut q = [[0.0_f64; 3]; 3];
    for (i, row) in q.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let stop = 1e-14 * frobenius(&a).max(1.0);
    for _sweep in 0..50 {
        if off_diagonal_norm(&a) < stop {
            break;
        }
        for p in 0..2 {
            for qi in (p + 1)..3 {
                let apq = a[p][qi];
                if apq == 0.0 {
                    continue;
                }
                let diff = a[qi][qi] - a[p][p];
                let t = if apq.abs() < 1e-300 * diff.abs() {
                    apq / diff
                } else {
                    let phi = diff / (2.0 * apq);
                    let mut t = 1.0 / (phi.abs() + (phi * phi + 1.0).sqrt());
                    if phi < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← Jᵀ A J for the (p, qi) rotation.
                for k in 0..3 {
                    let akp = a[k][p];
                    let akq = a[k][qi];
                    a[k][p] = c * akp - s * akq;
                    a[k][qi] = s * akp + c * akq;
                }
                for k in 0..3 {
                    let apk = a[p][k];
                    let aqk = a[qi][k];
                    a[p][k] = c * apk - s * aqk;
                    a[qi][k] = s * apk + c * aqk;
                }
                for row in q.iter_mut() {
                    let qp = row[p];
                    let qq = row[qi];
                    row[p] = c * qp - s * qq;
                    row[qi] = s * qp + c * qq;
                }
            }
        }
    }

    // Sort eigenpairs descending; vectors move to row-major storage.
    let mut pairs: Vec<(f64, [f64; 3])> = (0..3)
        .map(|i| (a[i][i], [q[0][i], q[1][i], q[2][i]]))
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    let lambda_max = pairs[0].0.abs().max(pairs[2].0.abs());
    let cluster_gap = CLUSTER_TOL * lambda_max.max(f64::MIN_POSITIVE);

    // Canonicalize repeated-eigenvalue clusters.
    let mut i = 0;
    while i < 3 {
        let mut j = i + 1;
        while j < 3 && (pairs[j - 1].0 - pairs[j].0).abs() <= cluster_gap {
            j += 1;
        }
        if j - i > 1 {
            canonicalize_cluster(&mut pairs, i, j);
        }
        i = j;
    }

    let mut eigenvalues = [0.0_f64; 3];
    let mut eigenvectors = [[0.0_f64; 3]; 3];
    for (i, (val, mut vec)) in pairs.into_iter().enumerate() {
        apply_sign_convention(&mut vec);
        eigenvalues[i] = val;
        eigenvectors[i] = vec;
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Replace eigenvectors `lo..hi` (a repeated-eigenvalue cluster) with the
/// Gram-Schmidt orthonormalization of the coordinate axes projected onto
/// the cluster subspace.
fn canonicalize_cluster(pairs: &mut [(f64, [f64; 3])], lo: usize, hi: usize) {
    let dim = hi - lo;
    let members: Vec<[f64; 3]> = pairs[lo..hi].iter().map(|p| p.1).collect();
    let project = |x: &[f64; 3]| -> [f64; 3] {
        let mut out = [0.0_f64; 3];
        for m in &members {
            let dot: f64 = (0..3).map(|i| m[i] * x[i]).sum();
            for i in 0..3 {
                out[i] += dot * m[i];
            }
        }
        out
    };
    let mut chosen: Vec<[f64; 3]> = Vec::with_capacity(dim);
    for axis in 0..3 {
        if chosen.len() == dim {
            break;
        }
        let mut e = [0.0_f64; 3];
        e[axis] = 1.0;
        let mut v = project(&e);
        for c in &chosen {
            let dot: f64 = (0..3).map(|i| c[i] * v[i]).sum();
            for i in 0..3 {
                v[i] -= dot * c[i];
            }
        }
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-6 {
            for x in &mut v {
                *x /= norm;
            }
            chosen.push(v);
        }
    }
    // A full-rank subspace always yields enough axes; keep the Jacobi
    // basis for any remainder.
    for (slot, v) in chosen.into_iter().enumerate() {
        pairs[lo + slot].1 = v;
    }
}

fn apply_sign_convention(v: &mut [f64; 3]) {
    for &x in v.iter() {
        if x.abs() > SIGN_TOL {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

/// Number of eigenvalues above `tol`·λmax.
pub fn rank_estimate(r: &Covariance3, tol: f64) -> usize {
    assert!(tol > 0.0, "rank tolerance must be positive");
    let eig = eigen3(r);
    let lambda_max = eig.eigenvalues[0];
    eig.eigenvalues
        .iter()
        .filter(|&&l| l > tol * lambda_max)
        .count()
}

/// Project each sample onto the top-`r` eigenvectors of the empirical
/// covariance.
pub fn pca_reduce(x: &SampleSeries, r: usize) -> Result<Vec<Vec<f64>>> {
    if !(1..=3).contains(&r) {
        return Err(Error::Validation(format!(
            "reduction order must lie in 1..=3, got {r}"
        )));
    }
    let cov = empirical_covariance(x)?;
    let eig = eigen3(&cov);
    let out = x
        .samples
        .iter()
        .map(|row| {
            (0..r)
                .map(|i| {
                    let q = &eig.eigenvectors[i];
                    q[0] * row[0] + q[1] * row[1] + q[2] * row[2]
                })
                .collect()
        })
        .collect();
    Ok(out)
}
