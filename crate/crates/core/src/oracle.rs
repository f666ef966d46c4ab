//! Brute-force verification: dense symmetric eigensolver and spectral
//! time evolution.
//!
//! Nothing here touches the closed-form eigensystem. The eigensolver is the
//! cyclic Jacobi method: every off-diagonal pair is rotated to zero in turn
//! until a sweep finds nothing left to rotate.

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Sweep budget of [`dense_symmetric_eig`].
pub const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseEigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` belongs to `eigenvalues[i]`.
    pub eigenvectors: DenseMatrix,
}

impl DenseEigenResult {
    /// `max_i ‖M v_i − λ_i v_i‖`.
    pub fn max_residual(&self, m: &DenseMatrix) -> f64 {
        max_residual(m, &self.eigenvalues, &self.eigenvectors)
    }

    /// `max |VᵀV − I|` entrywise.
    pub fn orthogonality_defect(&self) -> f64 {
        let v = &self.eigenvectors;
        v.transpose().matmul(v).max_abs_diff(&DenseMatrix::identity(v.cols()))
    }
}

fn max_residual(m: &DenseMatrix, values: &[f64], vectors: &DenseMatrix) -> f64 {
    (0..values.len())
        .map(|i| {
            let v = vectors.column(i);
            m.matvec(&v)
                .iter()
                .zip(&v)
                .map(|(mv, x)| (mv - values[i] * x).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn dense_symmetric_eig(m: &DenseMatrix) -> Result<DenseEigenResult> {
    if !m.is_square() || !m.is_symmetric(1e-14) {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(n);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a.get(p, p), a.get(q, q));
                // Below rounding relative to both diagonal entries.
                let g = 100.0 * apq.abs();
                if app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a.set(p, q, 0.0);
                    a.set(q, p, 0.0);
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }

    let raw_values: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            worst_residual: max_residual(m, &raw_values, &v),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw_values[i].total_cmp(&raw_values[j]));
    let eigenvalues = order.iter().map(|&i| raw_values[i]).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |r, col| v.get(r, order[col]));
    Ok(DenseEigenResult {
        eigenvalues,
        eigenvectors,
    })
}

// A ← JᵀAJ and V ← VJ for the rotation J in the (p, q) plane that zeroes a_pq.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for r in 0..n {
        let (arp, arq) = (a.get(r, p), a.get(r, q));
        a.set(r, p, c * arp - s * arq);
        a.set(r, q, s * arp + c * arq);
    }
    for r in 0..n {
        let (apr, aqr) = (a.get(p, r), a.get(q, r));
        a.set(p, r, c * apr - s * aqr);
        a.set(q, r, s * apr + c * aqr);
    }
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    for r in 0..n {
        let (vrp, vrq) = (v.get(r, p), v.get(r, q));
        v.set(r, p, c * vrp - s * vrq);
        v.set(r, q, s * vrp + c * vrq);
    }
}

/// `U diag(e^{iλ_j t}) Uᵀ v`, or with `e^{iλ_j² t}` when `square` is set.
pub fn dense_evolve(m: &DenseMatrix, v: &[Complex64], t: f64, square: bool) -> Result<Vec<Complex64>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: v.len(),
        });
    }
    let eig = dense_symmetric_eig(m)?;
    let u = &eig.eigenvectors;
    let n = v.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let exponent = if square { lambda * lambda } else { lambda };
        let phase = Complex64::from_polar(1.0, exponent * t);
        let coeff: Complex64 = (0..n).map(|r| v[r] * u.get(r, j)).sum::<Complex64>() * phase;
        for (r, slot) in out.iter_mut().enumerate() {
            *slot += coeff * u.get(r, j);
        }
    }
    Ok(out)
}
