//! The hopping Hamiltonian `H = â_2†â_3 + â_3†â_2` on particle-number blocks.
//!
//! `H` conserves the particle number, so it acts block by block. On block `k`
//! it is the real symmetric tridiagonal matrix with zero diagonal and
//! off-diagonal entries `√((α+1)(k−α))`. Two independent application paths
//! are provided: the tridiagonal product ([`apply_hopping`]) and the
//! mode-number form `ĉ†ĉ − d̂†d̂` ([`apply_hopping_via_cd`]).

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::fock::{
    apply_annihilate, apply_c, apply_c_dagger, apply_create, apply_d, apply_d_dagger, FockVector, KVector, Site,
};

/// Largest block for which a dense matrix is materialized by default.
pub const DEFAULT_DENSE_CAP: usize = 2048;

/// Tridiagonal form of `t·H` on the `k`-particle block.
#[derive(Clone, Debug, PartialEq)]
pub struct HoppingMatrix {
    k: usize,
    amplitude: f64,
    offdiag: Vec<f64>,
}

/// `H|_k` with unit hopping amplitude.
pub fn build_hopping_matrix(k: usize) -> HoppingMatrix {
    HoppingMatrix::with_amplitude(k, 1.0)
}

#[inline]
fn offdiag_entry(k: usize, alpha: usize) -> f64 {
    (((alpha + 1) * (k - alpha)) as f64).sqrt()
}

impl HoppingMatrix {
    pub fn with_amplitude(k: usize, amplitude: f64) -> Self {
        let offdiag = (0..k).map(|alpha| amplitude * offdiag_entry(k, alpha)).collect();
        HoppingMatrix { k, amplitude, offdiag }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.k + 1
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Entry `α` couples `|2^α 3^(k−α)⟩` and `|2^(α+1) 3^(k−α−1)⟩`.
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn apply(&self, v: &KVector) -> Result<KVector> {
        if v.k() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        let amps = v.amps();
        let out = (0..=self.k)
            .map(|alpha| {
                let mut acc = Complex64::new(0.0, 0.0);
                if alpha > 0 {
                    acc += amps[alpha - 1] * self.offdiag[alpha - 1];
                }
                if alpha < self.k {
                    acc += amps[alpha + 1] * self.offdiag[alpha];
                }
                acc
            })
            .collect();
        Ok(KVector::from_amps_unchecked(out))
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_dense_capped(DEFAULT_DENSE_CAP)
    }

    pub fn to_dense_capped(&self, cap: usize) -> Result<DenseMatrix> {
        if self.k > cap {
            return Err(Error::DenseCapExceeded { k: self.k, cap });
        }
        Ok(DenseMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i + 1 == j {
                self.offdiag[i]
            } else if j + 1 == i {
                self.offdiag[j]
            } else {
                0.0
            }
        }))
    }
}

/// `H v` by the tridiagonal product, `O(k)`; the result stays in block `k`.
pub fn apply_hopping(v: &KVector) -> KVector {
    let k = v.k();
    let amps = v.amps();
    let out = (0..=k)
        .map(|alpha| {
            let mut acc = Complex64::new(0.0, 0.0);
            if alpha > 0 {
                acc += amps[alpha - 1] * offdiag_entry(k, alpha - 1);
            }
            if alpha < k {
                acc += amps[alpha + 1] * offdiag_entry(k, alpha);
            }
            acc
        })
        .collect();
    KVector::from_amps_unchecked(out)
}

/// `H v` evaluated as `ĉ†ĉ v − d̂†d̂ v`.
pub fn apply_hopping_via_cd(v: &KVector) -> KVector {
    match (apply_c(v), apply_d(v)) {
        (Some(cv), Some(dv)) => &apply_c_dagger(&cv) - &apply_d_dagger(&dv),
        _ => KVector::zeros(v.k()),
    }
}

/// Applies [`apply_hopping`] to every stored block.
pub fn apply_hopping_full(v: &FockVector) -> FockVector {
    v.map_blocks(|b| Some(apply_hopping(b)))
}

/// Total number operator `N̂`; multiplies block `k` by `k`.
pub fn apply_total_number(v: &KVector) -> KVector {
    v.scale_real(v.k() as f64)
}

fn lower_twice(site: Site, v: &KVector) -> Option<KVector> {
    apply_annihilate(site, v).and_then(|w| apply_annihilate(site, &w))
}

fn raise_twice(site: Site, v: &KVector) -> KVector {
    apply_create(site, &apply_create(site, v))
}

// â_2†â_3†â_2â_3 v
fn cross_pair(v: &KVector) -> Option<KVector> {
    let lowered = apply_annihilate(Site::Three, v).and_then(|w| apply_annihilate(Site::Two, &w))?;
    Some(apply_create(Site::Two, &apply_create(Site::Three, &lowered)))
}

fn sum_terms(k: usize, terms: impl IntoIterator<Item = (f64, Option<KVector>)>) -> KVector {
    terms
        .into_iter()
        .filter_map(|(coef, t)| t.map(|t| t.scale_real(coef)))
        .fold(KVector::zeros(k), |acc, t| &acc + &t)
}

/// `H²` in normal order:
/// `(â_2†)²â_3² + (â_3†)²â_2² + 2â_2†â_3†â_2â_3 + N̂`.
pub fn apply_hopping_squared_normal_ordered(v: &KVector) -> KVector {
    let k = v.k();
    sum_terms(
        k,
        [
            (1.0, lower_twice(Site::Three, v).map(|w| raise_twice(Site::Two, &w))),
            (1.0, lower_twice(Site::Two, v).map(|w| raise_twice(Site::Three, &w))),
            (2.0, cross_pair(v)),
            (1.0, Some(apply_total_number(v))),
        ],
    )
}

/// `N̂²` in normal order:
/// `(â_2†)²â_2² + (â_3†)²â_3² + 2â_2†â_3†â_2â_3 + N̂`.
pub fn apply_number_squared_normal_ordered(v: &KVector) -> KVector {
    let k = v.k();
    sum_terms(
        k,
        [
            (1.0, lower_twice(Site::Two, v).map(|w| raise_twice(Site::Two, &w))),
            (1.0, lower_twice(Site::Three, v).map(|w| raise_twice(Site::Three, &w))),
            (2.0, cross_pair(v)),
            (1.0, Some(apply_total_number(v))),
        ],
    )
}

/// Spin-`s` x-projection with `s = two_s/2`, in the standard normalization.
///
/// Equal to `H|_k / 2` with `k = two_s`, so its eigenvalues are
/// `−s, −s+1, …, s`.
pub fn spin_x_matrix(two_s: usize) -> Result<DenseMatrix> {
    Ok(build_hopping_matrix(two_s).to_dense()?.scaled(0.5))
}
