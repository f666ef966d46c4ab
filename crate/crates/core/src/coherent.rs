//! Two-mode coherent states and their energy statistics.
//!
//! `|w,z⟩ = e^{−(|w|²+|z|²)/2} exp(w ĉ†) exp(z d̂†) |vac⟩` (the [`Convention::CD`]
//! form) and `|w,z⟩₀ = e^{−(|w|²+|z|²)/2} exp(w â_2†) exp(z â_3†) |vac⟩` (the
//! [`Convention::A23`] form) describe the same family, related by
//! `|w,z⟩ = |(w+z)/√2, (w−z)/√2⟩₀`.
//!
//! In the CD form the coefficient over the normalized eigenvector `(k, m)` is
//! `e^{−(|w|²+|z|²)/2} w^m z^{k−m} / √(m!(k−m)!)`. In the A23 form the same
//! expression with `m → α` is the coefficient of `|2^α 3^(k−α)⟩`. The two
//! builders therefore take independent routes to the same state.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::eigensystem::{EigenBasisCoeffs, Eigenbasis};
use crate::error::{Error, Result};
use crate::fock::{FockVector, KVector};
use crate::hamiltonian::apply_hopping_full;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Which pair of creation operators the amplitudes multiply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `exp(w ĉ†) exp(z d̂†)`.
    CD,
    /// `exp(w â_2†) exp(z â_3†)`.
    A23,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentParams {
    pub w: Complex64,
    pub z: Complex64,
    pub convention: Convention,
}

impl CoherentParams {
    pub fn cd(w: Complex64, z: Complex64) -> Self {
        CoherentParams {
            w,
            z,
            convention: Convention::CD,
        }
    }

    pub fn a23(w: Complex64, z: Complex64) -> Self {
        CoherentParams {
            w,
            z,
            convention: Convention::A23,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.w, self.z].iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Same state in the other convention.
    pub fn converted(&self) -> Self {
        convert_params(self)
    }

    /// Same state in the CD convention.
    pub fn to_cd(&self) -> Self {
        match self.convention {
            Convention::CD => *self,
            Convention::A23 => self.converted(),
        }
    }

    /// `(−w, −z)` in the same convention.
    pub fn negated(&self) -> Self {
        CoherentParams {
            w: -self.w,
            z: -self.z,
            convention: self.convention,
        }
    }

    /// Mean particle number `|w|² + |z|²` (convention independent).
    pub fn mean_particles(&self) -> f64 {
        self.w.norm_sqr() + self.z.norm_sqr()
    }
}

/// `(w, z) ↦ ((w+z)/√2, (w−z)/√2)` with the convention tag flipped. The map
/// is its own inverse.
pub fn convert_params(p: &CoherentParams) -> CoherentParams {
    CoherentParams {
        w: (p.w + p.z) * FRAC_1_SQRT_2,
        z: (p.w - p.z) * FRAC_1_SQRT_2,
        convention: match p.convention {
            Convention::CD => Convention::A23,
            Convention::A23 => Convention::CD,
        },
    }
}

/// How many particle-number blocks a coherent state keeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Largest probability mass allowed outside the retained blocks.
    pub tail_epsilon: f64,
    /// Highest block that may be retained.
    pub k_max: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_epsilon: 1e-12,
            k_max: 512,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tail_epsilon: f64, k_max: usize) -> Result<Self> {
        if !(tail_epsilon > 0.0 && tail_epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tail_epsilon must lie in (0, 1), got {tail_epsilon}"
            )));
        }
        if k_max == 0 {
            return Err(Error::InvalidArgument("k_max must be positive".into()));
        }
        Ok(TruncationPolicy { tail_epsilon, k_max })
    }

    /// Highest block needed so the Poisson(`mean`) mass of blocks `0..=K`
    /// reaches `1 − tail_epsilon`.
    pub fn cutoff(&self, mean: f64) -> Result<usize> {
        let target = 1.0 - self.tail_epsilon;
        let mut weight = (-mean).exp();
        let mut retained = weight;
        let mut k = 0;
        while retained < target {
            if k == self.k_max {
                return Err(Error::TruncationFailure {
                    k_max: self.k_max,
                    retained,
                });
            }
            k += 1;
            weight *= mean / k as f64;
            retained += weight;
        }
        Ok(k)
    }
}

/// `e^{−(|w|²+|z|²)/2} w^j z^{k−j} / √(j!(k−j)!)` for `j = 0..=k`, per block,
/// by the recurrences `t(k, j) = t(k−1, j−1)·w/√j = t(k−1, j)·z/√(k−j)`.
fn product_coefficients(w: Complex64, z: Complex64, k_cut: usize) -> Vec<Vec<Complex64>> {
    let mut blocks = Vec::with_capacity(k_cut + 1);
    let prefactor = (-(w.norm_sqr() + z.norm_sqr()) / 2.0).exp();
    blocks.push(vec![Complex64::new(prefactor, 0.0)]);
    for k in 1..=k_cut {
        let prev: &Vec<Complex64> = blocks.last().expect("nonempty");
        let mut row = Vec::with_capacity(k + 1);
        row.push(prev[0] * z / (k as f64).sqrt());
        for j in 1..=k {
            row.push(prev[j - 1] * w / (j as f64).sqrt());
        }
        blocks.push(row);
    }
    blocks
}

/// Builds the truncated coherent state for `p`.
///
/// Blocks `0..=K` are kept, with `K` the smallest cutoff whose retained mass
/// reaches `1 − tail_epsilon`; fails with [`Error::TruncationFailure`] if
/// that needs more than `k_max` blocks.
pub fn coherent_state(p: &CoherentParams, trunc: &TruncationPolicy) -> Result<FockVector> {
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    let k_cut = trunc.cutoff(p.mean_particles())?;
    let coeffs = product_coefficients(p.w, p.z, k_cut);
    let blocks: Vec<KVector> = match p.convention {
        Convention::A23 => coeffs.into_iter().map(KVector::from_amps_unchecked).collect(),
        Convention::CD => {
            let mut basis = Eigenbasis::vacuum();
            let mut out = Vec::with_capacity(k_cut + 1);
            for (k, row) in coeffs.into_iter().enumerate() {
                if k > 0 {
                    basis = basis.next();
                }
                let c = EigenBasisCoeffs::new(row)?;
                out.push(basis.expand(&c)?);
            }
            out
        }
    };
    Ok(FockVector::from_blocks(blocks))
}

/// `⟨w,z| H |w,z⟩ = |w|² − |z|²`, evaluated in the CD convention.
pub fn expected_energy_closed(p: &CoherentParams) -> f64 {
    let p = p.to_cd();
    p.w.norm_sqr() - p.z.norm_sqr()
}

/// `⟨v, H v⟩` by direct application of `H`.
pub fn expected_energy_numeric(v: &FockVector) -> f64 {
    v.inner(&apply_hopping_full(v)).re
}

/// Probabilities of measuring each integer energy.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EnergyDistribution {
    entries: BTreeMap<i64, f64>,
}

impl EnergyDistribution {
    pub fn from_entries(entries: BTreeMap<i64, f64>) -> Self {
        EnergyDistribution { entries }
    }

    /// Probability of energy `alpha`; zero when not recorded.
    pub fn probability(&self, alpha: i64) -> f64 {
        self.entries.get(&alpha).copied().unwrap_or(0.0)
    }

    /// `(α, P(α))` in ascending `α`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.entries.iter().map(|(&a, &p)| (a, p))
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `|P(α) − Q(α)|` over the union of recorded energies.
    pub fn max_abs_diff(&self, other: &EnergyDistribution) -> f64 {
        self.entries
            .keys()
            .chain(other.entries.keys())
            .map(|&a| (self.probability(a) - other.probability(a)).abs())
            .fold(0.0, f64::max)
    }
}

// e^{−S} a^{2α} Σ_n q^n / (n!(n+α)!) with a = |w| or |z| and q = |wz|².
fn energy_series(amp_sqr: f64, pair_sqr: f64, total: f64, alpha: u64, series_epsilon: f64) -> f64 {
    let mut log_first = -total;
    if alpha > 0 {
        if amp_sqr == 0.0 {
            return 0.0;
        }
        log_first += alpha as f64 * amp_sqr.ln();
        log_first -= (1..=alpha).map(|j| (j as f64).ln()).sum::<f64>();
    }
    let mut term = log_first.exp();
    let mut sum = term;
    let mut n = 0u64;
    while sum > 0.0 {
        let next = term * pair_sqr / (((n + 1) * (n + 1 + alpha)) as f64);
        if next < series_epsilon * sum {
            break;
        }
        sum += next;
        term = next;
        n += 1;
    }
    sum
}

/// Closed-form `P(E = α)` for `α ∈ [alpha_min, alpha_max]`.
///
/// For `α ≥ 0`: `e^{−|w|²−|z|²} |w|^{2α} Σ_n |wz|^{2n}/(n!(n+α)!)`; for
/// `α < 0` the roles of `w` and `z` swap, with exponent `2|α|`. Each series
/// stops once the next term falls below `series_epsilon` times the partial
/// sum. `(w, z)` are read in the CD convention (converted if needed).
pub fn energy_distribution_closed(
    p: &CoherentParams,
    alpha_min: i64,
    alpha_max: i64,
    series_epsilon: f64,
) -> Result<EnergyDistribution> {
    if alpha_min > alpha_max {
        return Err(Error::InvalidArgument(format!(
            "alpha_min ({alpha_min}) exceeds alpha_max ({alpha_max})"
        )));
    }
    if series_epsilon.is_nan() || series_epsilon <= 0.0 {
        return Err(Error::InvalidArgument("series_epsilon must be positive".into()));
    }
    let p = p.to_cd();
    let (w2, z2) = (p.w.norm_sqr(), p.z.norm_sqr());
    let total = w2 + z2;
    let pair = w2 * z2;
    let entries = (alpha_min..=alpha_max)
        .map(|alpha| {
            let amp = if alpha >= 0 { w2 } else { z2 };
            (alpha, energy_series(amp, pair, total, alpha.unsigned_abs(), series_epsilon))
        })
        .collect();
    Ok(EnergyDistribution { entries })
}

/// `P(α) = Σ_{2m−k=α} |⟨e_{k,m}, v⟩|²`, grouping eigenbasis weights of `v`.
pub fn energy_distribution_numeric(v: &FockVector) -> EnergyDistribution {
    let mut entries = BTreeMap::new();
    let Some(k_top) = v.max_k() else {
        return EnergyDistribution { entries };
    };
    let ladder = Eigenbasis::ladder(k_top);
    for block in v.blocks() {
        let coeffs = ladder[block.k()].project(block).expect("ladder covers every block");
        let k = block.k() as i64;
        for (m, c) in coeffs.coeffs().iter().enumerate() {
            *entries.entry(2 * m as i64 - k).or_insert(0.0) += c.norm_sqr();
        }
    }
    EnergyDistribution { entries }
}
