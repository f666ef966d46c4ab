//! Evolution under `e^{iHt}` and `e^{iH²t}`.
//!
//! Both generators are diagonal in the closed-form eigenbasis, so a state is
//! expanded once per block and each coefficient `(k, m)` picks up the phase
//! `e^{iλt}` or `e^{iλ²t}` with `λ = 2m − k`. Because `λ² ≡ k (mod 2)`,
//! `e^{iH²t}` has period `2π`, flips `|w,z⟩` to `|−w,−z⟩` after `π`, and at a
//! quarter period splits a coherent state into the cat state
//! `(e^{iπ/4}|w,z,t⟩ + e^{−iπ/4}|−w,−z,t⟩)/√2`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::coherent::{coherent_state, CoherentParams, TruncationPolicy};
use crate::eigensystem::{EigenBasisCoeffs, Eigenbasis};
use crate::error::{Error, Result};
use crate::fock::FockVector;

/// A [`FockVector`] expanded block by block over the normalized eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenExpansion {
    blocks: BTreeMap<usize, EigenBasisCoeffs>,
}

impl EigenExpansion {
    pub fn from_fock(v: &FockVector) -> Self {
        let ladder = Eigenbasis::ladder(v.max_k().unwrap_or(0));
        let blocks = v
            .blocks()
            .map(|b| (b.k(), ladder[b.k()].project(b).expect("ladder covers every block")))
            .collect();
        EigenExpansion { blocks }
    }

    pub fn to_fock(&self) -> FockVector {
        let top = self.blocks.keys().next_back().copied().unwrap_or(0);
        let ladder = Eigenbasis::ladder(top);
        FockVector::from_blocks(
            self.blocks
                .iter()
                .map(|(&k, c)| ladder[k].expand(c).expect("ladder covers every block")),
        )
    }

    pub fn block(&self, k: usize) -> Option<&EigenBasisCoeffs> {
        self.blocks.get(&k)
    }

    /// Multiplies every coefficient by `phase(λ)`.
    pub fn map_by_eigenvalue(&self, phase: impl Fn(i64) -> Complex64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|(&k, c)| (k, c.map_by_eigenvalue(&phase)))
            .collect();
        EigenExpansion { blocks }
    }

    /// Evolution by `e^{iH²t}`.
    pub fn evolve_h2(&self, t: f64) -> Self {
        self.map_by_eigenvalue(|lambda| Complex64::from_polar(1.0, (lambda * lambda) as f64 * t))
    }

    /// Evolution by `e^{iHt}`.
    pub fn evolve_h(&self, t: f64) -> Self {
        self.map_by_eigenvalue(|lambda| Complex64::from_polar(1.0, lambda as f64 * t))
    }
}

/// `e^{iH²t} v`; absent blocks stay absent.
pub fn evolve_h2(v: &FockVector, t: f64) -> FockVector {
    EigenExpansion::from_fock(v).evolve_h2(t).to_fock()
}

/// `e^{iHt} v`. Maps `|w,z⟩` to `|e^{it}w, e^{−it}z⟩`.
pub fn evolve_h(v: &FockVector, t: f64) -> FockVector {
    EigenExpansion::from_fock(v).evolve_h(t).to_fock()
}

/// `|⟨u,v⟩| / (‖u‖‖v‖)`, clamped to `[0, 1]`.
pub fn fidelity(u: &FockVector, v: &FockVector) -> Result<f64> {
    let norms = u.norm() * v.norm();
    if norms == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((u.inner(v).norm() / norms).min(1.0))
}

/// `(e^{iπ/4}/√2) e^{iH²t}|w,z⟩ + (e^{−iπ/4}/√2) e^{iH²t}|−w,−z⟩`.
pub fn predicted_cat(p: &CoherentParams, t: f64, trunc: &TruncationPolicy) -> Result<FockVector> {
    let plus = evolve_h2(&coherent_state(p, trunc)?, t);
    let minus = evolve_h2(&coherent_state(&p.negated(), trunc)?, t);
    Ok(cat_superposition(&plus, &minus))
}

fn cat_superposition(plus: &FockVector, minus: &FockVector) -> FockVector {
    let a = Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4);
    let b = Complex64::from_polar(FRAC_1_SQRT_2, -FRAC_PI_4);
    plus.scale(a).add(&minus.scale(b))
}

/// Fidelities of the three `e^{iH²t}` identities at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionReport {
    pub time: f64,
    /// `e^{iH²(t+π/2)}|w,z⟩` against the predicted cat state.
    pub fidelity_cat: f64,
    /// `e^{iH²(t+2π)}|w,z⟩` against `e^{iH²t}|w,z⟩`.
    pub fidelity_period: f64,
    /// `e^{iH²(t+π)}|w,z⟩` against `e^{iH²t}|−w,−z⟩`.
    pub fidelity_signflip: f64,
    /// Probability mass discarded by truncation.
    pub tail_mass: f64,
    /// Largest entrywise deviation among the three identities.
    pub max_entry_error: f64,
}

/// Evaluates the period, sign-flip and quarter-period cat identities of
/// `e^{iH²t}` on `|w,z⟩` for each entry of `times`.
pub fn cat_check(p: &CoherentParams, times: &[f64], trunc: &TruncationPolicy) -> Result<Vec<EvolutionReport>> {
    let cs = coherent_state(p, trunc)?;
    let flipped = coherent_state(&p.negated(), trunc)?;
    let tail_mass = (1.0 - cs.norm_sqr()).max(0.0);
    let expansion = EigenExpansion::from_fock(&cs);
    let flipped_expansion = EigenExpansion::from_fock(&flipped);

    times
        .iter()
        .map(|&t| {
            let at_t = expansion.evolve_h2(t).to_fock();
            let flipped_at_t = flipped_expansion.evolve_h2(t).to_fock();
            let quarter = expansion.evolve_h2(t + FRAC_PI_2).to_fock();
            let half = expansion.evolve_h2(t + PI).to_fock();
            let full = expansion.evolve_h2(t + TAU).to_fock();
            let cat = cat_superposition(&at_t, &flipped_at_t);

            let max_entry_error = [
                quarter.max_abs_diff(&cat),
                full.max_abs_diff(&at_t),
                half.max_abs_diff(&flipped_at_t),
            ]
            .into_iter()
            .fold(0.0, f64::max);

            Ok(EvolutionReport {
                time: t,
                fidelity_cat: fidelity(&quarter, &cat)?,
                fidelity_period: fidelity(&full, &at_t)?,
                fidelity_signflip: fidelity(&half, &flipped_at_t)?,
                tail_mass,
                max_entry_error,
            })
        })
        .collect()
}
