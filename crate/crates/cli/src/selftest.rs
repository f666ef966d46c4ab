//! Built-in invariant suite behind `bhdimer selftest`.
//!
//! Every check compares two independent routes to the same quantity and
//! records the worst deviation seen. `perturbation` is added to the
//! closed-form side of the spectral and energy-distribution checks; a
//! nonzero value must make the suite fail.

use std::f64::consts::FRAC_PI_4;

use dimer::coherent::{
    coherent_state, energy_distribution_closed, energy_distribution_numeric, expected_energy_closed,
    expected_energy_numeric, CoherentParams, TruncationPolicy,
};
use dimer::dynamics::{cat_check, EigenExpansion};
use dimer::eigensystem::{
    apply_ck, apply_dk, eigenvalue, eigenvector_normalized, eigenvector_raw, immersion_matrix,
    to_eigenbasis_cascade_counted, to_eigenbasis_direct, Eigenbasis,
};
use dimer::fock::{apply_annihilate, apply_c, apply_create, apply_d};
use dimer::hamiltonian::{
    apply_hopping, apply_hopping_squared_normal_ordered, apply_hopping_via_cd, apply_number_squared_normal_ordered,
    apply_total_number, build_hopping_matrix,
};
use dimer::oracle::{dense_evolve, dense_symmetric_eig};
use dimer::{Complex64, DenseMatrix, FockVector, KVector, Site};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

/// Pinned `c` in the cascade cost bound `ops ≤ c·(k+1)³`.
pub const CASCADE_OPS_CONSTANT: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfTestConfig {
    /// Largest block size exercised.
    pub max_k: usize,
    /// Random vectors per block for the randomized checks.
    pub samples: usize,
    pub seed: u64,
    pub perturbation: f64,
    /// Use a 3×3 instead of a 5×5 grid of coherent amplitudes.
    pub small_grid: bool,
}

impl SelfTestConfig {
    pub fn full() -> Self {
        SelfTestConfig {
            max_k: 20,
            samples: 10,
            seed: 0x5eed,
            perturbation: 0.0,
            small_grid: false,
        }
    }

    pub fn quick() -> Self {
        SelfTestConfig {
            max_k: 8,
            samples: 3,
            small_grid: true,
            ..Self::full()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        // NaN never passes.
        self.worst <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfTestReport {
    pub checks: Vec<CheckResult>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// Fixed-width table, one line per check.
    pub fn table(&self) -> String {
        let mut out = format!("{:<34} {:>12} {:>12}  result\n", "check", "worst", "tolerance");
        for c in &self.checks {
            out.push_str(&format!(
                "{:<34} {:>12.3e} {:>12.1e}  {}\n",
                c.name,
                c.worst,
                c.tolerance,
                if c.passed() { "pass" } else { "FAIL" }
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

struct Suite {
    cfg: SelfTestConfig,
    rng: ChaCha8Rng,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn record(&mut self, name: &'static str, tolerance: f64, worst: f64) {
        self.checks.push(CheckResult { name, worst, tolerance });
    }

    fn random_block(&mut self, k: usize) -> KVector {
        let amps = (0..=k)
            .map(|_| Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)))
            .collect();
        let v = KVector::from_amps(amps).expect("finite, non-empty");
        let n = v.norm();
        v.scale_real(1.0 / n)
    }

    fn random_blocks(&mut self) -> Vec<KVector> {
        let mut out = Vec::new();
        for k in 0..=self.cfg.max_k {
            for _ in 0..self.cfg.samples {
                out.push(self.random_block(k));
            }
        }
        out
    }

    fn grid(&self) -> Vec<CoherentParams> {
        let points: &[Complex64] = if self.cfg.small_grid {
            &[c(0.0, 0.0), c(1.0, 0.5), c(-1.2, 1.6)]
        } else {
            &[c(0.0, 0.0), c(1.0, 0.0), c(-0.7, 0.7), c(0.0, 2.0), c(1.2, -1.6)]
        };
        let mut out = Vec::new();
        for &w in points {
            for &z in points {
                out.push(CoherentParams::cd(w, z));
            }
        }
        out
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn run_selftest(cfg: SelfTestConfig) -> Result<SelfTestReport, CliError> {
    let mut suite = Suite {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        checks: Vec::new(),
    };
    spectral_checks(&mut suite)?;
    operator_checks(&mut suite);
    transform_checks(&mut suite)?;
    coherent_checks(&mut suite)?;
    dynamics_checks(&mut suite)?;
    Ok(SelfTestReport { checks: suite.checks })
}

fn spectral_checks(s: &mut Suite) -> Result<(), CliError> {
    let eps = s.cfg.perturbation;
    let (mut spectrum, mut residual, mut raw_norm, mut ortho, mut immersion) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut factorial = vec![1.0f64];
    for k in 0..=s.cfg.max_k {
        factorial.push(factorial[k] * (k + 1) as f64);
        let oracle = dense_symmetric_eig(&build_hopping_matrix(k).to_dense()?)?;
        for m in 0..=k {
            let lambda = eigenvalue(k, m)? as f64 + eps;
            spectrum = spectrum.max((oracle.eigenvalues[m] - lambda).abs());

            let v = eigenvector_normalized(k, m)?;
            residual = residual.max(apply_hopping(&v).distance(&v.scale_real(lambda)));

            let expected = factorial[m] * factorial[k - m];
            raw_norm = raw_norm.max(rel((eigenvector_raw(k, m)?.norm_sqr() - expected).abs(), expected));
        }
        let basis = Eigenbasis::new(k).to_matrix();
        ortho = ortho.max(basis.transpose().matmul(&basis).max_abs_diff(&DenseMatrix::identity(k + 1)));
        if k > 0 {
            let m = immersion_matrix(k)?;
            immersion = immersion.max(m.transpose().matmul(&m).max_abs_diff(&DenseMatrix::identity(k + 1)));
        }
    }
    s.record("spectrum matches oracle", 1e-10, spectrum);
    s.record("eigenvector residual", 1e-10, residual);
    s.record("raw eigenvector norm law", 1e-10, raw_norm);
    s.record("eigenbasis orthonormal", 1e-10, ortho);
    s.record("unitary immersion", 1e-12, immersion);
    Ok(())
}

fn operator_checks(s: &mut Suite) {
    let (mut canonical, mut hopping, mut h2, mut n2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for v in s.random_blocks() {
        // [â_i, â_j†] v = δ_ij v
        for i in Site::ALL {
            for j in Site::ALL {
                let forward = apply_annihilate(i, &apply_create(j, &v)).expect("block k+1 ≥ 1");
                let backward = apply_annihilate(i, &v).map(|w| apply_create(j, &w)).unwrap_or_else(|| KVector::zeros(v.k()));
                let expected = if i == j { v.clone() } else { KVector::zeros(v.k()) };
                canonical = canonical.max((&(&forward - &backward) - &expected).norm());
            }
        }

        let direct = apply_hopping(&v);
        let tridiagonal = build_hopping_matrix(v.k()).apply(&v).expect("matching block");
        hopping = hopping
            .max(direct.distance(&apply_hopping_via_cd(&v)))
            .max(direct.distance(&tridiagonal));

        let twice = apply_hopping(&direct);
        h2 = h2.max(rel(twice.distance(&apply_hopping_squared_normal_ordered(&v)), twice.norm().max(1.0)));

        let n = apply_total_number(&apply_total_number(&v));
        n2 = n2.max(rel(n.distance(&apply_number_squared_normal_ordered(&v)), n.norm().max(1.0)));
    }
    s.record("canonical commutators", 1e-12, canonical);
    s.record("hopping routes agree", 1e-12, hopping);
    s.record("normal-ordered H squared", 1e-12, h2);
    s.record("normal-ordered N squared", 1e-12, n2);
}

fn transform_checks(s: &mut Suite) -> Result<(), CliError> {
    let (mut split, mut cascade, mut ops_ratio) = (0.0f64, 0.0f64, 0.0f64);
    for v in s.random_blocks() {
        if v.k() > 0 {
            let total = apply_ck(&v)?.norm_sqr() + apply_dk(&v)?.norm_sqr();
            split = split.max((total - v.norm_sqr()).abs());
        }
        let (coeffs, ops) = to_eigenbasis_cascade_counted(&v);
        cascade = cascade.max(coeffs.max_abs_diff(&to_eigenbasis_direct(&v)));
        ops_ratio = ops_ratio.max(ops.0 as f64 / ((v.k() + 1) as f64).powi(3));
    }
    s.record("lowering maps split the norm", 1e-12, split);
    s.record("cascade matches direct", 1e-10, cascade);
    s.record("cascade ops per (k+1)^3", CASCADE_OPS_CONSTANT, ops_ratio);
    Ok(())
}

fn coherent_checks(s: &mut Suite) -> Result<(), CliError> {
    let trunc = TruncationPolicy::default();
    let eps = s.cfg.perturbation;
    let (mut norm, mut energy, mut eigen, mut convention, mut dist, mut total) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in s.grid() {
        let v = coherent_state(&p, &trunc)?;
        norm = norm.max((v.norm() - 1.0).abs());
        energy = energy.max((expected_energy_numeric(&v) - expected_energy_closed(&p)).abs());
        eigen = eigen
            .max(v.map_blocks(apply_c).distance(&v.scale(p.w)))
            .max(v.map_blocks(apply_d).distance(&v.scale(p.z)));
        convention = convention.max(v.max_abs_diff(&coherent_state(&p.converted(), &trunc)?));

        let numeric = energy_distribution_numeric(&v);
        let k_top = v.max_k().unwrap_or(0) as i64;
        let closed = energy_distribution_closed(&p, -k_top, k_top, 1e-17)?;
        for (alpha, pn) in numeric.iter() {
            dist = dist.max((closed.probability(alpha) + eps - pn).abs());
        }
        total = total.max((closed.total() - 1.0).abs()).max((numeric.total() - 1.0).abs());
    }
    s.record("coherent state normalized", 1e-12, norm);
    s.record("coherent expected energy", 1e-8, energy);
    s.record("annihilator eigen-relations", 1e-5, eigen);
    s.record("convention equivalence", 1e-10, convention);
    s.record("energy distribution routes", 1e-8, dist);
    s.record("energy distribution total", 1e-8, total);
    Ok(())
}

fn dynamics_checks(s: &mut Suite) -> Result<(), CliError> {
    let trunc = TruncationPolicy::default();
    let times = [0.0, 0.3, FRAC_PI_4, 1.1];
    let (mut entry, mut fid) = (0.0f64, 0.0f64);
    for p in s.grid() {
        for r in cat_check(&p, &times, &trunc)? {
            entry = entry.max(r.max_entry_error);
            for f in [r.fidelity_cat, r.fidelity_period, r.fidelity_signflip] {
                fid = fid.max((1.0 - f).abs());
            }
        }
    }
    s.record("cat, period, sign-flip entrywise", 1e-8, entry);
    s.record("cat, period, sign-flip fidelity", 1e-10, fid);

    let mut oracle = 0.0f64;
    let top = s.cfg.max_k.min(12);
    for k in 0..=top {
        let dense = build_hopping_matrix(k).to_dense()?;
        for _ in 0..s.cfg.samples {
            let v = s.random_block(k);
            for &t in &times {
                let closed = EigenExpansion::from_fock(&FockVector::from(v.clone())).evolve_h2(t).to_fock();
                let brute = KVector::from_amps(dense_evolve(&dense, v.amps(), t, true)?)?;
                oracle = oracle.max(closed.max_abs_diff(&FockVector::from(brute)));
            }
        }
    }
    s.record("H squared evolution vs oracle", 1e-8, oracle);
    Ok(())
}
