//! One function per subcommand. Each returns a table plus the list of
//! tolerance checks that did not hold; the table is still worth emitting
//! when some check fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use dimer::coherent::{
    coherent_state, energy_distribution_closed, energy_distribution_numeric, expected_energy_numeric,
    CoherentParams, TruncationPolicy,
};
use dimer::dynamics::{cat_check, evolve_h, evolve_h2, fidelity};
use dimer::eigensystem::{eigenvalue, eigenvector_normalized};
use dimer::hamiltonian::build_hopping_matrix;
use dimer::oracle::dense_symmetric_eig;

use crate::error::CliError;
use crate::record::OutputRecord;

/// Largest residual `spectrum` accepts between closed form and oracle.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;
/// Largest per-α gap `energy-dist` accepts between the two routes.
pub const ENERGY_TOLERANCE: f64 = 1e-8;
/// Largest `|1 − fidelity|` `cat-check` accepts.
pub const CAT_TOLERANCE: f64 = 1e-8;

/// Times used by `evolve` and `cat-check` when none are given.
pub const DEFAULT_TIMES: [f64; 5] = [0.0, FRAC_PI_4, FRAC_PI_2, PI, TAU];

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub record: OutputRecord,
    pub failures: Vec<String>,
}

impl Report {
    fn ok(record: OutputRecord) -> Self {
        Report {
            record,
            failures: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Generator {
    /// `e^{iHt}`
    H,
    /// `e^{iH²t}`
    H2,
}

/// Closed-form spectrum of block `k` next to the Jacobi oracle's.
pub fn cmd_spectrum(k: usize) -> Result<Report, CliError> {
    let dense = build_hopping_matrix(k).to_dense()?;
    let oracle = dense_symmetric_eig(&dense)?;
    let mut record = OutputRecord::new("spectrum", &["m", "eigenvalue", "oracle_eigenvalue", "residual"]);
    let mut worst: f64 = 0.0;
    for m in 0..=k {
        let lambda = eigenvalue(k, m)? as f64;
        let found = oracle.eigenvalues[m];
        let residual = (found - lambda).abs();
        worst = worst.max(residual);
        record.push(vec![m.into(), lambda.into(), found.into(), residual.into()]);
    }
    let mut report = Report::ok(record);
    if worst.is_nan() || worst >= SPECTRUM_TOLERANCE {
        report
            .failures
            .push(format!("spectrum residual {worst:e} exceeds {SPECTRUM_TOLERANCE:e}"));
    }
    Ok(report)
}

/// Amplitudes of the normalized eigenvector `(k, m)`, α ascending.
pub fn cmd_eigvec(k: usize, m: usize) -> Result<Report, CliError> {
    let v = eigenvector_normalized(k, m)?;
    let lambda = eigenvalue(k, m)?;
    let raw_norm_sq = factorial(m) * factorial(k - m);
    let mut record = OutputRecord::new("eigvec", &["alpha", "re_amp", "im_amp", "eigenvalue", "raw_norm_sq"]);
    for (alpha, a) in v.amps().iter().enumerate() {
        record.push(vec![alpha.into(), a.re.into(), a.im.into(), lambda.into(), raw_norm_sq.into()]);
    }
    Ok(Report::ok(record))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Truncated coherent state, block by block.
pub fn cmd_coherent(p: &CoherentParams, trunc: &TruncationPolicy) -> Result<Report, CliError> {
    let v = coherent_state(p, trunc)?;
    let mut record = OutputRecord::new("coherent", &["k", "alpha", "re_amp", "im_amp"]);
    for block in v.blocks() {
        for (alpha, a) in block.amps().iter().enumerate() {
            record.push(vec![block.k().into(), alpha.into(), a.re.into(), a.im.into()]);
        }
    }
    Ok(Report::ok(record))
}

/// Energy distribution by the closed-form series and by grouping eigenbasis
/// weights of the truncated state. Without an explicit range, α runs over
/// the blocks the truncated state keeps.
pub fn cmd_energy_dist(
    p: &CoherentParams,
    alpha_min: Option<i64>,
    alpha_max: Option<i64>,
    series_epsilon: f64,
    trunc: &TruncationPolicy,
) -> Result<Report, CliError> {
    let v = coherent_state(p, trunc)?;
    let k_top = v.max_k().unwrap_or(0) as i64;
    let lo = alpha_min.unwrap_or(-k_top);
    let hi = alpha_max.unwrap_or(k_top);
    let closed = energy_distribution_closed(p, lo, hi, series_epsilon)?;
    let numeric = energy_distribution_numeric(&v);

    let mut record = OutputRecord::new("energy_dist", &["alpha", "p_closed", "p_numeric", "abs_diff"]);
    let (mut total_closed, mut total_numeric, mut worst) = (0.0, 0.0, 0.0f64);
    for alpha in lo..=hi {
        let pc = closed.probability(alpha);
        let pn = numeric.probability(alpha);
        let diff = (pc - pn).abs();
        total_closed += pc;
        total_numeric += pn;
        worst = worst.max(diff);
        record.push(vec![alpha.into(), pc.into(), pn.into(), diff.into()]);
    }
    record.push(vec![
        "total".into(),
        total_closed.into(),
        total_numeric.into(),
        (total_closed - total_numeric).abs().into(),
    ]);

    let mut report = Report::ok(record);
    if worst.is_nan() || worst > ENERGY_TOLERANCE {
        report
            .failures
            .push(format!("closed and numeric distributions differ by {worst:e}"));
    }
    Ok(report)
}

/// Norm, energy and overlap with the initial state along a trajectory.
pub fn cmd_evolve(
    p: &CoherentParams,
    times: &[f64],
    generator: Generator,
    trunc: &TruncationPolicy,
) -> Result<Report, CliError> {
    let v0 = coherent_state(p, trunc)?;
    let mut record = OutputRecord::new("evolve", &["t", "norm_sq", "expected_energy", "fidelity_initial"]);
    for &t in times {
        let vt = match generator {
            Generator::H => evolve_h(&v0, t),
            Generator::H2 => evolve_h2(&v0, t),
        };
        record.push(vec![
            t.into(),
            vt.norm_sqr().into(),
            expected_energy_numeric(&vt).into(),
            fidelity(&v0, &vt)?.into(),
        ]);
    }
    Ok(Report::ok(record))
}

/// Cat-state, period and sign-flip fidelities at each time.
pub fn cmd_cat_check(p: &CoherentParams, times: &[f64], trunc: &TruncationPolicy) -> Result<Report, CliError> {
    let reports = cat_check(p, times, trunc)?;
    let mut record = OutputRecord::new(
        "cat_check",
        &["t", "fidelity_cat", "fidelity_period", "fidelity_signflip", "tail_mass"],
    );
    let mut worst: f64 = 0.0;
    for r in &reports {
        for f in [r.fidelity_cat, r.fidelity_period, r.fidelity_signflip] {
            worst = worst.max((1.0 - f).abs());
        }
        record.push(vec![
            r.time.into(),
            r.fidelity_cat.into(),
            r.fidelity_period.into(),
            r.fidelity_signflip.into(),
            r.tail_mass.into(),
        ]);
    }
    let mut report = Report::ok(record);
    if worst.is_nan() || worst > CAT_TOLERANCE {
        report.failures.push(format!("fidelity off by {worst:e}"));
    }
    Ok(report)
}

/// Parses `0,0.5,1.25`. Empty items are rejected.
pub fn parse_times(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|item| {
            item.parse::<f64>()
                .ok()
                .filter(|t| t.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bad time {item:?} in {s:?}")))
        })
        .collect()
}
