use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimer::{CoherentParams, Complex64};
use dimer_cli::commands::{self, Generator, Report, DEFAULT_TIMES};
use dimer_cli::complex::parse_complex;
use dimer_cli::config::Settings;
use dimer_cli::selftest::{run_selftest, SelfTestConfig, SelfTestReport};
use dimer_cli::{CliError, Format, OutputRecord, Value};

/// Exact spectra, coherent states and cat-state dynamics of the two-site
/// Bose-Hubbard hopping Hamiltonian.
#[derive(Parser, Debug)]
#[command(name = "bhdimer", version)]
struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Probability mass a truncated coherent state may drop.
    #[arg(long, global = true)]
    tail_epsilon: Option<f64>,
    /// Largest particle-number block a truncated state may keep.
    #[arg(long, global = true)]
    k_max: Option<usize>,
    /// JSON file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form eigenvalues of block k next to the dense oracle.
    Spectrum {
        #[arg(long)]
        k: usize,
    },
    /// Normalized eigenvector (k, m) in the |2^α 3^(k−α)⟩ basis.
    Eigvec {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// Amplitudes of a truncated coherent state.
    Coherent(State),
    /// Energy-measurement distribution, closed form against numeric.
    EnergyDist {
        #[command(flatten)]
        state: State,
        #[arg(long, allow_hyphen_values = true)]
        alpha_min: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha_max: Option<i64>,
        /// Relative cutoff of the closed-form series.
        #[arg(long)]
        series_epsilon: Option<f64>,
    },
    /// Norm, energy and initial-state fidelity along a trajectory.
    Evolve {
        #[command(flatten)]
        state: State,
        /// Single time.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "times")]
        t: Option<f64>,
        /// Comma-separated times.
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
        #[arg(long, value_enum, default_value = "h2")]
        generator: Generator,
    },
    /// Quarter-period cat, period and sign-flip identities of e^{iH²t}.
    CatCheck {
        #[command(flatten)]
        state: State,
        /// Comma-separated times (default 0, π/4, π/2, π, 2π).
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
    },
    /// Run the built-in invariant suite.
    Selftest {
        /// Blocks up to k = 8 only.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
}

#[derive(Args, Debug)]
struct State {
    /// First amplitude, e.g. 1-0.5i.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    w: Complex64,
    /// Second amplitude.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex64,
    /// Whether (w, z) label the ĉ, d̂ modes or the two sites.
    #[arg(long, value_enum, default_value = "cd")]
    convention: ConventionArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Cd,
    A23,
}

impl State {
    fn params(&self) -> CoherentParams {
        match self.convention {
            ConventionArg::Cd => CoherentParams::cd(self.w, self.z),
            ConventionArg::A23 => CoherentParams::a23(self.w, self.z),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bhdimer: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let mut s = match &cli.config {
        Some(path) => Settings::load(path).map_err(CliError::Usage)?,
        None => Settings::default(),
    };
    if let Some(eps) = cli.tail_epsilon {
        s.tail_epsilon = eps;
    }
    if let Some(k) = cli.k_max {
        s.k_max = k;
    }
    Ok(s)
}

fn times_or_default(times: &Option<String>) -> Result<Vec<f64>, CliError> {
    match times {
        Some(s) => commands::parse_times(s),
        None => Ok(DEFAULT_TIMES.to_vec()),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut settings = settings(&cli)?;
    let trunc = settings.truncation().map_err(CliError::Usage)?;

    let report = match &cli.command {
        Command::Spectrum { k } => commands::cmd_spectrum(*k)?,
        Command::Eigvec { k, m } => commands::cmd_eigvec(*k, *m)?,
        Command::Coherent(state) => commands::cmd_coherent(&state.params(), &trunc)?,
        Command::EnergyDist {
            state,
            alpha_min,
            alpha_max,
            series_epsilon,
        } => {
            if let Some(eps) = series_epsilon {
                settings.series_epsilon = *eps;
            }
            commands::cmd_energy_dist(&state.params(), *alpha_min, *alpha_max, settings.series_epsilon, &trunc)?
        }
        Command::Evolve {
            state,
            t,
            times,
            generator,
        } => {
            let times = match t {
                Some(t) => vec![*t],
                None => times_or_default(times)?,
            };
            commands::cmd_evolve(&state.params(), &times, *generator, &trunc)?
        }
        Command::CatCheck { state, times } => {
            commands::cmd_cat_check(&state.params(), &times_or_default(times)?, &trunc)?
        }
        Command::Selftest { quick, seed, perturb } => {
            let base = if *quick {
                SelfTestConfig::quick()
            } else {
                SelfTestConfig::full()
            };
            let cfg = SelfTestConfig {
                seed: *seed,
                perturbation: *perturb,
                ..base
            };
            let report = run_selftest(cfg)?;
            let text = match cli.format {
                Some(format) => selftest_record(&report).render(format),
                None => report.table(),
            };
            emit(&cli.output, &text)?;
            return Ok(if report.passed() { 0 } else { 2 });
        }
    };
    finish(&cli, report)
}

fn finish(cli: &Cli, report: Report) -> Result<u8, CliError> {
    let text = report.record.render(cli.format.unwrap_or(Format::Csv));
    emit(&cli.output, &text)?;
    for failure in &report.failures {
        eprintln!("bhdimer: {failure}");
    }
    Ok(if report.failures.is_empty() { 0 } else { 2 })
}

fn selftest_record(report: &SelfTestReport) -> OutputRecord {
    let mut record = OutputRecord::new("selftest", &["check", "worst", "tolerance", "passed"]);
    for c in &report.checks {
        record.push(vec![
            Value::from(c.name),
            c.worst.into(),
            c.tolerance.into(),
            Value::from(if c.passed() { "true" } else { "false" }),
        ]);
    }
    record
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
