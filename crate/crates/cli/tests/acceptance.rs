//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use dimer::coherent::{
    coherent_state, energy_distribution_closed, energy_distribution_numeric, expected_energy_closed,
    expected_energy_numeric, CoherentParams, TruncationPolicy,
};
use dimer::dynamics::{evolve_h2, predicted_cat};
use dimer::eigensystem::{
    eigenvalue, eigenvector_normalized, eigenvector_raw, immersion_matrix, to_eigenbasis_cascade_counted,
    to_eigenbasis_direct,
};
use dimer::fock::{apply_c, apply_d};
use dimer::hamiltonian::{
    apply_hopping, apply_hopping_squared_normal_ordered, apply_number_squared_normal_ordered, apply_total_number,
    build_hopping_matrix,
};
use dimer::oracle::{dense_evolve, dense_symmetric_eig};
use dimer::{Complex64, DenseMatrix, KVector};
use dimer_cli::selftest::CASCADE_OPS_CONSTANT;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_block(rng: &mut ChaCha8Rng, k: usize) -> KVector {
    let amps = (0..=k)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let v = KVector::from_amps(amps).unwrap();
    let n = v.norm();
    v.scale_real(1.0 / n)
}

/// Amplitudes with modulus at most 2, including the boundary.
fn grid() -> Vec<CoherentParams> {
    let points = [
        c(0.0, 0.0),
        c(0.5, 0.0),
        c(-1.0, 0.0),
        c(0.0, 1.0),
        c(1.0, 1.0),
        c(-0.3, -0.4),
        c(1.2, -1.6),
        c(-2.0, 0.0),
    ];
    let mut out = Vec::new();
    for &w in &points {
        for &z in &points {
            out.push(CoherentParams::cd(w, z));
        }
    }
    out
}

fn spectrum_integrality() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..=30 {
        let eig = dense_symmetric_eig(&build_hopping_matrix(k).to_dense().unwrap()).unwrap();
        for (m, found) in eig.eigenvalues.iter().enumerate() {
            worst = worst.max((found - (2.0 * m as f64 - k as f64)).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(10),
        format!(
            "k <= 30, worst |oracle - (2m-k)| = {worst:.2e} (tol 1e-10), {:.2} s (limit 10 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn closed_form_eigenvectors() -> Outcome {
    let mut residual: f64 = 0.0;
    for k in 0..=30 {
        for m in 0..=k {
            let v = eigenvector_normalized(k, m).unwrap();
            let lambda = eigenvalue(k, m).unwrap() as f64;
            residual = residual.max(apply_hopping(&v).distance(&v.scale_real(lambda)));
        }
    }
    let mut norm_law: f64 = 0.0;
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    for k in 0..=20 {
        for m in 0..=k {
            let expected = fact(m) * fact(k - m);
            norm_law = norm_law.max((eigenvector_raw(k, m).unwrap().norm_sqr() - expected).abs() / expected);
        }
    }
    outcome(
        residual < 1e-10 && norm_law < 1e-10,
        format!(
            "max ||Hv - (2m-k)v|| = {residual:.2e} (k <= 30), max rel. norm-law error = {norm_law:.2e} (k <= 20), tol 1e-10"
        ),
    )
}

fn unitary_immersion() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=50 {
        let m = immersion_matrix(k).unwrap();
        worst = worst.max(m.transpose().matmul(&m).max_abs_diff(&DenseMatrix::identity(k + 1)));
    }
    outcome(worst <= 1e-12, format!("k <= 50, max |M^T M - I| = {worst:.2e} (tol 1e-12)"))
}

fn cascade_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst, mut ratio): (f64, f64) = (0.0, 0.0);
    for k in 0..=20 {
        for _ in 0..100 {
            let v = random_block(&mut rng, k);
            let (coeffs, ops) = to_eigenbasis_cascade_counted(&v);
            worst = worst.max(coeffs.max_abs_diff(&to_eigenbasis_direct(&v)));
            ratio = ratio.max(ops.0 as f64 / ((k + 1) as f64).powi(3));
        }
    }
    outcome(
        worst <= 1e-10 && ratio <= CASCADE_OPS_CONSTANT,
        format!(
            "k <= 20 x 100 vectors, max |cascade - direct| = {worst:.2e} (tol 1e-10), \
             max ops/(k+1)^3 = {ratio:.3} (c = {CASCADE_OPS_CONSTANT})"
        ),
    )
}

fn coherent_contract() -> Outcome {
    let trunc = TruncationPolicy::default();
    let (mut norm, mut energy, mut eigen, mut equiv): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for p in grid() {
        let v = coherent_state(&p, &trunc).unwrap();
        norm = norm.max((v.norm() - 1.0).abs());
        energy = energy.max((expected_energy_numeric(&v) - expected_energy_closed(&p)).abs());
        eigen = eigen
            .max(v.map_blocks(apply_c).distance(&v.scale(p.w)))
            .max(v.map_blocks(apply_d).distance(&v.scale(p.z)));
        equiv = equiv.max(v.max_abs_diff(&coherent_state(&p.converted(), &trunc).unwrap()));
    }
    outcome(
        norm <= 1e-12 && energy <= 1e-8 && eigen < 1e-5 && equiv <= 1e-10,
        format!(
            "{} points: norm {norm:.2e} (1e-12), <H> {energy:.2e} (1e-8), \
             eigen-relations {eigen:.2e} (1e-5), conventions {equiv:.2e} (1e-10)",
            grid().len()
        ),
    )
}

fn energy_distribution() -> Outcome {
    let trunc = TruncationPolicy::default();
    let (mut per_alpha, mut total): (f64, f64) = (0.0, 0.0);
    for p in grid() {
        let v = coherent_state(&p, &trunc).unwrap();
        let numeric = energy_distribution_numeric(&v);
        let k_top = v.max_k().unwrap() as i64;
        let closed = energy_distribution_closed(&p, -k_top - 5, k_top + 5, 1e-17).unwrap();
        for (alpha, pc) in closed.iter() {
            per_alpha = per_alpha.max((pc - numeric.probability(alpha)).abs());
        }
        total = total.max((closed.total() - 1.0).abs()).max((numeric.total() - 1.0).abs());
    }
    outcome(
        per_alpha <= 1e-8 && total <= 1e-8,
        format!("max |closed - numeric| = {per_alpha:.2e}, max |total - 1| = {total:.2e} (tol 1e-8)"),
    )
}

fn cat_identities() -> Outcome {
    let start = Instant::now();
    let trunc = TruncationPolicy::default();
    let times = [0.0, 0.3, FRAC_PI_4, 1.1];
    let (mut cat, mut period, mut flip, mut oracle): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for p in grid() {
        let v = coherent_state(&p, &trunc).unwrap();
        let flipped = coherent_state(&p.negated(), &trunc).unwrap();
        for &t in &times {
            let at_t = evolve_h2(&v, t);
            cat = cat.max(evolve_h2(&v, t + FRAC_PI_2).max_abs_diff(&predicted_cat(&p, t, &trunc).unwrap()));
            period = period.max(evolve_h2(&v, t + TAU).max_abs_diff(&at_t));
            flip = flip.max(evolve_h2(&v, t + PI).max_abs_diff(&evolve_h2(&flipped, t)));
            for block in v.blocks().filter(|b| b.k() <= 12) {
                let dense = build_hopping_matrix(block.k()).to_dense().unwrap();
                let brute = dense_evolve(&dense, block.amps(), t, true).unwrap();
                let closed = at_t.block(block.k()).unwrap();
                let gap = brute
                    .iter()
                    .zip(closed.amps())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                oracle = oracle.max(gap);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        cat <= 1e-8 && period <= 1e-10 && flip <= 1e-10 && oracle <= 1e-8 && elapsed < Duration::from_secs(60),
        format!(
            "cat {cat:.2e} (1e-8), period {period:.2e} (1e-10), sign flip {flip:.2e} (1e-10), \
             oracle k <= 12 {oracle:.2e} (1e-8), {:.2} s (limit 60 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn operator_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut h2, mut n2, mut minus_form): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for k in 0..=12 {
        for _ in 0..20 {
            let v = random_block(&mut rng, k);
            let twice = apply_hopping(&apply_hopping(&v));
            let plus_two = apply_hopping_squared_normal_ordered(&v);
            h2 = h2.max(twice.distance(&plus_two));
            // The "−2" variant differs from the "+2" form by 4 N̂_2 N̂_3, which
            // vanishes only when one site is empty.
            if k >= 2 {
                let minus_two = &plus_two - &four_n2_n3(&v);
                minus_form = minus_form.min(twice.distance(&minus_two));
            }
            let n = apply_total_number(&apply_total_number(&v));
            n2 = n2.max(n.distance(&apply_number_squared_normal_ordered(&v)));
        }
    }
    outcome(
        h2 <= 1e-12 && n2 <= 1e-12 && minus_form > 1e-3,
        format!(
            "k <= 12: H*H vs +2 form {h2:.2e}, N*N {n2:.2e} (tol 1e-12); -2 form off by at least {minus_form:.2e}"
        ),
    )
}

fn four_n2_n3(v: &KVector) -> KVector {
    let k = v.k();
    let amps = v
        .amps()
        .iter()
        .enumerate()
        .map(|(alpha, a)| a * (4 * alpha * (k - alpha)) as f64)
        .collect();
    KVector::from_amps(amps).unwrap()
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_bhdimer"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn cli_determinism() -> Outcome {
    let invocations: &[&[&str]] = &[
        &["spectrum", "--k", "7"],
        &["eigvec", "--k", "6", "--m", "2"],
        &["coherent", "--w", "0.8-0.3i", "--z", "-0.4+1.1i"],
        &["energy-dist", "--w", "1+0.5i", "--z", "-0.7i"],
        &["evolve", "--w", "1", "--z", "0.5", "--times", "0,0.3,1.1", "--generator", "h2"],
        &["evolve", "--w", "1", "--z", "0.5", "--t", "0.7", "--generator", "h"],
        &["cat-check", "--w", "1.2-1.6i", "--z", "0.5"],
        &["selftest", "--quick"],
    ];
    let mut mismatched = Vec::new();
    for args in invocations {
        for format in ["csv", "json"] {
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--format", format]);
            let (code_a, a) = run_cli(&full);
            let (code_b, b) = run_cli(&full);
            if code_a != Some(0) || code_a != code_b || a != b || a.is_empty() {
                mismatched.push(format!("{} ({format})", args.join(" ")));
            }
        }
    }
    let start = Instant::now();
    let (code, _) = run_cli(&["selftest"]);
    let elapsed = start.elapsed();
    let mismatch_note = if mismatched.is_empty() {
        String::new()
    } else {
        format!(", mismatched: {mismatched:?}")
    };
    outcome(
        mismatched.is_empty() && code == Some(0) && elapsed < Duration::from_secs(120),
        format!(
            "{} invocations x 2 formats byte-identical{mismatch_note}; selftest exit {code:?} in {:.2} s (limit 120 s)",
            invocations.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("spectrum integrality", spectrum_integrality),
        ("closed-form eigenvectors", closed_form_eigenvectors),
        ("unitary immersion", unitary_immersion),
        ("cascade correctness", cascade_correctness),
        ("coherent-state contract", coherent_contract),
        ("energy distribution", energy_distribution),
        ("cat-state identities", cat_identities),
        ("corrected operator identities", operator_identities),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failed += 1;
        }
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict}: {name} ({})", i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
