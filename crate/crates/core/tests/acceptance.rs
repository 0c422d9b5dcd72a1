//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{pfq_fixed_point, random_density, random_pure, random_unitary};
use cqed_entangle::closed_form::{
    hypergeometric_parameters, log_grid, normalize, shifted_2f2, w01_avg, w10_avg, Variant, REPAIRS,
};
use cqed_entangle::concurrence::{
    bell_basis, concurrence_mixed_wootters, concurrence_pure, concurrence_pure_determinant,
};
use cqed_entangle::dynamics::{
    decoherence_envelope, gaussian_phase_average, gaussian_phase_decay, simulate_ensemble,
    ProcessParams,
};
use cqed_entangle::model::{
    build_potential, initial_state, transition_graph, FieldState, ModelParams,
};
use cqed_entangle::tensor::kron;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit: Duration) -> (bool, String) {
    (
        elapsed < limit,
        format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

fn bell_anchor() -> Outcome {
    let start = Instant::now();
    let mut worst_pure: f64 = 0.0;
    let mut worst_mixed: f64 = 0.0;
    for b in bell_basis() {
        worst_pure = worst_pure.max((concurrence_pure(&b).unwrap() - 1.0).abs());
        worst_mixed =
            worst_mixed.max((concurrence_mixed_wootters(&b.projector()).unwrap() - 1.0).abs());
    }
    let (fast, t) = within(start.elapsed(), Duration::from_secs(1));
    outcome(
        worst_pure <= 1e-12 && worst_mixed <= 1e-8 && fast,
        format!("max |C-1| pure {worst_pure:.1e} (tol 1e-12), Wootters {worst_mixed:.1e} (tol 1e-8), {t}"),
    )
}

fn pure_consistency() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let psi = random_pure(&mut rng);
        let magic = concurrence_pure(&psi).unwrap();
        let det = concurrence_pure_determinant(&psi);
        let woot = concurrence_mixed_wootters(&psi.projector()).unwrap();
        worst = worst
            .max((magic - det).abs())
            .max((magic - woot).abs())
            .max((det - woot).abs());
    }
    let (fast, t) = within(start.elapsed(), Duration::from_secs(5));
    outcome(
        worst <= 1e-8 && fast,
        format!("1000 states, max pairwise gap {worst:.1e} (tol 1e-8), {t}"),
    )
}

fn local_unitary_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (u1, u2) = (random_unitary(&mut rng), random_unitary(&mut rng));
        let psi = random_pure(&mut rng);
        let moved = psi.apply_local(&u1, &u2);
        worst =
            worst.max((concurrence_pure(&psi).unwrap() - concurrence_pure(&moved).unwrap()).abs());
        let rho = random_density(&mut rng, 3);
        let c0 = concurrence_mixed_wootters(&rho).unwrap();
        let c1 = concurrence_mixed_wootters(&rho.conjugate_local(&u1, &u2)).unwrap();
        worst = worst.max((c0 - c1).abs());
    }
    // kron is exercised through apply_local; also confirm the full operator is unitary
    let u = kron(&random_unitary(&mut rng), &random_unitary(&mut rng));
    let defect =
        (&(&u.dagger() * &u) - &cqed_entangle::tensor::ComplexMatrix::identity(4)).frobenius_norm();
    outcome(
        worst <= 1e-9 && defect < 1e-12,
        format!("500 conjugations of pure and mixed states, max change {worst:.1e} (tol 1e-9)"),
    )
}

fn selection_rules() -> Outcome {
    let params = ModelParams {
        n_max: 12,
        ..ModelParams::default()
    };
    let expected = transition_graph(params.n_max).linear_edges();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    for _ in 0..100 {
        let x: f64 = rng.random_range(-10.0..10.0);
        let v = build_potential(&params, x);
        let mut found = BTreeSet::new();
        for i in 0..v.rows() {
            for j in 0..v.cols() {
                if i != j && v[(i, j)].norm() != 0.0 {
                    found.insert((i, j));
                }
            }
        }
        if found != expected {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!(
            "100 random x, {mismatches} pattern mismatches, {} edges",
            expected.len() / 2
        ),
    )
}

fn unitarity() -> Outcome {
    let model = ModelParams {
        nbar: 4.0,
        n_max: 44,
        g0: 0.1,
        omega: 0.05,
        ..ModelParams::default()
    };
    let process = ProcessParams {
        alpha0: 1.0,
        t_max: 20.0,
        n_traj: 100,
        ..ProcessParams::default()
    };
    let c = Complex64::new(0.5, 0.0);
    let init = initial_state([c; 4], &FieldState::Poisson { nbar: 4.0 }, 44).unwrap();
    let start = Instant::now();
    let avg = simulate_ensemble(&model, &process, &init, None).unwrap();
    let (fast, t) = within(start.elapsed(), Duration::from_secs(30));
    outcome(
        avg.max_norm_drift < 1e-8 && avg.runs == 100 && fast,
        format!(
            "100 trajectories, max norm drift {:.1e} (tol 1e-8), {t}",
            avg.max_norm_drift
        ),
    )
}

fn decoherence_envelope_check() -> Outcome {
    let alpha0: f64 = 1.0;
    let s = 1.0 / alpha0.sqrt();
    let p = ProcessParams {
        alpha0,
        dt: 0.05 * s,
        t_max: 4.0 * s,
        n_traj: 10_000,
        seed: 6,
    };
    let start = Instant::now();
    let mc = gaussian_phase_average(&p).unwrap();
    let (fast, t) = within(start.elapsed(), Duration::from_secs(120));
    let at = |time: f64| ((time / p.dt).round() as usize).min(mc.times.len() - 1);

    let mut worst_z: f64 = 0.0;
    for time in [0.5 * s, 1.0 * s, 2.0 * s] {
        let i = at(time);
        let z =
            (mc.mean[i].norm() - gaussian_phase_decay(mc.times[i], alpha0)).abs() / mc.stderr[i];
        worst_z = worst_z.max(z);
    }
    let mut worst_rel: f64 = 0.0;
    for i in at(2.0 * s)..mc.times.len() {
        let env = decoherence_envelope(mc.times[i], alpha0);
        worst_rel = worst_rel.max((mc.mean[i].norm() - env).abs() / env);
    }
    outcome(
        worst_z <= 3.0 && worst_rel <= 0.05 && fast,
        format!(
            "vs double-integral oracle max {worst_z:.2} SE (tol 3); vs analytic envelope for t >= 2/sqrt(alpha0) max rel {worst_rel:.3} (tol 0.05); {t}"
        ),
    )
}

fn hypergeometric_accuracy() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for nbar in [0.5, 1.0, 5.0, 10.0, 30.0, 50.0] {
        for a in hypergeometric_parameters() {
            let oracle = pfq_fixed_point(&[a, a], &[a + 1, a + 1], nbar, 500);
            let got = shifted_2f2(a, nbar).unwrap();
            worst = worst.max(((got - oracle) / oracle).abs());
            count += 1;
        }
    }
    let (fast, t) = within(start.elapsed(), Duration::from_secs(10));
    outcome(
        worst <= 1e-10 && fast,
        format!("{count} blocks, max rel err {worst:.1e} (tol 1e-10), {t}"),
    )
}

fn closed_form_structure() -> Outcome {
    let grid = log_grid(0.5, 150.0, 400).unwrap();
    let mut identical = true;
    let mut worst_sum: f64 = 0.0;
    let mut min_weight = f64::INFINITY;
    let mut failures = 0;
    for &n in &grid {
        for v in [Variant::Printed, Variant::Repaired] {
            identical &= w01_avg(n, v).to_bits() == w10_avg(n, v).to_bits();
        }
        match normalize(n, Variant::Repaired) {
            Ok(r) => {
                worst_sum = worst_sum.max((r.w.total() - 1.0).abs());
                min_weight =
                    min_weight.min(r.w.as_array().into_iter().fold(f64::INFINITY, f64::min));
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        identical && failures == 0 && worst_sum <= 1e-12 && min_weight >= 0.0,
        format!(
            "w01 == w10 bitwise: {identical}; 400 points in [0.5, 150]: {failures} failures, max |sum-1| {worst_sum:.1e}, min weight {min_weight:.3e}"
        ),
    )
}

fn semiclassical_anchor() -> Outcome {
    let start = Instant::now();
    let c = |n: f64| normalize(n, Variant::Repaired).unwrap();
    let (c1, c10, c25, c100) = (c(1.0), c(10.0), c(25.0), c(100.0));
    let ordered = c100.c_mixed < c10.c_mixed && c10.c_mixed < c1.c_mixed;
    let small = c100.c_mixed < 0.1;
    let (d25, d100) = (
        c25.w.max_deviation_from_uniform(),
        c100.w.max_deviation_from_uniform(),
    );
    let equalizing = d100 < d25;
    let (fast, t) = within(start.elapsed(), Duration::from_secs(10));
    outcome(
        ordered && small && equalizing && fast,
        format!(
            "C(1)={:.4e} C(10)={:.4e} C(100)={:.4e} ordered: {ordered}, C(100)<0.1: {small}; max|w-1/4| at 25: 3/4 - {:.3e}, at 100: 3/4 - {:.3e}, decreasing: {equalizing}; {t}",
            c1.c_mixed, c10.c_mixed, c100.c_mixed, 0.75 - d25, 0.75 - d100
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let mut runs = Vec::new();
    for threads in ["1", "4", "1", "8"] {
        let out = dir.path().join(format!("run{}", runs.len()));
        let status = Command::new(env!("CARGO_BIN_EXE_cqed"))
            .args([
                "simulate",
                "--seed",
                "42",
                "--threads",
                threads,
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap()
            .status;
        let files: Vec<Vec<u8>> = [
            "populations.csv",
            "concurrence.csv",
            "concurrence_wootters.csv",
        ]
        .iter()
        .map(|f| fs::read(out.join(f)).unwrap_or_default())
        .collect();
        runs.push((status.code(), files));
    }
    let ok = runs.iter().all(|r| r.0 == Some(0) && !r.1[0].is_empty())
        && runs.windows(2).all(|w| w[0].1 == w[1].1);
    outcome(
        ok,
        "default simulate, seed 42, threads 1/4/1/8: outputs byte-identical".to_string(),
    )
}

fn discrepancy_report() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(
        &cfg,
        "sweep.log_from=1\nsweep.log_to=100\nsweep.points=11\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let result = Command::new(env!("CARGO_BIN_EXE_cqed"))
        .args([
            "sweep",
            "--variant",
            "printed",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    let code = result.status.code();
    let report = fs::read_to_string(out.join("discrepancies.md")).unwrap_or_default();
    let side_by_side = REPAIRS.iter().all(|r| {
        report.contains(&format!(
            "| {} | `{}` | `{}` |",
            r.quantity, r.printed, r.repaired
        ))
    });
    let divergence =
        report.contains("## Growth of the W01 Erfi prefactor") && report.contains("exp(+n)");
    let sign = report.contains("| Bell Phi+ | 0.000000000000 | 1.000000000000 |");
    let no_crash = matches!(code, Some(0) | Some(5));
    outcome(
        no_crash && side_by_side && divergence && sign,
        format!(
            "exit code {code:?} (0 or 5 accepted), forms side by side: {side_by_side}, e^(+n) growth table: {divergence}, eigenvalue sign row: {sign}"
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("Bell-state anchor", bell_anchor),
        ("pure-state consistency", pure_consistency),
        ("local-unitary invariance", local_unitary_invariance),
        ("selection rules", selection_rules),
        ("unitarity", unitarity),
        ("decoherence envelope", decoherence_envelope_check),
        ("hypergeometric accuracy", hypergeometric_accuracy),
        ("closed-form structure", closed_form_structure),
        ("semiclassical anchor", semiclassical_anchor),
        ("determinism", determinism),
        ("discrepancy report", discrepancy_report),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<26} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
