//! Exit criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads 1` to see them
//! in order.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasi_feynman::baselines::{
    bss_product, chernoff_distance, exact_factor_families, trotter_product, AbstractFamily,
};
use quasi_feynman::experiment::{build_problem, fit_order, run_sweep, seeded_random_hermitian, FittedOrder, Method, SweepConfig};
use quasi_feynman::families::{
    assemble_decomposition, check_tangency, make_family, ChernoffFamily, Decomposition, FamilyKind,
    DEFAULT_TANGENCY_GRID,
};
use quasi_feynman::operator::{Operator, StateVector};
use quasi_feynman::oracle::stone_propagator;
use quasi_feynman::quasi_feynman::{
    binomial_formula, chernoff_iterate, multinomial_power, r_operator, series_formula, MultinomialPath,
    DEFAULT_TERM_CAP,
};

const SHIPPED_CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/resolvent.toml");

fn verdict(id: u8, name: &str, pass: bool, elapsed: Duration, budget: Duration, detail: String) {
    let within = elapsed < budget;
    let ok = pass && within;
    println!(
        "criterion {id} {name}: {} ({detail}; {:.2} s of {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(pass, "criterion {id} {name} failed: {detail}");
    assert!(within, "criterion {id} {name} exceeded its time budget");
}

fn dim8_config(families: &str, n_values: &str, methods: &str) -> SweepConfig {
    SweepConfig::from_toml_str(&format!(
        r#"
[problem]
dim = 8
kind = "random_hermitian"
seed = 42
[decomposition]
coefficients = [1.0, 1.0]
families = [{families}]
[sweep]
t = 1.0
n_values = [{n_values}]
methods = [{methods}]
"#
    ))
    .unwrap()
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let v: Vec<_> = (0..dim)
        .map(|_| quasi_feynman::operator::c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::new(v).unwrap().normalized().unwrap()
}

#[test]
fn criterion_1_unitarity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let kinds = [FamilyKind::Resolvent, FamilyKind::Quadratic, FamilyKind::Linear];
    let mut worst_norm = 0.0_f64;
    let mut worst_inverse = 0.0_f64;
    for case in 0..50 {
        let dim = [2, 4, 8, 16][case % 4];
        let m = 1 + case % 3;
        // Terms scaled below norm 0.5 so every family covers |t| <= 1.
        let families: Vec<ChernoffFamily> = (0..m)
            .map(|_| {
                let l = seeded_random_hermitian(dim, rng.gen()).unwrap().scale_real(0.45);
                make_family(kinds[rng.gen_range(0..3)], &l, 1.0).unwrap()
            })
            .collect();
        let coeffs: Vec<f64> = (0..m)
            .map(|_| {
                let a: f64 = rng.gen_range(0.2..1.5);
                if rng.gen_bool(0.5) { a } else { -a }
            })
            .collect();
        let dec = assemble_decomposition(&coeffs, families, &[1.0, 0.5, 0.1]).unwrap();
        let t: f64 = rng.gen_range(-1.0..=1.0);
        let r = r_operator(&dec, t).unwrap();
        let back = r_operator(&dec, -t).unwrap();
        worst_norm = worst_norm.max((r.norm() - 1.0).abs());
        let product = back.compose(&r).unwrap();
        worst_inverse = worst_inverse.max((&product - &Operator::identity(dim)).norm());
    }
    verdict(
        1,
        "unitarity",
        worst_norm <= 1e-10 && worst_inverse <= 1e-10,
        start.elapsed(),
        Duration::from_secs(10),
        format!("max | ||R(t)|| - 1 | = {worst_norm:.2e}, max ||R(-t)R(t) - I|| = {worst_inverse:.2e}, tol 1e-10"),
    );
}

#[test]
fn criterion_2_exactness_degeneracy() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = 1.0;
    let mut worst = 0.0_f64;
    for dim in [1, 2, 4, 8] {
        for m in 1..=3 {
            let families: Vec<ChernoffFamily> = (0..m)
                .map(|_| {
                    let l = seeded_random_hermitian(dim, rng.gen()).unwrap();
                    make_family(FamilyKind::Linear, &l, t).unwrap()
                })
                .collect();
            let coeffs: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..1.5)).collect();
            let dec = assemble_decomposition(&coeffs, families, &[]).unwrap();
            let psi = random_state(dim, &mut rng);
            let exact = stone_propagator(dec.generator(), t).unwrap().apply(&psi).unwrap();
            for n in [1, 3, 10, 100] {
                let approx = chernoff_iterate(&dec, t, n, &psi).unwrap();
                worst = worst.max(approx.distance(&exact));
            }
        }
    }
    verdict(
        2,
        "exactness degeneracy",
        worst < 1e-11,
        start.elapsed(),
        Duration::from_secs(5),
        format!("max oracle residual {worst:.2e}, tol 1e-11"),
    );
}

#[test]
fn criterion_3_convergence() {
    let start = Instant::now();
    let cfg = dim8_config(r#""resolvent", "resolvent""#, "4, 16, 64, 256, 1024", r#""qf_exp""#);
    let report = run_sweep(&cfg).unwrap();
    assert!(report.failures.is_empty());
    let errors: Vec<f64> = report.rows_for(Method::QfExp).map(|r| r.oracle_error).collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let order = match fit_order(&report, Method::QfExp).unwrap() {
        FittedOrder::Slope(s) => s,
        FittedOrder::Exact => f64::NAN,
    };
    let ratio = errors[0] / errors[4];
    verdict(
        3,
        "convergence",
        decreasing && (0.6..=1.4).contains(&order) && ratio > 50.0,
        start.elapsed(),
        Duration::from_secs(30),
        format!(
            "errors {:.3e} -> {:.3e}, strictly decreasing {decreasing}, order {order:.3}, reduction {ratio:.1}x",
            errors[0], errors[4]
        ),
    );
}

fn dim4_decomposition() -> (Decomposition, StateVector) {
    let cfg = SweepConfig::from_toml_str(
        r#"
[problem]
dim = 4
kind = "random_hermitian"
seed = 42
[decomposition]
coefficients = [1.0, 1.0]
families = ["resolvent", "resolvent"]
[sweep]
t = 0.7
n_values = [4]
methods = ["qf_exp"]
"#,
    )
    .unwrap();
    let p = build_problem(&cfg).unwrap();
    (p.decomposition, p.psi0)
}

#[test]
fn criterion_4_formula_equivalence() {
    let start = Instant::now();
    let (dec, psi) = dim4_decomposition();
    let (t, n) = (0.7, 4);
    let reference = chernoff_iterate(&dec, t, n, &psi).unwrap();
    let series = series_formula(&dec, t, n, 25, &psi, DEFAULT_TERM_CAP).unwrap();
    let binomial = binomial_formula(&dec, t, n, 4096, &psi, DEFAULT_TERM_CAP).unwrap();
    assert_eq!(binomial.path, MultinomialPath::Closed);
    let series_gap = series.state.distance(&reference);
    let binomial_gap = binomial.state.distance(&reference);
    let mut path_gap = 0.0_f64;
    for p in 0..=6 {
        let both = multinomial_power(&dec, t, n, p, &psi, DEFAULT_TERM_CAP).unwrap();
        path_gap = path_gap.max(both.literal.distance(&both.closed));
    }
    verdict(
        4,
        "formula equivalence",
        series_gap < 1e-6 && binomial_gap < 1e-6 && path_gap < 1e-10,
        start.elapsed(),
        Duration::from_secs(20),
        format!(
            "series gap {series_gap:.2e}, binomial gap {binomial_gap:.2e} (tol 1e-6), literal vs closed {path_gap:.2e} (tol 1e-10)"
        ),
    );
}

#[test]
fn criterion_5_tangency_verifier() {
    let start = Instant::now();

    // (I + tL - I)/t is exact in floating point when L has a zero diagonal.
    let mut linear_max = 0.0_f64;
    for l in [Operator::pauli_x(), Operator::pauli_y()] {
        let fam = make_family(FamilyKind::Linear, &l, 0.1).unwrap();
        let report = check_tangency(&fam, 1e-2, &DEFAULT_TANGENCY_GRID).unwrap();
        assert!(report.tangent);
        linear_max = linear_max.max(report.residuals.iter().cloned().fold(0.0, f64::max));
    }

    let quad = make_family(FamilyKind::Quadratic, &Operator::pauli_z(), 0.1).unwrap();
    let t = 1e-3;
    let quad_report = check_tangency(&quad, 1e-2, &[t]).unwrap();
    let expected = t * (&Operator::pauli_z() * &Operator::pauli_z()).norm() / 2.0;
    let quad_rel = (quad_report.residuals[0] - expected).abs() / expected;

    let l = Operator::diagonal(&[1.0, 2.0]).unwrap();
    let l2 = &l * &l;
    let wrong = ChernoffFamily::custom("I + tL^2", l.clone(), 0.1, move |t| {
        Ok(&Operator::identity(2) + &l2.scale_real(t))
    })
    .unwrap();
    let wrong_report = check_tangency(&wrong, 1e-2, &DEFAULT_TANGENCY_GRID).unwrap();
    let plateau = wrong_report.final_residual().unwrap();

    verdict(
        5,
        "tangency verifier",
        linear_max == 0.0 && quad_rel < 0.1 && plateau >= 1.0 && !wrong_report.tangent,
        start.elapsed(),
        Duration::from_secs(5),
        format!(
            "linear residual {linear_max:e}, quadratic relative deviation {quad_rel:.2e}, wrong family plateau {plateau:.4} tangent {}",
            wrong_report.tangent
        ),
    );
}

#[test]
fn criterion_6_baseline_concordance() {
    let start = Instant::now();
    let cfg = dim8_config(r#""resolvent", "resolvent""#, "4096", r#""qf_exp""#);
    let problem = build_problem(&cfg).unwrap();
    let dec = &problem.decomposition;
    let psi = &problem.psi0;
    let (t, n) = (1.0, 4096);
    let exact = stone_propagator(dec.generator(), t).unwrap().apply(psi).unwrap();

    let trotter = trotter_product(dec, t, n, psi).unwrap().distance(&exact);
    let factors = exact_factor_families(dec).unwrap();
    let bss = bss_product(&factors, t, n, psi).unwrap().0.distance(&exact);
    let qf = chernoff_iterate(dec, t, n, psi).unwrap().distance(&exact);
    verdict(
        6,
        "baseline concordance",
        trotter < 1e-4 && bss < 1e-4 && qf < 1e-4,
        start.elapsed(),
        Duration::from_secs(30),
        format!("trotter {trotter:.3e}, bss {bss:.3e}, chernoff iterate {qf:.3e}, tol 1e-4"),
    );
}

#[test]
fn criterion_7_chernoff_equivalence_decay() {
    let start = Instant::now();
    let cfg = dim8_config(r#""resolvent", "resolvent""#, "4", r#""qf_exp""#);
    let problem = build_problem(&cfg).unwrap();
    let r = AbstractFamily::r_family(&problem.decomposition).unwrap();
    let group = AbstractFamily::unitary_group("stone", problem.decomposition.generator()).unwrap();
    let at4 = chernoff_distance(&r, &group, &problem.psi0, 1.0, 4, 33).unwrap().value;
    let at256 = chernoff_distance(&r, &group, &problem.psi0, 1.0, 256, 33).unwrap().value;
    let ratio = at4 / at256;
    verdict(
        7,
        "chernoff equivalence decay",
        ratio >= 5.0,
        start.elapsed(),
        Duration::from_secs(30),
        format!("distance {at4:.3e} at n = 4, {at256:.3e} at n = 256, reduction {ratio:.1}x (need 5x)"),
    );
}

fn strip_seconds(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|line| line.rsplit_once(',').map_or(line, |(head, _)| head).to_string())
        .collect()
}

#[test]
fn criterion_8_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_quasi-feynman"))
            .args(["sweep", "--config", SHIPPED_CONFIG, "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success(), "sweep exited with {status}");
        outputs.push(std::fs::read_to_string(&out).unwrap());
    }
    let first = strip_seconds(&outputs[0]);
    let second = strip_seconds(&outputs[1]);
    let identical = first == second && first.len() > 1;
    verdict(
        8,
        "determinism",
        identical,
        start.elapsed(),
        Duration::from_secs(60),
        format!("{} rows, identical apart from seconds: {identical}", first.len().saturating_sub(1)),
    );
}
