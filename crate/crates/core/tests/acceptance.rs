//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ksub::bounds::{self, Verdict};
use ksub::chebyshev::{self, ChebKind};
use ksub::harness::{self, EnsembleConfig, Family, Problem};
use ksub::randomize;
use ksub::subproblem::{
    self, kkt_residual, solve_dense_exact, solve_krylov, CubicInstance, Instance, Reference,
    ReferenceKind, SolveOptions, TraceMode, TrsInstance,
};
use ksub::{Dense, SymmetricOperator};

type Outcome = (bool, String);

fn random_symmetric(d: usize, rng: &mut ChaCha20Rng) -> Arc<dyn SymmetricOperator> {
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let v: f64 = rng.gen_range(-1.0..1.0);
            a[i * d + j] = v;
            a[j * d + i] = v;
        }
    }
    Arc::new(Dense::from_row_major(d, a).unwrap())
}

fn random_b(d: usize, rng: &mut ChaCha20Rng) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Random instances of both kinds, `d ∈ [2, 16]`.
fn oracle_set() -> Vec<Instance> {
    let mut rng = ChaCha20Rng::seed_from_u64(0xacc1);
    (0..200)
        .map(|k| {
            let d = rng.gen_range(2..=16);
            let a = random_symmetric(d, &mut rng);
            let b = random_b(d, &mut rng);
            if k % 2 == 0 {
                Instance::Trs(TrsInstance::new(a, b, rng.gen_range(0.1..3.0)).unwrap())
            } else {
                Instance::Cubic(CubicInstance::new(a, b, rng.gen_range(0.1..3.0)).unwrap())
            }
        })
        .collect()
}

fn c1_oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for inst in oracle_set() {
        let exact = solve_dense_exact(&inst).unwrap();
        let (kry, _) = solve_krylov(&inst, inst.dim(), &SolveOptions::default()).unwrap();
        worst = worst.max((kry.value - exact.value).abs() / (1.0 + exact.value.abs()));
    }
    (
        worst <= 1e-7,
        format!("max relative value error {worst:.2e} (limit 1e-7)"),
    )
}

fn c2_kkt() -> Outcome {
    let (mut st, mut cs, mut sg) = (0.0f64, 0.0f64, 0.0f64);
    for inst in oracle_set() {
        let (kry, _) = solve_krylov(&inst, inst.dim(), &SolveOptions::default()).unwrap();
        let k = kkt_residual(&inst, &kry).unwrap();
        st = st.max(k.stationarity);
        cs = cs.max(k.complementarity);
        sg = sg.max(k.sign_slack);
    }
    (
        st <= 1e-8 && cs <= 1e-8 && sg <= 1e-8,
        format!(
            "stationarity {st:.2e}, complementarity {cs:.2e}, sign slack {sg:.2e} (limit 1e-8)"
        ),
    )
}

fn c3_upper_bounds() -> Outcome {
    let mut total = 0;
    let mut bad = 0;
    for kappa in [1e2, 1e3] {
        match harness::upper_bound_reports(2000, kappa, 50, 150, 0xacc3, 1) {
            Ok(reps) => {
                total += reps.len();
                bad += reps
                    .iter()
                    .filter(|r| r.verdict != Verdict::Satisfied)
                    .count();
            }
            Err(e) => return (false, format!("ensemble failed: {e}")),
        }
    }
    (
        bad == 0 && total == 2 * 50 * 150,
        format!("{bad} of {total} (instance, t) pairs above min(ub_linear, ub_sublinear)"),
    )
}

fn c4_rates() -> Outcome {
    let kappa: f64 = 1e4;
    let sk = kappa.sqrt() as usize;
    let t_max = 2 * sk;
    let cfg = EnsembleConfig {
        family: Family::RandomKappa { d: 10_000, kappa },
        instances: 50,
        t_max,
        orders: (1..=t_max).collect(),
        seed: 2024,
        ..Default::default()
    };
    let out = match harness::run_ensemble(&cfg) {
        Ok(o) => o,
        Err(e) => return (false, format!("ensemble failed: {e}")),
    };
    let failed = out.iter().filter(|o| o.error.is_some()).count();
    let rows = harness::summarize(&out, 0.1);
    // linear regime t ∈ [√κ, 2√κ]; sublinear regime t ∈ [5, √κ/4]
    let slope = harness::summary_slope(&rows, sk, 2 * sk).unwrap_or(f64::NAN);
    let expo = harness::summary_exponent(&rows, 5, sk / 4).unwrap_or(f64::NAN);
    let target = -4.0 / kappa.sqrt();
    let slope_ok = (slope - target).abs() <= 0.25 * target.abs();
    let expo_ok = (-2.6..=-1.4).contains(&expo);
    (
        failed == 0 && slope_ok && expo_ok,
        format!(
            "slope {slope:.4} vs {target:.4} ±25% over t∈[{sk},{}]; exponent {expo:.3} in [-2.6,-1.4] over t∈[5,{}]; {failed} failed runs",
            2 * sk,
            sk / 4
        ),
    )
}

fn c5_sandwich() -> Outcome {
    let mut reps = vec![];
    for t in [5, 10, 20, 30] {
        for kappa in [10.0, 100.0] {
            match harness::sandwich_lb_linear(t, kappa) {
                Ok(r) => reps.extend(r),
                Err(e) => return (false, format!("lb_linear t={t} κ={kappa}: {e}")),
            }
        }
        match harness::sandwich_lb_convex(t) {
            Ok(r) => reps.extend(r),
            Err(e) => return (false, format!("lb_convex t={t}: {e}")),
        }
        match harness::sandwich_lb_nonconvex(t) {
            Ok(r) => reps.extend(r),
            Err(e) => return (false, format!("lb_nonconvex t={t}: {e}")),
        }
    }
    let bad: Vec<String> = reps
        .iter()
        .filter(|r| r.verdict != Verdict::Satisfied)
        .map(|r| format!("{}@{:?}", r.name, r.inputs.t))
        .collect();
    let min_margin = reps
        .iter()
        .filter(|r| r.sense == bounds::BoundSense::Lower)
        .filter_map(|r| r.measured.map(|m| m - r.value))
        .fold(f64::INFINITY, f64::min);
    (
        bad.is_empty(),
        format!(
            "{} comparisons, {} violated {:?}; smallest lb margin {min_margin:.2e}",
            reps.len(),
            bad.len(),
            bad
        ),
    )
}

fn c6_gap_dominance() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(0xacc6);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let d = rng.gen_range(2..=64);
        let a = random_symmetric(d, &mut rng);
        let b = random_b(d, &mut rng);
        let cubic = CubicInstance::new(a, b, rng.gen_range(0.1..3.0)).unwrap();
        let trs = subproblem::trs_equivalent(&cubic).unwrap();
        let (cu, tr) = (Instance::Cubic(cubic), Instance::Trs(trs));
        let gaps = |inst: &Instance| {
            let opt = solve_dense_exact(inst).unwrap();
            let opts = SolveOptions {
                trace: TraceMode::Every,
                reference: Some(Reference::exact(&opt, ReferenceKind::Oracle)),
                ..Default::default()
            };
            solve_krylov(inst, d, &opts).unwrap().1.rows
        };
        let (gc, gt) = (gaps(&cu), gaps(&tr));
        for (rc, rt) in gc.iter().zip(&gt) {
            worst = worst.max(rc.gap.unwrap() - rt.gap.unwrap());
        }
    }
    (
        worst <= 1e-9,
        format!("max (cubic gap − trs gap) {worst:.2e} (limit 1e-9)"),
    )
}

fn c7_chebyshev() -> Outcome {
    let reps = match harness::chebyshev_reports(4, &[2.0, 10.0, 100.0]) {
        Ok(r) => r,
        Err(e) => return (false, format!("exchange oracle failed: {e}")),
    };
    let oracle_bad = reps
        .iter()
        .filter(|r| r.verdict != Verdict::Satisfied)
        .count();
    let mut sandwich_bad = 0;
    let mut eq_worst = 0.0f64;
    for kappa in [2.0, 10.0, 100.0] {
        for n in 1..=10 {
            let (lo, hi) = chebyshev::minimax_t_bounds(n, kappa);
            let m = chebyshev::minimax_t_value(n, 1.0, kappa);
            if !(lo <= m && m <= hi) {
                sandwich_bad += 1;
            }
            let (lo, hi) = chebyshev::minimax_u_bounds(n, 1.0, kappa);
            let m = chebyshev::minimax_u_value(n, 1.0, kappa);
            if !(lo <= m && m <= hi) {
                sandwich_bad += 1;
            }
            for kind in [ChebKind::First, ChebKind::Second] {
                let cert = match kind {
                    ChebKind::First => chebyshev::minimax_t(n, 1.0, kappa),
                    ChebKind::Second => chebyshev::minimax_u(n, 1.0, kappa),
                };
                match cert {
                    Ok(c) => eq_worst = eq_worst.max(c.equioscillation_error()),
                    Err(_) => eq_worst = f64::INFINITY,
                }
            }
        }
    }
    (
        oracle_bad == 0 && sandwich_bad == 0 && eq_worst <= 1e-8,
        format!(
            "{oracle_bad} of {} closed forms off the exchange bracket; {sandwich_bad} sandwich violations; equioscillation {eq_worst:.2e}",
            reps.len()
        ),
    )
}

fn c8_randomization() -> Outcome {
    let (d, gamma, tau, delta) = (2000, 1e-3, 10.0, 0.05);
    let cfg = EnsembleConfig {
        family: Family::HardCase { d, gamma, tau },
        problem: Problem::Trs,
        instances: 200,
        t_max: 100,
        orders: vec![50, 100],
        scheme: harness::Scheme::Joint,
        seed: 0xacc8,
        ..Default::default()
    };
    let out = match harness::run_ensemble(&cfg) {
        Ok(o) => o,
        Err(e) => return (false, format!("joint ensemble failed: {e}")),
    };
    let mut ok = [0usize; 2];
    for o in &out {
        let Some(meta) = o.meta else { continue };
        for (k, t) in [50usize, 100].into_iter().enumerate() {
            let gap = o.rows.iter().find(|r| r.t == t).and_then(|r| r.gap);
            let ub = bounds::ub_joint(t, meta.lambda_min, meta.lambda_max, meta.s_norm, d, delta);
            if gap.is_some_and(|g| g <= ub) {
                ok[k] += 1;
            }
        }
    }
    let frac = [
        ok[0] as f64 / out.len() as f64,
        ok[1] as f64 / out.len() as f64,
    ];
    let joint_ok = frac.iter().all(|f| *f >= 1.0 - delta);

    // perturbed scheme on a subset of the same family
    let eps = 1e-2;
    let t_max = 400;
    let runs = 20;
    let mut rng = ChaCha20Rng::seed_from_u64(0xacc8 ^ 1);
    let (mut ub_hits, mut floor_ok) = (0, 0);
    let mut floors = vec![];
    for _ in 0..runs {
        let spec = match cfg.family.generate(rng.gen()) {
            Ok(s) => s,
            Err(e) => return (false, format!("generator failed: {e}")),
        };
        let (inst, reference, meta) = harness::prepare(&spec, Problem::Trs).unwrap();
        let r = meta.s_norm;
        let sigma = eps / (4.0 * r);
        let p = randomize::perturb_instance(&inst, sigma, rng.gen()).unwrap();
        let opts = SolveOptions {
            trace: TraceMode::Orders(vec![t_max / 2, t_max]),
            reference: Some(reference.clone()),
            ..Default::default()
        };
        let (sol, trace) = solve_krylov(&p.instance, t_max, &opts).unwrap();
        let gap = trace.rows.last().and_then(|row| row.gap).unwrap();
        let bnorm = ksub::vecops::norm(p.instance.b());
        let ub = bounds::ub_perturbed(
            t_max,
            meta.lambda_min,
            meta.lambda_max,
            r,
            bnorm,
            sigma,
            d,
            delta,
        );
        if gap <= ub {
            ub_hits += 1;
        }
        let pert_opt = solve_dense_exact(&p.instance).unwrap();
        let tail = sol.value - pert_opt.value;
        if gap <= 2.0 * sigma * r + tail.max(0.0) + 1e-12 {
            floor_ok += 1;
        }
        let Reference::Exact { value, .. } = reference else {
            unreachable!()
        };
        floors.push((gap, inst.objective(&pert_opt.x).unwrap() - value));
    }
    let ub_frac = ub_hits as f64 / runs as f64;
    // the original-objective gap stalls at the perturbed optimum's level
    let stalled = floors
        .iter()
        .filter(|(g, f)| (g - f).abs() <= 0.1 * f.abs().max(1e-15))
        .count();
    (
        joint_ok && ub_frac >= 1.0 - delta && floor_ok == runs,
        format!(
            "joint within ub_joint: {:.1}% at t=50, {:.1}% at t=100; perturbed within ub_perturbed at t={t_max}: {:.0}%; floor ≤ 2σR + tail in {floor_ok}/{runs}; stalled at perturbed optimum in {stalled}/{runs}",
            100.0 * frac[0],
            100.0 * frac[1],
            100.0 * ub_frac
        ),
    )
}

fn c9_apg() -> Outcome {
    match harness::dominance_reports(20, 30, 50, 0xacc9) {
        Ok(reps) => {
            let bad = reps
                .iter()
                .filter(|r| r.verdict != Verdict::Satisfied)
                .count();
            (
                bad == 0,
                format!(
                    "{bad} of {} rate/dominance comparisons violated",
                    reps.len()
                ),
            )
        }
        Err(e) => (false, format!("baseline failed: {e}")),
    }
}

fn c10_eigvec() -> Outcome {
    match harness::eigvec_reports(&[5, 10, 20], 100.0, 1.0) {
        Ok(reps) => {
            let bad = reps
                .iter()
                .filter(|r| r.verdict != Verdict::Satisfied)
                .count();
            (
                bad == 0,
                format!("{bad} of {} Ritz sandwich comparisons violated", reps.len()),
            )
        }
        Err(e) => (false, format!("eigvec instance failed: {e}")),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        (
            "1 oracle equivalence",
            c1_oracle_equivalence,
            Some(Duration::from_secs(10)),
        ),
        ("2 KKT certification", c2_kkt, None),
        (
            "3 upper bounds never violated",
            c3_upper_bounds,
            Some(Duration::from_secs(120)),
        ),
        ("4 linear slope and sublinear exponent", c4_rates, None),
        (
            "5 lower-bound sandwich",
            c5_sandwich,
            Some(Duration::from_secs(30)),
        ),
        ("6 cubic gap below trust-region gap", c6_gap_dominance, None),
        ("7 Chebyshev certificates", c7_chebyshev, None),
        (
            "8 randomized schemes on the hard case",
            c8_randomization,
            None,
        ),
        ("9 accelerated gradient baseline", c9_apg, None),
        ("10 eigenvector sandwich", c10_eigvec, None),
    ];
    let mut failures = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let (ok, detail) = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = ok && in_time;
        if !pass {
            failures += 1;
        }
        let budget = limit
            .map(|l| format!(" / limit {}s", l.as_secs()))
            .unwrap_or_default();
        println!(
            "{} criterion {name}: {detail} [{:.1}s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
