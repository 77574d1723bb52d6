//! `ksub`: generate instances, solve with traces, verify bounds and run
//! benchmark ensembles.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use ksub::bounds::{self, BoundReport, Verdict};
use ksub::chebyshev::{self, ChebKind};
use ksub::harness::{self, EnsembleConfig, Family, Problem, Scheme};
use ksub::instances::{self, InstanceSpec};
use ksub::lanczos::Reorth;
use ksub::secular::SecularOptions;
use ksub::subproblem::{SolveOptions, TraceMode};
use ksub::Error;

const MAX_NEWTON: usize = 25;
/// Newton budget for families with `κ = ∞`.
const MAX_NEWTON_HARD: usize = 100;

#[derive(Parser, Debug)]
#[command(
    name = "ksub",
    version,
    about = "Krylov subspace solvers for trust-region and cubic-regularized subproblems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Generate a certified instance file.
    Gen(GenArgs),
    /// Solve an instance, writing a trace CSV and optionally the solution.
    Solve(SolveArgs),
    /// Run an ensemble and write per-order gap statistics.
    Bench(BenchArgs),
    /// Run a bound-verification suite; exits 0 iff every comparison holds.
    Verify(VerifyArgs),
    /// Print the minimax certificate for a Chebyshev problem as JSON.
    Cheb(ChebArgs),
    /// Re-run the configuration embedded in an output file.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum GenFamily {
    RandomKappa,
    HardCase,
    LbLinear,
    LbConvex,
    LbNonconvex,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: GenFamily,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Krylov order the lower-bound construction targets.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_max: Option<f64>,
    #[arg(long)]
    lambda_star: Option<f64>,
    /// Initial gap `f(0) − f(s*)` for lb-linear.
    #[arg(long)]
    gap: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Zero-pad the instance to this dimension.
    #[arg(long)]
    pad: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SolverFlags {
    #[arg(long, default_value_t = 1e-12)]
    tol_newton: f64,
    /// Newton iteration cap (25, or 100 for hard-case instances).
    #[arg(long)]
    max_newton: Option<usize>,
    #[arg(long, default_value = "full", value_parser = parse_reorth)]
    reorth: ReorthArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
struct ReorthArg(Reorth);

fn parse_reorth(s: &str) -> Result<ReorthArg, String> {
    s.parse().map(ReorthArg).map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl SolverFlags {
    fn secular(&self, hard: bool) -> SecularOptions {
        SecularOptions {
            tol: self.tol_newton,
            max_iters: self
                .max_newton
                .unwrap_or(if hard { MAX_NEWTON_HARD } else { MAX_NEWTON }),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = 100)]
    t_max: usize,
    #[arg(long, default_value = "plain", value_parser = parse_scheme)]
    scheme: Scheme,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverFlags,
    /// Trace CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Solution JSON path.
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum BenchFamily {
    RandomKappa,
    HardCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ProblemArg {
    Native,
    Trs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "random-kappa")]
    family: BenchFamily,
    #[arg(long, default_value_t = 1000)]
    d: usize,
    /// Condition numbers, comma separated; one summary block each.
    #[arg(long, value_delimiter = ',', default_value = "100")]
    kappa: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    gamma: f64,
    #[arg(long, default_value_t = 10.0)]
    tau: f64,
    /// Solve the generated problem or its trust-region equivalent.
    #[arg(long, value_enum, default_value = "native")]
    problem: ProblemArg,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 1)]
    seeds_per_instance: usize,
    #[arg(long, default_value_t = 100)]
    t_max: usize,
    #[arg(long, default_value = "plain", value_parser = parse_scheme)]
    scheme: Scheme,
    #[arg(long)]
    sigma: Option<f64>,
    /// Failure probability for the randomized bounds.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Lower quantile reported next to the median (upper is `1 − q`).
    #[arg(long, default_value_t = 0.1)]
    quantile: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct VerifyArgs {
    #[arg(long)]
    suite: Option<String>,
    /// Shorthand for `--suite krylov-dominance`.
    #[arg(long)]
    lemma2: bool,
    /// Shorthand for `--suite eigvec`.
    #[arg(long)]
    lemma3: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindArg {
    T,
    U,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ChebArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct RerunArgs {
    /// Output file (CSV or JSON) carrying an embedded run configuration.
    file: PathBuf,
    /// Write here instead of the recorded output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Parameter(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Dimension { .. } | Error::TooLarge { .. } => {
                Failure::Parameter(e.to_string())
            }
            _ => Failure::Solver(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn param<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Parameter(msg.into()))
}

fn io_write(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body)
        .map_err(|e| Failure::Solver(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(p) => io_write(p, body),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Solver(format!("stdout: {e}"))),
    }
}

fn config_json(cmd: &Command) -> String {
    serde_json::to_string(cmd).expect("run configuration serializes")
}

/// Comment header for CSV outputs.
fn csv_header(cmd: &Command) -> String {
    format!(
        "# ksub {}\n# run_config {}\n",
        ksub::VERSION,
        config_json(cmd)
    )
}

/// JSON object with the version and run configuration attached.
fn with_config(cmd: &Command, body: serde_json::Value) -> String {
    let mut obj = match body {
        serde_json::Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("ksub_version".into(), ksub::VERSION.into());
    obj.insert(
        "run_config".into(),
        serde_json::to_value(cmd).expect("run configuration serializes"),
    );
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("json");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn require<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Parameter(format!("--{flag} is required for {family}")))
}

fn cmd_gen(cmd: &Command, a: &GenArgs) -> Outcome {
    let (mut spec, lower) = match a.family {
        GenFamily::RandomKappa => {
            let d = require(a.d, "d", "random-kappa")?;
            let kappa = require(a.kappa, "kappa", "random-kappa")?;
            (instances::gen_random_kappa(d, kappa, a.seed)?, None)
        }
        GenFamily::HardCase => {
            let d = require(a.d, "d", "hard-case")?;
            let gamma = require(a.gamma, "gamma", "hard-case")?;
            let tau = require(a.tau, "tau", "hard-case")?;
            (instances::gen_hard_case(d, gamma, tau, a.seed)?, None)
        }
        GenFamily::LbLinear => {
            let t = require(a.t, "t", "lb-linear")?;
            let lmin = a.lambda_min.unwrap_or(-0.5);
            let lstar = a.lambda_star.unwrap_or(1.0);
            let lmax = match (a.lambda_max, a.kappa) {
                (Some(l), _) => l,
                (None, Some(k)) => k * (lmin + lstar) - lstar,
                (None, None) => return param("lb-linear needs --lambda-max or --kappa"),
            };
            let (s, lb) = instances::gen_lb_linear(t, lmin, lmax, lstar, a.gap.unwrap_or(1.0))?;
            (s, Some(lb))
        }
        GenFamily::LbConvex => {
            let t = require(a.t, "t", "lb-convex")?;
            let (s, lb) = instances::gen_lb_convex(
                t,
                a.lambda_min.unwrap_or(-0.5),
                a.lambda_max.unwrap_or(1.0),
                a.radius.unwrap_or(1.0),
                a.eps,
            )?;
            (s, Some(lb))
        }
        GenFamily::LbNonconvex => {
            let t = require(a.t, "t", "lb-nonconvex")?;
            let (s, lb) = instances::gen_lb_nonconvex(
                t,
                a.lambda_min.unwrap_or(-1.0),
                a.lambda_max.unwrap_or(1.0),
                a.radius.unwrap_or(1.0),
                a.tau.unwrap_or(100.0),
                a.eps,
            )?;
            (s, Some(lb))
        }
    };
    if let Some(d) = a.pad {
        spec.zero_pad(d);
    }
    let value = serde_json::to_value(&spec).map_err(|e| Failure::Solver(e.to_string()))?;
    io_write(&a.out, &with_config(cmd, value))?;

    let cert = spec.certified.as_ref();
    println!(
        "{}: d={} verified={}",
        spec.provenance.generator,
        spec.dim(),
        cert.is_some_and(|c| c.verified)
    );
    if let Some(c) = cert {
        println!("  initial gap {}", num(c.gap));
        for chk in &c.checks {
            println!(
                "  {}: requested {} measured {} error {} (tol {})",
                chk.quantity,
                num(chk.requested),
                num(chk.measured),
                num(chk.error),
                num(chk.tolerance)
            );
        }
    }
    if let Some(lb) = lower {
        println!(
            "  certified lower bound at t={}: {}",
            a.t.unwrap_or(0),
            num(lb)
        );
    }
    Ok(true)
}

fn read_instance(path: &Path) -> Result<InstanceSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parameter(format!("cannot read {}: {e}", path.display())))?;
    Ok(InstanceSpec::from_json(&text)?)
}

fn is_hard(spec: &InstanceSpec) -> bool {
    spec.provenance.generator == "hard-case"
}

fn cmd_solve(cmd: &Command, a: &SolveArgs) -> Outcome {
    let spec = read_instance(&a.instance)?;
    let (inst, reference, meta) = harness::analyze(&spec)?;
    let opts = SolveOptions {
        secular: a.solver.secular(is_hard(&spec)),
        reorth: a.solver.reorth.0,
        trace: TraceMode::Every,
        reference: reference.clone(),
        kkt: false,
    };
    let (sol, rows) = harness::solve_scheme(&inst, a.scheme, a.t_max, a.sigma, a.seed, &opts)?;

    let mut csv = csv_header(cmd);
    csv.push_str("t,value,gap,lambda,matvecs,ub_linear,ub_sublinear\n");
    for r in &rows {
        let (ul, us) = match meta {
            Some(m) => (
                Some(bounds::ub_linear(
                    r.t,
                    m.lambda_min,
                    m.lambda_max,
                    m.lambda_star,
                    m.initial_gap,
                )),
                Some(bounds::ub_sublinear(
                    r.t,
                    m.lambda_min,
                    m.lambda_max,
                    m.s_norm,
                    m.b_norm,
                    m.umin_dot_b,
                )),
            ),
            None => (None, None),
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.t,
            num(r.value),
            opt_num(r.gap),
            num(r.lambda),
            r.matvecs,
            opt_num(ul),
            opt_num(us)
        ));
    }
    emit(a.out.as_deref(), &csv)?;
    if let Some(path) = &a.solution {
        let body = serde_json::json!({
            "solution": sol,
            "reference": reference.as_ref().map(|r| r.kind()),
        });
        io_write(path, &with_config(cmd, body))?;
    }
    Ok(true)
}

fn cmd_bench(cmd: &Command, a: &BenchArgs) -> Outcome {
    if !(a.quantile > 0.0 && a.quantile < 0.5) {
        return param("--quantile must lie in (0, 0.5)");
    }
    if !(a.delta > 0.0 && a.delta < 1.0) {
        return param("--delta must lie in (0, 1)");
    }
    let hard = a.family == BenchFamily::HardCase;
    let families: Vec<(String, Family)> = match a.family {
        BenchFamily::RandomKappa => a
            .kappa
            .iter()
            .map(|&kappa| (num(kappa), Family::RandomKappa { d: a.d, kappa }))
            .collect(),
        BenchFamily::HardCase => vec![(
            "inf".into(),
            Family::HardCase {
                d: a.d,
                gamma: a.gamma,
                tau: a.tau,
            },
        )],
    };
    let secular = a.solver.secular(hard);
    let mut csv = csv_header(cmd);
    let mut body = String::from("kappa,t,count,median,q_lo,q_hi,within_ub\n");
    let mut any_ok = false;
    for (label, family) in families {
        let cfg = EnsembleConfig {
            family,
            problem: match a.problem {
                ProblemArg::Native => Problem::Native,
                ProblemArg::Trs => Problem::Trs,
            },
            instances: a.instances,
            seeds_per_instance: a.seeds_per_instance,
            t_max: a.t_max,
            orders: vec![],
            scheme: a.scheme,
            sigma: a.sigma,
            seed: a.seed,
            jobs: a.jobs,
            tol_newton: secular.tol,
            max_newton: secular.max_iters,
            reorth: a.solver.reorth.0,
        };
        let outcomes = harness::run_ensemble(&cfg)?;
        for o in &outcomes {
            if let Some(e) = &o.error {
                csv.push_str(&format!(
                    "# failed kappa={label} instance={} instance_seed={} scheme_seed={}: {e}\n",
                    o.instance, o.instance_seed, o.scheme_seed
                ));
            }
        }
        any_ok |= outcomes.iter().any(|o| o.error.is_none());
        let summary = harness::summarize(&outcomes, a.quantile);
        for s in &summary {
            let within = within_bound(&outcomes, s.t, a);
            body.push_str(&format!(
                "{label},{},{},{},{},{},{}\n",
                s.t,
                s.count,
                num(s.median),
                num(s.q_lo),
                num(s.q_hi),
                opt_num(within)
            ));
        }
        if let Family::RandomKappa { kappa, .. } = cfg.family {
            let sk = kappa.sqrt();
            let (lo, hi) = (
                sk.round() as usize,
                ((2.0 * sk).round() as usize).min(a.t_max),
            );
            let fit = harness::summary_slope(&summary, lo, hi)
                .map(num)
                .unwrap_or_else(|_| "n/a".into());
            csv.push_str(&format!(
                "# fit kappa={label} slope of log(median gap) over t in [{lo},{hi}]: {fit} (reference {})\n",
                num(-4.0 / sk)
            ));
            let top = ((sk / 4.0).floor() as usize).min(a.t_max);
            let expo = harness::summary_exponent(&summary, 5, top)
                .map(num)
                .unwrap_or_else(|_| "n/a".into());
            csv.push_str(&format!(
                "# fit kappa={label} exponent of median gap over t in [5,{top}]: {expo}\n"
            ));
        }
    }
    csv.push_str(&body);
    emit(a.out.as_deref(), &csv)?;
    if !any_ok {
        return Err(Failure::Solver("every run in the ensemble failed".into()));
    }
    Ok(true)
}

/// Fraction of runs whose gap at `t` is within the bound for the scheme.
fn within_bound(outcomes: &[harness::RunOutcome], t: usize, a: &BenchArgs) -> Option<f64> {
    let mut hit = 0usize;
    let mut total = 0usize;
    for o in outcomes {
        let (Some(m), Some(gap)) = (o.meta, o.rows.iter().find(|r| r.t == t).and_then(|r| r.gap))
        else {
            continue;
        };
        let ub = match a.scheme {
            Scheme::Plain => {
                bounds::ub_linear(t, m.lambda_min, m.lambda_max, m.lambda_star, m.initial_gap).min(
                    bounds::ub_sublinear(
                        t,
                        m.lambda_min,
                        m.lambda_max,
                        m.s_norm,
                        m.b_norm,
                        m.umin_dot_b,
                    ),
                )
            }
            Scheme::Joint => {
                bounds::ub_joint(t, m.lambda_min, m.lambda_max, m.s_norm, m.d, a.delta)
            }
            Scheme::Perturb => {
                let sigma = a.sigma?;
                // ‖b + σv‖ ≤ ‖b‖ + σ and the bound increases with ‖b̃‖
                bounds::ub_perturbed(
                    t,
                    m.lambda_min,
                    m.lambda_max,
                    m.s_norm,
                    m.b_norm + sigma,
                    sigma,
                    m.d,
                    a.delta,
                )
            }
        };
        total += 1;
        if gap <= ub * (1.0 + harness::UB_SLACK) {
            hit += 1;
        }
    }
    (total > 0).then(|| hit as f64 / total as f64)
}

fn cmd_verify(cmd: &Command, a: &VerifyArgs) -> Outcome {
    let chosen: Vec<&str> = [
        a.suite.as_deref(),
        a.lemma2.then_some("krylov-dominance"),
        a.lemma3.then_some("eigvec"),
    ]
    .into_iter()
    .flatten()
    .collect();
    if chosen.is_empty() {
        return param(format!(
            "choose --suite (one of {}), --lemma2 or --lemma3",
            harness::SUITES.join(", ")
        ));
    }
    let mut reports: Vec<BoundReport> = vec![];
    for name in chosen {
        reports.extend(harness::run_suite(name, a.seed, a.jobs)?);
    }
    let mut csv = csv_header(cmd);
    csv.push_str(BoundReport::csv_header());
    csv.push('\n');
    for r in &reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    emit(a.out.as_deref(), &csv)?;
    let failed = reports
        .iter()
        .filter(|r| r.verdict != Verdict::Satisfied)
        .count();
    eprintln!("{} comparisons, {failed} not satisfied", reports.len());
    Ok(failed == 0)
}

fn cmd_cheb(cmd: &Command, a: &ChebArgs) -> Outcome {
    let (cert, bracket) = match a.kind {
        KindArg::T => (
            chebyshev::minimax_t(a.n, a.alpha, a.beta)?,
            chebyshev::minimax_t_bounds(a.n, a.beta / a.alpha),
        ),
        KindArg::U => (
            chebyshev::minimax_u(a.n, a.alpha, a.beta)?,
            chebyshev::minimax_u_bounds(a.n, a.alpha, a.beta / a.alpha),
        ),
    };
    let body = serde_json::json!({
        "certificate": cert,
        "kind": match a.kind { KindArg::T => ChebKind::First, KindArg::U => ChebKind::Second },
        "closed_form_bounds": [bracket.0, bracket.1],
        "equioscillation_error": cert.equioscillation_error(),
        "dual_value": cert.dual_value(),
    });
    emit(a.out.as_deref(), &with_config(cmd, body))?;
    Ok(true)
}

/// Recovers the configuration from a CSV `# run_config` line or a JSON
/// `run_config` field.
fn recorded_config(path: &Path) -> Result<Command, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parameter(format!("cannot read {}: {e}", path.display())))?;
    let bad =
        |e: serde_json::Error| Failure::Parameter(format!("malformed run configuration: {e}"));
    if let Some(line) = text.lines().find_map(|l| l.strip_prefix("# run_config ")) {
        return serde_json::from_str(line).map_err(bad);
    }
    let v: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
    match v.get("run_config") {
        Some(c) => serde_json::from_value(c.clone()).map_err(bad),
        None => param(format!("{} carries no run configuration", path.display())),
    }
}

fn cmd_rerun(a: &RerunArgs) -> Outcome {
    let mut cmd = recorded_config(&a.file)?;
    if let Some(out) = &a.out {
        match &mut cmd {
            Command::Gen(g) => g.out = out.clone(),
            Command::Solve(s) => s.out = Some(out.clone()),
            Command::Bench(b) => b.out = Some(out.clone()),
            Command::Verify(v) => v.out = Some(out.clone()),
            Command::Cheb(c) => c.out = Some(out.clone()),
            Command::Rerun(_) => return param("nested rerun configuration"),
        }
    }
    run(&cmd)
}

/// Output paths are recorded too, so a rerun writes to the same places
/// unless `--out` overrides them.
fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Gen(a) => cmd_gen(cmd, a),
        Command::Solve(a) => cmd_solve(cmd, a),
        Command::Bench(a) => cmd_bench(cmd, a),
        Command::Verify(a) => cmd_verify(cmd, a),
        Command::Cheb(a) => cmd_cheb(cmd, a),
        Command::Rerun(a) => cmd_rerun(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Parameter(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
