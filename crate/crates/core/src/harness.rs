//! Ensemble runs, summary statistics, rate fits and the verification suites
//! that bind generators, solvers and bounds together.

use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines;
use crate::bounds::{self, BoundInputs, BoundReport, BoundSense};
use crate::chebyshev::{self, cheb_eval, ChebKind};
use crate::error::{Error, Result};
use crate::instances::{self, InstanceSpec};
use crate::lanczos::Reorth;
use crate::operators::{Dense, SymmetricOperator};
use crate::randomize;
use crate::secular::SecularOptions;
use crate::subproblem::{
    self, solve_dense_exact, Instance, Reference, ReferenceKind, Solution, SolveOptions, TraceMode,
    TraceRow, TrsInstance,
};
use crate::vecops;

// ---------------------------------------------------------------- statistics

/// Quantile by linear interpolation between order statistics.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Least-squares line through `(x, y)`: `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::param("a line fit needs at least two paired points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::param("a line fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Slope of `log(gap)` against `t`, over rows with positive gaps.
pub fn fit_log_linear(t: &[f64], gap: &[f64]) -> Result<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(gap)
        .filter(|(_, g)| **g > 0.0 && g.is_finite())
        .map(|(t, g)| (*t, g.ln()))
        .unzip();
    Ok(fit_line(&x, &y)?.0)
}

/// Exponent `p` in `gap ∝ t^p`, from a log–log fit.
pub fn fit_power(t: &[f64], gap: &[f64]) -> Result<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(gap)
        .filter(|(t, g)| **t > 0.0 && **g > 0.0 && g.is_finite())
        .map(|(t, g)| (t.ln(), g.ln()))
        .unzip();
    Ok(fit_line(&x, &y)?.0)
}

// ---------------------------------------------------------------- ensembles

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    RandomKappa { d: usize, kappa: f64 },
    HardCase { d: usize, gamma: f64, tau: f64 },
}

impl Family {
    pub fn generate(&self, seed: u64) -> Result<InstanceSpec> {
        match *self {
            Family::RandomKappa { d, kappa } => instances::gen_random_kappa(d, kappa, seed),
            Family::HardCase { d, gamma, tau } => instances::gen_hard_case(d, gamma, tau, seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// `K_t(A, b)`.
    Plain,
    /// `K_{⌊t/2⌋}(A, {b, v})` with `v` uniform on the sphere.
    Joint,
    /// `K_t(A, b + σv)`.
    Perturb,
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Scheme::Plain),
            "joint" => Ok(Scheme::Joint),
            "perturb" => Ok(Scheme::Perturb),
            other => Err(Error::param(format!(
                "unknown scheme '{other}' (plain, joint, perturb)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// The instance as generated.
    Native,
    /// Its trust-region equivalent, `R = ‖s^cr‖`.
    Trs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub family: Family,
    pub problem: Problem,
    pub instances: usize,
    /// Randomization seeds per instance (joint and perturb schemes).
    pub seeds_per_instance: usize,
    pub t_max: usize,
    /// Orders at which to solve; every order when empty.
    pub orders: Vec<usize>,
    pub scheme: Scheme,
    pub sigma: Option<f64>,
    pub seed: u64,
    pub jobs: usize,
    pub tol_newton: f64,
    pub max_newton: usize,
    pub reorth: Reorth,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        let sec = SecularOptions::default();
        Self {
            family: Family::RandomKappa {
                d: 1000,
                kappa: 100.0,
            },
            problem: Problem::Native,
            instances: 10,
            seeds_per_instance: 1,
            t_max: 100,
            orders: vec![],
            scheme: Scheme::Plain,
            sigma: None,
            seed: 0,
            jobs: 1,
            tol_newton: sec.tol,
            max_newton: sec.max_iters,
            reorth: Reorth::Full,
        }
    }
}

/// Spectral data of a generated instance, for evaluating bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub d: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_star: f64,
    pub s_norm: f64,
    pub b_norm: f64,
    pub umin_dot_b: f64,
    /// `f(0) − f(s*)` of the problem actually solved.
    pub initial_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub instance: usize,
    pub instance_seed: u64,
    pub scheme_seed: u64,
    pub meta: Option<InstanceMeta>,
    pub rows: Vec<TraceRow>,
    pub error: Option<String>,
}

/// Turns a generated cubic instance into the problem to solve, its certified
/// reference, and the data the bounds need.
pub fn prepare(
    spec: &InstanceSpec,
    problem: Problem,
) -> Result<(Instance, Reference, InstanceMeta)> {
    let inst = spec.to_instance()?;
    let cert = spec
        .certified
        .as_ref()
        .ok_or_else(|| Error::param("instance carries no certified solution"))?;
    let a = inst.operator().clone();
    let (lmin, lmax, umin_dot_b) = match a.diagonal() {
        Some(diag) => {
            let mut imin = 0;
            for (i, e) in diag.iter().enumerate() {
                if *e < diag[imin] {
                    imin = i;
                }
            }
            let lmax = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (diag[imin], lmax, inst.b()[imin])
        }
        None => {
            let dense = subproblem::solve_dense_detailed(&inst)?;
            (dense.lambda_min, dense.lambda_max, dense.umin_dot_b)
        }
    };
    let s_norm = vecops::norm(&cert.solution);
    let (inst, value) = match problem {
        Problem::Native => (inst, cert.value),
        Problem::Trs => {
            let trs = TrsInstance::new(a, inst.b().to_vec(), s_norm)?;
            let inst = Instance::Trs(trs);
            let v = inst.objective(&cert.solution)?;
            (inst, v)
        }
    };
    let meta = InstanceMeta {
        d: spec.dim(),
        lambda_min: lmin,
        lambda_max: lmax,
        lambda_star: cert.lambda,
        s_norm,
        b_norm: vecops::norm(inst.b()),
        umin_dot_b,
        initial_gap: -value,
    };
    let reference = Reference::Exact {
        s: cert.solution.clone(),
        lambda: cert.lambda,
        value,
        kind: ReferenceKind::Certified,
    };
    Ok((inst, reference, meta))
}

/// Instance, reference and bound data for any instance file: the certified
/// optimum when present, else the dense oracle when the dimension allows.
pub fn analyze(spec: &InstanceSpec) -> Result<(Instance, Option<Reference>, Option<InstanceMeta>)> {
    if spec.certified.is_some() {
        let (inst, reference, meta) = prepare(spec, Problem::Native)?;
        return Ok((inst, Some(reference), Some(meta)));
    }
    let inst = spec.to_instance()?;
    match subproblem::solve_dense_detailed(&inst) {
        Ok(dense) => {
            let sol = dense.solution;
            let meta = InstanceMeta {
                d: spec.dim(),
                lambda_min: dense.lambda_min,
                lambda_max: dense.lambda_max,
                lambda_star: sol.lambda,
                s_norm: vecops::norm(&sol.x),
                b_norm: vecops::norm(inst.b()),
                umin_dot_b: dense.umin_dot_b,
                initial_gap: -sol.value,
            };
            let reference = Reference::exact(&sol, ReferenceKind::Oracle);
            Ok((inst, Some(reference), Some(meta)))
        }
        Err(Error::TooLarge { .. }) => Ok((inst, None, None)),
        Err(e) => Err(e),
    }
}

/// Solves with the given scheme; the perturbed scheme measures gaps against
/// whatever reference `opts` carries, normally the unperturbed optimum.
pub fn solve_scheme(
    inst: &Instance,
    scheme: Scheme,
    t_max: usize,
    sigma: Option<f64>,
    seed: u64,
    opts: &SolveOptions,
) -> Result<(Solution, Vec<TraceRow>)> {
    let (sol, trace) = match scheme {
        Scheme::Plain => subproblem::solve_krylov(inst, t_max, opts)?,
        Scheme::Joint => {
            let (sol, trace, _) = randomize::solve_joint_krylov(inst, t_max, seed, opts)?;
            (sol, trace)
        }
        Scheme::Perturb => {
            let sigma = sigma.ok_or_else(|| Error::param("the perturb scheme needs sigma"))?;
            let p = randomize::perturb_instance(inst, sigma, seed)?;
            subproblem::solve_krylov(&p.instance, t_max, opts)?
        }
    };
    Ok((sol, trace.rows))
}

fn run_one(cfg: &EnsembleConfig, index: usize, instance_seed: u64, scheme_seed: u64) -> RunOutcome {
    let mut out = RunOutcome {
        instance: index,
        instance_seed,
        scheme_seed,
        meta: None,
        rows: vec![],
        error: None,
    };
    let result = (|| -> Result<(InstanceMeta, Vec<TraceRow>)> {
        let spec = cfg.family.generate(instance_seed)?;
        let (inst, reference, meta) = prepare(&spec, cfg.problem)?;
        let opts = SolveOptions {
            secular: SecularOptions {
                tol: cfg.tol_newton,
                max_iters: cfg.max_newton,
            },
            reorth: cfg.reorth,
            trace: if cfg.orders.is_empty() {
                TraceMode::Every
            } else {
                TraceMode::Orders(cfg.orders.clone())
            },
            reference: Some(reference),
            kkt: false,
        };
        let (_, rows) = solve_scheme(&inst, cfg.scheme, cfg.t_max, cfg.sigma, scheme_seed, &opts)?;
        Ok((meta, rows))
    })();
    match result {
        Ok((meta, rows)) => {
            out.meta = Some(meta);
            out.rows = rows;
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

/// Runs every (instance, seed) pair; failures are recorded per run and the
/// ensemble continues. Results are ordered and independent of `jobs`.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<Vec<RunOutcome>> {
    if cfg.instances == 0 || cfg.seeds_per_instance == 0 {
        return Err(Error::param("empty ensemble"));
    }
    if cfg.t_max == 0 {
        return Err(Error::param("t_max must be at least 1"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut jobs = Vec::with_capacity(cfg.instances * cfg.seeds_per_instance);
    for i in 0..cfg.instances {
        let inst_seed: u64 = rng.gen();
        for _ in 0..cfg.seeds_per_instance {
            jobs.push((i, inst_seed, rng.gen::<u64>()));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::param(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        jobs.par_iter()
            .map(|&(i, s1, s2)| run_one(cfg, i, s1, s2))
            .collect()
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub t: usize,
    pub count: usize,
    pub median: f64,
    pub q_lo: f64,
    pub q_hi: f64,
}

/// Median and `(q, 1 − q)` quantiles of the gap at each order.
pub fn summarize(outcomes: &[RunOutcome], q: f64) -> Vec<SummaryRow> {
    let mut by_t: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for o in outcomes {
        for r in &o.rows {
            if let Some(g) = r.gap {
                by_t.entry(r.t).or_default().push(g);
            }
        }
    }
    by_t.into_iter()
        .map(|(t, gaps)| SummaryRow {
            t,
            count: gaps.len(),
            median: median(&gaps),
            q_lo: quantile(&gaps, q),
            q_hi: quantile(&gaps, 1.0 - q),
        })
        .collect()
}

/// Fitted slope of `log(median gap)` over `t ∈ [lo, hi]`.
pub fn summary_slope(rows: &[SummaryRow], lo: usize, hi: usize) -> Result<f64> {
    let (t, g): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.t >= lo && r.t <= hi)
        .map(|r| (r.t as f64, r.median))
        .unzip();
    fit_log_linear(&t, &g)
}

/// Fitted exponent of `median gap ∝ t^p` over `t ∈ [lo, hi]`.
pub fn summary_exponent(rows: &[SummaryRow], lo: usize, hi: usize) -> Result<f64> {
    let (t, g): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.t >= lo && r.t <= hi)
        .map(|r| (r.t as f64, r.median))
        .unzip();
    fit_power(&t, &g)
}

// ---------------------------------------------------------------- minimax oracle

/// Bracket `[lower, upper]` on a weighted minimax value from an exchange
/// iteration on a fine grid, independent of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaxBracket {
    /// Smallest alternating error on the final reference (de la Vallée Poussin).
    pub lower: f64,
    /// Largest error of the final polynomial on the refined grid.
    pub upper: f64,
    pub iterations: usize,
}

struct Weighted {
    kind: ChebKind,
    alpha: f64,
    beta: f64,
}

impl Weighted {
    fn w(&self, x: f64) -> f64 {
        match self.kind {
            ChebKind::First => 1.0,
            ChebKind::Second => (x - self.alpha).max(0.0).sqrt(),
        }
    }

    fn z(&self, x: f64) -> f64 {
        (2.0 * x - self.alpha - self.beta) / (self.beta - self.alpha)
    }

    fn basis(&self, j: usize, x: f64) -> f64 {
        cheb_eval(ChebKind::First, j, self.z(x))
    }

    fn err(&self, c: &[f64], x: f64) -> f64 {
        let p: f64 = c
            .iter()
            .enumerate()
            .map(|(j, cj)| cj * self.basis(j, x))
            .sum();
        self.w(x) * (1.0 - x * p)
    }
}

/// Golden-section maximization of `|e|` on `[a, b]`.
fn refine_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1).abs(), f(x2).abs());
    for _ in 0..80 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1).abs();
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2).abs();
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Alternating extrema of `e` on the grid: one per maximal constant-sign run,
/// trimmed to `keep` points while preserving alternation.
fn alternating_extrema(es: &[f64], keep: usize) -> Vec<usize> {
    let mut picks: Vec<usize> = vec![];
    let mut sign = 0.0f64;
    for (i, e) in es.iter().enumerate() {
        if *e == 0.0 {
            continue;
        }
        let s = e.signum();
        if s != sign {
            picks.push(i);
            sign = s;
        } else if let Some(last) = picks.last_mut() {
            if e.abs() > es[*last].abs() {
                *last = i;
            }
        }
    }
    while picks.len() > keep {
        // drop the weaker end, or the weakest interior adjacent pair
        let n = picks.len();
        let amp = |k: usize| es[picks[k]].abs();
        if n - keep == 1
            || amp(0).min(amp(n - 1)) <= (1..n - 1).map(amp).fold(f64::INFINITY, f64::min)
        {
            if amp(0) < amp(n - 1) {
                picks.remove(0);
            } else {
                picks.pop();
            }
        } else {
            let (k, _) = (1..n - 1)
                .map(|k| (k, amp(k)))
                .fold(
                    (1, f64::INFINITY),
                    |acc, (k, a)| if a < acc.1 { (k, a) } else { acc },
                );
            let drop_next = k + 1 < n - 1 && amp(k + 1) < amp(k - 1);
            if drop_next {
                picks.drain(k..=k + 1);
            } else {
                picks.drain(k - 1..=k);
            }
        }
    }
    picks
}

/// Exchange iteration for `min_{deg p < n} max_{[α,β]} w(x)|1 − x p(x)|`.
pub fn minimax_exchange(kind: ChebKind, n: usize, alpha: f64, beta: f64) -> Result<MinimaxBracket> {
    if n == 0 || !(alpha > 0.0) || !(beta > alpha) {
        return Err(Error::param(
            "exchange oracle needs n >= 1 and 0 < alpha < beta",
        ));
    }
    let prob = Weighted { kind, alpha, beta };
    let grid_n = 20_000;
    let xs: Vec<f64> = (0..grid_n)
        .map(|i| {
            let c = (std::f64::consts::PI * i as f64 / (grid_n - 1) as f64).cos();
            0.5 * (alpha + beta) - 0.5 * (beta - alpha) * c
        })
        .collect();
    let mut reference: Vec<f64> = (0..=n)
        .map(|k| {
            let c = (std::f64::consts::PI * (k as f64 + 0.5) / (n + 1) as f64).cos();
            0.5 * (alpha + beta) - 0.5 * (beta - alpha) * c
        })
        .collect();
    let mut best = MinimaxBracket {
        lower: 0.0,
        upper: f64::INFINITY,
        iterations: 0,
    };
    for it in 1..=100 {
        let m = DMatrix::from_fn(n + 1, n + 1, |i, j| {
            let x = reference[i];
            if j < n {
                prob.w(x) * x * prob.basis(j, x)
            } else if i % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        });
        let rhs = DVector::from_fn(n + 1, |i, _| prob.w(reference[i]));
        let sol = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Certificate("exchange reference system is singular".into()))?;
        let c: Vec<f64> = sol.iter().take(n).cloned().collect();
        let f = |x: f64| prob.err(&c, x);
        let es: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let picks = alternating_extrema(&es, n + 1);
        if picks.len() < n + 1 {
            return Err(Error::Certificate("exchange lost alternation".into()));
        }
        let mut new_ref = Vec::with_capacity(n + 1);
        let mut vals = Vec::with_capacity(n + 1);
        for &i in &picks {
            let a = xs[i.saturating_sub(1)];
            let b = xs[(i + 1).min(grid_n - 1)];
            let (x, v) = refine_max(&f, a, b);
            let (x, v) = if v.abs() >= es[i].abs() {
                (x, v)
            } else {
                (xs[i], es[i])
            };
            new_ref.push(x);
            vals.push(v);
        }
        let lower = vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        let upper = es
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
            .max(vals.iter().map(|v| v.abs()).fold(0.0, f64::max));
        if upper - lower < best.upper - best.lower {
            best = MinimaxBracket {
                lower,
                upper,
                iterations: it,
            };
        }
        reference = new_ref;
        if upper - lower <= 1e-12 * upper {
            break;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------- verify suites

pub const SUITES: &[&str] = &[
    "empty",
    "chebyshev",
    "lb-linear",
    "lb-convex",
    "lb-nonconvex",
    "upper-bounds",
    "krylov-dominance",
    "eigvec",
];

/// Absolute margin by which a measured gap must exceed a certified lower bound.
pub const LB_MARGIN: f64 = 1e-10;
/// Relative slack allowed on upper bounds.
pub const UB_SLACK: f64 = 1e-6;
/// Relative slack on comparisons between two measured gaps that tie exactly
/// whenever both points coincide.
pub const TIE_SLACK: f64 = 1e-10;
/// Secular tolerance for ensembles compared against bounds far below the
/// resolution the default tolerance gives.
pub const BOUND_NEWTON_TOL: f64 = 1e-14;

fn gap_at(inst: &Instance, reference: Reference, t: usize) -> Result<f64> {
    let opts = SolveOptions {
        trace: TraceMode::Orders(vec![t]),
        reference: Some(reference),
        ..Default::default()
    };
    let (_, trace) = subproblem::solve_krylov(inst, t, &opts)?;
    trace
        .rows
        .last()
        .and_then(|r| r.gap)
        .ok_or_else(|| Error::InternalInvariantViolation("trace row without gap".into()))
}

fn upper_reports(meta: &InstanceMeta, t: usize, gap: f64, tag: &str) -> Vec<BoundReport> {
    let inputs = BoundInputs {
        t: Some(t),
        lambda_min: Some(meta.lambda_min),
        lambda_max: Some(meta.lambda_max),
        lambda_star: Some(meta.lambda_star),
        initial_gap: Some(meta.initial_gap),
        radius: Some(meta.s_norm),
        b_norm: Some(meta.b_norm),
        umin_dot_b: Some(meta.umin_dot_b),
        d: Some(meta.d),
        ..Default::default()
    };
    vec![
        BoundReport::new(
            &format!("{tag}ub_linear"),
            BoundSense::Upper,
            inputs.clone(),
            bounds::ub_linear(
                t,
                meta.lambda_min,
                meta.lambda_max,
                meta.lambda_star,
                meta.initial_gap,
            ),
        )
        .compare(gap, UB_SLACK, 0.0),
        BoundReport::new(
            &format!("{tag}ub_sublinear"),
            BoundSense::Upper,
            inputs,
            bounds::ub_sublinear(
                t,
                meta.lambda_min,
                meta.lambda_max,
                meta.s_norm,
                meta.b_norm,
                meta.umin_dot_b,
            ),
        )
        .compare(gap, UB_SLACK, 0.0),
    ]
}

/// `Δ` that puts the linear lower bound near one, so the comparison is made
/// well above the absolute margin.
pub fn lb_linear_delta(t: usize, lambda_min: f64, lambda_max: f64, lambda_star: f64) -> f64 {
    let kappa = (lambda_max + lambda_star) / (lambda_min + lambda_star);
    1.0 / bounds::lb_linear(t, kappa, lambda_star, lambda_min, 1.0)
}

/// Lower-bound sandwich on the linear-rate adversarial family.
pub fn sandwich_lb_linear(t: usize, kappa: f64) -> Result<Vec<BoundReport>> {
    let (lmin, lstar) = (-0.5, 1.0);
    let lmax = kappa * (lmin + lstar) - lstar;
    let delta = lb_linear_delta(t, lmin, lmax, lstar);
    let (spec, lb) = instances::gen_lb_linear(t, lmin, lmax, lstar, delta)?;
    let (inst, reference, meta) = prepare(&spec, Problem::Native)?;
    let gap = gap_at(&inst, reference, t)?;
    let inputs = BoundInputs {
        t: Some(t),
        kappa: Some(kappa),
        lambda_min: Some(lmin),
        lambda_star: Some(lstar),
        initial_gap: Some(delta),
        ..Default::default()
    };
    let tag = format!("lb_linear[k={kappa}]/");
    let mut out = vec![
        BoundReport::new(&format!("{tag}lb_linear"), BoundSense::Lower, inputs, lb)
            .compare(gap, 0.0, LB_MARGIN),
    ];
    out.extend(upper_reports(&meta, t, gap, &tag));
    Ok(out)
}

pub fn sandwich_lb_convex(t: usize) -> Result<Vec<BoundReport>> {
    let (lmin, lmax, r) = (-0.5, 1.0, 2.0);
    let (spec, lb) = instances::gen_lb_convex(t, lmin, lmax, r, None)?;
    let (inst, reference, meta) = prepare(&spec, Problem::Native)?;
    let gap = gap_at(&inst, reference, t)?;
    let inputs = BoundInputs {
        t: Some(t),
        lambda_min: Some(lmin),
        lambda_max: Some(lmax),
        radius: Some(r),
        ..Default::default()
    };
    let tag = "lb_convex/";
    let mut out = vec![
        BoundReport::new(&format!("{tag}lb_convex"), BoundSense::Lower, inputs, lb)
            .compare(gap, 0.0, LB_MARGIN),
    ];
    out.extend(upper_reports(&meta, t, gap, tag));
    Ok(out)
}

pub fn sandwich_lb_nonconvex(t: usize) -> Result<Vec<BoundReport>> {
    let (lmin, lmax, r, tau) = (-1.0, 1.0, 1.0, 100.0);
    let (spec, lb) = instances::gen_lb_nonconvex(t, lmin, lmax, r, tau, None)?;
    let (inst, reference, meta) = prepare(&spec, Problem::Native)?;
    let gap = gap_at(&inst, reference, t)?;
    let inputs = BoundInputs {
        t: Some(t),
        lambda_min: Some(lmin),
        lambda_max: Some(lmax),
        radius: Some(r),
        tau: Some(tau),
        ..Default::default()
    };
    let tag = "lb_nonconvex/";
    let mut out =
        vec![
            BoundReport::new(&format!("{tag}lb_nonconvex"), BoundSense::Lower, inputs, lb)
                .compare(gap, 0.0, LB_MARGIN),
        ];
    out.extend(upper_reports(&meta, t, gap, tag));
    Ok(out)
}

/// Closed-form minimax values against the exchange oracle.
pub fn chebyshev_reports(n_max: usize, kappas: &[f64]) -> Result<Vec<BoundReport>> {
    let mut out = vec![];
    for &kappa in kappas {
        for n in 1..=n_max {
            for kind in [ChebKind::First, ChebKind::Second] {
                let (alpha, beta) = (1.0, kappa);
                let closed = match kind {
                    ChebKind::First => chebyshev::minimax_t_value(n, alpha, beta),
                    ChebKind::Second => chebyshev::minimax_u_value(n, alpha, beta),
                };
                let br = minimax_exchange(kind, n, alpha, beta)?;
                let name = format!(
                    "minimax_{}[n={n},k={kappa}]",
                    if kind == ChebKind::First { "t" } else { "u" }
                );
                let inputs = BoundInputs {
                    t: Some(n),
                    kappa: Some(kappa),
                    ..Default::default()
                };
                let inside = closed >= br.lower * (1.0 - 1e-9) && closed <= br.upper * (1.0 + 1e-9);
                let tight = (br.upper - br.lower) <= 1e-6 * closed;
                let mut rep = BoundReport::new(&name, BoundSense::Upper, inputs, closed);
                rep.measured = Some(br.upper);
                rep.verdict = if inside && tight {
                    bounds::Verdict::Satisfied
                } else {
                    bounds::Verdict::Violated
                };
                out.push(rep);
            }
        }
    }
    Ok(out)
}

fn random_psd(d: usize, seed: u64) -> (Dense, Vec<f64>) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let mut data = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            data[i * d + j] = (0..d).map(|k| g[k][i] * g[k][j]).sum::<f64>() / d as f64;
        }
    }
    let v = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (Dense::from_row_major(d, data).expect("square"), v)
}

/// Accelerated projected gradient against its rate and the Krylov optimum.
pub fn dominance_reports(
    instances: usize,
    d: usize,
    t_max: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    let mut out = vec![];
    for k in 0..instances {
        let (m, v) = random_psd(d, seed.wrapping_add(k as u64));
        let r = 0.5 + (k % 4) as f64 * 0.5;
        let op: Arc<dyn SymmetricOperator> = Arc::new(m);
        let trs = TrsInstance::new(op.clone(), v.clone(), r)?;
        let inst = Instance::Trs(trs);
        let opt = solve_dense_exact(&inst)?;
        let (_, trace) = baselines::apg_ball(op.as_ref(), &v, r, t_max)?;
        let opts = SolveOptions {
            secular: SecularOptions {
                tol: BOUND_NEWTON_TOL,
                ..Default::default()
            },
            trace: TraceMode::Every,
            reference: Some(Reference::exact(&opt, ReferenceKind::Oracle)),
            ..Default::default()
        };
        let (_, ktrace) = subproblem::solve_krylov(&inst, t_max, &opts)?;
        let tie = 16.0 * f64::EPSILON * (1.0 + opt.value.abs());
        for t in 1..=t_max {
            let gap = subproblem::gap_identity(
                op.as_ref(),
                inst.regularizer(),
                &opt.x,
                opt.lambda,
                &trace.steps[t].x,
            )?;
            let inputs = BoundInputs {
                t: Some(t),
                radius: Some(r),
                d: Some(d),
                ..Default::default()
            };
            let rate = 4.0 * trace.lipschitz * r * r / ((t + 1) * (t + 1)) as f64;
            out.push(
                BoundReport::new(
                    &format!("apg_rate[{k}]"),
                    BoundSense::Upper,
                    inputs.clone(),
                    rate,
                )
                .compare(gap, 0.0, 0.0),
            );
            if let Some(kgap) = ktrace
                .rows
                .iter()
                .find(|row| row.t == t)
                .and_then(|row| row.gap)
            {
                // the Krylov optimum is a lower bound on the APG gap
                out.push(
                    BoundReport::new(
                        &format!("krylov_dominance[{k}]"),
                        BoundSense::Upper,
                        inputs,
                        gap,
                    )
                    .compare(kgap, TIE_SLACK, tie),
                );
            }
        }
    }
    Ok(out)
}

/// Smallest Ritz value on adversarial eigenvector instances, between the
/// certified lower bound and the Lanczos upper bound.
pub fn eigvec_reports(ts: &[usize], tau: f64, norm_m: f64) -> Result<Vec<BoundReport>> {
    let mut out = vec![];
    for &t in ts {
        let e = instances::gen_eigvec_lb(t, t + 1, norm_m, tau)?;
        let op = e.operator()?;
        let check = baselines::eigvec_check(op.as_ref(), &e.u, &e.v, t, norm_m)?;
        let inputs = BoundInputs {
            t: Some(t),
            tau: Some(tau),
            ..Default::default()
        };
        out.push(
            BoundReport::new("eigvec_lb", BoundSense::Lower, inputs.clone(), e.bound)
                .compare(check.ritz, 0.0, 0.0),
        );
        out.push(
            BoundReport::new("eigvec_ub", BoundSense::Upper, inputs, check.upper)
                .compare(check.ritz, 0.0, 0.0),
        );
    }
    Ok(out)
}

/// Measured gaps on a random ensemble never exceed the upper bounds.
pub fn upper_bound_reports(
    d: usize,
    kappa: f64,
    instances: usize,
    t_max: usize,
    seed: u64,
    jobs: usize,
) -> Result<Vec<BoundReport>> {
    let cfg = EnsembleConfig {
        family: Family::RandomKappa { d, kappa },
        instances,
        t_max,
        seed,
        jobs,
        tol_newton: BOUND_NEWTON_TOL,
        ..Default::default()
    };
    let mut out = vec![];
    for o in run_ensemble(&cfg)? {
        if let Some(err) = &o.error {
            return Err(Error::param(format!(
                "instance {} failed: {err}",
                o.instance
            )));
        }
        let meta = o.meta.expect("successful run has metadata");
        for r in &o.rows {
            let gap = r.gap.expect("certified reference");
            let ub = bounds::ub_linear(
                r.t,
                meta.lambda_min,
                meta.lambda_max,
                meta.lambda_star,
                meta.initial_gap,
            )
            .min(bounds::ub_sublinear(
                r.t,
                meta.lambda_min,
                meta.lambda_max,
                meta.s_norm,
                meta.b_norm,
                meta.umin_dot_b,
            ));
            let inputs = BoundInputs {
                t: Some(r.t),
                kappa: Some(kappa),
                d: Some(d),
                ..Default::default()
            };
            out.push(
                BoundReport::new(
                    &format!("upper-bounds[{}]", o.instance),
                    BoundSense::Upper,
                    inputs,
                    ub,
                )
                .compare(gap, UB_SLACK, 0.0),
            );
        }
    }
    Ok(out)
}

/// Named verification suite at desk scale.
pub fn run_suite(name: &str, seed: u64, jobs: usize) -> Result<Vec<BoundReport>> {
    let mut out = vec![];
    match name {
        "empty" => {}
        "chebyshev" => out = chebyshev_reports(4, &[2.0, 10.0, 100.0])?,
        "lb-linear" => {
            for kappa in [10.0, 100.0] {
                for t in [5, 10, 20] {
                    out.extend(sandwich_lb_linear(t, kappa)?);
                }
            }
        }
        "lb-convex" => {
            for t in [5, 10, 20] {
                out.extend(sandwich_lb_convex(t)?);
            }
        }
        "lb-nonconvex" => {
            for t in [5, 10, 20] {
                out.extend(sandwich_lb_nonconvex(t)?);
            }
        }
        "upper-bounds" => out = upper_bound_reports(500, 100.0, 8, 60, seed, jobs)?,
        "krylov-dominance" => out = dominance_reports(4, 30, 50, seed)?,
        "eigvec" => out = eigvec_reports(&[5, 10, 20], 100.0, 1.0)?,
        other => {
            return Err(Error::param(format!(
                "unknown suite '{other}' (one of {})",
                SUITES.join(", ")
            )))
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;

    #[test]
    fn statistics() {
        let xs = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(median(&xs), 2.5);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 4.0);
        assert!(median(&[]).is_nan());
        let t: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let g: Vec<f64> = t.iter().map(|t| 3.0 * (-0.2 * t).exp()).collect();
        assert!((fit_log_linear(&t, &g).unwrap() + 0.2).abs() < 1e-12);
        let g: Vec<f64> = t.iter().map(|t| 5.0 * t.powf(-2.0)).collect();
        assert!((fit_power(&t, &g).unwrap() + 2.0).abs() < 1e-12);
        assert!(fit_line(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn exchange_matches_closed_forms() {
        for kappa in [2.0, 10.0, 100.0] {
            for n in 1..=4 {
                let br = minimax_exchange(ChebKind::First, n, 1.0, kappa).unwrap();
                let m = chebyshev::minimax_t_value(n, 1.0, kappa);
                assert!(
                    br.lower <= m * (1.0 + 1e-9) && m <= br.upper * (1.0 + 1e-9),
                    "T n={n} k={kappa} {br:?} {m}"
                );
                assert!(br.upper - br.lower <= 1e-6 * m);
                let br = minimax_exchange(ChebKind::Second, n, 1.0, kappa).unwrap();
                let m = chebyshev::minimax_u_value(n, 1.0, kappa);
                assert!(
                    br.lower <= m * (1.0 + 1e-9) && m <= br.upper * (1.0 + 1e-9),
                    "U n={n} k={kappa} {br:?} {m}"
                );
                assert!(br.upper - br.lower <= 1e-6 * m);
            }
        }
    }

    #[test]
    fn ensemble_is_deterministic_across_jobs() {
        let cfg = EnsembleConfig {
            family: Family::RandomKappa {
                d: 200,
                kappa: 50.0,
            },
            instances: 4,
            t_max: 20,
            seed: 5,
            ..Default::default()
        };
        let a = run_ensemble(&cfg).unwrap();
        let b = run_ensemble(&EnsembleConfig {
            jobs: 3,
            ..cfg.clone()
        })
        .unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|o| o.error.is_none() && o.rows.len() == 20));
        let s = summarize(&a, 0.1);
        assert_eq!(s.len(), 20);
        assert!(s
            .iter()
            .all(|r| r.count == 4 && r.q_lo <= r.median && r.median <= r.q_hi));
        assert!(run_ensemble(&EnsembleConfig {
            instances: 0,
            ..cfg
        })
        .is_err());
    }

    #[test]
    fn failures_are_recorded_per_run() {
        let cfg = EnsembleConfig {
            family: Family::RandomKappa { d: 50, kappa: 10.0 },
            instances: 2,
            t_max: 5,
            scheme: Scheme::Perturb,
            sigma: None,
            ..Default::default()
        };
        let out = run_ensemble(&cfg).unwrap();
        assert!(out.iter().all(|o| o.error.is_some()));
    }

    #[test]
    fn small_suites_pass() {
        for name in ["empty", "eigvec", "lb-convex"] {
            let reps = run_suite(name, 1, 1).unwrap();
            assert!(
                reps.iter().all(|r| r.verdict == Verdict::Satisfied),
                "{name}: {reps:?}"
            );
        }
        assert!(run_suite("nope", 0, 1).is_err());
    }
}
