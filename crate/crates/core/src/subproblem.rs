//! End-to-end solvers for
//!
//! ```text
//!   TRS:   min ½xᵀAx + bᵀx   s.t. ‖x‖ ≤ R
//!   cubic: min ½xᵀAx + bᵀx + ρ/3‖x‖³
//! ```
//!
//! over Krylov subspaces, plus a dense eigendecomposition oracle and KKT
//! diagnostics.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lanczos::{self, LanczosFactorization, Reorth};
use crate::operators::SymmetricOperator;
use crate::secular::{self, ReducedMatrix, ReducedSolution, SecularOptions};
use crate::tridiag::TriDiag;
use crate::vecops;

/// Largest dimension the dense oracle will eigendecompose.
pub const DENSE_CAP: usize = 4096;

/// The regularizer that distinguishes the two problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regularizer {
    /// Ball constraint `‖x‖ ≤ R`.
    Radius(f64),
    /// Cubic penalty `ρ/3‖x‖³`.
    Cubic(f64),
}

impl Regularizer {
    fn validate(self) -> Result<()> {
        match self {
            Regularizer::Radius(r) if !(r > 0.0 && r.is_finite()) => {
                Err(Error::param(format!("radius must be positive, got {r}")))
            }
            Regularizer::Cubic(rho) if !(rho > 0.0 && rho.is_finite()) => {
                Err(Error::param(format!("rho must be positive, got {rho}")))
            }
            _ => Ok(()),
        }
    }

    /// Norm the solution must have for multiplier `lambda` (boundary case).
    fn target_norm(self, lambda: f64) -> f64 {
        match self {
            Regularizer::Radius(r) => r,
            Regularizer::Cubic(rho) => lambda / rho,
        }
    }

    fn penalty(self, xnorm: f64) -> f64 {
        match self {
            Regularizer::Radius(_) => 0.0,
            Regularizer::Cubic(rho) => rho / 3.0 * xnorm.powi(3),
        }
    }
}

#[derive(Clone)]
pub struct TrsInstance {
    pub a: Arc<dyn SymmetricOperator>,
    pub b: Vec<f64>,
    pub radius: f64,
}

#[derive(Clone)]
pub struct CubicInstance {
    pub a: Arc<dyn SymmetricOperator>,
    pub b: Vec<f64>,
    pub rho: f64,
}

#[derive(Clone)]
pub enum Instance {
    Trs(TrsInstance),
    Cubic(CubicInstance),
}

impl TrsInstance {
    pub fn new(a: Arc<dyn SymmetricOperator>, b: Vec<f64>, radius: f64) -> Result<Self> {
        check_dims(a.as_ref(), &b)?;
        Regularizer::Radius(radius).validate()?;
        Ok(Self { a, b, radius })
    }
}

impl CubicInstance {
    pub fn new(a: Arc<dyn SymmetricOperator>, b: Vec<f64>, rho: f64) -> Result<Self> {
        check_dims(a.as_ref(), &b)?;
        Regularizer::Cubic(rho).validate()?;
        Ok(Self { a, b, rho })
    }
}

fn check_dims(a: &dyn SymmetricOperator, b: &[f64]) -> Result<()> {
    if a.dim() != b.len() {
        return Err(Error::Dimension {
            expected: a.dim(),
            got: b.len(),
        });
    }
    Ok(())
}

impl From<TrsInstance> for Instance {
    fn from(i: TrsInstance) -> Self {
        Instance::Trs(i)
    }
}

impl From<CubicInstance> for Instance {
    fn from(i: CubicInstance) -> Self {
        Instance::Cubic(i)
    }
}

impl Instance {
    pub fn operator(&self) -> &Arc<dyn SymmetricOperator> {
        match self {
            Instance::Trs(i) => &i.a,
            Instance::Cubic(i) => &i.a,
        }
    }

    pub fn b(&self) -> &[f64] {
        match self {
            Instance::Trs(i) => &i.b,
            Instance::Cubic(i) => &i.b,
        }
    }

    pub fn regularizer(&self) -> Regularizer {
        match self {
            Instance::Trs(i) => Regularizer::Radius(i.radius),
            Instance::Cubic(i) => Regularizer::Cubic(i.rho),
        }
    }

    pub fn dim(&self) -> usize {
        self.b().len()
    }

    /// Same operator and regularizer with a different linear term.
    pub fn with_b(&self, b: Vec<f64>) -> Instance {
        match self {
            Instance::Trs(i) => Instance::Trs(TrsInstance {
                a: i.a.clone(),
                b,
                radius: i.radius,
            }),
            Instance::Cubic(i) => Instance::Cubic(CubicInstance {
                a: i.a.clone(),
                b,
                rho: i.rho,
            }),
        }
    }

    /// Objective at `x`; costs one operator application.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let ax = self.operator().apply(x)?;
        Ok(0.5 * vecops::dot(x, &ax)
            + vecops::dot(self.b(), x)
            + self.regularizer().penalty(vecops::norm(x)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktResiduals {
    /// `‖(A + λI)x + b‖ / max(1, ‖b‖)`
    pub stationarity: f64,
    /// `max(0, (−λ_min)₊ − λ)`
    pub sign_slack: f64,
    /// `|λ(R − ‖x‖)|` or `|ρ‖x‖ − λ|`
    pub complementarity: f64,
    /// `max(0, ‖x‖ − R)`; always zero for the cubic problem.
    pub feasibility: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.stationarity
            .max(self.sign_slack)
            .max(self.complementarity)
            .max(self.feasibility)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub value: f64,
    pub kkt: Option<KktResiduals>,
    pub matvecs: u64,
    /// Dimension of the subspace the point was found in.
    pub order: usize,
    pub breakdown: bool,
    pub hard_case: bool,
    pub newton_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub value: f64,
    pub lambda: f64,
    pub gap: Option<f64>,
    pub matvecs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceKind {
    /// Optimum certified by the instance generator.
    Certified,
    /// Dense eigendecomposition oracle.
    Oracle,
    /// Value at the largest computed order; a floor, not the optimum.
    SelfFloor,
    None,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub rows: Vec<TraceRow>,
    pub reference: Option<ReferenceKind>,
}

/// Known optimum used to compute gaps along a trace.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// Optimal value only; gaps are plain differences.
    Value { value: f64, kind: ReferenceKind },
    /// Global minimizer and multiplier; gaps use the exact error identity,
    /// which stays accurate far below the rounding level of the values.
    Exact {
        s: Vec<f64>,
        lambda: f64,
        value: f64,
        kind: ReferenceKind,
    },
    /// Gap relative to the final order of the same run.
    SelfFloor,
}

impl Reference {
    pub fn kind(&self) -> ReferenceKind {
        match self {
            Reference::Value { kind, .. } | Reference::Exact { kind, .. } => *kind,
            Reference::SelfFloor => ReferenceKind::SelfFloor,
        }
    }

    pub fn exact(sol: &Solution, kind: ReferenceKind) -> Self {
        Reference::Exact {
            s: sol.x.clone(),
            lambda: sol.lambda,
            value: sol.value,
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceMode {
    /// Solve only at the final order.
    Final,
    /// Solve at every order `1..=t`.
    Every,
    /// Solve at the listed orders (and the final one).
    Orders(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub secular: SecularOptions,
    pub reorth: Reorth,
    pub trace: TraceMode,
    pub reference: Option<Reference>,
    /// Fill [`Solution::kkt`] (costs about 51 extra operator applications).
    pub kkt: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            secular: SecularOptions::default(),
            reorth: Reorth::Full,
            trace: TraceMode::Final,
            reference: None,
            kkt: false,
        }
    }
}

pub(crate) fn solve_reduced<M: ReducedMatrix>(
    m: &M,
    g: &[f64],
    reg: Regularizer,
    opts: &SecularOptions,
    warm: Option<f64>,
) -> Result<ReducedSolution> {
    match reg {
        Regularizer::Radius(r) => secular::solve_trs(m, g, r, opts, warm),
        Regularizer::Cubic(rho) => secular::solve_cubic(m, g, rho, opts, warm),
    }
}

/// `½yᵀMy + gᵀy + penalty` in reduced coordinates.
pub(crate) fn reduced_value<M: ReducedMatrix>(
    m: &M,
    g: &[f64],
    reg: Regularizer,
    y: &[f64],
) -> f64 {
    let my = m.matvec(y);
    0.5 * vecops::dot(y, &my) + vecops::dot(g, y) + reg.penalty(vecops::norm(y))
}

/// Exact optimality gap `f(x) − f(s)` from the error identity.
///
/// With `b = −(A + λI)s` the gap equals `½eᵀ(A + λI)e` plus a norm term
/// (`e = x − s`): `λ/2·(‖s‖² − ‖x‖²)` for the trust region and
/// `ρ/6·(‖x‖ − ‖s‖)²(‖s‖ + 2‖x‖)` for the cubic problem. One operator
/// application.
pub fn gap_identity(
    a: &dyn SymmetricOperator,
    reg: Regularizer,
    s: &[f64],
    lambda: f64,
    x: &[f64],
) -> Result<f64> {
    let e = vecops::sub(x, s);
    let mut ae = a.apply(&e)?;
    vecops::axpy(lambda, &e, &mut ae);
    let quad = 0.5 * vecops::dot(&e, &ae);
    let (xn, sn) = (vecops::norm(x), vecops::norm(s));
    let tail = match reg {
        Regularizer::Radius(_) => 0.5 * lambda * (sn - xn) * (sn + xn),
        Regularizer::Cubic(rho) => rho / 6.0 * (xn - sn).powi(2) * (sn + 2.0 * xn),
    };
    Ok(quad + tail)
}

fn row_gap(
    a: &dyn SymmetricOperator,
    reg: Regularizer,
    reference: Option<&Reference>,
    value: f64,
    x: impl FnOnce() -> Vec<f64>,
) -> Result<Option<f64>> {
    Ok(match reference {
        Some(Reference::Value { value: v, .. }) => Some(value - v),
        Some(Reference::Exact { s, lambda, .. }) => Some(gap_identity(a, reg, s, *lambda, &x())?),
        Some(Reference::SelfFloor) | None => None,
    })
}

fn solve_orders(mode: &TraceMode, k: usize) -> Vec<usize> {
    let mut orders: Vec<usize> = match mode {
        TraceMode::Final => vec![],
        TraceMode::Every => (1..=k).collect(),
        TraceMode::Orders(list) => list
            .iter()
            .cloned()
            .filter(|j| *j >= 1 && *j <= k)
            .collect(),
    };
    orders.push(k);
    orders.sort_unstable();
    orders.dedup();
    orders
}

fn krylov(inst: &Instance, t: usize, opts: &SolveOptions) -> Result<(Solution, ConvergenceTrace)> {
    if t == 0 {
        return Err(Error::param("subspace order must be at least 1"));
    }
    let reg = inst.regularizer();
    reg.validate()?;
    let a = inst.operator().as_ref();
    let fact = lanczos::tridiagonalize(a, inst.b(), t, opts.reorth)?;
    solve_on_factorization(inst, &fact, opts)
}

/// Solves the reduced problems of an existing factorization.
pub fn solve_on_factorization(
    inst: &Instance,
    fact: &LanczosFactorization,
    opts: &SolveOptions,
) -> Result<(Solution, ConvergenceTrace)> {
    let reg = inst.regularizer();
    let a = inst.operator().as_ref();
    let k = fact.order();
    let orders = solve_orders(&opts.trace, k);
    let record = !matches!(opts.trace, TraceMode::Final);
    let mut rows = Vec::with_capacity(orders.len());
    let mut warm = None;
    let mut last: Option<(TriDiag, ReducedSolution, Vec<f64>)> = None;
    for &j in &orders {
        let tri = fact.tridiag_leading(j);
        let mut g = vec![0.0; j];
        g[0] = fact.bnorm;
        let red = solve_reduced(&tri, &g, reg, &opts.secular, warm)?;
        warm = Some(red.lambda);
        let value = reduced_value(&tri, &g, reg, &red.y);
        if record {
            let gap = row_gap(a, reg, opts.reference.as_ref(), value, || fact.lift(&red.y))?;
            rows.push(TraceRow {
                t: j,
                value,
                lambda: red.lambda,
                gap,
                matvecs: j as u64,
            });
        }
        last = Some((tri, red, g));
    }
    let (tri, red, g) = last.expect("at least the final order is solved");
    let x = fact.lift(&red.y);
    let value = reduced_value(&tri, &g, reg, &red.y);
    let mut sol = Solution {
        x,
        lambda: red.lambda,
        value,
        kkt: None,
        matvecs: k as u64,
        order: k,
        breakdown: fact.breakdown,
        hard_case: red.hard_case,
        newton_iters: red.newton_iters,
    };
    if opts.kkt {
        sol.kkt = Some(kkt_residual(inst, &sol)?);
    }
    let mut trace = ConvergenceTrace {
        rows,
        reference: opts.reference.as_ref().map(|r| r.kind()),
    };
    if matches!(opts.reference, Some(Reference::SelfFloor)) {
        for row in trace.rows.iter_mut() {
            row.gap = Some(row.value - value);
        }
    }
    Ok((sol, trace))
}

pub fn solve_trs_krylov(
    inst: &TrsInstance,
    t: usize,
    opts: &SolveOptions,
) -> Result<(Solution, ConvergenceTrace)> {
    krylov(&Instance::Trs(inst.clone()), t, opts)
}

pub fn solve_cubic_krylov(
    inst: &CubicInstance,
    t: usize,
    opts: &SolveOptions,
) -> Result<(Solution, ConvergenceTrace)> {
    krylov(&Instance::Cubic(inst.clone()), t, opts)
}

pub fn solve_krylov(
    inst: &Instance,
    t: usize,
    opts: &SolveOptions,
) -> Result<(Solution, ConvergenceTrace)> {
    krylov(inst, t, opts)
}

/// Dense oracle output with the spectral data used to build it.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSolution {
    pub solution: Solution,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Unit eigenvector of `lambda_min` (sign as returned by the eigensolver).
    pub u_min: Vec<f64>,
    pub umin_dot_b: f64,
}

struct Spectrum {
    eigs: Vec<f64>,
    /// Column-major eigenvectors; `None` means the identity.
    vectors: Option<DMatrix<f64>>,
}

impl Spectrum {
    fn of(a: &dyn SymmetricOperator) -> Result<Self> {
        if let Some(diag) = a.diagonal() {
            return Ok(Spectrum {
                eigs: diag.to_vec(),
                vectors: None,
            });
        }
        let d = a.dim();
        if d > DENSE_CAP {
            return Err(Error::TooLarge {
                dim: d,
                cap: DENSE_CAP,
            });
        }
        let mut m = DMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            a.apply_into(&e, &mut col);
            e[j] = 0.0;
            for i in 0..d {
                m[(i, j)] = col[i];
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        Ok(Spectrum {
            eigs: eig.eigenvalues.iter().cloned().collect(),
            vectors: Some(eig.eigenvectors),
        })
    }

    fn to_eigen(&self, v: &[f64]) -> Vec<f64> {
        match &self.vectors {
            None => v.to_vec(),
            Some(u) => (0..u.ncols())
                .map(|j| vecops::dot(u.column(j).as_slice(), v))
                .collect(),
        }
    }

    fn from_eigen(&self, c: &[f64]) -> Vec<f64> {
        match &self.vectors {
            None => c.to_vec(),
            Some(u) => {
                let mut out = vec![0.0; u.nrows()];
                for (j, cj) in c.iter().enumerate() {
                    if *cj != 0.0 {
                        vecops::axpy(*cj, u.column(j).as_slice(), &mut out);
                    }
                }
                out
            }
        }
    }
}

/// Global minimizer by eigendecomposition and a scalar root solve.
pub fn solve_dense_exact(inst: &Instance) -> Result<Solution> {
    Ok(solve_dense_detailed(inst)?.solution)
}

pub fn solve_dense_detailed(inst: &Instance) -> Result<DenseSolution> {
    let reg = inst.regularizer();
    reg.validate()?;
    let spec = Spectrum::of(inst.operator().as_ref())?;
    let c = spec.to_eigen(inst.b());
    let d = c.len();
    let (imin, lmin) =
        spec.eigs
            .iter()
            .cloned()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, e)| if e < acc.1 { (i, e) } else { acc },
            );
    let lmax = spec.eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // gaps to the bottom of the spectrum, exact for representable eigenvalues
    let gaps: Vec<f64> = spec.eigs.iter().map(|e| e - lmin).collect();

    // x(μ) in eigencoordinates with μ = λ + λ_min
    let norm_at = |mu: f64| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            if c[i] != 0.0 {
                s += (c[i] / (gaps[i] + mu)).powi(2);
            }
        }
        s.sqrt()
    };
    let wsq_at = |mu: f64| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            if c[i] != 0.0 {
                s += c[i] * c[i] / (gaps[i] + mu).powi(3);
            }
        }
        s
    };
    let target = |mu: f64| reg.target_norm(mu - lmin);
    let bottom_mass: f64 = (0..d).filter(|i| gaps[*i] <= 0.0).map(|i| c[i].abs()).sum();

    // λ ≥ max(0, −λ_min)  ⟺  μ ≥ max(λ_min, 0)
    let mu_floor = lmin.max(0.0);
    let interior = matches!(reg, Regularizer::Radius(r) if lmin > 0.0 && norm_at(lmin) <= r);
    let hard = !interior && lmin <= 0.0 && bottom_mass == 0.0 && norm_at(0.0) <= target(0.0);
    let (mu, lambda) = if interior {
        (lmin, 0.0)
    } else if hard {
        (0.0, -lmin)
    } else if c.iter().all(|x| *x == 0.0) {
        // cubic with A ≻ 0 and b = 0
        (mu_floor, 0.0)
    } else {
        let mu = root(mu_floor, &norm_at, &wsq_at, &target, reg);
        (mu, mu - lmin)
    };

    let mut xe = vec![0.0; d];
    for i in 0..d {
        if c[i] != 0.0 {
            xe[i] = -c[i] / (gaps[i] + mu);
        }
    }
    if hard {
        let want = target(0.0);
        let have = vecops::norm(&xe);
        // bᵀu_min = 0 here, so the tie goes to +u_min
        xe[imin] += (want * want - have * have).max(0.0).sqrt();
    }
    let xnorm = vecops::norm(&xe);
    let mut value = reg.penalty(xnorm);
    for i in 0..d {
        value += 0.5 * spec.eigs[i] * xe[i] * xe[i] + c[i] * xe[i];
    }
    let x = spec.from_eigen(&xe);
    let mut umin = vec![0.0; d];
    umin[imin] = 1.0;
    let u_min = spec.from_eigen(&umin);
    Ok(DenseSolution {
        solution: Solution {
            x,
            lambda,
            value,
            kkt: None,
            matvecs: 0,
            order: d,
            breakdown: false,
            hard_case: hard,
            newton_iters: 0,
        },
        lambda_min: lmin,
        lambda_max: lmax,
        u_min,
        umin_dot_b: c[imin],
    })
}

/// Root of `‖x(μ)‖ = target(μ)` on `(floor, ∞)` by reciprocal Newton with a
/// bisection safeguard.
fn root(
    floor: f64,
    norm_at: &dyn Fn(f64) -> f64,
    wsq_at: &dyn Fn(f64) -> f64,
    target: &dyn Fn(f64) -> f64,
    reg: Regularizer,
) -> f64 {
    let excess = |mu: f64| norm_at(mu) > target(mu);
    let mut lo = floor;
    let mut hi = floor.max(1e-300) * 2.0 + 1.0;
    while excess(hi) {
        lo = hi;
        hi *= 2.0;
    }
    let mut mu = hi;
    for _ in 0..400 {
        if !(hi - lo > 2.0 * f64::EPSILON * hi) {
            break;
        }
        let n = norm_at(mu);
        let t = target(mu);
        if n > t {
            lo = mu;
        } else {
            hi = mu;
        }
        let w = wsq_at(mu);
        let proposal = match reg {
            Regularizer::Radius(r) => mu + (n * n / w) * (n - r) / r,
            Regularizer::Cubic(rho) => {
                let lam = t * rho;
                let phi = 1.0 / n - rho / lam;
                let dphi = w / n.powi(3) + rho / (lam * lam);
                mu - phi / dphi
            }
        };
        mu = if proposal > lo && proposal < hi && proposal.is_finite() {
            proposal
        } else if lo > 0.0 && hi / lo > 16.0 {
            (lo * hi).sqrt()
        } else if lo == 0.0 {
            hi * 1e-3
        } else {
            0.5 * (lo + hi)
        };
    }
    // the endpoint on the deficit side keeps ‖x‖ ≤ target
    if norm_at(mu) > target(mu) {
        hi
    } else {
        mu
    }
}

/// KKT residuals of `sol` for `inst`. The smallest eigenvalue is taken from
/// the diagonal when available, otherwise from a 50-step Lanczos run on a
/// fixed random start.
pub fn kkt_residual(inst: &Instance, sol: &Solution) -> Result<KktResiduals> {
    kkt_at(inst, &sol.x, sol.lambda)
}

pub fn kkt_at(inst: &Instance, x: &[f64], lambda: f64) -> Result<KktResiduals> {
    let a = inst.operator().as_ref();
    let b = inst.b();
    let mut r = a.apply(x)?;
    vecops::axpy(lambda, x, &mut r);
    vecops::axpy(1.0, b, &mut r);
    let stationarity = vecops::norm(&r) / vecops::norm(b).max(1.0);
    let lmin = min_eig_estimate(a)?;
    let sign_slack = ((-lmin).max(0.0) - lambda).max(0.0);
    let xn = vecops::norm(x);
    let (complementarity, feasibility) = match inst.regularizer() {
        Regularizer::Radius(rad) => ((lambda * (rad - xn)).abs(), (xn - rad).max(0.0)),
        Regularizer::Cubic(rho) => ((rho * xn - lambda).abs(), 0.0),
    };
    Ok(KktResiduals {
        stationarity,
        sign_slack,
        complementarity,
        feasibility,
    })
}

/// Upper estimate of `λ_min(A)`.
pub fn min_eig_estimate(a: &dyn SymmetricOperator) -> Result<f64> {
    if let Some(diag) = a.diagonal() {
        return Ok(diag.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    let start = gaussian(a.dim(), 0x6b6b_7431);
    let f = lanczos::tridiagonalize(a, &start, 50, Reorth::Full)?;
    Ok(lanczos::smallest_ritz(&f).0)
}

pub(crate) fn gaussian(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..d).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// The trust-region instance sharing the cubic instance's global minimizers:
/// same `A`, `b` and `R = ‖s^cr‖`.
pub fn trs_equivalent(inst: &CubicInstance) -> Result<TrsInstance> {
    let s = solve_dense_exact(&Instance::Cubic(inst.clone()))?;
    let r = vecops::norm(&s.x);
    if !(r > 0.0) {
        return Err(Error::DegenerateRadius);
    }
    Ok(TrsInstance {
        a: inst.a.clone(),
        b: inst.b.clone(),
        radius: r,
    })
}
