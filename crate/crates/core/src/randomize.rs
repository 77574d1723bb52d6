//! Randomized variants that escape the hard case: a joint Krylov subspace
//! seeded with an extra random direction, and a random perturbation of `b`.
//!
//! All randomness comes from ChaCha20 seeded with a `u64`, so a seed fixes the
//! stream on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::lanczos::{self, BlockLanczosFactorization};
use crate::subproblem::{
    self, ConvergenceTrace, Instance, Reference, Solution, SolveOptions, TraceMode, TraceRow,
};
use crate::vecops;

/// Uniform point on the unit sphere in `R^d` (normalized Gaussian vector).
pub fn sphere_sample(d: usize, seed: u64) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::param("sphere dimension must be at least 1"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    loop {
        let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let n = vecops::norm(&v);
        if n > 0.0 {
            vecops::scale(1.0 / n, &mut v);
            if d == 1 {
                v[0] = v[0].signum();
            }
            return Ok(v);
        }
    }
}

#[derive(Clone)]
pub struct Perturbed {
    pub instance: Instance,
    pub sigma: f64,
    pub seed: u64,
}

/// Replaces `b` by `b + σv` with `v` uniform on the sphere.
pub fn perturb_instance(inst: &Instance, sigma: f64, seed: u64) -> Result<Perturbed> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!(
            "sigma must be nonnegative, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(Perturbed {
            instance: inst.clone(),
            sigma,
            seed,
        });
    }
    let v = sphere_sample(inst.dim(), seed)?;
    let mut b = inst.b().to_vec();
    vecops::axpy(sigma, &v, &mut b);
    Ok(Perturbed {
        instance: inst.with_b(b),
        sigma,
        seed,
    })
}

/// Solves over the joint subspace `K_{⌊t/2⌋}(A, {b, v})` with `v` uniform on
/// the sphere, spending at most `2⌊t/2⌋` products; an odd leftover product is
/// not used. Trace rows are labelled by products spent.
pub fn solve_joint_krylov(
    inst: &Instance,
    t: usize,
    seed: u64,
    opts: &SolveOptions,
) -> Result<(Solution, ConvergenceTrace, BlockLanczosFactorization)> {
    if t < 2 {
        return Err(Error::param("the joint scheme needs t >= 2"));
    }
    let reg = inst.regularizer();
    let b = inst.b();
    let bnorm = vecops::norm(b);
    if !(bnorm > 0.0) {
        return Err(Error::ZeroVector);
    }
    let a = inst.operator().as_ref();
    let d = inst.dim();
    let v = sphere_sample(d, seed)?;
    let steps = (t / 2).min(d.div_ceil(2).max(1));
    let fact = lanczos::block_tridiagonalize(a, &[b.to_vec(), v], steps)?;

    let mut orders: Vec<usize> = match &opts.trace {
        TraceMode::Final => vec![],
        TraceMode::Every => (1..=fact.steps).collect(),
        TraceMode::Orders(list) => list
            .iter()
            .map(|m| m / 2)
            .filter(|s| *s >= 1 && *s <= fact.steps)
            .collect(),
    };
    orders.push(fact.steps);
    orders.sort_unstable();
    orders.dedup();
    let record = !matches!(opts.trace, TraceMode::Final);

    let mut rows = Vec::new();
    let mut warm = None;
    let mut last = None;
    for &s in &orders {
        let n = fact.order_after(s);
        let band = fact.band.leading(n);
        let mut g = vec![0.0; n];
        g[0] = bnorm;
        let red = subproblem::solve_reduced(&band, &g, reg, &opts.secular, warm)?;
        warm = Some(red.lambda);
        let value = subproblem::reduced_value(&band, &g, reg, &red.y);
        let matvecs: usize = fact.block_widths[..s].iter().sum();
        if record {
            let gap = match opts.reference.as_ref() {
                Some(Reference::Value { value: v, .. }) => Some(value - v),
                Some(Reference::Exact { s: xs, lambda, .. }) => Some(subproblem::gap_identity(
                    a,
                    reg,
                    xs,
                    *lambda,
                    &fact.lift(&red.y),
                )?),
                _ => None,
            };
            rows.push(TraceRow {
                t: 2 * s,
                value,
                lambda: red.lambda,
                gap,
                matvecs: matvecs as u64,
            });
        }
        last = Some((red, value));
    }
    let (red, value) = last.expect("final order solved");
    let mut sol = Solution {
        x: fact.lift(&red.y),
        lambda: red.lambda,
        value,
        kkt: None,
        matvecs: fact.matvecs as u64,
        order: fact.order(),
        breakdown: fact.breakdown,
        hard_case: red.hard_case,
        newton_iters: red.newton_iters,
    };
    if opts.kkt {
        sol.kkt = Some(subproblem::kkt_residual(inst, &sol)?);
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
    Ok((sol, trace, fact))
}
