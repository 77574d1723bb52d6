//! Constructive baselines whose iterates live in the Krylov subspace:
//! accelerated projected gradient on the ball, and the Lanczos eigenvector
//! estimate compared with its closed-form upper bound.

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::lanczos::{self, Reorth};
use crate::operators::SymmetricOperator;
use crate::subproblem::gaussian;
use crate::tridiag;
use crate::vecops;

/// Lanczos steps used to estimate the extreme eigenvalues of `M`.
pub const SPECTRUM_STEPS: usize = 100;
/// Safety factor applied to the estimated `λ_max(M)`.
pub const LIPSCHITZ_SAFETY: f64 = 1.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApgStep {
    pub k: usize,
    pub x: Vec<f64>,
    pub value: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApgTrace {
    /// Step size constant `1.01·λ_max` estimate.
    pub lipschitz: f64,
    /// Iterates `x_0 = 0, …, x_t`.
    pub steps: Vec<ApgStep>,
}

/// `½xᵀMx + vᵀx` from a precomputed `Mx`.
fn quad_value(mx: &[f64], v: &[f64], x: &[f64]) -> f64 {
    0.5 * vecops::dot(x, mx) + vecops::dot(v, x)
}

/// Extreme Ritz values of `M` from [`SPECTRUM_STEPS`] Lanczos steps.
fn spectrum_estimate(m: &dyn SymmetricOperator) -> Result<(f64, f64)> {
    if let Some(diag) = m.diagonal() {
        let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        return Ok((lo, hi));
    }
    let start = gaussian(m.dim(), 0x6170_6731);
    let f = lanczos::tridiagonalize(m, &start, SPECTRUM_STEPS, Reorth::Full)?;
    Ok(tridiag::eig_extremes(&f.tridiag()))
}

/// `α_{k+1}` solving `α_{k+1}²/(1 − α_{k+1}) = α_k²`.
pub fn next_alpha(a: f64) -> f64 {
    0.5 * a * ((a * a + 4.0).sqrt() - a)
}

/// `t` iterations of accelerated projected gradient for
/// `min ½xᵀMx + vᵀx` over `‖x‖ ≤ r`, started at `x_0 = y_0 = 0`, `α_0 = 1`.
///
/// Uses exactly `t` products with `M` besides the spectrum estimate, and the
/// iterate `x_t` lies in `K_t(M, v)`.
pub fn apg_ball(
    m: &dyn SymmetricOperator,
    v: &[f64],
    r: f64,
    t: usize,
) -> Result<(Vec<f64>, ApgTrace)> {
    let d = m.dim();
    if v.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: v.len(),
        });
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::param(format!("radius must be nonnegative, got {r}")));
    }
    let (lo, hi) = spectrum_estimate(m)?;
    let scale = lo.abs().max(hi.abs());
    if lo < -1e-8 * scale {
        return Err(Error::NotPsd(lo));
    }
    let lip = LIPSCHITZ_SAFETY * hi.max(f64::MIN_POSITIVE);

    let mut x = vec![0.0; d];
    let mut y = vec![0.0; d];
    let mut alpha = 1.0;
    let mut steps = vec![ApgStep {
        k: 0,
        x: x.clone(),
        value: 0.0,
        alpha,
    }];
    if r == 0.0 {
        for k in 1..=t {
            alpha = next_alpha(alpha);
            steps.push(ApgStep {
                k,
                x: x.clone(),
                value: 0.0,
                alpha,
            });
        }
        return Ok((
            x,
            ApgTrace {
                lipschitz: lip,
                steps,
            },
        ));
    }
    let mut my = vec![0.0; d];
    for k in 1..=t {
        m.apply_into(&y, &mut my);
        let mut z = y.clone();
        for i in 0..d {
            z[i] -= (my[i] + v[i]) / lip;
        }
        let zn = vecops::norm(&z);
        if zn > r {
            vecops::scale(r / zn, &mut z);
        }
        let next = next_alpha(alpha);
        let mom = next * (1.0 / alpha - 1.0);
        for i in 0..d {
            y[i] = z[i] + mom * (z[i] - x[i]);
        }
        x = z;
        alpha = next;
        // the objective is bookkeeping only and does not count as a product
        let mx = m.apply(&x)?;
        steps.push(ApgStep {
            k,
            x: x.clone(),
            value: quad_value(&mx, v, &x),
            alpha,
        });
    }
    Ok((
        x,
        ApgTrace {
            lipschitz: lip,
            steps,
        },
    ))
}

/// Smallest Rayleigh quotient over `K_t(M, v)` next to its upper bound, for
/// `M ⪰ 0` with `Mu = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigvecCheck {
    pub t: usize,
    pub ritz: f64,
    pub upper: f64,
    pub tau: f64,
}

pub fn eigvec_check(
    m: &dyn SymmetricOperator,
    u: &[f64],
    v: &[f64],
    t: usize,
    norm_m: f64,
) -> Result<EigvecCheck> {
    let udv = vecops::dot(u, v);
    if udv == 0.0 {
        return Err(Error::param("v has no component along u"));
    }
    let tau = vecops::norm(v) / udv.abs();
    let f = lanczos::tridiagonalize(m, v, t, Reorth::Full)?;
    let (ritz, _) = lanczos::smallest_ritz(&f);
    Ok(EigvecCheck {
        t,
        ritz,
        upper: bounds::eigvec_ub(t, norm_m, tau),
        tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{Dense, Diagonal};
    use crate::subproblem::{
        solve_dense_exact, solve_trs_krylov, Instance, SolveOptions, TrsInstance,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;
    use std::sync::Arc;

    #[test]
    fn alpha_recursion() {
        let mut a = 1.0;
        for k in 0..200 {
            let n = next_alpha(a);
            assert!((n * n / (1.0 - n) - a * a).abs() <= 1e-12 * a * a, "k={k}");
            assert!(n <= 2.0 / (k as f64 + 3.0) + 1e-12);
            a = n;
        }
    }

    #[test]
    fn identity_example() {
        let m = Diagonal::new(vec![1.0; 5]).unwrap();
        let mut v = vec![0.0; 5];
        v[0] = 1.0;
        for t in 1..30 {
            let (x, tr) = apg_ball(&m, &v, 1.0, t).unwrap();
            assert!(vecops::norm(&x) <= 1.0 + 1e-15);
            let gap = tr.steps.last().unwrap().value + 0.5;
            assert!(gap <= 4.0 * tr.lipschitz / ((t + 1) * (t + 1)) as f64);
        }
        let (x, _) = apg_ball(&m, &v, 1.0, 200).unwrap();
        assert!((x[0] + 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_radius() {
        let m = Diagonal::new(vec![1.0, 2.0]).unwrap();
        let (x, tr) = apg_ball(&m, &[1.0, 1.0], 0.0, 5).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
        assert_eq!(tr.steps.len(), 6);
        assert!(tr.steps.iter().all(|s| s.value == 0.0));
    }

    #[test]
    fn rejects_indefinite() {
        let m = Diagonal::new(vec![-0.5, 1.0]).unwrap();
        assert!(matches!(
            apg_ball(&m, &[1.0, 1.0], 1.0, 3),
            Err(Error::NotPsd(_))
        ));
    }

    fn random_psd(d: usize, seed: u64) -> (Dense, Vec<f64>) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let g: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut rows = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                rows[i][j] = (0..d).map(|k| g[k][i] * g[k][j]).sum::<f64>() / d as f64;
            }
        }
        let v = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        (Dense::from_rows(&rows).unwrap(), v)
    }

    #[test]
    fn krylov_dominance_and_rate() {
        let (m, v) = random_psd(30, 4);
        let r = 0.7;
        let a: Arc<dyn SymmetricOperator> = Arc::new(m.clone());
        let trs = TrsInstance::new(a, v.clone(), r).unwrap();
        let opt = solve_dense_exact(&Instance::Trs(trs.clone()))
            .unwrap()
            .value;
        let (_, tr) = apg_ball(&m, &v, r, 50).unwrap();
        for t in 1..=30 {
            let step = &tr.steps[t];
            let gap = step.value - opt;
            assert!(gap <= 4.0 * tr.lipschitz * r * r / ((t + 1) * (t + 1)) as f64);
            let (kry, _) = solve_trs_krylov(&trs, t, &SolveOptions::default()).unwrap();
            assert!(kry.value - opt <= gap + 1e-12, "t={t}");
        }
    }

    #[test]
    fn iterates_lie_in_krylov_subspace() {
        let (m, v) = random_psd(16, 8);
        for t in 1..=10 {
            let (x, _) = apg_ball(&m, &v, 0.5, t).unwrap();
            let f = lanczos::tridiagonalize(&m, &v, t, Reorth::Full).unwrap();
            let coeffs: Vec<f64> = f.q.iter().map(|q| vecops::dot(q, &x)).collect();
            let proj = f.lift(&coeffs);
            let res = vecops::norm(&vecops::sub(&x, &proj));
            assert!(res <= 1e-6 * vecops::norm(&x), "t={t}: {res}");
        }
    }

    #[test]
    fn eigvec_check_sandwich() {
        let e = crate::instances::gen_eigvec_lb(6, 7, 2.0, 30.0).unwrap();
        let op = e.operator().unwrap();
        let c = eigvec_check(op.as_ref(), &e.u, &e.v, 6, 2.0).unwrap();
        assert!((c.tau - 30.0).abs() < 1e-9);
        assert!(e.bound <= c.ritz && c.ritz <= c.upper);
    }
}
