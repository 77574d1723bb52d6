//! Lanczos and block Lanczos reductions of a symmetric operator.
//!
//! Order `t` costs exactly `t` operator applications (block size `m`: `m·t`).
//! The first product `A q₁` doubles as the norm probe, so no extra work is
//! spent on tolerances.

use serde::{Deserialize, Serialize};

use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::operators::SymmetricOperator;
use crate::tridiag::{self, TriDiag};
use crate::vecops;

/// Relative threshold on residual norms below which the Krylov space is
/// treated as invariant.
pub const BREAKDOWN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reorth {
    #[default]
    Full,
    None,
}

impl std::str::FromStr for Reorth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Reorth::Full),
            "none" => Ok(Reorth::None),
            other => Err(Error::param(format!(
                "unknown reorthogonalization policy '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosFactorization {
    /// Orthonormal basis columns `q_1..q_k`.
    pub q: Vec<Vec<f64>>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub beta_next: f64,
    pub breakdown: bool,
    pub bnorm: f64,
    pub norm_est: f64,
}

impl LanczosFactorization {
    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    pub fn dim(&self) -> usize {
        self.q.first().map_or(0, |c| c.len())
    }

    pub fn tridiag(&self) -> TriDiag {
        self.tridiag_leading(self.order())
    }

    pub fn tridiag_leading(&self, k: usize) -> TriDiag {
        let k = k.clamp(1, self.order());
        TriDiag::new(self.alpha[..k].to_vec(), self.beta[..k - 1].to_vec())
            .expect("lanczos coefficients have consistent lengths")
    }

    /// `Q_k y` using the first `y.len()` columns.
    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        vecops::combine(&self.q[..y.len()], y, self.dim())
    }
}

/// Gram–Schmidt pass of `w` against `basis`; returns the coefficients.
fn project_out(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let coeffs: Vec<f64> = basis.iter().map(|q| vecops::dot(q, w)).collect();
    for (c, q) in coeffs.iter().zip(basis) {
        vecops::axpy(-c, q, w);
    }
    coeffs
}

pub fn tridiagonalize(
    op: &dyn SymmetricOperator,
    b: &[f64],
    t: usize,
    reorth: Reorth,
) -> Result<LanczosFactorization> {
    let d = op.dim();
    if b.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: b.len(),
        });
    }
    if t == 0 {
        return Err(Error::param("Lanczos order must be at least 1"));
    }
    let bnorm = vecops::norm(b);
    if !(bnorm > 0.0) {
        return Err(Error::ZeroVector);
    }
    let t = t.min(d);
    let mut q1 = b.to_vec();
    vecops::scale(1.0 / bnorm, &mut q1);

    let mut q: Vec<Vec<f64>> = vec![q1];
    let mut alpha = Vec::with_capacity(t);
    let mut beta: Vec<f64> = Vec::with_capacity(t);
    let mut norm_est = 0.0f64;
    let mut max_alpha = 0.0f64;
    let mut max_beta = 0.0f64;
    let mut w = vec![0.0; d];
    let mut beta_next;
    let mut breakdown;

    loop {
        let j = q.len() - 1;
        op.apply_into(&q[j], &mut w);
        if j == 0 {
            norm_est = vecops::norm(&w);
        }
        if j > 0 {
            vecops::axpy(-beta[j - 1], &q[j - 1], &mut w);
        }
        let mut a = vecops::dot(&q[j], &w);
        vecops::axpy(-a, &q[j], &mut w);
        if reorth == Reorth::Full {
            for _ in 0..2 {
                let c = project_out(&q, &mut w);
                a += c[j];
            }
        }
        alpha.push(a);
        max_alpha = max_alpha.max(a.abs());
        let bn = vecops::norm(&w);
        norm_est = norm_est.max(max_alpha + 2.0 * max_beta.max(bn));
        beta_next = bn;
        breakdown = bn <= BREAKDOWN_TOL * norm_est;
        if breakdown || alpha.len() == t {
            break;
        }
        beta.push(bn);
        max_beta = max_beta.max(bn);
        let mut next = std::mem::replace(&mut w, vec![0.0; d]);
        vecops::scale(1.0 / bn, &mut next);
        q.push(next);
    }

    Ok(LanczosFactorization {
        q,
        alpha,
        beta,
        beta_next,
        breakdown,
        bnorm,
        norm_est,
    })
}

/// Smallest Ritz value and its lifted unit Ritz vector.
pub fn smallest_ritz(fact: &LanczosFactorization) -> (f64, Vec<f64>) {
    smallest_ritz_at(fact, fact.order())
}

/// As [`smallest_ritz`] using only the leading order-`k` reduction.
pub fn smallest_ritz_at(fact: &LanczosFactorization, k: usize) -> (f64, Vec<f64>) {
    let tri = fact.tridiag_leading(k);
    let (theta, _) = tridiag::eig_extremes(&tri);
    let z = tridiag::eigvec_min(&tri);
    let mut y = fact.lift(&z);
    let n = vecops::norm(&y);
    vecops::scale(1.0 / n, &mut y);
    (theta, y)
}

#[derive(Debug, Clone)]
pub struct BlockLanczosFactorization {
    pub q: Vec<Vec<f64>>,
    pub band: BandMatrix,
    pub block_size: usize,
    /// Number of block steps taken.
    pub steps: usize,
    /// Column count of each block.
    pub block_widths: Vec<usize>,
    /// Columns dropped by rank-revealing deflation, per step.
    pub deflations: Vec<usize>,
    pub breakdown: bool,
    pub norm_est: f64,
    pub matvecs: usize,
}

impl BlockLanczosFactorization {
    pub fn order(&self) -> usize {
        self.q.len()
    }

    pub fn dim(&self) -> usize {
        self.q.first().map_or(0, |c| c.len())
    }

    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        vecops::combine(&self.q[..y.len()], y, self.dim())
    }

    /// Basis size after the first `steps` block steps.
    pub fn order_after(&self, steps: usize) -> usize {
        self.block_widths[..steps.min(self.block_widths.len())]
            .iter()
            .sum()
    }
}

/// Orthonormalizes `cols` against `basis` and each other, dropping columns whose
/// residual falls below `drop_tol`. Returns the kept columns and the number dropped.
fn block_qr(
    basis: &[Vec<f64>],
    cols: Vec<Vec<f64>>,
    drop_tol: &dyn Fn(usize, f64) -> bool,
) -> (Vec<Vec<f64>>, Vec<(usize, f64)>) {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let mut dropped = Vec::new();
    for (idx, mut c) in cols.into_iter().enumerate() {
        for _ in 0..2 {
            project_out(basis, &mut c);
            project_out(&kept, &mut c);
        }
        let n = vecops::norm(&c);
        if drop_tol(idx, n) {
            dropped.push((idx, n));
            continue;
        }
        vecops::scale(1.0 / n, &mut c);
        kept.push(c);
    }
    (kept, dropped)
}

pub fn block_tridiagonalize(
    op: &dyn SymmetricOperator,
    v: &[Vec<f64>],
    t: usize,
) -> Result<BlockLanczosFactorization> {
    let d = op.dim();
    let m = v.len();
    if m == 0 || t == 0 {
        return Err(Error::param(
            "block Lanczos needs a nonempty block and t >= 1",
        ));
    }
    for col in v {
        if col.len() != d {
            return Err(Error::Dimension {
                expected: d,
                got: col.len(),
            });
        }
    }
    let norms: Vec<f64> = v.iter().map(|c| vecops::norm(c)).collect();
    let (first, dropped) = block_qr(&[], v.to_vec(), &|i, n| !(n > BREAKDOWN_TOL * norms[i]));
    if let Some((column, residual)) = dropped.first() {
        return Err(Error::Rank {
            column: *column,
            residual: *residual,
        });
    }

    let mut q: Vec<Vec<f64>> = first;
    let mut widths = vec![m];
    let mut deflations = Vec::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut norm_est = 0.0f64;
    let mut matvecs = 0;
    let mut breakdown = false;
    let mut block_start = 0;
    let mut steps = 0;

    while steps < t {
        let block_end = q.len();
        let mut w_block = Vec::with_capacity(block_end - block_start);
        for c in block_start..block_end {
            let mut w = vec![0.0; d];
            op.apply_into(&q[c], &mut w);
            matvecs += 1;
            norm_est = norm_est.max(vecops::norm(&w));
            let mut coeffs = project_out(&q, &mut w);
            let second = project_out(&q, &mut w);
            for (a, b) in coeffs.iter_mut().zip(&second) {
                *a += b;
            }
            for (i, h) in coeffs.iter().enumerate() {
                if i <= c && c - i <= m {
                    entries.push((i, c, *h));
                }
            }
            w_block.push(w);
        }
        steps += 1;
        if steps == t || q.len() == d {
            break;
        }
        let tol = BREAKDOWN_TOL * norm_est;
        let (next, dropped) = block_qr(&q, w_block, &|_, n| !(n > tol));
        if !dropped.is_empty() {
            deflations.push(dropped.len());
        } else {
            deflations.push(0);
        }
        if next.is_empty() {
            breakdown = true;
            break;
        }
        block_start = q.len();
        widths.push(next.len());
        q.extend(next);
    }

    let k = q.len();
    let mut band = BandMatrix::zeros(k, m);
    for (i, c, h) in entries {
        band.set(i, c, h);
    }
    Ok(BlockLanczosFactorization {
        q,
        band,
        block_size: m,
        steps,
        block_widths: widths,
        deflations,
        breakdown,
        norm_est,
        matvecs,
    })
}
