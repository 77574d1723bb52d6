//! Symmetric tridiagonal matrices produced by the Lanczos recursion.
//!
//! Everything here is `O(k)` per call: shifted solves go through a single
//! `LDLᵀ` sweep, and the extremal eigenvalues come from bisection on the
//! Sturm sequence (the sign pattern of the same `LDLᵀ` pivots).

use crate::error::{Error, Result};
use crate::vecops;

#[derive(Debug, Clone, PartialEq)]
pub struct TriDiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TriDiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::param("tridiagonal matrix needs order >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension {
                expected: diag.len() - 1,
                got: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// True when no off-diagonal entry vanishes.
    pub fn is_unreduced(&self) -> bool {
        self.offdiag.iter().all(|b| *b != 0.0)
    }

    /// Leading principal submatrix of order `k`.
    pub fn leading(&self, k: usize) -> TriDiag {
        let k = k.clamp(1, self.order());
        TriDiag {
            diag: self.diag[..k].to_vec(),
            offdiag: self.offdiag[..k - 1].to_vec(),
        }
    }

    pub fn matvec(&self, y: &[f64]) -> Vec<f64> {
        let k = self.order();
        let mut out = vec![0.0; k];
        for i in 0..k {
            let mut s = self.diag[i] * y[i];
            if i > 0 {
                s += self.offdiag[i - 1] * y[i - 1];
            }
            if i + 1 < k {
                s += self.offdiag[i] * y[i + 1];
            }
            out[i] = s;
        }
        out
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let k = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..k {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < k {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// `LDLᵀ` factorization of `T + shift·I`; fails on the first non-positive pivot.
    pub fn factor_shifted(&self, shift: f64) -> Result<TriFactor> {
        let k = self.order();
        let mut d = Vec::with_capacity(k);
        let mut l = Vec::with_capacity(k.saturating_sub(1));
        let mut piv = self.diag[0] + shift;
        for i in 0..k {
            if i > 0 {
                let li = self.offdiag[i - 1] / d[i - 1];
                l.push(li);
                piv = self.diag[i] + shift - li * self.offdiag[i - 1];
            }
            if !(piv > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    index: i,
                    pivot: piv,
                });
            }
            d.push(piv);
        }
        Ok(TriFactor { d, l })
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn sturm_count(&self, sigma: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.max(
            f64::EPSILON * f64::EPSILON * self.offdiag.iter().fold(1.0f64, |m, b| m.max(b * b)),
        );
        let mut count = 0;
        let mut q = self.diag[0] - sigma;
        for i in 0..self.order() {
            if i > 0 {
                q = self.diag[i] - sigma - self.offdiag[i - 1] * self.offdiag[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `j`-th smallest eigenvalue (zero based) by Sturm bisection.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0);
        lo -= pad;
        hi += pad;
        // invariant: count(lo) <= j < count(hi)
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

#[derive(Debug, Clone)]
pub struct TriFactor {
    d: Vec<f64>,
    l: Vec<f64>,
}

impl TriFactor {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let k = self.d.len();
        let mut x = rhs.to_vec();
        for i in 1..k {
            x[i] -= self.l[i - 1] * x[i - 1];
        }
        for i in 0..k {
            x[i] /= self.d[i];
        }
        for i in (0..k.saturating_sub(1)).rev() {
            x[i] -= self.l[i] * x[i + 1];
        }
        x
    }

    /// `yᵀ (T + shift·I)⁻¹ y`.
    pub fn inv_quad(&self, y: &[f64]) -> f64 {
        let mut z = y[0];
        let mut acc = z * z / self.d[0];
        for i in 1..self.d.len() {
            z = y[i] - self.l[i - 1] * z;
            acc += z * z / self.d[i];
        }
        acc
    }

    pub fn min_pivot(&self) -> f64 {
        self.d.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Solves `(T + lambda·I) y = rhs`.
pub fn shifted_solve(t: &TriDiag, lambda: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != t.order() {
        return Err(Error::Dimension {
            expected: t.order(),
            got: rhs.len(),
        });
    }
    Ok(t.factor_shifted(lambda)?.solve(rhs))
}

/// `(lambda_min, lambda_max)` of `t`.
pub fn eig_extremes(t: &TriDiag) -> (f64, f64) {
    if t.order() == 1 {
        return (t.diag[0], t.diag[0]);
    }
    (t.eigenvalue(0), t.eigenvalue(t.order() - 1))
}

/// Unit eigenvector for the smallest eigenvalue, by inverse iteration.
pub fn eigvec_min(t: &TriDiag) -> Vec<f64> {
    let k = t.order();
    if k == 1 {
        return vec![1.0];
    }
    let lmin = t.eigenvalue(0);
    let scale = t.norm_bound().max(f64::MIN_POSITIVE);
    let mut gap = 1e-10 * (1.0 + lmin.abs());
    // the start vector only needs a nonzero component along the target
    let mut y: Vec<f64> = (0..k).map(|i| 1.0 + 0.5 * ((i + 1) as f64).sin()).collect();
    let n0 = vecops::norm(&y);
    vecops::scale(1.0 / n0, &mut y);
    for _ in 0..4 {
        let factor = match t.factor_shifted(-(lmin - gap)) {
            Ok(f) => f,
            Err(_) => {
                gap *= 10.0;
                continue;
            }
        };
        let mut z = factor.solve(&y);
        let nz = vecops::norm(&z);
        vecops::scale(1.0 / nz, &mut z);
        y = z;
        let ty = t.matvec(&y);
        let resid: f64 = ty
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - lmin * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if resid <= 1e-13 * scale {
            break;
        }
    }
    fix_sign(&mut y);
    y
}

/// Deterministic sign: the largest-magnitude entry becomes positive.
pub(crate) fn fix_sign(y: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for v in y.iter() {
        if v.abs() > best * (1.0 + 1e-12) {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        for v in y.iter_mut() {
            *v = -*v;
        }
    }
}
