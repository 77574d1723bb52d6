//! Chebyshev polynomials and the two weighted minimax problems
//!
//! ```text
//!   m_T = min_{deg p < n} max_{x∈[α,β]}        |1 − x p(x)|
//!   m_U = min_{deg p < n} max_{x∈[α,β]} √(x−α)·|1 − x p(x)|
//! ```
//!
//! together with certificates: the alternation nodes `ξ_k` of the optimal
//! residual and a probability vector `π` on them for which the weighted least
//! squares problem restricted to the nodes has the same optimal value.
//!
//! With `r = (√κ+1)/(√κ−1)` the values are `1/cosh(n ln r)` and
//! `√α / sinh((n+½) ln r)`; `ln r` is formed with `ln_1p` so nothing
//! overflows for large `κ` or `n`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChebKind {
    First,
    Second,
}

/// `T_n(x)` or `U_n(x)`, trigonometric inside `[−1, 1]`, hyperbolic outside.
pub fn cheb_eval(kind: ChebKind, n: usize, x: f64) -> f64 {
    let nf = n as f64;
    match kind {
        ChebKind::First => {
            if x.abs() <= 1.0 {
                (nf * x.acos()).cos()
            } else {
                let s = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                s * (nf * x.abs().acosh()).cosh()
            }
        }
        ChebKind::Second => {
            if x.abs() < 1.0 {
                let th = x.acos();
                ((nf + 1.0) * th).sin() / th.sin()
            } else if x.abs() == 1.0 {
                let s = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                s * (nf + 1.0)
            } else {
                let s = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                let a = x.abs().acosh();
                s * ((nf + 1.0) * a).sinh() / a.sinh()
            }
        }
    }
}

/// `ln((√κ+1)/(√κ−1))`
fn log_ratio(kappa: f64) -> f64 {
    (2.0 / (kappa.sqrt() - 1.0)).ln_1p()
}

fn inv_cosh(y: f64) -> f64 {
    let e = (-y).exp();
    2.0 * e / (1.0 + e * e)
}

fn inv_sinh(y: f64) -> f64 {
    if y < 1.0 {
        1.0 / y.sinh()
    } else {
        let e = (-y).exp();
        2.0 * e / (1.0 - e * e)
    }
}

/// Closed-form `m_T(n, α, β)`.
pub fn minimax_t_value(n: usize, alpha: f64, beta: f64) -> f64 {
    let kappa = beta / alpha;
    if kappa <= 1.0 {
        return 0.0;
    }
    inv_cosh(n as f64 * log_ratio(kappa))
}

/// Closed-form `m_U(n, α, β)`.
pub fn minimax_u_value(n: usize, alpha: f64, beta: f64) -> f64 {
    let kappa = beta / alpha;
    if kappa <= 1.0 {
        return 0.0;
    }
    alpha.sqrt() * inv_sinh((n as f64 + 0.5) * log_ratio(kappa))
}

/// Lower and upper sandwich bounds on `m_T`; the upper bound is `+∞` when
/// its expression is vacuous.
pub fn minimax_t_bounds(n: usize, kappa: f64) -> (f64, f64) {
    let nf = n as f64;
    let s = kappa.sqrt();
    (
        2.0 / ((2.0 * nf / (s - 1.0)).exp() + 1.0),
        2.0 * (-2.0 * nf / s).exp(),
    )
}

pub fn minimax_u_bounds(n: usize, alpha: f64, kappa: f64) -> (f64, f64) {
    let m = 2.0 * (n as f64) + 1.0;
    let s = kappa.sqrt();
    let lo = 2.0 * alpha.sqrt() / (2.0 * m / (s - 1.0)).exp_m1().sqrt();
    let up_arg = (2.0 * m / s).exp() - 2.0;
    let hi = if up_arg > 0.0 {
        2.0 * alpha.sqrt() / up_arg.sqrt()
    } else {
        f64::INFINITY
    };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxCertificate {
    pub kind: ChebKind,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MinimaxCertificate {
    pub fn kappa(&self) -> f64 {
        self.beta / self.alpha
    }

    /// The weight `w(x)`: 1 for the first kind, `√(x−α)` for the second.
    pub fn weight_fn(&self, x: f64) -> f64 {
        match self.kind {
            ChebKind::First => 1.0,
            ChebKind::Second => (x - self.alpha).max(0.0).sqrt(),
        }
    }

    /// `1 − x p*(x)` from the closed form.
    pub fn optimal_residual(&self, x: f64) -> f64 {
        if self.value == 0.0 {
            return 1.0 - x / self.alpha;
        }
        let k = self.kappa();
        match self.kind {
            ChebKind::First => {
                self.value
                    * cheb_eval(
                        ChebKind::First,
                        self.n,
                        (k + 1.0 - 2.0 * x / self.alpha) / (k - 1.0),
                    )
            }
            ChebKind::Second => {
                let y = ((k - x / self.alpha) / (k - 1.0)).max(0.0).sqrt();
                let wb = (self.beta - self.alpha).sqrt();
                self.value / wb * cheb_eval(ChebKind::Second, 2 * self.n, y)
            }
        }
    }

    /// Coefficients of `p*` in the basis `T_j(z)`, `z = (2x − α − β)/(β − α)`,
    /// recovered by interpolating the closed form at Chebyshev points.
    pub fn p_star(&self) -> Vec<f64> {
        let n = self.n;
        if self.value == 0.0 || n == 0 {
            return vec![1.0 / self.alpha];
        }
        let pts: Vec<f64> = (0..n)
            .map(|i| (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * n) as f64).cos())
            .collect();
        let m = DMatrix::from_fn(n, n, |i, j| cheb_eval(ChebKind::First, j, pts[i]));
        let rhs = DVector::from_fn(n, |i, _| {
            let x = self.from_unit(pts[i]);
            (1.0 - self.optimal_residual(x)) / x
        });
        m.lu()
            .solve(&rhs)
            .expect("Chebyshev interpolation matrix is nonsingular")
            .iter()
            .cloned()
            .collect()
    }

    fn from_unit(&self, z: f64) -> f64 {
        0.5 * (self.alpha + self.beta) + 0.5 * (self.beta - self.alpha) * z
    }

    fn to_unit(&self, x: f64) -> f64 {
        if self.beta == self.alpha {
            0.0
        } else {
            (2.0 * x - self.alpha - self.beta) / (self.beta - self.alpha)
        }
    }

    /// Evaluates a polynomial given by [`p_star`](Self::p_star)-style coefficients.
    pub fn eval_poly(&self, coeffs: &[f64], x: f64) -> f64 {
        let z = self.to_unit(x);
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * cheb_eval(ChebKind::First, j, z))
            .sum()
    }

    /// `max_k |w(ξ_k)(1 − ξ_k p*(ξ_k)) − (−1)^k m|` with `p*` from interpolation.
    pub fn equioscillation_error(&self) -> f64 {
        let p = self.p_star();
        self.nodes
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                (self.weight_fn(x) * (1.0 - x * self.eval_poly(&p, x)) - sign * self.value).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `min_p Σ π_k w²(ξ_k)(1 − ξ_k p(ξ_k))²` over `deg p < n`, by least squares.
    pub fn dual_value(&self) -> f64 {
        let n = self.n.max(1);
        let k = self.nodes.len();
        let rows = DMatrix::from_fn(k, n, |i, j| {
            let x = self.nodes[i];
            self.weights[i].sqrt()
                * self.weight_fn(x)
                * x
                * cheb_eval(ChebKind::First, j, self.to_unit(x))
        });
        let rhs = DVector::from_fn(k, |i, _| {
            self.weights[i].sqrt() * self.weight_fn(self.nodes[i])
        });
        let svd = rows.clone().svd(true, true);
        let c = svd
            .solve(&rhs, 1e-300)
            .expect("SVD solve with both factors");
        (rhs - rows * c).norm_squared()
    }
}

fn validate(n: usize, alpha: f64, beta: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::param("minimax degree parameter n must be >= 1"));
    }
    if !(alpha > 0.0) || !(beta >= alpha) || !beta.is_finite() {
        return Err(Error::param(format!(
            "need 0 < alpha <= beta, got [{alpha}, {beta}]"
        )));
    }
    Ok(())
}

fn degenerate(kind: ChebKind, n: usize, alpha: f64) -> MinimaxCertificate {
    MinimaxCertificate {
        kind,
        n,
        alpha,
        beta: alpha,
        value: 0.0,
        nodes: vec![alpha],
        weights: vec![1.0],
    }
}

/// Solves `Σ_k π_k (−1)^k w(ξ_k) ξ_k T_j(z_k) = 0` (`j < n`) with `Σ π_k = 1`.
fn solve_weights(cert: &MinimaxCertificate) -> Result<Vec<f64>> {
    let n = cert.n;
    let k = cert.nodes.len();
    let mut m = DMatrix::zeros(k, k);
    for (col, &x) in cert.nodes.iter().enumerate() {
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        let base = sign * cert.weight_fn(x) * x;
        let z = cert.to_unit(x);
        for j in 0..n {
            m[(j, col)] = base * cheb_eval(ChebKind::First, j, z);
        }
        m[(n, col)] = 1.0;
    }
    let mut rhs = DVector::zeros(k);
    rhs[n] = 1.0;
    let pi = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Certificate("weight system is singular".into()))?;
    let pi: Vec<f64> = pi.iter().cloned().collect();
    if let Some((i, w)) = pi.iter().enumerate().find(|(_, w)| !(**w >= 0.0)) {
        return Err(Error::Certificate(format!(
            "weight {i} is negative ({w:.3e})"
        )));
    }
    Ok(pi)
}

pub fn minimax_t(n: usize, alpha: f64, beta: f64) -> Result<MinimaxCertificate> {
    validate(n, alpha, beta)?;
    let kappa = beta / alpha;
    if kappa <= 1.0 {
        return Ok(degenerate(ChebKind::First, n, alpha));
    }
    let nodes = (0..=n)
        .map(|k| {
            let y = (std::f64::consts::PI * k as f64 / n as f64).cos();
            0.5 * alpha * (kappa + 1.0 - (kappa - 1.0) * y)
        })
        .collect();
    let mut cert = MinimaxCertificate {
        kind: ChebKind::First,
        n,
        alpha,
        beta,
        value: minimax_t_value(n, alpha, beta),
        nodes,
        weights: vec![],
    };
    cert.weights = solve_weights(&cert)?;
    Ok(cert)
}

pub fn minimax_u(n: usize, alpha: f64, beta: f64) -> Result<MinimaxCertificate> {
    validate(n, alpha, beta)?;
    let kappa = beta / alpha;
    if kappa <= 1.0 {
        return Ok(degenerate(ChebKind::Second, n, alpha));
    }
    let nodes = (0..=n)
        .map(|k| {
            let y = (std::f64::consts::FRAC_PI_2 * (2 * k + 1) as f64 / (2 * n + 1) as f64).cos();
            alpha * (kappa - (kappa - 1.0) * y * y)
        })
        .collect();
    let mut cert = MinimaxCertificate {
        kind: ChebKind::Second,
        n,
        alpha,
        beta,
        value: minimax_u_value(n, alpha, beta),
        nodes,
        weights: vec![],
    };
    cert.weights = solve_weights(&cert)?;
    Ok(cert)
}
