//! Closed-form convergence bounds.
//!
//! Upper bounds hold for the Krylov solution at order `t`; lower bounds hold
//! for every point of `K_t(A, b)` on the matching adversarial instance. A
//! bound that is vacuous for its inputs evaluates to `+∞`.

use serde::{Deserialize, Serialize};

fn sq(x: f64) -> f64 {
    x * x
}

fn indicator(neg: bool) -> f64 {
    if neg {
        1.0
    } else {
        0.0
    }
}

/// `36Δ·exp(−4t·√((λ_min + λ*)/(λ_max + λ*)))`; `+∞` when `λ* + λ_min ≤ 0`.
pub fn ub_linear(t: usize, lambda_min: f64, lambda_max: f64, lambda_star: f64, delta: f64) -> f64 {
    let lo = lambda_min + lambda_star;
    if !(lo > 0.0) {
        return f64::INFINITY;
    }
    36.0 * delta * (-4.0 * t as f64 * (lo / (lambda_max + lambda_star)).sqrt()).exp()
}

/// `(λ_max − λ_min)‖s‖²/(t − ½)²·[4 + 1{λ_min<0}/8·log²(4‖b‖²/(u_minᵀb)²)]`.
///
/// `+∞` for `t = 0`, and when `λ_min < 0` with `u_minᵀb = 0`.
pub fn ub_sublinear(
    t: usize,
    lambda_min: f64,
    lambda_max: f64,
    s_norm: f64,
    b_norm: f64,
    ub_dot: f64,
) -> f64 {
    if t == 0 {
        return f64::INFINITY;
    }
    let neg = lambda_min < 0.0;
    let log_term = if neg {
        if ub_dot == 0.0 {
            return f64::INFINITY;
        }
        sq((4.0 * sq(b_norm) / sq(ub_dot)).ln()) / 8.0
    } else {
        0.0
    };
    (lambda_max - lambda_min) * sq(s_norm) / sq(t as f64 - 0.5) * (4.0 + log_term)
}

/// Joint-subspace bound, holding with probability `1 − δ`:
/// `(λ_max − λ_min)R²/(t − 1)²·[16 + 2·1{λ_min<0}·log²(2√d/δ)]`; `+∞` for `t < 2`.
pub fn ub_joint(
    t: usize,
    lambda_min: f64,
    lambda_max: f64,
    radius: f64,
    d: usize,
    delta: f64,
) -> f64 {
    if t < 2 {
        return f64::INFINITY;
    }
    let log_term = indicator(lambda_min < 0.0) * 2.0 * sq((2.0 * (d as f64).sqrt() / delta).ln());
    (lambda_max - lambda_min) * sq(radius) / sq(t as f64 - 1.0) * (16.0 + log_term)
}

/// Perturbed-`b` bound, holding with probability `1 − δ`:
/// `(λ_max − λ_min)R²/(t − ½)²·[4 + 1{λ_min<0}/2·log²(2‖b̃‖√d/(σδ))] + 2σR`.
#[allow(clippy::too_many_arguments)]
pub fn ub_perturbed(
    t: usize,
    lambda_min: f64,
    lambda_max: f64,
    radius: f64,
    b_tilde_norm: f64,
    sigma: f64,
    d: usize,
    delta: f64,
) -> f64 {
    if t == 0 {
        return f64::INFINITY;
    }
    let log_term = indicator(lambda_min < 0.0) / 2.0
        * sq((2.0 * b_tilde_norm * (d as f64).sqrt() / (sigma * delta)).ln());
    (lambda_max - lambda_min) * sq(radius) / sq(t as f64 - 0.5) * (4.0 + log_term)
        + 2.0 * sigma * radius
}

/// `K = 1 + λ*/(3(λ* + λ_min))`.
pub fn lb_linear_k(lambda_star: f64, lambda_min: f64) -> f64 {
    1.0 + lambda_star / (3.0 * (lambda_star + lambda_min))
}

/// `(1/K)·Δ·e^{−4t/(√κ − 1)}`.
pub fn lb_linear(t: usize, kappa: f64, lambda_star: f64, lambda_min: f64, delta: f64) -> f64 {
    delta / lb_linear_k(lambda_star, lambda_min) * (-4.0 * t as f64 / (kappa.sqrt() - 1.0)).exp()
}

/// `min{(λ_max)₋ − λ_min, (λ_max − λ_min)/(16(t − ½)²)·log²τ²}·‖s‖²/32`.
pub fn lb_nonconvex(t: usize, lambda_min: f64, lambda_max: f64, s_norm: f64, tau: f64) -> f64 {
    let a = lambda_max.min(0.0) - lambda_min;
    let b = (lambda_max - lambda_min) / (16.0 * sq(t as f64 - 0.5)) * sq((tau * tau).ln());
    a.min(b) * sq(s_norm) / 32.0
}

/// `(λ_max − λ_min)‖s‖²/(16(t + ½)²)`.
pub fn lb_convex(t: usize, lambda_min: f64, lambda_max: f64, s_norm: f64) -> f64 {
    (lambda_max - lambda_min) * sq(s_norm) / (16.0 * sq(t as f64 + 0.5))
}

/// Upper bound on the smallest Rayleigh quotient over `K_t(M, v)` when
/// `M ⪰ 0` has a null vector `u`: `‖M‖/(16(t − ½)²)·log²(4‖v‖²/(uᵀv)² − 2)`.
pub fn eigvec_ub(t: usize, norm_m: f64, tau: f64) -> f64 {
    if t == 0 {
        return f64::INFINITY;
    }
    norm_m / (16.0 * sq(t as f64 - 0.5)) * sq((4.0 * tau * tau - 2.0).ln())
}

/// Lower bound on the same quantity for the adversarial construction:
/// `‖M‖·min{1/4, log²(4τ² − 3)/(64(t − ½)²)}`.
pub fn eigvec_lb(t: usize, norm_m: f64, tau: f64) -> f64 {
    let l = (4.0 * tau * tau - 3.0).ln();
    norm_m * (sq(l) / (64.0 * sq(t as f64 - 0.5))).min(0.25)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSense {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    NotApplicable,
}

/// Inputs a bound was evaluated at; unused ones stay empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub t: Option<usize>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_star: Option<f64>,
    /// Initial gap `f(0) − f(s*)`.
    pub initial_gap: Option<f64>,
    pub radius: Option<f64>,
    pub b_norm: Option<f64>,
    pub umin_dot_b: Option<f64>,
    pub d: Option<usize>,
    /// Failure probability.
    pub delta: Option<f64>,
    pub sigma: Option<f64>,
    pub kappa: Option<f64>,
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub sense: BoundSense,
    pub inputs: BoundInputs,
    pub value: f64,
    pub measured: Option<f64>,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(name: &str, sense: BoundSense, inputs: BoundInputs, value: f64) -> Self {
        Self {
            name: name.to_string(),
            sense,
            inputs,
            value,
            measured: None,
            verdict: Verdict::NotApplicable,
        }
    }

    /// Compares against a measured gap. Upper bounds allow a relative slack
    /// `rel_tol` plus an absolute slack `abs_margin`; lower bounds must be
    /// exceeded by at least `abs_margin`.
    pub fn compare(mut self, measured: f64, rel_tol: f64, abs_margin: f64) -> Self {
        self.measured = Some(measured);
        self.verdict = if !measured.is_finite() || self.value.is_nan() {
            Verdict::NotApplicable
        } else {
            let ok = match self.sense {
                BoundSense::Upper => measured <= self.value * (1.0 + rel_tol) + abs_margin,
                BoundSense::Lower => measured - self.value >= abs_margin && measured > self.value,
            };
            if ok {
                Verdict::Satisfied
            } else {
                Verdict::Violated
            }
        };
        self
    }

    pub fn csv_header() -> &'static str {
        "name,sense,t,value,measured,verdict"
    }

    pub fn csv_row(&self) -> String {
        let sense = match self.sense {
            BoundSense::Upper => "upper",
            BoundSense::Lower => "lower",
        };
        let verdict = match self.verdict {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not_applicable",
        };
        format!(
            "{},{},{},{:e},{},{}",
            self.name,
            sense,
            self.inputs.t.map(|t| t.to_string()).unwrap_or_default(),
            self.value,
            self.measured.map(|m| format!("{m:e}")).unwrap_or_default(),
            verdict
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_examples() {
        assert_eq!(ub_linear(0, -0.5, 1.0, 2.0, 3.0), 36.0 * 3.0);
        let v = ub_linear(7, 1.0, 1.0, 0.5, 1.0);
        assert!((v - 36.0 * (-28.0f64).exp()).abs() <= 1e-15 * v);
        // κ = 100: λ_min + λ* = 1, λ_max + λ* = 100
        let v = ub_linear(25, -1.0, 98.0, 2.0, 1.0);
        assert!((v - 36.0 * (-10.0f64).exp()).abs() <= 1e-12 * v);
        assert!((v - 1.634e-3).abs() < 1e-6);
        assert_eq!(ub_linear(3, -1.0, 1.0, 1.0, 1.0), f64::INFINITY);
    }

    #[test]
    fn sublinear_examples() {
        let v = ub_sublinear(10, -0.5, 0.5, 1.0, 100.0, 1.0);
        let expect = (4.0 + (4e4f64).ln().powi(2) / 8.0) / 90.25;
        assert!((v - expect).abs() <= 1e-14);
        assert!((v - 0.19985).abs() < 1e-5);
        assert_eq!(ub_sublinear(10, 0.0, 1.0, 1.0, 1.0, 0.0), 4.0 / 90.25);
        assert_eq!(ub_sublinear(10, -1.0, 1.0, 1.0, 1.0, 0.0), f64::INFINITY);
        assert_eq!(ub_sublinear(0, 0.0, 1.0, 1.0, 1.0, 1.0), f64::INFINITY);
        let a = ub_sublinear(100, 0.1, 1.0, 1.0, 1.0, 1.0);
        let b = ub_sublinear(200, 0.1, 1.0, 1.0, 1.0, 1.0);
        assert!((a / b - (199.5f64 / 99.5).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn randomized_examples() {
        let v = ub_joint(20, -1.0, 1.0, 1.0, 10_000, 0.05);
        let expect = 2.0 / 361.0 * (16.0 + 2.0 * (4000.0f64).ln().powi(2));
        assert!((v - expect).abs() <= 1e-13 * expect);
        assert_eq!(ub_joint(20, 0.0, 1.0, 1.0, 10_000, 0.05), 16.0 / 361.0);
        assert!(ub_joint(2000, -1.0, 1.0, 1.0, 100, 0.1) < ub_joint(200, -1.0, 1.0, 1.0, 100, 0.1));
        // σ = ε/(4R) leaves a floor of ε/2
        let (eps, r) = (1e-2, 3.0);
        let far = ub_perturbed(1_000_000_000, -1.0, 1.0, r, 1.0, eps / (4.0 * r), 100, 0.1);
        assert!((far - eps / 2.0).abs() < 1e-6);
        assert_eq!(
            ub_perturbed(10, 0.0, 1.0, 1.0, 1.0, 0.1, 100, 0.1),
            4.0 / 90.25 + 0.2
        );
    }

    #[test]
    fn lower_bound_examples() {
        let k = lb_linear_k(2.0, -1.0);
        assert!((k - (1.0 + 2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(lb_linear(0, 100.0, 2.0, -1.0, 5.0), 5.0 / k);
        assert!(lb_linear_k(3.0, -1.0) < lb_linear_k(2.0, -1.0));
        // κ = (100d)², K = 3/2 at t = d − 1 keeps more than Δ/3
        let d = 50usize;
        let kappa = (100.0 * d as f64).powi(2);
        let lb = lb_linear(d - 1, kappa, 1.5, -0.5, 1.0);
        assert!((lb_linear_k(1.5, -0.5) - 1.5).abs() < 1e-15);
        assert!(lb > 1.0 / 3.0 * 0.99 && lb < 2.0 / 3.0);
        assert!(lb_convex(1000, -1.0, 1.0, 1.0) < 1e-6);
        // tiny t: the first argument of the min is active
        assert_eq!(lb_nonconvex(1, -1.0, 1.0, 1.0, 100.0), 1.0 / 32.0);
        let v = lb_nonconvex(10, -1.0, 1.0, 1.0, 100.0);
        let expect = 2.0 / (16.0 * 90.25) * (1e4f64).ln().powi(2) / 32.0;
        assert!((v - expect).abs() <= 1e-15);
    }

    #[test]
    fn eigenvector_bounds_are_ordered() {
        for t in [2, 5, 10, 20, 50] {
            for tau in [1.5, 10.0, 1e3, 1e6] {
                assert!(eigvec_lb(t, 2.0, tau) <= eigvec_ub(t, 2.0, tau));
            }
        }
    }

    #[test]
    fn monotone_in_t() {
        for t in 1..200 {
            assert!(ub_linear(t + 1, -0.3, 1.0, 0.5, 1.0) <= ub_linear(t, -0.3, 1.0, 0.5, 1.0));
            assert!(
                ub_sublinear(t + 1, -0.3, 1.0, 1.0, 1.0, 0.1)
                    <= ub_sublinear(t, -0.3, 1.0, 1.0, 1.0, 0.1)
            );
            assert!(
                ub_joint(t + 1, -0.3, 1.0, 1.0, 50, 0.1) <= ub_joint(t, -0.3, 1.0, 1.0, 50, 0.1)
            );
            assert!(lb_linear(t + 1, 10.0, 0.5, -0.3, 1.0) <= lb_linear(t, 10.0, 0.5, -0.3, 1.0));
            assert!(lb_convex(t + 1, -0.3, 1.0, 1.0) <= lb_convex(t, -0.3, 1.0, 1.0));
        }
    }

    #[test]
    fn report_verdicts() {
        let up = BoundReport::new("ub", BoundSense::Upper, BoundInputs::default(), 1.0);
        assert_eq!(
            up.clone().compare(1.0 + 1e-9, 1e-6, 0.0).verdict,
            Verdict::Satisfied
        );
        assert_eq!(
            up.clone().compare(1.1, 1e-6, 0.0).verdict,
            Verdict::Violated
        );
        let vac = BoundReport::new(
            "ub",
            BoundSense::Upper,
            BoundInputs::default(),
            f64::INFINITY,
        );
        assert_eq!(vac.compare(1e300, 0.0, 0.0).verdict, Verdict::Satisfied);
        let lo = BoundReport::new("lb", BoundSense::Lower, BoundInputs::default(), 1.0);
        assert_eq!(
            lo.clone().compare(1.0 + 1e-9, 0.0, 1e-10).verdict,
            Verdict::Satisfied
        );
        assert_eq!(
            lo.clone().compare(1.0 + 1e-11, 0.0, 1e-10).verdict,
            Verdict::Violated
        );
        assert_eq!(
            lo.compare(f64::NAN, 0.0, 0.0).verdict,
            Verdict::NotApplicable
        );
        assert_eq!(up.csv_row(), "ub,upper,,1e0,,not_applicable");
    }
}
