//! Instance files and generators.
//!
//! Two random families (finite condition number, and the exact hard case
//! `bᵀu_min = 0`) and the adversarial constructions whose Krylov gaps are
//! bounded below in closed form. Every generated matrix is diagonal; the
//! Krylov methods are rotation invariant so nothing is lost.
//!
//! Generators record the global minimizer they built, and re-derive the
//! requested quantities (gap, `ρ‖s‖`, `κ`, `‖s‖`, `τ`) with the dense oracle
//! before marking an instance as verified.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::chebyshev::{self, MinimaxCertificate};
use crate::error::{Error, Result};
use crate::operators::{Diagonal, MatrixSpec, SymmetricOperator};
use crate::subproblem::{
    solve_dense_detailed, CubicInstance, Instance, Reference, ReferenceKind, Regularizer,
    TrsInstance, DENSE_CAP,
};
use crate::vecops;

/// Relative tolerance for oracle re-verification of generated quantities.
pub const CERTIFY_TOL: f64 = 1e-6;
/// Cap on the number of halvings in the ε-shrinking loops.
pub const SHRINK_ITERS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Trs,
    Cubic,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

/// One generated quantity re-measured by the dense oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertCheck {
    pub quantity: String,
    pub requested: f64,
    pub measured: f64,
    /// Relative error, or absolute error when `requested` is zero.
    pub error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certified {
    /// `f(0) − f(s*)`.
    pub gap: f64,
    pub value: f64,
    pub lambda: f64,
    pub solution: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound_t: Option<usize>,
    pub verified: bool,
    pub checks: Vec<CertCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: ProblemKind,
    pub matrix: MatrixSpec,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<Certified>,
}

impl InstanceSpec {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn regularizer(&self) -> Result<Regularizer> {
        match (self.kind, self.radius, self.rho) {
            (ProblemKind::Trs, Some(r), _) => Ok(Regularizer::Radius(r)),
            (ProblemKind::Cubic, _, Some(rho)) => Ok(Regularizer::Cubic(rho)),
            (ProblemKind::Trs, None, _) => Err(Error::param("trs instance without a radius")),
            (ProblemKind::Cubic, _, None) => Err(Error::param("cubic instance without rho")),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let a = self.matrix.to_operator()?;
        if self.b.len() != a.dim() {
            return Err(Error::Dimension {
                expected: a.dim(),
                got: self.b.len(),
            });
        }
        Ok(match self.regularizer()? {
            Regularizer::Radius(r) => Instance::Trs(TrsInstance::new(a, self.b.clone(), r)?),
            Regularizer::Cubic(rho) => Instance::Cubic(CubicInstance::new(a, self.b.clone(), rho)?),
        })
    }

    /// Certified optimum as a trace reference.
    pub fn reference(&self) -> Option<Reference> {
        self.certified.as_ref().map(|c| Reference::Exact {
            s: c.solution.clone(),
            lambda: c.lambda,
            value: c.value,
            kind: ReferenceKind::Certified,
        })
    }

    /// Appends zero rows and columns (and zero entries of `b` and the stored
    /// solution) up to dimension `d`; solutions and Krylov iterates are
    /// unchanged.
    pub fn zero_pad(&mut self, d: usize) {
        if d <= self.dim() {
            return;
        }
        self.matrix.zero_pad(d);
        self.b.resize(d, 0.0);
        if let Some(c) = self.certified.as_mut() {
            c.solution.resize(d, 0.0);
        }
        self.provenance.d = d;
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::param(format!("serialization failed: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::param(format!("malformed instance file: {e}")))
    }
}

/// A quantity the oracle should reproduce.
#[derive(Debug, Clone, Copy)]
enum Requested {
    Gap(f64),
    RhoNorm(f64),
    Kappa(f64),
    Radius(f64),
    Tau(f64),
    /// `λ* + λ_min`, zero in the hard case.
    ShiftedMin(f64),
}

fn rel_error(requested: f64, measured: f64) -> f64 {
    if requested == 0.0 {
        measured.abs()
    } else {
        ((measured - requested) / requested).abs()
    }
}

/// Re-derives the requested quantities with the dense oracle and stores the
/// checks. Fails if any of them is off by more than [`CERTIFY_TOL`].
fn certify(spec: &mut InstanceSpec, requested: &[Requested]) -> Result<()> {
    let inst = spec.to_instance()?;
    let affordable = inst.operator().diagonal().is_some() || spec.dim() <= DENSE_CAP.min(512);
    let cert = spec
        .certified
        .as_mut()
        .expect("generator stores a solution");
    if !affordable {
        return Ok(());
    }
    let dense = solve_dense_detailed(&inst)?;
    let s = &dense.solution;
    let snorm = vecops::norm(&s.x);
    let reg = inst.regularizer();
    let mut checks = Vec::with_capacity(requested.len());
    for &q in requested {
        let (name, want, got) = match q {
            Requested::Gap(v) => ("gap", v, -s.value),
            Requested::RhoNorm(v) => {
                let rho = match reg {
                    Regularizer::Cubic(rho) => rho,
                    Regularizer::Radius(_) => {
                        return Err(Error::param("rho·‖s‖ check on a trust-region instance"))
                    }
                };
                ("rho_snorm", v, rho * snorm)
            }
            Requested::Kappa(v) => (
                "kappa",
                v,
                (dense.lambda_max + s.lambda) / (dense.lambda_min + s.lambda),
            ),
            Requested::Radius(v) => ("snorm", v, snorm),
            Requested::Tau(v) => ("tau", v, vecops::norm(inst.b()) / dense.umin_dot_b.abs()),
            Requested::ShiftedMin(v) => (
                "lambda_star_plus_lambda_min",
                v,
                s.lambda + dense.lambda_min,
            ),
        };
        checks.push(CertCheck {
            quantity: name.to_string(),
            requested: want,
            measured: got,
            error: rel_error(want, got),
            // κ = (λ_max + λ*)/(λ_min + λ*) is only determined to about κ·ε
            // by any backward-stable oracle
            tolerance: if name == "kappa" {
                CERTIFY_TOL.max(64.0 * f64::EPSILON * want)
            } else {
                CERTIFY_TOL
            },
        });
    }
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| !(c.error <= c.tolerance))
        .map(|c| {
            format!(
                "{} requested {:.6e} measured {:.6e}",
                c.quantity, c.requested, c.measured
            )
        })
        .collect();
    cert.checks = checks;
    if !bad.is_empty() {
        return Err(Error::Certificate(format!(
            "oracle re-verification failed: {}",
            bad.join("; ")
        )));
    }
    cert.verified = true;
    Ok(())
}

fn cubic_value(eigs: &[f64], b: &[f64], rho: f64, s: &[f64]) -> f64 {
    let quad: f64 = eigs.iter().zip(s).map(|(e, x)| e * x * x).sum();
    0.5 * quad + vecops::dot(b, s) + rho / 3.0 * vecops::norm(s).powi(3)
}

fn diag_cubic(
    generator: &str,
    eigs: Vec<f64>,
    b: Vec<f64>,
    rho: f64,
    s: Vec<f64>,
    lambda: f64,
    provenance: Provenance,
) -> InstanceSpec {
    let value = cubic_value(&eigs, &b, rho, &s);
    InstanceSpec {
        kind: ProblemKind::Cubic,
        provenance: Provenance {
            generator: generator.to_string(),
            d: eigs.len(),
            ..provenance
        },
        matrix: MatrixSpec::Diagonal { eigs },
        b,
        radius: None,
        rho: Some(rho),
        certified: Some(Certified {
            gap: -value,
            value,
            lambda,
            solution: s,
            ..Default::default()
        }),
    }
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite, got {x}")))
    }
}

/// Random cubic instance with condition number `κ` and initial gap 1.
///
/// `λ_max = 1`, `λ_min ~ U[−1, −0.1]`, the other eigenvalues uniform between
/// them; `λ* = (λ_max − κλ_min)/(κ − 1)` and `b ∝ v ~ N(0, I)` scaled so the
/// gap `½(bᵀA_{λ*}⁻¹b + λ*/3·bᵀA_{λ*}⁻²b)` is one.
pub fn gen_random_kappa(d: usize, kappa: f64, seed: u64) -> Result<InstanceSpec> {
    if d < 2 {
        return Err(Error::param(format!("random-kappa needs d >= 2, got {d}")));
    }
    check_finite("kappa", kappa)?;
    if !(kappa > 1.0) {
        return Err(Error::param(format!("kappa must exceed 1, got {kappa}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let lmin: f64 = rng.gen_range(-1.0..-0.1);
    let lmax = 1.0;
    let mut eigs = Vec::with_capacity(d);
    eigs.push(lmin);
    eigs.push(lmax);
    eigs.extend((2..d).map(|_| rng.gen_range(lmin..lmax)));
    let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();

    let lstar = (lmax - kappa * lmin) / (kappa - 1.0);
    let shifted: Vec<f64> = eigs.iter().map(|e| e + lstar).collect();
    let q1: f64 = v.iter().zip(&shifted).map(|(vi, a)| vi * vi / a).sum();
    let q2: f64 = v
        .iter()
        .zip(&shifted)
        .map(|(vi, a)| vi * vi / (a * a))
        .sum();
    let c = (2.0 / (q1 + lstar / 3.0 * q2)).sqrt();
    let b: Vec<f64> = v.iter().map(|vi| c * vi).collect();
    let s: Vec<f64> = b.iter().zip(&shifted).map(|(bi, a)| -bi / a).collect();
    let rho = lstar / vecops::norm(&s);

    let mut spec = diag_cubic(
        "random-kappa",
        eigs,
        b,
        rho,
        s,
        lstar,
        Provenance {
            seed: Some(seed),
            kappa: Some(kappa),
            delta: Some(1.0),
            lambda_min: Some(lmin),
            lambda_max: Some(lmax),
            lambda_star: Some(lstar),
            ..Default::default()
        },
    );
    certify(
        &mut spec,
        &[
            Requested::Gap(1.0),
            Requested::RhoNorm(lstar),
            Requested::Kappa(kappa),
        ],
    )?;
    Ok(spec)
}

/// Random cubic instance in the exact hard case.
///
/// `λ_min = −0.5` (first coordinate), `λ_max = 0.5`, the others uniform on
/// `[λ_min + γ, λ_max]`; `b₁ = 0`, `λ* = −λ_min`, and the minimizer is
/// `s = (τ‖Â⁻¹b₂:d‖, −Â⁻¹b₂:d)` where `Â` is the shifted trailing block. The
/// `u_min` component could take either sign; `+` is stored.
pub fn gen_hard_case(d: usize, gamma: f64, tau: f64, seed: u64) -> Result<InstanceSpec> {
    if d < 3 {
        return Err(Error::param(format!("hard-case needs d >= 3, got {d}")));
    }
    let (lmin, lmax) = (-0.5, 0.5);
    check_finite("gamma", gamma)?;
    check_finite("tau", tau)?;
    if !(gamma > 0.0 && gamma < lmax - lmin) {
        return Err(Error::param(format!(
            "gamma must lie in (0, {}), got {gamma}",
            lmax - lmin
        )));
    }
    if !(tau > 0.0) {
        return Err(Error::param(format!("tau must be positive, got {tau}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut eigs = Vec::with_capacity(d);
    eigs.push(lmin);
    eigs.extend((1..d - 1).map(|_| rng.gen_range(lmin + gamma..lmax)));
    eigs.push(lmax);
    let v: Vec<f64> = (1..d).map(|_| StandardNormal.sample(&mut rng)).collect();

    let lstar = -lmin;
    let shifted: Vec<f64> = eigs[1..].iter().map(|e| e + lstar).collect();
    let q1: f64 = v.iter().zip(&shifted).map(|(vi, a)| vi * vi / a).sum();
    let q2: f64 = v
        .iter()
        .zip(&shifted)
        .map(|(vi, a)| vi * vi / (a * a))
        .sum();
    let factor = 1.0 + tau * tau;
    let c = (2.0 / (q1 + factor * lstar / 3.0 * q2)).sqrt();
    let mut b = vec![0.0];
    b.extend(v.iter().map(|vi| c * vi));
    let w: Vec<f64> = b[1..].iter().zip(&shifted).map(|(bi, a)| bi / a).collect();
    let wnorm = vecops::norm(&w);
    let rho = lstar / (wnorm * factor.sqrt());
    let mut s = vec![tau * wnorm];
    s.extend(w.iter().map(|x| -x));

    let mut spec = diag_cubic(
        "hard-case",
        eigs,
        b,
        rho,
        s,
        lstar,
        Provenance {
            seed: Some(seed),
            gamma: Some(gamma),
            tau: Some(tau),
            delta: Some(1.0),
            lambda_min: Some(lmin),
            lambda_max: Some(lmax),
            lambda_star: Some(lstar),
            ..Default::default()
        },
    );
    certify(
        &mut spec,
        &[
            Requested::Gap(1.0),
            Requested::RhoNorm(lstar),
            Requested::ShiftedMin(0.0),
        ],
    )?;
    Ok(spec)
}

fn check_spectrum(lmin: f64, lmax: f64) -> Result<()> {
    check_finite("lambda_min", lmin)?;
    check_finite("lambda_max", lmax)?;
    if !(lmin < lmax) {
        return Err(Error::param(format!(
            "need lambda_min < lambda_max, got [{lmin}, {lmax}]"
        )));
    }
    Ok(())
}

/// Adversarial instance for the linear rate, of dimension `t + 1`.
///
/// From the first-kind minimax certificate on `[λ* + λ_min, λ* + λ_max]`:
/// `A = diag(ξ − λ*)`, `b = μA_{λ*}^{1/2}√π`, `ρ = λ*/‖A_{λ*}⁻¹b‖`, with `μ`
/// fixing the initial gap at `Δ`. Returns the instance and the certified
/// lower bound on the gap of every point of `K_t(A, b)`.
pub fn gen_lb_linear(
    t: usize,
    lambda_min: f64,
    lambda_max: f64,
    lambda_star: f64,
    delta: f64,
) -> Result<(InstanceSpec, f64)> {
    if t == 0 {
        return Err(Error::param("lb-linear needs t >= 1"));
    }
    check_spectrum(lambda_min, lambda_max)?;
    check_finite("lambda_star", lambda_star)?;
    if !(lambda_star > 0.0 && lambda_star + lambda_min > 0.0) {
        return Err(Error::param(format!(
            "lambda_star must exceed max(0, -lambda_min), got {lambda_star}"
        )));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::param(format!("Delta must be positive, got {delta}")));
    }
    let cert = chebyshev::minimax_t(t, lambda_star + lambda_min, lambda_star + lambda_max)?;
    let xi = &cert.nodes;
    let pi = &cert.weights;
    let q: f64 = pi.iter().zip(xi).map(|(p, x)| p / x).sum();
    let mu = (2.0 * delta / (1.0 + lambda_star / 3.0 * q)).sqrt();
    let eigs: Vec<f64> = xi.iter().map(|x| x - lambda_star).collect();
    let b: Vec<f64> = pi
        .iter()
        .zip(xi)
        .map(|(p, x)| mu * x.sqrt() * p.sqrt())
        .collect();
    let s: Vec<f64> = pi
        .iter()
        .zip(xi)
        .map(|(p, x)| -mu * p.sqrt() / x.sqrt())
        .collect();
    let rho = lambda_star / vecops::norm(&s);
    let kappa = cert.kappa();
    let bound = bounds::lb_linear(t, kappa, lambda_star, lambda_min, delta);

    let mut spec = diag_cubic(
        "lb-linear",
        eigs,
        b,
        rho,
        s,
        lambda_star,
        Provenance {
            t: Some(t),
            kappa: Some(kappa),
            delta: Some(delta),
            lambda_min: Some(lambda_min),
            lambda_max: Some(lambda_max),
            lambda_star: Some(lambda_star),
            ..Default::default()
        },
    );
    set_bound(&mut spec, t, bound);
    certify(
        &mut spec,
        &[
            Requested::Gap(delta),
            Requested::RhoNorm(lambda_star),
            Requested::Kappa(kappa),
        ],
    )?;
    Ok((spec, bound))
}

fn set_bound(spec: &mut InstanceSpec, t: usize, bound: f64) {
    let c = spec
        .certified
        .as_mut()
        .expect("generator stores a solution");
    c.lower_bound = Some(bound);
    c.lower_bound_t = Some(t);
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("R must be positive, got {r}")))
    }
}

fn start_eps(eps: Option<f64>, spread: f64) -> Result<f64> {
    match eps {
        None => Ok(spread / 10.0),
        Some(e) if e > 0.0 && e < spread => Ok(e),
        Some(e) => Err(Error::param(format!(
            "eps must lie in (0, {spread}), got {e}"
        ))),
    }
}

/// Adversarial instance for the sublinear rate without a negative-curvature
/// term, of dimension `t + 1`.
///
/// From the second-kind certificate with `n = t` on `[ε, λ_max − λ_min]`:
/// `A = diag(ξ − λ*)`, `b = R·A_{λ*}√π`, `ρ = λ*/R`, `λ* = −λ_min + ε`, with
/// `ε` halved (from `eps` or `(λ_max − λ_min)/10`) until
/// `m_U² ≥ (λ_max − λ_min)/(2(2t + 1)²)`. Needs `λ_min ≤ 0` so that `ρ > 0`
/// for every admissible `ε`.
pub fn gen_lb_convex(
    t: usize,
    lambda_min: f64,
    lambda_max: f64,
    radius: f64,
    eps: Option<f64>,
) -> Result<(InstanceSpec, f64)> {
    if t == 0 {
        return Err(Error::param("lb-convex needs t >= 1"));
    }
    check_spectrum(lambda_min, lambda_max)?;
    check_radius(radius)?;
    if lambda_min > 0.0 {
        return Err(Error::param(format!(
            "lb-convex needs lambda_min <= 0 for a positive rho, got {lambda_min}"
        )));
    }
    let spread = lambda_max - lambda_min;
    let target = spread / (2.0 * (2.0 * t as f64 + 1.0).powi(2));
    let mut e = start_eps(eps, spread)?;
    let mut found: Option<MinimaxCertificate> = None;
    for _ in 0..SHRINK_ITERS {
        let cert = chebyshev::minimax_u(t, e, spread)?;
        if cert.value * cert.value >= target {
            found = Some(cert);
            break;
        }
        e *= 0.5;
    }
    let cert =
        found.ok_or_else(|| Error::param("lb-convex: eps shrinking did not reach the target"))?;
    let lstar = -lambda_min + e;
    let eigs: Vec<f64> = cert.nodes.iter().map(|x| x - lstar).collect();
    let b: Vec<f64> = cert
        .nodes
        .iter()
        .zip(&cert.weights)
        .map(|(x, p)| radius * x * p.sqrt())
        .collect();
    let s: Vec<f64> = cert.weights.iter().map(|p| -radius * p.sqrt()).collect();
    let rho = lstar / radius;
    let bound = bounds::lb_convex(t, lambda_min, lambda_max, radius);

    let mut spec = diag_cubic(
        "lb-convex",
        eigs,
        b,
        rho,
        s,
        lstar,
        Provenance {
            t: Some(t),
            lambda_min: Some(lambda_min),
            lambda_max: Some(lambda_max),
            lambda_star: Some(lstar),
            eps: Some(e),
            radius: Some(radius),
            ..Default::default()
        },
    );
    set_bound(&mut spec, t, bound);
    certify(
        &mut spec,
        &[Requested::Radius(radius), Requested::RhoNorm(lstar)],
    )?;
    Ok((spec, bound))
}

/// Hard eigenvector instance: `M ⪰ 0`, `Mu = 0`, with every `z ∈ K_t(M, v)`
/// satisfying `zᵀMz ≥ bound·‖z‖²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigvecInstance {
    pub matrix: MatrixSpec,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub norm_m: f64,
    pub tau: f64,
    /// `min{1/4, log²(4τ² − 3)/(64(t − ½)²)}`, relative to `‖M‖`.
    pub relative_bound: f64,
    /// `‖M‖·relative_bound`.
    pub bound: f64,
    pub certificate: MinimaxCertificate,
}

impl EigvecInstance {
    pub fn operator(&self) -> Result<Arc<dyn SymmetricOperator>> {
        self.matrix.to_operator()
    }
}

/// Eigenvalues `{0, ‖M‖ξ₁, …, ‖M‖ξ_t}` from the second-kind certificate with
/// `n = t − 1` on `[err, 1]`, `u = e₁`, and `v` with `uᵀv = 1/τ` and
/// `(u_iᵀv)² = π_i(1 − 1/τ²)`; zero-padded to dimension `d`.
pub fn gen_eigvec_lb(t: usize, d: usize, norm_m: f64, tau: f64) -> Result<EigvecInstance> {
    if t < 2 {
        return Err(Error::param(format!("eigvec-lb needs t >= 2, got {t}")));
    }
    if d < t + 1 {
        return Err(Error::param(format!(
            "eigvec-lb needs d >= t + 1, got d = {d}, t = {t}"
        )));
    }
    if !(norm_m > 0.0) || !norm_m.is_finite() {
        return Err(Error::param(format!(
            "norm_M must be positive, got {norm_m}"
        )));
    }
    check_finite("tau", tau)?;
    if !(tau > 1.0) {
        return Err(Error::param(format!("tau must exceed 1, got {tau}")));
    }
    let err = bounds::eigvec_lb(t, 1.0, tau);
    let cert = chebyshev::minimax_u(t - 1, err, 1.0)?;
    let mut eigs = vec![0.0];
    eigs.extend(cert.nodes.iter().map(|x| norm_m * x));
    eigs.resize(d, 0.0);
    let mut u = vec![0.0; d];
    u[0] = 1.0;
    let rest = 1.0 - 1.0 / (tau * tau);
    let mut v = vec![1.0 / tau];
    v.extend(cert.weights.iter().map(|p| (p * rest).sqrt()));
    v.resize(d, 0.0);
    Ok(EigvecInstance {
        matrix: MatrixSpec::Diagonal { eigs },
        u,
        v,
        norm_m,
        tau,
        relative_bound: err,
        bound: norm_m * err,
        certificate: cert,
    })
}

/// Adversarial instance for the sublinear rate with negative curvature, of
/// dimension `t + 1`, reducing to [`gen_eigvec_lb`].
///
/// `A = M + λ_min I` with `‖M‖ = λ_max − λ_min`, `λ* = −λ_min + ε`,
/// `b = R·v/‖A_{λ*}⁻¹v‖`, `ρ = λ*/R`; `ε` is halved until `ε < e_t/24` and
/// `‖b‖ ≤ min{e_t R/24, e_t²/ρ}` where
/// `e_t = ¼·min{(λ_max)₋ − λ_min, (λ_max − λ_min)/(16(t − ½)²)·log²τ²}`.
/// The certified bound is `e_t R²/8`.
pub fn gen_lb_nonconvex(
    t: usize,
    lambda_min: f64,
    lambda_max: f64,
    radius: f64,
    tau: f64,
    eps: Option<f64>,
) -> Result<(InstanceSpec, f64)> {
    check_spectrum(lambda_min, lambda_max)?;
    check_radius(radius)?;
    if lambda_min > 0.0 {
        return Err(Error::param(format!(
            "lb-nonconvex needs lambda_min <= 0, got {lambda_min}"
        )));
    }
    let spread = lambda_max - lambda_min;
    let ev = gen_eigvec_lb(t, t + 1, spread, tau)?;
    let m = match &ev.matrix {
        MatrixSpec::Diagonal { eigs } => eigs.clone(),
        MatrixSpec::Dense { .. } => unreachable!("eigvec-lb builds a diagonal matrix"),
    };
    let th = t as f64 - 0.5;
    let ltau = (tau * tau).ln();
    let err_t =
        0.25 * (lambda_max.min(0.0) - lambda_min).min(spread / (16.0 * th * th) * ltau * ltau);

    let mut e = start_eps(eps, spread)?;
    let mut built = None;
    for _ in 0..SHRINK_ITERS {
        let w: Vec<f64> = ev.v.iter().zip(&m).map(|(vi, mi)| vi / (mi + e)).collect();
        let scale = radius / vecops::norm(&w);
        let b: Vec<f64> = ev.v.iter().map(|vi| scale * vi).collect();
        let lstar = -lambda_min + e;
        let rho = lstar / radius;
        let bnorm = vecops::norm(&b);
        if e < err_t / 24.0 && bnorm <= (err_t * radius / 24.0).min(err_t * err_t / rho) {
            let s: Vec<f64> = w.iter().map(|wi| -scale * wi).collect();
            built = Some((b, s, rho, lstar));
            break;
        }
        e *= 0.5;
    }
    let (b, s, rho, lstar) = built.ok_or_else(|| {
        Error::param("lb-nonconvex: eps shrinking did not satisfy both conditions")
    })?;
    let eigs: Vec<f64> = m.iter().map(|mi| mi + lambda_min).collect();
    let bound = bounds::lb_nonconvex(t, lambda_min, lambda_max, radius, tau);

    let mut spec = diag_cubic(
        "lb-nonconvex",
        eigs,
        b,
        rho,
        s,
        lstar,
        Provenance {
            t: Some(t),
            tau: Some(tau),
            lambda_min: Some(lambda_min),
            lambda_max: Some(lambda_max),
            lambda_star: Some(lstar),
            eps: Some(e),
            radius: Some(radius),
            ..Default::default()
        },
    );
    set_bound(&mut spec, t, bound);
    certify(
        &mut spec,
        &[
            Requested::Radius(radius),
            Requested::Tau(tau),
            Requested::RhoNorm(lstar),
        ],
    )?;
    Ok((spec, bound))
}

/// Diagonal operator of an instance file, if it has one.
pub fn diagonal_of(spec: &InstanceSpec) -> Option<Diagonal> {
    match &spec.matrix {
        MatrixSpec::Diagonal { eigs } => Diagonal::new(eigs.clone()).ok(),
        MatrixSpec::Dense { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lanczos::{self, Reorth};
    use crate::subproblem::{solve_dense_exact, solve_krylov, SolveOptions};

    #[test]
    fn random_kappa_is_certified() {
        for (d, kappa, seed) in [(2, 10.0, 0), (50, 100.0, 1), (300, 1e4, 2)] {
            let spec = gen_random_kappa(d, kappa, seed).unwrap();
            let c = spec.certified.as_ref().unwrap();
            assert!(c.verified, "{:?}", c.checks);
            assert_eq!(c.checks.len(), 3);
            let oracle = solve_dense_exact(&spec.to_instance().unwrap()).unwrap();
            assert!((-oracle.value - 1.0).abs() <= 1e-8);
            assert!((oracle.lambda - c.lambda).abs() <= 1e-8 * c.lambda);
        }
        assert!(matches!(
            gen_random_kappa(10, 1.0, 0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            gen_random_kappa(1, 10.0, 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn lambda_star_limit() {
        // λ* → −λ_min as κ → ∞
        let spec = gen_random_kappa(20, 1e12, 4).unwrap();
        let p = &spec.provenance;
        assert!((p.lambda_star.unwrap() + p.lambda_min.unwrap()).abs() < 1e-10);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = gen_random_kappa(40, 50.0, 9).unwrap().to_json().unwrap();
        let b = gen_random_kappa(40, 50.0, 9).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        let c = gen_random_kappa(40, 50.0, 10).unwrap().to_json().unwrap();
        assert_ne!(a, c);
        let h1 = gen_hard_case(40, 1e-3, 10.0, 3).unwrap();
        let h2 = gen_hard_case(40, 1e-3, 10.0, 3).unwrap();
        assert_eq!(h1, h2);
        let back = InstanceSpec::from_json(&h1.to_json().unwrap()).unwrap();
        assert_eq!(back, h1);
    }

    #[test]
    fn hard_case_is_certified() {
        let spec = gen_hard_case(200, 1e-4, 10.0, 5).unwrap();
        let c = spec.certified.as_ref().unwrap();
        assert!(c.verified, "{:?}", c.checks);
        assert_eq!(spec.b[0], 0.0);
        let p = &spec.provenance;
        assert!((p.lambda_star.unwrap() + p.lambda_min.unwrap()).abs() <= 1e-12);
        let oracle = solve_dense_exact(&spec.to_instance().unwrap()).unwrap();
        assert!(oracle.hard_case);
        assert!((-oracle.value - 1.0).abs() <= 1e-8);
        // the stored minimizer has the same value as the oracle's
        assert!((c.value - oracle.value).abs() <= 1e-12);
        assert!(gen_hard_case(2, 1e-3, 1.0, 0).is_err());
        assert!(gen_hard_case(10, 1.0, 1.0, 0).is_err());
        assert!(gen_hard_case(10, 1e-3, 0.0, 0).is_err());
    }

    #[test]
    fn lb_linear_construction() {
        for (t, kappa) in [(5, 10.0), (10, 100.0)] {
            let (lmin, lstar) = (-1.0, 2.0);
            let lmax = kappa * (lmin + lstar) - lstar;
            let (spec, bound) = gen_lb_linear(t, lmin, lmax, lstar, 1.0).unwrap();
            assert_eq!(spec.dim(), t + 1);
            let c = spec.certified.as_ref().unwrap();
            assert!(c.verified, "{:?}", c.checks);
            assert!((c.gap - 1.0).abs() <= 1e-10);
            let inst = spec.to_instance().unwrap();
            let opts = SolveOptions {
                reference: spec.reference(),
                trace: crate::subproblem::TraceMode::Every,
                ..Default::default()
            };
            let (_, trace) = solve_krylov(&inst, t, &opts).unwrap();
            let gap = trace.rows.last().unwrap().gap.unwrap();
            assert!(gap > bound, "t={t}: gap {gap} bound {bound}");
        }
        assert!(gen_lb_linear(5, -1.0, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn zero_padding_preserves_the_iterates() {
        let (mut spec, _) = gen_lb_linear(6, -0.5, 4.0, 1.0, 1.0).unwrap();
        let small = solve_krylov(&spec.to_instance().unwrap(), 6, &SolveOptions::default())
            .unwrap()
            .0;
        spec.zero_pad(40);
        assert_eq!(spec.dim(), 40);
        let big = solve_krylov(&spec.to_instance().unwrap(), 6, &SolveOptions::default())
            .unwrap()
            .0;
        assert!((small.value - big.value).abs() <= 1e-12 * (1.0 + small.value.abs()));
        assert!(big.x[7..].iter().all(|x| *x == 0.0));
    }

    #[test]
    fn lb_convex_construction() {
        let t = 6;
        let (spec, bound) = gen_lb_convex(t, -0.2, 1.0, 2.0, None).unwrap();
        let c = spec.certified.as_ref().unwrap();
        assert!(c.verified, "{:?}", c.checks);
        let p = &spec.provenance;
        assert!(p.lambda_star.unwrap() > -p.lambda_min.unwrap());
        let inst = spec.to_instance().unwrap();
        let opts = SolveOptions {
            reference: spec.reference(),
            trace: crate::subproblem::TraceMode::Every,
            ..Default::default()
        };
        let (_, trace) = solve_krylov(&inst, t, &opts).unwrap();
        assert!(trace.rows.last().unwrap().gap.unwrap() > bound);
        assert!(gen_lb_convex(t, 0.1, 1.0, 1.0, None).is_err());
    }

    #[test]
    fn eigvec_construction() {
        let e = gen_eigvec_lb(8, 12, 3.0, 100.0).unwrap();
        let op = e.operator().unwrap();
        assert!(op.apply(&e.u).unwrap().iter().all(|x| *x == 0.0));
        let eigs = op.diagonal().unwrap();
        let top = eigs.iter().cloned().fold(f64::MIN, f64::max);
        assert!((top - 3.0).abs() <= 1e-12 * 3.0);
        assert!(eigs.iter().all(|x| *x >= 0.0));
        let tau = vecops::norm(&e.v) / vecops::dot(&e.u, &e.v).abs();
        assert!((tau - 100.0).abs() <= 1e-10 * 100.0);
        let fact = lanczos::tridiagonalize(op.as_ref(), &e.v, 8, Reorth::Full).unwrap();
        let (ritz, _) = lanczos::smallest_ritz(&fact);
        assert!(ritz >= e.bound * (1.0 - 1e-10), "{ritz} < {}", e.bound);
        assert!(gen_eigvec_lb(1, 4, 1.0, 2.0).is_err());
        assert!(gen_eigvec_lb(4, 4, 1.0, 2.0).is_err());
        assert!(gen_eigvec_lb(4, 6, 1.0, 1.0).is_err());
    }

    #[test]
    fn lb_nonconvex_construction() {
        let (t, tau, r) = (6, 100.0, 1.5);
        let (spec, bound) = gen_lb_nonconvex(t, -1.0, 1.0, r, tau, None).unwrap();
        let c = spec.certified.as_ref().unwrap();
        assert!(c.verified, "{:?}", c.checks);
        let inst = spec.to_instance().unwrap();
        let oracle = solve_dense_exact(&inst).unwrap();
        assert!((vecops::norm(&oracle.x) - r).abs() <= 1e-8 * r);
        let read_tau = vecops::norm(&spec.b) / spec.b[0].abs();
        assert!((read_tau - tau).abs() <= 1e-10 * tau);
        let opts = SolveOptions {
            reference: spec.reference(),
            trace: crate::subproblem::TraceMode::Every,
            ..Default::default()
        };
        let (_, trace) = solve_krylov(&inst, t, &opts).unwrap();
        let gap = trace.rows.last().unwrap().gap.unwrap();
        assert!(gap > bound, "gap {gap} bound {bound}");
        assert!(gen_lb_nonconvex(t, 0.5, 1.0, 1.0, 10.0, None).is_err());
    }
}
