//! Dual certificates for the planted solution of the two SDPs.
//!
//! SBM: with `d_i = sum_j A_ij s_i s_j`, the matrix `S = D - A + lambda J`
//! satisfies `S s = 0` for every `lambda`. If additionally `S` is positive
//! definite on `s`-perp, `s s^T` is the unique optimum.
//!
//! PDS: with `e(i) = sum_{j in C} A_ij`,
//!
//! ```text
//! d_i = e(i) - eta - lambda K          (i in C,  zero elsewhere)
//! b_i = lambda - e(i) / K              (i not in C, zero on C)
//! B_ij = b_i [i not in C, j in C] + b_j [i in C, j not in C]
//! S = D - B - A + eta I + lambda J
//! ```
//!
//! with `lambda = tau* ln n / n` and `eta = |A - E A|`. `S xi = 0` holds by
//! construction; the certificate passes when `d, b >= 0` and `S` is positive
//! definite on `xi`-perp.
//!
//! In the `BGreater` regimes the planted solution minimizes the objective,
//! and every formula is applied to `-A`. For PDS the multipliers become
//! `lambda = -tau* ln n / n - ln n / (K ln ln n)` and `eta = |A - E A| + 2q`.
//!
//! Both constructions use the ground truth and, for PDS, the model
//! parameters; they certify planted instances, not arbitrary solver output.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{expected_adjacency, Assignment, AssignmentKind, Graph, ModelParams};
use crate::symlin::{lambda2_restricted, spectral_norm, SymMatrix};
use crate::thresholds::tau_star;

/// Which side of the diagonal the planted structure sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `a > b`: the planted solution maximizes `<A, Y>`.
    AGreater,
    /// `a < b`: the planted solution minimizes `<A, Y>`.
    BGreater,
}

impl Regime {
    pub fn from_intensities(a: f64, b: f64) -> Self {
        if a >= b {
            Regime::AGreater
        } else {
            Regime::BGreater
        }
    }

    fn sign(self) -> f64 {
        match self {
            Regime::AGreater => 1.0,
            Regime::BGreater => -1.0,
        }
    }
}

/// `|S x|_inf` at or below this counts as `x` in the kernel.
pub const KERNEL_TOL: f64 = 1e-8;
/// `lambda_2` on the complement must exceed this.
pub const STRICTNESS: f64 = 1e-8;
/// Sign slack for the multipliers `d` and `b`.
pub const SIGN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailReason {
    KernelViolation { residual: f64 },
    NotStrictlyPositive { lambda2: f64 },
    DSign { vertex: usize, value: f64 },
    BSign { vertex: usize, value: f64 },
    Slackness { vertex: usize },
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailReason::KernelViolation { residual } => {
                write!(f, "kernel violation: |S x|_inf = {residual:e}")
            }
            FailReason::NotStrictlyPositive { lambda2 } => {
                write!(f, "λ₂ not strictly positive ({lambda2:e})")
            }
            FailReason::DSign { vertex, value } => {
                write!(f, "D* sign: d_{} = {value:e}", vertex + 1)
            }
            FailReason::BSign { vertex, value } => {
                write!(f, "B* sign: b_{} = {value:e}", vertex + 1)
            }
            FailReason::Slackness { vertex } => {
                write!(f, "complementary slackness violated at vertex {}", vertex + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub reasons: Vec<FailReason>,
}

impl Verdict {
    fn from_reasons(reasons: Vec<FailReason>) -> Self {
        Self {
            pass: reasons.is_empty(),
            reasons,
        }
    }
}

fn kernel_residual(s: &SymMatrix, x: &[f64]) -> f64 {
    s.mul_vec(x).iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

fn strictness_reason(lambda2: f64) -> Option<FailReason> {
    (!(lambda2 > STRICTNESS)).then_some(FailReason::NotStrictlyPositive { lambda2 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmCertificate {
    pub regime: Regime,
    pub sigma: Vec<f64>,
    pub d: Vec<f64>,
    pub lambda: f64,
    pub s: SymMatrix,
    pub lambda2_perp: f64,
    pub verdict: Verdict,
}

/// `S = D - A + lambda J` with `d_i = sum_j A_ij s_i s_j`, for a signed
/// (possibly negated) adjacency.
fn sbm_dual_matrix(a: &SymMatrix, sigma: &[f64], lambda: f64) -> (Vec<f64>, SymMatrix) {
    let n = sigma.len();
    let d: Vec<f64> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(sigma)
                .map(|(aij, sj)| aij * sigma[i] * sj)
                .sum()
        })
        .collect();
    let s = SymMatrix::from_fn(n, |i, j| {
        let diag = if i == j { d[i] } else { 0.0 };
        diag - a.get(i, j) + lambda
    });
    (d, s)
}

pub fn build_sbm_certificate(
    g: &Graph,
    truth: &Assignment,
    p: f64,
    q: f64,
    regime: Regime,
) -> Result<SbmCertificate> {
    truth.require(AssignmentKind::PlusMinus, None)?;
    if truth.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: truth.len(),
        });
    }
    for v in [p, q] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParams(format!("probability {v} outside [0, 1]")));
        }
    }
    let sign = regime.sign();
    let a = g.adjacency().scaled(sign);
    let sigma = truth.as_f64();
    let lambda = sign * (p + q) / 2.0;
    let (d, s) = sbm_dual_matrix(&a, &sigma, lambda);
    let lambda2_perp = lambda2_restricted(&s, &sigma)?;
    let mut cert = SbmCertificate {
        regime,
        sigma,
        d,
        lambda,
        s,
        lambda2_perp,
        verdict: Verdict::from_reasons(Vec::new()),
    };
    cert.verdict = verify_sbm_certificate(&cert);
    Ok(cert)
}

/// Re-checks the kernel condition on the stored `S` and the stored
/// `lambda2_perp`.
pub fn verify_sbm_certificate(cert: &SbmCertificate) -> Verdict {
    let mut reasons = Vec::new();
    let residual = kernel_residual(&cert.s, &cert.sigma);
    if !(residual <= KERNEL_TOL) {
        reasons.push(FailReason::KernelViolation { residual });
    }
    reasons.extend(strictness_reason(cert.lambda2_perp));
    Verdict::from_reasons(reasons)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdsCertificate {
    pub regime: Regime,
    pub xi: Vec<f64>,
    /// Zero off the cluster.
    pub d: Vec<f64>,
    /// Zero on the cluster.
    pub b: Vec<f64>,
    pub lambda: f64,
    pub eta: f64,
    pub s: SymMatrix,
    pub lambda2_perp: f64,
    pub verdict: Verdict,
}

/// Multipliers and `S` for a signed adjacency and given `lambda`, `eta`.
fn pds_dual_matrix(
    a: &SymMatrix,
    members: &[bool],
    k: usize,
    lambda: f64,
    eta: f64,
) -> (Vec<f64>, Vec<f64>, SymMatrix) {
    let n = members.len();
    let kf = k as f64;
    let e: Vec<f64> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(members)
                .filter(|(_, &m)| m)
                .map(|(v, _)| v)
                .sum()
        })
        .collect();
    let d: Vec<f64> = (0..n)
        .map(|i| if members[i] { e[i] - eta - lambda * kf } else { 0.0 })
        .collect();
    let b: Vec<f64> = (0..n)
        .map(|i| if members[i] { 0.0 } else { lambda - e[i] / kf })
        .collect();
    let s = SymMatrix::from_fn(n, |i, j| {
        let cross = match (members[i], members[j]) {
            (false, true) => b[i],
            (true, false) => b[j],
            _ => 0.0,
        };
        let diag = if i == j { d[i] + eta } else { 0.0 };
        diag - cross - a.get(i, j) + lambda
    });
    (d, b, s)
}

pub fn build_pds_certificate(
    g: &Graph,
    truth: &Assignment,
    params: &ModelParams,
    regime: Regime,
) -> Result<PdsCertificate> {
    params.validate()?;
    if params.n != g.n() {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            got: g.n(),
        });
    }
    if truth.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: truth.len(),
        });
    }
    truth.require(AssignmentKind::Indicator, Some(params.k))?;
    let (a_int, b_int) = match (params.a, params.b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::MissingIntensities),
    };
    let n = params.n as f64;
    let kf = params.k as f64;
    let adjacency = g.adjacency();
    let deviation = spectral_norm(&adjacency.sub(&expected_adjacency(params, truth)?))?;
    let tau = tau_star(a_int, b_int)?;
    let (lambda, eta) = match regime {
        Regime::AGreater => (tau * n.ln() / n, deviation),
        Regime::BGreater => {
            // The extra term needs ln ln n > 0, i.e. n >= 3.
            let extra = n.ln() / (kf * n.ln().ln());
            if !extra.is_finite() || extra <= 0.0 {
                return Err(Error::DomainError(format!(
                    "BGreater multipliers need n >= 3, got {}",
                    params.n
                )));
            }
            (-tau * n.ln() / n - extra, deviation + 2.0 * params.q)
        }
    };
    let members = truth.members();
    let a = adjacency.scaled(regime.sign());
    let (d, b, s) = pds_dual_matrix(&a, &members, params.k, lambda, eta);
    let xi = truth.as_f64();
    let lambda2_perp = lambda2_restricted(&s, &xi)?;
    let mut cert = PdsCertificate {
        regime,
        xi,
        d,
        b,
        lambda,
        eta,
        s,
        lambda2_perp,
        verdict: Verdict::from_reasons(Vec::new()),
    };
    cert.verdict = verify_pds_certificate(&cert);
    Ok(cert)
}

pub fn verify_pds_certificate(cert: &PdsCertificate) -> Verdict {
    let mut reasons = Vec::new();
    for (i, (&x, (&d, &b))) in cert.xi.iter().zip(cert.d.iter().zip(&cert.b)).enumerate() {
        let inside = x != 0.0;
        if inside && d < -SIGN_TOL {
            reasons.push(FailReason::DSign { vertex: i, value: d });
        }
        if !inside && b < -SIGN_TOL {
            reasons.push(FailReason::BSign { vertex: i, value: b });
        }
        if (inside && b != 0.0) || (!inside && d != 0.0) {
            reasons.push(FailReason::Slackness { vertex: i });
        }
    }
    let residual = kernel_residual(&cert.s, &cert.xi);
    if !(residual <= KERNEL_TOL) {
        reasons.push(FailReason::KernelViolation { residual });
    }
    reasons.extend(strictness_reason(cert.lambda2_perp));
    Verdict::from_reasons(reasons)
}
