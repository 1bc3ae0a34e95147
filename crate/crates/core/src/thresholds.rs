//! Recovery thresholds and binomial tail bounds.
//!
//! With intensities `a, b >= 0` the planted dense subgraph exponent is
//!
//! ```text
//! tau*   = (a - b) / (ln a - ln b)            (0 when a = 0 or b = 0)
//! f(a,b) = a - tau* ln(e a / tau*)
//!        = b - tau* ln(e b / tau*)            for a, b > 0, a != b
//! f(a,0) = a,  f(0,b) = b,  f(a,a) = 0
//! ```
//!
//! Exact recovery in the PDS model is possible iff `rho f(a,b) > 1`; in the
//! SBM iff `(sqrt a - sqrt b)^2 > 2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check(v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeIntensity(v))
    }
}

/// The log-mean tilt `tau* = (a - b) / (ln a - ln b)`.
///
/// Zero when either intensity is zero; `a` when `a == b` (the continuous
/// extension of the logarithmic mean).
pub fn tau_star(a: f64, b: f64) -> Result<f64> {
    check(a)?;
    check(b)?;
    Ok(if a == 0.0 || b == 0.0 {
        0.0
    } else if a == b {
        a
    } else {
        (a - b) / (a.ln() - b.ln())
    })
}

/// `x - tau ln(e x / tau)` with the convention `0 ln 0 = 0`.
fn tilted(x: f64, tau: f64) -> f64 {
    if tau == 0.0 {
        x
    } else if x == 0.0 {
        f64::INFINITY
    } else {
        x - tau * (1.0 + x.ln() - tau.ln())
    }
}

/// Both algebraic forms of `f(a, b)` for `a, b > 0`, `a != b`.
pub fn f_threshold_forms(a: f64, b: f64) -> Result<(f64, f64)> {
    check(a)?;
    check(b)?;
    if a == 0.0 || b == 0.0 || a == b {
        return Err(Error::DomainError(
            "two-form evaluation needs a, b > 0 and a != b".into(),
        ));
    }
    let tau = tau_star(a, b)?;
    Ok((tilted(a, tau), tilted(b, tau)))
}

/// The PDS exponent `f(a, b)`.
pub fn f_threshold(a: f64, b: f64) -> Result<f64> {
    check(a)?;
    check(b)?;
    Ok(if a == b {
        0.0
    } else if b == 0.0 {
        a
    } else if a == 0.0 {
        b
    } else {
        let (fa, fb) = f_threshold_forms(a, b)?;
        debug_assert!(
            (fa - fb).abs() <= 1e-10 * (1.0 + a.max(b)),
            "f forms disagree: {fa} vs {fb}"
        );
        fa
    })
}

/// `(sqrt a - sqrt b)^2 - 2`; positive means the SBM is exactly recoverable.
pub fn sbm_gap(a: f64, b: f64) -> Result<f64> {
    check(a)?;
    check(b)?;
    let d = a.sqrt() - b.sqrt();
    Ok(d * d - 2.0)
}

/// All threshold quantities at one `(a, b, rho)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub tau_star: f64,
    pub f_value: f64,
    pub sbm_gap: f64,
    /// `rho f(a,b) - 1`; positive means the PDS is exactly recoverable.
    pub pds_margin: f64,
}

impl ThresholdPoint {
    pub fn new(a: f64, b: f64, rho: f64) -> Result<Self> {
        let f_value = f_threshold(a, b)?;
        Ok(Self {
            a,
            b,
            rho,
            tau_star: tau_star(a, b)?,
            f_value,
            sbm_gap: sbm_gap(a, b)?,
            pds_margin: rho * f_value - 1.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `b < a`.
    Lower,
    /// `b > a`.
    Upper,
}

const BRACKET_EPS: f64 = 1e-12;

/// Solves `rho f(a, b) = 1` for `b` on the requested branch by bisection.
pub fn phase_boundary(a: f64, rho: f64, branch: Branch) -> Result<f64> {
    check(a)?;
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::DomainError(format!("rho must lie in (0, 1], got {rho}")));
    }
    let g = |b: f64| -> f64 { rho * f_threshold(a, b).unwrap_or(f64::NAN) - 1.0 };
    let (mut lo, mut hi) = match branch {
        Branch::Lower => {
            // f(a, .) decreases from f(a, 0) = a to f(a, a) = 0.
            if rho * a <= 1.0 {
                return Err(Error::NoBoundary(format!(
                    "rho a = {} <= 1, so rho f(a, b) < 1 for every b < a",
                    rho * a
                )));
            }
            (BRACKET_EPS, a - BRACKET_EPS)
        }
        Branch::Upper => {
            let lo = a + BRACKET_EPS;
            let mut hi = (a * 4f64.exp()).max(lo + 1.0);
            while g(hi) <= 0.0 {
                hi *= 2.0;
                if !hi.is_finite() {
                    return Err(Error::NoBoundary("upper bracket overflowed".into()));
                }
            }
            (lo, hi)
        }
    };
    // g(lo) and g(hi) have opposite signs; keep the invariant while halving.
    let lo_positive = g(lo) > 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * (1.0 + hi.abs()) {
            break;
        }
        if (g(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Binary KL divergence `d(l || p)`, with `0 ln 0 = 0`.
pub fn binary_divergence(lambda: f64, p: f64) -> f64 {
    let term = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x * (x / y).ln() };
    term(lambda, p) + term(1.0 - lambda, 1.0 - p)
}

/// Natural logs of the lower and upper bounds on `P{U >= k}`,
/// `U ~ Binom(n_trials, prob)`:
///
/// ```text
/// (8 k (1 - l))^(-1/2) exp(-n d(l || p)) <= P{U >= k} <= exp(-n d(l || p)),  l = k/n
/// ```
///
/// The bounds hold for `prob <= l < 1`; below the mean the upper bound is
/// not a tail bound, so that region is rejected.
pub fn binomial_tail_log_bounds(n_trials: u64, prob: f64, k: u64) -> Result<(f64, f64)> {
    if !(k > 0 && k < n_trials) {
        return Err(Error::DomainError(format!(
            "need 0 < k < n, got k = {k}, n = {n_trials}"
        )));
    }
    if !(prob > 0.0 && prob < 1.0) {
        return Err(Error::DomainError(format!("need 0 < p < 1, got {prob}")));
    }
    let n = n_trials as f64;
    let lambda = k as f64 / n;
    if lambda < prob {
        return Err(Error::DomainError(format!(
            "k/n = {lambda} is below p = {prob}; the bounds cover the upper tail only"
        )));
    }
    let exponent = -n * binary_divergence(lambda, prob);
    let log_lower = exponent - 0.5 * (8.0 * k as f64 * (1.0 - lambda)).ln();
    Ok((log_lower, exponent))
}

/// `binomial_tail_log_bounds` exponentiated.
pub fn binomial_tail_bounds(n_trials: u64, prob: f64, k: u64) -> Result<(f64, f64)> {
    let (lo, hi) = binomial_tail_log_bounds(n_trials, prob, k)?;
    Ok((lo.exp(), hi.exp()))
}

/// Exponent of `P{X <= tau rho ln n}` for `X ~ Binom(rho n, a ln n / n)`:
/// `rho (a - tau ln(e a / tau))`, valid for `0 <= tau <= a`.
pub fn lower_tail_exponent(a: f64, rho: f64, tau: f64) -> Result<f64> {
    check(a)?;
    if !(0.0..=a).contains(&tau) {
        return Err(Error::DomainError(format!("need 0 <= tau <= a, got tau = {tau}, a = {a}")));
    }
    Ok(rho * tilted(a, tau))
}

/// Exponent of `P{R >= tau rho ln n}` for `R ~ Binom(rho n, b ln n / n)`:
/// `rho (b - tau ln(e b / tau))`, valid for `tau >= b`.
pub fn upper_tail_exponent(b: f64, rho: f64, tau: f64) -> Result<f64> {
    check(b)?;
    if !(tau >= b && tau.is_finite()) {
        return Err(Error::DomainError(format!("need tau >= b, got tau = {tau}, b = {b}")));
    }
    Ok(rho * tilted(b, tau))
}

/// Both tail exponents at a common tilt `tau`, requiring `b <= tau <= a`.
/// At `tau = tau*(a, b)` the two coincide at `rho f(a, b)`.
pub fn tail_exponents(a: f64, b: f64, rho: f64, tau: f64) -> Result<(f64, f64)> {
    Ok((
        lower_tail_exponent(a, rho, tau)?,
        upper_tail_exponent(b, rho, tau)?,
    ))
}
