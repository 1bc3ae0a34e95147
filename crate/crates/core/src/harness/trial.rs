use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::certificates::{build_pds_certificate, build_sbm_certificate, Regime};
use crate::error::{Error, Result};
use crate::graph::{sample_planted, Assignment, Graph, ModelKind, ModelParams};
use crate::oracle::ml_failure_witness;
use crate::rng::derive_seed;
use crate::sdp::{
    is_integral, round_solution, solve, ProblemKind, SdpProblem, SolveStatus, SolverOptions,
    INTEGRAL_TOL,
};
use crate::thresholds::{f_threshold, sbm_gap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Certificate,
    SdpSolve,
    Both,
}

impl Method {
    fn certifies(self) -> bool {
        matches!(self, Method::Certificate | Method::Both)
    }

    fn solves(self) -> bool {
        matches!(self, Method::SdpSolve | Method::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub method: Method,
    pub solver: SolverOptions,
    pub integral_tol: f64,
}

impl TrialConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            solver: SolverOptions::default(),
            integral_tol: INTEGRAL_TOL,
        }
    }
}

/// Outcome of one sampled instance. Fields of methods that did not run are
/// `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed: u64,
    pub params: ModelParams,
    pub method: Method,
    pub certificate_pass: Option<bool>,
    pub sdp_integral: Option<bool>,
    /// Rounded SDP labels equal the truth (up to global sign for SBM).
    pub rounding_agrees: Option<bool>,
    pub witness_found: Option<bool>,
    pub solver_iterations: Option<usize>,
    pub solver_status: Option<SolveStatus>,
    pub wall_time_ms: f64,
    pub error: Option<String>,
}

impl TrialRecord {
    /// The SDP outcome when the solver ran, the certificate otherwise.
    pub fn success(&self) -> Option<bool> {
        self.sdp_integral.or(self.certificate_pass)
    }

    /// Certificate passed but the solver output is not integral.
    pub fn soundness_violation(&self) -> bool {
        self.certificate_pass == Some(true) && self.sdp_integral == Some(false)
    }
}

/// `sbm_gap` for SBM, `rho f(a,b) - 1` for PDS.
pub fn theory_margin(params: &ModelParams) -> Option<f64> {
    let (a, b) = (params.a?, params.b?);
    match params.kind {
        ModelKind::Sbm => sbm_gap(a, b).ok(),
        ModelKind::Pds => Some(params.rho? * f_threshold(a, b).ok()? - 1.0),
        ModelKind::PlantedCluster => None,
    }
}

fn regime_of(params: &ModelParams) -> Regime {
    match (params.a, params.b) {
        (Some(a), Some(b)) => Regime::from_intensities(a, b),
        _ => Regime::from_intensities(params.p, params.q),
    }
}

pub fn problem_kind(kind: ModelKind, regime: Regime) -> Result<ProblemKind> {
    Ok(match (kind, regime) {
        (ModelKind::Sbm, Regime::AGreater) => ProblemKind::SbmMax,
        (ModelKind::Sbm, Regime::BGreater) => ProblemKind::SbmMin,
        (ModelKind::Pds, Regime::AGreater) => ProblemKind::PdsMax,
        (ModelKind::Pds, Regime::BGreater) => ProblemKind::PdsMin,
        (ModelKind::PlantedCluster, _) => {
            return Err(Error::InvalidParams(
                "the SDPs cover two-cluster SBM and single-cluster PDS only".into(),
            ))
        }
    })
}

fn labels_agree(kind: ModelKind, rounded: &Assignment, truth: &Assignment) -> bool {
    if rounded == truth {
        return true;
    }
    kind == ModelKind::Sbm
        && rounded
            .values()
            .iter()
            .zip(truth.values())
            .all(|(r, t)| r == &-t)
}

#[derive(Default)]
struct Outcome {
    certificate_pass: Option<bool>,
    sdp_integral: Option<bool>,
    rounding_agrees: Option<bool>,
    witness_found: Option<bool>,
    solver_iterations: Option<usize>,
    solver_status: Option<SolveStatus>,
}

fn execute(
    params: &ModelParams,
    cfg: &TrialConfig,
    g: &Graph,
    truth: &Assignment,
) -> (Outcome, Option<Error>) {
    let mut out = Outcome::default();
    let regime = regime_of(params);
    let run = |out: &mut Outcome| -> Result<()> {
        let kind = problem_kind(params.kind, regime)?;
        let k = (!kind.is_sbm()).then_some(params.k);
        if k.is_some() {
            out.witness_found = Some(ml_failure_witness(g, truth, params.k, regime)?.is_some());
        }
        if cfg.method.certifies() {
            let verdict = if kind.is_sbm() {
                build_sbm_certificate(g, truth, params.p, params.q, regime)?.verdict
            } else {
                build_pds_certificate(g, truth, params, regime)?.verdict
            };
            out.certificate_pass = Some(verdict.pass);
        }
        if cfg.method.solves() {
            let problem = SdpProblem::from_graph(kind, g, k)?;
            let sol = solve(&problem, &cfg.solver)?;
            out.solver_iterations = Some(sol.iterations);
            out.solver_status = Some(sol.status);
            out.sdp_integral = Some(is_integral(&sol, truth, cfg.integral_tol)?);
            out.rounding_agrees = match round_solution(&sol, kind, k) {
                Ok(r) => Some(labels_agree(params.kind, &r, truth)),
                Err(Error::NotConverged) => None,
                Err(e) => return Err(e),
            };
        }
        Ok(())
    };
    let err = run(&mut out).err();
    (out, err)
}

/// Runs one trial with default solver settings.
pub fn run_trial(params: &ModelParams, method: Method, trial_index: u64) -> TrialRecord {
    run_trial_with(params, &TrialConfig::new(method), trial_index)
}

/// Samples the instance with seed `derive_seed(params.seed, trial_index)` and
/// runs the configured methods. Errors end up in `error`; fields not reached
/// stay `None`. PDS trials always run the failure witness.
pub fn run_trial_with(params: &ModelParams, cfg: &TrialConfig, trial_index: u64) -> TrialRecord {
    let start = Instant::now();
    let seed = derive_seed(params.seed, trial_index);
    let trial_params = params.clone().with_seed(seed);
    let (outcome, error) = match sample_planted(&trial_params, None) {
        Ok((g, truth)) => execute(&trial_params, cfg, &g, &truth),
        Err(e) => (Outcome::default(), Some(e)),
    };
    TrialRecord {
        trial_index,
        seed,
        params: trial_params,
        method: cfg.method,
        certificate_pass: outcome.certificate_pass,
        sdp_integral: outcome.sdp_integral,
        rounding_agrees: outcome.rounding_agrees,
        witness_found: outcome.witness_found,
        solver_iterations: outcome.solver_iterations,
        solver_status: outcome.solver_status,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        error: error.map(|e| e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unexecuted_methods_stay_null() {
        let params = ModelParams::sbm(60, 9.0, 1.0).unwrap().with_seed(1);
        let r = run_trial(&params, Method::Certificate, 0);
        assert!(r.certificate_pass.is_some());
        assert_eq!(r.sdp_integral, None);
        assert_eq!(r.solver_iterations, None);
        assert_eq!(r.witness_found, None);
        assert_eq!(r.error, None);
    }

    #[test]
    fn both_records_both() {
        let params = ModelParams::sbm(60, 12.0, 0.5).unwrap().with_seed(2);
        let r = run_trial(&params, Method::Both, 3);
        assert!(r.certificate_pass.is_some() && r.sdp_integral.is_some());
        assert!(!r.soundness_violation());
        assert_eq!(r.seed, derive_seed(2, 3));
        assert_eq!(r.params.seed, r.seed);
    }

    #[test]
    fn errors_become_records() {
        let params = ModelParams::planted_cluster(12, 3, 4, 0.9, 0.1).unwrap();
        let r = run_trial(&params, Method::SdpSolve, 0);
        assert!(r.error.is_some());
        assert_eq!(r.sdp_integral, None);
    }

    #[test]
    fn pds_runs_witness() {
        let params = ModelParams::pds(60, 0.5, 3.0, 1.0).unwrap();
        let r = run_trial(&params, Method::Certificate, 0);
        assert!(r.witness_found.is_some());
    }

    #[test]
    fn margins() {
        let sbm = ModelParams::sbm(100, 9.0, 1.0).unwrap();
        assert!((theory_margin(&sbm).unwrap() - 2.0).abs() < 1e-12);
        let pds = ModelParams::pds(100, 0.5, 3.0, 1.0).unwrap();
        assert!(theory_margin(&pds).unwrap() < 0.0);
    }
}
