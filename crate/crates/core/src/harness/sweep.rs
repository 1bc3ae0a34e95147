use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ModelKind, ModelParams};
use crate::rng::derive_seed;
use crate::sdp::{SolverOptions, INTEGRAL_TOL};
use crate::thresholds::{phase_boundary, Branch};

use super::trial::{run_trial_with, theory_margin, Method, TrialConfig, TrialRecord};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959964;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Whether trial `t` of a certificate sweep is also solved, so that exactly
/// `floor(trials * fraction)` of the first `trials` indices are audited,
/// spread evenly.
pub fn is_audited(t: u64, fraction: f64) -> bool {
    let f = fraction.clamp(0.0, 1.0);
    ((t + 1) as f64 * f).floor() > (t as f64 * f).floor()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kind: ModelKind,
    pub n: usize,
    pub a_grid: Vec<f64>,
    pub b_grid: Vec<f64>,
    /// Cluster fraction, PDS only.
    pub rho: Option<f64>,
    pub trials: usize,
    pub method: Method,
    /// Fraction of `Certificate` trials that also run the solver.
    pub audit_fraction: f64,
    pub solver: SolverOptions,
    pub integral_tol: f64,
    pub base_seed: u64,
    pub threads: usize,
}

impl SweepConfig {
    pub fn new(kind: ModelKind, n: usize, a_grid: Vec<f64>, b_grid: Vec<f64>) -> Self {
        Self {
            kind,
            n,
            a_grid,
            b_grid,
            rho: None,
            trials: 50,
            method: Method::Certificate,
            audit_fraction: 0.1,
            solver: SolverOptions::default(),
            integral_tol: INTEGRAL_TOL,
            base_seed: 0,
            threads: 1,
        }
    }

    fn params(&self, a: f64, b: f64) -> Result<ModelParams> {
        match self.kind {
            ModelKind::Sbm => ModelParams::sbm(self.n, a, b),
            ModelKind::Pds => {
                let rho = self
                    .rho
                    .ok_or_else(|| Error::InvalidParams("PDS sweep needs rho".into()))?;
                ModelParams::pds(self.n, rho, a, b)
            }
            ModelKind::PlantedCluster => Err(Error::InvalidParams(
                "sweeps cover SBM and PDS only".into(),
            )),
        }
    }

    fn validate(&self) -> Result<()> {
        let sorted = |g: &[f64]| g.windows(2).all(|w| w[0] < w[1]);
        if self.a_grid.is_empty() || self.b_grid.is_empty() {
            return Err(Error::InvalidParams("empty grid".into()));
        }
        if !sorted(&self.a_grid) || !sorted(&self.b_grid) {
            return Err(Error::InvalidParams("grids must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidParams("threads must be at least 1".into()));
        }
        for &a in &self.a_grid {
            self.params(a, self.b_grid[0])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub a: f64,
    pub b: f64,
    pub rho: Option<f64>,
    pub n: usize,
    pub point_seed: u64,
    /// Per-trial seeds, in trial order.
    pub seeds: Vec<u64>,
    pub trials: usize,
    pub successes: usize,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub theory_margin: Option<f64>,
    pub certificate_passes: usize,
    pub sdp_runs: usize,
    pub sdp_integral: usize,
    pub witnesses: usize,
    pub errors: usize,
    pub soundness_violations: usize,
}

impl PointResult {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

/// Theoretical boundary in `b` for one value of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub a: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Row-major over `(a, b)`: all `b` for the first `a`, then the next.
    pub points: Vec<PointResult>,
    pub boundary: Vec<BoundaryPoint>,
    pub records: Vec<TrialRecord>,
}

impl SweepResult {
    pub fn soundness_violations(&self) -> usize {
        self.points.iter().map(|p| p.soundness_violations).sum()
    }

    /// Points with the given `a`, in increasing `b`.
    pub fn row(&self, a: f64) -> Vec<&PointResult> {
        self.points.iter().filter(|p| p.a == a).collect()
    }
}

/// `b` where the success rate first drops from `>= 1/2` to `< 1/2` along
/// increasing `b`, linearly interpolated.
pub fn crossing_half(row: &[&PointResult]) -> Option<f64> {
    row.windows(2).find_map(|w| {
        let (r0, r1) = (w[0].success_rate(), w[1].success_rate());
        (r0 >= 0.5 && r1 < 0.5).then(|| w[0].b + (r0 - 0.5) / (r0 - r1) * (w[1].b - w[0].b))
    })
}

/// SBM: `(sqrt a -/+ sqrt 2)^2`. PDS: roots of `rho f(a, b) = 1`.
pub fn theory_boundary(kind: ModelKind, a: f64, rho: Option<f64>) -> BoundaryPoint {
    match kind {
        ModelKind::Sbm => {
            let s = a.sqrt();
            let lower = (s > 2f64.sqrt()).then(|| (s - 2f64.sqrt()).powi(2));
            BoundaryPoint {
                a,
                lower,
                upper: Some((s + 2f64.sqrt()).powi(2)),
            }
        }
        ModelKind::Pds => {
            let root = |branch| rho.and_then(|r| phase_boundary(a, r, branch).ok());
            BoundaryPoint {
                a,
                lower: root(Branch::Lower),
                upper: root(Branch::Upper),
            }
        }
        ModelKind::PlantedCluster => BoundaryPoint {
            a,
            lower: None,
            upper: None,
        },
    }
}

/// Runs `trials` instances at every grid point on a pool of
/// `config.threads` workers. Point `i` uses seed `derive_seed(base_seed, i)`
/// and its trial `t` uses `derive_seed(point_seed, t)`, so output does not
/// depend on scheduling.
pub fn sweep_phase_diagram(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut grid = Vec::new();
    for &a in &config.a_grid {
        for &b in &config.b_grid {
            let idx = grid.len() as u64;
            let params = config
                .params(a, b)?
                .with_seed(derive_seed(config.base_seed, idx));
            grid.push(params);
        }
    }
    let tasks: Vec<(usize, u64)> = (0..grid.len())
        .flat_map(|p| (0..config.trials as u64).map(move |t| (p, t)))
        .collect();
    let run = |&(p, t): &(usize, u64)| {
        let method = match config.method {
            Method::Certificate if is_audited(t, config.audit_fraction) => Method::Both,
            m => m,
        };
        let cfg = TrialConfig {
            method,
            solver: config.solver,
            integral_tol: config.integral_tol,
        };
        run_trial_with(&grid[p], &cfg, t)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let records: Vec<TrialRecord> = pool.install(|| tasks.par_iter().map(run).collect());

    let points = grid
        .iter()
        .zip(records.chunks(config.trials))
        .map(|(params, recs)| summarize(params, recs))
        .collect();
    let boundary = config
        .a_grid
        .iter()
        .map(|&a| theory_boundary(config.kind, a, config.rho))
        .collect();
    Ok(SweepResult {
        config: config.clone(),
        points,
        boundary,
        records,
    })
}

fn summarize(params: &ModelParams, recs: &[TrialRecord]) -> PointResult {
    let count = |f: &dyn Fn(&TrialRecord) -> bool| recs.iter().filter(|r| f(r)).count();
    let successes = count(&|r| r.success() == Some(true));
    let (wilson_lo, wilson_hi) = wilson_interval(successes, recs.len());
    PointResult {
        a: params.a.unwrap_or(f64::NAN),
        b: params.b.unwrap_or(f64::NAN),
        rho: params.rho,
        n: params.n,
        point_seed: params.seed,
        seeds: recs.iter().map(|r| r.seed).collect(),
        trials: recs.len(),
        successes,
        wilson_lo,
        wilson_hi,
        theory_margin: theory_margin(params),
        certificate_passes: count(&|r| r.certificate_pass == Some(true)),
        sdp_runs: count(&|r| r.sdp_integral.is_some()),
        sdp_integral: count(&|r| r.sdp_integral == Some(true)),
        witnesses: count(&|r| r.witness_found == Some(true)),
        errors: count(&|r| r.error.is_some()),
        soundness_violations: count(&|r| r.soundness_violation()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson_interval(8, 10);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4, "{lo} {hi}");
        let (lo, hi) = wilson_interval(0, 20);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.1611).abs() < 1e-4);
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
    }

    #[test]
    fn audit_schedule() {
        let audited = (0..50).filter(|&t| is_audited(t, 0.1)).count();
        assert_eq!(audited, 5);
        assert_eq!((0..7).filter(|&t| is_audited(t, 1.0)).count(), 7);
        assert_eq!((0..7).filter(|&t| is_audited(t, 0.0)).count(), 0);
    }

    #[test]
    fn single_point_sweep() {
        let mut cfg = SweepConfig::new(ModelKind::Sbm, 40, vec![9.0], vec![1.0]);
        cfg.trials = 3;
        cfg.audit_fraction = 0.0;
        let res = sweep_phase_diagram(&cfg).unwrap();
        assert_eq!(res.points.len(), 1);
        let p = &res.points[0];
        assert_eq!(p.trials, 3);
        assert!(p.successes <= p.trials);
        assert!(p.wilson_lo <= p.wilson_hi);
        assert_eq!(p.seeds.len(), 3);
        assert_eq!(p.sdp_runs, 0);
    }

    #[test]
    fn crossing_interpolates() {
        let mk = |b: f64, s: usize| PointResult {
            a: 1.0,
            b,
            rho: None,
            n: 2,
            point_seed: 0,
            seeds: vec![],
            trials: 10,
            successes: s,
            wilson_lo: 0.0,
            wilson_hi: 1.0,
            theory_margin: None,
            certificate_passes: 0,
            sdp_runs: 0,
            sdp_integral: 0,
            witnesses: 0,
            errors: 0,
            soundness_violations: 0,
        };
        let pts = [mk(1.0, 10), mk(2.0, 7), mk(3.0, 1)];
        let row: Vec<&PointResult> = pts.iter().collect();
        assert!((crossing_half(&row).unwrap() - (2.0 + 0.2 / 0.6)).abs() < 1e-12);
        assert_eq!(crossing_half(&row[..2]), None);
    }

    #[test]
    fn sbm_boundary_closed_form() {
        let bp = theory_boundary(ModelKind::Sbm, 9.0, None);
        assert!((bp.lower.unwrap() - (3.0 - 2f64.sqrt()).powi(2)).abs() < 1e-12);
        assert_eq!(theory_boundary(ModelKind::Sbm, 1.0, None).lower, None);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = SweepConfig::new(ModelKind::Sbm, 40, vec![9.0], vec![2.0, 1.0]);
        assert!(sweep_phase_diagram(&cfg).is_err());
        cfg.b_grid = vec![1.0];
        cfg.trials = 0;
        assert!(sweep_phase_diagram(&cfg).is_err());
        let cfg = SweepConfig::new(ModelKind::Pds, 40, vec![9.0], vec![1.0]);
        assert!(sweep_phase_diagram(&cfg).is_err());
    }
}
