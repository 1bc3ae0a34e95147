//! First-order solver for the two cluster-recovery SDPs.
//!
//! SBM:  max <A, Y>  s.t.  Y psd,  Y_ii = 1,  <J, Y> = 0
//! PDS:  max <A, Z>  s.t.  Z psd,  0 <= Z_ij,  Z_ii <= 1,  tr Z = K,  <J, Z> = K^2
//!
//! The `*Min` kinds replace max by min (the `a < b` regimes) and are solved
//! by maximizing `<-A, Y>`.
//!
//! Both programs are split into convex sets whose projections are cheap and
//! solved with consensus ADMM: each block `i` keeps a local copy `X_i` and a
//! scaled dual `U_i`, and the consensus iterate is
//! `Z = proj_psd(mean_i(X_i + U_i))`. The objective rides on the affine
//! block, whose update is `proj_affine(Z - U + C / penalty)`. For SBM there
//! is a single block and this is plain two-block ADMM.

use std::collections::VecDeque;

use faer::linalg::solvers::Solve;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Assignment, AssignmentKind, Graph};
use crate::symlin::{eig_sym, eigenvalues_sym, project_psd_eig, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    SbmMax,
    SbmMin,
    PdsMax,
    PdsMin,
}

impl ProblemKind {
    pub fn is_sbm(self) -> bool {
        matches!(self, ProblemKind::SbmMax | ProblemKind::SbmMin)
    }

    pub fn is_min(self) -> bool {
        matches!(self, ProblemKind::SbmMin | ProblemKind::PdsMin)
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub kind: ProblemKind,
    pub adjacency: SymMatrix,
    /// Cluster size, required by the PDS kinds.
    pub k: Option<usize>,
}

impl SdpProblem {
    pub fn new(kind: ProblemKind, adjacency: SymMatrix, k: Option<usize>) -> Result<Self> {
        let problem = Self { kind, adjacency, k };
        problem.validate()?;
        Ok(problem)
    }

    pub fn from_graph(kind: ProblemKind, g: &Graph, k: Option<usize>) -> Result<Self> {
        Self::new(kind, g.adjacency(), k)
    }

    pub fn n(&self) -> usize {
        self.adjacency.dim()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidProblem("empty graph".into()));
        }
        let a = &self.adjacency;
        for i in 0..n {
            if a.get(i, i) != 0.0 {
                return Err(Error::InvalidProblem("adjacency diagonal must be zero".into()));
            }
            for j in 0..n {
                let v = a.get(i, j);
                if v != 0.0 && v != 1.0 {
                    return Err(Error::InvalidProblem("adjacency must be 0/1".into()));
                }
            }
        }
        if self.kind.is_sbm() {
            if n % 2 != 0 {
                return Err(Error::InvalidProblem(format!("SBM needs even n, got {n}")));
            }
        } else {
            match self.k {
                Some(k) if (1..=n).contains(&k) => {}
                Some(k) => {
                    return Err(Error::InvalidProblem(format!(
                        "cluster size K = {k} outside [1, {n}]"
                    )))
                }
                None => return Err(Error::InvalidProblem("PDS needs a cluster size".into())),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Initial ADMM penalty.
    pub penalty: f64,
    /// Residual balancing of the penalty.
    pub adapt_penalty: bool,
    /// Anderson acceleration depth; 0 runs plain ADMM.
    pub anderson_memory: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: 5000,
            penalty: 1.0,
            adapt_penalty: true,
            anderson_memory: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIters,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub kind: ProblemKind,
    pub k: Option<usize>,
    /// Consensus iterate (the average of the block iterates).
    pub y: SymMatrix,
    /// `<A, Y>` with the original sign of `A`.
    pub objective: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub penalty: f64,
    pub status: SolveStatus,
}

/// Largest violation of any constraint of the problem at `y`, including
/// `max(0, -lambda_min(y))`.
pub fn constraint_violation(kind: ProblemKind, k: Option<usize>, y: &SymMatrix) -> Result<f64> {
    let n = y.dim();
    let mut worst = 0.0_f64;
    if kind.is_sbm() {
        for i in 0..n {
            worst = worst.max((y.get(i, i) - 1.0).abs());
        }
        worst = worst.max(y.sum().abs());
    } else {
        let k = k.ok_or_else(|| Error::InvalidProblem("PDS needs a cluster size".into()))? as f64;
        for i in 0..n {
            worst = worst.max(y.get(i, i) - 1.0);
            for j in 0..n {
                worst = worst.max(-y.get(i, j));
            }
        }
        worst = worst.max((y.trace() - k).abs());
        worst = worst.max((y.sum() - k * k).abs());
    }
    let min_eig = eigenvalues_sym(y)?.first().copied().unwrap_or(0.0);
    Ok(worst.max(-min_eig))
}

#[derive(Debug, Clone, Copy)]
enum Block {
    SbmAffine,
    PdsAffine(f64),
    PdsBox,
}

/// Least-squares projection onto `{Y_ii = 1, <J, Y> = 0}`.
///
/// With multipliers `mu_i` on the diagonal constraints and `nu` on the grand
/// sum, `Y' = Y - diag(mu) - nu J`. Solving the constraints gives
/// `nu = (sum(Y) - tr(Y) + n) / (n^2 - n)`: every off-diagonal entry shifts by
/// `-nu` and the diagonal is set to one.
fn project_sbm_affine(y: &mut SymMatrix) {
    let n = y.dim();
    let nf = n as f64;
    let nu = (y.sum() - y.trace() + nf) / (nf * nf - nf);
    y.map_entries(|i, j, v| if i == j { 1.0 } else { v - nu });
}

/// Least-squares projection onto `{tr Y = K, <J, Y> = K^2}`:
/// `Y' = Y - alpha I - beta J` with
/// `beta = (sum(Y) - tr(Y) - K^2 + K) / (n^2 - n)`, `alpha = (tr(Y) - K)/n - beta`.
fn project_pds_affine(y: &mut SymMatrix, k: f64) {
    let n = y.dim() as f64;
    let (sum, tr) = (y.sum(), y.trace());
    let beta = if n > 1.0 {
        (sum - tr - k * k + k) / (n * n - n)
    } else {
        0.0
    };
    let alpha = (tr - k) / n - beta;
    y.map_entries(|i, j, v| if i == j { v - alpha - beta } else { v - beta });
}

/// Entrywise box: `Y_ij >= 0` everywhere and `Y_ii <= 1`.
fn project_pds_box(y: &mut SymMatrix) {
    y.map_entries(|i, j, v| {
        if i == j {
            v.clamp(0.0, 1.0)
        } else {
            v.max(0.0)
        }
    });
}

fn initial_point(problem: &SdpProblem) -> SymMatrix {
    let n = problem.n();
    let nf = n as f64;
    if problem.kind.is_sbm() {
        // n/(n-1) (I - J/n): feasible and strictly inside the PSD cone on 1-perp.
        let mut y = SymMatrix::zeros(n);
        project_sbm_affine(&mut y);
        y
    } else {
        // alpha I + beta J, feasible for every 1 <= K <= n.
        let k = problem.k.unwrap_or(1) as f64;
        let beta = if n > 1 {
            (k * k - k) / (nf * nf - nf)
        } else {
            0.0
        };
        let alpha = k / nf - beta;
        SymMatrix::identity(n)
            .scaled(alpha)
            .add_scaled(beta, &SymMatrix::ones(n))
    }
}

const DIVERGENCE_LIMIT: f64 = 1e6;
const PENALTY_MIN: f64 = 1e-3;
const PENALTY_MAX: f64 = 1e3;
const BALANCE_RATIO: f64 = 10.0;
const ADAPT_EVERY: usize = 50;
const ANDERSON_REG: f64 = 1e-10;
const SAFEGUARD: f64 = 10.0;

/// One ADMM sweep over the state `[Z, U_1, .., U_m]`, each a row-major
/// `n x n` slab.
struct Splitting {
    n: usize,
    blocks: Vec<Block>,
    cost: SymMatrix,
}

struct Sweep {
    state: Vec<f64>,
    primal: f64,
    dual: f64,
}

impl Splitting {
    fn slab<'s>(&self, state: &'s [f64], idx: usize) -> &'s [f64] {
        let nn = self.n * self.n;
        &state[idx * nn..(idx + 1) * nn]
    }

    fn sweep(&self, state: &[f64], penalty: f64) -> Result<Sweep> {
        let n = self.n;
        let nn = n * n;
        let m = self.blocks.len();
        let z = self.slab(state, 0);
        let mut avg = vec![0.0; nn];
        let mut locals = Vec::with_capacity(m);
        for (b, block) in self.blocks.iter().enumerate() {
            let u = self.slab(state, b + 1);
            let mut v = SymMatrix::from_raw(n, z.iter().zip(u).map(|(z, u)| z - u).collect());
            match *block {
                Block::SbmAffine => {
                    v = v.add_scaled(1.0 / penalty, &self.cost);
                    project_sbm_affine(&mut v);
                }
                Block::PdsAffine(k) => {
                    v = v.add_scaled(1.0 / penalty, &self.cost);
                    project_pds_affine(&mut v, k);
                }
                Block::PdsBox => project_pds_box(&mut v),
            }
            for ((a, x), u) in avg.iter_mut().zip(v.as_slice()).zip(u) {
                *a += x + u;
            }
            locals.push(v);
        }
        avg.iter_mut().for_each(|a| *a /= m as f64);
        let z_next = project_psd_eig(&SymMatrix::from_raw(n, avg))?.0;

        let mut next = Vec::with_capacity(state.len());
        next.extend_from_slice(z_next.as_slice());
        let mut primal_sq = 0.0;
        for (b, x) in locals.iter().enumerate() {
            let u = self.slab(state, b + 1);
            for ((x, u), z) in x.as_slice().iter().zip(u).zip(z_next.as_slice()) {
                let r = x - z;
                primal_sq += r * r;
                next.push(u + r);
            }
        }
        let step: f64 = z_next
            .as_slice()
            .iter()
            .zip(z)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(Sweep {
            state: next,
            primal: primal_sq.sqrt(),
            dual: penalty * (m as f64).sqrt() * step.sqrt(),
        })
    }
}

/// Type-II Anderson acceleration of the fixed-point map `x -> g(x)`.
struct Anderson {
    memory: usize,
    dg: VecDeque<Vec<f64>>,
    df: VecDeque<Vec<f64>>,
    /// Gram matrix of `df`, row by row.
    gram: VecDeque<VecDeque<f64>>,
    last: Option<(Vec<f64>, Vec<f64>)>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Anderson {
    fn new(memory: usize) -> Self {
        Self {
            memory,
            dg: VecDeque::new(),
            df: VecDeque::new(),
            gram: VecDeque::new(),
            last: None,
        }
    }

    fn reset(&mut self) {
        self.dg.clear();
        self.df.clear();
        self.gram.clear();
        self.last = None;
    }

    fn push(&mut self, dg: Vec<f64>, df: Vec<f64>) {
        if self.df.len() == self.memory {
            self.dg.pop_front();
            self.df.pop_front();
            self.gram.pop_front();
            self.gram.iter_mut().for_each(|row| {
                row.pop_front();
            });
        }
        let dots: Vec<f64> = self.df.iter().map(|v| dot(v, &df)).collect();
        for (row, d) in self.gram.iter_mut().zip(&dots) {
            row.push_back(*d);
        }
        let mut row: VecDeque<f64> = dots.into();
        row.push_back(dot(&df, &df));
        self.gram.push_back(row);
        self.dg.push_back(dg);
        self.df.push_back(df);
    }

    /// Next iterate given the current point `x` and its image `g`.
    fn next(&mut self, x: &[f64], g: Vec<f64>) -> Vec<f64> {
        if self.memory == 0 {
            return g;
        }
        let f: Vec<f64> = g.iter().zip(x).map(|(g, x)| g - x).collect();
        if let Some((g_prev, f_prev)) = self.last.take() {
            let dg = g.iter().zip(&g_prev).map(|(a, b)| a - b).collect();
            let df = f.iter().zip(&f_prev).map(|(a, b)| a - b).collect();
            self.push(dg, df);
        }
        let k = self.df.len();
        let mut out = g.clone();
        if k > 0 {
            let trace: f64 = (0..k).map(|i| self.gram[i][i]).sum();
            let shift = ANDERSON_REG * trace + f64::MIN_POSITIVE;
            let gram = Mat::<f64>::from_fn(k, k, |i, j| {
                self.gram[i][j] + if i == j { shift } else { 0.0 }
            });
            let rhs = Mat::<f64>::from_fn(k, 1, |i, _| dot(&self.df[i], &f));
            let gamma = gram.partial_piv_lu().solve(&rhs);
            if (0..k).all(|i| gamma[(i, 0)].is_finite()) {
                for (i, dg) in self.dg.iter().enumerate() {
                    let c = gamma[(i, 0)];
                    out.iter_mut().zip(dg).for_each(|(o, d)| *o -= c * d);
                }
            } else {
                let last = self.last.take();
                self.reset();
                self.last = last;
            }
        }
        self.last = Some((g, f));
        out
    }
}

/// Solves the relaxation with consensus ADMM.
///
/// Converged means `max(primal, dual) <= tol sqrt(n)` where
/// `primal = sqrt(sum_i |X_i - Z|_F^2)` and `dual = penalty sqrt(m) |Z - Z_prev|_F`.
/// Runs that hit the iteration cap return status `MaxIters` with the last
/// iterate.
pub fn solve(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    if !(opts.tol > 0.0) || !(opts.penalty > 0.0) {
        return Err(Error::InvalidProblem("tolerance and penalty must be positive".into()));
    }
    let n = problem.n();
    let nn = n * n;
    let cost = if problem.kind.is_min() {
        problem.adjacency.scaled(-1.0)
    } else {
        problem.adjacency.clone()
    };
    let blocks: Vec<Block> = if problem.kind.is_sbm() {
        vec![Block::SbmAffine]
    } else {
        let k = problem.k.unwrap() as f64;
        vec![Block::PdsAffine(k), Block::PdsBox]
    };
    let splitting = Splitting { n, blocks, cost };

    let mut state = vec![0.0; nn * (splitting.blocks.len() + 1)];
    state[..nn].copy_from_slice(initial_point(problem).as_slice());
    let mut accel = Anderson::new(opts.anderson_memory);
    let mut penalty = opts.penalty.clamp(PENALTY_MIN, PENALTY_MAX);
    let threshold = opts.tol * (n as f64).sqrt();
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut status = SolveStatus::MaxIters;
    let mut iterations = 0;
    let mut z = state[..nn].to_vec();

    // Plain image of the last accepted point and the residual bound the
    // accelerated point must respect.
    let mut fallback: Option<(Vec<f64>, f64)> = None;

    for it in 1..=opts.max_iters {
        iterations = it;
        let sweep = splitting.sweep(&state, penalty)?;
        let fixed_point_res = sweep
            .state
            .iter()
            .zip(&state)
            .map(|(g, x)| (g - x) * (g - x))
            .sum::<f64>()
            .sqrt();
        if let Some((plain, bound)) = fallback.take() {
            if !(fixed_point_res <= bound) {
                state = plain;
                accel.reset();
                continue;
            }
        }
        primal = sweep.primal;
        dual = sweep.dual;
        z.copy_from_slice(&sweep.state[..nn]);

        if !primal.is_finite() || !dual.is_finite() || primal.max(dual) > DIVERGENCE_LIMIT {
            return Err(Error::Diverged {
                iterations: it,
                residual: primal.max(dual),
            });
        }
        if primal <= threshold && dual <= threshold {
            status = SolveStatus::Converged;
            break;
        }
        let plain = sweep.state.clone();
        state = accel.next(&state, sweep.state);
        if state != plain {
            fallback = Some((plain, SAFEGUARD * fixed_point_res));
        }

        if opts.adapt_penalty && it % ADAPT_EVERY == 0 {
            let scale = if primal > BALANCE_RATIO * dual {
                2.0
            } else if dual > BALANCE_RATIO * primal {
                0.5
            } else {
                1.0
            };
            let next = (penalty * scale).clamp(PENALTY_MIN, PENALTY_MAX);
            if next != penalty {
                // Scaled duals are U = Lambda / penalty.
                let rescale = penalty / next;
                state[nn..].iter_mut().for_each(|u| *u *= rescale);
                penalty = next;
                accel.reset();
            }
        }
    }

    let y = SymMatrix::from_raw(n, z);
    let objective = problem.adjacency.dot(&y);
    Ok(SdpSolution {
        kind: problem.kind,
        k: problem.k,
        y,
        objective,
        iterations,
        primal_residual: primal,
        dual_residual: dual,
        penalty,
        status,
    })
}

impl SdpSolution {
    pub fn is_converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn constraint_violation(&self) -> Result<f64> {
        constraint_violation(self.kind, self.k, &self.y)
    }
}

/// Rounds a converged solution to a cluster assignment via the leading
/// eigenvector of `Y`.
///
/// SBM: the `n/2` largest entries get `+1`, then the global sign is fixed so
/// that vertex 0 is `+1`. PDS: the eigenvector is oriented to a nonnegative
/// sum and its `K` largest entries form the cluster. Ties go to the lower
/// vertex index.
pub fn round_solution(sol: &SdpSolution, kind: ProblemKind, k: Option<usize>) -> Result<Assignment> {
    if !sol.is_converged() {
        return Err(Error::NotConverged);
    }
    round_matrix(&sol.y, kind, k)
}

/// Rounding applied to an arbitrary symmetric matrix.
pub fn round_matrix(y: &SymMatrix, kind: ProblemKind, k: Option<usize>) -> Result<Assignment> {
    let n = y.dim();
    let eig = eig_sym(y)?;
    let mut lead: Vec<f64> = eig.vector(n - 1).to_vec();
    if !kind.is_sbm() && lead.iter().sum::<f64>() < 0.0 {
        lead.iter_mut().for_each(|v| *v = -*v);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lead[j].total_cmp(&lead[i]).then(i.cmp(&j)));
    if kind.is_sbm() {
        if n % 2 != 0 {
            return Err(Error::OddN(n));
        }
        let mut values = vec![-1i8; n];
        for &i in &order[..n / 2] {
            values[i] = 1;
        }
        if values[0] == -1 {
            values.iter_mut().for_each(|v| *v = -*v);
        }
        Assignment::plus_minus(values)
    } else {
        let k = k.ok_or_else(|| Error::InvalidProblem("PDS needs a cluster size".into()))?;
        if k == 0 || k > n {
            return Err(Error::InvalidProblem(format!("K = {k} outside [1, {n}]")));
        }
        Assignment::indicator_of(n, &order[..k])
    }
}

/// Whether `max |Y - x x^T| <= tol` for the truth labels `x`.
pub fn is_integral(sol: &SdpSolution, truth: &Assignment, tol: f64) -> Result<bool> {
    matrix_is_integral(&sol.y, truth, tol)
}

pub fn matrix_is_integral(y: &SymMatrix, truth: &Assignment, tol: f64) -> Result<bool> {
    if truth.len() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: y.dim(),
            got: truth.len(),
        });
    }
    if truth.kind() == AssignmentKind::Clusters {
        return Err(Error::InvalidTruth("need +/-1 or 0/1 labels".into()));
    }
    let x = truth.as_f64();
    let n = y.dim();
    for i in 0..n {
        for j in 0..n {
            if (y.get(i, j) - x[i] * x[j]).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Default entrywise tolerance for declaring the SDP solution integral.
pub const INTEGRAL_TOL: f64 = 1e-3;

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cliques() -> Graph {
        Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap()
    }

    #[test]
    fn sbm_affine_projection_is_feasible_and_orthogonal() {
        let y = SymMatrix::from_fn(5, |i, j| (i * 3 + j * 3) as f64 * 0.1 + (i == j) as u8 as f64);
        let mut p = y.clone();
        project_sbm_affine(&mut p);
        assert!(p.diag().iter().all(|&d| d == 1.0));
        assert!(p.sum().abs() < 1e-12);
        // y - p lies in span{E_ii, J}: its off-diagonal part is constant.
        let d = y.sub(&p);
        let off = d.get(0, 1);
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert!((d.get(i, j) - off).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pds_affine_projection_is_feasible() {
        let y = SymMatrix::from_fn(6, |i, j| ((i + 2 * j) % 5) as f64 * 0.3);
        let mut p = y.clone();
        project_pds_affine(&mut p, 3.0);
        assert!((p.trace() - 3.0).abs() < 1e-12);
        assert!((p.sum() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn initial_points_are_feasible() {
        let g = Graph::empty(6);
        for (kind, k) in [(ProblemKind::SbmMax, None), (ProblemKind::PdsMax, Some(2))] {
            let problem = SdpProblem::from_graph(kind, &g, k).unwrap();
            let y = initial_point(&problem);
            assert!(constraint_violation(kind, k, &y).unwrap() < 1e-12);
        }
    }

    #[test]
    fn sbm_two_cliques() {
        let problem = SdpProblem::from_graph(ProblemKind::SbmMax, &two_cliques(), None).unwrap();
        let sol = solve(&problem, &SolverOptions::default()).unwrap();
        assert!(sol.is_converged());
        let truth = Assignment::plus_minus(vec![1, 1, -1, -1]).unwrap();
        assert!(is_integral(&sol, &truth, 1e-4).unwrap());
        assert!((sol.objective - 4.0).abs() < 1e-4);
        assert_eq!(round_solution(&sol, problem.kind, None).unwrap(), truth);
    }

    #[test]
    fn pds_single_edge() {
        let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
        let problem = SdpProblem::from_graph(ProblemKind::PdsMax, &g, Some(2)).unwrap();
        let sol = solve(&problem, &SolverOptions::default()).unwrap();
        assert!(sol.is_converged());
        let truth = Assignment::indicator(vec![1, 1, 0, 0]).unwrap();
        assert!(is_integral(&sol, &truth, 1e-4).unwrap(), "{:?}", sol.y);
        assert!((sol.objective - 2.0).abs() < 1e-4);
        assert_eq!(round_solution(&sol, problem.kind, Some(2)).unwrap(), truth);
    }

    #[test]
    fn sbm_empty_graph_objective_zero() {
        let problem = SdpProblem::from_graph(ProblemKind::SbmMax, &Graph::empty(6), None).unwrap();
        let sol = solve(&problem, &SolverOptions::default()).unwrap();
        assert!(sol.is_converged());
        assert!(sol.objective.abs() < 1e-12);
    }

    #[test]
    fn invalid_problems() {
        assert!(SdpProblem::from_graph(ProblemKind::SbmMax, &Graph::empty(5), None).is_err());
        assert!(SdpProblem::from_graph(ProblemKind::PdsMax, &Graph::empty(5), None).is_err());
        assert!(SdpProblem::from_graph(ProblemKind::PdsMax, &Graph::empty(5), Some(6)).is_err());
        let bad = SymMatrix::identity(4);
        assert!(SdpProblem::new(ProblemKind::SbmMax, bad, None).is_err());
    }

    fn fake_solution(y: SymMatrix, kind: ProblemKind, k: Option<usize>) -> SdpSolution {
        SdpSolution {
            kind,
            k,
            objective: 0.0,
            y,
            iterations: 0,
            primal_residual: 0.0,
            dual_residual: 0.0,
            penalty: 1.0,
            status: SolveStatus::Converged,
        }
    }

    #[test]
    fn rounding_exact_rank_one() {
        let sigma = Assignment::plus_minus(vec![-1, 1, -1, 1, 1, -1]).unwrap();
        let sol = fake_solution(sigma.outer().unwrap(), ProblemKind::SbmMax, None);
        let r = round_solution(&sol, ProblemKind::SbmMax, None).unwrap();
        let flipped: Vec<i8> = sigma.values().iter().map(|v| -v).collect();
        assert_eq!(r.values(), &flipped[..]);

        let xi = Assignment::indicator(vec![0, 1, 1, 0, 1]).unwrap();
        let sol = fake_solution(xi.outer().unwrap(), ProblemKind::PdsMax, Some(3));
        assert_eq!(round_solution(&sol, ProblemKind::PdsMax, Some(3)).unwrap(), xi);
    }

    #[test]
    fn rounding_requires_convergence() {
        let mut sol = fake_solution(SymMatrix::identity(4), ProblemKind::SbmMax, None);
        sol.status = SolveStatus::MaxIters;
        assert_eq!(
            round_solution(&sol, ProblemKind::SbmMax, None).unwrap_err(),
            Error::NotConverged
        );
    }

    #[test]
    fn integral_checks() {
        let t = Assignment::plus_minus(vec![1, -1, 1, -1]).unwrap();
        let y = t.outer().unwrap();
        let sol = fake_solution(y.clone(), ProblemKind::SbmMax, None);
        assert!(is_integral(&sol, &t, 1e-3).unwrap());
        let mut bumped = y;
        bumped.set(0, 1, bumped.get(0, 1) + 0.5);
        let sol = fake_solution(bumped, ProblemKind::SbmMax, None);
        assert!(!is_integral(&sol, &t, 1e-3).unwrap());
        let short = Assignment::plus_minus(vec![1, -1]).unwrap();
        assert!(matches!(
            is_integral(&sol, &short, 1e-3),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
