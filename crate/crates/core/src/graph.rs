//! Planted random graph models: parameters, samplers, expected adjacency and
//! the monotone adversary.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::symlin::SymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Binary symmetric stochastic block model: two clusters of size n/2.
    Sbm,
    /// Planted dense subgraph: one cluster of size K.
    Pds,
    /// General planted cluster model: r clusters of size K plus outliers.
    PlantedCluster,
}

/// Parameters of a planted cluster model.
///
/// Edge probabilities are stored directly. When built from intensities
/// `(a, b)` they are `p = a ln(n)/n`, `q = b ln(n)/n`; the intensities are
/// kept because the dual certificates need them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub n: usize,
    /// Number of clusters.
    pub r: usize,
    /// Cluster size.
    pub k: usize,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub rho: Option<f64>,
    pub p: f64,
    pub q: f64,
    pub seed: u64,
}

fn log_scale(n: usize) -> f64 {
    (n as f64).ln() / n as f64
}

impl ModelParams {
    /// SBM with `p = a ln n / n`, `q = b ln n / n`.
    pub fn sbm(n: usize, a: f64, b: f64) -> Result<Self> {
        check_intensity(a)?;
        check_intensity(b)?;
        let s = log_scale(n);
        let mut params = Self::sbm_with_probabilities(n, a * s, b * s)?;
        params.a = Some(a);
        params.b = Some(b);
        Ok(params)
    }

    pub fn sbm_with_probabilities(n: usize, p: f64, q: f64) -> Result<Self> {
        let params = Self {
            kind: ModelKind::Sbm,
            n,
            r: 2,
            k: n / 2,
            a: None,
            b: None,
            rho: None,
            p,
            q,
            seed: 0,
        };
        params.validate()?;
        Ok(params)
    }

    /// Planted dense subgraph with `K = floor(rho n)`.
    pub fn pds(n: usize, rho: f64, a: f64, b: f64) -> Result<Self> {
        check_intensity(a)?;
        check_intensity(b)?;
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParams(format!("rho must lie in (0, 1), got {rho}")));
        }
        let k = (rho * n as f64).floor() as usize;
        let s = log_scale(n);
        let mut params = Self::pds_with_probabilities(n, k, a * s, b * s)?;
        params.a = Some(a);
        params.b = Some(b);
        params.rho = Some(rho);
        Ok(params)
    }

    pub fn pds_with_probabilities(n: usize, k: usize, p: f64, q: f64) -> Result<Self> {
        let params = Self {
            kind: ModelKind::Pds,
            n,
            r: 1,
            k,
            a: None,
            b: None,
            rho: None,
            p,
            q,
            seed: 0,
        };
        params.validate()?;
        Ok(params)
    }

    /// General planted cluster model (sampling only).
    pub fn planted_cluster(n: usize, r: usize, k: usize, p: f64, q: f64) -> Result<Self> {
        let params = Self {
            kind: ModelKind::PlantedCluster,
            n,
            r,
            k,
            a: None,
            b: None,
            rho: None,
            p,
            q,
            seed: 0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Attaches intensities without changing `p` and `q`.
    pub fn with_intensities(mut self, a: f64, b: f64) -> Result<Self> {
        check_intensity(a)?;
        check_intensity(b)?;
        self.a = Some(a);
        self.b = Some(b);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} is outside [0, 1]"));
            }
        }
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.k == 0 {
            return bad("cluster size K must be positive".into());
        }
        if self.r.saturating_mul(self.k) > self.n {
            return bad(format!("r*K = {} exceeds n = {}", self.r * self.k, self.n));
        }
        match self.kind {
            ModelKind::Sbm => {
                if self.n % 2 != 0 {
                    return bad(format!("SBM requires even n, got {}", self.n));
                }
                if self.r != 2 || self.k != self.n / 2 {
                    return bad("SBM requires r = 2 and K = n/2".into());
                }
            }
            ModelKind::Pds => {
                if self.r != 1 {
                    return bad("PDS requires r = 1".into());
                }
                if let Some(rho) = self.rho {
                    if self.k != (rho * self.n as f64).floor() as usize {
                        return bad("PDS requires K = floor(rho n)".into());
                    }
                }
            }
            ModelKind::PlantedCluster => {
                if self.r == 0 {
                    return bad("need at least one cluster".into());
                }
            }
        }
        Ok(())
    }

    /// Recovery operations cover the SBM and PDS cases only.
    pub fn require_recoverable(&self) -> Result<()> {
        if self.kind == ModelKind::PlantedCluster && self.r > 2 {
            return Err(Error::InvalidParams(format!(
                "recovery is supported for r <= 2, got r = {}",
                self.r
            )));
        }
        Ok(())
    }

    /// Truth shape expected by this model.
    pub fn assignment_kind(&self) -> AssignmentKind {
        match self.kind {
            ModelKind::Sbm => AssignmentKind::PlusMinus,
            ModelKind::Pds => AssignmentKind::Indicator,
            ModelKind::PlantedCluster => AssignmentKind::Clusters,
        }
    }
}

fn check_intensity(v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeIntensity(v))
    }
}

/// Simple undirected graph stored as a dense symmetric 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u8>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![0; n * n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.insert_edge(i, j);
            }
        }
        g
    }

    /// Builds a graph from 0-based edges. Duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidParams(format!(
                    "edge ({}, {}) out of range for n = {n}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::InvalidParams(format!("self-loop at vertex {}", i + 1)));
            }
            g.insert_edge(i, j);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j] != 0
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.adj[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.adj[i * self.n..(i + 1) * self.n]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|&v| v as usize).sum()
    }

    fn insert_edge(&mut self, i: usize, j: usize) {
        if !self.has_edge(i, j) {
            self.adj[i * self.n + j] = 1;
            self.adj[j * self.n + i] = 1;
            self.m += 1;
        }
    }

    fn remove_edge(&mut self, i: usize, j: usize) {
        if self.has_edge(i, j) {
            self.adj[i * self.n + j] = 0;
            self.adj[j * self.n + i] = 0;
            self.m -= 1;
        }
    }

    /// Edges `(i, j)` with `i < j`, 0-based, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn adjacency(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| self.entry(i, j) as f64)
    }

    /// Number of neighbours of `i` inside the vertex set flagged by `members`.
    pub fn edges_into(&self, i: usize, members: &[bool]) -> usize {
        self.row(i)
            .iter()
            .zip(members)
            .filter(|(&e, &m)| e != 0 && m)
            .count()
    }

    /// Text format: `n m`, then one `i j` line per edge (1-based, `i < j`).
    pub fn to_edge_list_string(&self) -> String {
        let mut s = String::with_capacity(16 * (self.m + 1));
        let _ = writeln!(s, "{} {}", self.n, self.m);
        for (i, j) in self.edges() {
            let _ = writeln!(s, "{} {}", i + 1, j + 1);
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut g = Self::empty(n);
        let mut count = 0;
        for line in lines {
            let (i, j) = parse_pair(line)?;
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::Parse(format!("vertex out of range in line `{line}`")));
            }
            if i >= j {
                return Err(Error::Parse(format!("expected i < j in line `{line}`")));
            }
            g.insert_edge(i - 1, j - 1);
            count += 1;
        }
        if count != m || g.m != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges, found {count} ({} distinct)",
                g.m
            )));
        }
        Ok(g)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_edge_list(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list_string())?;
        Ok(())
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad integer `{t}`: {e}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(Error::Parse(format!("expected two integers, got `{line}`"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentKind {
    /// Balanced +/-1 labels (SBM).
    PlusMinus,
    /// 0/1 cluster indicator (PDS).
    Indicator,
    /// Cluster labels `1..=r`, 0 for outliers (general planted cluster model).
    Clusters,
}

/// A labelling of the vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    kind: AssignmentKind,
    values: Vec<i8>,
}

impl Assignment {
    /// Balanced +/-1 vector.
    pub fn plus_minus(values: Vec<i8>) -> Result<Self> {
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::UnbalancedTruth);
        }
        if values.iter().map(|&v| v as i64).sum::<i64>() != 0 {
            return Err(Error::UnbalancedTruth);
        }
        Ok(Self {
            kind: AssignmentKind::PlusMinus,
            values,
        })
    }

    /// 0/1 indicator.
    pub fn indicator(values: Vec<i8>) -> Result<Self> {
        if values.iter().any(|&v| v != 0 && v != 1) {
            return Err(Error::InvalidTruth("indicator entries must be 0 or 1".into()));
        }
        Ok(Self {
            kind: AssignmentKind::Indicator,
            values,
        })
    }

    /// Indicator of the given 0-based vertex set.
    pub fn indicator_of(n: usize, members: &[usize]) -> Result<Self> {
        let mut values = vec![0i8; n];
        for &i in members {
            if i >= n {
                return Err(Error::InvalidTruth(format!("vertex {} out of range", i + 1)));
            }
            values[i] = 1;
        }
        Self::indicator(values)
    }

    pub fn clusters(values: Vec<i8>) -> Result<Self> {
        if values.iter().any(|&v| v < 0) {
            return Err(Error::InvalidTruth("cluster labels must be non-negative".into()));
        }
        Ok(Self {
            kind: AssignmentKind::Clusters,
            values,
        })
    }

    pub fn kind(&self) -> AssignmentKind {
        self.kind
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of vertices in the (first) cluster.
    pub fn cluster_size(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1).count()
    }

    /// Whether `i` and `j` lie in a common cluster. Outliers share no cluster.
    pub fn same_cluster(&self, i: usize, j: usize) -> bool {
        let (u, v) = (self.values[i], self.values[j]);
        match self.kind {
            AssignmentKind::PlusMinus => u == v,
            AssignmentKind::Indicator | AssignmentKind::Clusters => u != 0 && u == v,
        }
    }

    pub fn members(&self) -> Vec<bool> {
        self.values.iter().map(|&v| v == 1).collect()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }

    /// The rank-one matrix `x x^T` for +/-1 or 0/1 labels.
    pub fn outer(&self) -> Result<SymMatrix> {
        if self.kind == AssignmentKind::Clusters {
            return Err(Error::InvalidTruth(
                "cluster labels have no rank-one lift".into(),
            ));
        }
        Ok(SymMatrix::outer(&self.as_f64()))
    }

    /// Checks the invariants for the given kind and (for indicators) size.
    pub fn require(&self, kind: AssignmentKind, k: Option<usize>) -> Result<()> {
        if self.kind != kind {
            return Err(match kind {
                AssignmentKind::PlusMinus => Error::UnbalancedTruth,
                _ => Error::InvalidTruth(format!("expected {kind:?}, got {:?}", self.kind)),
            });
        }
        if let (AssignmentKind::Indicator, Some(k)) = (kind, k) {
            let size = self.cluster_size();
            if size != k {
                return Err(Error::InvalidTruth(format!(
                    "indicator has {size} ones, expected K = {k}"
                )));
            }
        }
        Ok(())
    }

    /// Single line of space-separated entries.
    pub fn to_line(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        parts.join(" ") + "\n"
    }

    /// Parses a line of entries; any `-1` selects +/-1, otherwise 0/1.
    pub fn parse(text: &str) -> Result<Self> {
        let values: Vec<i8> = text
            .split_whitespace()
            .map(|t| {
                t.parse::<i8>()
                    .map_err(|e| Error::Parse(format!("bad assignment entry `{t}`: {e}")))
            })
            .collect::<Result<_>>()?;
        if values.iter().any(|&v| v == -1) {
            Self::plus_minus(values)
        } else {
            Self::indicator(values)
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_line())?;
        Ok(())
    }
}

fn draw_truth(params: &ModelParams, rng: &mut impl Rng) -> Result<Assignment> {
    let n = params.n;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    match params.kind {
        ModelKind::Sbm => {
            let mut values = vec![-1i8; n];
            for &i in &perm[..n / 2] {
                values[i] = 1;
            }
            Assignment::plus_minus(values)
        }
        ModelKind::Pds => Assignment::indicator_of(n, &perm[..params.k]),
        ModelKind::PlantedCluster => {
            let mut values = vec![0i8; n];
            for c in 0..params.r {
                for &i in &perm[c * params.k..(c + 1) * params.k] {
                    values[i] = (c + 1) as i8;
                }
            }
            Assignment::clusters(values)
        }
    }
}

fn check_truth(params: &ModelParams, truth: &Assignment) -> Result<()> {
    if truth.len() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            got: truth.len(),
        });
    }
    match params.kind {
        ModelKind::Sbm => truth.require(AssignmentKind::PlusMinus, None),
        ModelKind::Pds => truth.require(AssignmentKind::Indicator, Some(params.k)),
        ModelKind::PlantedCluster => {
            truth.require(AssignmentKind::Clusters, None)?;
            for c in 1..=params.r {
                let size = truth.values().iter().filter(|&&v| v as usize == c).count();
                if size != params.k {
                    return Err(Error::InvalidTruth(format!(
                        "cluster {c} has {size} vertices, expected {}",
                        params.k
                    )));
                }
            }
            if truth.values().iter().any(|&v| v as usize > params.r) {
                return Err(Error::InvalidTruth("label exceeds r".into()));
            }
            Ok(())
        }
    }
}

/// Samples a graph from the planted model.
///
/// The ground truth, when not supplied, is drawn uniformly (a random balanced
/// bisection, or a random K-subset) from the same seeded stream, before the
/// edges. Pairs `i < j` are visited in lexicographic order.
pub fn sample_planted(
    params: &ModelParams,
    truth: Option<&Assignment>,
) -> Result<(Graph, Assignment)> {
    params.validate()?;
    let mut rng = rng_from_seed(params.seed);
    let truth = match truth {
        Some(t) => {
            check_truth(params, t)?;
            t.clone()
        }
        None => draw_truth(params, &mut rng)?,
    };
    let n = params.n;
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let prob = if truth.same_cluster(i, j) {
                params.p
            } else {
                params.q
            };
            if rng.random::<f64>() < prob {
                g.insert_edge(i, j);
            }
        }
    }
    Ok((g, truth))
}

/// Erdos-Renyi graph `G(n, p)`; pairs `i < j` visited in lexicographic order.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                g.insert_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Entrywise mean of the adjacency matrix: `p` within clusters, `q` across,
/// zero on the diagonal.
pub fn expected_adjacency(params: &ModelParams, truth: &Assignment) -> Result<SymMatrix> {
    params.validate()?;
    check_truth(params, truth)?;
    Ok(SymMatrix::from_fn(params.n, |i, j| {
        if i == j {
            0.0
        } else if truth.same_cluster(i, j) {
            params.p
        } else {
            params.q
        }
    }))
}

/// Adds within-cluster edges and deletes cross-cluster edges.
///
/// For an indicator truth, "within" means both endpoints in the cluster and
/// every other pair counts as cross.
pub fn apply_monotone_adversary(
    g: &Graph,
    truth: &Assignment,
    add_within: &[(usize, usize)],
    remove_cross: &[(usize, usize)],
) -> Result<Graph> {
    if truth.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: truth.len(),
        });
    }
    let n = g.n();
    let check = |i: usize, j: usize| -> Result<()> {
        if i >= n || j >= n {
            return Err(Error::NonMonotoneEdit {
                i,
                j,
                reason: "vertex out of range",
            });
        }
        if i == j {
            return Err(Error::NonMonotoneEdit {
                i,
                j,
                reason: "self-loop",
            });
        }
        Ok(())
    };
    for &(i, j) in add_within {
        check(i, j)?;
        if !truth.same_cluster(i, j) {
            return Err(Error::NonMonotoneEdit {
                i,
                j,
                reason: "added edge crosses clusters",
            });
        }
    }
    for &(i, j) in remove_cross {
        check(i, j)?;
        if truth.same_cluster(i, j) {
            return Err(Error::NonMonotoneEdit {
                i,
                j,
                reason: "removed edge lies within a cluster",
            });
        }
        if !g.has_edge(i, j) {
            return Err(Error::NonMonotoneEdit {
                i,
                j,
                reason: "removed edge is not in the graph",
            });
        }
    }
    let mut out = g.clone();
    for &(i, j) in add_within {
        out.insert_edge(i, j);
    }
    for &(i, j) in remove_cross {
        out.remove_edge(i, j);
    }
    Ok(out)
}

/// Draws `count` random monotone edits (each an added within-cluster pair or
/// a deleted cross edge, chosen with equal probability when both exist).
pub fn random_monotone_edits(
    g: &Graph,
    truth: &Assignment,
    count: usize,
    rng: &mut impl Rng,
) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let n = g.n();
    let mut within = Vec::new();
    let mut cross = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if truth.same_cluster(i, j) {
                if !g.has_edge(i, j) {
                    within.push((i, j));
                }
            } else if g.has_edge(i, j) {
                cross.push((i, j));
            }
        }
    }
    within.shuffle(rng);
    cross.shuffle(rng);
    let (mut add, mut remove) = (Vec::new(), Vec::new());
    for _ in 0..count {
        let pick_add = match (within.is_empty(), cross.is_empty()) {
            (true, true) => break,
            (false, true) => true,
            (true, false) => false,
            (false, false) => rng.random::<bool>(),
        };
        if pick_add {
            add.push(within.pop().unwrap());
        } else {
            remove.push(cross.pop().unwrap());
        }
    }
    (add, remove)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_clique_truth() -> Assignment {
        Assignment::plus_minus(vec![1, 1, -1, -1]).unwrap()
    }

    #[test]
    fn deterministic_sbm_edges() {
        let params = ModelParams::sbm_with_probabilities(4, 1.0, 0.0).unwrap();
        let (g, t) = sample_planted(&params, Some(&two_clique_truth())).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(t, two_clique_truth());
    }

    #[test]
    fn zero_probability_pds_is_empty() {
        let params = ModelParams::pds_with_probabilities(4, 2, 0.0, 0.0).unwrap();
        let (g, t) = sample_planted(&params, None).unwrap();
        assert_eq!(g.m(), 0);
        assert_eq!(t.cluster_size(), 2);
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(
            ModelParams::sbm(5, 1.0, 1.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            ModelParams::pds_with_probabilities(4, 5, 0.1, 0.1),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            ModelParams::sbm_with_probabilities(4, 1.2, 0.1),
            Err(Error::InvalidParams(_))
        ));
        // a ln(n)/n > 1 is an error, never a clamp.
        assert!(matches!(
            ModelParams::sbm(4, 4.0, 1.0),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            ModelParams::sbm(10, -1.0, 1.0),
            Err(Error::NegativeIntensity(_))
        ));
    }

    #[test]
    fn sampler_is_reproducible() {
        let params = ModelParams::sbm(60, 5.0, 1.0).unwrap().with_seed(11);
        let (g1, t1) = sample_planted(&params, None).unwrap();
        let (g2, t2) = sample_planted(&params, None).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(t1, t2);
        let (g3, _) = sample_planted(&params.clone().with_seed(12), None).unwrap();
        assert_ne!(g1, g3);
    }

    #[test]
    fn sampled_truths_are_valid() {
        for seed in 0..20 {
            let params = ModelParams::pds(50, 0.3, 4.0, 1.0).unwrap().with_seed(seed);
            let (g, t) = sample_planted(&params, None).unwrap();
            assert_eq!(t.cluster_size(), 15);
            assert!(g.edges().iter().all(|&(i, j)| i < j));
            let params = ModelParams::sbm(20, 4.0, 1.0).unwrap().with_seed(seed);
            let (_, t) = sample_planted(&params, None).unwrap();
            assert_eq!(t.values().iter().map(|&v| v as i32).sum::<i32>(), 0);
        }
    }

    #[test]
    fn expected_adjacency_examples() {
        let params = ModelParams::sbm_with_probabilities(4, 1.0, 0.0).unwrap();
        let e = expected_adjacency(&params, &two_clique_truth()).unwrap();
        let mut want = SymMatrix::zeros(4);
        want.set(0, 1, 1.0);
        want.set(2, 3, 1.0);
        assert_eq!(e, want);

        let params = ModelParams::pds_with_probabilities(3, 2, 0.9, 0.1).unwrap();
        let truth = Assignment::indicator(vec![1, 1, 0]).unwrap();
        let e = expected_adjacency(&params, &truth).unwrap();
        assert_eq!(e.get(0, 1), 0.9);
        assert_eq!(e.get(0, 2), 0.1);
        assert_eq!(e.get(1, 2), 0.1);
        assert!(e.diag().iter().all(|&d| d == 0.0));

        let params = ModelParams::sbm_with_probabilities(6, 0.3, 0.3).unwrap();
        let truth = Assignment::plus_minus(vec![1, -1, 1, -1, 1, -1]).unwrap();
        let e = expected_adjacency(&params, &truth).unwrap();
        let uniform = SymMatrix::ones(6).sub(&SymMatrix::identity(6)).scaled(0.3);
        assert!(e.max_abs_diff(&uniform) < 1e-15);
    }

    #[test]
    fn adversary_examples() {
        let g = Graph::empty(4);
        let t = two_clique_truth();
        assert_eq!(apply_monotone_adversary(&g, &t, &[], &[]).unwrap(), g);
        let g2 = apply_monotone_adversary(&g, &t, &[(0, 1)], &[]).unwrap();
        assert_eq!(g2.edges(), vec![(0, 1)]);
        let err = apply_monotone_adversary(&g, &t, &[(0, 2)], &[]).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneEdit { i: 0, j: 2, .. }));
        assert!(err.to_string().contains("(1, 3)"));
    }

    #[test]
    fn adversary_rejects_bad_removals() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2)]).unwrap();
        let t = two_clique_truth();
        assert!(apply_monotone_adversary(&g, &t, &[], &[(0, 1)]).is_err());
        assert!(apply_monotone_adversary(&g, &t, &[], &[(1, 3)]).is_err());
        let out = apply_monotone_adversary(&g, &t, &[], &[(0, 2)]).unwrap();
        assert_eq!(out.edges(), vec![(0, 1)]);
    }

    #[test]
    fn edge_list_format() {
        let g = Graph::from_edges(5, &[(3, 1), (0, 4)]).unwrap();
        let s = g.to_edge_list_string();
        assert_eq!(s, "5 2\n1 5\n2 4\n");
        assert_eq!(Graph::parse_edge_list(&s).unwrap(), g);
        assert!(Graph::parse_edge_list("3 1\n2 1\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n1 2\n").is_err());
    }

    #[test]
    fn assignment_format() {
        let t = two_clique_truth();
        assert_eq!(t.to_line(), "1 1 -1 -1\n");
        assert_eq!(Assignment::parse("1 1 -1 -1").unwrap(), t);
        let x = Assignment::parse("0 1 1 0\n").unwrap();
        assert_eq!(x.kind(), AssignmentKind::Indicator);
        assert!(Assignment::parse("1 -1 -1").is_err());
    }

    #[test]
    fn planted_cluster_sampling() {
        let params = ModelParams::planted_cluster(30, 3, 8, 0.6, 0.05)
            .unwrap()
            .with_seed(4);
        let (_, t) = sample_planted(&params, None).unwrap();
        for c in 1..=3 {
            assert_eq!(t.values().iter().filter(|&&v| v == c).count(), 8);
        }
        assert_eq!(t.values().iter().filter(|&&v| v == 0).count(), 6);
        let big = ModelParams::planted_cluster(30, 3, 8, 0.6, 0.05).unwrap();
        assert!(big.require_recoverable().is_err());
    }
}
