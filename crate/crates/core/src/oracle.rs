//! Exhaustive maximum likelihood on tiny graphs, and the single-swap
//! failure witness for the planted dense subgraph.

use serde::{Deserialize, Serialize};

use crate::certificates::Regime;
use crate::error::{Error, Result};
use crate::graph::{Assignment, AssignmentKind, Graph};

/// Largest `n` accepted by [`ml_bisection`].
pub const MAX_BISECTION_N: usize = 20;
/// Largest number of subsets [`ml_subset`] will enumerate.
pub const MAX_SUBSETS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// First optimum in enumeration order.
    pub best: Assignment,
    pub best_objective: i64,
    pub num_optima: usize,
    pub unique: bool,
}

/// `sum_{i,j} A_ij s_i s_j = 2 (in-cluster edges - cross edges)`.
pub fn bisection_objective(g: &Graph, sigma: &Assignment) -> i64 {
    let s = sigma.values();
    g.edges()
        .iter()
        .map(|&(i, j)| 2 * (s[i] as i64) * (s[j] as i64))
        .sum()
}

/// `sum_{i,j} A_ij x_i x_j = 2 (edges inside the subset)`.
pub fn subset_objective(g: &Graph, xi: &Assignment) -> i64 {
    let x = xi.values();
    g.edges()
        .iter()
        .map(|&(i, j)| 2 * (x[i] as i64) * (x[j] as i64))
        .sum()
}

struct Tally {
    best: Option<(i64, Vec<usize>)>,
    count: usize,
}

impl Tally {
    fn new() -> Self {
        Self {
            best: None,
            count: 0,
        }
    }

    fn offer(&mut self, value: i64, members: impl FnOnce() -> Vec<usize>) {
        match &self.best {
            Some((b, _)) if value < *b => {}
            Some((b, _)) if value == *b => self.count += 1,
            _ => {
                self.best = Some((value, members()));
                self.count = 1;
            }
        }
    }
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic
/// order; false once exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `C(n, k)`, saturating at `u64::MAX`.
fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Maximizes `sum A_ij s_i s_j` over balanced signs with `s_1 = +1`.
pub fn ml_bisection(g: &Graph) -> Result<OracleResult> {
    let n = g.n();
    if n % 2 != 0 {
        return Err(Error::OddN(n));
    }
    if n > MAX_BISECTION_N {
        return Err(Error::TooLarge(format!(
            "bisection enumeration needs n <= {MAX_BISECTION_N}, got {n}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidProblem("empty graph".into()));
    }
    let rows: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| g.has_edge(i, j))
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let full: u32 = (1 << n) - 1;
    let m = g.m() as i64;
    let mut tally = Tally::new();
    // The +1 side is vertex 0 plus a (n/2 - 1)-subset of 1..n.
    let mut idx: Vec<usize> = (1..n / 2).collect();
    loop {
        let plus = idx.iter().fold(1u32, |s, &i| s | (1 << i));
        let minus = full & !plus;
        let twice_in: u32 = (0..n)
            .map(|i| {
                let side = if plus >> i & 1 == 1 { plus } else { minus };
                (rows[i] & side).count_ones()
            })
            .sum();
        let within = twice_in as i64 / 2;
        tally.offer(2 * (within - (m - within)), || {
            std::iter::once(0).chain(idx.iter().copied()).collect()
        });
        if idx.is_empty() || !next_combination(&mut idx, n) {
            break;
        }
    }
    let (best_objective, plus) = tally.best.expect("at least one bisection");
    let mut values = vec![-1i8; n];
    for i in plus {
        values[i] = 1;
    }
    Ok(OracleResult {
        best: Assignment::plus_minus(values)?,
        best_objective,
        num_optima: tally.count,
        unique: tally.count == 1,
    })
}

/// Maximizes the number of edges inside a `k`-subset.
pub fn ml_subset(g: &Graph, k: usize) -> Result<OracleResult> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("K = {k} outside [1, {n}]")));
    }
    let count = binomial(n, k);
    if count > MAX_SUBSETS {
        return Err(Error::TooLarge(format!(
            "C({n}, {k}) = {count} subsets exceeds {MAX_SUBSETS}"
        )));
    }
    let mut tally = Tally::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut within = 0i64;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                within += g.entry(i, j) as i64;
            }
        }
        tally.offer(2 * within, || idx.clone());
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    let (best_objective, members) = tally.best.expect("at least one subset");
    Ok(OracleResult {
        best: Assignment::indicator_of(n, &members)?,
        best_objective,
        num_optima: tally.count,
        unique: tally.count == 1,
    })
}

/// A pair `(i in C, j not in C)` whose swap strictly improves the subset
/// objective over the planted cluster `C`, when one exists.
///
/// Swapping changes the within-cluster edge count by
/// `e(j, C) - A_ij - e(i, C)`. `AGreater` needs this positive, `BGreater`
/// negative. Ties resolve to the lowest vertex indices.
pub fn ml_failure_witness(
    g: &Graph,
    truth: &Assignment,
    k: usize,
    regime: Regime,
) -> Result<Option<(usize, usize)>> {
    if truth.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: truth.len(),
        });
    }
    truth.require(AssignmentKind::Indicator, Some(k))?;
    let members = truth.members();
    let n = g.n();
    if k == n {
        return Ok(None);
    }
    let e: Vec<i64> = (0..n).map(|i| g.edges_into(i, &members) as i64).collect();
    let inside: Vec<usize> = (0..n).filter(|&i| members[i]).collect();
    let outside: Vec<usize> = (0..n).filter(|&i| !members[i]).collect();
    let gain = |i: usize, j: usize| e[j] - g.entry(i, j) as i64 - e[i];

    let witness = match regime {
        Regime::AGreater => {
            let min_in = inside.iter().map(|&i| e[i]).min().unwrap();
            let max_out = outside.iter().map(|&j| e[j]).max().unwrap();
            let arg_in: Vec<usize> = inside.iter().copied().filter(|&i| e[i] == min_in).collect();
            let arg_out: Vec<usize> = outside.iter().copied().filter(|&j| e[j] == max_out).collect();
            if max_out - min_in >= 2 {
                Some((arg_in[0], arg_out[0]))
            } else if max_out - min_in == 1 {
                arg_in
                    .iter()
                    .flat_map(|&i| arg_out.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| !g.has_edge(i, j))
            } else {
                None
            }
        }
        Regime::BGreater => {
            let max_in = inside.iter().map(|&i| e[i]).max().unwrap();
            let min_out = outside.iter().map(|&j| e[j]).min().unwrap();
            if max_in > min_out {
                let i = *inside.iter().find(|&&i| e[i] == max_in).unwrap();
                let j = *outside.iter().find(|&&j| e[j] == min_out).unwrap();
                Some((i, j))
            } else {
                None
            }
        }
    };
    debug_assert!(witness.map_or(true, |(i, j)| match regime {
        Regime::AGreater => gain(i, j) > 0,
        Regime::BGreater => gain(i, j) < 0,
    }));
    Ok(witness)
}
