use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::sample_gnp;
use crate::rng::derive_seed;
use crate::symlin::{spectral_norm, SymMatrix};

/// Edge probability as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PRule {
    /// `p = 2 ln n / n`.
    ConstTimesLogOverN,
    /// `p = ln n / (n ln ln n)`.
    SubLog,
}

impl PRule {
    pub fn p(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            PRule::ConstTimesLogOverN => 2.0 * nf.ln() / nf,
            PRule::SubLog => nf.ln() / (nf * nf.ln().ln()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRow {
    pub n: usize,
    pub p: f64,
    pub trial: usize,
    pub seed: u64,
    /// `|A - E A|`.
    pub norm: f64,
    /// `|A - E A| / sqrt(n p)`.
    pub ratio: f64,
}

/// Samples `G(n, p)` `trials` times for each `n` and records the deviation
/// norm. Row seeds are `derive_seed(derive_seed(base_seed, i), t)` for the
/// `i`-th `n` and trial `t`.
pub fn spectral_scaling_experiment(
    n_list: &[usize],
    rule: PRule,
    trials: usize,
    base_seed: u64,
    threads: usize,
) -> Result<Vec<SpectralRow>> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    if n_list.is_empty() || !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParams("n_list must be non-empty and ascending".into()));
    }
    for &n in n_list {
        let p = rule.p(n);
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParams(format!("rule gives p = {p} at n = {n}")));
        }
    }
    let tasks: Vec<(usize, usize)> = (0..n_list.len())
        .flat_map(|i| (0..trials).map(move |t| (i, t)))
        .collect();
    let run = |&(i, t): &(usize, usize)| -> Result<SpectralRow> {
        let n = n_list[i];
        let p = rule.p(n);
        let seed = derive_seed(derive_seed(base_seed, i as u64), t as u64);
        let g = sample_gnp(n, p, seed)?;
        let expected = SymMatrix::from_fn(n, |a, b| if a == b { 0.0 } else { p });
        let norm = spectral_norm(&g.adjacency().sub(&expected))?;
        Ok(SpectralRow {
            n,
            p,
            trial: t,
            seed,
            norm,
            ratio: norm / (n as f64 * p).sqrt(),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| tasks.par_iter().map(run).collect())
}

/// Median ratio per `n`, in the order the sizes first appear.
pub fn median_ratios(rows: &[SpectralRow]) -> Vec<(usize, f64)> {
    let mut sizes: Vec<usize> = Vec::new();
    for r in rows {
        if !sizes.contains(&r.n) {
            sizes.push(r.n);
        }
    }
    sizes
        .into_iter()
        .map(|n| {
            let mut v: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.ratio).collect();
            v.sort_by(f64::total_cmp);
            let m = v.len();
            let med = if m % 2 == 1 {
                v[m / 2]
            } else {
                0.5 * (v[m / 2 - 1] + v[m / 2])
            };
            (n, med)
        })
        .collect()
}

pub fn write_spectral_csv<W: Write>(rows: &[SpectralRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let rows = spectral_scaling_experiment(&[100], PRule::ConstTimesLogOverN, 1, 0, 1).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].ratio > 0.0 && rows[0].ratio.is_finite());
    }

    #[test]
    fn rules() {
        let n = 100f64;
        assert!((PRule::ConstTimesLogOverN.p(100) - 2.0 * n.ln() / n).abs() < 1e-15);
        assert!(PRule::SubLog.p(100) < PRule::ConstTimesLogOverN.p(100));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(spectral_scaling_experiment(&[200, 100], PRule::SubLog, 1, 0, 1).is_err());
        assert!(spectral_scaling_experiment(&[100], PRule::SubLog, 0, 0, 1).is_err());
        // ln ln 2 < 0 gives a negative p.
        assert!(spectral_scaling_experiment(&[2], PRule::SubLog, 1, 0, 1).is_err());
    }

    #[test]
    fn medians() {
        let mk = |n, ratio| SpectralRow {
            n,
            p: 0.1,
            trial: 0,
            seed: 0,
            norm: 0.0,
            ratio,
        };
        let rows = [mk(10, 3.0), mk(10, 1.0), mk(10, 2.0), mk(20, 1.0), mk(20, 2.0)];
        assert_eq!(median_ratios(&rows), vec![(10, 2.0), (20, 1.5)]);
    }
}
