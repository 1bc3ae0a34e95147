//! Median of |A - E A| / sqrt(np) across n for both edge-probability rules.

use sdp_recovery::harness::{median_ratios, spectral_scaling_experiment, PRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_list = [100, 200, 400, 800];
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    for rule in [PRule::ConstTimesLogOverN, PRule::SubLog] {
        let rows = spectral_scaling_experiment(&n_list, rule, 10, 7, threads)?;
        let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        println!("{rule:?} (max ratio {max:.3})");
        for (n, med) in median_ratios(&rows) {
            println!("  n={n:>4} p={:.4} median ratio {med:.4}", rule.p(n));
        }
    }
    Ok(())
}
