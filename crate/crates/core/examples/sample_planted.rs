//! Draws one SBM and one planted dense subgraph instance and prints edge
//! counts against their expectations.

use sdp_recovery::graph::{expected_adjacency, sample_planted, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sbm = ModelParams::sbm(200, 9.0, 1.0)?.with_seed(7);
    let pds = ModelParams::pds(200, 0.5, 10.0, 1.0)?.with_seed(7);

    for params in [sbm, pds] {
        let (g, truth) = sample_planted(&params, None)?;
        let expected = expected_adjacency(&params, &truth)?.sum() / 2.0;
        let degrees: Vec<usize> = (0..g.n()).map(|i| g.degree(i)).collect();
        println!(
            "{:?}: n={} K={} p={:.4} q={:.4} edges={} (expected {:.1}) degree range {}..{}",
            params.kind,
            g.n(),
            params.k,
            params.p,
            params.q,
            g.m(),
            expected,
            degrees.iter().min().unwrap(),
            degrees.iter().max().unwrap(),
        );
        println!("  truth: {}", &truth.to_line()[..40]);
    }
    Ok(())
}
