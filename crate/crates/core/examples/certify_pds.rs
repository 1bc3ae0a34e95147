//! Builds dual certificates for a planted dense subgraph and for an SBM
//! instance, and prints their verdicts.

use sdp_recovery::certificates::{build_pds_certificate, build_sbm_certificate, Regime};
use sdp_recovery::graph::{sample_planted, Assignment, Graph, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Small hand-made instance: a 4-cycle with the planted pair {1, 2}.
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])?;
    let truth = Assignment::indicator_of(4, &[0, 1])?;
    let params = ModelParams::pds_with_probabilities(4, 2, 0.9, 0.1)?.with_intensities(4.0, 1.0)?;
    let cert = build_pds_certificate(&g, &truth, &params, Regime::AGreater)?;
    println!("4-cycle: lambda={:.4} eta={:.4} pass={}", cert.lambda, cert.eta, cert.verdict.pass);
    for r in &cert.verdict.reasons {
        println!("  {r}");
    }

    let params = ModelParams::pds(200, 0.5, 10.0, 1.0)?.with_seed(11);
    let (g, truth) = sample_planted(&params, None)?;
    let cert = build_pds_certificate(&g, &truth, &params, Regime::AGreater)?;
    println!(
        "PDS n=200: lambda={:.4} eta={:.4} lambda2_perp={:.4} pass={}",
        cert.lambda, cert.eta, cert.lambda2_perp, cert.verdict.pass
    );
    for r in cert.verdict.reasons.iter().take(3) {
        println!("  {r}");
    }

    let params = ModelParams::sbm(200, 9.0, 1.0)?.with_seed(11);
    let (g, truth) = sample_planted(&params, None)?;
    let cert = build_sbm_certificate(&g, &truth, params.p, params.q, Regime::AGreater)?;
    println!(
        "SBM n=200: lambda={:.4} lambda2_perp={:.4} pass={}",
        cert.lambda, cert.lambda2_perp, cert.verdict.pass
    );
    Ok(())
}
