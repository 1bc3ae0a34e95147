//! A certified SBM instance stays integral under random monotone edits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdp_recovery::certificates::{build_sbm_certificate, Regime};
use sdp_recovery::graph::{apply_monotone_adversary, random_monotone_edits, sample_planted, ModelParams};
use sdp_recovery::sdp::{is_integral, solve, ProblemKind, SdpProblem, SolverOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::sbm(100, 12.0, 1.0)?.with_seed(21);
    let (g, truth) = sample_planted(&params, None)?;
    let cert = build_sbm_certificate(&g, &truth, params.p, params.q, Regime::AGreater)?;
    println!("certificate passes on the clean graph: {}", cert.verdict.pass);

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (add, remove) = random_monotone_edits(&g, &truth, 100, &mut rng);
    let edited = apply_monotone_adversary(&g, &truth, &add, &remove)?;
    println!("added {} within-cluster edges, removed {} cross edges", add.len(), remove.len());

    let problem = SdpProblem::from_graph(ProblemKind::SbmMax, &edited, None)?;
    let sol = solve(&problem, &SolverOptions::default())?;
    println!("edited graph: SDP integral against truth = {}", is_integral(&sol, &truth, 1e-3)?);
    Ok(())
}
