//! Compares the SDP against exhaustive maximum likelihood on small graphs.

use sdp_recovery::graph::{sample_planted, ModelParams};
use sdp_recovery::oracle::{ml_bisection, ml_failure_witness, ml_subset};
use sdp_recovery::certificates::Regime;
use sdp_recovery::sdp::{matrix_is_integral, round_solution, solve, ProblemKind, SdpProblem, SolverOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParams::sbm_with_probabilities(10, 0.8, 0.2)?.with_seed(5);
    let (g, truth) = sample_planted(&params, None)?;
    let ml = ml_bisection(&g)?;
    println!("bisection: truth   {}", truth.to_line().trim_end());
    println!("           ML      {} (objective {}, {} optima)", ml.best.to_line().trim_end(), ml.best_objective, ml.num_optima);

    let problem = SdpProblem::from_graph(ProblemKind::SbmMax, &g, None)?;
    let sol = solve(&problem, &SolverOptions::default())?;
    let r = round_solution(&sol, problem.kind, None)?;
    if matrix_is_integral(&sol.y, &r, 1e-3)? {
        println!("           SDP     {} (objective {:.4})", r.to_line().trim_end(), sol.objective);
    } else {
        println!("           SDP is fractional (objective {:.4})", sol.objective);
    }

    let params = ModelParams::pds_with_probabilities(14, 5, 0.7, 0.3)?.with_seed(9);
    let (g, truth) = sample_planted(&params, None)?;
    let ml = ml_subset(&g, 5)?;
    println!("subset:    truth   {}", truth.to_line().trim_end());
    println!("           ML      {} (objective {}, unique {})", ml.best.to_line().trim_end(), ml.best_objective, ml.unique);
    match ml_failure_witness(&g, &truth, 5, Regime::AGreater)? {
        Some((i, j)) => println!("           swapping {} out and {} in does not lose likelihood", i + 1, j + 1),
        None => println!("           no single swap beats the truth"),
    }
    Ok(())
}
