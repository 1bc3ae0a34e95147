//! Small SBM sweep: certificate success rates along b with Wilson intervals,
//! plus CSV and SVG output in the system temp directory.

use sdp_recovery::graph::ModelKind;
use sdp_recovery::harness::{crossing_half, sweep_phase_diagram, sweep_svg, write_sweep_csv, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let b_grid: Vec<f64> = (1..=10).map(|i| i as f64 * 0.5).collect();
    let mut config = SweepConfig::new(ModelKind::Sbm, 120, vec![9.0], b_grid);
    config.trials = 20;
    config.audit_fraction = 0.0;
    config.base_seed = 7;
    config.threads = std::thread::available_parallelism().map_or(1, |n| n.get());

    let result = sweep_phase_diagram(&config)?;
    for p in &result.points {
        println!(
            "b={:>4} success {:>2}/{} [{:.2}, {:.2}] margin {:+.3}",
            p.b,
            p.successes,
            p.trials,
            p.wilson_lo,
            p.wilson_hi,
            p.theory_margin.unwrap_or(f64::NAN)
        );
    }
    println!("theory boundary b = {:.4?}", result.boundary[0].lower);
    println!("empirical 1/2 crossing b = {:.4?}", crossing_half(&result.row(9.0)));

    let dir = std::env::temp_dir();
    write_sweep_csv(&result, std::fs::File::create(dir.join("phase_diagram.csv"))?)?;
    std::fs::write(dir.join("phase_diagram.svg"), sweep_svg(&result))?;
    println!("wrote phase_diagram.csv and phase_diagram.svg to {}", dir.display());
    Ok(())
}
