//! Threshold quantities on a small grid, and the PDS boundary in b for a few
//! values of a.

use sdp_recovery::thresholds::{phase_boundary, Branch, ThresholdPoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>5} {:>5} {:>9} {:>9} {:>9} {:>10}", "a", "b", "tau*", "f", "sbm_gap", "pds_margin");
    for (a, b) in [(9.0, 1.0), (9.0, 2.5), (10.0, 1.0), (10.0, 4.0), (1.0, 8.0)] {
        let t = ThresholdPoint::new(a, b, 0.5)?;
        println!(
            "{a:>5} {b:>5} {:>9.4} {:>9.4} {:>9.4} {:>10.4}",
            t.tau_star, t.f_value, t.sbm_gap, t.pds_margin
        );
    }

    println!("\nrho = 0.5 boundary:");
    for a in [4.0, 6.0, 8.0, 10.0] {
        let lower = phase_boundary(a, 0.5, Branch::Lower).ok();
        let upper = phase_boundary(a, 0.5, Branch::Upper)?;
        println!("  a={a:>4}: lower b={lower:.4?} upper b={upper:.4}");
    }
    Ok(())
}
