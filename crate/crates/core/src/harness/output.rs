use std::fmt::Write as _;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};

use super::sweep::{BoundaryPoint, SweepResult};

/// Header line written before the CSV columns; replay comparisons skip it.
pub const TIMESTAMP_PREFIX: &str = "# generated unix_time=";

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn timestamp_line() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{TIMESTAMP_PREFIX}{secs}\n")
}

/// One row per grid point:
/// `a,b,rho,n,trials,successes,wilson_lo,wilson_hi,theory_margin`,
/// preceded by a timestamp comment.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, mut out: W) -> Result<()> {
    out.write_all(timestamp_line().as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "a",
        "b",
        "rho",
        "n",
        "trials",
        "successes",
        "wilson_lo",
        "wilson_hi",
        "theory_margin",
    ])
    .map_err(csv_err)?;
    for p in &result.points {
        w.write_record([
            p.a.to_string(),
            p.b.to_string(),
            opt(p.rho),
            p.n.to_string(),
            p.trials.to_string(),
            p.successes.to_string(),
            p.wilson_lo.to_string(),
            p.wilson_hi.to_string(),
            opt(p.theory_margin),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per trial. Wall time is left out so the file replays byte for
/// byte.
pub fn write_trials_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "point",
        "trial",
        "seed",
        "a",
        "b",
        "n",
        "method",
        "certificate_pass",
        "sdp_integral",
        "rounding_agrees",
        "witness_found",
        "solver_iterations",
        "error",
    ])
    .map_err(csv_err)?;
    let trials = result.config.trials.max(1);
    for (idx, r) in result.records.iter().enumerate() {
        let method = serde_json::to_value(r.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        w.write_record([
            (idx / trials).to_string(),
            r.trial_index.to_string(),
            r.seed.to_string(),
            opt(r.params.a),
            opt(r.params.b),
            r.params.n.to_string(),
            method,
            opt(r.certificate_pass),
            opt(r.sdp_integral),
            opt(r.rounding_agrees),
            opt(r.witness_found),
            opt(r.solver_iterations),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Drops the timestamp comment so two sweep files can be compared.
pub fn strip_timestamp(csv_text: &str) -> String {
    csv_text
        .lines()
        .filter(|l| !l.starts_with(TIMESTAMP_PREFIX))
        .map(|l| format!("{l}\n"))
        .collect()
}

const CELL: f64 = 40.0;
const MARGIN: f64 = 60.0;

/// Heatmap of success rates: `b` across, `a` down, with the theoretical
/// boundary drawn over it.
pub fn sweep_svg(result: &SweepResult) -> String {
    let a_grid = &result.config.a_grid;
    let b_grid = &result.config.b_grid;
    let (cols, rows) = (b_grid.len() as f64, a_grid.len() as f64);
    let width = 2.0 * MARGIN + cols * CELL;
    let height = 2.0 * MARGIN + rows * CELL;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    for (i, p) in result.points.iter().enumerate() {
        let (row, col) = (i / b_grid.len(), i % b_grid.len());
        let rate = p.success_rate();
        let shade = (255.0 * (1.0 - rate)).round() as u8;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="rgb({shade},{shade},255)"><title>a={} b={} rate={rate:.3}</title></rect>"#,
            MARGIN + col as f64 * CELL,
            MARGIN + row as f64 * CELL,
            p.a,
            p.b
        );
    }
    for (col, b) in b_grid.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{b}</text>"#,
            MARGIN + (col as f64 + 0.5) * CELL,
            MARGIN + rows * CELL + 15.0
        );
    }
    for (row, a) in a_grid.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{a}</text>"#,
            MARGIN - 5.0,
            MARGIN + (row as f64 + 0.5) * CELL + 3.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">b</text><text x="15" y="{}">a</text>"#,
        MARGIN + cols * CELL / 2.0,
        height - 15.0,
        MARGIN + rows * CELL / 2.0
    );

    // Cell centres sit at b_grid[col]; interpolate between them.
    let x_of = |b: f64| -> Option<f64> {
        let pos = if b_grid.len() == 1 {
            0.0
        } else {
            let k = b_grid.windows(2).position(|w| b <= w[1]).unwrap_or(b_grid.len() - 2);
            let (b0, b1) = (b_grid[k], b_grid[k + 1]);
            k as f64 + (b - b0) / (b1 - b0)
        };
        let x = MARGIN + (pos + 0.5) * CELL;
        (MARGIN..=MARGIN + cols * CELL).contains(&x).then_some(x)
    };
    let branches: [fn(&BoundaryPoint) -> Option<f64>; 2] = [|p| p.lower, |p| p.upper];
    for branch in branches {
        let pts: Vec<String> = result
            .boundary
            .iter()
            .enumerate()
            .filter_map(|(row, bp)| {
                let x = x_of(branch(bp)?)?;
                Some(format!("{x:.1},{:.1}", MARGIN + (row as f64 + 0.5) * CELL))
            })
            .collect();
        if pts.len() == 1 {
            let (x, y) = pts[0].split_once(',').unwrap();
            let y: f64 = y.parse().unwrap();
            let _ = writeln!(
                s,
                r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="red" stroke-width="2"/>"#,
                y - CELL / 2.0,
                y + CELL / 2.0
            );
        } else if pts.len() > 1 {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="red" stroke-width="2"/>"#,
                pts.join(" ")
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
