//! Command-line front end. `cli_main` returns the process exit code:
//! 0 on success, 1 on usage errors, 2 on data errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certificates::{build_pds_certificate, build_sbm_certificate, Regime};
use crate::error::Error;
use crate::graph::{sample_planted, Assignment, Graph, ModelKind, ModelParams};
use crate::harness::{
    problem_kind, spectral_scaling_experiment, sweep_phase_diagram, sweep_svg, write_spectral_csv,
    write_sweep_csv, write_trials_csv, Method, PRule, SweepConfig,
};
use crate::oracle::{ml_bisection, ml_failure_witness, ml_subset};
use crate::sdp::{
    is_integral, round_solution, solve, SdpProblem, SolveStatus, SolverOptions, INTEGRAL_TOL,
};

#[derive(Debug, Parser)]
#[command(name = "sdp-recovery", version, about = "Exact recovery of planted clusters by SDP")]
struct Cli {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a planted graph; writes the edge list to --out and the truth
    /// next to it.
    Gen(GenArgs),
    /// Solve the SDP relaxation for a saved graph.
    Solve(SolveArgs),
    /// Build and verify the dual certificate for a saved graph and truth.
    Certify(CertifyArgs),
    /// Brute-force maximum likelihood, or the single-swap failure witness.
    Oracle(OracleArgs),
    /// Phase-diagram sweep over a grid of intensities.
    Sweep(SweepArgs),
    /// Spectral norm of A - E[A] across graph sizes.
    Spectral(SpectralArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Sbm,
    Pds,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Sbm => ModelKind::Sbm,
            ModelArg::Pds => ModelKind::Pds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    AGreater,
    BGreater,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::AGreater => Regime::AGreater,
            RegimeArg::BGreater => Regime::BGreater,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Certificate,
    Sdp,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Certificate => Method::Certificate,
            MethodArg::Sdp => Method::SdpSolve,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    /// p = 2 ln n / n
    Log,
    /// p = ln n / (n ln ln n)
    Sublog,
}

#[derive(Debug, Args)]
struct ModelOpts {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Number of vertices (taken from the graph file when one is given).
    #[arg(long)]
    n: Option<usize>,
    /// In-cluster intensity: p = a ln n / n.
    #[arg(long)]
    a: Option<f64>,
    /// Cross intensity: q = b ln n / n.
    #[arg(long)]
    b: Option<f64>,
    /// Cluster fraction for PDS: K = floor(rho n).
    #[arg(long)]
    rho: Option<f64>,
    /// Cluster size for PDS (overrides --rho).
    #[arg(long)]
    k: Option<usize>,
    /// In-cluster probability (overrides --a).
    #[arg(long)]
    p: Option<f64>,
    /// Cross probability (overrides --b).
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Debug, Args)]
struct SolverOpts {
    #[arg(long, default_value_t = SolverOptions::default().tol)]
    tol: f64,
    #[arg(long, default_value_t = SolverOptions::default().max_iters)]
    max_iters: usize,
    /// Initial ADMM penalty.
    #[arg(long, default_value_t = SolverOptions::default().penalty)]
    rho_penalty: f64,
    /// Anderson acceleration depth (0 disables).
    #[arg(long, default_value_t = SolverOptions::default().anderson_memory)]
    anderson: usize,
    /// Keep the penalty fixed.
    #[arg(long)]
    no_adapt: bool,
}

impl SolverOpts {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            penalty: self.rho_penalty,
            adapt_penalty: !self.no_adapt,
            anderson_memory: self.anderson,
        }
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    model: ModelOpts,
    /// Truth file (defaults to the --out path with `.truth` appended).
    #[arg(long)]
    truth_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Cluster size (PDS).
    #[arg(long)]
    k: Option<usize>,
    /// Minimize instead of maximize (the a < b regime).
    #[arg(long)]
    minimize: bool,
    /// Truth file; adds an integrality check to the summary.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, default_value_t = INTEGRAL_TOL)]
    integral_tol: f64,
    #[command(flatten)]
    solver: SolverOpts,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[command(flatten)]
    model: ModelOpts,
    /// Defaults to a-greater when a >= b.
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Cluster size (PDS).
    #[arg(long)]
    k: Option<usize>,
    /// Run the failure witness against this truth instead of enumerating.
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RegimeArg::AGreater)]
    regime: RegimeArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    n: usize,
    /// Single in-cluster intensity.
    #[arg(long, conflicts_with = "a_grid")]
    a: Option<f64>,
    /// `lo:hi:step` or a comma list.
    #[arg(long)]
    a_grid: Option<String>,
    /// `lo:hi:step` or a comma list.
    #[arg(long)]
    b_grid: String,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Certificate)]
    method: MethodArg,
    /// Fraction of certificate trials that also run the solver.
    #[arg(long, default_value_t = 0.1)]
    audit_fraction: f64,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Per-trial CSV.
    #[arg(long)]
    trials_out: Option<PathBuf>,
    #[arg(long, default_value_t = INTEGRAL_TOL)]
    integral_tol: f64,
    #[command(flatten)]
    solver: SolverOpts,
}

#[derive(Debug, Args)]
struct SpectralArgs {
    /// Comma-separated ascending sizes.
    #[arg(long, value_delimiter = ',', default_value = "100,200,500,1000,2000")]
    n_list: Vec<usize>,
    #[arg(long, value_enum, default_value_t = RuleArg::Log)]
    rule: RuleArg,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `lo:hi:step` (inclusive) or `x,y,z`.
fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || Failure::Usage(format!("bad grid `{spec}`: use lo:hi:step or a comma list"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[..] {
        [lo, hi, step] => {
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if !(step > 0.0) || hi < lo {
                return Err(bad());
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}

fn model_params(m: &ModelOpts, n: usize, seed: u64) -> CliResult<ModelParams> {
    let kind: ModelKind = m.model.into();
    let params = match (m.p, m.q) {
        (Some(p), Some(q)) => {
            let base = match kind {
                ModelKind::Sbm => ModelParams::sbm_with_probabilities(n, p, q)?,
                _ => {
                    let k = match (m.k, m.rho) {
                        (Some(k), _) => k,
                        (None, Some(rho)) => (rho * n as f64).floor() as usize,
                        (None, None) => return Err(Failure::Usage("PDS needs --k or --rho".into())),
                    };
                    ModelParams::pds_with_probabilities(n, k, p, q)?
                }
            };
            match (m.a, m.b) {
                (Some(a), Some(b)) => base.with_intensities(a, b)?,
                _ => base,
            }
        }
        (None, None) => {
            let (a, b) = match (m.a, m.b) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Failure::Usage("give --a and --b, or --p and --q".into())),
            };
            match kind {
                ModelKind::Sbm => ModelParams::sbm(n, a, b)?,
                _ => match (m.k, m.rho) {
                    (Some(k), _) => {
                        let s = (n as f64).ln() / n as f64;
                        ModelParams::pds_with_probabilities(n, k, a * s, b * s)?
                            .with_intensities(a, b)?
                    }
                    (None, Some(rho)) => ModelParams::pds(n, rho, a, b)?,
                    (None, None) => return Err(Failure::Usage("PDS needs --k or --rho".into())),
                },
            }
        }
        _ => return Err(Failure::Usage("--p and --q go together".into())),
    };
    Ok(params.with_seed(seed))
}

fn open_out(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CliResult<()> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Writes a flat summary as a one-row CSV, or as JSON.
fn emit_summary<T: Serialize>(out: &Option<PathBuf>, format: Format, value: &T) -> CliResult<()> {
    if format == Format::Json {
        return emit_json(out, value);
    }
    let mut w = csv::Writer::from_writer(open_out(out)?);
    w.serialize(value).map_err(|e| Error::Io(e.to_string()))?;
    w.flush()?;
    Ok(())
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> CliResult<()> {
    let out = cli
        .out
        .as_ref()
        .ok_or_else(|| Failure::Usage("gen needs --out for the graph file".into()))?;
    let n = args
        .model
        .n
        .ok_or_else(|| Failure::Usage("gen needs --n".into()))?;
    let params = model_params(&args.model, n, cli.seed)?;
    let (g, truth) = sample_planted(&params, None)?;
    let truth_path = args.truth_out.clone().unwrap_or_else(|| {
        let mut s = out.as_os_str().to_owned();
        s.push(".truth");
        PathBuf::from(s)
    });
    g.write(out)?;
    truth.write(&truth_path)?;

    #[derive(Serialize)]
    struct Summary<'a> {
        n: usize,
        m: usize,
        k: usize,
        p: f64,
        q: f64,
        seed: u64,
        graph: &'a Path,
        truth: &'a Path,
    }
    emit_summary(
        &None,
        cli.format,
        &Summary {
            n,
            m: g.m(),
            k: params.k,
            p: params.p,
            q: params.q,
            seed: cli.seed,
            graph: out,
            truth: &truth_path,
        },
    )
}

fn cmd_solve(cli: &Cli, args: &SolveArgs) -> CliResult<()> {
    let g = Graph::read(&args.graph)?;
    let regime = if args.minimize {
        Regime::BGreater
    } else {
        Regime::AGreater
    };
    let kind = problem_kind(args.model.into(), regime)?;
    let k = match (args.model, args.k) {
        (ModelArg::Pds, None) => return Err(Failure::Usage("PDS needs --k".into())),
        (ModelArg::Pds, k) => k,
        (ModelArg::Sbm, _) => None,
    };
    let problem = SdpProblem::from_graph(kind, &g, k)?;
    let sol = solve(&problem, &args.solver.options())?;
    let integral = match &args.truth {
        Some(path) => Some(is_integral(&sol, &Assignment::read(path)?, args.integral_tol)?),
        None => None,
    };
    let rounded = match round_solution(&sol, kind, k) {
        Ok(r) => Some(r.to_line().trim_end().to_owned()),
        Err(Error::NotConverged) => None,
        Err(e) => return Err(e.into()),
    };

    #[derive(Serialize)]
    struct Summary {
        kind: crate::sdp::ProblemKind,
        n: usize,
        k: Option<usize>,
        objective: f64,
        iterations: usize,
        primal_residual: f64,
        dual_residual: f64,
        penalty: f64,
        status: SolveStatus,
        constraint_violation: f64,
        integral: Option<bool>,
        rounded: Option<String>,
    }
    emit_summary(
        &cli.out,
        cli.format,
        &Summary {
            kind,
            n: g.n(),
            k,
            objective: sol.objective,
            iterations: sol.iterations,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
            penalty: sol.penalty,
            status: sol.status,
            constraint_violation: sol.constraint_violation()?,
            integral,
            rounded,
        },
    )
}

fn cmd_certify(cli: &Cli, args: &CertifyArgs) -> CliResult<()> {
    let g = Graph::read(&args.graph)?;
    let truth = Assignment::read(&args.truth)?;
    let params = model_params(&args.model, g.n(), cli.seed)?;
    let regime = args
        .regime
        .map(Regime::from)
        .unwrap_or_else(|| match (params.a, params.b) {
            (Some(a), Some(b)) => Regime::from_intensities(a, b),
            _ => Regime::from_intensities(params.p, params.q),
        });

    #[derive(Serialize)]
    struct Summary {
        pass: bool,
        lambda: f64,
        eta: Option<f64>,
        lambda2_perp: f64,
        reasons: String,
    }
    let reasons = |r: &[crate::certificates::FailReason]| {
        r.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; ")
    };
    match params.kind {
        ModelKind::Sbm => {
            let cert = build_sbm_certificate(&g, &truth, params.p, params.q, regime)?;
            match cli.format {
                Format::Json => emit_json(&cli.out, &cert),
                Format::Csv => emit_summary(
                    &cli.out,
                    cli.format,
                    &Summary {
                        pass: cert.verdict.pass,
                        lambda: cert.lambda,
                        eta: None,
                        lambda2_perp: cert.lambda2_perp,
                        reasons: reasons(&cert.verdict.reasons),
                    },
                ),
            }
        }
        _ => {
            let cert = build_pds_certificate(&g, &truth, &params, regime)?;
            match cli.format {
                Format::Json => emit_json(&cli.out, &cert),
                Format::Csv => emit_summary(
                    &cli.out,
                    cli.format,
                    &Summary {
                        pass: cert.verdict.pass,
                        lambda: cert.lambda,
                        eta: Some(cert.eta),
                        lambda2_perp: cert.lambda2_perp,
                        reasons: reasons(&cert.verdict.reasons),
                    },
                ),
            }
        }
    }
}

fn cmd_oracle(cli: &Cli, args: &OracleArgs) -> CliResult<()> {
    let g = Graph::read(&args.graph)?;
    if let Some(path) = &args.witness {
        let truth = Assignment::read(path)?;
        let k = args.k.unwrap_or_else(|| truth.cluster_size());
        let w = ml_failure_witness(&g, &truth, k, args.regime.into())?;

        #[derive(Serialize)]
        struct Witness {
            found: bool,
            /// 1-based, as in the graph file.
            inside: Option<usize>,
            outside: Option<usize>,
        }
        return emit_summary(
            &cli.out,
            cli.format,
            &Witness {
                found: w.is_some(),
                inside: w.map(|(i, _)| i + 1),
                outside: w.map(|(_, j)| j + 1),
            },
        );
    }
    let result = match args.model {
        ModelArg::Sbm => ml_bisection(&g)?,
        ModelArg::Pds => {
            let k = args
                .k
                .ok_or_else(|| Failure::Usage("PDS oracle needs --k".into()))?;
            ml_subset(&g, k)?
        }
    };

    #[derive(Serialize)]
    struct Summary {
        best: String,
        best_objective: i64,
        num_optima: usize,
        unique: bool,
    }
    let summary = Summary {
        best: result.best.to_line().trim_end().to_owned(),
        best_objective: result.best_objective,
        num_optima: result.num_optima,
        unique: result.unique,
    };
    match cli.format {
        Format::Json => emit_json(&cli.out, &result),
        Format::Csv => emit_summary(&cli.out, cli.format, &summary),
    }
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> CliResult<()> {
    let a_grid = match (&args.a, &args.a_grid) {
        (Some(a), None) => vec![*a],
        (None, Some(spec)) => parse_grid(spec)?,
        _ => return Err(Failure::Usage("give --a or --a-grid".into())),
    };
    let mut config = SweepConfig::new(args.model.into(), args.n, a_grid, parse_grid(&args.b_grid)?);
    config.rho = args.rho;
    config.trials = args.trials;
    config.method = args.method.into();
    config.audit_fraction = args.audit_fraction;
    config.solver = args.solver.options();
    config.integral_tol = args.integral_tol;
    config.base_seed = cli.seed;
    config.threads = cli.threads;
    if config.kind == ModelKind::Pds && config.rho.is_none() {
        return Err(Failure::Usage("PDS sweep needs --rho".into()));
    }
    let result = sweep_phase_diagram(&config)?;
    match cli.format {
        Format::Json => emit_json(&cli.out, &result)?,
        Format::Csv => {
            let mut w = open_out(&cli.out)?;
            write_sweep_csv(&result, &mut w)?;
            w.flush()?;
        }
    }
    if let Some(path) = &args.trials_out {
        write_trials_csv(&result, BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &args.svg {
        std::fs::write(path, sweep_svg(&result))?;
    }
    Ok(())
}

fn cmd_spectral(cli: &Cli, args: &SpectralArgs) -> CliResult<()> {
    let rule = match args.rule {
        RuleArg::Log => PRule::ConstTimesLogOverN,
        RuleArg::Sublog => PRule::SubLog,
    };
    let rows = spectral_scaling_experiment(&args.n_list, rule, args.trials, cli.seed, cli.threads)?;
    match cli.format {
        Format::Json => emit_json(&cli.out, &rows),
        Format::Csv => {
            let mut w = open_out(&cli.out)?;
            write_spectral_csv(&rows, &mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    if cli.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Solve(a) => cmd_solve(cli, a),
        Command::Certify(a) => cmd_certify(cli, a),
        Command::Oracle(a) => cmd_oracle(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Spectral(a) => cmd_spectral(cli, a),
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: sdp-recovery <gen|solve|certify|oracle|sweep|spectral> [options]");
            1
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("0.5:5:0.5").unwrap(),
            (1..=10).map(|i| i as f64 * 0.5).collect::<Vec<_>>()
        );
        assert_eq!(parse_grid("0.1:0.3:0.1").unwrap(), vec![0.1, 0.2, 0.3]);
        assert_eq!(parse_grid("1,2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(cli_main(["sdp-recovery"]), 1);
        assert_eq!(cli_main(["sdp-recovery", "bogus"]), 1);
        assert_eq!(cli_main(["sdp-recovery", "gen", "--model", "sbm", "--n", "10"]), 1);
        assert_eq!(cli_main(["sdp-recovery", "--help"]), 0);
    }

    #[test]
    fn data_errors_exit_two() {
        assert_eq!(
            cli_main(["sdp-recovery", "solve", "--graph", "/nonexistent/g", "--model", "sbm"]),
            2
        );
    }
}
