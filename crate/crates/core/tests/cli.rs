use std::fs;
use std::path::Path;

use sdp_recovery::cli::cli_main;
use sdp_recovery::harness::strip_timestamp;

fn run(args: &[&str]) -> i32 {
    cli_main(std::iter::once("sdp-recovery").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_solve_certify_oracle_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let truth = dir.path().join("g.txt.truth");
    assert_eq!(
        run(&["--seed", "4", "--out", s(&graph), "gen", "--model", "pds", "--n", "12", "--k", "4", "--p", "0.9", "--q", "0.1"]),
        0
    );
    assert!(fs::read_to_string(&graph).unwrap().starts_with("12 "));
    assert_eq!(fs::read_to_string(&truth).unwrap().split_whitespace().count(), 12);

    let solved = dir.path().join("solve.json");
    assert_eq!(
        run(&["--format", "json", "--out", s(&solved), "solve", "--graph", s(&graph), "--model", "pds", "--k", "4", "--truth", s(&truth)]),
        0
    );
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&solved).unwrap()).unwrap();
    assert_eq!(v["kind"], "pds_max");
    assert_eq!(v["status"], "converged");

    let cert = dir.path().join("cert.json");
    assert_eq!(
        run(&["--format", "json", "--out", s(&cert), "certify", "--graph", s(&graph), "--truth", s(&truth),
              "--model", "pds", "--k", "4", "--p", "0.9", "--q", "0.1", "--a", "9", "--b", "1"]),
        0
    );
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(v["verdict"]["pass"].is_boolean());

    let ml = dir.path().join("ml.csv");
    assert_eq!(run(&["--out", s(&ml), "oracle", "--graph", s(&graph), "--model", "pds", "--k", "4"]), 0);
    assert!(fs::read_to_string(&ml).unwrap().starts_with("best,best_objective,num_optima,unique\n"));
    assert_eq!(run(&["--out", s(&ml), "oracle", "--graph", s(&graph), "--model", "pds", "--witness", s(&truth)]), 0);
}

#[test]
fn sweep_replays_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name);
    let args = |csv: &Path, trials: &Path, svg: &Path| {
        run(&["--seed", "7", "--out", s(csv), "sweep", "--model", "sbm", "--a", "9", "--b-grid", "0.5:2:0.5",
              "--n", "40", "--trials", "4", "--audit-fraction", "0.25", "--trials-out", s(trials), "--svg", s(svg)])
    };
    assert_eq!(args(&out("a.csv"), &out("a.trials"), &out("a.svg")), 0);
    assert_eq!(args(&out("b.csv"), &out("b.trials"), &out("b.svg")), 0);
    let read = |p: &str| fs::read_to_string(out(p)).unwrap();
    assert_eq!(strip_timestamp(&read("a.csv")), strip_timestamp(&read("b.csv")));
    assert_eq!(read("a.trials"), read("b.trials"));
    assert!(read("a.csv").contains("a,b,rho,n,trials,successes,wilson_lo,wilson_hi,theory_margin"));
    assert!(read("a.svg").starts_with("<svg"));
    assert_eq!(strip_timestamp(&read("a.csv")).lines().count(), 5);
}

#[test]
fn spectral_writes_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("spectral.csv");
    assert_eq!(run(&["--out", s(&csv), "spectral", "--n-list", "30,60", "--trials", "2", "--rule", "sublog"]), 0);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["sweep", "--model", "sbm", "--n", "40", "--a", "9", "--b-grid", "2:1:0.5"]), 1);
    assert_eq!(run(&["certify", "--graph", "/no/such", "--truth", "/no/such", "--model", "sbm", "--a", "9", "--b", "1"]), 2);
    assert_eq!(run(&["frobnicate"]), 1);
}
