use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sdp_recovery::certificates::{build_sbm_certificate, Regime};
use sdp_recovery::graph::{
    apply_monotone_adversary, random_monotone_edits, sample_planted, Assignment, Graph, ModelParams,
};
use sdp_recovery::oracle::{bisection_objective, ml_bisection, ml_failure_witness, ml_subset, subset_objective};
use sdp_recovery::sdp::{is_integral, solve, ProblemKind, SdpProblem, SolverOptions};
use sdp_recovery::symlin::{eigenvalues_sym, project_psd, SymMatrix};
use sdp_recovery::thresholds::{f_threshold, f_threshold_forms, tau_star};

fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !g.has_edge(i, j))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn swapped(truth: &Assignment, i: usize, j: usize) -> Assignment {
    let mut v = truth.values().to_vec();
    v.swap(i, j);
    Assignment::indicator(v).unwrap()
}

fn tight() -> SolverOptions {
    SolverOptions {
        tol: 1e-7,
        max_iters: 20_000,
        ..SolverOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn f_forms_agree(a in 0.01f64..50.0, b in 0.01f64..50.0) {
        prop_assume!((a - b).abs() > 1e-6);
        let (f1, f2) = f_threshold_forms(a, b).unwrap();
        prop_assert!((f1 - f2).abs() <= 1e-10 * (1.0 + a.max(b)));
        prop_assert!(f_threshold(a, b).unwrap() >= 0.0);
    }

    #[test]
    fn tau_star_brackets(a in 0.0f64..50.0, b in 0.0f64..50.0) {
        let t = tau_star(a, b).unwrap();
        if a > 0.0 && b > 0.0 {
            prop_assert!(t >= a.min(b) - 1e-12 && t <= a.max(b) + 1e-12);
        } else {
            prop_assert_eq!(t, 0.0);
        }
    }

    #[test]
    fn f_grows_away_from_diagonal(a in 0.5f64..30.0, b in 0.0f64..0.45, t in 0.05f64..0.95) {
        // Moving b towards a (below it) shrinks f.
        let b = b * a;
        let closer = b + t * (a - b);
        prop_assert!(f_threshold(a, closer).unwrap() <= f_threshold(a, b).unwrap() + 1e-12);
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), n in 4usize..40) {
        let n = n & !1;
        let params = ModelParams::sbm_with_probabilities(n, 0.6, 0.2).unwrap().with_seed(seed);
        let (g1, t1) = sample_planted(&params, None).unwrap();
        let (g2, t2) = sample_planted(&params, None).unwrap();
        prop_assert_eq!(g1, g2);
        prop_assert_eq!(t1, t2);
    }

    #[test]
    fn adversary_is_monotone(seed in any::<u64>(), edits in 0usize..60) {
        let params = ModelParams::pds_with_probabilities(30, 10, 0.5, 0.3).unwrap().with_seed(seed);
        let (g, truth) = sample_planted(&params, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (add, remove) = random_monotone_edits(&g, &truth, edits, &mut rng);
        let h = apply_monotone_adversary(&g, &truth, &add, &remove).unwrap();
        for i in 0..30 {
            for j in (i + 1)..30 {
                if truth.same_cluster(i, j) {
                    prop_assert!(h.has_edge(i, j) >= g.has_edge(i, j));
                } else {
                    prop_assert!(h.has_edge(i, j) <= g.has_edge(i, j));
                }
            }
        }
        prop_assert!(add.len() + remove.len() <= edits);
    }

    #[test]
    fn psd_projection_is_idempotent(n in 1usize..12, data in prop::collection::vec(-5.0f64..5.0, 144)) {
        let m = SymMatrix::from_fn(n, |i, j| data[i.min(j) * 12 + i.max(j)]);
        let p = project_psd(&m).unwrap();
        prop_assert!(eigenvalues_sym(&p).unwrap()[0] >= -1e-9);
        prop_assert!(project_psd(&p).unwrap().max_abs_diff(&p) <= 1e-9 * (1.0 + p.max_abs()));
    }

    #[test]
    fn witness_swap_beats_truth(seed in any::<u64>(), p in 0.2f64..0.9, q in 0.05f64..0.9) {
        let params = ModelParams::pds_with_probabilities(24, 8, p, q).unwrap().with_seed(seed);
        let (g, truth) = sample_planted(&params, None).unwrap();
        let base = subset_objective(&g, &truth);
        if let Some((i, j)) = ml_failure_witness(&g, &truth, 8, Regime::AGreater).unwrap() {
            prop_assert!(subset_objective(&g, &swapped(&truth, i, j)) > base);
        }
        if let Some((i, j)) = ml_failure_witness(&g, &truth, 8, Regime::BGreater).unwrap() {
            prop_assert!(subset_objective(&g, &swapped(&truth, i, j)) < base);
        }
    }

    #[test]
    fn bisection_oracle_dominates_truth(seed in any::<u64>()) {
        let params = ModelParams::sbm_with_probabilities(12, 0.6, 0.3).unwrap().with_seed(seed);
        let (g, truth) = sample_planted(&params, None).unwrap();
        let ml = ml_bisection(&g).unwrap();
        prop_assert_eq!(bisection_objective(&g, &ml.best), ml.best_objective);
        prop_assert!(ml.best_objective >= bisection_objective(&g, &truth));
        let flipped = Assignment::plus_minus(truth.values().iter().map(|v| -v).collect()).unwrap();
        prop_assert_eq!(bisection_objective(&g, &flipped), bisection_objective(&g, &truth));
        prop_assert!(ml.num_optima >= 1 && ml.unique == (ml.num_optima == 1));
    }

    #[test]
    fn subset_oracle_dominates_truth(seed in any::<u64>()) {
        let params = ModelParams::pds_with_probabilities(12, 4, 0.6, 0.3).unwrap().with_seed(seed);
        let (g, truth) = sample_planted(&params, None).unwrap();
        let ml = ml_subset(&g, 4).unwrap();
        prop_assert_eq!(subset_objective(&g, &ml.best), ml.best_objective);
        prop_assert!(ml.best_objective >= subset_objective(&g, &truth));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sbm_min_max_complement_duality(seed in any::<u64>()) {
        let n = 10;
        let params = ModelParams::sbm_with_probabilities(n, 0.5, 0.4).unwrap().with_seed(seed);
        let (g, _) = sample_planted(&params, None).unwrap();
        let min = solve(&SdpProblem::from_graph(ProblemKind::SbmMin, &g, None).unwrap(), &tight()).unwrap();
        let max = solve(&SdpProblem::from_graph(ProblemKind::SbmMax, &complement(&g), None).unwrap(), &tight()).unwrap();
        prop_assert!(min.is_converged() && max.is_converged(), "{:?} {:?}", (min.iterations, min.primal_residual, min.dual_residual), (max.iterations, max.primal_residual, max.dual_residual));
        prop_assert!((max.objective - (-(n as f64) - min.objective)).abs() < 1e-3);
    }

    #[test]
    fn pds_min_max_complement_duality(seed in any::<u64>()) {
        let (n, k) = (10, 4);
        let params = ModelParams::pds_with_probabilities(n, k, 0.6, 0.3).unwrap().with_seed(seed);
        let (g, _) = sample_planted(&params, None).unwrap();
        let min = solve(&SdpProblem::from_graph(ProblemKind::PdsMin, &g, Some(k)).unwrap(), &tight()).unwrap();
        let max = solve(&SdpProblem::from_graph(ProblemKind::PdsMax, &complement(&g), Some(k)).unwrap(), &tight()).unwrap();
        prop_assert!(min.is_converged() && max.is_converged(), "{:?} {:?}", (min.iterations, min.primal_residual, min.dual_residual), (max.iterations, max.primal_residual, max.dual_residual));
        let kf = k as f64;
        prop_assert!((max.objective - (kf * kf - kf - min.objective)).abs() < 1e-3);
    }

    #[test]
    fn passing_sbm_certificate_implies_integral(seed in any::<u64>()) {
        let params = ModelParams::sbm(60, 12.0, 1.0).unwrap().with_seed(seed);
        let (g, truth) = sample_planted(&params, None).unwrap();
        let cert = build_sbm_certificate(&g, &truth, params.p, params.q, Regime::AGreater).unwrap();
        if cert.verdict.pass {
            let sol = solve(&SdpProblem::from_graph(ProblemKind::SbmMax, &g, None).unwrap(), &SolverOptions::default()).unwrap();
            prop_assert!(is_integral(&sol, &truth, 1e-3).unwrap());
        }
    }

    #[test]
    fn passing_sbm_certificate_implies_integral_b_greater(seed in any::<u64>()) {
        let params = ModelParams::sbm(60, 1.0, 12.0).unwrap().with_seed(seed);
        let (g, truth) = sample_planted(&params, None).unwrap();
        let cert = build_sbm_certificate(&g, &truth, params.p, params.q, Regime::BGreater).unwrap();
        if cert.verdict.pass {
            let sol = solve(&SdpProblem::from_graph(ProblemKind::SbmMin, &g, None).unwrap(), &SolverOptions::default()).unwrap();
            prop_assert!(is_integral(&sol, &truth, 1e-3).unwrap());
        }
    }
}
