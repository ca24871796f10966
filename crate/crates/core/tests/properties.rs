mod common;

use common::*;
use pcroc::data::{aggregate, check_connectivity, GameRecord, PairCounts};
use pcroc::fit::{LinkFunction, StrengthEstimates};
use pcroc::metricsim::{as_threshold_curve, roc_distance, MetricConfig, Rho, ThresholdCurve};
use pcroc::roc::{self, rank_pairs, wl_levels, CurveKind};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn win_matrix() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (2usize..7).prop_flat_map(|m| {
        prop::collection::vec(0u64..5, m * m).prop_map(move |v| {
            (0..m)
                .map(|i| (0..m).map(|j| if i == j { 0 } else { v[i * m + j] }).collect())
                .collect()
        })
    })
}

fn games_of(wins: &[Vec<u64>]) -> Vec<GameRecord> {
    let mut g = Vec::new();
    for (i, row) in wins.iter().enumerate() {
        for (j, &w) in row.iter().enumerate() {
            for _ in 0..w {
                g.push(GameRecord::new(format!("t{i}"), format!("t{j}")).unwrap());
            }
        }
    }
    g
}

/// Connectivity by trying every bipartition: each side must beat the other at least once.
fn partition_condition(c: &PairCounts) -> bool {
    let m = c.num_teams();
    (1u32..(1 << m) - 1).all(|mask| {
        let inside = |i: usize| mask & (1 << i) != 0;
        let mut out_beats_in = false;
        let mut in_beats_out = false;
        for i in 0..m {
            for j in 0..m {
                if inside(i) && !inside(j) && c.wins(i, j) > 0 {
                    in_beats_out = true;
                }
                if !inside(i) && inside(j) && c.wins(i, j) > 0 {
                    out_beats_in = true;
                }
            }
        }
        in_beats_out && out_beats_in
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn aggregate_ignores_game_order(wins in win_matrix(), seed in any::<u64>()) {
        let mut games = games_of(&wins);
        prop_assume!(!games.is_empty());
        let a = aggregate(&games).unwrap();
        games.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let b = aggregate(&games).unwrap();
        for ti in a.teams() {
            for tj in a.teams() {
                let (i, j) = (a.team_index(ti).unwrap(), a.team_index(tj).unwrap());
                let (k, l) = (b.team_index(ti).unwrap(), b.team_index(tj).unwrap());
                prop_assert_eq!(a.wins(i, j), b.wins(k, l));
            }
        }
    }

    #[test]
    fn count_totals_agree(wins in win_matrix()) {
        let games = games_of(&wins);
        prop_assume!(!games.is_empty());
        let c = aggregate(&games).unwrap();
        let m = c.num_teams();
        prop_assert_eq!(c.total_games(), games.len() as u64);
        let sum_wins: u64 = (0..m).map(|i| c.team_wins(i)).sum();
        prop_assert_eq!(sum_wins, c.total_games());
        let sum_games: u64 = (0..m).map(|i| c.team_games(i)).sum();
        prop_assert_eq!(sum_games, 2 * c.total_games());
        for i in 0..m {
            for j in 0..m {
                prop_assert_eq!(c.games(i, j), c.games(j, i));
            }
        }
    }

    #[test]
    fn connectivity_matches_partitions(wins in win_matrix()) {
        let c = PairCounts::from_wins(None, &wins).unwrap();
        prop_assert_eq!(check_connectivity(&c).is_connected(), partition_condition(&c));
    }

    #[test]
    fn ranked_pairs_are_sorted_and_complete(wins in win_matrix(), mu in prop::collection::vec(-2.0f64..2.0, 7)) {
        let c = PairCounts::from_wins(None, &wins).unwrap();
        let est = StrengthEstimates::from_strengths(&mu[..c.num_teams()], LinkFunction::Logistic);
        let r = rank_pairs(&c, &est.probs(), &est);
        prop_assert!(r.q_sorted().windows(2).all(|w| w[0] <= w[1]));
        let played = (0..c.num_teams()).flat_map(|i| (i + 1..c.num_teams()).map(move |j| (i, j)))
            .filter(|&(i, j)| c.games(i, j) > 0).count();
        prop_assert_eq!(r.pairs().len(), played);
        prop_assert_eq!(r.n_q().iter().sum::<u64>(), c.total_games());
        for p in r.pairs() {
            prop_assert!(p.q >= 0.5 && p.q < 1.0);
            prop_assert!(est.mu_hat[p.stronger] >= est.mu_hat[p.weaker]);
        }
    }
}

#[test]
fn connectivity_exhaustive_up_to_ten_teams() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let m = rng.random_range(2..=10);
        let sparse = rng.random_range(1..=3);
        let mut wins = vec![vec![0u64; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i != j && rng.random_range(0..m * sparse) < 2 {
                    wins[i][j] = 1;
                }
            }
        }
        let c = PairCounts::from_wins(None, &wins).unwrap();
        assert_eq!(check_connectivity(&c).is_connected(), partition_condition(&c), "{wins:?}");
    }
}

#[test]
fn relabelling_teams_permutes_estimates() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let m = rng.random_range(3..8);
        let c = connected_counts(&mut rng, m, 6);
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut rng);
        let wins: Vec<Vec<u64>> = (0..m).map(|i| (0..m).map(|j| c.wins(perm[i], perm[j])).collect()).collect();
        let p = PairCounts::from_wins(None, &wins).unwrap();
        let (a, b) = (fitted(&c), fitted(&p));
        for i in 0..m {
            assert!((a.mu_hat[perm[i]] - b.mu_hat[i]).abs() < 1e-8);
        }
        let (ra, rb) = (roc::analyze(&c, &a), roc::analyze(&p, &b));
        assert!((ra.c_wl - rb.c_wl).abs() < 1e-9);
    }
}

#[test]
fn reversing_every_result_negates_strengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..30 {
        let m = rng.random_range(3..7);
        let c = connected_counts(&mut rng, m, 6);
        let (a, b) = (fitted(&c), fitted(&c.reversed()));
        for (x, y) in a.mu_hat.iter().zip(&b.mu_hat) {
            assert!((x + y).abs() < 1e-8);
        }
    }
}

#[test]
fn wl_curve_equals_generic_roc_of_game_scores() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let m = rng.random_range(3..8);
        let c = connected_counts(&mut rng, m, 8);
        let est = fitted(&c);
        let probs = est.probs();
        let (win, lose) = roc::wl_game_scores(&c, &probs);
        let oracle = brute_force_knots(&win, &lose);
        let curve = roc::wl_curve(&rank_pairs(&c, &probs, &est));
        assert_eq!(curve.knots.len(), oracle.len());
        for (a, b) in curve.knots.iter().zip(&oracle) {
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12, "{a:?} vs {b:?}");
        }
        assert!((curve.auc() - trapezoid(&oracle)).abs() < 1e-12);
    }
}

#[test]
fn sw_curve_equals_generic_roc_with_ties() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    while checked < 60 {
        let m = rng.random_range(3..8);
        let c = any_counts(&mut rng, m, 6);
        let est = tied_strengths(&mut rng, c.num_teams());
        let probs = est.probs();
        let r = rank_pairs(&c, &probs, &est);
        let Ok(curve) = roc::sw_curve(&r) else { continue };
        let (strong, weak) = roc::sw_game_scores(&c, &probs, &est);
        let oracle = brute_force_knots(&strong, &weak);
        assert_eq!(curve.knots.len(), oracle.len());
        for (a, b) in curve.knots.iter().zip(&oracle) {
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        }
        checked += 1;
    }
}

#[test]
fn threshold_area_matches_knot_area() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let m = rng.random_range(3..10);
        let c = connected_counts(&mut rng, m, 10);
        let est = fitted(&c);
        let r = rank_pairs(&c, &est.probs(), &est);
        let t = as_threshold_curve(&r, CurveKind::Wl).unwrap();
        assert!((t.area() - roc::wl_curve(&r).auc()).abs() < 1e-10);
        assert_eq!(t.knots(), wl_levels(&r.levels()).knots());
        if let (Ok(ts), Ok(cs)) = (as_threshold_curve(&r, CurveKind::Sw), roc::sw_curve(&r)) {
            assert!((ts.area() - cs.auc()).abs() < 1e-10);
        }
    }
}

#[test]
fn threshold_curve_steps_match_indicator_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..40 {
        let m = rng.random_range(3..7);
        let c = connected_counts(&mut rng, m, 6);
        let est = fitted(&c);
        let probs = est.probs();
        let t = as_threshold_curve(&rank_pairs(&c, &probs, &est), CurveKind::Wl).unwrap();
        let (win, lose) = roc::wl_game_scores(&c, &probs);
        for k in 0..=200 {
            let theta = k as f64 / 200.0;
            let tp = win.iter().filter(|&&s| s > theta).count() as f64 / win.len() as f64;
            let fp = lose.iter().filter(|&&s| s > theta).count() as f64 / lose.len() as f64;
            let (f, p) = t.eval(theta);
            assert!((f - fp).abs() < 1e-12 && (p - tp).abs() < 1e-12);
        }
    }
}

fn random_threshold_curve<R: Rng>(rng: &mut R) -> ThresholdCurve {
    let m = rng.random_range(3..6);
        let c = connected_counts(rng, m, 5);
    let est = fitted(&c);
    as_threshold_curve(&rank_pairs(&c, &est.probs(), &est), CurveKind::Wl).unwrap()
}

#[test]
fn roc_distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let configs = [
        MetricConfig::default(),
        MetricConfig::new(Rho::Manhattan, 1.0).unwrap(),
        MetricConfig::new(Rho::Chebyshev, 3.5).unwrap(),
    ];
    for _ in 0..50 {
        let (f, g, h) = (
            random_threshold_curve(&mut rng),
            random_threshold_curve(&mut rng),
            random_threshold_curve(&mut rng),
        );
        for cfg in &configs {
            let (fg, gf) = (roc_distance(&f, &g, cfg), roc_distance(&g, &f, cfg));
            assert_eq!(fg, gf);
            assert!(fg >= 0.0);
            assert_eq!(roc_distance(&f, &f, cfg), 0.0);
            assert!(roc_distance(&f, &h, cfg) <= fg + roc_distance(&g, &h, cfg) + 1e-12);
        }
    }
}

#[test]
fn regular_tournament_ties_everything() {
    let c = regular_tournament(5, 3);
    let est = fitted(&c);
    assert!(est.mu_hat.iter().all(|&x| x == 0.0));
    let r = rank_pairs(&c, &est.probs(), &est);
    assert_eq!(r.tied_pair_count(), 10);
    assert_eq!(r.w_hat(), 15.0);
    let a = roc::analyze(&c, &est);
    assert_eq!(a.c_wl, 0.5);
    assert_eq!(a.report.unwrap().c_sw, 0.5);
}
