use serde::Serialize;

use super::ranked::RankedPairs;
use super::RocError;
use crate::data::PairCounts;
use crate::fit::{ProbMatrix, StrengthEstimates};

/// Both c-statistics together with the linear identity linking them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CStatReport {
    pub c_wl: f64,
    pub c_sw: f64,
    pub w_hat: f64,
    pub n: u64,
    /// `N^2 c_wl - 2 W (N - W) c_sw - W^2`.
    pub identity_residual: f64,
}

impl CStatReport {
    /// Residual bound used throughout: `1e-9 * N^2`.
    pub fn identity_holds(&self) -> bool {
        let n = self.n as f64;
        self.identity_residual.abs() <= 1e-9 * n * n
    }
}

/// `sum_r A_r w_r` with `A_r` the games strictly below level `r` plus half of level `r`.
fn weighted_rank_sum(ranked: &RankedPairs) -> f64 {
    let mut below = 0.0;
    let mut acc = 0.0;
    for l in ranked.levels() {
        acc += (below + 0.5 * l.games) * l.stronger_wins;
        below += l.games;
    }
    acc
}

/// Winner-loser c-statistic in O(R) from the ranked pairs: `2 sum A_r w_r / N^2`.
pub fn c_wl_fast(ranked: &RankedPairs) -> f64 {
    let n = ranked.total_games() as f64;
    2.0 * weighted_rank_sum(ranked) / (n * n)
}

/// Strong-weak c-statistic in O(R): `(sum A_r w_r - W^2 / 2) / (W (N - W))`.
pub fn c_sw_fast(ranked: &RankedPairs) -> Result<f64, RocError> {
    let n = ranked.total_games() as f64;
    let w = ranked.w_hat();
    if !ranked.has_both_classes() {
        return Err(RocError::DegenerateClasses { w_hat: w, total: ranked.total_games() });
    }
    Ok((weighted_rank_sum(ranked) - 0.5 * w * w) / (w * (n - w)))
}

/// Mann-Whitney proportion over every (positive, negative) score pair, ties
/// counted half. Quadratic reference implementation.
fn pairwise_proportion(positives: &[f64], negatives: &[f64]) -> f64 {
    let mut twice: u128 = 0;
    for &a in positives {
        for &b in negatives {
            if a > b {
                twice += 2;
            } else if a == b {
                twice += 1;
            }
        }
    }
    twice as f64 / (2.0 * positives.len() as f64 * negatives.len() as f64)
}

/// Winner-loser c-statistic by direct comparison of every winner score with
/// every loser score.
pub fn c_wl_pairwise(winner_scores: &[f64], loser_scores: &[f64]) -> f64 {
    pairwise_proportion(winner_scores, loser_scores)
}

/// Strong-weak c-statistic by direct comparison of strong-winner scores with
/// weak-winner scores.
pub fn c_sw_pairwise(strong_scores: &[f64], weak_scores: &[f64]) -> Result<f64, RocError> {
    if strong_scores.is_empty() || weak_scores.is_empty() {
        return Err(RocError::DegenerateClasses {
            w_hat: strong_scores.len() as f64,
            total: (strong_scores.len() + weak_scores.len()) as u64,
        });
    }
    Ok(pairwise_proportion(strong_scores, weak_scores))
}

/// Per-game fitted probabilities for the winners and for the losers, each of
/// length `N`, read straight off the probability matrix.
pub fn wl_game_scores(counts: &PairCounts, probs: &ProbMatrix) -> (Vec<f64>, Vec<f64>) {
    let m = counts.num_teams();
    let n = counts.total_games() as usize;
    let (mut winners, mut losers) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..m {
        for j in 0..m {
            for _ in 0..counts.wins(i, j) {
                winners.push(probs.p(i, j));
                losers.push(probs.p(j, i));
            }
        }
    }
    (winners, losers)
}

/// Stronger-side probabilities for strong winners and weak winners.
///
/// Equal-strength pairs split their games evenly between the two classes.
/// When that needs half a game, every game is emitted twice instead, which
/// leaves the Mann-Whitney proportion unchanged.
pub fn sw_game_scores(counts: &PairCounts, probs: &ProbMatrix, estimates: &StrengthEstimates) -> (Vec<f64>, Vec<f64>) {
    let mu = &estimates.mu_hat;
    let m = counts.num_teams();
    let tied = |i: usize, j: usize| mu[i] == mu[j] || probs.q(i, j) == 0.5;
    let needs_doubling =
        (0..m).any(|i| (i + 1..m).any(|j| tied(i, j) && counts.games(i, j) % 2 == 1));
    let copies = if needs_doubling { 2 } else { 1 };

    let (mut strong, mut weak) = (Vec::new(), Vec::new());
    for i in 0..m {
        for j in i + 1..m {
            let games = counts.games(i, j);
            if games == 0 {
                continue;
            }
            let q = probs.q(i, j);
            let (to_strong, to_weak) = if tied(i, j) {
                (games * copies / 2, games * copies / 2)
            } else if mu[i] > mu[j] {
                (counts.wins(i, j) * copies, counts.wins(j, i) * copies)
            } else {
                (counts.wins(j, i) * copies, counts.wins(i, j) * copies)
            };
            strong.extend(std::iter::repeat_n(q, to_strong as usize));
            weak.extend(std::iter::repeat_n(q, to_weak as usize));
        }
    }
    (strong, weak)
}

/// Assemble the report and the residual of `N^2 c_wl = 2 W (N - W) c_sw + W^2`.
pub fn verify_identity(c_wl: f64, c_sw: f64, w_hat: f64, n: u64) -> CStatReport {
    let nf = n as f64;
    let identity_residual = nf * nf * c_wl - 2.0 * w_hat * (nf - w_hat) * c_sw - w_hat * w_hat;
    CStatReport {
        c_wl,
        c_sw,
        w_hat,
        n,
        identity_residual,
    }
}
