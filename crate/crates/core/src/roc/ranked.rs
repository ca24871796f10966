use serde::Serialize;

use crate::data::PairCounts;
use crate::fit::{ProbMatrix, StrengthEstimates};

/// One team pair with at least one game, oriented stronger-first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedPair {
    pub stronger: usize,
    pub weaker: usize,
    /// Fitted probability that the stronger side wins, in `[0.5, 1)`.
    pub q: f64,
    pub games: u64,
    /// Games credited to the stronger side; `games / 2` for tied pairs.
    pub stronger_wins: f64,
    pub tied: bool,
}

impl RankedPair {
    pub fn weaker_wins(&self) -> f64 {
        self.games as f64 - self.stronger_wins
    }
}

/// A distinct `q` value with the games and stronger-side wins of every pair at it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QLevel {
    pub q: f64,
    pub games: f64,
    pub stronger_wins: f64,
}

/// Pairs sorted by nondecreasing stronger-side probability, plus the
/// equal-strength bookkeeping needed by the strong-weak construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedPairs {
    pairs: Vec<RankedPair>,
    tie_groups: Vec<Vec<usize>>,
    tied_pair_count: usize,
    tied_games_credit: f64,
    w_hat: f64,
    total: u64,
}

impl RankedPairs {
    pub fn pairs(&self) -> &[RankedPair] {
        &self.pairs
    }

    pub fn q_sorted(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.q).collect()
    }

    pub fn n_q(&self) -> Vec<u64> {
        self.pairs.iter().map(|p| p.games).collect()
    }

    pub fn w_q(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.stronger_wins).collect()
    }

    /// Teams grouped by exactly equal strength; singletons included, groups
    /// ordered by smallest member.
    pub fn tie_groups(&self) -> &[Vec<usize>] {
        &self.tie_groups
    }

    /// Number of team pairs with equal strength estimates.
    pub fn tied_pair_count(&self) -> usize {
        self.tied_pair_count
    }

    /// Wins credited to the nominal stronger side of tied pairs (`n_ij / 2` each).
    pub fn tied_games_credit(&self) -> f64 {
        self.tied_games_credit
    }

    /// Games won by the estimated-stronger team, half credit under ties.
    pub fn w_hat(&self) -> f64 {
        self.w_hat
    }

    pub fn total_games(&self) -> u64 {
        self.total
    }

    /// Whether both strong-weak classes are nonempty.
    pub fn has_both_classes(&self) -> bool {
        self.w_hat > 0.0 && self.w_hat < self.total as f64
    }

    /// Pairs merged by exactly equal `q`, ascending.
    pub fn levels(&self) -> Vec<QLevel> {
        let mut out: Vec<QLevel> = Vec::new();
        for p in &self.pairs {
            match out.last_mut() {
                Some(l) if l.q == p.q => {
                    l.games += p.games as f64;
                    l.stronger_wins += p.stronger_wins;
                }
                _ => out.push(QLevel {
                    q: p.q,
                    games: p.games as f64,
                    stronger_wins: p.stronger_wins,
                }),
            }
        }
        out
    }
}

/// Orient every played pair stronger-first and sort by `q`.
///
/// The stronger side is the team with the larger strength; for equal
/// strengths it is the lower-indexed team, credited with half the games.
/// A pair whose fitted probability is exactly 0.5 is treated as tied as well,
/// since the model cannot tell its sides apart.
pub fn rank_pairs(counts: &PairCounts, probs: &ProbMatrix, estimates: &StrengthEstimates) -> RankedPairs {
    let mu = &estimates.mu_hat;
    let m = counts.num_teams();
    debug_assert_eq!(mu.len(), m);
    debug_assert_eq!(probs.size(), m);

    let mut pairs = Vec::new();
    let mut w_hat = 0.0;
    let mut tied_games_credit = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let games = counts.games(i, j);
            if games == 0 {
                continue;
            }
            let q = probs.q(i, j);
            let tied = mu[i] == mu[j] || q == 0.5;
            let (stronger, weaker) = if mu[i] >= mu[j] { (i, j) } else { (j, i) };
            let stronger_wins = if tied {
                let half = games as f64 / 2.0;
                tied_games_credit += half;
                half
            } else {
                counts.wins(stronger, weaker) as f64
            };
            w_hat += stronger_wins;
            pairs.push(RankedPair {
                stronger,
                weaker,
                q,
                games,
                stronger_wins,
                tied,
            });
        }
    }
    pairs.sort_by(|a, b| a.q.total_cmp(&b.q));

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| mu[a].total_cmp(&mu[b]).then(a.cmp(&b)));
    let mut tie_groups: Vec<Vec<usize>> = Vec::new();
    for &t in &order {
        match tie_groups.last_mut() {
            Some(g) if mu[g[0]] == mu[t] => g.push(t),
            _ => tie_groups.push(vec![t]),
        }
    }
    tie_groups.sort_by_key(|g| g[0]);
    let tied_pair_count = tie_groups.iter().map(|g| g.len() * (g.len() - 1) / 2).sum();

    RankedPairs {
        pairs,
        tie_groups,
        tied_pair_count,
        tied_games_credit,
        w_hat,
        total: counts.total_games(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::LinkFunction;

    #[test]
    fn all_tied_cycle() {
        let c = PairCounts::from_wins(None, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        let est = StrengthEstimates::from_strengths(&[0.0; 3], LinkFunction::Logistic);
        let r = rank_pairs(&c, &est.probs(), &est);
        assert_eq!(r.tied_pair_count(), 3);
        assert_eq!(r.tied_games_credit(), 1.5);
        assert_eq!(r.w_hat(), 1.5);
        assert_eq!(r.tie_groups(), &[vec![0, 1, 2]]);
        assert!(r.pairs().iter().all(|p| p.tied && p.q == 0.5));
    }

    #[test]
    fn single_pair() {
        let c = PairCounts::from_wins(None, &[vec![0, 7], vec![3, 0]]).unwrap();
        // Strength gap chosen so the logistic link gives q = 0.73.
        let gap = LinkFunction::Logistic.quantile(0.73);
        let est = StrengthEstimates::from_strengths(&[gap, 0.0], LinkFunction::Logistic);
        let r = rank_pairs(&c, &est.probs(), &est);
        assert_eq!(r.q_sorted().len(), 1);
        assert!((r.q_sorted()[0] - 0.73).abs() < 1e-15);
        assert_eq!(r.w_q(), vec![7.0]);
        assert_eq!(r.w_hat(), 7.0);
        assert_eq!(r.tied_pair_count(), 0);
        assert_eq!(r.tie_groups().len(), 2);
    }

    #[test]
    fn orientation_follows_strength() {
        let c = PairCounts::from_wins(None, &[vec![0, 2], vec![8, 0]]).unwrap();
        let est = StrengthEstimates::from_strengths(&[-1.0, 1.0], LinkFunction::Logistic);
        let r = rank_pairs(&c, &est.probs(), &est);
        let p = r.pairs()[0];
        assert_eq!((p.stronger, p.weaker), (1, 0));
        assert_eq!(p.stronger_wins, 8.0);
        assert!(p.q > 0.5);
    }

    #[test]
    fn skips_unplayed_pairs_but_counts_their_ties() {
        let c = PairCounts::from_wins(None, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        let est = StrengthEstimates::from_strengths(&[0.0, 0.0, 0.0], LinkFunction::Probit);
        let r = rank_pairs(&c, &est.probs(), &est);
        assert_eq!(r.pairs().len(), 1);
        assert_eq!(r.tied_pair_count(), 3);
        assert_eq!(r.tied_games_credit(), 1.0);
    }
}
