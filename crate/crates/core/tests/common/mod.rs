#![allow(dead_code)]

use pcroc::data::{check_connectivity, PairCounts};
use pcroc::fit::{fit_mle, FitConfig, LinkFunction, StrengthEstimates};
use rand::Rng;

/// Random win matrix with `n_ij` uniform on `0..=max_games`, redrawn until connected.
pub fn connected_counts<R: Rng>(rng: &mut R, m: usize, max_games: u64) -> PairCounts {
    loop {
        let mut wins = vec![vec![0u64; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let n = rng.random_range(0..=max_games);
                let w = rng.random_range(0..=n);
                wins[i][j] = w;
                wins[j][i] = n - w;
            }
        }
        let c = PairCounts::from_wins(None, &wins).unwrap();
        if check_connectivity(&c).is_connected() {
            return c;
        }
    }
}

/// Random win matrix, connectivity not enforced.
pub fn any_counts<R: Rng>(rng: &mut R, m: usize, max_games: u64) -> PairCounts {
    let mut wins = vec![vec![0u64; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let n = rng.random_range(0..=max_games);
            let w = rng.random_range(0..=n);
            wins[i][j] = w;
            wins[j][i] = n - w;
        }
    }
    PairCounts::from_wins(None, &wins).unwrap()
}

pub fn fitted(counts: &PairCounts) -> StrengthEstimates {
    fit_mle(counts, LinkFunction::Logistic, &FitConfig::default()).unwrap()
}

/// Strengths drawn from a handful of values, so several teams share one.
pub fn tied_strengths<R: Rng>(rng: &mut R, m: usize) -> StrengthEstimates {
    let palette = [-0.8, -0.25, 0.0, 0.4, 1.1];
    let k = rng.random_range(1..=3);
    let mu: Vec<f64> = (0..m).map(|_| palette[rng.random_range(0..k)]).collect();
    StrengthEstimates::from_strengths(&mu, LinkFunction::Logistic)
}

/// Round robin where every team wins exactly half its games, so every fitted
/// strength is equal. Odd `m` and odd game counts leave half-integer credit.
pub fn regular_tournament(m: usize, n: u64) -> PairCounts {
    assert!(m % 2 == 1);
    let mut wins = vec![vec![0u64; m]; m];
    for i in 0..m {
        for d in 1..=m / 2 {
            wins[i][(i + d) % m] += n;
        }
    }
    PairCounts::from_wins(None, &wins).unwrap()
}

/// Every outcome vector of independent `Binomial(n_r, q_r)` counts with its probability.
pub fn enumerate_outcomes(n: &[u64], q: &[f64]) -> Vec<(Vec<u64>, f64)> {
    let mut out = vec![(Vec::new(), 1.0)];
    for (&nr, &qr) in n.iter().zip(q) {
        let pmf: Vec<f64> = (0..=nr).map(|w| binom(nr, w) * qr.powi(w as i32) * (1.0 - qr).powi((nr - w) as i32)).collect();
        let mut next = Vec::with_capacity(out.len() * (nr as usize + 1));
        for (v, p) in &out {
            for (w, pw) in pmf.iter().enumerate() {
                let mut v2 = v.clone();
                v2.push(w as u64);
                next.push((v2, p * pw));
            }
        }
        out = next;
    }
    out
}

pub fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// ROC knots by brute force: one threshold per distinct score plus one above
/// them all, counting scores at or above the threshold.
pub fn brute_force_knots(pos: &[f64], neg: &[f64]) -> Vec<(f64, f64)> {
    let mut thresholds: Vec<f64> = pos.iter().chain(neg).copied().collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let mut knots = vec![(0.0, 0.0)];
    for t in thresholds {
        let tp = pos.iter().filter(|&&s| s >= t).count() as f64 / pos.len() as f64;
        let fp = neg.iter().filter(|&&s| s >= t).count() as f64 / neg.len() as f64;
        if knots.last() != Some(&(fp, tp)) {
            knots.push((fp, tp));
        }
    }
    knots
}

pub fn trapezoid(knots: &[(f64, f64)]) -> f64 {
    knots.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0).sum()
}
