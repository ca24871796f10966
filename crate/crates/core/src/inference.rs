//! True and limiting c-statistics under known strengths, and their standard errors.
//!
//! A [`TrueModel`] fixes, for every played pair, the probability `q` that the
//! stronger side wins and the number of games. Wins are independent
//! `Binomial(n_r, q_r)` draws. All statistics here follow the pair order of
//! the model (ascending `q`, ties kept in input order), with
//! `A_r = sum_{s<r} n_s + n_r / 2`.

use serde::Serialize;
use thiserror::Error;

use crate::data::PairCounts;
use crate::fit::{LinkFunction, StrengthEstimates};
use crate::roc::{self, CurveKind, Provenance, RocAnalysis, RocCurve, ScoreLevels};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("q and n have different lengths ({q} vs {n})")]
    LengthMismatch { q: usize, n: usize },
    #[error("model has no pairs with games")]
    Empty,
    #[error("q[{index}] = {value} is outside [0.5, 1)")]
    QOutOfRange { index: usize, value: f64 },
    #[error("q must be nondecreasing (q[{index}] < q[{}])", index - 1)]
    NotSorted { index: usize },
    #[error("strong-weak statistic undefined: stronger side won {w} of {n} games")]
    DegenerateClasses { w: f64, n: f64 },
    #[error("delta-method point has a zero mean (mu_X = {mu_x}, mu_Y = {mu_y})")]
    ZeroMean { mu_x: f64, mu_y: f64 },
}

/// One played pair under the true model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruePair {
    pub stronger: usize,
    pub weaker: usize,
    pub q: f64,
    pub games: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrueModel {
    pairs: Vec<TruePair>,
    total: u64,
}

impl TrueModel {
    /// Build from aligned `q` and game counts; pairs are sorted by `q` (stable).
    pub fn new(q: &[f64], n: &[u64]) -> Result<Self, InferenceError> {
        if q.len() != n.len() {
            return Err(InferenceError::LengthMismatch { q: q.len(), n: n.len() });
        }
        check_q_range(q)?;
        let pairs = q
            .iter()
            .zip(n)
            .enumerate()
            .map(|(r, (&q, &games))| TruePair {
                stronger: 2 * r,
                weaker: 2 * r + 1,
                q,
                games,
            })
            .collect();
        Self::from_pairs(pairs)
    }

    /// True model for strengths `mu` under a schedule of `(i, j, games)` entries.
    /// Repeated entries for the same pair accumulate.
    pub fn from_strengths(mu: &[f64], schedule: &[(usize, usize, u64)], link: LinkFunction) -> Result<Self, InferenceError> {
        let m = mu.len();
        let mut games = vec![0u64; m * m];
        for &(i, j, n) in schedule {
            let (a, b) = (i.min(j), i.max(j));
            games[a * m + b] += n;
        }
        let probs = StrengthEstimates::from_strengths(mu, link).probs();
        let mut pairs = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let n = games[i * m + j];
                if n == 0 {
                    continue;
                }
                let (stronger, weaker) = if mu[i] >= mu[j] { (i, j) } else { (j, i) };
                pairs.push(TruePair {
                    stronger,
                    weaker,
                    q: probs.q(i, j),
                    games: n,
                });
            }
        }
        Self::from_pairs(pairs)
    }

    fn from_pairs(mut pairs: Vec<TruePair>) -> Result<Self, InferenceError> {
        pairs.retain(|p| p.games > 0);
        if pairs.is_empty() {
            return Err(InferenceError::Empty);
        }
        pairs.sort_by(|a, b| a.q.total_cmp(&b.q));
        let total = pairs.iter().map(|p| p.games).sum();
        Ok(Self { pairs, total })
    }

    pub fn pairs(&self) -> &[TruePair] {
        &self.pairs
    }

    pub fn q(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.q).collect()
    }

    pub fn n_q(&self) -> Vec<u64> {
        self.pairs.iter().map(|p| p.games).collect()
    }

    pub fn total_games(&self) -> u64 {
        self.total
    }

    /// Design ratios `d_r = n_r / N`.
    pub fn design(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.pairs.iter().map(|p| p.games as f64 / n).collect()
    }

    /// `A_r` for each pair in model order.
    pub fn rank_weights(&self) -> Vec<f64> {
        let mut below = 0.0;
        self.pairs
            .iter()
            .map(|p| {
                let a = below + 0.5 * p.games as f64;
                below += p.games as f64;
                a
            })
            .collect()
    }

    /// Stronger-side wins in `counts`, aligned with the model's pair order.
    pub fn realized_wins(&self, counts: &PairCounts) -> Vec<f64> {
        self.pairs
            .iter()
            .map(|p| counts.wins(p.stronger, p.weaker) as f64)
            .collect()
    }

    /// Same pairs with every game count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        let pairs = self
            .pairs
            .iter()
            .map(|p| TruePair {
                games: p.games * factor,
                ..*p
            })
            .collect();
        Self {
            pairs,
            total: self.total * factor,
        }
    }
}

fn check_q_range(q: &[f64]) -> Result<(), InferenceError> {
    for (index, &value) in q.iter().enumerate() {
        if !(0.5..1.0).contains(&value) {
            return Err(InferenceError::QOutOfRange { index, value });
        }
    }
    Ok(())
}

fn check_q_sorted(q: &[f64]) -> Result<(), InferenceError> {
    check_q_range(q)?;
    if q.is_empty() {
        return Err(InferenceError::Empty);
    }
    if let Some(index) = (1..q.len()).find(|&r| q[r] < q[r - 1]) {
        return Err(InferenceError::NotSorted { index });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CStats {
    pub c_wl: f64,
    pub c_sw: f64,
}

/// True c-statistics for realized stronger-side wins `w` (aligned with the model).
pub fn true_c_stats(model: &TrueModel, w: &[f64]) -> Result<CStats, InferenceError> {
    let n = model.total as f64;
    let weights = model.rank_weights();
    let s: f64 = weights.iter().zip(w).map(|(a, w)| a * w).sum();
    let total_w: f64 = w.iter().sum();
    let c_wl = 2.0 * s / (n * n);
    if total_w <= 0.0 || total_w >= n {
        return Err(InferenceError::DegenerateClasses { w: total_w, n });
    }
    let c_sw = (s - 0.5 * total_w * total_w) / (total_w * (n - total_w));
    Ok(CStats { c_wl, c_sw })
}

/// Limiting c-statistics when every pair plays equally often:
/// `c_wl = 2U / R^2`, `c_sw = (U - V^2/2) / (V (R - V))` with
/// `U = sum (r - 1/2) q_r` and `V = sum q_r`.
pub fn limiting_c_stats(q: &[f64]) -> Result<CStats, InferenceError> {
    check_q_sorted(q)?;
    let r = q.len() as f64;
    let (u, v) = u_and_v(q);
    if v >= r {
        return Err(InferenceError::DegenerateClasses { w: v, n: r });
    }
    Ok(CStats {
        c_wl: 2.0 * u / (r * r),
        c_sw: (u - 0.5 * v * v) / (v * (r - v)),
    })
}

fn u_and_v(q: &[f64]) -> (f64, f64) {
    let u = q.iter().enumerate().map(|(k, &x)| (k as f64 + 0.5) * x).sum();
    let v = q.iter().sum();
    (u, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WlSwComparison {
    pub c_wl: f64,
    pub c_sw: f64,
    /// `c_wl - c_sw`.
    pub margin: f64,
    /// `margin >= -1e-12`.
    pub holds: bool,
    /// Every `q` is exactly 0.5 (all strengths equal), where the two coincide.
    pub equality: bool,
}

/// Check that the limiting WL c-statistic dominates the limiting SW one.
pub fn check_wl_ge_sw(q: &[f64]) -> Result<WlSwComparison, InferenceError> {
    let c = limiting_c_stats(q)?;
    let margin = c.c_wl - c.c_sw;
    Ok(WlSwComparison {
        c_wl: c.c_wl,
        c_sw: c.c_sw,
        margin,
        holds: margin >= -1e-12,
        equality: q.iter().all(|&x| x == 0.5),
    })
}

/// The quantity `U` and its upper bound `Vbar^2 R^2 / (2 - 4 Vbar (1 - Vbar))`
/// whose ordering is equivalent to `c_wl >= c_sw` in the limit.
pub fn rank_sum_bound(q: &[f64]) -> Result<(f64, f64), InferenceError> {
    check_q_sorted(q)?;
    let r = q.len() as f64;
    let (u, v) = u_and_v(q);
    let vbar = v / r;
    Ok((u, vbar * vbar * r * r / (2.0 - 4.0 * vbar * (1.0 - vbar))))
}

/// Closed-form standard error of the true WL c-statistic:
/// `(2 / N^2) sqrt(sum A_r^2 n_r q_r (1 - q_r))`.
pub fn se_c_wl(model: &TrueModel) -> f64 {
    let n = model.total as f64;
    let var: f64 = model
        .rank_weights()
        .iter()
        .zip(&model.pairs)
        .map(|(a, p)| a * a * p.games as f64 * p.q * (1.0 - p.q))
        .sum();
    2.0 / (n * n) * var.sqrt()
}

/// Raw moments of `W = sum w_r` and `S = sum A_r w_r` under independent binomial wins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet {
    /// `E[W]`.
    pub b1: f64,
    /// `E[W^2]`.
    pub b2: f64,
    /// `E[W^3]`.
    pub b3: f64,
    /// `E[W^4]`.
    pub b4: f64,
    /// `E[S]`.
    pub c1: f64,
    /// `E[S^2]`.
    pub c2: f64,
    /// `E[W S]`.
    pub d1: f64,
    /// `E[W^2 S]`.
    pub d2: f64,
}

/// Exact moments, assembled from per-pair binomial cumulants. Joint cumulants
/// of sums of independent terms add, and `S` weights pair `r` by `A_r`, so
/// `kappa(W^a, S^b) = sum_r A_r^b kappa_{a+b}(w_r)`.
pub fn moments(model: &TrueModel) -> MomentSet {
    let weights = model.rank_weights();
    let (mut k1, mut k2, mut k3, mut k4) = (0.0, 0.0, 0.0, 0.0);
    let (mut s1, mut ss, mut ws, mut wws) = (0.0, 0.0, 0.0, 0.0);
    for (a, p) in weights.iter().zip(&model.pairs) {
        let (n, q) = (p.games as f64, p.q);
        let v = q * (1.0 - q);
        let c1 = n * q;
        let c2 = n * v;
        let c3 = n * v * (1.0 - 2.0 * q);
        let c4 = n * v * (1.0 - 6.0 * v);
        k1 += c1;
        k2 += c2;
        k3 += c3;
        k4 += c4;
        s1 += a * c1;
        ss += a * a * c2;
        ws += a * c2;
        wws += a * c3;
    }
    let b1 = k1;
    let b2 = k2 + k1 * k1;
    let b3 = k3 + 3.0 * k2 * k1 + k1.powi(3);
    let b4 = k4 + 4.0 * k3 * k1 + 3.0 * k2 * k2 + 6.0 * k2 * k1 * k1 + k1.powi(4);
    let c1 = s1;
    let c2 = ss + s1 * s1;
    let d1 = ws + k1 * s1;
    let d2 = wws + 2.0 * ws * k1 + k2 * s1 + k1 * k1 * s1;
    MomentSet {
        b1,
        b2,
        b3,
        b4,
        c1,
        c2,
        d1,
        d2,
    }
}

/// First-order (delta-method) standard error of the true SW c-statistic,
/// written as `X / Y` with `X = S - W^2/2` and `Y = W (N - W)`.
///
/// A slightly negative radicand (possible with `q` near 1 and few games) is
/// clamped to zero with a warning.
pub fn se_c_sw_taylor(m: &MomentSet, n_total: u64) -> Result<f64, InferenceError> {
    let n = n_total as f64;
    let mu_x = m.c1 - 0.5 * m.b2;
    let mu_y = n * m.b1 - m.b2;
    if mu_x == 0.0 || mu_y == 0.0 {
        return Err(InferenceError::ZeroMean { mu_x, mu_y });
    }
    let var_x = m.c2 - m.d2 + 0.25 * m.b4 - mu_x * mu_x;
    let var_y = n * n * m.b2 - 2.0 * n * m.b3 + m.b4 - mu_y * mu_y;
    let cov_xy = n * m.d1 - m.d2 - 0.5 * n * m.b3 + 0.5 * m.b4 - mu_x * mu_y;
    let mut radicand = var_x / (mu_x * mu_x) - 2.0 * cov_xy / (mu_x * mu_y) + var_y / (mu_y * mu_y);
    if radicand < 0.0 {
        log::warn!("negative delta-method radicand {radicand:e} clamped to zero");
        radicand = 0.0;
    }
    Ok((mu_x / mu_y).abs() * radicand.sqrt())
}

/// Winner-loser score masses in the large-sample limit at fixed design.
pub fn limiting_wl_levels(model: &TrueModel) -> ScoreLevels {
    let d = model.design();
    ScoreLevels::from_masses(model.pairs.iter().zip(d).flat_map(|(p, d)| {
        [(p.q, p.q * d, (1.0 - p.q) * d), (1.0 - p.q, (1.0 - p.q) * d, p.q * d)]
    }))
}

/// Strong-weak score masses in the large-sample limit at fixed design.
pub fn limiting_sw_levels(model: &TrueModel) -> ScoreLevels {
    let d = model.design();
    ScoreLevels::from_masses(
        model
            .pairs
            .iter()
            .zip(d)
            .map(|(p, d)| (p.q, p.q * d, (1.0 - p.q) * d)),
    )
}

pub fn limiting_wl_curve(model: &TrueModel) -> RocCurve {
    RocCurve::new(CurveKind::Wl, Provenance::Limiting, limiting_wl_levels(model).knots())
}

pub fn limiting_sw_curve(model: &TrueModel) -> RocCurve {
    RocCurve::new(CurveKind::Sw, Provenance::Limiting, limiting_sw_levels(model).knots())
}

/// Limiting c-statistics for an arbitrary design, as areas under the limiting curves.
pub fn limiting_c_stats_for_design(model: &TrueModel) -> CStats {
    CStats {
        c_wl: limiting_wl_curve(model).auc(),
        c_sw: limiting_sw_curve(model).auc(),
    }
}

/// ROC analysis of realized data under the true strengths (the "true" curves).
pub fn true_analysis(counts: &PairCounts, mu: &[f64], link: LinkFunction) -> RocAnalysis {
    let truth = StrengthEstimates::from_strengths(mu, link);
    let mut a = roc::analyze(counts, &truth);
    a.wl.provenance = Provenance::True;
    if let Some(sw) = a.sw.as_mut() {
        sw.provenance = Provenance::True;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn true_stats_single_pair() {
        let m = TrueModel::new(&[0.7], &[10]).unwrap();
        let c = true_c_stats(&m, &[7.0]).unwrap();
        assert!(close(c.c_wl, 0.7, 1e-15));
        assert!(close(c.c_sw, 0.5, 1e-15));
    }

    #[test]
    fn true_stats_symmetric() {
        let m = TrueModel::new(&[0.5, 0.5, 0.5], &[4, 2, 6]).unwrap();
        let c = true_c_stats(&m, &[2.0, 1.0, 3.0]).unwrap();
        assert!(close(c.c_wl, 0.5, 1e-15));
        assert!(close(c.c_sw, 0.5, 1e-15));
    }

    #[test]
    fn true_stats_degenerate() {
        let m = TrueModel::new(&[0.7], &[3]).unwrap();
        assert!(true_c_stats(&m, &[3.0]).is_err());
        assert!(true_c_stats(&m, &[0.0]).is_err());
    }

    #[test]
    fn limiting_examples() {
        let c = limiting_c_stats(&[0.5; 6]).unwrap();
        assert!(close(c.c_wl, 0.5, 1e-15) && close(c.c_sw, 0.5, 1e-15));
        let c = limiting_c_stats(&[0.8]).unwrap();
        assert!(close(c.c_wl, 0.8, 1e-15));
        assert!(close(c.c_sw, 0.5, 1e-15));
        let c = limiting_c_stats(&[0.6, 0.7, 0.9]).unwrap();
        assert!(close(c.c_wl, 0.8, 1e-15));
        assert!(close(c.c_sw, 1.18 / 1.76, 1e-15));
        assert!(close(c.c_sw, 0.670455, 1e-6));
    }

    #[test]
    fn limiting_rejects_bad_q() {
        assert!(matches!(limiting_c_stats(&[0.4]), Err(InferenceError::QOutOfRange { .. })));
        assert!(matches!(limiting_c_stats(&[1.0]), Err(InferenceError::QOutOfRange { .. })));
        assert!(matches!(limiting_c_stats(&[0.7, 0.6]), Err(InferenceError::NotSorted { index: 1 })));
        assert!(matches!(limiting_c_stats(&[]), Err(InferenceError::Empty)));
    }

    #[test]
    fn comparison_examples() {
        let c = check_wl_ge_sw(&[0.5; 3]).unwrap();
        assert!(c.equality && c.holds);
        assert!(c.margin.abs() < 1e-15);
        let c = check_wl_ge_sw(&[0.6, 0.7, 0.9]).unwrap();
        assert!(!c.equality && c.holds);
        assert!(close(c.margin, 0.8 - 1.18 / 1.76, 1e-14));
    }

    #[test]
    fn se_wl_examples() {
        let m = TrueModel::new(&[0.7], &[10]).unwrap();
        let expected = 0.02 * (25.0f64 * 10.0 * 0.21).sqrt();
        assert!(close(se_c_wl(&m), expected, 1e-15));
        assert!(close(se_c_wl(&m), 0.144914, 1e-6));
        let m = TrueModel::new(&[1.0 - 1e-15, 1.0 - 1e-15], &[10, 10]).unwrap();
        assert!(se_c_wl(&m) < 1e-8);
    }

    #[test]
    fn moments_two_game_coin() {
        let m = moments(&TrueModel::new(&[0.5], &[2]).unwrap());
        assert!(close(m.b1, 1.0, 1e-15));
        assert!(close(m.b2, 1.5, 1e-15));
        assert!(close(m.b3, 2.5, 1e-15));
        assert!(close(m.b4, 4.5, 1e-15));
    }

    #[test]
    fn c1_is_linear() {
        let model = TrueModel::new(&[0.55, 0.7, 0.9], &[3, 5, 2]).unwrap();
        let m = moments(&model);
        let direct: f64 = model
            .rank_weights()
            .iter()
            .zip(model.pairs())
            .map(|(a, p)| a * p.games as f64 * p.q)
            .sum();
        assert!(close(m.c1, direct, 1e-12));
        assert!(m.b2 >= m.b1 * m.b1 && m.c2 >= m.c1 * m.c1 && m.b4 >= m.b2 * m.b2);
    }

    /// Delta method for the single-pair case done directly over the 11 outcomes.
    #[test]
    fn taylor_single_pair_matches_direct_delta_method() {
        let (n, q) = (10u64, 0.7);
        let model = TrueModel::new(&[q], &[n]).unwrap();
        let se = se_c_sw_taylor(&moments(&model), n).unwrap();

        let nf = n as f64;
        let mut pmf = vec![0.0; n as usize + 1];
        for (w, p) in pmf.iter_mut().enumerate() {
            let mut binom = 1.0;
            for k in 0..w {
                binom = binom * (nf - k as f64) / (k as f64 + 1.0);
            }
            *p = binom * q.powi(w as i32) * (1.0 - q).powi((n - w as u64) as i32);
        }
        let e = |f: &dyn Fn(f64) -> f64| pmf.iter().enumerate().map(|(w, p)| p * f(w as f64)).sum::<f64>();
        let x = |w: f64| 5.0 * w - 0.5 * w * w;
        let y = |w: f64| w * (nf - w);
        let (mx, my) = (e(&x), e(&y));
        let vx = e(&|w| (x(w) - mx).powi(2));
        let vy = e(&|w| (y(w) - my).powi(2));
        let cxy = e(&|w| (x(w) - mx) * (y(w) - my));
        let direct = (mx / my) * (vx / (mx * mx) - 2.0 * cxy / (mx * my) + vy / (my * my)).sqrt();
        assert!(se.is_finite());
        assert!(close(se, direct, 1e-12 * direct.max(1e-300)) || close(se, direct, 1e-13), "{se} vs {direct}");
    }

    #[test]
    fn taylor_vanishes_near_certainty() {
        let q = 1.0 - 1e-9;
        let model = TrueModel::new(&[0.6, q, q], &[50, 50, 50]).unwrap();
        let se = se_c_sw_taylor(&moments(&model), 150).unwrap();
        let model_b = TrueModel::new(&[0.6, 0.9, 0.95], &[50, 50, 50]).unwrap();
        let se_b = se_c_sw_taylor(&moments(&model_b), 150).unwrap();
        assert!(se < se_b);
    }

    #[test]
    fn limiting_curves_single_pair() {
        let m = TrueModel::new(&[0.8], &[4]).unwrap();
        assert_eq!(limiting_sw_curve(&m).knots, vec![(0.0, 0.0), (1.0, 1.0)]);
        let wl = limiting_wl_curve(&m);
        assert_eq!(wl.knots.len(), 3);
        assert!(close(wl.knots[1].0, 0.2, 1e-15) && close(wl.knots[1].1, 0.8, 1e-15));
    }

    #[test]
    fn equal_design_limiting_matches_curve_areas() {
        let q = [0.55, 0.62, 0.7, 0.81, 0.9, 0.97];
        let model = TrueModel::new(&q, &[7; 6]).unwrap();
        let a = limiting_c_stats(&q).unwrap();
        let b = limiting_c_stats_for_design(&model);
        assert!(close(a.c_wl, b.c_wl, 1e-13), "{a:?} {b:?}");
        assert!(close(a.c_sw, b.c_sw, 1e-13), "{a:?} {b:?}");
    }

    #[test]
    fn model_from_strengths_orients_pairs() {
        let model = TrueModel::from_strengths(&[0.0, 1.0, -0.5], &[(0, 1, 4), (1, 2, 2), (0, 2, 0)], LinkFunction::Logistic).unwrap();
        assert_eq!(model.pairs().len(), 2);
        assert_eq!(model.total_games(), 6);
        let top = model.pairs()[1];
        assert_eq!((top.stronger, top.weaker), (1, 2));
        assert!(model.q().windows(2).all(|w| w[0] <= w[1]));
        let d: f64 = model.design().iter().sum();
        assert!(close(d, 1.0, 1e-15));
    }
}
