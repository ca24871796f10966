use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{as_threshold_curve, roc_distance, stats::sd_with_mc_se, MetricConfig, ThresholdCurve};
use crate::data::PairCounts;
use crate::fit::{fit_mle, FitConfig, LinkFunction, StrengthEstimates};
use crate::inference::{self, InferenceError, TrueModel};
use crate::roc::{self, CurveKind};

/// Give up on a replication after this many rejected seasons.
const MAX_ATTEMPTS: usize = 10_000;

const SE_DECAY: u64 = 1;
const CONVERGENCE: u64 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("need at least {min} replications, got {got}")]
    TooFewReps { min: usize, got: usize },
    #[error("need at least two teams")]
    TooFewTeams,
    #[error("no usable season after {MAX_ATTEMPTS} draws (grid point {grid})")]
    Exhausted { grid: usize },
    #[error(transparent)]
    Model(#[from] InferenceError),
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator for one replication. The key depends only on the arguments, so a
/// replication draws the same numbers whichever thread runs it.
pub fn season_rng(seed: u64, experiment: u64, grid: u64, rep: u64) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(experiment ^ splitmix64(grid)));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(rep);
    rng
}

/// `m` strengths evenly spaced on `[lo, hi]`.
pub fn evenly_spaced(m: usize, lo: f64, hi: f64) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect(),
    }
}

/// Every pair of `m` teams meets `n` times.
pub fn round_robin(m: usize, n: u64) -> Vec<(usize, usize, u64)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j, n)))
        .collect()
}

fn binomial<R: rand::Rng>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 {
        return 0;
    }
    Binomial::new(n, p).expect("probability in [0, 1]").sample(rng)
}

/// Stronger-side wins for each pair of the model, in model order.
pub fn sample_true_wins<R: rand::Rng>(model: &TrueModel, rng: &mut R) -> Vec<f64> {
    model
        .pairs()
        .iter()
        .map(|p| binomial(p.games, p.q, rng) as f64)
        .collect()
}

/// Draw one season of independent games under strengths `mu`.
pub fn sample_season<R: rand::Rng>(
    mu: &[f64],
    schedule: &[(usize, usize, u64)],
    link: LinkFunction,
    rng: &mut R,
) -> PairCounts {
    let m = mu.len();
    let mut wins = vec![vec![0u64; m]; m];
    for &(i, j, n) in schedule {
        let w = binomial(n, link.cdf(mu[i] - mu[j]), rng);
        wins[i][j] += w;
        wins[j][i] += n - w;
    }
    PairCounts::from_wins(None, &wins).expect("square win matrix with empty diagonal")
}

fn scaled(schedule: &[(usize, usize, u64)], factor: u64) -> Vec<(usize, usize, u64)> {
    schedule.iter().map(|&(i, j, n)| (i, j, n * factor)).collect()
}

fn fit_quietly(counts: &PairCounts, link: LinkFunction) -> Option<StrengthEstimates> {
    fit_mle(counts, link, &FitConfig::default())
        .ok()
        .filter(|e| e.converged)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeDecayRow {
    pub n: u64,
    pub reps: usize,
    /// Monte Carlo SD of the fitted WL c-statistic.
    pub se_c_wl_emp: f64,
    /// Closed-form SE of the true WL c-statistic.
    pub se_c_wl_exact: f64,
    /// Monte Carlo SD of the true WL c-statistic.
    pub se_c_wl_true_emp: f64,
    /// Monte Carlo SD of the fitted SW c-statistic.
    pub se_c_sw_emp: f64,
    /// Monte Carlo SD of the true SW c-statistic.
    pub se_c_sw_true_emp: f64,
    /// Delta-method SE of the true SW c-statistic.
    pub se_c_sw_taylor: f64,
    /// Monte Carlo standard errors of the four empirical SDs above.
    pub mc_se_c_wl_emp: f64,
    pub mc_se_c_wl_true: f64,
    pub mc_se_c_sw_emp: f64,
    pub mc_se_c_sw_true: f64,
    pub rejected: usize,
}

/// Standard errors of the four c-statistics as every pair's game count grows.
///
/// Each replication is a full round robin with `n` games per pair; fitted
/// statistics come from refitting every season. Seasons without an MLE, or
/// where the stronger side won every game or none, are redrawn.
pub fn simulate_se_decay(
    mu: &[f64],
    n_grid: &[u64],
    reps: usize,
    link: LinkFunction,
    seed: u64,
) -> Result<Vec<SeDecayRow>, SimError> {
    if reps < 100 {
        return Err(SimError::TooFewReps { min: 100, got: reps });
    }
    if mu.len() < 2 {
        return Err(SimError::TooFewTeams);
    }
    let m = mu.len();
    let mut rows = Vec::with_capacity(n_grid.len());
    for (g, &n) in n_grid.iter().enumerate() {
        let schedule = round_robin(m, n);
        let model = TrueModel::from_strengths(mu, &schedule, link)?;
        let draws: Vec<([f64; 4], usize)> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let mut rng = season_rng(seed, SE_DECAY, g as u64, r as u64);
                for attempt in 0..MAX_ATTEMPTS {
                    let counts = sample_season(mu, &schedule, link, &mut rng);
                    let Some(est) = fit_quietly(&counts, link) else { continue };
                    let a = roc::analyze(&counts, &est);
                    let Some(report) = a.report else { continue };
                    let Ok(truth) = inference::true_c_stats(&model, &model.realized_wins(&counts)) else {
                        continue;
                    };
                    return Ok(([report.c_wl, report.c_sw, truth.c_wl, truth.c_sw], attempt));
                }
                Err(SimError::Exhausted { grid: g })
            })
            .collect::<Result<_, _>>()?;

        let column = |k: usize| draws.iter().map(|d| d.0[k]).collect::<Vec<f64>>();
        let (wl_hat, wl_hat_se) = sd_with_mc_se(&column(0));
        let (sw_hat, sw_hat_se) = sd_with_mc_se(&column(1));
        let (wl_true, wl_true_se) = sd_with_mc_se(&column(2));
        let (sw_true, sw_true_se) = sd_with_mc_se(&column(3));
        let rejected: usize = draws.iter().map(|d| d.1).sum();
        if rejected > 0 {
            log::info!("n = {n}: redrew {rejected} unusable seasons");
        }
        rows.push(SeDecayRow {
            n,
            reps,
            se_c_wl_emp: wl_hat,
            se_c_wl_exact: inference::se_c_wl(&model),
            se_c_wl_true_emp: wl_true,
            se_c_sw_emp: sw_hat,
            se_c_sw_true_emp: sw_true,
            se_c_sw_taylor: inference::se_c_sw_taylor(&inference::moments(&model), model.total_games())?,
            mc_se_c_wl_emp: wl_hat_se,
            mc_se_c_wl_true: wl_true_se,
            mc_se_c_sw_emp: sw_hat_se,
            mc_se_c_sw_true: sw_true_se,
            rejected,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    /// Factor applied to the base schedule.
    pub multiplier: u64,
    /// Total games per season at this grid point.
    pub n_total: u64,
    /// Mean distance from the fitted WL curve to the true WL curve.
    pub wl_true: f64,
    /// Mean distance from the fitted WL curve to the limiting WL curve.
    pub wl_limit: f64,
    pub sw_true: f64,
    pub sw_limit: f64,
    pub rejected: usize,
}

/// Mean ROC distances of fitted curves from the true and limiting curves as
/// the base schedule is replicated `multiplier` times, keeping its design
/// ratios fixed.
pub fn convergence_experiment(
    mu: &[f64],
    base: &[(usize, usize, u64)],
    multipliers: &[u64],
    link: LinkFunction,
    cfg: &MetricConfig,
    reps: usize,
    seed: u64,
) -> Result<Vec<ConvergenceRow>, SimError> {
    if reps == 0 {
        return Err(SimError::TooFewReps { min: 1, got: 0 });
    }
    if mu.len() < 2 {
        return Err(SimError::TooFewTeams);
    }
    let model = TrueModel::from_strengths(mu, base, link)?;
    let limit_wl = ThresholdCurve::from_levels(&inference::limiting_wl_levels(&model));
    let limit_sw = ThresholdCurve::from_levels(&inference::limiting_sw_levels(&model));
    let truth = StrengthEstimates::from_strengths(mu, link);
    let true_probs = truth.probs();

    let mut rows = Vec::with_capacity(multipliers.len());
    for (g, &k) in multipliers.iter().enumerate() {
        let schedule = scaled(base, k);
        let draws: Vec<([f64; 4], usize)> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let mut rng = season_rng(seed, CONVERGENCE, g as u64, r as u64);
                for attempt in 0..MAX_ATTEMPTS {
                    let counts = sample_season(mu, &schedule, link, &mut rng);
                    let Some(est) = fit_quietly(&counts, link) else { continue };
                    let fitted = roc::rank_pairs(&counts, &est.probs(), &est);
                    let actual = roc::rank_pairs(&counts, &true_probs, &truth);
                    let (Ok(sw_hat), Ok(sw_true)) = (
                        as_threshold_curve(&fitted, CurveKind::Sw),
                        as_threshold_curve(&actual, CurveKind::Sw),
                    ) else {
                        continue;
                    };
                    let wl_hat = as_threshold_curve(&fitted, CurveKind::Wl).expect("WL always defined");
                    let wl_true = as_threshold_curve(&actual, CurveKind::Wl).expect("WL always defined");
                    let d = [
                        roc_distance(&wl_hat, &wl_true, cfg),
                        roc_distance(&wl_hat, &limit_wl, cfg),
                        roc_distance(&sw_hat, &sw_true, cfg),
                        roc_distance(&sw_hat, &limit_sw, cfg),
                    ];
                    return Ok((d, attempt));
                }
                Err(SimError::Exhausted { grid: g })
            })
            .collect::<Result<_, _>>()?;

        let mean = |c: usize| draws.iter().map(|d| d.0[c]).sum::<f64>() / reps as f64;
        let rejected: usize = draws.iter().map(|d| d.1).sum();
        if rejected > 0 {
            log::info!("multiplier {k}: redrew {rejected} unusable seasons");
        }
        rows.push(ConvergenceRow {
            multiplier: k,
            n_total: model.total_games() * k,
            wl_true: mean(0),
            wl_limit: mean(1),
            sw_true: mean(2),
            sw_limit: mean(3),
            rejected,
        });
    }
    Ok(rows)
}
