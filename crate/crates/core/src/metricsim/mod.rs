//! Distance between ROC curves parameterized by threshold, and the Monte
//! Carlo harnesses built on it.

mod sim;
mod stats;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::roc::{sw_levels, wl_levels, CurveKind, RankedPairs, RocError, ScoreLevels};

pub use sim::{
    convergence_experiment, evenly_spaced, round_robin, sample_season, sample_true_wins, season_rng, simulate_se_decay,
    ConvergenceRow, SeDecayRow, SimError,
};
pub use stats::{loglog_slope, sd_with_mc_se, spearman, Spearman};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rho {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Rho {
    pub fn distance(self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let (dx, dy) = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
        match self {
            Rho::Euclidean => dx.hypot(dy),
            Rho::Manhattan => dx + dy,
            Rho::Chebyshev => dx.max(dy),
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rho::Euclidean => "euclidean",
            Rho::Manhattan => "manhattan",
            Rho::Chebyshev => "chebyshev",
        })
    }
}

impl FromStr for Rho {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(Rho::Euclidean),
            "manhattan" | "l1" => Ok(Rho::Manhattan),
            "chebyshev" | "max" | "linf" => Ok(Rho::Chebyshev),
            other => Err(format!("unknown metric '{other}' (expected euclidean, manhattan or chebyshev)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub rho: Rho,
    /// Integration exponent, at least 1.
    pub z: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self { rho: Rho::Euclidean, z: 2.0 }
    }
}

impl MetricConfig {
    pub fn new(rho: Rho, z: f64) -> Result<Self, String> {
        if !(z >= 1.0 && z.is_finite()) {
            return Err(format!("exponent z must be a finite number >= 1, got {z}"));
        }
        Ok(Self { rho, z })
    }
}

/// `(FPR, TPR)` as a right-continuous step function of the threshold on `[0, 1]`.
///
/// `values[0]` holds below the first breakpoint, `values[k]` on
/// `[breakpoints[k-1], breakpoints[k])`, and the last value from the final
/// breakpoint up to 1. An observation counts as positive when its score is
/// strictly above the threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCurve {
    breakpoints: Vec<f64>,
    values: Vec<(f64, f64)>,
}

impl ThresholdCurve {
    pub fn from_levels(levels: &ScoreLevels) -> Self {
        let (pt, nt) = (levels.positive_total(), levels.negative_total());
        let frac = |part: f64, total: f64| if total > 0.0 { part / total } else { 0.0 };
        let breakpoints: Vec<f64> = levels.scores().collect();
        let mut values = Vec::with_capacity(breakpoints.len() + 1);
        // Mass strictly above each breakpoint, accumulated from the top.
        let (mut tp, mut fp) = (0.0, 0.0);
        values.push((0.0, 0.0));
        for l in levels.levels().iter().rev() {
            tp += l.positive;
            fp += l.negative;
            values.push((frac(fp, nt), frac(tp, pt)));
        }
        values.reverse();
        if let Some(first) = values.first_mut() {
            if pt > 0.0 && nt > 0.0 {
                *first = (1.0, 1.0);
            }
        }
        Self { breakpoints, values }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[(f64, f64)] {
        &self.values
    }

    pub fn eval(&self, theta: f64) -> (f64, f64) {
        self.values[self.breakpoints.partition_point(|&b| b <= theta)]
    }

    /// The distinct step values from `(0, 0)` up to `(1, 1)`.
    pub fn knots(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.values.len());
        for &v in self.values.iter().rev() {
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Area under the curve traced by the step values, joined linearly.
    pub fn area(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (w[0].0 - w[1].0) * (w[0].1 + w[1].1) * 0.5)
            .sum()
    }
}

pub fn as_threshold_curve(ranked: &RankedPairs, kind: CurveKind) -> Result<ThresholdCurve, RocError> {
    let levels = match kind {
        CurveKind::Wl => wl_levels(&ranked.levels()),
        CurveKind::Sw => {
            if !ranked.has_both_classes() {
                return Err(RocError::DegenerateClasses {
                    w_hat: ranked.w_hat(),
                    total: ranked.total_games(),
                });
            }
            sw_levels(&ranked.levels())
        }
    };
    Ok(ThresholdCurve::from_levels(&levels))
}

/// `(integral over [0, 1] of rho(f(theta), g(theta))^z dtheta)^(1/z)`, exact:
/// the integrand is constant between consecutive breakpoints of either curve.
pub fn roc_distance(f: &ThresholdCurve, g: &ThresholdCurve, cfg: &MetricConfig) -> f64 {
    let mut cuts: Vec<f64> = f
        .breakpoints
        .iter()
        .chain(&g.breakpoints)
        .copied()
        .filter(|&b| b > 0.0 && b < 1.0)
        .collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let integral: f64 = cuts
        .windows(2)
        .map(|w| {
            let d = cfg.rho.distance(f.eval(w[0]), g.eval(w[0]));
            if d == 0.0 {
                0.0
            } else {
                d.powf(cfg.z) * (w[1] - w[0])
            }
        })
        .sum();
    integral.powf(1.0 / cfg.z)
}
