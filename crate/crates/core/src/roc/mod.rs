//! Winner-loser (WL) and strong-weak (SW) ROC analysis of a fitted model.
//!
//! Both constructions start from [`RankedPairs`]: each played pair oriented
//! stronger-first and sorted by the fitted probability `q` that its stronger
//! side wins. Equal `q` values form one score level.

mod cstat;
mod curve;
mod levels;
mod ranked;

use serde::Serialize;
use thiserror::Error;

pub use cstat::{
    c_sw_fast, c_sw_pairwise, c_wl_fast, c_wl_pairwise, sw_game_scores, verify_identity, wl_game_scores, CStatReport,
};
pub use curve::{auc, sw_curve, sw_levels, wl_curve, wl_levels, CurveKind, Provenance, RocCurve};
pub use levels::{ScoreLevel, ScoreLevels};
pub use ranked::{rank_pairs, QLevel, RankedPair, RankedPairs};

use crate::data::PairCounts;
use crate::fit::StrengthEstimates;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RocError {
    #[error("strong-weak ROC undefined: stronger side won {w_hat} of {total} games")]
    DegenerateClasses { w_hat: f64, total: u64 },
}

/// Everything the ROC layer derives from one fitted dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocAnalysis {
    pub ranked: RankedPairs,
    pub wl: RocCurve,
    /// `None` when the stronger side won all or none of the games.
    pub sw: Option<RocCurve>,
    pub report: Option<CStatReport>,
    pub c_wl: f64,
}

/// Rank, build both curves and compute both c-statistics for a fitted model.
pub fn analyze(counts: &PairCounts, estimates: &StrengthEstimates) -> RocAnalysis {
    let probs = estimates.probs();
    let ranked = rank_pairs(counts, &probs, estimates);
    let wl = wl_curve(&ranked);
    let c_wl = c_wl_fast(&ranked);
    let sw = sw_curve(&ranked).ok();
    let report = c_sw_fast(&ranked)
        .ok()
        .map(|c_sw| verify_identity(c_wl, c_sw, ranked.w_hat(), ranked.total_games()));
    RocAnalysis {
        ranked,
        wl,
        sw,
        report,
        c_wl,
    }
}
