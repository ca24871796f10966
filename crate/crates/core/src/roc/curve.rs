use serde::{Deserialize, Serialize};

use super::levels::ScoreLevels;
use super::ranked::{QLevel, RankedPairs};
use super::RocError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// Winner-loser: every game counted once as a success (winner's view) and
    /// once as a failure (loser's view).
    Wl,
    /// Strong-weak: a game is a success iff the stronger side won.
    Sw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Estimated,
    True,
    Limiting,
}

/// Piecewise-linear ROC curve given by its knots, `(0, 0)` first and `(1, 1)` last.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub kind: CurveKind,
    pub provenance: Provenance,
    pub knots: Vec<(f64, f64)>,
}

impl RocCurve {
    pub fn new(kind: CurveKind, provenance: Provenance, knots: Vec<(f64, f64)>) -> Self {
        Self {
            kind,
            provenance,
            knots,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn auc(&self) -> f64 {
        auc(self)
    }
}

/// Trapezoidal area under the knot sequence.
pub fn auc(curve: &RocCurve) -> f64 {
    curve
        .knots
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * 0.5)
        .sum()
}

/// Winner-loser score levels: a pair at `q` puts its stronger-side wins at
/// score `q` on the winner side and at `1 - q` on the loser side, and the
/// reverse for its weaker-side wins.
pub fn wl_levels(levels: &[QLevel]) -> ScoreLevels {
    ScoreLevels::from_masses(levels.iter().flat_map(|l| {
        let weak = l.games - l.stronger_wins;
        [(l.q, l.stronger_wins, weak), (1.0 - l.q, weak, l.stronger_wins)]
    }))
}

/// Strong-weak score levels: strong winners are positives, weak winners negatives.
pub fn sw_levels(levels: &[QLevel]) -> ScoreLevels {
    ScoreLevels::from_masses(
        levels
            .iter()
            .map(|l| (l.q, l.stronger_wins, l.games - l.stronger_wins)),
    )
}

pub fn wl_curve(ranked: &RankedPairs) -> RocCurve {
    RocCurve::new(CurveKind::Wl, Provenance::Estimated, wl_levels(&ranked.levels()).knots())
}

/// Fails when every game (or none) was won by the stronger side.
pub fn sw_curve(ranked: &RankedPairs) -> Result<RocCurve, RocError> {
    if !ranked.has_both_classes() {
        return Err(RocError::DegenerateClasses {
            w_hat: ranked.w_hat(),
            total: ranked.total_games(),
        });
    }
    Ok(RocCurve::new(
        CurveKind::Sw,
        Provenance::Estimated,
        sw_levels(&ranked.levels()).knots(),
    ))
}
