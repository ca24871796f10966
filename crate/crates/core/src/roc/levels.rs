use serde::Serialize;

/// Positive and negative mass sitting at one distinct score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreLevel {
    pub score: f64,
    pub positive: f64,
    pub negative: f64,
}

/// Weighted two-class scores grouped into distinct levels, ascending by score.
///
/// Every ROC construction in this crate (estimated, true and limiting; WL and
/// SW) reduces to one of these. Equal scores are merged by exact comparison,
/// so tied observations share a level and the curve crosses that level along
/// a single straight segment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreLevels {
    levels: Vec<ScoreLevel>,
    positive_total: f64,
    negative_total: f64,
}

impl ScoreLevels {
    /// Build from `(score, positive_mass, negative_mass)` triples in any order.
    /// Levels with no mass at all are dropped.
    pub fn from_masses<I>(masses: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let mut raw: Vec<(f64, f64, f64)> = masses
            .into_iter()
            .filter(|&(_, p, n)| p != 0.0 || n != 0.0)
            .collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut levels: Vec<ScoreLevel> = Vec::with_capacity(raw.len());
        for (score, positive, negative) in raw {
            match levels.last_mut() {
                Some(last) if last.score == score => {
                    last.positive += positive;
                    last.negative += negative;
                }
                _ => levels.push(ScoreLevel {
                    score,
                    positive,
                    negative,
                }),
            }
        }
        // Totals accumulate in the same descending order the knots use, so the
        // final knot is exactly (1, 1).
        let (mut positive_total, mut negative_total) = (0.0, 0.0);
        for l in levels.iter().rev() {
            positive_total += l.positive;
            negative_total += l.negative;
        }
        Self {
            levels,
            positive_total,
            negative_total,
        }
    }

    pub fn levels(&self) -> &[ScoreLevel] {
        &self.levels
    }

    pub fn positive_total(&self) -> f64 {
        self.positive_total
    }

    pub fn negative_total(&self) -> f64 {
        self.negative_total
    }

    /// Distinct scores in ascending order.
    pub fn scores(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l.score)
    }

    /// ROC knots `(FPR, TPR)` from `(0, 0)` to `(1, 1)`, sweeping the threshold
    /// down through each level; consecutive duplicates removed.
    pub fn knots(&self) -> Vec<(f64, f64)> {
        let mut knots = vec![(0.0, 0.0)];
        let (mut tp, mut fp) = (0.0, 0.0);
        for l in self.levels.iter().rev() {
            tp += l.positive;
            fp += l.negative;
            let knot = (ratio(fp, self.negative_total), ratio(tp, self.positive_total));
            if knots.last() != Some(&knot) {
                knots.push(knot);
            }
        }
        if knots.last() != Some(&(1.0, 1.0)) {
            knots.push((1.0, 1.0));
        }
        knots
    }

    /// Mann-Whitney proportion: chance a positive outscores a negative, ties half.
    pub fn mann_whitney(&self) -> f64 {
        let mut below = 0.0;
        let mut acc = 0.0;
        for l in &self.levels {
            acc += l.positive * (below + 0.5 * l.negative);
            below += l.negative;
        }
        acc / (self.positive_total * self.negative_total)
    }
}

fn ratio(part: f64, total: f64) -> f64 {
    if total > 0.0 {
        part / total
    } else {
        1.0
    }
}
