//! Paired-comparison models and their winner-loser and strong-weak ROC curves.
//!
//! Fit Bradley-Terry or Thurstone-Mosteller strengths to head-to-head
//! results, rank every played pair by the fitted probability that its
//! stronger side wins, and summarize the ranking with ROC curves,
//! c-statistics and their sampling behaviour.

pub mod data;
pub mod fit;
pub mod inference;
pub mod metricsim;
pub mod roc;

pub use data::{aggregate, check_connectivity, load_games, Connectivity, DataError, GameRecord, PairCounts};
pub use fit::{fit_mle, predict_probs, FitConfig, FitError, LinkFunction, ProbMatrix, StrengthEstimates};
pub use inference::{InferenceError, MomentSet, TrueModel};
pub use metricsim::{roc_distance, MetricConfig, Rho, ThresholdCurve};
pub use roc::{analyze, CStatReport, CurveKind, Provenance, RankedPairs, RocAnalysis, RocCurve, RocError};
