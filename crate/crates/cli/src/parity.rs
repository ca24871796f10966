//! League-parity summary: spread of win percentages against a coin-flip
//! league, alongside the two AUCs rescaled to the same footing.

use pcroc::data::PairCounts;
use pcroc::roc::RocAnalysis;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParityError {
    #[error("team `{team}` played no games")]
    ZeroGames { team: String },
    #[error("no teams")]
    NoTeams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityReport {
    pub league: String,
    /// Games per team (the per-team maximum when the schedule is unbalanced).
    #[serde(rename = "G")]
    pub g: u64,
    pub asd: f64,
    pub isd: f64,
    pub rsd: f64,
    pub auwlc: f64,
    pub auswc: Option<f64>,
    pub std_auwlc: f64,
    pub std_auswc: Option<f64>,
}

/// Standard deviation of win percentages when every game is a coin flip.
pub fn idealized_sd(g: u64) -> f64 {
    0.5 / (g as f64).sqrt()
}

/// `(auc - 0.5) * sqrt(G)`.
pub fn standardize_auc(auc: f64, g: u64) -> f64 {
    (auc - 0.5) * (g as f64).sqrt()
}

/// ASD is the population standard deviation (divide by the number of teams).
pub fn parity(league: &str, counts: &PairCounts, analysis: &RocAnalysis) -> Result<ParityReport, ParityError> {
    let m = counts.num_teams();
    if m == 0 {
        return Err(ParityError::NoTeams);
    }
    let games: Vec<u64> = (0..m).map(|i| counts.team_games(i)).collect();
    if let Some(i) = games.iter().position(|&g| g == 0) {
        return Err(ParityError::ZeroGames {
            team: counts.teams()[i].clone(),
        });
    }
    let g = *games.iter().max().expect("at least one team");
    if games.iter().any(|&x| x != g) {
        log::warn!(
            "{league}: unbalanced schedule ({}..{} games per team); using G = {g}",
            games.iter().min().unwrap(),
            g
        );
    }
    let pct: Vec<f64> = (0..m).map(|i| counts.team_wins(i) as f64 / games[i] as f64).collect();
    let mean = pct.iter().sum::<f64>() / m as f64;
    let asd = (pct.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / m as f64).sqrt();
    let isd = idealized_sd(g);
    let auwlc = analysis.c_wl;
    let auswc = analysis.report.map(|r| r.c_sw);
    Ok(ParityReport {
        league: league.to_string(),
        g,
        asd,
        isd,
        rsd: asd / isd,
        auwlc,
        auswc,
        std_auwlc: standardize_auc(auwlc, g),
        std_auswc: auswc.map(|a| standardize_auc(a, g)),
    })
}

impl ParityReport {
    pub const HEADER: &'static str = "league,G,ASD,ISD,RSD,AUWLC,AUSWC,std_AUWLC,std_AUSWC";

    /// One CSV row at three decimals.
    pub fn row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), |v| format!("{v:.3}"));
        format!(
            "{},{},{:.3},{:.3},{:.3},{:.3},{},{:.3},{}",
            self.league,
            self.g,
            self.asd,
            self.isd,
            self.rsd,
            self.auwlc,
            opt(self.auswc),
            self.std_auwlc,
            opt(self.std_auswc)
        )
    }
}
