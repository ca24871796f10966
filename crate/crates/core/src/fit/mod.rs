//! Maximum-likelihood fitting of linear paired-comparison models.
//!
//! The logistic link (Bradley-Terry) is fitted with the minorize-maximize
//! update on `gamma = exp(mu)`; the probit link (Thurstone-Mosteller) with a
//! damped Newton iteration restricted to the sum-zero subspace. Both recentre
//! `mu` to mean zero after every iteration.

mod link;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use link::{LinkFunction, LOG_FLOOR};

use crate::data::{check_connectivity, Connectivity, ConnectivityWitness, PairCounts};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Stop once the max-norm change of `mu` between iterations drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    SumZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengthEstimates {
    pub mu_hat: Vec<f64>,
    pub constraint: Constraint,
    pub link: LinkFunction,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl StrengthEstimates {
    /// Wrap a known strength vector (e.g. true parameters), recentred to sum zero.
    pub fn from_strengths(mu: &[f64], link: LinkFunction) -> Self {
        Self {
            mu_hat: centered(mu),
            constraint: Constraint::SumZero,
            link,
            log_likelihood: f64::NAN,
            iterations: 0,
            converged: true,
        }
    }

    pub fn probs(&self) -> ProbMatrix {
        predict_probs(&self.mu_hat, self.link)
    }
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least two teams, found {0}")]
    TooFewTeams(usize),
    #[error("win graph is not strongly connected; the MLE does not exist")]
    Disconnected(ConnectivityWitness),
}

/// Fitted win probabilities. `p(i, j) + p(j, i) == 1` holds exactly: for each
/// pair only the stronger side is evaluated through the link and the weaker
/// side is its complement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbMatrix {
    size: usize,
    cells: Vec<f64>,
}

impl ProbMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Probability that `i` beats `j` (0.5 on the diagonal).
    #[inline]
    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.size + j]
    }

    /// Probability that the stronger of `i` and `j` wins.
    #[inline]
    pub fn q(&self, i: usize, j: usize) -> f64 {
        let p = self.p(i, j);
        p.max(self.p(j, i))
    }
}

/// `p(i, j) = F(mu_i - mu_j)`.
pub fn predict_probs(mu: &[f64], link: LinkFunction) -> ProbMatrix {
    let m = mu.len();
    let mut cells = vec![0.5; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let d = mu[i] - mu[j];
            let strong = link.cdf(d.abs());
            let (pij, pji) = if d >= 0.0 { (strong, 1.0 - strong) } else { (1.0 - strong, strong) };
            cells[i * m + j] = pij;
            cells[j * m + i] = pji;
        }
    }
    ProbMatrix { size: m, cells }
}

/// Bernoulli log-likelihood `sum_{i<j} w_ij ln F(mu_i - mu_j) + w_ji ln F(mu_j - mu_i)`.
pub fn log_likelihood(counts: &PairCounts, mu: &[f64], link: LinkFunction) -> f64 {
    let m = counts.num_teams();
    let mut ll = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            if counts.games(i, j) == 0 {
                continue;
            }
            let d = mu[i] - mu[j];
            let (wij, wji) = (counts.wins(i, j) as f64, counts.wins(j, i) as f64);
            if wij > 0.0 {
                ll += wij * link.ln_cdf(d);
            }
            if wji > 0.0 {
                ll += wji * link.ln_cdf(-d);
            }
        }
    }
    ll
}

pub(crate) fn centered(mu: &[f64]) -> Vec<f64> {
    let mean = mu.iter().sum::<f64>() / mu.len().max(1) as f64;
    mu.iter().map(|x| x - mean).collect()
}

/// Fit team strengths by maximum likelihood under the sum-zero constraint.
///
/// Refuses to fit when the win digraph is not strongly connected. Running out
/// of iterations is not an error; the result carries `converged = false`.
pub fn fit_mle(counts: &PairCounts, link: LinkFunction, config: &FitConfig) -> Result<StrengthEstimates, FitError> {
    let m = counts.num_teams();
    if m < 2 {
        return Err(FitError::TooFewTeams(m));
    }
    if let Connectivity::Violated(w) = check_connectivity(counts) {
        return Err(FitError::Disconnected(w));
    }
    let (mu_hat, iterations, converged) = match link {
        LinkFunction::Logistic => fit_mm(counts, config),
        LinkFunction::Probit => fit_newton(counts, link, config),
    };
    if !converged {
        log::warn!("fit did not converge within {} iterations", config.max_iterations);
    }
    Ok(StrengthEstimates {
        log_likelihood: log_likelihood(counts, &mu_hat, link),
        mu_hat,
        constraint: Constraint::SumZero,
        link,
        iterations,
        converged,
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// One simultaneous MM update for the logistic model, returned recentred.
pub(crate) fn mm_step(counts: &PairCounts, mu: &[f64]) -> Vec<f64> {
    let m = counts.num_teams();
    let gamma: Vec<f64> = mu.iter().map(|x| x.exp()).collect();
    let next: Vec<f64> = (0..m)
        .map(|i| {
            let wins = counts.team_wins(i) as f64;
            let denom: f64 = (0..m)
                .filter(|&j| j != i && counts.games(i, j) > 0)
                .map(|j| counts.games(i, j) as f64 / (gamma[i] + gamma[j]))
                .sum();
            (wins / denom).ln()
        })
        .collect();
    centered(&next)
}

fn fit_mm(counts: &PairCounts, config: &FitConfig) -> (Vec<f64>, usize, bool) {
    let mut mu = vec![0.0; counts.num_teams()];
    for it in 1..=config.max_iterations {
        let next = mm_step(counts, &mu);
        let change = max_abs_diff(&next, &mu);
        mu = next;
        if change < config.tolerance {
            return (mu, it, true);
        }
    }
    (mu, config.max_iterations, false)
}

fn fit_newton(counts: &PairCounts, link: LinkFunction, config: &FitConfig) -> (Vec<f64>, usize, bool) {
    let m = counts.num_teams();
    let mut mu = vec![0.0; m];
    let mut ll = log_likelihood(counts, &mu, link);
    for it in 1..=config.max_iterations {
        let (grad, neg_hess) = gradient_and_information(counts, &mu, link);
        // -H is PSD with null space spanned by 1; adding 11^T/m makes it PD
        // and keeps the step orthogonal to 1 since the gradient sums to zero.
        let mut system = neg_hess;
        system.add_scalar_mut(1.0 / m as f64);
        let step = match system.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            None => grad.clone(),
        };

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = mu.iter().zip(step.iter()).map(|(x, s)| x + t * s).collect();
            let trial = centered(&trial);
            let trial_ll = log_likelihood(counts, &trial, link);
            if trial_ll >= ll {
                accepted = Some((trial, trial_ll));
                break;
            }
            t *= 0.5;
        }
        let Some((next, next_ll)) = accepted else {
            // No ascent direction left at working precision.
            return (mu, it, true);
        };
        let change = max_abs_diff(&next, &mu);
        mu = next;
        ll = next_ll;
        if change < config.tolerance {
            return (mu, it, true);
        }
    }
    (mu, config.max_iterations, false)
}

fn gradient_and_information(counts: &PairCounts, mu: &[f64], link: LinkFunction) -> (DVector<f64>, DMatrix<f64>) {
    let m = counts.num_teams();
    let mut grad = DVector::zeros(m);
    let mut info = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            if counts.games(i, j) == 0 {
                continue;
            }
            let d = mu[i] - mu[j];
            let (wij, wji) = (counts.wins(i, j) as f64, counts.wins(j, i) as f64);
            let (g_pos, h_pos) = link.ln_cdf_derivatives(d);
            let (g_neg, h_neg) = link.ln_cdf_derivatives(-d);
            let g = wij * g_pos - wji * g_neg;
            let h = -(wij * h_pos + wji * h_neg);
            grad[i] += g;
            grad[j] -= g;
            info[(i, i)] += h;
            info[(j, j)] += h;
            info[(i, j)] -= h;
            info[(j, i)] -= h;
        }
    }
    (grad, info)
}
