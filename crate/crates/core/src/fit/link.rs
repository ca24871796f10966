use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc_inv;

/// Floor applied to probabilities inside logarithms during likelihood evaluation.
pub const LOG_FLOOR: f64 = 1e-300;

/// Symmetric CDF linking strength differences to win probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LinkFunction {
    /// Standard logistic CDF (Bradley-Terry).
    #[default]
    Logistic,
    /// Standard normal CDF (Thurstone-Mosteller).
    Probit,
}

impl LinkFunction {
    pub fn cdf(self, x: f64) -> f64 {
        match self {
            LinkFunction::Logistic => {
                if x >= 0.0 {
                    1.0 / (1.0 + (-x).exp())
                } else {
                    let e = x.exp();
                    e / (1.0 + e)
                }
            }
            LinkFunction::Probit => 0.5 * libm::erfc(-x * FRAC_1_SQRT_2),
        }
    }

    /// Inverse CDF. Returns +-inf at the endpoints.
    pub fn quantile(self, p: f64) -> f64 {
        match self {
            LinkFunction::Logistic => (p / (1.0 - p)).ln(),
            LinkFunction::Probit => {
                let mut x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p);
                // Polish the starting value against the more accurate CDF.
                for _ in 0..2 {
                    if !x.is_finite() {
                        break;
                    }
                    let d = self.pdf(x);
                    if d > 0.0 {
                        x -= (self.cdf(x) - p) / d;
                    }
                }
                x
            }
        }
    }

    pub fn pdf(self, x: f64) -> f64 {
        match self {
            LinkFunction::Logistic => {
                let f = self.cdf(x);
                f * (1.0 - f)
            }
            LinkFunction::Probit => (-0.5 * x * x).exp() / (2.0 * PI).sqrt(),
        }
    }

    /// `ln F(x)`, floored at `ln(LOG_FLOOR)`.
    pub fn ln_cdf(self, x: f64) -> f64 {
        let v = match self {
            LinkFunction::Logistic => {
                if x >= 0.0 {
                    -(-x).exp().ln_1p()
                } else {
                    x - x.exp().ln_1p()
                }
            }
            LinkFunction::Probit => self.cdf(x).max(LOG_FLOOR).ln(),
        };
        v.max(LOG_FLOOR.ln())
    }

    /// First and second derivatives of `ln F` at `x`.
    pub(crate) fn ln_cdf_derivatives(self, x: f64) -> (f64, f64) {
        match self {
            LinkFunction::Logistic => {
                let f = self.cdf(-x);
                (f, -f * (1.0 - f))
            }
            LinkFunction::Probit => {
                let cdf = self.cdf(x);
                // Inverse Mills ratio; asymptotically -x in the far left tail.
                let lambda = if cdf > 1e-280 { self.pdf(x) / cdf } else { -x };
                (lambda, -lambda * (x + lambda))
            }
        }
    }
}

impl fmt::Display for LinkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkFunction::Logistic => "logistic",
            LinkFunction::Probit => "probit",
        })
    }
}

impl FromStr for LinkFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "logistic" | "logit" | "bradley-terry" => Ok(LinkFunction::Logistic),
            "probit" | "normal" | "thurstone-mosteller" => Ok(LinkFunction::Probit),
            other => Err(format!("unknown link `{other}` (expected logistic or probit)")),
        }
    }
}
