use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcroc::fit::{fit_mle, FitConfig, LinkFunction, StrengthEstimates};
use pcroc::inference::{self, TrueModel};
use pcroc::metricsim::{self, MetricConfig, Rho};
use pcroc::roc::{self, RocAnalysis, RocCurve};
use pcroc::PairCounts;
use serde::Serialize;
use serde_json::json;

use crate::error::{fit_error, CliError};
use crate::input::{read_counts, read_design, read_grid, read_values};
use crate::parity::{parity, ParityReport};
use crate::svg::render_svg;

#[derive(Debug, Parser)]
#[command(name = "pcroc", version, about = "Paired-comparison fitting and winner-loser / strong-weak ROC analysis")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON where a subcommand would otherwise print a table or CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Only log errors.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit team strengths by maximum likelihood.
    Fit(FitArgs),
    /// Winner-loser and strong-weak ROC curves and c-statistics.
    Roc(RocArgs),
    /// Limiting c-statistics, standard errors and moments for known probabilities.
    Inference(InferenceArgs),
    /// Win-percentage spread and standardized AUCs for one league.
    Parity(ParityArgs),
    /// Monte Carlo experiments.
    Simulate {
        #[command(subcommand)]
        experiment: Simulation,
    },
    /// Draw ROC curves for one or more leagues as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Game log with header `winner,loser[,date]`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = LinkFunction::Logistic)]
    pub link: LinkFunction,
    /// Convergence tolerance on the largest strength change.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Wl,
    Sw,
    Both,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Write curve knots as CSV (`fpr,tpr`, with a leading `curve` column for both).
    #[arg(long)]
    pub out_knots: Option<PathBuf>,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stat {
    Limits,
    SeWl,
    SeSw,
    Moments,
}

#[derive(Debug, Args)]
pub struct InferenceArgs {
    /// Stronger-side win probabilities: a file or an inline comma list.
    #[arg(long)]
    pub q: String,
    /// Games per pair, aligned with `--q`; a single value applies to every pair.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, value_enum)]
    pub stat: Stat,
}

#[derive(Debug, Args)]
pub struct ParityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Label for the report; defaults to the input file name.
    #[arg(long)]
    pub league: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Simulation {
    /// Standard errors of the c-statistics as games per pair grow.
    SeDecay(SeDecayArgs),
    /// Distances of fitted curves from the true and limiting curves as a schedule is replicated.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
pub struct SeDecayArgs {
    #[arg(long, default_value_t = 10)]
    pub teams: usize,
    /// Games per pair: `start:stop:step` or a comma list.
    #[arg(long, default_value = "5:50:5")]
    pub n: String,
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    /// True strengths (file or inline list); defaults to evenly spaced on [-1, 1].
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long, default_value_t = LinkFunction::Logistic)]
    pub link: LinkFunction,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    /// Base schedule, rows `i,j,games`.
    #[arg(long)]
    pub design: PathBuf,
    /// True strengths (file or inline list).
    #[arg(long)]
    pub mu: String,
    /// Multipliers applied to the base schedule.
    #[arg(long, default_value = "1,2,4,8,16,32,64")]
    pub grid: String,
    #[arg(long, default_value = "euclidean")]
    pub rho: Rho,
    #[arg(long, default_value_t = 2.0)]
    pub z: f64,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[arg(long, default_value_t = LinkFunction::Logistic)]
    pub link: LinkFunction,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// One or more game logs; each is labelled by its file name.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    #[arg(long, default_value_t = LinkFunction::Logistic)]
    pub link: LinkFunction,
}

/// Run a parsed command line; the returned text goes to standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Fit(a) => fit_cmd(a),
        Command::Roc(a) => roc_cmd(a),
        Command::Inference(a) => inference_cmd(a),
        Command::Parity(a) => parity_cmd(a, cli.json),
        Command::Simulate { experiment } => match experiment {
            Simulation::SeDecay(a) => se_decay_cmd(a, cli.seed, cli.json),
            Simulation::Convergence(a) => convergence_cmd(a, cli.seed, cli.json),
        },
        Command::Plot(a) => plot_cmd(a),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn fit_model(model: &ModelArgs) -> Result<(PairCounts, StrengthEstimates), CliError> {
    let counts = read_counts(&model.input)?;
    let cfg = FitConfig {
        tolerance: model.tol,
        max_iterations: model.max_iter,
    };
    let est = fit_mle(&counts, model.link, &cfg).map_err(|e| fit_error(e, counts.teams()))?;
    if !est.converged {
        return Err(CliError::NonConvergence(format!(
            "fit did not converge within {} iterations",
            est.iterations
        )));
    }
    Ok((counts, est))
}

fn fit_cmd(a: &FitArgs) -> Result<String, CliError> {
    let (counts, est) = fit_model(&a.model)?;
    let mut teams: Vec<(&str, f64)> = counts.teams().iter().map(String::as_str).zip(est.mu_hat.iter().copied()).collect();
    teams.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(y.0)));
    let teams: Vec<_> = teams.iter().map(|(t, m)| json!({"team": t, "mu_hat": m})).collect();
    Ok(to_json(&json!({
        "link": est.link,
        "iterations": est.iterations,
        "log_likelihood": est.log_likelihood,
        "teams": teams,
    })))
}

fn sw_required(method: Method, analysis: &RocAnalysis) -> Result<(), CliError> {
    if method == Method::Sw && analysis.sw.is_none() {
        return Err(CliError::Degenerate(format!(
            "strong-weak ROC undefined: stronger side won {} of {} games",
            analysis.ranked.w_hat(),
            analysis.ranked.total_games()
        )));
    }
    if analysis.sw.is_none() {
        log::warn!("strong-weak ROC undefined: one class is empty");
    }
    Ok(())
}

fn selected<'a>(method: Method, analysis: &'a RocAnalysis) -> Vec<(&'static str, &'a RocCurve)> {
    let mut out = Vec::new();
    if method != Method::Sw {
        out.push(("WL", &analysis.wl));
    }
    if method != Method::Wl {
        if let Some(sw) = &analysis.sw {
            out.push(("SW", sw));
        }
    }
    out
}

fn roc_cmd(a: &RocArgs) -> Result<String, CliError> {
    let (counts, est) = fit_model(&a.model)?;
    let analysis = roc::analyze(&counts, &est);
    sw_required(a.method, &analysis)?;
    let curves = selected(a.method, &analysis);

    if let Some(path) = &a.out_knots {
        let mut csv = String::new();
        if a.method == Method::Both {
            csv.push_str("curve,fpr,tpr\n");
            for (label, c) in &curves {
                for (f, t) in &c.knots {
                    let _ = writeln!(csv, "{},{f},{t}", label.to_lowercase());
                }
            }
        } else {
            csv.push_str("fpr,tpr\n");
            for (f, t) in &curves[0].1.knots {
                let _ = writeln!(csv, "{f},{t}");
            }
        }
        std::fs::write(path, csv)?;
    }
    if let Some(path) = &a.out_svg {
        std::fs::write(path, render_svg(&curves))?;
    }

    let report = analysis.report;
    Ok(to_json(&json!({
        "c_wl": analysis.c_wl,
        "c_sw": report.map(|r| r.c_sw),
        "W_hat": analysis.ranked.w_hat(),
        "N": analysis.ranked.total_games(),
        "identity_residual": report.map(|r| r.identity_residual),
        "identity_holds": report.map(|r| r.identity_holds()),
        "auc_wl": analysis.wl.auc(),
        "auc_sw": analysis.sw.as_ref().map(RocCurve::auc),
        "tied_pairs": analysis.ranked.tied_pair_count(),
    })))
}

fn inference_cmd(a: &InferenceArgs) -> Result<String, CliError> {
    let q: Vec<f64> = read_values(&a.q)?;
    let n: Option<Vec<u64>> = match &a.n {
        Some(arg) => {
            let mut n: Vec<u64> = read_values(arg)?;
            if n.len() == 1 && q.len() > 1 {
                n = vec![n[0]; q.len()];
            }
            Some(n)
        }
        None => None,
    };
    let need_n = || {
        n.clone()
            .ok_or_else(|| CliError::Input("--n is required for this statistic".to_string()))
    };
    match a.stat {
        Stat::Limits => {
            let equal_design = n.as_ref().is_none_or(|n| n.windows(2).all(|w| w[0] == w[1]));
            if equal_design {
                let cmp = inference::check_wl_ge_sw(&q)?;
                let (u, bound) = inference::rank_sum_bound(&q)?;
                Ok(to_json(&json!({
                    "c_wl": cmp.c_wl,
                    "c_sw": cmp.c_sw,
                    "margin": cmp.margin,
                    "wl_ge_sw": cmp.holds,
                    "equality": cmp.equality,
                    "U": u,
                    "U_bound": bound,
                })))
            } else {
                let model = TrueModel::new(&q, &need_n()?)?;
                let c = inference::limiting_c_stats_for_design(&model);
                Ok(to_json(&json!({"c_wl": c.c_wl, "c_sw": c.c_sw, "margin": c.c_wl - c.c_sw})))
            }
        }
        Stat::SeWl => {
            let model = TrueModel::new(&q, &need_n()?)?;
            Ok(to_json(&json!({"se_c_wl": inference::se_c_wl(&model), "N": model.total_games()})))
        }
        Stat::SeSw => {
            let model = TrueModel::new(&q, &need_n()?)?;
            let se = inference::se_c_sw_taylor(&inference::moments(&model), model.total_games())?;
            Ok(to_json(&json!({"se_c_sw": se, "N": model.total_games()})))
        }
        Stat::Moments => {
            let model = TrueModel::new(&q, &need_n()?)?;
            Ok(to_json(&inference::moments(&model)))
        }
    }
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn parity_cmd(a: &ParityArgs, json: bool) -> Result<String, CliError> {
    let (counts, est) = fit_model(&a.model)?;
    let analysis = roc::analyze(&counts, &est);
    let league = a.league.clone().unwrap_or_else(|| label_of(&a.model.input));
    let report = parity(&league, &counts, &analysis)?;
    if json {
        Ok(to_json(&report))
    } else {
        Ok(format!("{}\n{}\n", ParityReport::HEADER, report.row()))
    }
}

fn emit<T: Serialize>(rows: &[T], header: &str, line: impl Fn(&T) -> String, json: bool, out: Option<&Path>) -> Result<String, CliError> {
    let text = if json {
        to_json(&rows)
    } else {
        let mut s = format!("{header}\n");
        for r in rows {
            s.push_str(&line(r));
            s.push('\n');
        }
        s
    };
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            log::info!("wrote {}", path.display());
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn se_decay_cmd(a: &SeDecayArgs, seed: u64, json: bool) -> Result<String, CliError> {
    let mu: Vec<f64> = match &a.mu {
        Some(arg) => read_values(arg)?,
        None => metricsim::evenly_spaced(a.teams, -1.0, 1.0),
    };
    let grid = read_grid(&a.n)?;
    let rows = metricsim::simulate_se_decay(&mu, &grid, a.reps, a.link, seed)?;
    emit(
        &rows,
        "n,se_c_wl_emp,se_c_wl_exact,se_c_wl_true_emp,se_c_sw_emp,se_c_sw_true_emp,se_c_sw_taylor,reps,rejected",
        |r| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                r.se_c_wl_emp,
                r.se_c_wl_exact,
                r.se_c_wl_true_emp,
                r.se_c_sw_emp,
                r.se_c_sw_true_emp,
                r.se_c_sw_taylor,
                r.reps,
                r.rejected
            )
        },
        json,
        a.out.as_deref(),
    )
}

fn convergence_cmd(a: &ConvergenceArgs, seed: u64, json: bool) -> Result<String, CliError> {
    let mu: Vec<f64> = read_values(&a.mu)?;
    let design = read_design(&a.design)?;
    if let Some(&(i, j, _)) = design.iter().find(|&&(i, j, _)| i >= mu.len() || j >= mu.len()) {
        return Err(CliError::Input(format!(
            "design references team {} but only {} strengths were given",
            i.max(j),
            mu.len()
        )));
    }
    let grid = read_grid(&a.grid)?;
    let cfg = MetricConfig::new(a.rho, a.z).map_err(CliError::Input)?;
    let rows = metricsim::convergence_experiment(&mu, &design, &grid, a.link, &cfg, a.reps, seed)?;
    emit(
        &rows,
        "multiplier,N,wl_true,wl_limit,sw_true,sw_limit,rejected",
        |r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.multiplier, r.n_total, r.wl_true, r.wl_limit, r.sw_true, r.sw_limit, r.rejected
            )
        },
        json,
        a.out.as_deref(),
    )
}

fn plot_cmd(a: &PlotArgs) -> Result<String, CliError> {
    let mut analyses = Vec::new();
    for path in &a.input {
        let model = ModelArgs {
            input: path.clone(),
            link: a.link,
            tol: FitConfig::default().tolerance,
            max_iter: FitConfig::default().max_iterations,
        };
        let (counts, est) = fit_model(&model)?;
        let analysis = roc::analyze(&counts, &est);
        sw_required(a.method, &analysis)?;
        analyses.push((label_of(path), analysis));
    }
    let single = analyses.len() == 1;
    let labels: Vec<Vec<(String, &RocCurve)>> = analyses
        .iter()
        .map(|(league, analysis)| {
            selected(a.method, analysis)
                .into_iter()
                .map(|(kind, c)| {
                    let label = if single { kind.to_string() } else { format!("{league} {kind}") };
                    (label, c)
                })
                .collect()
        })
        .collect();
    let curves: Vec<(&str, &RocCurve)> = labels.iter().flatten().map(|(l, c)| (l.as_str(), *c)).collect();
    std::fs::write(&a.out, render_svg(&curves))?;
    Ok(String::new())
}
