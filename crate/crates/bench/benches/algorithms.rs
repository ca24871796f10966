use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pcroc::fit::{fit_mle, FitConfig, LinkFunction, StrengthEstimates};
use pcroc::inference::{moments, se_c_sw_taylor, TrueModel};
use pcroc::metricsim::{as_threshold_curve, evenly_spaced, roc_distance, MetricConfig};
use pcroc::roc::{c_sw_pairwise, c_wl_fast, c_wl_pairwise, rank_pairs, sw_game_scores, wl_game_scores, CurveKind};
use pcroc_bench::season;

fn fitting(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_mle");
    for m in [8, 30] {
        let counts = season(m, 6, 1);
        for link in [LinkFunction::Logistic, LinkFunction::Probit] {
            group.bench_with_input(BenchmarkId::new(link.to_string(), m), &counts, |b, counts| {
                b.iter(|| fit_mle(black_box(counts), link, &FitConfig::default()).unwrap())
            });
        }
    }
    group.finish();
}

fn c_statistics(c: &mut Criterion) {
    let mut group = c.benchmark_group("c_statistics");
    for m in [10, 30] {
        let counts = season(m, 8, 2);
        let est = fit_mle(&counts, LinkFunction::Logistic, &FitConfig::default()).unwrap();
        let probs = est.probs();
        group.bench_function(BenchmarkId::new("fast", m), |b| {
            b.iter(|| c_wl_fast(&rank_pairs(black_box(&counts), &probs, &est)))
        });
        group.bench_function(BenchmarkId::new("pairwise", m), |b| {
            b.iter(|| {
                let (w, l) = wl_game_scores(black_box(&counts), &probs);
                let (s, k) = sw_game_scores(&counts, &probs, &est);
                (c_wl_pairwise(&w, &l), c_sw_pairwise(&s, &k).unwrap())
            })
        });
    }
    group.finish();
}

fn inference(c: &mut Criterion) {
    let mut group = c.benchmark_group("inference");
    for r in [45, 435] {
        let q: Vec<f64> = (0..r).map(|k| 0.5 + 0.45 * k as f64 / r as f64).collect();
        let model = TrueModel::new(&q, &vec![10; r]).unwrap();
        group.bench_function(BenchmarkId::new("moments_taylor", r), |b| {
            b.iter(|| se_c_sw_taylor(&moments(black_box(&model)), model.total_games()).unwrap())
        });
    }
    group.finish();
}

fn distance(c: &mut Criterion) {
    let m = 30;
    let truth = StrengthEstimates::from_strengths(&evenly_spaced(m, -1.0, 1.0), LinkFunction::Logistic);
    let counts = season(m, 8, 3);
    let est = fit_mle(&counts, LinkFunction::Logistic, &FitConfig::default()).unwrap();
    let f = as_threshold_curve(&rank_pairs(&counts, &est.probs(), &est), CurveKind::Wl).unwrap();
    let g = as_threshold_curve(&rank_pairs(&counts, &truth.probs(), &truth), CurveKind::Wl).unwrap();
    let cfg = MetricConfig::default();
    c.bench_function("roc_distance", |b| b.iter(|| roc_distance(black_box(&f), black_box(&g), &cfg)));
}

criterion_group!(benches, fitting, c_statistics, inference, distance);
criterion_main!(benches);
