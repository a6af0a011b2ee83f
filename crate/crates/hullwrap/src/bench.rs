//! Scaling measurements over seeded cloud families.
//!
//! A bench run contracts one generated cloud per (size, repeat) pair,
//! validates the result, and records counts and per-phase wall times. The
//! summary fits log-log slopes through the fastest repeat of each size, so
//! a doubling size series exposes the growth exponent of every phase.
//! Runs execute sequentially to keep the timings honest.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::contraction::{contract, ContractionConfig, Outcome};
use crate::hull::HullError;
use crate::io::{generate, Generator, IoError};
use crate::validate::validate;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("bad bench config: {0}")]
    Config(String),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub generator: Generator,
    /// Cloud sizes, strictly ascending, each at least 4.
    pub sizes: Vec<usize>,
    /// Runs per size; repeat `r` uses seed `seed + r`.
    pub repeats: usize,
    pub seed: u64,
    pub contraction: ContractionConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            generator: Generator::BallUniform,
            sizes: vec![100, 200, 400, 800, 1600, 3200],
            repeats: 1,
            seed: 0,
            contraction: ContractionConfig::default(),
        }
    }
}

/// One contraction run's counts and timings.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub generator: String,
    pub n: usize,
    pub seed: u64,
    /// Hull vertex count.
    pub m: usize,
    pub insertions: usize,
    /// Every interior point takes exactly one insertion.
    pub expected_insertions: usize,
    /// Rule-of-thumb iteration estimate, printed beside the exact count.
    pub n_over_100: f64,
    /// The exact count disagrees with the rule of thumb by more than
    /// rounding.
    pub n_over_100_mismatch: bool,
    pub passes: usize,
    pub hull_s: f64,
    pub prioritize_s: f64,
    pub insert_guard_s: f64,
    pub validate_s: f64,
    pub total_s: f64,
    pub final_metric: f64,
    pub validation_passed: bool,
    pub outcome: String,
}

/// Log-log slopes fitted through the fastest repeat of each size.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingSummary {
    pub total: f64,
    pub hull: f64,
    pub prioritize: f64,
    pub insert_guard: f64,
    pub validate: f64,
    /// Growth of `(n - m) log (n - m)` over the same sizes, fitted the same
    /// way; the prioritize phase should stay near this.
    pub prioritize_reference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub slopes: ScalingSummary,
}

/// ```
/// use hullwrap::bench::{run_bench, BenchConfig};
///
/// let config = BenchConfig { sizes: vec![50, 100, 200], ..BenchConfig::default() };
/// let report = run_bench(&config)?;
/// assert_eq!(report.records.len(), 3);
/// assert!(report.records.iter().all(|r| r.outcome == "COMPLETE" && r.validation_passed));
/// # Ok::<(), Box<dyn std::error::Error>>(())
/// ```
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    if config.sizes.is_empty() {
        return Err(BenchError::Config("no sizes given".into()));
    }
    if !config.sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err(BenchError::Config("sizes must be strictly ascending".into()));
    }
    if config.sizes[0] < 4 {
        return Err(BenchError::Config("sizes must be at least 4".into()));
    }
    if config.repeats == 0 {
        return Err(BenchError::Config("repeats must be at least 1".into()));
    }

    let mut records = Vec::with_capacity(config.sizes.len() * config.repeats);
    for &n in &config.sizes {
        for r in 0..config.repeats {
            let seed = config.seed + r as u64;
            let (cloud, _) = generate(config.generator, n, seed)?;
            let contract_start = Instant::now();
            let run = contract(&cloud, &config.contraction)?;
            let contract_s = contract_start.elapsed().as_secs_f64();
            let validate_start = Instant::now();
            let report =
                validate(&run.mesh, &cloud, Some(&run.trace), Some(run.on_surface_tolerance));
            let validate_s = validate_start.elapsed().as_secs_f64();

            let m = run.hull_vertices;
            let insertions = run.trace.insertions;
            let n_over_100 = n as f64 / 100.0;
            let final_sample = run.trace.final_sample();
            records.push(BenchRecord {
                generator: config.generator.name().to_string(),
                n,
                seed,
                m,
                insertions,
                expected_insertions: n - m,
                n_over_100,
                n_over_100_mismatch: (insertions as f64 - n_over_100).abs() > 0.5,
                passes: run.trace.passes,
                hull_s: run.timings.hull.as_secs_f64(),
                prioritize_s: run.timings.prioritize.as_secs_f64(),
                insert_guard_s: run.timings.insert_guard.as_secs_f64(),
                validate_s,
                total_s: contract_s + validate_s,
                final_metric: final_sample.metric,
                validation_passed: report.passed(),
                outcome: match run.outcome {
                    Outcome::Complete => "COMPLETE".to_string(),
                    Outcome::Stalled { .. } => "STALLED".to_string(),
                },
            });
        }
    }
    let slopes = fit_slopes(config, &records);
    Ok(BenchReport { records, slopes })
}

/// Picks the fastest repeat per size and fits each phase's slope, plus the
/// reference curve for the prioritize phase.
fn fit_slopes(config: &BenchConfig, records: &[BenchRecord]) -> ScalingSummary {
    let mut fastest: Vec<&BenchRecord> = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        let best = records
            .iter()
            .filter(|r| r.n == n)
            .min_by(|a, b| a.total_s.total_cmp(&b.total_s))
            .expect("each size has at least one record");
        fastest.push(best);
    }
    let ns: Vec<f64> = fastest.iter().map(|r| r.n as f64).collect();
    let phase = |f: fn(&BenchRecord) -> f64| -> f64 {
        let ts: Vec<f64> = fastest.iter().map(|r| f(r).max(1e-9)).collect();
        loglog_slope(&ns, &ts)
    };
    let reference: Vec<f64> = fastest
        .iter()
        .map(|r| {
            let work = (r.n - r.m).max(2) as f64;
            work * work.ln()
        })
        .collect();
    ScalingSummary {
        total: phase(|r| r.total_s),
        hull: phase(|r| r.hull_s),
        prioritize: phase(|r| r.prioritize_s),
        insert_guard: phase(|r| r.insert_guard_s),
        validate: phase(|r| r.validate_s),
        prioritize_reference: loglog_slope(&ns, &reference),
    }
}

/// Least-squares slope of `ln y` against `ln x`.
fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

pub const BENCH_CSV_HEADER: &str = "generator,n,seed,m,insertions,expected_insertions,\
n_over_100,n_over_100_mismatch,passes,hull_s,prioritize_s,insert_guard_s,validate_s,\
total_s,final_metric,validation_passed,outcome";

/// Writes one CSV row per run. Timing and metric columns aside, the bytes
/// are identical for identical configs.
pub fn write_csv(report: &BenchReport, path: &Path) -> Result<(), IoError> {
    let mut s = String::new();
    s.push_str(BENCH_CSV_HEADER);
    s.push('\n');
    for r in &report.records {
        use std::fmt::Write as _;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.generator,
            r.n,
            r.seed,
            r.m,
            r.insertions,
            r.expected_insertions,
            r.n_over_100,
            r.n_over_100_mismatch,
            r.passes,
            r.hull_s,
            r.prioritize_s,
            r.insert_guard_s,
            r.validate_s,
            r.total_s,
            r.final_metric,
            r.validation_passed,
            r.outcome
        );
    }
    std::fs::write(path, s).map_err(|source| IoError::File { path: path.to_path_buf(), source })
}
