//! Convergence benchmark: calls-to-threshold statistics across chain
//! lengths, plus an exponential fit of the median scaling.

use serde::Serialize;

use qst_core::bench::{convergence_benchmark, fit_exponential, ConvergenceConfig, ConvergenceSummary, ExpFit};
use qst_core::AnnealConfig64;

use crate::config::{FileConfig, PenaltySpec};
use crate::fail::Failure;
use crate::output::{self, CsvTable, BENCH_FORMAT};

#[derive(Serialize)]
struct BenchReport<'a> {
    format_version: &'static str,
    config: &'a FileConfig,
    summary: &'a ConvergenceSummary<f64>,
    fit_threshold: f64,
    /// Absent when fewer than two sizes produced a median.
    fit: Option<ExpFit<f64>>,
}

pub fn run(config: &FileConfig) -> Result<(), Failure> {
    let block = config.bench()?;
    let core_config = ConvergenceConfig {
        kind: block.kind,
        n_exc: block.n_exc,
        sizes: block.sizes.clone(),
        thresholds: block.thresholds.clone(),
        n_runs: block.n_runs,
        budget: block.budget,
        symmetric: block.symmetric,
        penalty: block.penalty.map(PenaltySpec::to_core),
        seed: block.seed,
    };
    let base = match &config.anneal {
        Some(a) => a.to_core()?,
        // budget and thresholds are overridden per size anyway
        None => AnnealConfig64::dual(1),
    };
    let summary = convergence_benchmark(&core_config, &base)?;

    let fit_threshold = block
        .fit_threshold
        .or_else(|| block.thresholds.last().copied())
        .ok_or_else(|| Failure::config("bench.thresholds must not be empty"))?;
    let points: Vec<(usize, f64)> = summary
        .sizes
        .iter()
        .filter_map(|s| {
            s.per_threshold
                .iter()
                .find(|t| (t.threshold - fit_threshold).abs() < 1e-12)
                .and_then(|t| t.median)
                .map(|m| (s.n_sites, m))
        })
        .collect();
    let fit = if points.len() >= 2 {
        Some(fit_exponential(&points)?)
    } else {
        None
    };

    let dir = &config.output.directory;
    write_runs_csv(config, &summary)?;
    write_threshold_csv(config, &summary)?;
    output::write_json(
        &dir.join("bench.json"),
        &BenchReport {
            format_version: BENCH_FORMAT,
            config,
            summary: &summary,
            fit_threshold,
            fit,
        },
    )?;

    for size in &summary.sizes {
        let top = size.per_threshold.last().expect("validated nonempty");
        println!(
            "n = {}: dim {}, {} free, {}/{} runs reached {}, median calls {}",
            size.n_sites,
            size.dim,
            size.n_free,
            top.n_reached,
            size.records.len(),
            top.threshold,
            top.median.map_or("-".to_string(), |m| format!("{m:.0}")),
        );
    }
    match fit {
        Some(f) => println!(
            "exponential fit at threshold {fit_threshold}: {:.1} * exp({:.3} n), log-space R^2 = {:.3}",
            f.prefactor, f.rate, f.r_squared
        ),
        None => println!("exponential fit skipped: fewer than two sizes reached {fit_threshold}"),
    }
    println!("wrote {}", dir.join("bench.json").display());
    Ok(())
}

fn write_runs_csv(config: &FileConfig, summary: &ConvergenceSummary<f64>) -> Result<(), Failure> {
    let mut header = vec![
        "format_version".to_string(),
        "n_sites".to_string(),
        "dim".to_string(),
        "n_free".to_string(),
        "budget".to_string(),
        "run".to_string(),
        "seed".to_string(),
        "best_fidelity".to_string(),
        "best_action".to_string(),
        "calls_used".to_string(),
    ];
    for t in &summary.thresholds {
        header.push(format!("calls_to_{t}"));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = CsvTable::new(&header_refs);
    for size in &summary.sizes {
        for (run, record) in size.records.iter().enumerate() {
            let mut cells = vec![
                BENCH_FORMAT.to_string(),
                size.n_sites.to_string(),
                size.dim.to_string(),
                size.n_free.to_string(),
                size.budget.to_string(),
                run.to_string(),
                record.seed.to_string(),
                output::fmt_f64(record.best_fidelity),
                output::fmt_f64(record.best_action),
                record.function_calls_used.to_string(),
            ];
            for &t in &summary.thresholds {
                cells.push(
                    record
                        .calls_to_reach(t)
                        .map_or(String::new(), |c| c.to_string()),
                );
            }
            table.row(&cells);
        }
    }
    table.write(&config.output.directory.join("bench_runs.csv"))
}

fn write_threshold_csv(
    config: &FileConfig,
    summary: &ConvergenceSummary<f64>,
) -> Result<(), Failure> {
    let mut table = CsvTable::new(&[
        "format_version",
        "n_sites",
        "threshold",
        "n_reached",
        "fraction_reached",
        "p25",
        "median",
        "p75",
        "mean",
    ]);
    let quartile = |v: Option<f64>| v.map_or(String::new(), output::fmt_f64);
    for size in &summary.sizes {
        for t in &size.per_threshold {
            table.row(&[
                BENCH_FORMAT.to_string(),
                size.n_sites.to_string(),
                output::fmt_f64(t.threshold),
                t.n_reached.to_string(),
                output::fmt_f64(t.fraction_reached),
                quartile(t.p25),
                quartile(t.median),
                quartile(t.p75),
                quartile(t.mean),
            ]);
        }
    }
    table.write(&config.output.directory.join("bench_thresholds.csv"))
}
