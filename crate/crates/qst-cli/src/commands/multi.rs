//! Fidelity cost of serving several mirror-pair transfers with one
//! coupling set.

use serde::Serialize;

use qst_core::bench::{multi_transfer_experiment, MultiTransferConfig, MultiTransferSummary};

use crate::config::FileConfig;
use crate::fail::Failure;
use crate::output::{self, CsvTable, MULTI_FORMAT};

#[derive(Serialize)]
struct MultiReport<'a> {
    format_version: &'static str,
    config: &'a FileConfig,
    summary: &'a MultiTransferSummary<f64>,
}

pub fn run(config: &FileConfig) -> Result<(), Failure> {
    let block = config.multi()?;
    let core_config = MultiTransferConfig {
        n_sites: block.n,
        n_exc: block.n_exc,
        targets_range: (block.targets_min, block.targets_max),
        n_runs: block.n_runs,
        budget: block.budget,
        curve_points: block.curve_points,
        seed: block.seed,
    };
    let mut summary = multi_transfer_experiment::<f64>(&core_config)?;

    write_best_csv(config, &summary)?;
    write_curves_csv(config, &summary)?;
    let stride = config.output.trace_stride;
    if stride > 1 {
        for count in &mut summary.per_count {
            count.records = count
                .records
                .iter()
                .map(|r| output::thin_trace(r, stride))
                .collect();
        }
    }
    let dir = &config.output.directory;
    output::write_json(
        &dir.join("multi.json"),
        &MultiReport {
            format_version: MULTI_FORMAT,
            config,
            summary: &summary,
        },
    )?;

    for count in &summary.per_count {
        println!(
            "{} simultaneous transfer(s): best mean fidelity {:.6}",
            count.n_targets, count.best_mean_fidelity
        );
    }
    println!("wrote {}", dir.join("multi.json").display());
    Ok(())
}

fn write_best_csv(config: &FileConfig, summary: &MultiTransferSummary<f64>) -> Result<(), Failure> {
    let block = config.multi()?;
    let mut table = CsvTable::new(&["format_version", "seed", "n_targets", "best_mean_fidelity"]);
    for count in &summary.per_count {
        table.row(&[
            MULTI_FORMAT.to_string(),
            block.seed.to_string(),
            count.n_targets.to_string(),
            output::fmt_f64(count.best_mean_fidelity),
        ]);
    }
    table.write(&config.output.directory.join("multi_best.csv"))
}

fn write_curves_csv(
    config: &FileConfig,
    summary: &MultiTransferSummary<f64>,
) -> Result<(), Failure> {
    let block = config.multi()?;
    let mut table = CsvTable::new(&["format_version", "seed", "n_targets", "calls", "mean_error"]);
    for count in &summary.per_count {
        for &(calls, error) in &count.mean_error_curve {
            table.row(&[
                MULTI_FORMAT.to_string(),
                block.seed.to_string(),
                count.n_targets.to_string(),
                calls.to_string(),
                output::fmt_f64(error),
            ]);
        }
    }
    table.write(&config.output.directory.join("multi_curves.csv"))
}
