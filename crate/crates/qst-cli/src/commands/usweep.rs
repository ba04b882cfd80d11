//! Peak transfer fidelity across a grid of on-site repulsions, holding the
//! impurity chain's couplings fixed.

use serde::Serialize;

use qst_core::bench::{u_sweep, FidelitySurface, USweepConfig};
use qst_core::model::{enumerate_basis, ModelKind, ModelParams};

use crate::config::{resolve_targets, FileConfig};
use crate::fail::Failure;
use crate::output::{self, CsvTable, USWEEP_FORMAT};

#[derive(Serialize)]
struct UsweepReport<'a> {
    format_version: &'static str,
    config: &'a FileConfig,
    surface: &'a FidelitySurface<f64>,
    /// Per target: best fidelity anywhere off the interaction-free corner.
    best_nontrivial: Vec<f64>,
}

pub fn run(config: &FileConfig) -> Result<(), Failure> {
    let block = config.usweep()?;
    let model = config.model()?;
    if model.kind != ModelKind::Pam {
        return Err(Failure::config(
            "usweep sweeps on-site repulsions, so model.kind must be \"pam\"",
        ));
    }
    let params = match model.build_params()? {
        ModelParams::Pam(p) => p,
        _ => unreachable!("kind checked above"),
    };
    // the sweep always works in the electron-pair sector
    let basis = enumerate_basis(ModelKind::Pam, model.n, 2)?;
    let targets = resolve_targets(&block.targets, &basis)?;
    let core_config = USweepConfig {
        resolution: block.resolution,
        t_max: block.t_max,
        coarse_points: block.coarse_points,
    };
    let surface = u_sweep(&params, &targets, &core_config)?;
    let best_nontrivial: Vec<f64> = (0..surface.target_labels.len())
        .map(|k| surface.best_nontrivial(k))
        .collect();

    let dir = &config.output.directory;
    write_surface_csv(config, &surface)?;
    output::write_json(
        &dir.join("usweep.json"),
        &UsweepReport {
            format_version: USWEEP_FORMAT,
            config,
            surface: &surface,
            best_nontrivial: best_nontrivial.clone(),
        },
    )?;

    for (label, best) in surface.target_labels.iter().zip(&best_nontrivial) {
        println!("{label}: best fidelity away from the free corner {best:.6}");
    }
    println!("wrote {}", dir.join("usweep_surface.csv").display());
    Ok(())
}

fn write_surface_csv(config: &FileConfig, surface: &FidelitySurface<f64>) -> Result<(), Failure> {
    let mut table = CsvTable::new(&[
        "format_version",
        "target",
        "u_conduction",
        "u_localized",
        "peak_fidelity",
    ]);
    for (k, label) in surface.target_labels.iter().enumerate() {
        for (i, &uc) in surface.u_conduction.iter().enumerate() {
            for (j, &ud) in surface.u_localized.iter().enumerate() {
                table.row(&[
                    USWEEP_FORMAT.to_string(),
                    label.clone(),
                    output::fmt_f64(uc),
                    output::fmt_f64(ud),
                    output::fmt_f64(surface.peak_fidelity[k][i][j]),
                ]);
            }
        }
    }
    table.write(&config.output.directory.join("usweep_surface.csv"))
}
