//! Eigenvalue report: single-excitation spectrum, pairwise sums, the
//! two-excitation spectrum, their overlap, and spacing statistics.

use std::path::Path;

use serde::Serialize;

use qst_core::evolve::spectral_decompose;
use qst_core::model::{build_hamiltonian, enumerate_basis, ModelKind};
use qst_core::spectra::{
    pairwise_sum_spectrum, spacing_ratio_stats, spectrum_overlap, OverlapReport,
    ParticleStatistics, SpectrumStats,
};
use qst_core::ModelParams64;

use crate::config::{FileConfig, OutputBlock};
use crate::fail::Failure;
use crate::output::{self, CsvTable, SolutionFile, SPECTRUM_FORMAT};

#[derive(Serialize)]
struct SpectrumReport {
    format_version: &'static str,
    params: ModelParams64,
    single_count: usize,
    pair_sum_count: usize,
    multi_count: usize,
    single_eigenvalues: Vec<f64>,
    /// Two-particle energies predicted by combining single levels: pairs
    /// with repetition for bosons, all ordered spin pairs for electrons.
    pair_sums: Vec<f64>,
    multi_eigenvalues: Vec<f64>,
    /// Largest violation of spectrum symmetry under negation.
    lambda_symmetry_residual: f64,
    overlap: OverlapReport<f64>,
    /// Absent when the sector has fewer than three levels.
    single_stats: Option<SpectrumStats<f64>>,
    multi_stats: Option<SpectrumStats<f64>>,
}

pub fn run_config(config: &FileConfig) -> Result<(), Failure> {
    let params = config.model()?.build_params()?;
    emit(&params, &config.output)
}

pub fn run_solution(path: &Path, out_override: Option<&Path>) -> Result<(), Failure> {
    let solution = SolutionFile::load(path)?;
    let mut output = solution.config.output.clone();
    if let Some(dir) = out_override {
        output.directory = dir.to_path_buf();
    }
    emit(&solution.best.params, &output)
}

fn sector_eigenvalues(params: &ModelParams64, n_exc: usize) -> Result<Vec<f64>, Failure> {
    let basis = enumerate_basis(params.kind(), params.n_sites(), n_exc)?;
    let h = build_hamiltonian(params, &basis)?;
    Ok(spectral_decompose(&h)?.eigenvalues().to_vec())
}

/// Largest `|e_i + e_{D-1-i}|` of an ascending spectrum; zero when the
/// level pattern is symmetric under negation.
fn negation_residual(eigs: &[f64]) -> f64 {
    eigs.iter()
        .zip(eigs.iter().rev())
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max)
}

fn emit(params: &ModelParams64, output: &OutputBlock) -> Result<(), Failure> {
    let single = sector_eigenvalues(params, 1)?;
    let multi = sector_eigenvalues(params, 2)?;
    let pair_sums = match params.kind() {
        ModelKind::CavityOnly | ModelKind::Jch => {
            pairwise_sum_spectrum(&single, ParticleStatistics::Bosonic)?
        }
        // distinguishable spins: every ordered pair, so both triangle rules
        ModelKind::Pam => {
            let mut sums = pairwise_sum_spectrum(&single, ParticleStatistics::Bosonic)?;
            sums.extend(pairwise_sum_spectrum(&single, ParticleStatistics::Fermionic)?);
            sums.sort_by(|a, b| a.partial_cmp(b).expect("finite sums"));
            sums
        }
    };
    let report = SpectrumReport {
        format_version: SPECTRUM_FORMAT,
        params: params.clone(),
        single_count: single.len(),
        pair_sum_count: pair_sums.len(),
        multi_count: multi.len(),
        lambda_symmetry_residual: negation_residual(&multi),
        overlap: spectrum_overlap(&multi, &pair_sums)?,
        single_stats: spacing_ratio_stats(&single).ok(),
        multi_stats: spacing_ratio_stats(&multi).ok(),
        single_eigenvalues: single,
        pair_sums,
        multi_eigenvalues: multi,
    };

    let dir = &output.directory;
    write_levels_csv(dir, &report)?;
    output::write_json(&dir.join("spectrum.json"), &report)?;

    println!(
        "levels: {} single, {} pairwise sums, {} two-excitation",
        report.single_count, report.pair_sum_count, report.multi_count
    );
    println!(
        "overlap: median nearest distance {:.3e} against mean reference spacing {:.3e}",
        report.overlap.median_nearest, report.overlap.mean_reference_spacing
    );
    println!(
        "negation symmetry residual {:.3e}",
        report.lambda_symmetry_residual
    );
    println!("wrote {}", dir.join("spectrum.json").display());
    Ok(())
}

fn write_levels_csv(dir: &Path, report: &SpectrumReport) -> Result<(), Failure> {
    let mut table = CsvTable::new(&["format_version", "sector", "index", "value"]);
    let sections = [
        ("single", &report.single_eigenvalues),
        ("pair-sum", &report.pair_sums),
        ("two-excitation", &report.multi_eigenvalues),
    ];
    for (sector, values) in sections {
        for (index, &value) in values.iter().enumerate() {
            table.row(&[
                SPECTRUM_FORMAT.to_string(),
                sector.to_string(),
                index.to_string(),
                output::fmt_f64(value),
            ]);
        }
    }
    table.write(&dir.join("spectrum_levels.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qst_core::model::{CavityParams, ModelParams};

    #[test]
    fn negation_residual_is_zero_only_for_symmetric_patterns() {
        assert_eq!(negation_residual(&[-3.0, -1.0, 1.0, 3.0]), 0.0);
        // worst pairing is the outer one: |-1.0 + 2.5| = 1.5
        assert_eq!(negation_residual(&[-1.0, 0.5, 2.5]), 1.5);
    }

    #[test]
    fn engineered_chain_pair_sums_match_the_two_photon_spectrum() {
        // a bare cavity chain is non-interacting, so two bosons see exactly
        // the sums of single-photon levels
        let params = ModelParams::CavityOnly(
            CavityParams::resonant(vec![3.0_f64.sqrt(), 2.0, 3.0_f64.sqrt()]).unwrap(),
        );
        let single = sector_eigenvalues(&params, 1).unwrap();
        let multi = sector_eigenvalues(&params, 2).unwrap();
        let sums = pairwise_sum_spectrum(&single, ParticleStatistics::Bosonic).unwrap();
        assert_eq!(multi.len(), sums.len());
        for (a, b) in multi.iter().zip(&sums) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
