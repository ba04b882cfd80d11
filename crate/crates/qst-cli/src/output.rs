//! Result persistence: JSON documents and CSV tables, written atomically.
//!
//! Every artifact carries a format-version tag. CSV files use a header row,
//! comma separation, UTF-8, and LF line endings; floating-point cells are
//! printed with 17 significant digits so that every double round-trips
//! exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qst_core::{ModelParams64, RunRecord64};

use crate::config::FileConfig;
use crate::fail::Failure;

pub const SOLUTION_FORMAT: &str = "qst-solution/1";
pub const BENCH_FORMAT: &str = "qst-bench/1";
pub const PAIRS_FORMAT: &str = "qst-pairs/1";
pub const USWEEP_FORMAT: &str = "qst-usweep/1";
pub const MULTI_FORMAT: &str = "qst-multi/1";
pub const SPECTRUM_FORMAT: &str = "qst-spectrum/1";

/// Self-contained record of one solve: the effective config, every run,
/// the winning parameters, and an independent re-check of their fidelity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format_version: String,
    pub config: FileConfig,
    pub runs: Vec<RunRecord64>,
    pub best: BestSolution,
    pub verification: Verification,
}

impl SolutionFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// The parameter point the file stands behind, scored by the optimizer's
/// own evaluation path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BestSolution {
    /// Seed of the winning run; absent in verify-only mode.
    pub seed: Option<u64>,
    pub params: ModelParams64,
    pub free_params: Vec<f64>,
    pub action: f64,
    pub fidelity: f64,
}

/// Fidelity of the persisted parameters recomputed from scratch: a fresh
/// Hamiltonian, spectral decomposition, and time trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verification {
    pub evolution_time: f64,
    /// Mean over the targets at the transfer time.
    pub fidelity_at_evolution_time: f64,
    pub peak_time: f64,
    pub peak_fidelity: f64,
    pub window: f64,
    pub coarse_points: usize,
    pub tolerance: f64,
    pub matches_reported: bool,
    pub per_target: Vec<TargetVerification>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetVerification {
    pub from: String,
    pub to: String,
    pub fidelity_at_evolution_time: f64,
    pub peak_time: f64,
    pub peak_fidelity: f64,
}

/// Decimal with 17 significant digits; parses back to the identical double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes bytes through a sibling temp file and a rename, so a crash never
/// leaves a half-written artifact behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| Failure::config(format!("cannot replace {}: {e}", path.display())))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// Collects rows for a comma-separated table with one header row.
pub struct CsvTable {
    columns: usize,
    lines: Vec<String>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            columns: header.len(),
            lines: vec![header.iter().map(|h| escape(h)).collect::<Vec<_>>().join(",")],
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.columns, "ragged CSV row");
        self.lines
            .push(cells.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","));
    }

    pub fn write(&self, path: &Path) -> Result<(), Failure> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }
}

/// Quotes a cell only when it holds a comma, quote, or line break.
fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Copy of `record` keeping every `stride`-th trace point plus the last.
pub fn thin_trace(record: &RunRecord64, stride: usize) -> RunRecord64 {
    let mut out = record.clone();
    if stride > 1 && record.trace.len() > 1 {
        let last = record.trace.len() - 1;
        out.trace = record
            .trace
            .iter()
            .enumerate()
            .filter(|(i, _)| i % stride == 0 || *i == last)
            .map(|(_, p)| p.clone())
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_floats_round_trip_exactly() {
        for x in [
            0.1_f64 + 0.2,
            1.0 / 3.0,
            -3.5,
            6.626e-34,
            0.9939730000000001,
            1e300,
            f64::MIN_POSITIVE,
        ] {
            let shown = fmt_f64(x);
            let back: f64 = shown.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{shown}");
        }
    }

    #[test]
    fn cells_with_separators_get_quoted() {
        assert_eq!(escape("plain cell"), "plain cell");
        assert_eq!(escape("a,b"), "\"a,b\"");
        assert_eq!(escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn atomic_writes_create_directories_and_replace_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/deep/table.csv");
        write_atomic(&path, b"first\n").unwrap();
        write_atomic(&path, b"second\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second\n");
    }

    #[test]
    fn csv_tables_end_lines_with_lf_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut table = CsvTable::new(&["a", "b"]);
        table.row(&["1".into(), "2".into()]);
        table.write(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a,b\n1,2\n");
        assert!(!text.contains('\r'));
    }
}
