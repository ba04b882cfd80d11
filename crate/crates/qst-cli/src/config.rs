//! Config file schema: TOML with nested blocks, unknown keys rejected.
//!
//! One file may describe several experiments; each subcommand reads the
//! blocks it needs and ignores the rest. Target states are written as
//! occupation descriptors with 1-based sites ("c1 c1" for two photons in
//! the first cavity, "e3" for the third emitter excited, "up@c1 down@d4"
//! for an electron pair) and resolved against the sector basis.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qst_core::anneal::{
    AcceptanceTemperature, BoundsSpec, InitialPoint, Objective, PamPenalty, Schedule,
    DEFAULT_THRESHOLDS, DEFAULT_VISIT_SHAPE,
};
use qst_core::bench::BudgetRule;
use qst_core::evolve::TransferTarget;
use qst_core::model::{
    enumerate_basis, Basis, BasisState, CavityParams, JchParams, ModelKind, ModelParams,
    PamParams, SymmetryConstraint,
};
use qst_core::{AnnealConfig64, ModelParams64, Objective64};

use crate::fail::Failure;

fn one() -> usize {
    1
}

fn default_evolution_time() -> f64 {
    1.0
}

fn default_verify_points() -> usize {
    4096
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_schedule() -> ScheduleSpec {
    ScheduleSpec::Preset("dual".to_string())
}

fn default_thresholds() -> Vec<f64> {
    DEFAULT_THRESHOLDS.to_vec()
}

fn default_directory() -> PathBuf {
    PathBuf::from(".")
}

fn default_solution_name() -> String {
    "solution.json".to_string()
}

fn default_t_max() -> f64 {
    2.0
}

fn default_coarse_points() -> usize {
    1024
}

fn default_curve_points() -> usize {
    48
}

fn default_plateau_max() -> f64 {
    100.0
}

fn default_plateau_min() -> f64 {
    0.1
}

fn default_plateau_steps() -> usize {
    100
}

fn default_visit_shape() -> f64 {
    DEFAULT_VISIT_SHAPE
}

fn default_visit_temp() -> f64 {
    5230.0
}

fn default_restart_factor() -> f64 {
    0.1
}

fn default_penalty_fraction() -> f64 {
    0.1
}

fn default_penalty_weight() -> f64 {
    1.0
}

/// Whole config file. Every block is optional so that one file can carry
/// settings for several subcommands; commands report which block they miss.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anneal: Option<AnnealBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<PairsBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub usweep: Option<UsweepBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multi: Option<MultiBlock>,
    pub output: OutputBlock,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        let config: FileConfig = toml::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.output.trace_stride == 0 {
            return Err(Failure::config("output.trace-stride must be at least 1"));
        }
        if let Some(objective) = &self.objective {
            if objective.verify_points < 100 {
                return Err(Failure::config(
                    "objective.verify-points must be at least 100",
                ));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> Result<&ModelBlock, Failure> {
        self.model
            .as_ref()
            .ok_or_else(|| Failure::config("missing [model] block"))
    }

    pub fn objective(&self) -> Result<&ObjectiveBlock, Failure> {
        self.objective
            .as_ref()
            .ok_or_else(|| Failure::config("missing [objective] block"))
    }

    pub fn anneal(&self) -> Result<&AnnealBlock, Failure> {
        self.anneal
            .as_ref()
            .ok_or_else(|| Failure::config("missing [anneal] block"))
    }

    pub fn bench(&self) -> Result<&BenchBlock, Failure> {
        self.bench
            .as_ref()
            .ok_or_else(|| Failure::config("missing [bench] block"))
    }

    pub fn pairs(&self) -> Result<&PairsBlock, Failure> {
        self.pairs
            .as_ref()
            .ok_or_else(|| Failure::config("missing [pairs] block"))
    }

    pub fn usweep(&self) -> Result<&UsweepBlock, Failure> {
        self.usweep
            .as_ref()
            .ok_or_else(|| Failure::config("missing [usweep] block"))
    }

    pub fn multi(&self) -> Result<&MultiBlock, Failure> {
        self.multi
            .as_ref()
            .ok_or_else(|| Failure::config("missing [multi] block"))
    }
}

/// Which lattice model, how long, which excitation sector, and optionally
/// explicit coupling tables. Omitted energies default to zero (resonance)
/// and omitted couplings to one.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ModelBlock {
    pub kind: ModelKind,
    pub n: usize,
    #[serde(default = "one")]
    pub n_exc: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site_energies: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity_energies: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emitter_energies: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hoppings: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hybridizations: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_conduction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_localized: Option<f64>,
}

impl ModelBlock {
    pub fn basis(&self) -> Result<Basis, Failure> {
        enumerate_basis(self.kind, self.n, self.n_exc).map_err(Failure::from)
    }

    /// The parameter set the block describes, defaults filled in; keys that
    /// belong to a different model kind are rejected by name.
    pub fn build_params(&self) -> Result<ModelParams64, Failure> {
        let n = self.n;
        let ones = |len: usize| vec![1.0; len];
        let zeros = |len: usize| vec![0.0; len];
        let forbid = |present: bool, key: &str, wanted: &str| -> Result<(), Failure> {
            if present {
                Err(Failure::config(format!(
                    "key '{key}' applies only to kind = \"{wanted}\""
                )))
            } else {
                Ok(())
            }
        };
        let n_hop = n.saturating_sub(1);
        match self.kind {
            ModelKind::CavityOnly => {
                forbid(self.cavity_energies.is_some(), "cavity-energies", "jch")?;
                forbid(self.emitter_energies.is_some(), "emitter-energies", "jch")?;
                forbid(self.couplings.is_some(), "couplings", "jch")?;
                forbid(self.hybridizations.is_some(), "hybridizations", "pam")?;
                forbid(self.u_conduction.is_some(), "u-conduction", "pam")?;
                forbid(self.u_localized.is_some(), "u-localized", "pam")?;
                let p = CavityParams::new(
                    self.site_energies.clone().unwrap_or_else(|| zeros(n)),
                    self.hoppings.clone().unwrap_or_else(|| ones(n_hop)),
                )?;
                Ok(ModelParams::CavityOnly(p))
            }
            ModelKind::Jch => {
                forbid(self.site_energies.is_some(), "site-energies", "cavity-only")?;
                forbid(self.hybridizations.is_some(), "hybridizations", "pam")?;
                forbid(self.u_conduction.is_some(), "u-conduction", "pam")?;
                forbid(self.u_localized.is_some(), "u-localized", "pam")?;
                let p = JchParams::new(
                    self.cavity_energies.clone().unwrap_or_else(|| zeros(n)),
                    self.emitter_energies.clone().unwrap_or_else(|| zeros(n)),
                    self.hoppings.clone().unwrap_or_else(|| ones(n_hop)),
                    self.couplings.clone().unwrap_or_else(|| ones(n)),
                )?;
                Ok(ModelParams::Jch(p))
            }
            ModelKind::Pam => {
                forbid(self.site_energies.is_some(), "site-energies", "cavity-only")?;
                forbid(self.cavity_energies.is_some(), "cavity-energies", "jch")?;
                forbid(self.emitter_energies.is_some(), "emitter-energies", "jch")?;
                forbid(self.couplings.is_some(), "couplings", "jch")?;
                let p = PamParams::new(
                    self.hoppings.clone().unwrap_or_else(|| ones(n_hop)),
                    self.hybridizations.clone().unwrap_or_else(|| ones(n)),
                    self.u_conduction.unwrap_or(1.0),
                    self.u_localized.unwrap_or(1.0),
                )?;
                Ok(ModelParams::Pam(p))
            }
        }
    }
}

/// One transfer written as a pair of occupation descriptors. Equal source
/// and destination ask for a return to the start at the transfer time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TargetSpec {
    pub from: String,
    pub to: String,
}

/// What the optimizer searches for and how solutions are re-verified.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ObjectiveBlock {
    #[serde(default)]
    pub targets: Vec<TargetSpec>,
    /// The fixed transfer time the propagator is judged at.
    #[serde(default = "default_evolution_time")]
    pub evolution_time: f64,
    #[serde(default)]
    pub symmetry: SymmetrySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSpec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltySpec>,
    /// Time window of the independent verification trace; defaults to
    /// twice the evolution time, at least 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify_window: Option<f64>,
    #[serde(default = "default_verify_points")]
    pub verify_points: usize,
}

impl ObjectiveBlock {
    pub fn verify_window(&self) -> f64 {
        self.verify_window
            .unwrap_or_else(|| (2.0 * self.evolution_time).max(2.0))
    }
}

/// Whether couplings are constrained to mirror symmetry about the center.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetrySpec {
    #[default]
    Identity,
    Mirror,
}

impl SymmetrySpec {
    pub fn to_core(self, kind: ModelKind, n: usize, n_tunables: usize) -> SymmetryConstraint {
        match self {
            SymmetrySpec::Identity => SymmetryConstraint::identity(n_tunables),
            SymmetrySpec::Mirror => SymmetryConstraint::mirror(kind, n),
        }
    }
}

/// Penalty keeping the impurity chain away from effectively non-interacting
/// solutions; mirrors the library's defaults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PenaltySpec {
    #[serde(default = "default_penalty_fraction")]
    pub threshold_fraction: f64,
    #[serde(default = "default_penalty_weight")]
    pub weight: f64,
}

impl PenaltySpec {
    pub fn to_core(self) -> PamPenalty<f64> {
        PamPenalty {
            threshold_fraction: self.threshold_fraction,
            weight: self.weight,
        }
    }
}

/// Optimizer settings. A budget of zero switches the solve command to
/// verify-only mode: the model block's couplings are taken as the solution.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct AnnealBlock {
    #[serde(default = "default_schedule")]
    pub schedule: ScheduleSpec,
    pub budget: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_at_fidelity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptance: Option<AcceptanceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
}

impl Default for AnnealBlock {
    /// Verify-only stance: zero budget until a flag or file says otherwise.
    fn default() -> Self {
        Self {
            schedule: default_schedule(),
            budget: 0,
            seeds: default_seeds(),
            thresholds: None,
            stop_at_fidelity: None,
            acceptance: None,
            initial: None,
        }
    }
}

impl AnnealBlock {
    pub fn to_core(&self) -> Result<AnnealConfig64, Failure> {
        let acceptance = match &self.acceptance {
            None => AcceptanceTemperature::Annealed,
            Some(a) => a.to_core()?,
        };
        let initial = match &self.initial {
            None => InitialPoint::ScheduleDefault,
            Some(i) => i.to_core()?,
        };
        Ok(AnnealConfig64 {
            schedule: self.schedule.to_core()?,
            acceptance,
            initial,
            max_function_calls: self.budget,
            thresholds: self.thresholds.clone().unwrap_or_else(default_thresholds),
            stop_at_fidelity: self.stop_at_fidelity,
        })
    }
}

/// Either a preset name ("primitive" or "dual") or a full schedule table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Preset(String),
    Detailed(ScheduleDetail),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "kebab-case",
    rename_all_fields = "kebab-case",
    deny_unknown_fields
)]
pub enum ScheduleDetail {
    Primitive {
        #[serde(default = "default_plateau_max")]
        t_max: f64,
        #[serde(default = "default_plateau_min")]
        t_min: f64,
        #[serde(default = "default_plateau_steps")]
        steps: usize,
    },
    Dual {
        #[serde(default = "default_visit_shape")]
        q_v: f64,
        #[serde(default = "default_visit_temp")]
        initial_visit_temp: f64,
        #[serde(default)]
        reanneal_patience: Option<usize>,
        #[serde(default = "default_restart_factor")]
        restart_factor: f64,
    },
}

impl ScheduleSpec {
    pub fn to_core(&self) -> Result<Schedule<f64>, Failure> {
        match self {
            ScheduleSpec::Preset(name) => match name.as_str() {
                "primitive" => Ok(Schedule::primitive_default()),
                "dual" => Ok(Schedule::dual_default()),
                other => Err(Failure::config(format!(
                    "unknown schedule preset '{other}': expected \"primitive\" or \"dual\""
                ))),
            },
            ScheduleSpec::Detailed(ScheduleDetail::Primitive { t_max, t_min, steps }) => {
                Ok(Schedule::Primitive {
                    t_max: *t_max,
                    t_min: *t_min,
                    steps: *steps,
                })
            }
            ScheduleSpec::Detailed(ScheduleDetail::Dual {
                q_v,
                initial_visit_temp,
                reanneal_patience,
                restart_factor,
            }) => Ok(Schedule::Dual {
                q_v: *q_v,
                initial_visit_temp: *initial_visit_temp,
                reanneal_patience: *reanneal_patience,
                restart_factor: *restart_factor,
            }),
        }
    }
}

/// "annealed" or a fixed acceptance temperature `{ fixed = 0.05 }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AcceptanceSpec {
    Preset(String),
    Fixed { fixed: f64 },
}

impl AcceptanceSpec {
    pub fn to_core(&self) -> Result<AcceptanceTemperature<f64>, Failure> {
        match self {
            AcceptanceSpec::Preset(name) if name == "annealed" => {
                Ok(AcceptanceTemperature::Annealed)
            }
            AcceptanceSpec::Preset(other) => Err(Failure::config(format!(
                "unknown acceptance '{other}': expected \"annealed\" or {{ fixed = T }}"
            ))),
            AcceptanceSpec::Fixed { fixed } => Ok(AcceptanceTemperature::Fixed { value: *fixed }),
        }
    }
}

/// "schedule-default", "from-template", or explicit `{ values = [...] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Preset(String),
    Explicit { values: Vec<f64> },
}

impl InitialSpec {
    pub fn to_core(&self) -> Result<InitialPoint<f64>, Failure> {
        match self {
            InitialSpec::Preset(name) => match name.as_str() {
                "schedule-default" => Ok(InitialPoint::ScheduleDefault),
                "from-template" => Ok(InitialPoint::FromTemplate),
                other => Err(Failure::config(format!(
                    "unknown initial point '{other}': expected \"schedule-default\", \
                     \"from-template\", or {{ values = [...] }}"
                ))),
            },
            InitialSpec::Explicit { values } => Ok(InitialPoint::Explicit {
                values: values.clone(),
            }),
        }
    }
}

/// Where result files go and how densely run traces are persisted.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct OutputBlock {
    pub directory: PathBuf,
    /// Solution file name, relative to the directory.
    pub solution: String,
    /// Keep every k-th trace point when persisting run records; the final
    /// point always survives.
    pub trace_stride: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            solution: default_solution_name(),
            trace_stride: 1,
        }
    }
}

/// Convergence benchmark: the end-to-end transfer on a range of chain
/// lengths, many independently seeded runs each.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BenchBlock {
    pub kind: ModelKind,
    #[serde(default = "one")]
    pub n_exc: usize,
    pub sizes: Vec<usize>,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
    pub n_runs: usize,
    pub budget: BudgetRule,
    #[serde(default)]
    pub symmetric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltySpec>,
    #[serde(default)]
    pub seed: u64,
    /// Threshold whose median calls feed the exponential fit; defaults to
    /// the highest one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_threshold: Option<f64>,
}

/// All-pairs transfer matrix on a single-excitation cavity-emitter chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PairsBlock {
    pub n: usize,
    pub budget: usize,
    #[serde(default)]
    pub symmetric: bool,
    #[serde(default = "one")]
    pub runs_per_cell: usize,
    #[serde(default)]
    pub seed: u64,
}

/// On-site repulsion sweep around a fixed impurity-chain coupling set; the
/// couplings come from the [model] block, the grid from here.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct UsweepBlock {
    pub resolution: usize,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_coarse_points")]
    pub coarse_points: usize,
    pub targets: Vec<TargetSpec>,
}

/// Several simultaneous mirror-pair transfers sharing one coupling set.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct MultiBlock {
    pub n: usize,
    pub n_exc: usize,
    pub targets_min: usize,
    pub targets_max: usize,
    pub n_runs: usize,
    pub budget: usize,
    #[serde(default = "default_curve_points")]
    pub curve_points: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Basis index of an occupation descriptor such as "c1 c1", "e3", or
/// "up@c1 down@d4".
pub fn parse_state(descriptor: &str, basis: &Basis) -> Result<usize, Failure> {
    let kind = basis.model();
    let n = basis.n_sites();
    let tokens: Vec<&str> = descriptor.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Failure::config("empty state descriptor"));
    }
    let state = match kind {
        ModelKind::CavityOnly | ModelKind::Jch => {
            if tokens.len() != basis.n_exc() {
                return Err(Failure::config(format!(
                    "state '{descriptor}' lists {} excitation(s) but the sector holds {}",
                    tokens.len(),
                    basis.n_exc()
                )));
            }
            let mut modes = tokens
                .iter()
                .map(|t| parse_mode(t, kind, n))
                .collect::<Result<Vec<_>, _>>()?;
            modes.sort_unstable();
            BasisState::Excitations(modes)
        }
        ModelKind::Pam => match basis.n_exc() {
            1 => {
                if tokens.len() != 1 {
                    return Err(Failure::config(format!(
                        "state '{descriptor}' must name exactly one orbital"
                    )));
                }
                BasisState::Electron(parse_mode(tokens[0], kind, n)?)
            }
            _ => {
                let mut up = None;
                let mut down = None;
                for token in &tokens {
                    if let Some(rest) = token.strip_prefix("up@") {
                        up = Some(parse_mode(rest, kind, n)?);
                    } else if let Some(rest) = token.strip_prefix("down@") {
                        down = Some(parse_mode(rest, kind, n)?);
                    } else {
                        return Err(Failure::config(format!(
                            "token '{token}' in '{descriptor}' must start with 'up@' or 'down@'"
                        )));
                    }
                }
                match (up, down) {
                    (Some(up), Some(down)) => BasisState::ElectronPair { up, down },
                    _ => {
                        return Err(Failure::config(format!(
                            "state '{descriptor}' needs one 'up@' and one 'down@' orbital"
                        )))
                    }
                }
            }
        },
    };
    basis.index_of(&state).ok_or_else(|| {
        Failure::config(format!(
            "state '{descriptor}' is not in the {n}-site {} basis with {} excitation(s)",
            kind.name(),
            basis.n_exc()
        ))
    })
}

/// Mode index of a token like "c3" (cavity / conduction site), "e2"
/// (emitter), or "d2" (localized orbital); sites are 1-based.
fn parse_mode(token: &str, kind: ModelKind, n: usize) -> Result<u16, Failure> {
    let expected = match kind {
        ModelKind::CavityOnly => "'c<site>'",
        ModelKind::Jch => "'c<site>' or 'e<site>'",
        ModelKind::Pam => "'c<site>' or 'd<site>'",
    };
    let err = || Failure::config(format!("unrecognized mode '{token}': expected {expected}"));
    let mut chars = token.chars();
    let prefix = chars.next().ok_or_else(err)?;
    let site: usize = chars.as_str().parse().map_err(|_| err())?;
    if site == 0 || site > n {
        return Err(Failure::config(format!(
            "mode '{token}' is outside the {n}-site chain"
        )));
    }
    let offset = match (kind, prefix) {
        (ModelKind::CavityOnly, 'c') | (ModelKind::Jch, 'c') | (ModelKind::Pam, 'c') => 0,
        (ModelKind::Jch, 'e') | (ModelKind::Pam, 'd') => n,
        _ => return Err(err()),
    };
    Ok((offset + site - 1) as u16)
}

/// Resolves descriptor pairs into transfer targets against `basis`.
pub fn resolve_targets(
    specs: &[TargetSpec],
    basis: &Basis,
) -> Result<Vec<TransferTarget>, Failure> {
    specs
        .iter()
        .map(|spec| {
            let from = parse_state(&spec.from, basis)?;
            let to = parse_state(&spec.to, basis)?;
            if from == to {
                Ok(TransferTarget::returning(from))
            } else {
                TransferTarget::new(from, to).map_err(Failure::from)
            }
        })
        .collect()
}

/// Everything the solve command needs, assembled from the config blocks.
pub struct ResolvedSolve {
    pub objective: Objective64,
    pub anneal: AnnealConfig64,
    pub seeds: Vec<u64>,
    pub verify_window: f64,
    pub verify_points: usize,
}

pub fn resolve_solve(config: &FileConfig) -> Result<ResolvedSolve, Failure> {
    let model = config.model()?;
    let objective_block = config.objective()?;
    let anneal_block = config.anneal()?;
    if objective_block.targets.is_empty() {
        return Err(Failure::config(
            "objective.targets must list at least one transfer",
        ));
    }
    if anneal_block.budget > 0 && anneal_block.seeds.is_empty() {
        return Err(Failure::config("anneal.seeds must not be empty"));
    }
    let basis = model.basis()?;
    let template = model.build_params()?;
    let targets = resolve_targets(&objective_block.targets, &basis)?;
    let symmetry = objective_block
        .symmetry
        .to_core(model.kind, model.n, template.tunable_len());
    let bounds = objective_block
        .bounds
        .clone()
        .unwrap_or(BoundsSpec::Default);
    let penalty = objective_block.penalty.map(PenaltySpec::to_core);
    let objective = Objective::new(
        template,
        basis,
        targets,
        symmetry,
        bounds,
        penalty,
        objective_block.evolution_time,
    )?;
    Ok(ResolvedSolve {
        objective,
        anneal: anneal_block.to_core()?,
        seeds: anneal_block.seeds.clone(),
        verify_window: objective_block.verify_window(),
        verify_points: objective_block.verify_points,
    })
}
