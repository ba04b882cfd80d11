//! Monte Carlo search over Hamiltonian parameters: the objective and its
//! penalties, heat-bath acceptance, cooling schedules, two annealers, and
//! batch drivers.

mod accept;
mod config;
mod dual;
mod multi;
mod objective;
mod primitive;
mod record;
mod visit;

pub use accept::heat_bath_accept;
pub use config::{
    AcceptanceTemperature, AnnealConfig, InitialPoint, Schedule, DEFAULT_THRESHOLDS,
};
pub use dual::{dual_anneal, DEFAULT_PATIENCE_PER_TUNABLE};
pub use multi::{multi_run, optimize};
pub use objective::{
    apply_pam_penalty, BoundsSpec, Evaluation, Objective, PamPenalty, Workspace,
    DEFAULT_COUPLING_BOUNDS, DEFAULT_INTERACTION_BOUNDS,
};
pub use primitive::primitive_anneal;
pub use record::{RunRecord, ThresholdHit, TracePoint};
pub use visit::{cauchy_perturb, DEFAULT_VISIT_SHAPE};
