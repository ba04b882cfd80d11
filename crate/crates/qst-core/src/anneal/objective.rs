//! The optimization objective: a parameterized Hamiltonian, transfer targets,
//! bounds, and the machinery to score one parameter vector cheaply.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{propagator_column_parts, sym_eigen_in_place, TransferTarget};
use crate::model::{
    Basis, HamiltonianStructure, ModelKind, ModelParams, PamParams, SymmetryConstraint,
};
use crate::scalar::Real;

/// Default search range for couplings, in units of the evolution time.
pub const DEFAULT_COUPLING_BOUNDS: (f64, f64) = (0.0, 50.0);
/// Default search range for the impurity chain's on-site interactions.
pub const DEFAULT_INTERACTION_BOUNDS: (f64, f64) = (0.0, 150.0);

/// Penalty disfavoring trivially non-interacting impurity-chain solutions:
/// applied when the smaller on-site interaction falls below
/// `threshold_fraction` times the mean coupling magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PamPenalty<T: Real> {
    pub threshold_fraction: T,
    pub weight: T,
}

impl<T: Real> Default for PamPenalty<T> {
    fn default() -> Self {
        Self { threshold_fraction: T::of(0.1), weight: T::one() }
    }
}

impl<T: Real> PamPenalty<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold_fraction > T::zero() && self.threshold_fraction < T::one()) {
            return Err(Error::InvalidConfig(format!(
                "penalty threshold fraction must lie in (0, 1), got {}",
                self.threshold_fraction.as_f64()
            )));
        }
        if !(self.weight > T::zero()) || !self.weight.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "penalty weight must be positive, got {}",
                self.weight.as_f64()
            )));
        }
        Ok(())
    }

    /// Penalty added for interaction floor `u_min` against `threshold`;
    /// quadratic in the normalized deficit, zero at or above the threshold.
    fn amount(&self, u_min: T, threshold: T) -> T {
        if threshold > T::zero() && u_min < threshold {
            let deficit = (threshold - u_min) / threshold;
            self.weight * deficit * deficit
        } else {
            T::zero()
        }
    }
}

/// Adds the interaction-floor penalty to an action value, judging the
/// parameters exactly as the optimizer does.
pub fn apply_pam_penalty<T: Real>(s: T, params: &PamParams<T>, penalty: &PamPenalty<T>) -> T {
    let mean = mean_abs(params.hoppings.iter().chain(&params.hybridizations));
    s + penalty.amount(
        params.u_conduction.min(params.u_localized),
        penalty.threshold_fraction * mean,
    )
}

fn mean_abs<'a, T: Real>(values: impl Iterator<Item = &'a T>) -> T {
    let mut sum = T::zero();
    let mut count = 0usize;
    for &v in values {
        sum += v.abs();
        count += 1;
    }
    if count == 0 {
        T::zero()
    } else {
        sum / T::of(count as f64)
    }
}

/// How search bounds are specified when building an [`Objective`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundsSpec<T: Real> {
    /// [`DEFAULT_COUPLING_BOUNDS`] for couplings and
    /// [`DEFAULT_INTERACTION_BOUNDS`] for interactions.
    Default,
    /// One range for every free parameter.
    Uniform { lo: T, hi: T },
    /// Explicit per-free-parameter ranges.
    PerParameter { ranges: Vec<(T, T)> },
}

/// Result of scoring one parameter vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation<T: Real> {
    /// Raw action at unit acceptance temperature, penalty included.
    pub action: T,
    /// Mean transfer fidelity over the targets.
    pub mean_fidelity: T,
}

/// Reusable buffers for [`Objective::evaluate`]; one per running chain.
#[derive(Clone, Debug)]
pub struct Workspace<T: Real> {
    tunables: Vec<T>,
    slots: Vec<T>,
    h: DMatrix<T>,
    eigenvalues: Vec<T>,
    scratch: Vec<T>,
    phase_cos: Vec<T>,
    phase_sin: Vec<T>,
    re: Vec<T>,
    im: Vec<T>,
}

impl<T: Real> Workspace<T> {
    pub fn new(objective: &Objective<T>) -> Self {
        let dim = objective.basis.dim();
        let n_tunables = objective.symmetry.n_params();
        Self {
            tunables: vec![T::zero(); n_tunables],
            slots: vec![T::zero(); objective.structure.n_slots()],
            h: DMatrix::zeros(dim, dim),
            eigenvalues: vec![T::zero(); dim],
            scratch: vec![T::zero(); dim],
            phase_cos: vec![T::zero(); dim],
            phase_sin: vec![T::zero(); dim],
            re: vec![T::zero(); dim],
            im: vec![T::zero(); dim],
        }
    }
}

/// A complete search problem: which parameters may vary, what transfer they
/// should produce, and how proposals are scored.
#[derive(Clone, Debug)]
pub struct Objective<T: Real> {
    template: ModelParams<T>,
    basis: Basis,
    targets: Vec<TransferTarget>,
    symmetry: SymmetryConstraint,
    bounds: Vec<(T, T)>,
    penalty: Option<PamPenalty<T>>,
    evolution_time: T,
    structure: HamiltonianStructure<T>,
    /// Fixed slot values (site/emitter energies) following the tunables.
    fixed_slots: Vec<T>,
}

impl<T: Real> Objective<T> {
    /// Builds and validates a search problem.
    ///
    /// The targets must live in `basis` and read distinct source columns; the
    /// symmetry constraint must cover exactly the template's tunables; with
    /// `BoundsSpec::Default`, orbits over impurity-chain interaction slots
    /// get the interaction range and all others the coupling range.
    pub fn new(
        template: ModelParams<T>,
        basis: Basis,
        targets: Vec<TransferTarget>,
        symmetry: SymmetryConstraint,
        bounds: BoundsSpec<T>,
        penalty: Option<PamPenalty<T>>,
        evolution_time: T,
    ) -> Result<Self> {
        template.validate()?;
        if template.kind() != basis.model() || template.n_sites() != basis.n_sites() {
            return Err(Error::ParamMismatch(format!(
                "parameters describe {} sites of the {} model but the basis holds {} sites of {}",
                template.n_sites(),
                template.kind().name(),
                basis.n_sites(),
                basis.model().name()
            )));
        }
        if symmetry.n_params() != template.tunable_len() {
            return Err(Error::ParamMismatch(format!(
                "symmetry constraint covers {} parameters but the model has {} tunables",
                symmetry.n_params(),
                template.tunable_len()
            )));
        }
        if targets.is_empty() {
            return Err(Error::InvalidTarget(
                "at least one transfer target is required".into(),
            ));
        }
        for (i, t) in targets.iter().enumerate() {
            t.check_dim(basis.dim())?;
            if targets[..i].iter().any(|e| e.from_index() == t.from_index()) {
                return Err(Error::InvalidTarget(format!(
                    "source column {} appears in more than one target",
                    t.from_index()
                )));
            }
        }
        if let Some(p) = &penalty {
            p.validate()?;
            if template.kind() != ModelKind::Pam {
                return Err(Error::InvalidConfig(
                    "the interaction-floor penalty applies only to the impurity chain".into(),
                ));
            }
        }
        if !(evolution_time >= T::zero()) || !evolution_time.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "evolution time must be finite and nonnegative, got {}",
                evolution_time.as_f64()
            )));
        }
        let bounds = resolve_bounds(&bounds, &template, &symmetry)?;
        let structure = HamiltonianStructure::new(&basis);
        let full = template.full_slots();
        let fixed_slots = full[template.tunable_len()..].to_vec();
        Ok(Self {
            template,
            basis,
            targets,
            symmetry,
            bounds,
            penalty,
            evolution_time,
            structure,
            fixed_slots,
        })
    }

    /// End-to-end transfer with everything else at defaults: the excitations
    /// start stacked on the leftmost top-row site and must arrive stacked on
    /// the rightmost one at `t = 1`, all couplings free, identity symmetry,
    /// default bounds, no penalty.
    pub fn end_to_end(template: ModelParams<T>, basis: Basis) -> Result<Self> {
        let n = basis.n_sites();
        let corner = |site: usize| {
            basis.stacked_state(site).ok_or_else(|| {
                Error::InvalidTarget(format!("no stacked state at site {site}"))
            })
        };
        let targets = vec![TransferTarget::new(corner(0)?, corner(n - 1)?)?];
        let symmetry = SymmetryConstraint::identity(template.tunable_len());
        Self::new(template, basis, targets, symmetry, BoundsSpec::Default, None, T::one())
    }

    pub fn n_free(&self) -> usize {
        self.symmetry.n_free()
    }

    pub fn bounds(&self) -> &[(T, T)] {
        &self.bounds
    }

    pub fn targets(&self) -> &[TransferTarget] {
        &self.targets
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn template(&self) -> &ModelParams<T> {
        &self.template
    }

    pub fn symmetry(&self) -> &SymmetryConstraint {
        &self.symmetry
    }

    pub fn penalty(&self) -> Option<&PamPenalty<T>> {
        self.penalty.as_ref()
    }

    pub fn evolution_time(&self) -> T {
        self.evolution_time
    }

    /// The template's tunables reduced to free space (orbit representatives).
    pub fn template_free_params(&self) -> Vec<T> {
        self.symmetry.reduce(&self.template.tunables())
    }

    /// Full model parameters for a free-parameter vector.
    pub fn params_for(&self, free: &[T]) -> Result<ModelParams<T>> {
        let mut tunables = vec![T::zero(); self.symmetry.n_params()];
        self.symmetry.expand_into(free, &mut tunables);
        self.template.with_tunables(&tunables)
    }

    /// Scores one free-parameter vector: assembles the Hamiltonian,
    /// diagonalizes it in place, forms the targeted propagator columns at the
    /// evolution time, and returns action plus mean fidelity. One call of
    /// this function is the unit in which budgets are counted.
    pub fn evaluate(&self, free: &[T], ws: &mut Workspace<T>) -> Result<Evaluation<T>> {
        assert_eq!(free.len(), self.n_free(), "free parameter count");
        self.symmetry.expand_into(free, &mut ws.tunables);
        let n_tunables = ws.tunables.len();
        ws.slots[..n_tunables].copy_from_slice(&ws.tunables);
        ws.slots[n_tunables..].copy_from_slice(&self.fixed_slots);
        self.structure.fill(&ws.slots, &mut ws.h);

        let dim = self.basis.dim();
        sym_eigen_in_place(dim, ws.h.as_mut_slice(), &mut ws.eigenvalues, &mut ws.scratch)?;

        // phases are shared by all targets
        for k in 0..dim {
            let angle = -ws.eigenvalues[k] * self.evolution_time;
            ws.phase_cos[k] = angle.cos();
            ws.phase_sin[k] = angle.sin();
        }

        let vectors = ws.h.as_slice();
        let mut action_sum = T::zero();
        let mut fidelity_sum = T::zero();
        for target in &self.targets {
            propagator_column_parts(
                dim,
                vectors,
                &ws.phase_cos,
                &ws.phase_sin,
                target.from_index(),
                &mut ws.re,
                &mut ws.im,
            );
            for a in 0..dim {
                let magnitude = (ws.re[a] * ws.re[a] + ws.im[a] * ws.im[a]).sqrt();
                let ideal = if a == target.to_index() { T::one() } else { T::zero() };
                let diff = ideal - magnitude;
                action_sum += diff * diff;
            }
            let to = target.to_index();
            fidelity_sum += ws.re[to] * ws.re[to] + ws.im[to] * ws.im[to];
        }
        let n_targets = T::of(self.targets.len() as f64);
        let mut action = action_sum / n_targets;
        let mean_fidelity = (fidelity_sum / n_targets).min(T::one());

        if let Some(penalty) = &self.penalty {
            let n = self.basis.n_sites();
            let (hoppings, hybridizations) = ws.tunables[..2 * n - 1].split_at(n - 1);
            let mean = mean_abs(hoppings.iter().chain(hybridizations));
            let u_min = ws.tunables[2 * n - 1].min(ws.tunables[2 * n]);
            action += penalty.amount(u_min, penalty.threshold_fraction * mean);
        }
        Ok(Evaluation { action, mean_fidelity })
    }
}

/// Expands a bounds specification to per-free-parameter ranges.
fn resolve_bounds<T: Real>(
    spec: &BoundsSpec<T>,
    template: &ModelParams<T>,
    symmetry: &SymmetryConstraint,
) -> Result<Vec<(T, T)>> {
    let check = |lo: T, hi: T| -> Result<(T, T)> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidBounds(format!(
                "need finite lo < hi, got [{}, {}]",
                lo.as_f64(),
                hi.as_f64()
            )));
        }
        Ok((lo, hi))
    };
    match spec {
        BoundsSpec::Default => {
            let coupling =
                (T::of(DEFAULT_COUPLING_BOUNDS.0), T::of(DEFAULT_COUPLING_BOUNDS.1));
            let interaction = (
                T::of(DEFAULT_INTERACTION_BOUNDS.0),
                T::of(DEFAULT_INTERACTION_BOUNDS.1),
            );
            let first_interaction = match template.kind() {
                ModelKind::Pam => 2 * template.n_sites() - 1,
                _ => usize::MAX,
            };
            symmetry
                .orbits()
                .iter()
                .map(|orbit| {
                    let kinds: Vec<bool> =
                        orbit.iter().map(|&i| i >= first_interaction).collect();
                    if kinds.iter().any(|&k| k != kinds[0]) {
                        return Err(Error::InvalidBounds(
                            "an orbit mixes couplings and interactions; default bounds are \
                             ambiguous, use explicit bounds"
                                .into(),
                        ));
                    }
                    Ok(if kinds[0] { interaction } else { coupling })
                })
                .collect()
        }
        BoundsSpec::Uniform { lo, hi } => {
            let range = check(*lo, *hi)?;
            Ok(vec![range; symmetry.n_free()])
        }
        BoundsSpec::PerParameter { ranges } => {
            if ranges.len() != symmetry.n_free() {
                return Err(Error::InvalidBounds(format!(
                    "{} ranges given but the objective has {} free parameters",
                    ranges.len(),
                    symmetry.n_free()
                )));
            }
            ranges.iter().map(|&(lo, hi)| check(lo, hi)).collect()
        }
    }
}
