//! The baseline annealer: cyclic single-parameter proposals on a logarithmic
//! temperature ladder, accepted by the heat-bath rule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::accept::heat_bath_accept;
use super::config::{AcceptanceTemperature, AnnealConfig, InitialPoint, Schedule};
use super::objective::{Objective, Workspace};
use super::record::{Recorder, RunRecord};
use super::visit::reflect_into_bounds;

/// Resolves a configured starting point, with `fallback` supplying the
/// schedule's own convention. Derived points are clamped into bounds;
/// explicit points outside them are rejected.
pub(super) fn starting_point<T: Real>(
    objective: &Objective<T>,
    initial: &InitialPoint<T>,
    fallback: impl FnOnce() -> Vec<T>,
) -> Result<Vec<T>> {
    let clamped = |values: Vec<T>| {
        values
            .into_iter()
            .zip(objective.bounds())
            .map(|(v, &(lo, hi))| v.max(lo).min(hi))
            .collect()
    };
    match initial {
        InitialPoint::ScheduleDefault => Ok(clamped(fallback())),
        InitialPoint::FromTemplate => Ok(clamped(objective.template_free_params())),
        InitialPoint::Explicit { values } => {
            for (v, &(lo, hi)) in values.iter().zip(objective.bounds()) {
                if !(*v >= lo && *v <= hi) {
                    return Err(Error::InvalidConfig(format!(
                        "explicit start value {} escapes the bounds [{}, {}]",
                        v.as_f64(),
                        lo.as_f64(),
                        hi.as_f64()
                    )));
                }
            }
            Ok(values.clone())
        }
    }
}

/// Minimizes the objective with single-parameter moves: parameters are
/// perturbed cyclically by a uniform step whose scale tracks the plateau
/// temperature, and moves are kept with probability
/// `exp(-dS/T) / (1 + exp(-dS/T))`. The plateau index advances with the
/// fraction of the call budget already spent.
pub fn primitive_anneal<T: Real>(
    objective: &Objective<T>,
    config: &AnnealConfig<T>,
    seed: u64,
) -> Result<RunRecord<T>> {
    config.validate(objective.n_free())?;
    let (t_max, t_min, steps) = match config.schedule {
        Schedule::Primitive { t_max, t_min, steps } => (t_max, t_min, steps),
        Schedule::Dual { .. } => {
            return Err(Error::InvalidConfig(
                "the primitive annealer requires a primitive cooling schedule".into(),
            ))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ws = Workspace::new(objective);
    let n_free = objective.n_free();
    let budget = config.max_function_calls;

    let mut current = starting_point(objective, &config.initial, || vec![T::one(); n_free])?;
    let mut recorder = Recorder::new(budget, &config.thresholds, config.stop_at_fidelity);
    let first = objective.evaluate(&current, &mut ws)?;
    let mut current_action = first.action;
    let mut running = recorder.observe(&current, first.action, first.mean_fidelity);

    let ratio = t_min / t_max;
    let mut proposal = current.clone();
    let mut cursor = 0usize;
    while running {
        let spent = recorder.calls as f64 / budget as f64;
        let plateau = ((spent * steps as f64) as usize).min(steps - 1);
        let temperature = if steps == 1 {
            t_max
        } else {
            t_max * ratio.powf(T::of(plateau as f64 / (steps - 1) as f64))
        };
        let accept_temp = match config.acceptance {
            AcceptanceTemperature::Annealed => temperature,
            AcceptanceTemperature::Fixed { value } => value,
        };

        let j = cursor % n_free;
        cursor += 1;
        let (lo, hi) = objective.bounds()[j];
        let offset = (T::of(2.0) * T::unit_uniform(&mut rng) - T::one())
            * (hi - lo)
            * (temperature / t_max);
        proposal.copy_from_slice(&current);
        proposal[j] = reflect_into_bounds(current[j] + offset, lo, hi);

        let eval = objective.evaluate(&proposal, &mut ws)?;
        running = recorder.observe(&proposal, eval.action, eval.mean_fidelity);
        if heat_bath_accept((eval.action - current_action) / accept_temp, &mut rng) {
            current[j] = proposal[j];
            current_action = eval.action;
        }
    }

    let best_params = objective.params_for(&recorder.best_free)?;
    Ok(recorder.finish(seed, best_params))
}
