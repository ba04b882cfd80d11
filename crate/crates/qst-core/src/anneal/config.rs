//! Annealer configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::anneal::visit::DEFAULT_VISIT_SHAPE;

/// Default thresholds whose first-attainment call counts are logged.
pub const DEFAULT_THRESHOLDS: [f64; 3] = [0.95, 0.98, 0.99];

/// Cooling strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Schedule<T: Real> {
    /// Logarithmic interpolation from `t_max` down to `t_min` over `steps`
    /// equal plateaus spread across the call budget.
    Primitive { t_max: T, t_min: T, steps: usize },
    /// Generalized simulated annealing: visiting temperature decays as
    /// `t0 * (2^(q-1) - 1) / ((1+k)^(q-1) - 1)` over sweep index `k`, restarts
    /// rewind `k` by `restart_factor` after a patience of non-improving
    /// evaluations (default 50 per tunable) while restoring the best point.
    Dual {
        q_v: T,
        initial_visit_temp: T,
        reanneal_patience: Option<usize>,
        restart_factor: T,
    },
}

impl<T: Real> Schedule<T> {
    /// The paper's primitive schedule: 100 plateaus from 100 down to 0.1.
    pub fn primitive_default() -> Self {
        Schedule::Primitive { t_max: T::of(100.0), t_min: T::of(0.1), steps: 100 }
    }

    /// Generalized annealing with the standard shape and a hot start.
    pub fn dual_default() -> Self {
        Schedule::Dual {
            q_v: T::of(DEFAULT_VISIT_SHAPE),
            initial_visit_temp: T::of(5230.0),
            reanneal_patience: None,
            restart_factor: T::of(0.1),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Schedule::Primitive { t_max, t_min, steps } => {
                if !(t_max > t_min && t_min > T::zero()) || !t_max.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "need t_max > t_min > 0, got t_max {} t_min {}",
                        t_max.as_f64(),
                        t_min.as_f64()
                    )));
                }
                if steps == 0 {
                    return Err(Error::InvalidConfig("steps must be positive".into()));
                }
            }
            Schedule::Dual { q_v, initial_visit_temp, reanneal_patience, restart_factor } => {
                if !(q_v > T::one() && q_v < T::of(3.0)) {
                    return Err(Error::InvalidConfig(format!(
                        "visiting shape must lie in (1, 3), got {}",
                        q_v.as_f64()
                    )));
                }
                if !(initial_visit_temp > T::zero()) || !initial_visit_temp.is_finite() {
                    return Err(Error::InvalidTemperature(initial_visit_temp.as_f64()));
                }
                if reanneal_patience == Some(0) {
                    return Err(Error::InvalidConfig(
                        "reanneal patience must be positive".into(),
                    ));
                }
                if !(restart_factor > T::zero() && restart_factor <= T::one()) {
                    return Err(Error::InvalidConfig(format!(
                        "restart factor must lie in (0, 1], got {}",
                        restart_factor.as_f64()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Temperature entering the acceptance rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AcceptanceTemperature<T: Real> {
    /// Follow the cooling schedule: the plateau temperature for the primitive
    /// annealer, the visiting temperature divided by the sweep index for the
    /// dual annealer.
    Annealed,
    /// Constant temperature.
    Fixed { value: T },
}

/// Where a run starts in parameter space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialPoint<T: Real> {
    /// The schedule's own convention: all parameters at 1 for the primitive
    /// annealer, uniform random within bounds for the dual annealer.
    ScheduleDefault,
    /// Start from the objective's template parameter values.
    FromTemplate,
    /// Explicit free-parameter vector.
    Explicit { values: Vec<T> },
}

/// Full optimizer configuration; the seed is supplied per run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig<T: Real> {
    pub schedule: Schedule<T>,
    pub acceptance: AcceptanceTemperature<T>,
    pub initial: InitialPoint<T>,
    /// Total evaluation budget, counting the initial evaluation and every
    /// proposal whether accepted or not.
    pub max_function_calls: usize,
    /// Fidelity levels logged with their first-attainment call count;
    /// strictly increasing, each in (0, 1].
    pub thresholds: Vec<T>,
    /// Stop early once the best mean fidelity reaches this level.
    pub stop_at_fidelity: Option<T>,
}

impl<T: Real> AnnealConfig<T> {
    /// Primitive annealing with default schedule and thresholds.
    pub fn primitive(max_function_calls: usize) -> Self {
        Self::with_schedule(Schedule::primitive_default(), max_function_calls)
    }

    /// Dual annealing with default schedule and thresholds.
    pub fn dual(max_function_calls: usize) -> Self {
        Self::with_schedule(Schedule::dual_default(), max_function_calls)
    }

    fn with_schedule(schedule: Schedule<T>, max_function_calls: usize) -> Self {
        Self {
            schedule,
            acceptance: AcceptanceTemperature::Annealed,
            initial: InitialPoint::ScheduleDefault,
            max_function_calls,
            thresholds: DEFAULT_THRESHOLDS.iter().map(|&t| T::of(t)).collect(),
            stop_at_fidelity: None,
        }
    }

    pub fn validate(&self, n_free: usize) -> Result<()> {
        self.schedule.validate()?;
        if self.max_function_calls == 0 {
            return Err(Error::InvalidConfig("call budget must be positive".into()));
        }
        if let AcceptanceTemperature::Fixed { value } = self.acceptance {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::InvalidTemperature(value.as_f64()));
            }
        }
        if let InitialPoint::Explicit { values } = &self.initial {
            if values.len() != n_free {
                return Err(Error::InvalidConfig(format!(
                    "initial point has {} values but the objective has {} free parameters",
                    values.len(),
                    n_free
                )));
            }
        }
        for pair in self.thresholds.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidConfig(
                    "thresholds must be strictly increasing".into(),
                ));
            }
        }
        for &t in &self.thresholds {
            if !(t > T::zero() && t <= T::one()) {
                return Err(Error::InvalidConfig(format!(
                    "thresholds must lie in (0, 1], got {}",
                    t.as_f64()
                )));
            }
        }
        if let Some(stop) = self.stop_at_fidelity {
            if !(stop > T::zero() && stop <= T::one()) {
                return Err(Error::InvalidConfig(format!(
                    "stop fidelity must lie in (0, 1], got {}",
                    stop.as_f64()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass_validation() {
        AnnealConfig::<f64>::primitive(1000).validate(3).unwrap();
        AnnealConfig::<f64>::dual(1000).validate(3).unwrap();
    }

    #[test]
    fn bad_settings_are_rejected() {
        let mut c = AnnealConfig::<f64>::dual(1000);
        c.max_function_calls = 0;
        assert!(c.validate(3).is_err());

        let mut c = AnnealConfig::<f64>::dual(1000);
        c.schedule = Schedule::Dual {
            q_v: 3.0,
            initial_visit_temp: 5230.0,
            reanneal_patience: None,
            restart_factor: 0.1,
        };
        assert!(c.validate(3).is_err());

        let mut c = AnnealConfig::<f64>::primitive(1000);
        c.schedule = Schedule::Primitive { t_max: 0.1, t_min: 100.0, steps: 10 };
        assert!(c.validate(3).is_err());

        let mut c = AnnealConfig::<f64>::dual(1000);
        c.thresholds = vec![0.95, 0.95];
        assert!(c.validate(3).is_err());

        let mut c = AnnealConfig::<f64>::dual(1000);
        c.initial = InitialPoint::Explicit { values: vec![1.0, 2.0] };
        assert!(c.validate(3).is_err());
        assert!(c.validate(2).is_ok());

        let mut c = AnnealConfig::<f64>::dual(1000);
        c.stop_at_fidelity = Some(1.5);
        assert!(c.validate(3).is_err());
    }

    #[test]
    fn configs_round_trip_through_serde() {
        let c = AnnealConfig::<f64>::dual(5000);
        let json = serde_json::to_string(&c).unwrap();
        let back: AnnealConfig<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
    }
}
