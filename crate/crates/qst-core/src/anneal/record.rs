//! Run records: everything a finished optimization reports.

use serde::{Deserialize, Serialize};

use crate::model::ModelParams;
use crate::scalar::Real;

/// One sample of the best-so-far state, appended whenever either best value
/// improves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint<T: Real> {
    pub calls: usize,
    pub best_action: T,
    pub best_fidelity: T,
}

/// First attainment of a fidelity threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdHit<T: Real> {
    pub threshold: T,
    pub calls: usize,
}

/// Outcome of a single annealing run.
///
/// `best_params` and `best_action` belong to the evaluation that minimized
/// the action (penalty included, acceptance temperature factored out), while
/// `best_fidelity` is the running maximum of the mean transfer fidelity over
/// all evaluations; with an active penalty the two optima can differ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord<T: Real> {
    pub seed: u64,
    pub best_params: ModelParams<T>,
    pub best_free_params: Vec<T>,
    pub best_action: T,
    pub best_fidelity: T,
    pub function_calls_used: usize,
    pub threshold_log: Vec<ThresholdHit<T>>,
    pub trace: Vec<TracePoint<T>>,
}

impl<T: Real> RunRecord<T> {
    /// Call count at which the running-best fidelity first reached
    /// `threshold`, if it ever did.
    pub fn calls_to_reach(&self, threshold: T) -> Option<usize> {
        self.threshold_log
            .iter()
            .find(|hit| hit.threshold >= threshold)
            .map(|hit| hit.calls)
    }
}

/// Budget bookkeeping shared by the annealers: counts calls, tracks both
/// running bests, logs threshold hits, and decides when to stop.
pub(crate) struct Recorder<T: Real> {
    budget: usize,
    thresholds: Vec<T>,
    stop_at_fidelity: Option<T>,
    pub(crate) calls: usize,
    pub(crate) best_action: T,
    pub(crate) best_fidelity: T,
    pub(crate) best_free: Vec<T>,
    hits: Vec<Option<usize>>,
    trace: Vec<TracePoint<T>>,
}

impl<T: Real> Recorder<T> {
    pub(crate) fn new(budget: usize, thresholds: &[T], stop_at_fidelity: Option<T>) -> Self {
        Self {
            budget,
            thresholds: thresholds.to_vec(),
            stop_at_fidelity,
            calls: 0,
            best_action: T::max_value().unwrap_or_else(T::one),
            best_fidelity: -T::one(),
            best_free: Vec::new(),
            hits: vec![None; thresholds.len()],
            trace: Vec::new(),
        }
    }

    /// Records one evaluation; returns `true` while the run should continue.
    pub(crate) fn observe(&mut self, free: &[T], action: T, fidelity: T) -> bool {
        self.calls += 1;
        let mut improved = false;
        if action < self.best_action {
            self.best_action = action;
            self.best_free.clear();
            self.best_free.extend_from_slice(free);
            improved = true;
        }
        if fidelity > self.best_fidelity {
            self.best_fidelity = fidelity;
            for (i, &t) in self.thresholds.iter().enumerate() {
                if self.hits[i].is_none() && fidelity >= t {
                    self.hits[i] = Some(self.calls);
                }
            }
            improved = true;
        }
        if improved {
            self.trace.push(TracePoint {
                calls: self.calls,
                best_action: self.best_action,
                best_fidelity: self.best_fidelity,
            });
        }
        if self.calls >= self.budget {
            return false;
        }
        if let Some(stop) = self.stop_at_fidelity {
            if self.best_fidelity >= stop {
                return false;
            }
        }
        true
    }

    pub(crate) fn finish(self, seed: u64, best_params: ModelParams<T>) -> RunRecord<T> {
        let threshold_log = self
            .thresholds
            .iter()
            .zip(&self.hits)
            .filter_map(|(&threshold, hit)| hit.map(|calls| ThresholdHit { threshold, calls }))
            .collect();
        RunRecord {
            seed,
            best_params,
            best_free_params: self.best_free,
            best_action: self.best_action,
            best_fidelity: self.best_fidelity.max(T::zero()),
            function_calls_used: self.calls,
            threshold_log,
            trace: self.trace,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CavityParams;

    fn dummy_params() -> ModelParams<f64> {
        ModelParams::CavityOnly(CavityParams::resonant(vec![1.0]).unwrap())
    }

    #[test]
    fn recorder_tracks_bests_and_thresholds() {
        let mut r = Recorder::new(10, &[0.5, 0.9], None);
        assert!(r.observe(&[1.0], 3.0, 0.2));
        assert!(r.observe(&[2.0], 1.0, 0.6));
        assert!(r.observe(&[3.0], 2.0, 0.95));
        let rec = r.finish(7, dummy_params());
        assert_eq!(rec.function_calls_used, 3);
        assert_eq!(rec.best_free_params, vec![2.0]);
        assert_eq!(rec.best_action, 1.0);
        assert_eq!(rec.best_fidelity, 0.95);
        assert_eq!(rec.calls_to_reach(0.5), Some(2));
        assert_eq!(rec.calls_to_reach(0.9), Some(3));
        assert_eq!(rec.calls_to_reach(0.99), None);
        // trace bests are monotone
        for w in rec.trace.windows(2) {
            assert!(w[1].best_action <= w[0].best_action);
            assert!(w[1].best_fidelity >= w[0].best_fidelity);
        }
    }

    #[test]
    fn budget_and_early_stop_end_the_run() {
        let mut r = Recorder::new(2, &[], None);
        assert!(r.observe(&[1.0], 1.0, 0.1));
        assert!(!r.observe(&[1.0], 1.0, 0.1));

        let mut r = Recorder::new(100, &[], Some(0.9));
        assert!(r.observe(&[1.0], 1.0, 0.5));
        assert!(!r.observe(&[1.0], 0.5, 0.95));
        let rec = r.finish(0, dummy_params());
        assert_eq!(rec.function_calls_used, 2);
    }

    #[test]
    fn records_round_trip_through_serde() {
        let mut r = Recorder::new(5, &[0.5], None);
        r.observe(&[1.5], 2.0, 0.7);
        let rec = r.finish(3, dummy_params());
        let json = serde_json::to_string(&rec).unwrap();
        let back: RunRecord<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(rec, back);
    }
}
