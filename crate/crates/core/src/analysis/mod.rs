//! Phase classification of triad trajectories.
//!
//! Distances between states are max-norms over all `3n` coordinates with
//! each substance divided by its total (see
//! [`AmountState::scaled_distance`]).

mod classify;
mod period;
mod sweep;

use std::fmt;

pub use classify::classify;
pub use period::{detect_period, detect_period_by, recurrence_residual};
pub use sweep::{parameter_sweep, ParamName, Selector, SweepPoint, SweepResult};

use crate::error::{Error, Result};
use crate::simplex::{inner, AmountState, Substance};
use crate::triad::Trajectory;

/// Thresholds of the phase classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierSettings {
    /// Largest scaled step change still counted as stationary.
    pub fix_tol: f64,
    /// Largest scaled lag-`k` recurrence residual accepted as a period.
    pub cyc_tol: f64,
    /// Number of consecutive steps a criterion must hold for.
    pub window: usize,
    pub max_period: usize,
    /// Fraction of the run, counted from the end, that is examined.
    pub tail_fraction: f64,
}

impl Default for ClassifierSettings {
    fn default() -> Self {
        Self {
            fix_tol: 1e-6,
            cyc_tol: 1e-6,
            window: 50,
            max_period: 5000,
            tail_fraction: 0.5,
        }
    }
}

impl ClassifierSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.fix_tol > 0.0 && self.fix_tol.is_finite()) {
            return Err(Error::InvalidSettings("fix-tol must be > 0"));
        }
        if !(self.cyc_tol > 0.0 && self.cyc_tol.is_finite()) {
            return Err(Error::InvalidSettings("cyc-tol must be > 0"));
        }
        if self.window < 2 {
            return Err(Error::InvalidSettings("window must be >= 2"));
        }
        if self.max_period < 2 {
            return Err(Error::InvalidSettings("max-period must be >= 2"));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 1.0) {
            return Err(Error::InvalidSettings("tail-fraction must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Shortest trajectory [`classify`] accepts.
    pub fn min_len(&self) -> usize {
        2 * self.window
    }
}

/// Long-run regime of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseLabel {
    /// Converged; `residual` is the scaled change of one more step from `limit`.
    FixedPoint { limit: AmountState, residual: f64 },
    /// Periodic with minimal period `period >= 2`.
    Cycle {
        period: usize,
        reference: AmountState,
        residual: f64,
    },
    /// Successive tail segments shadow cycles of different periods.
    WaveOfCycles { periods: Vec<usize> },
    /// Bounded, but neither stationary nor periodic within the search range.
    QuasiChaotic,
    /// The run stopped at `step`.
    Collapse { step: usize },
}

impl PhaseLabel {
    pub fn name(&self) -> &'static str {
        match self {
            PhaseLabel::FixedPoint { .. } => "fixed-point",
            PhaseLabel::Cycle { .. } => "cycle",
            PhaseLabel::WaveOfCycles { .. } => "wave-of-cycles",
            PhaseLabel::QuasiChaotic => "quasi-chaotic",
            PhaseLabel::Collapse { .. } => "collapse",
        }
    }

    pub fn is_fixed_point(&self) -> bool {
        matches!(self, PhaseLabel::FixedPoint { .. })
    }

    pub fn period(&self) -> Option<usize> {
        match self {
            PhaseLabel::Cycle { period, .. } => Some(*period),
            _ => None,
        }
    }

    /// Same regime; cycles must also agree on the period.
    pub fn same_phase(&self, other: &PhaseLabel) -> bool {
        match (self, other) {
            (PhaseLabel::Cycle { period: a, .. }, PhaseLabel::Cycle { period: b, .. }) => a == b,
            _ => self.name() == other.name(),
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseLabel::Cycle { period, .. } => write!(f, "cycle({period})"),
            PhaseLabel::WaveOfCycles { periods } => {
                let p: Vec<String> = periods.iter().map(|p| p.to_string()).collect();
                write!(f, "wave-of-cycles({})", p.join(","))
            }
            PhaseLabel::Collapse { step } => write!(f, "collapse(step {step})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubstancePair {
    PR,
    PQ,
    QR,
}

impl SubstancePair {
    pub fn substances(self) -> (Substance, Substance) {
        match self {
            SubstancePair::PR => (Substance::P, Substance::R),
            SubstancePair::PQ => (Substance::P, Substance::Q),
            SubstancePair::QR => (Substance::Q, Substance::R),
        }
    }
}

/// Conflict index of one substance pair at every step. A substance with
/// zero total has no profile and yields `NaN`.
pub fn conflict_index_series(trajectory: &Trajectory, pair: SubstancePair) -> Vec<f64> {
    let (a, b) = pair.substances();
    trajectory
        .states()
        .iter()
        .map(|s| conflict_index(s, a, b))
        .collect()
}

fn conflict_index(state: &AmountState, a: Substance, b: Substance) -> f64 {
    match (state.profile(a), state.profile(b)) {
        (Ok(u), Ok(v)) => inner(&u, &v).map(|c| c.value()).unwrap_or(f64::NAN),
        _ => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::TriadParams;
    use crate::triad::{equilibrium_state, run_triad, TriadConfig};

    #[test]
    fn default_settings_are_valid() {
        ClassifierSettings::default().validate().unwrap();
        let bad = ClassifierSettings {
            window: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ClassifierSettings {
            tail_fraction: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn conflict_index_on_equilibrium_is_one_over_n() {
        let initial = AmountState::new(
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.0],
            vec![1.0, 1.0, 4.0],
        )
        .unwrap();
        let cfg = TriadConfig::new(
            TriadParams::new(0.1, 0.1, 0.1, 0.1, 0.6, 0.1).unwrap(),
            equilibrium_state(&initial),
        )
        .unwrap();
        let t = run_triad(&cfg, 20).unwrap();
        for pair in [SubstancePair::PR, SubstancePair::PQ, SubstancePair::QR] {
            let series = conflict_index_series(&t, pair);
            assert_eq!(series.len(), 21);
            assert!(series.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        }
    }

    #[test]
    fn labels_compare_by_phase() {
        let a = PhaseLabel::WaveOfCycles {
            periods: vec![3, 5],
        };
        assert!(a.same_phase(&PhaseLabel::WaveOfCycles {
            periods: vec![7, 2]
        }));
        assert!(!a.same_phase(&PhaseLabel::QuasiChaotic));
        assert_eq!(a.to_string(), "wave-of-cycles(3,5)");
    }
}
