//! Deterministic simulator and phase analysis for the conflict triad: a
//! population `P`, a vital resource `R` and a threat `Q`, each spread over
//! `n` regions and interacting through discrete-time redistribution maps.
//!
//! * [`simplex`]: stochastic vectors, amount states, parameters, conflict index.
//! * [`bilateral`]: the two-substance plus-minus, minus-plus and minus-minus maps.
//! * [`triad`]: the full three-substance map, its equilibrium and runs.
//! * [`analysis`]: phase classification, period detection and parameter sweeps.

pub mod analysis;
pub mod bilateral;
pub mod error;
pub mod simplex;
pub mod triad;

pub use analysis::{
    classify, conflict_index_series, detect_period, parameter_sweep, ClassifierSettings,
    PhaseLabel, Selector, SubstancePair, SweepResult,
};
pub use bilateral::{
    instability_probe, iterate_bilateral, minus_minus_step, minus_plus_step, ordering_sequence,
    plus_minus_step, BilateralModel, BilateralTrajectory, OrderingSymbol,
};
pub use error::{Error, Result};
pub use simplex::{
    inner, normalize, AmountState, ConflictIndex, StochasticVector, Substance, TriadParams,
};
pub use triad::{
    amount_step, equilibrium_state, redistribution_step, run_triad, triad_step, Collapse,
    CollapseMarker, RegInput, Stage, Trajectory, TriadConfig,
};
