//! Two-substance conflict maps on pairs of stochastic vectors.
//!
//! Each map multiplies every coordinate by `1 ± y_i` (`1 ± x_i` for the
//! second vector) and divides by `1 ± θ`, where `θ` is the conflict index
//! of the pair. The sign pattern distinguishes the three models:
//!
//! | model        | first vector        | second vector       |
//! |--------------|---------------------|---------------------|
//! | `PlusMinus`  | `p(1+r)/(1+θ)`      | `r(1-p)/(1-θ)`      |
//! | `MinusPlus`  | `p(1-q)/(1-θ)`      | `q(1+p)/(1+θ)`      |
//! | `MinusMinus` | `q(1-r)/(1-θ)`      | `r(1-q)/(1-θ)`      |

use std::fmt;

use crate::error::{Error, Result};
use crate::simplex::{normalize, raw_inner, StochasticVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BilateralModel {
    /// Population grows where resource is, resource decays where population is.
    PlusMinus,
    /// Population decays where threat is, threat grows where population is.
    MinusPlus,
    /// Mutually exclusive substances; each decays where the other is.
    MinusMinus,
}

impl BilateralModel {
    pub fn name(self) -> &'static str {
        match self {
            BilateralModel::PlusMinus => "plus-minus",
            BilateralModel::MinusPlus => "minus-plus",
            BilateralModel::MinusMinus => "minus-minus",
        }
    }

    fn signs(self) -> (f64, f64) {
        match self {
            BilateralModel::PlusMinus => (1.0, -1.0),
            BilateralModel::MinusPlus => (-1.0, 1.0),
            BilateralModel::MinusMinus => (-1.0, -1.0),
        }
    }

    pub fn step(
        self,
        x: &StochasticVector,
        y: &StochasticVector,
    ) -> Result<(StochasticVector, StochasticVector)> {
        let (sx, sy) = self.signs();
        signed_step(x, y, sx, sy)
    }
}

impl fmt::Display for BilateralModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn signed_step(
    x: &StochasticVector,
    y: &StochasticVector,
    sx: f64,
    sy: f64,
) -> Result<(StochasticVector, StochasticVector)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let theta = raw_inner(x.coords(), y.coords());
    if theta >= 1.0 {
        return Err(Error::DegenerateIndex { theta });
    }
    // Disjoint supports: every factor is 1 on the support, so nothing moves.
    if theta == 0.0 {
        return Ok((x.clone(), y.clone()));
    }
    let zx = 1.0 + sx * theta;
    let zy = 1.0 + sy * theta;
    let nx: Vec<f64> = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(xi, yi)| xi * (1.0 + sx * yi).max(0.0) / zx)
        .collect();
    let ny: Vec<f64> = y
        .coords()
        .iter()
        .zip(x.coords())
        .map(|(yi, xi)| yi * (1.0 + sy * xi).max(0.0) / zy)
        .collect();
    Ok((normalize(&nx)?, normalize(&ny)?))
}

pub fn plus_minus_step(
    p: &StochasticVector,
    r: &StochasticVector,
) -> Result<(StochasticVector, StochasticVector)> {
    BilateralModel::PlusMinus.step(p, r)
}

pub fn minus_plus_step(
    p: &StochasticVector,
    q: &StochasticVector,
) -> Result<(StochasticVector, StochasticVector)> {
    BilateralModel::MinusPlus.step(p, q)
}

pub fn minus_minus_step(
    q: &StochasticVector,
    r: &StochasticVector,
) -> Result<(StochasticVector, StochasticVector)> {
    BilateralModel::MinusMinus.step(q, r)
}

/// A pair of profiles at step `step`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilateralState {
    pub x: StochasticVector,
    pub y: StochasticVector,
    pub step: usize,
}

/// Step index and error of a bilateral run that stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct BilateralFailure {
    pub step: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilateralTrajectory {
    model: BilateralModel,
    states: Vec<BilateralState>,
    failure: Option<BilateralFailure>,
}

impl BilateralTrajectory {
    pub fn model(&self) -> BilateralModel {
        self.model
    }

    pub fn states(&self) -> &[BilateralState] {
        &self.states
    }

    pub fn last(&self) -> &BilateralState {
        self.states
            .last()
            .expect("trajectory always holds the initial state")
    }

    pub fn failure(&self) -> Option<&BilateralFailure> {
        self.failure.as_ref()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `θ^N` for every recorded step.
    pub fn conflict_indices(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| raw_inner(s.x.coords(), s.y.coords()).clamp(0.0, 1.0))
            .collect()
    }
}

/// Iterates a bilateral model `steps` times from `(x0, y0)`.
///
/// The result holds `steps + 1` states unless a step fails, in which case
/// it is truncated and the failing step index is recorded.
pub fn iterate_bilateral(
    model: BilateralModel,
    x0: &StochasticVector,
    y0: &StochasticVector,
    steps: usize,
) -> Result<BilateralTrajectory> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    if x0.len() != y0.len() {
        return Err(Error::DimensionMismatch {
            left: x0.len(),
            right: y0.len(),
        });
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(BilateralState {
        x: x0.clone(),
        y: y0.clone(),
        step: 0,
    });
    let mut failure = None;
    for n in 1..=steps {
        let prev = states.last().unwrap();
        match model.step(&prev.x, &prev.y) {
            Ok((x, y)) => states.push(BilateralState { x, y, step: n }),
            Err(error) => {
                failure = Some(BilateralFailure { step: n, error });
                break;
            }
        }
    }
    Ok(BilateralTrajectory {
        model,
        states,
        failure,
    })
}

/// Strict ordering of `(p_i, r_i, θ)` in the plus-minus model, numbered in
/// the order the orbit visits them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderingSymbol {
    /// `r_i < p_i < θ`
    E1,
    /// `p_i < r_i < θ`
    E2,
    /// `p_i < θ < r_i`
    E3,
    /// `θ < p_i < r_i`
    E4,
    /// `θ < r_i < p_i`
    E5,
    /// `r_i < θ < p_i`
    E6,
}

impl OrderingSymbol {
    pub const ALL: [OrderingSymbol; 6] = [
        OrderingSymbol::E1,
        OrderingSymbol::E2,
        OrderingSymbol::E3,
        OrderingSymbol::E4,
        OrderingSymbol::E5,
        OrderingSymbol::E6,
    ];

    /// `None` when any two of the three values tie.
    pub fn of(p: f64, r: f64, theta: f64) -> Option<Self> {
        use OrderingSymbol::*;
        if r < p && p < theta {
            Some(E1)
        } else if p < r && r < theta {
            Some(E2)
        } else if p < theta && theta < r {
            Some(E3)
        } else if theta < p && p < r {
            Some(E4)
        } else if theta < r && r < p {
            Some(E5)
        } else if r < theta && theta < p {
            Some(E6)
        } else {
            None
        }
    }

    pub fn successor(self) -> Self {
        Self::ALL[(self as usize + 1) % 6]
    }

    pub fn label(self) -> &'static str {
        ["e1", "e2", "e3", "e4", "e5", "e6"][self as usize]
    }
}

impl fmt::Display for OrderingSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-step ordering label of coordinate `index` along a plus-minus run.
///
/// A step with a tie takes the label of the next strictly ordered step;
/// ties with no strict step after them are dropped.
pub fn ordering_sequence(
    trajectory: &BilateralTrajectory,
    index: usize,
) -> Result<Vec<OrderingSymbol>> {
    if trajectory.model != BilateralModel::PlusMinus {
        return Err(Error::WrongModel {
            expected: BilateralModel::PlusMinus.name(),
            found: trajectory.model.name(),
        });
    }
    let n = trajectory.states[0].x.len();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    let raw: Vec<Option<OrderingSymbol>> = trajectory
        .states
        .iter()
        .map(|s| {
            let theta = raw_inner(s.x.coords(), s.y.coords());
            OrderingSymbol::of(s.x[index], s.y[index], theta)
        })
        .collect();
    let mut out = Vec::with_capacity(raw.len());
    let mut pending = 0usize;
    for label in raw {
        match label {
            Some(l) => {
                out.extend(std::iter::repeat_n(l, pending + 1));
                pending = 0;
            }
            None => pending += 1,
        }
    }
    Ok(out)
}

/// Collapses runs of equal labels, keeping only change events.
pub fn label_changes(labels: &[OrderingSymbol]) -> Vec<OrderingSymbol> {
    let mut out: Vec<OrderingSymbol> = Vec::new();
    for &l in labels {
        if out.last() != Some(&l) {
            out.push(l);
        }
    }
    out
}

/// True when every change moves to the cyclic successor `e1 → … → e6 → e1`.
pub fn follows_cycle(changes: &[OrderingSymbol]) -> bool {
    changes.windows(2).all(|w| w[1] == w[0].successor())
}

/// Perturbs the uniform plus-minus fixed point by `+ε, -ε` on the first two
/// coordinates of `p` (opposite signs for `r`) and iterates.
///
/// Returns the max-norm deviation from uniform at step 0 and at `steps`.
pub fn instability_probe(epsilon: f64, n: usize, steps: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::TooFewRegions(n));
    }
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let base = 1.0 / n as f64;
    if !(epsilon.is_finite() && epsilon >= 0.0 && epsilon < base) {
        return Err(Error::InvalidEpsilon { epsilon, n });
    }
    let mut p = vec![base; n];
    let mut r = vec![base; n];
    p[0] += epsilon;
    p[1] -= epsilon;
    r[0] -= epsilon;
    r[1] += epsilon;
    let p = StochasticVector::new(p).map_err(|_| Error::InvalidEpsilon { epsilon, n })?;
    let r = StochasticVector::new(r).map_err(|_| Error::InvalidEpsilon { epsilon, n })?;
    let deviation = |x: &StochasticVector, y: &StochasticVector| {
        x.coords()
            .iter()
            .chain(y.coords())
            .map(|v| (v - base).abs())
            .fold(0.0, f64::max)
    };
    let initial = deviation(&p, &r);
    let traj = iterate_bilateral(BilateralModel::PlusMinus, &p, &r, steps)?;
    if let Some(f) = traj.failure() {
        return Err(f.error.clone());
    }
    let last = traj.last();
    Ok((initial, deviation(&last.x, &last.y)))
}
