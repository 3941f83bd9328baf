//! The three-substance conflict map.
//!
//! One step runs three stages:
//!
//! 1. amount update: `P̃_i = P_i + d1(R_i − Q_i)`, `R̃_i = R_i + Q_i/(d3·P_i)`,
//!    `Q̃_i = Q_i + d2(R_i − Q_i)`, each rescaled so the substance total is
//!    unchanged;
//! 2. redistribution of the occupation profiles `p, r, q`:
//!    `p_i(1 + a(r_i − q_i))`, `r_i(1 − c·p_i − b·q_i)`,
//!    `q_i(1 + p_i/c − b·r_i)`, each renormalized onto the simplex;
//! 3. the profiles are multiplied back by the conserved totals.
//!
//! A negative interim value or a non-positive normalizer ends the run
//! ([`Collapse`]); nothing is clamped.

use std::fmt;

use crate::error::{Error, Result};
use crate::simplex::{normalize, AmountState, StochasticVector, Substance, TriadParams};

/// `P_i` below this is treated as zero in the `Q_i/P_i` term.
pub const MIN_POPULATION: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Amounts,
    Redistribution,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Amounts => "amounts",
            Stage::Redistribution => "redistribution",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollapseReason {
    /// An interim coordinate or a normalizer left the nonnegative range.
    Negative,
    /// `P_i` vanished under the `Q_i/P_i` term, or a substance has zero total.
    DivisionByZero,
}

/// Loss of physical sense during a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collapse {
    pub stage: Stage,
    pub reason: CollapseReason,
    pub substance: Substance,
    pub region: Option<usize>,
}

impl fmt::Display for Collapse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reason = match self.reason {
            CollapseReason::Negative => "negative value",
            CollapseReason::DivisionByZero => "division by zero",
        };
        write!(
            f,
            "{reason} in {} stage ({}",
            self.stage.name(),
            self.substance.symbol()
        )?;
        if let Some(i) = self.region {
            write!(f, "_{}", i + 1)?;
        }
        f.write_str(")")
    }
}

impl std::error::Error for Collapse {}

/// Which profiles the redistribution stage reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RegInput {
    /// Profiles of the state before the amount update.
    Pre,
    /// Profiles after the amount update.
    #[default]
    Post,
}

impl RegInput {
    pub fn name(self) -> &'static str {
        match self {
            RegInput::Pre => "pre",
            RegInput::Post => "post",
        }
    }
}

fn collapse(
    stage: Stage,
    reason: CollapseReason,
    substance: Substance,
    region: Option<usize>,
) -> Collapse {
    Collapse {
        stage,
        reason,
        substance,
        region,
    }
}

/// Rescales interim values so they sum to `total`.
fn rescale(interim: Vec<f64>, total: f64, substance: Substance) -> Result<Vec<f64>, Collapse> {
    use CollapseReason::*;
    if let Some(i) = interim.iter().position(|&x| x < 0.0) {
        return Err(collapse(Stage::Amounts, Negative, substance, Some(i)));
    }
    if total == 0.0 {
        return Err(collapse(Stage::Amounts, DivisionByZero, substance, None));
    }
    let z = interim.iter().sum::<f64>() / total;
    if z <= 0.0 || !z.is_finite() {
        return Err(collapse(Stage::Amounts, Negative, substance, None));
    }
    Ok(interim.into_iter().map(|x| x / z).collect())
}

/// Amount update with totals held fixed.
pub fn amount_step(state: &AmountState, params: &TriadParams) -> Result<AmountState, Collapse> {
    let (p, r, q) = (state.p(), state.r(), state.q());
    if let Some(i) = p.iter().position(|&x| x < MIN_POPULATION) {
        return Err(collapse(
            Stage::Amounts,
            CollapseReason::DivisionByZero,
            Substance::P,
            Some(i),
        ));
    }
    let n = state.n();
    let mut pt = Vec::with_capacity(n);
    let mut rt = Vec::with_capacity(n);
    let mut qt = Vec::with_capacity(n);
    for i in 0..n {
        let diff = r[i] - q[i];
        pt.push(p[i] + params.d1 * diff);
        rt.push(r[i] + q[i] / p[i] / params.d3);
        qt.push(q[i] + params.d2 * diff);
    }
    // Numerator signs are checked for all substances before any normalizer.
    for (values, s) in [
        (&pt, Substance::P),
        (&rt, Substance::R),
        (&qt, Substance::Q),
    ] {
        if let Some(i) = values.iter().position(|&x| x < 0.0) {
            return Err(collapse(
                Stage::Amounts,
                CollapseReason::Negative,
                s,
                Some(i),
            ));
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(collapse(
                Stage::Amounts,
                CollapseReason::DivisionByZero,
                s,
                Some(i),
            ));
        }
    }
    let totals = state.totals();
    let p_new = rescale(pt, totals[0], Substance::P)?;
    let r_new = rescale(rt, totals[1], Substance::R)?;
    let q_new = rescale(qt, totals[2], Substance::Q)?;
    Ok(AmountState::with_totals(p_new, r_new, q_new, totals))
}

fn reweight(
    x: &StochasticVector,
    factors: Vec<f64>,
    substance: Substance,
) -> Result<StochasticVector, Collapse> {
    use CollapseReason::*;
    if let Some(i) = factors.iter().position(|&f| f < 0.0) {
        return Err(collapse(
            Stage::Redistribution,
            Negative,
            substance,
            Some(i),
        ));
    }
    let weighted: Vec<f64> = x
        .coords()
        .iter()
        .zip(&factors)
        .map(|(xi, f)| xi * f)
        .collect();
    let z: f64 = weighted.iter().sum();
    if z <= 0.0 || !z.is_finite() {
        return Err(collapse(Stage::Redistribution, Negative, substance, None));
    }
    let scaled: Vec<f64> = weighted.iter().map(|w| w / z).collect();
    normalize(&scaled).map_err(|_| collapse(Stage::Redistribution, Negative, substance, None))
}

/// Redistribution of the three occupation profiles.
///
/// Returns `(p′, r′, q′)`; each is renormalized by its own weighted sum,
/// which equals `1 + a(θ_pr − θ_pq)`, `1 − c·θ_rp − b·θ_rq` and
/// `1 + θ_qp/c − b·θ_qr` respectively.
pub fn redistribution_step(
    p: &StochasticVector,
    r: &StochasticVector,
    q: &StochasticVector,
    params: &TriadParams,
) -> Result<(StochasticVector, StochasticVector, StochasticVector)> {
    if r.len() != p.len() || q.len() != p.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: if r.len() != p.len() { r.len() } else { q.len() },
        });
    }
    redistribute(p, r, q, params).map_err(Error::Collapse)
}

/// Same as [`redistribution_step`] for inputs already known to agree in
/// dimension, reporting collapse instead of a generic error.
pub fn redistribute(
    p: &StochasticVector,
    r: &StochasticVector,
    q: &StochasticVector,
    params: &TriadParams,
) -> Result<(StochasticVector, StochasticVector, StochasticVector), Collapse> {
    let TriadParams { a, b, c, .. } = *params;
    let (pc, rc, qc) = (p.coords(), r.coords(), q.coords());
    let n = pc.len();
    let fp: Vec<f64> = (0..n).map(|i| 1.0 + a * (rc[i] - qc[i])).collect();
    let fr: Vec<f64> = (0..n).map(|i| 1.0 - c * pc[i] - b * qc[i]).collect();
    let fq: Vec<f64> = (0..n).map(|i| 1.0 + pc[i] / c - b * rc[i]).collect();
    Ok((
        reweight(p, fp, Substance::P)?,
        reweight(r, fr, Substance::R)?,
        reweight(q, fq, Substance::Q)?,
    ))
}

fn profiles(state: &AmountState, stage: Stage) -> Result<[StochasticVector; 3], Collapse> {
    let mut out = Vec::with_capacity(3);
    for s in Substance::ALL {
        let v = state
            .profile(s)
            .map_err(|_| collapse(stage, CollapseReason::DivisionByZero, s, None))?;
        out.push(v);
    }
    Ok(out.try_into().expect("three substances"))
}

/// One full step of the triad map (redistribution reads post-update profiles).
pub fn triad_step(state: &AmountState, params: &TriadParams) -> Result<AmountState, Collapse> {
    triad_step_with(state, params, RegInput::Post)
}

pub fn triad_step_with(
    state: &AmountState,
    params: &TriadParams,
    reg_input: RegInput,
) -> Result<AmountState, Collapse> {
    let updated = amount_step(state, params)?;
    let source = match reg_input {
        RegInput::Post => &updated,
        RegInput::Pre => state,
    };
    let [p, r, q] = profiles(source, Stage::Redistribution)?;
    let (p, r, q) = redistribute(&p, &r, &q, params)?;
    let totals = state.totals();
    let scale = |v: StochasticVector, t: f64| {
        v.into_inner()
            .into_iter()
            .map(|x| x * t)
            .collect::<Vec<_>>()
    };
    Ok(AmountState::with_totals(
        scale(p, totals[0]),
        scale(r, totals[1]),
        scale(q, totals[2]),
        totals,
    ))
}

/// Region-wise arithmetic means of each substance.
pub fn equilibrium_state(initial: &AmountState) -> AmountState {
    let n = initial.n();
    let fill = |s: Substance| vec![initial.total(s) / n as f64; n];
    AmountState::with_totals(
        fill(Substance::P),
        fill(Substance::R),
        fill(Substance::Q),
        initial.totals(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriadConfig {
    pub params: TriadParams,
    pub initial: AmountState,
    pub reg_input: RegInput,
}

impl TriadConfig {
    pub fn new(params: TriadParams, initial: AmountState) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            initial,
            reg_input: RegInput::Post,
        })
    }

    pub fn with_reg_input(mut self, reg_input: RegInput) -> Self {
        self.reg_input = reg_input;
        self
    }

    pub fn n(&self) -> usize {
        self.initial.n()
    }

    /// Regions/substances with a zero starting coordinate; the equilibrium
    /// results assume there are none.
    pub fn zero_coordinates(&self) -> Vec<(Substance, usize)> {
        Substance::ALL
            .iter()
            .flat_map(|&s| {
                self.initial
                    .get(s)
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == 0.0)
                    .map(move |(i, _)| (s, i))
            })
            .collect()
    }

    pub fn step(&self, state: &AmountState) -> Result<AmountState, Collapse> {
        triad_step_with(state, &self.params, self.reg_input)
    }
}

/// Where and why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseMarker {
    /// Index of the step that failed; states `0..step` were recorded.
    pub step: usize,
    pub collapse: Collapse,
}

/// States of a triad run, one per step, starting with the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: TriadParams,
    reg_input: RegInput,
    states: Vec<AmountState>,
    collapse: Option<CollapseMarker>,
}

impl Trajectory {
    pub fn from_states(
        params: TriadParams,
        reg_input: RegInput,
        states: Vec<AmountState>,
        collapse: Option<CollapseMarker>,
    ) -> Self {
        Self {
            params,
            reg_input,
            states,
            collapse,
        }
    }

    pub fn params(&self) -> &TriadParams {
        &self.params
    }

    pub fn reg_input(&self) -> RegInput {
        self.reg_input
    }

    pub fn states(&self) -> &[AmountState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> &AmountState {
        &self.states[0]
    }

    pub fn last(&self) -> &AmountState {
        self.states
            .last()
            .expect("trajectory always holds the initial state")
    }

    pub fn collapse(&self) -> Option<&CollapseMarker> {
        self.collapse.as_ref()
    }

    pub fn n(&self) -> usize {
        self.first().n()
    }

    /// Applies this trajectory's own map to `state`.
    pub fn step(&self, state: &AmountState) -> Result<AmountState, Collapse> {
        triad_step_with(state, &self.params, self.reg_input)
    }
}

/// Iterates the triad map from `config.initial`, recording every state and
/// stopping at the first collapse.
pub fn run_triad(config: &TriadConfig, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(config.initial.clone());
    let mut marker = None;
    for n in 1..=steps {
        match config.step(states.last().unwrap()) {
            Ok(s) => states.push(s),
            Err(collapse) => {
                marker = Some(CollapseMarker { step: n, collapse });
                break;
            }
        }
    }
    Ok(Trajectory {
        params: config.params,
        reg_input: config.reg_input,
        states,
        collapse: marker,
    })
}
