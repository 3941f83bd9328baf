use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{classify, ClassifierSettings, PhaseLabel};
use crate::error::{Error, Result};
use crate::simplex::Substance;
use crate::triad::{run_triad, TriadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamName {
    D1,
    D2,
    D3,
    A,
    B,
    C,
}

/// A sweepable quantity: a model parameter or one initial coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    Param(ParamName),
    /// Zero-based region index; written `P_1`, `R_3`, ... (one-based).
    Coordinate(Substance, usize),
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let param = match s {
            "d1" => Some(ParamName::D1),
            "d2" => Some(ParamName::D2),
            "d3" => Some(ParamName::D3),
            "a" => Some(ParamName::A),
            "b" => Some(ParamName::B),
            "c" => Some(ParamName::C),
            _ => None,
        };
        if let Some(p) = param {
            return Ok(Selector::Param(p));
        }
        let unknown = || Error::UnknownSelector(s.to_string());
        let (head, index) = s.split_once('_').ok_or_else(unknown)?;
        let substance = match head {
            "P" => Substance::P,
            "R" => Substance::R,
            "Q" => Substance::Q,
            _ => return Err(unknown()),
        };
        let index: usize = index.parse().map_err(|_| unknown())?;
        if index == 0 {
            return Err(unknown());
        }
        Ok(Selector::Coordinate(substance, index - 1))
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Param(p) => f.write_str(match p {
                ParamName::D1 => "d1",
                ParamName::D2 => "d2",
                ParamName::D3 => "d3",
                ParamName::A => "a",
                ParamName::B => "b",
                ParamName::C => "c",
            }),
            Selector::Coordinate(s, i) => write!(f, "{}_{}", s.symbol(), i + 1),
        }
    }
}

impl Selector {
    /// Checks the selector against a region count.
    pub fn check(&self, n: usize) -> Result<()> {
        match self {
            Selector::Coordinate(_, i) if *i >= n => Err(Error::UnknownSelector(self.to_string())),
            _ => Ok(()),
        }
    }

    /// Copy of `config` with the selected quantity set to `value`.
    pub fn apply(&self, config: &TriadConfig, value: f64) -> Result<TriadConfig> {
        self.check(config.n())?;
        let mut out = config.clone();
        match *self {
            Selector::Param(p) => {
                let slot = match p {
                    ParamName::D1 => &mut out.params.d1,
                    ParamName::D2 => &mut out.params.d2,
                    ParamName::D3 => &mut out.params.d3,
                    ParamName::A => &mut out.params.a,
                    ParamName::B => &mut out.params.b,
                    ParamName::C => &mut out.params.c,
                };
                *slot = value;
                out.params.validate()?;
            }
            Selector::Coordinate(s, i) => {
                out.initial = out.initial.with_coordinate(s, i, value)?;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub label: PhaseLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub selector: Selector,
    /// One entry per grid value, in grid order.
    pub points: Vec<SweepPoint>,
    /// Adjacent grid values whose labels differ.
    pub boundaries: Vec<(f64, f64)>,
}

/// Runs and classifies the model once per grid value.
///
/// Grid points are evaluated in parallel; the output keeps grid order.
/// A collapsing run is reported as a [`PhaseLabel::Collapse`] point.
pub fn parameter_sweep(
    config: &TriadConfig,
    selector: Selector,
    grid: &[f64],
    steps: usize,
    settings: &ClassifierSettings,
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if steps == 0 {
        return Err(Error::ZeroSteps);
    }
    settings.validate()?;
    selector.check(config.n())?;
    if steps + 1 < settings.min_len() {
        return Err(Error::TooShort {
            len: steps + 1,
            required: settings.min_len(),
        });
    }
    let configs = grid
        .iter()
        .map(|&v| selector.apply(config, v))
        .collect::<Result<Vec<_>>>()?;
    let labels = configs
        .par_iter()
        .map(|cfg| {
            let trajectory = run_triad(cfg, steps)?;
            classify(&trajectory, settings)
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<SweepPoint> = grid
        .iter()
        .zip(labels)
        .map(|(&value, label)| SweepPoint { value, label })
        .collect();
    let boundaries = points
        .windows(2)
        .filter(|w| !w[0].label.same_phase(&w[1].label))
        .map(|w| (w[0].value, w[1].value))
        .collect();
    Ok(SweepResult {
        selector,
        points,
        boundaries,
    })
}
