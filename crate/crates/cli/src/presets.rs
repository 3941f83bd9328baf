//! Built-in configurations: the three worked examples and the parameter
//! sets of the attractor figures.

use clap::ValueEnum;
use conflict_triad::{AmountState, TriadConfig, TriadParams};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum PresetId {
    Example1,
    Example2,
    Example3,
    FigMultidim,
    FigCarno,
    FigBasins,
}

impl PresetId {
    pub const ALL: [PresetId; 6] = [
        PresetId::Example1,
        PresetId::Example2,
        PresetId::Example3,
        PresetId::FigMultidim,
        PresetId::FigCarno,
        PresetId::FigBasins,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetId::Example1 => "example1",
            PresetId::Example2 => "example2",
            PresetId::Example3 => "example3",
            PresetId::FigMultidim => "fig-multidim",
            PresetId::FigCarno => "fig-carno",
            PresetId::FigBasins => "fig-basins",
        }
    }

    pub fn config(self) -> ExperimentConfig {
        let (params, p, r, q, steps) = match self {
            PresetId::Example1 => (EXAMPLE_PARAMS, P, R, Q, 2000),
            PresetId::Example2 => (EXAMPLE_PARAMS, P, [30.0, 40.0, 50.0, 10.0], Q, 2000),
            PresetId::Example3 => (EXAMPLE_PARAMS, P, R, [5.0, 100.0, 2.0, 4.0], 2000),
            PresetId::FigMultidim => (MULTIDIM_PARAMS, MULTIDIM_P, R_40, MULTIDIM_Q, 10_000),
            PresetId::FigCarno => (
                TriadParams {
                    d3: 0.0017,
                    ..MULTIDIM_PARAMS
                },
                MULTIDIM_P,
                R_40,
                MULTIDIM_Q,
                10_000,
            ),
            PresetId::FigBasins => (BASINS_PARAMS, P, R_40, Q, 10_000),
        };
        let initial = AmountState::new(p.to_vec(), r.to_vec(), q.to_vec())
            .expect("preset amounts are positive");
        let triad = TriadConfig::new(params, initial).expect("preset parameters are valid");
        ExperimentConfig::new(triad, steps)
    }

    /// Phase-plane axes of the corresponding figure.
    pub fn default_axes(self) -> (&'static str, &'static str) {
        match self {
            PresetId::Example1 | PresetId::Example2 | PresetId::FigBasins => ("P_1", "Q_1"),
            PresetId::Example3 => ("P_2", "Q_2"),
            PresetId::FigMultidim => ("P_4", "Q_4"),
            PresetId::FigCarno => ("R_2", "Q_2"),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            PresetId::Example1 => {
                "Four regions, d1 = d3 = 0.09, d2 = 0.01, a = 0.1, b = 0.6, c = 0.1.\n\
                 Expected: a fixed point at the regional means (7000, 42.5, 3)."
            }
            PresetId::Example2 => {
                "example1 with R_2 = 40 instead of 80 (resource total 170 -> 130).\n\
                 Expected: loss of the fixed point and an egg-shaped closed orbit\n\
                 around a point shifted from the regional means."
            }
            PresetId::Example3 => {
                "example1 with Q_2 = 100.\n\
                 Note: Example 3 is stated as replacing Q_2 = 10 by Q_2 = 100,\n\
                 but example1 has Q_2 = 1; the preset keeps the example1 baseline\n\
                 and only sets Q_2 = 100.\n\
                 Expected: a large almost-square attractor in (P_2, Q_2).\n\
                 The two time-series figures are both labelled Q_2 although one calls it\n\
                 the resource coordinate; plot both with `--axes N,Q_2` and\n\
                 `--axes N,R_2`."
            }
            PresetId::FigMultidim => {
                "Parameters of the multi-dimensional attractor figure:\n\
                 d1 = 0.001, d2 = 0.000001, d3 = 0.0012, a = 0.1, b = 0.6, c = 0.1,\n\
                 P = (9000, 5000, 2000, 5), Q = (50, 2, 1, 40), R = (30, 40, 50, 10).\n\
                 Note: figure numbers in the running text do not match the figure\n\
                 labels; this preset follows the parameters printed with the figure."
            }
            PresetId::FigCarno => {
                "fig-multidim with d3 = 0.0017 (Carno-type cycle figure), plotted in\n\
                 (R_2, Q_2)."
            }
            PresetId::FigBasins => {
                "Parameters of the overlapping-basins figure:\n\
                 d1 = 0.95, d2 = d3 = 0.01, a = 0.1, b = 0.6, c = 0.1,\n\
                 P = (9000, 5000, 2000, 12000), Q = (5, 1, 2, 4), R = (30, 40, 50, 10)."
            }
        }
    }
}

const EXAMPLE_PARAMS: TriadParams = TriadParams {
    d1: 0.09,
    d2: 0.01,
    d3: 0.09,
    a: 0.1,
    b: 0.6,
    c: 0.1,
};
const MULTIDIM_PARAMS: TriadParams = TriadParams {
    d1: 0.001,
    d2: 0.000001,
    d3: 0.0012,
    a: 0.1,
    b: 0.6,
    c: 0.1,
};
const BASINS_PARAMS: TriadParams = TriadParams {
    d1: 0.95,
    d2: 0.01,
    d3: 0.01,
    a: 0.1,
    b: 0.6,
    c: 0.1,
};
const P: [f64; 4] = [9000.0, 5000.0, 2000.0, 12000.0];
const R: [f64; 4] = [30.0, 80.0, 50.0, 10.0];
const Q: [f64; 4] = [5.0, 1.0, 2.0, 4.0];
const R_40: [f64; 4] = [30.0, 40.0, 50.0, 10.0];
const MULTIDIM_P: [f64; 4] = [9000.0, 5000.0, 2000.0, 5.0];
const MULTIDIM_Q: [f64; 4] = [50.0, 2.0, 1.0, 40.0];
