//! Phase-plane plots as standalone SVG.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use conflict_triad::{AmountState, Error, Selector, Substance, Trajectory};

pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 0.05 * CANVAS;
const PAD: f64 = 0.05;

/// A plot axis: one coordinate (`P_1`, `Q_4`, ...) or the step index `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Step,
    Coordinate(Substance, usize),
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "N" {
            return Ok(Axis::Step);
        }
        match s.parse::<Selector>()? {
            Selector::Coordinate(sub, i) => Ok(Axis::Coordinate(sub, i)),
            Selector::Param(_) => Err(Error::UnknownSelector(s.to_string())),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Step => f.write_str("N"),
            Axis::Coordinate(s, i) => write!(f, "{}_{}", s.symbol(), i + 1),
        }
    }
}

impl Axis {
    fn check(self, n: usize) -> Result<(), Error> {
        match self {
            Axis::Coordinate(_, i) if i >= n => Err(Error::UnknownSelector(self.to_string())),
            _ => Ok(()),
        }
    }

    fn value(self, step: usize, state: &AmountState) -> f64 {
        match self {
            Axis::Step => step as f64,
            Axis::Coordinate(s, i) => state.get(s)[i],
        }
    }
}

/// Parses `"P_1,Q_1"` into two axes.
pub fn parse_axes(s: &str) -> Result<(Axis, Axis), Error> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::UnknownSelector(s.to_string()))?;
    Ok((x.trim().parse()?, y.trim().parse()?))
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let span = hi - lo;
    let pad = if span > 0.0 {
        span * PAD
    } else if lo != 0.0 {
        lo.abs() * PAD
    } else {
        1.0
    };
    (lo - pad, hi + pad)
}

/// Renders the trajectory projected onto `axes`. Output bytes depend only on
/// the trajectory and the axes.
pub fn render_svg(trajectory: &Trajectory, axes: (Axis, Axis)) -> Result<String, Error> {
    let (ax, ay) = axes;
    ax.check(trajectory.n())?;
    ay.check(trajectory.n())?;
    let pts: Vec<(f64, f64)> = trajectory
        .states()
        .iter()
        .enumerate()
        .map(|(k, s)| (ax.value(k, s), ay.value(k, s)))
        .collect();
    let (x0, x1) = padded_range(pts.iter().map(|p| p.0));
    let (y0, y1) = padded_range(pts.iter().map(|p| p.1));
    let inner = CANVAS - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * inner;
    let sy = |y: f64| CANVAS - MARGIN - (y - y0) / (y1 - y0) * inner;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    let mut points = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        if i > 0 {
            points.push(' ');
        }
        write!(points, "{:.3},{:.3}", sx(x), sy(y)).unwrap();
    }
    writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points="{points}"/>"#
    )
    .unwrap();
    let font = r#"font-family="sans-serif" font-size="14""#;
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" {font}>{ax}</text>"#,
        CANVAS / 2.0,
        CANVAS - MARGIN / 4.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{x}" y="{y}" text-anchor="middle" transform="rotate(-90 {x} {y})" {font}>{ay}</text>"#,
        x = MARGIN / 2.0,
        y = CANVAS / 2.0
    )
    .unwrap();
    for (label, x, y, anchor) in [
        (fmt_tick(x0), MARGIN, CANVAS - MARGIN / 2.0, "start"),
        (fmt_tick(x1), CANVAS - MARGIN, CANVAS - MARGIN / 2.0, "end"),
    ] {
        writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{label}</text>"#
        )
        .unwrap();
    }
    for (label, y) in [
        (fmt_tick(y0), CANVAS - MARGIN),
        (fmt_tick(y1), MARGIN + 10.0),
    ] {
        writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="start" font-family="sans-serif" font-size="10">{label}</text>"#,
            MARGIN + 4.0
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn fmt_tick(v: f64) -> String {
    format!("{v:.4e}")
}

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error(transparent)]
    Selector(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn render_phase_plot(
    trajectory: &Trajectory,
    axes: (Axis, Axis),
    path: &Path,
) -> Result<(), PlotError> {
    let svg = render_svg(trajectory, axes)?;
    std::fs::write(path, svg)?;
    Ok(())
}
