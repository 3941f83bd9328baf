use std::io::{self, Write};
use std::path::Path;

use conflict_triad::Trajectory;

/// Writes one CSV row per recorded step: `step,P_1..P_n,R_1..R_n,Q_1..Q_n`.
///
/// Values use the shortest decimal that parses back to the same `f64`.
pub fn write_trajectory_to<W: Write>(trajectory: &Trajectory, mut out: W) -> io::Result<()> {
    let n = trajectory.n();
    let mut header = String::from("step");
    for s in ["P", "R", "Q"] {
        for i in 1..=n {
            header.push_str(&format!(",{s}_{i}"));
        }
    }
    writeln!(out, "{header}")?;
    let mut line = String::new();
    for (step, state) in trajectory.states().iter().enumerate() {
        line.clear();
        line.push_str(&step.to_string());
        for v in state.flat() {
            line.push(',');
            line.push_str(&v.to_string());
        }
        writeln!(out, "{line}")?;
    }
    out.flush()
}

pub fn write_trajectory(trajectory: &Trajectory, path: &Path) -> io::Result<()> {
    let file = std::fs::File::create(path)?;
    write_trajectory_to(trajectory, io::BufWriter::new(file))
}
