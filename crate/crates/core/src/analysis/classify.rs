use super::period::{detect_period, minimal_period};
use super::{ClassifierSettings, PhaseLabel};
use crate::error::{Error, Result};
use crate::simplex::{AmountState, Substance};
use crate::triad::Trajectory;

/// Labels the long-run regime of `trajectory`.
///
/// Checks run in order over the tail (the last `tail_fraction` of states):
/// collapse marker, stationarity over the final `window` steps, a single
/// recurrence period verified over `max(k, window)` points, different
/// periods in successive tail segments, and finally the bounded residual
/// category.
pub fn classify(trajectory: &Trajectory, settings: &ClassifierSettings) -> Result<PhaseLabel> {
    settings.validate()?;
    if let Some(marker) = trajectory.collapse() {
        return Ok(PhaseLabel::Collapse { step: marker.step });
    }
    let states = trajectory.states();
    let len = states.len();
    if len < settings.min_len() {
        return Err(Error::TooShort {
            len,
            required: settings.min_len(),
        });
    }
    let tail_len = ((len as f64 * settings.tail_fraction).round() as usize)
        .max(settings.min_len())
        .min(len);
    let tail = &states[len - tail_len..];

    if let Some(label) = fixed_point(trajectory, tail, settings) {
        return Ok(label);
    }
    if let Some((period, residual)) = minimal_period(
        tail,
        settings.cyc_tol,
        settings.max_period,
        settings.window,
        AmountState::scaled_distance,
    ) {
        return Ok(PhaseLabel::Cycle {
            period,
            reference: tail[tail_len - 1].clone(),
            residual,
        });
    }
    if let Some(periods) = wave_periods(tail, settings) {
        return Ok(PhaseLabel::WaveOfCycles { periods });
    }
    if let Some(step) = first_unbounded(states) {
        return Ok(PhaseLabel::Collapse { step });
    }
    Ok(PhaseLabel::QuasiChaotic)
}

fn fixed_point(
    trajectory: &Trajectory,
    tail: &[AmountState],
    settings: &ClassifierSettings,
) -> Option<PhaseLabel> {
    let w = settings.window;
    let still = tail[tail.len() - w - 1..]
        .windows(2)
        .all(|pair| pair[1].scaled_distance(&pair[0]) < settings.fix_tol);
    if !still {
        return None;
    }
    let limit = tail.last()?.clone();
    let next = trajectory.step(&limit).ok()?;
    let residual = next.scaled_distance(&limit);
    (residual < 10.0 * settings.fix_tol).then_some(PhaseLabel::FixedPoint { limit, residual })
}

/// Periods found in non-overlapping tail segments, in segment order with
/// repeats collapsed; `None` unless at least two differ.
fn wave_periods(tail: &[AmountState], settings: &ClassifierSettings) -> Option<Vec<usize>> {
    let probe = |seg_len: usize| -> Vec<usize> {
        tail.chunks_exact(seg_len)
            .filter_map(|seg| detect_period(seg, settings.cyc_tol, settings.max_period))
            .collect()
    };
    // Coarse pass over halves, quarters, ... to find the longest period.
    let mut longest = None;
    let mut seg_len = tail.len() / 2;
    while seg_len >= settings.min_len() {
        longest = probe(seg_len).into_iter().max().max(longest);
        seg_len /= 2;
    }
    let seg_len = 4 * longest?;
    if seg_len * 2 > tail.len() {
        return None;
    }
    let mut periods: Vec<usize> = Vec::new();
    for p in probe(seg_len) {
        if periods.last() != Some(&p) {
            periods.push(p);
        }
    }
    let mut distinct = periods.clone();
    distinct.sort_unstable();
    distinct.dedup();
    (distinct.len() >= 2).then_some(periods)
}

fn first_unbounded(states: &[AmountState]) -> Option<usize> {
    states.iter().position(|s| {
        Substance::ALL.iter().any(|&sub| {
            let limit = s.total(sub) * (1.0 + 1e-9);
            s.get(sub).iter().any(|&x| !x.is_finite() || x > limit)
        })
    })
}
