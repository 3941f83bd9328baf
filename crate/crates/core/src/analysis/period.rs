use crate::simplex::AmountState;

/// Largest distance between `series[j]` and `series[j - lag]` over the last
/// `span` indices. `None` when the series is too short.
pub fn recurrence_residual_by<T>(
    series: &[T],
    lag: usize,
    span: usize,
    distance: impl Fn(&T, &T) -> f64,
) -> Option<f64> {
    let len = series.len();
    if lag == 0 || span == 0 || len < lag + span {
        return None;
    }
    Some(
        (len - span..len)
            .map(|j| distance(&series[j], &series[j - lag]))
            .fold(0.0, f64::max),
    )
}

pub fn recurrence_residual(series: &[AmountState], lag: usize, span: usize) -> Option<f64> {
    recurrence_residual_by(series, lag, span, AmountState::scaled_distance)
}

/// Minimal `k` in `[2, max_period]` (capped at half the series length)
/// whose lag-`k` residual, taken over the last `max(k, min_span)` points,
/// is below `tol`.
pub(crate) fn minimal_period<T>(
    series: &[T],
    tol: f64,
    max_period: usize,
    min_span: usize,
    distance: impl Fn(&T, &T) -> f64,
) -> Option<(usize, f64)> {
    let len = series.len();
    let cap = max_period.min(len / 2);
    for k in 2..=cap {
        let span = k.max(min_span);
        if len < k + span {
            break;
        }
        // Early exit: most lags fail on the first comparison.
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for j in (len - span..len).rev() {
            let d = distance(&series[j], &series[j - k]);
            if d.is_nan() || d >= tol {
                ok = false;
                break;
            }
            worst = worst.max(d);
        }
        if ok {
            return Some((k, worst));
        }
    }
    None
}

/// Period detection over an arbitrary series and distance.
///
/// A series whose second half is exactly constant has no period here:
/// period one is the fixed-point case.
pub fn detect_period_by<T: PartialEq>(
    series: &[T],
    cyc_tol: f64,
    max_period: usize,
    distance: impl Fn(&T, &T) -> f64,
) -> Option<usize> {
    let len = series.len();
    if len < 4 {
        return None;
    }
    let half = &series[len / 2..];
    if half.iter().all(|s| *s == half[0]) {
        return None;
    }
    minimal_period(series, cyc_tol, max_period, 0, distance).map(|(k, _)| k)
}

/// Minimal recurrence period of a state series, verified over one full period.
pub fn detect_period(series: &[AmountState], cyc_tol: f64, max_period: usize) -> Option<usize> {
    detect_period_by(series, cyc_tol, max_period, AmountState::scaled_distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn periodic_states(pattern: &[f64], len: usize) -> Vec<AmountState> {
        (0..len)
            .map(|j| {
                let x = pattern[j % pattern.len()];
                AmountState::new(vec![x, 10.0 - x], vec![1.0, 2.0], vec![3.0, x]).unwrap()
            })
            .collect()
    }

    #[test]
    fn constant_series_has_no_period() {
        let s = periodic_states(&[4.0], 40);
        assert_eq!(detect_period(&s, 1e-6, 100), None);
    }

    #[test]
    fn exact_seven_cycle() {
        let s = periodic_states(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0], 70);
        assert_eq!(detect_period(&s, 1e-6, 5000), Some(7));
        // Search is capped at half the length.
        assert_eq!(detect_period(&s[..13], 1e-6, 5000), None);
        assert_eq!(detect_period(&s, 1e-6, 6), None);
    }

    #[test]
    fn residual_matches_brute_force() {
        let s = periodic_states(&[1.0, 2.0, 4.0], 30);
        assert_eq!(recurrence_residual(&s, 3, 3), Some(0.0));
        let r = recurrence_residual(&s, 1, 5).unwrap();
        let brute = (25..30)
            .map(|j| s[j].scaled_distance(&s[j - 1]))
            .fold(0.0, f64::max);
        assert_eq!(r, brute);
        assert_eq!(recurrence_residual(&s, 20, 20), None);
    }

    fn scalar_series() -> impl Strategy<Value = Vec<f64>> {
        (2usize..9, 1usize..6).prop_flat_map(|(period, reps)| {
            prop::collection::vec(-1.0f64..1.0, period).prop_map(move |base| {
                let mut out = Vec::new();
                for r in 0..=reps + 2 {
                    for (i, b) in base.iter().enumerate() {
                        out.push(b + 1e-4 * ((r * 7 + i * 3) % 5) as f64);
                    }
                }
                out
            })
        })
    }

    proptest! {
        #[test]
        fn detected_period_is_minimal(series in scalar_series(), tol in 1e-6f64..1e-2) {
            let d = |a: &f64, b: &f64| (a - b).abs();
            if let Some(k) = detect_period_by(&series, tol, 1000, d) {
                for k2 in 2..k {
                    if k % k2 == 0 {
                        let r = recurrence_residual_by(&series, k2, k2, d).unwrap();
                        prop_assert!(r >= tol);
                    }
                }
                prop_assert!(recurrence_residual_by(&series, k, k, d).unwrap() < tol);
            }
        }

        #[test]
        fn looser_tolerance_keeps_detections(series in scalar_series(), tol in 1e-6f64..1e-2, factor in 1.0f64..100.0) {
            let d = |a: &f64, b: &f64| (a - b).abs();
            if detect_period_by(&series, tol, 1000, d).is_some() {
                prop_assert!(detect_period_by(&series, tol * factor, 1000, d).is_some());
            }
        }
    }
}
