//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
//! Exits nonzero when any criterion fails.

use std::time::{Duration, Instant};

use conflict_triad::analysis::recurrence_residual;
use conflict_triad::bilateral::label_changes;
use conflict_triad::simplex::TriadParams;
use conflict_triad::{
    classify, equilibrium_state, instability_probe, iterate_bilateral, normalize,
    ordering_sequence, parameter_sweep, run_triad, triad_step, AmountState, BilateralModel,
    ClassifierSettings, PhaseLabel, StochasticVector, Trajectory,
};
use conflict_triad_cli::{write_trajectory_to, PresetId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Non-collapsed triad trajectories produced along the way, for criterion 10.
#[derive(Default)]
struct Pool {
    trajectories: Vec<Trajectory>,
}

impl Pool {
    fn keep(&mut self, t: &Trajectory) {
        if t.collapse().is_none() {
            self.trajectories.push(t.clone());
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_stochastic(rng: &mut ChaCha8Rng, n: usize) -> StochasticVector {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    normalize(&v).unwrap()
}

fn equilibrium_fixed_point(pool: &mut Pool) -> Outcome {
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let mut coords =
            |scale: f64| -> Vec<f64> { (0..n).map(|_| rng.gen_range(0.01..1.0) * scale).collect() };
        let start = AmountState::new(coords(1e4), coords(100.0), coords(10.0)).unwrap();
        let mut lu = || log_uniform(&mut rng, 1e-3, 1.0);
        let params = TriadParams::new(lu(), lu(), lu(), lu(), lu(), lu()).unwrap();
        let eq = equilibrium_state(&start);
        match triad_step(&eq, &params) {
            Ok(next) => {
                for (a, b) in next.flat().zip(eq.flat()) {
                    worst = worst.max(((a - b) / b).abs());
                }
                pool.keep(&Trajectory::from_states(
                    params,
                    Default::default(),
                    vec![eq, next],
                    None,
                ));
            }
            Err(c) => return outcome(false, format!("collapse at equilibrium: {c}")),
        }
    }
    outcome(worst <= 1e-12, format!("max relative change {worst:.2e}"))
}

fn example1_attraction(pool: &mut Pool) -> Outcome {
    let cfg = PresetId::Example1.config();
    let t = run_triad(&cfg.triad, 2000).unwrap();
    pool.keep(&t);
    let last = t.last();
    let mut worst: f64 = 0.0;
    for (values, target) in [(last.p(), 7000.0), (last.r(), 42.5), (last.q(), 3.0)] {
        for v in values {
            worst = worst.max(((v - target) / target).abs());
        }
    }
    let label = classify(&t, &cfg.settings).unwrap();
    outcome(
        worst < 0.01 && label.is_fixed_point(),
        format!("max relative error {worst:.2e}, label {label}"),
    )
}

fn best_residual(states: &[AmountState], settings: &ClassifierSettings) -> (usize, f64) {
    let span = settings.window;
    (2..=settings.max_period.min(states.len() / 2 - span))
        .filter_map(|k| recurrence_residual(states, k, span.max(k)).map(|r| (k, r)))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

fn example2_cycle(pool: &mut Pool) -> Outcome {
    let cfg = PresetId::Example2.config();
    let t = run_triad(&cfg.triad, 2000).unwrap();
    pool.keep(&t);
    let label = classify(&t, &cfg.settings).unwrap();
    let late =
        Trajectory::from_states(*t.params(), t.reg_input(), t.states()[400..].to_vec(), None);
    let late_label = classify(&late, &cfg.settings).unwrap();
    let ok = |l: &PhaseLabel| matches!(l, PhaseLabel::Cycle { residual, .. } if *residual < cfg.settings.cyc_tol);
    let (k, r) = best_residual(&t.states()[1000..], &cfg.settings);
    outcome(
        ok(&label) && ok(&late_label),
        format!(
            "label {label}, steps >= 400 label {late_label}; best lag {k} residual {r:.2e} vs cyc_tol {:.0e}",
            cfg.settings.cyc_tol
        ),
    )
}

fn q_perturbation(pool: &mut Pool) -> Outcome {
    let cfg = PresetId::Example1.config();
    let r = parameter_sweep(
        &cfg.triad,
        "Q_2".parse().unwrap(),
        &[1.0, 4.0],
        2000,
        &cfg.settings,
    )
    .unwrap();
    for v in [1.0, 4.0] {
        let c = "Q_2"
            .parse::<conflict_triad::Selector>()
            .unwrap()
            .apply(&cfg.triad, v)
            .unwrap();
        pool.keep(&run_triad(&c, 2000).unwrap());
    }
    let (a, b) = (&r.points[0].label, &r.points[1].label);
    outcome(
        a.is_fixed_point() && !b.is_fixed_point(),
        format!("Q_2=1: {a}, Q_2=4: {b}"),
    )
}

fn minus_minus_convergence() -> Outcome {
    let mut rng = rng(5);
    let mut failures = 0;
    let mut worst_theta: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let q = random_stochastic(&mut rng, n);
        let r = random_stochastic(&mut rng, n);
        if q == r {
            continue;
        }
        let t = iterate_bilateral(BilateralModel::MinusMinus, &q, &r, 10_000).unwrap();
        let last = t.last();
        let theta = last.x.inner(&last.y).unwrap().value();
        worst_theta = worst_theta.max(theta);
        let separated = (0..n).all(|i| last.x[i].min(last.y[i]) < 1e-4);
        if t.failure().is_some() || theta >= 1e-4 || !separated {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{failures}/200 failures, max final theta {worst_theta:.2e}"),
    )
}

fn minus_minus_equal_vectors() -> Outcome {
    let mut rng = rng(6);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 2..=10 {
        for m in 1..=n {
            let mut support: Vec<usize> = (0..n).collect();
            support.shuffle(&mut rng);
            support.truncate(m);
            let mut v = vec![0.0; n];
            for &i in &support {
                v[i] = rng.gen_range(0.01..1.0);
            }
            let q = normalize(&v).unwrap();
            let t = iterate_bilateral(BilateralModel::MinusMinus, &q, &q, 10_000).unwrap();
            if t.failure().is_some() && m > 1 {
                return outcome(false, format!("n={n} m={m} stopped early"));
            }
            let last = t.last();
            for i in 0..n {
                let target = if support.contains(&i) {
                    1.0 / m as f64
                } else {
                    0.0
                };
                worst = worst
                    .max((last.x[i] - target).abs())
                    .max((last.y[i] - target).abs());
            }
            cases += 1;
        }
    }
    outcome(
        worst <= 1e-9,
        format!("{cases} cases, max error {worst:.2e}"),
    )
}

fn phase_two() -> Outcome {
    let mut rng = rng(7);
    let mut problems = Vec::new();
    for n in 2..=6 {
        for trial in 0..10 {
            let zero = rng.gen_range(0..n);
            let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
            p[zero] = 0.0;
            let p = normalize(&p).unwrap();
            let r = random_stochastic(&mut rng, n);
            let t = iterate_bilateral(BilateralModel::PlusMinus, &p, &r, 100_000).unwrap();
            if let Some(f) = t.failure() {
                problems.push(format!("n={n}#{trial} stopped at {}", f.step));
                continue;
            }
            let series: Vec<f64> = t.states().iter().map(|s| s.y[zero]).collect();
            let monotone = series.windows(2).all(|w| w[1] >= w[0]);
            let last = t.last();
            let theta = last.x.inner(&last.y).unwrap().value();
            if !monotone || series[series.len() - 1] <= 1.0 - 1e-3 || theta >= 1e-4 {
                problems.push(format!(
                    "n={n}#{trial}: monotone {monotone}, r_i {:.6}, theta {theta:.2e}",
                    series[series.len() - 1]
                ));
            }
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            "50 configurations (n = 2..6)".to_string()
        } else {
            problems.join("; ")
        },
    )
}

fn phase_three() -> Outcome {
    let mut rng = rng(8);
    let mut escaped = 0;
    let mut disordered = 0;
    let mut first_escape = usize::MAX;
    let (mut changes, mut backward) = (0usize, 0usize);
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let p = random_stochastic(&mut rng, n);
        let r = random_stochastic(&mut rng, n);
        let t = iterate_bilateral(BilateralModel::PlusMinus, &p, &r, 100_000).unwrap();
        let exit = t.states().iter().position(|s| {
            s.x.coords()
                .iter()
                .chain(s.y.coords())
                .any(|&c| !(c > 1e-12 && c < 1.0 - 1e-12))
        });
        if let Some(step) = exit.or(t.failure().map(|f| f.step)) {
            escaped += 1;
            first_escape = first_escape.min(step);
        }
        let mut ordered = true;
        for i in 0..n {
            let seq = label_changes(&ordering_sequence(&t, i).unwrap());
            changes += seq.len().saturating_sub(1);
            let bad = seq.windows(2).filter(|w| w[1] != w[0].successor()).count();
            backward += bad;
            ordered &= bad == 0;
        }
        if !ordered {
            disordered += 1;
        }
    }
    outcome(
        escaped == 0 && disordered == 0,
        format!(
            "{escaped}/50 left (1e-12, 1-1e-12) (earliest step {}), {disordered}/50 broke the label cycle ({backward} of {changes} changes out of order)",
            if first_escape == usize::MAX { 0 } else { first_escape }
        ),
    )
}

fn instability() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for eps in [1e-6, 1e-4, 1e-2] {
        for n in [2, 4, 8] {
            match instability_probe(eps, n, 100) {
                Ok((a, b)) => {
                    pass &= b > a;
                    detail.push(format!("{:.0}x", b / a));
                }
                Err(e) => {
                    pass = false;
                    detail.push(e.to_string());
                }
            }
        }
    }
    outcome(pass, format!("growth {}", detail.join(" ")))
}

fn conservation_and_equivariance(pool: &Pool) -> Outcome {
    let mut rng = rng(10);
    let mut drift: f64 = 0.0;
    let mut gap: f64 = 0.0;
    let mut states = 0;
    for t in &pool.trajectories {
        let initial = t.first().totals();
        for (k, s) in t.states().iter().enumerate() {
            states += 1;
            for (j, sub) in conflict_triad::Substance::ALL.into_iter().enumerate() {
                let sum: f64 = s.get(sub).iter().sum();
                drift = drift.max(((sum - initial[j]) / initial[j]).abs());
            }
            if k % 97 == 0 {
                let mut perm: Vec<usize> = (0..s.n()).collect();
                perm.shuffle(&mut rng);
                let a = t.step(s).map(|x| x.permuted(&perm).unwrap());
                let b = t.step(&s.permuted(&perm).unwrap());
                match (a, b) {
                    (Ok(a), Ok(b)) => gap = gap.max(a.scaled_distance(&b)),
                    (Err(_), Err(_)) => {}
                    _ => gap = f64::INFINITY,
                }
            }
        }
    }
    outcome(
        drift < 1e-9 && gap <= 1e-12,
        format!(
            "{} trajectories, {states} states; total drift {drift:.2e}, permutation gap {gap:.2e}",
            pool.trajectories.len()
        ),
    )
}

fn quasi_chaos(pool: &mut Pool) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for id in [PresetId::FigMultidim, PresetId::FigBasins] {
        let cfg = id.config();
        let t = run_triad(&cfg.triad, 10_000).unwrap();
        pool.keep(&t);
        let label = classify(&t, &cfg.settings).unwrap();
        pass &= matches!(
            label,
            PhaseLabel::QuasiChaotic | PhaseLabel::WaveOfCycles { .. }
        );
        detail.push(format!("{}: {label}", id.name()));
    }
    outcome(pass, detail.join(", "))
}

fn determinism() -> Outcome {
    let csv = |id: PresetId| {
        let cfg = id.config();
        let t = run_triad(&cfg.triad, 2000).unwrap();
        let mut buf = Vec::new();
        write_trajectory_to(&t, &mut buf).unwrap();
        buf
    };
    let mut pass = true;
    let mut bytes = 0;
    for id in [PresetId::Example1, PresetId::Example2] {
        let a = csv(id);
        let b = csv(id);
        bytes += a.len();
        pass &= a == b;
    }
    outcome(pass, format!("{bytes} bytes compared"))
}

fn main() {
    let mut pool = Pool::default();
    let mut results: Vec<(usize, &str, Duration, Outcome, Duration)> = Vec::new();
    let s = |x: f64| Duration::from_secs_f64(x);
    macro_rules! criterion {
        ($id:expr, $name:expr, $budget:expr, $body:expr) => {{
            let start = Instant::now();
            let out = $body;
            results.push(($id, $name, start.elapsed(), out, $budget));
        }};
    }
    criterion!(
        1,
        "equilibrium fixed point",
        s(1.0),
        equilibrium_fixed_point(&mut pool)
    );
    criterion!(
        2,
        "example1 attraction",
        s(1.0),
        example1_attraction(&mut pool)
    );
    criterion!(3, "example2 cycle", s(1.0), example2_cycle(&mut pool));
    criterion!(
        4,
        "Q_2 perturbation phase change",
        s(1.0),
        q_perturbation(&mut pool)
    );
    criterion!(
        5,
        "minus-minus convergence",
        s(10.0),
        minus_minus_convergence()
    );
    criterion!(
        6,
        "minus-minus equal vectors",
        s(5.0),
        minus_minus_equal_vectors()
    );
    criterion!(7, "plus-minus phase II", s(10.0), phase_two());
    criterion!(
        8,
        "plus-minus phase III containment and ordering",
        s(30.0),
        phase_three()
    );
    criterion!(9, "uniform point instability", s(1.0), instability());
    criterion!(11, "quasi-chaos presets", s(5.0), quasi_chaos(&mut pool));
    criterion!(
        10,
        "conservation and equivariance",
        s(30.0),
        conservation_and_equivariance(&pool)
    );
    criterion!(12, "determinism", s(5.0), determinism());
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (id, name, elapsed, out, budget) in &results {
        let in_time = elapsed <= budget;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let timing = if in_time {
            String::new()
        } else {
            format!(" over budget {:.0?}", budget)
        };
        println!(
            "{} criterion {id:>2} {name} ({:.2?}{timing}): {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            out.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
