mod common;

use std::path::PathBuf;

use proptest::prelude::*;
use qpm::objectives::{MismatchSource, Normalization, ObjectiveSpec, Problem, Variant};
use qpm::optimizer::{
    gwo_discrete_update, pick_donors, run_de, run_gwo_reference, run_hwsda, GwoRates, HwsdaConfig,
    TraceRow,
};
use qpm::parexec::Executor;
use qpm::physics::PhaseMismatchPair;
use qpm::rng::{Phase, Stream};

const DRAWS: usize = 10_000;

fn thg_problem(n: usize) -> Problem {
    Problem::new(
        ObjectiveSpec {
            variant: Variant::SingleThg,
            pump_wavelengths_nm: vec![1404.0],
            g0: 2.0,
            beta: 1.0,
            normalization: Normalization::Normalized,
        },
        &MismatchSource::Override(vec![PhaseMismatchPair::new(0.3, 0.7)]),
        1.0,
        n,
    )
    .unwrap()
}

fn frequency_of_plus(wolf: i8, leaders: &[i8], rates: GwoRates) -> f64 {
    let leader_rows: Vec<Vec<i8>> = leaders.iter().map(|&s| vec![s]).collect();
    let refs: Vec<&[i8]> = leader_rows.iter().map(Vec::as_slice).collect();
    let plus = (0..DRAWS)
        .filter(|&i| {
            let s = Stream::new(99, Phase::GwoDiscrete, 1, i);
            gwo_discrete_update(&[wolf], &refs, &rates, &s)[0] > 0.0
        })
        .count();
    plus as f64 / DRAWS as f64
}

fn rates(p_dist: f64, p_sl: f64, p_flip: f64, late: bool) -> GwoRates {
    GwoRates {
        p_dist,
        p_sl,
        p_flip,
        late,
    }
}

#[test]
fn unanimous_late_without_noise_is_deterministic() {
    assert_eq!(
        frequency_of_plus(-1, &[1, 1, 1, 1], rates(0.0, 0.0, 0.0, true)),
        1.0
    );
    assert_eq!(
        frequency_of_plus(1, &[-1, -1, -1, -1], rates(0.0, 0.0, 0.0, true)),
        0.0
    );
}

#[test]
fn split_early_phase_is_fair_coin() {
    let f = frequency_of_plus(1, &[1, -1, 1, -1], rates(0.0, 0.0, 0.0, false));
    assert!((f - 0.5).abs() <= 0.02, "{f}");
}

#[test]
fn three_of_four_early_phase_follows_leader_fraction() {
    let f = frequency_of_plus(-1, &[1, 1, -1, 1], rates(0.0, 0.0, 0.0, false));
    assert!((f - 0.75).abs() <= 0.02, "{f}");
}

#[test]
fn full_disturbance_ignores_leaders() {
    for leaders in [[1, 1, 1, 1], [-1, -1, -1, -1], [1, -1, -1, -1]] {
        let f = frequency_of_plus(1, &leaders, rates(1.0, 0.0, 0.0, false));
        assert!((f - 0.5).abs() <= 0.02, "{leaders:?}: {f}");
    }
}

#[test]
fn late_flip_rate() {
    let f = frequency_of_plus(1, &[1, 1, 1, 1], rates(0.0, 0.0, 0.1, true));
    assert!((f - 0.9).abs() <= 0.02, "{f}");
}

#[test]
fn social_learning_copies_a_leader() {
    // with p_sl = 1 the state is a uniformly chosen leader's
    let f = frequency_of_plus(-1, &[1, -1, -1, -1], rates(0.0, 1.0, 0.0, true));
    assert!((f - 0.25).abs() <= 0.02, "{f}");
}

#[test]
fn late_tie_keeps_own_state() {
    assert_eq!(
        frequency_of_plus(1, &[1, -1, 1, -1], rates(0.0, 0.0, 0.0, true)),
        1.0
    );
    assert_eq!(
        frequency_of_plus(-1, &[1, -1, 1, -1], rates(0.0, 0.0, 0.0, true)),
        0.0
    );
}

fn assert_elitist(trace: &[TraceRow]) {
    for w in trace.windows(2) {
        assert!(
            w[1].best >= w[0].best,
            "best fell at generation {}",
            w[1].generation
        );
    }
}

#[test]
fn run_invariants_on_thg_problem() {
    let problem = thg_problem(48);
    let config = HwsdaConfig {
        np: 30,
        generations: 40,
        seed: 11,
        ..Default::default()
    };
    let exec = Executor::new(2);
    let r = run_hwsda(&config, &problem, &exec).unwrap();
    assert_eq!(r.trace.len(), 41);
    assert_elitist(&r.trace);
    assert!(r.best.projection().iter().all(|&s| s == 1 || s == -1));
    assert_eq!(r.best.projection().len(), 48);
    for row in &r.trace {
        assert!((0.01..=0.1).contains(&row.f), "F = {}", row.f);
        assert!(row.mean <= row.best + 1e-15 && row.pop_std >= 0.0);
    }
    assert_eq!(
        r.best.fitness().unwrap().value(),
        r.trace.last().unwrap().best
    );

    let de = run_de(&config, &problem, &exec).unwrap();
    assert_elitist(&de.trace);
    let gwo = run_gwo_reference(&config, &problem, &exec).unwrap();
    assert_elitist(&gwo.trace);
}

#[test]
fn schedule_without_branches_is_monotone_with_exact_endpoints() {
    let problem = thg_problem(32);
    let mut config = HwsdaConfig {
        np: 20,
        generations: 60,
        seed: 5,
        ..Default::default()
    };
    config.adaptive.branches = false;
    let r = run_hwsda(&config, &problem, &Executor::sequential()).unwrap();
    let f: Vec<f64> = r.trace.iter().map(|t| t.f).collect();
    assert!((f[0] - 0.1).abs() <= 1e-12);
    assert!((f[60] - 0.01).abs() <= 1e-12);
    assert!(f.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn traces_do_not_depend_on_worker_count() {
    let problem = thg_problem(40);
    let config = HwsdaConfig {
        np: 24,
        generations: 25,
        seed: 3,
        ..Default::default()
    };
    let one = run_hwsda(&config, &problem, &Executor::new(1)).unwrap();
    for w in [2, 3, 8] {
        let many = run_hwsda(&config, &problem, &Executor::new(w)).unwrap();
        assert_eq!(one.trace, many.trace, "{w} workers");
        assert_eq!(one.best.genome(), many.best.genome());
    }
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden_trace_seed7.txt")
}

fn golden_text() -> String {
    let config = HwsdaConfig {
        np: 50,
        generations: 50,
        seed: 7,
        ..Default::default()
    };
    let r = run_hwsda(&config, &thg_problem(64), &Executor::new(0)).unwrap();
    r.trace
        .iter()
        .map(|t| format!("{} {:016x}\n", t.generation, t.best.to_bits()))
        .collect()
}

/// Regenerate with `QPM_BLESS=1`.
#[test]
fn golden_trace_seed_seven() {
    let text = golden_text();
    if std::env::var_os("QPM_BLESS").is_some() {
        std::fs::write(golden_path(), &text).unwrap();
    }
    let stored = std::fs::read_to_string(golden_path()).expect("golden trace file");
    assert_eq!(text, stored);
}

proptest! {
    #[test]
    fn donors_are_distinct(seed in any::<u64>(), g in 0usize..1000, np in 4usize..300, i_raw in any::<usize>()) {
        let i = i_raw % np;
        let d = pick_donors(i, np, &Stream::new(seed, Phase::DeIndices, g, i));
        prop_assert!(d.iter().all(|&r| r < np && r != i));
        prop_assert!(d[0] != d[1] && d[1] != d[2] && d[0] != d[2]);
    }

    #[test]
    fn discrete_update_yields_signs(
        seed in any::<u64>(),
        wolf in prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 1..50),
        p in 0.0f64..1.0,
        late in any::<bool>(),
    ) {
        let n = wolf.len();
        let leaders: Vec<Vec<i8>> = (0..4)
            .map(|m| (0..n).map(|j| if (j + m) % 3 == 0 { 1 } else { -1 }).collect())
            .collect();
        let refs: Vec<&[i8]> = leaders.iter().map(Vec::as_slice).collect();
        let out = gwo_discrete_update(&wolf, &refs, &rates(p, p / 2.0, p / 5.0, late), &Stream::new(seed, Phase::GwoDiscrete, 0, 0));
        prop_assert!(out.iter().all(|&x| x == 1.0 || x == -1.0));
    }
}
