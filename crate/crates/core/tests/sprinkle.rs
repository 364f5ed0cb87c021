use hitpack_core::rng::{seeded, trial_rng};
use hitpack_core::sprinkle::*;
use hitpack_core::{Graph, RateMatrix};
use proptest::prelude::*;
use rand::Rng;

fn random_instance(m: usize, edge_p: f64, seed: u64) -> SprinkleInstance {
    let mut rng = seeded(seed);
    let mut adj = vec![Vec::new(); m];
    for x in 0..m {
        for y in x + 1..m {
            if rng.random::<f64>() < edge_p {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
    }
    let p = (0..m).map(|_| rng.random::<f64>() * 0.6).collect();
    SprinkleInstance::explicit(p, adj).unwrap()
}

#[test]
fn xp_extremes_and_frequencies() {
    let inst = random_instance(10, 0.3, 1);
    let ones = SprinkleInstance::explicit(vec![1.0; 10], vec![Vec::new(); 10]).unwrap();
    assert_eq!(sample_xp(&ones, 4), (0..10).collect::<Vec<_>>());
    let zeros = SprinkleInstance::explicit(vec![0.0; 10], vec![Vec::new(); 10]).unwrap();
    assert!(sample_xp(&zeros, 4).is_empty());
    assert_eq!(sample_xp(&inst, 9), sample_xp(&inst, 9));

    let trials = 10_000u64;
    let mut counts = [0u64; 10];
    for t in 0..trials {
        for (c, on) in counts.iter_mut().zip(sample_xp_mask(&inst, &mut trial_rng(3, t))) {
            *c += u64::from(on);
        }
    }
    for x in 0..10 {
        let p = inst.p()[x];
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((counts[x] as f64 / trials as f64 - p).abs() <= 3.0 * se + 1e-12);
    }
}

#[test]
fn conflict_graph_for_pairs() {
    // G = path 0-1-2-3; X = {02, 13, 03}.
    let g = Graph::path(4);
    let inst = SprinkleInstance::from_pairs(&g, vec![(0, 2), (1, 3), (0, 3)], vec![0.5; 3]).unwrap();
    assert!(inst.adjacent(0, 1));
    assert!(inst.adjacent(0, 2));
    assert_eq!(inst.neighbors(2), vec![0, 1]);
    assert!((inst.delta() - 1.0).abs() < 1e-12);
}

#[test]
fn miss_probability_r1() {
    let inst = random_instance(12, 0.0, 2);
    let family: Vec<Vec<usize>> = (0..6).map(|x| vec![x]).collect();
    let rep = miss_probability(&inst, &family, 20_000, 5).unwrap();
    let exact = rep.exact.unwrap();
    assert!(exact <= (-rep.p_family).exp());
    assert!((rep.estimate - exact).abs() <= 4.0 * rep.stderr + 1e-9);

    let mut p = inst.p().to_vec();
    p[0] = 1.0;
    let sure = SprinkleInstance::explicit(p, vec![Vec::new(); 12]).unwrap();
    assert_eq!(miss_probability(&sure, &family, 1000, 5).unwrap().estimate, 0.0);
}

#[test]
fn miss_probability_rejects_mixed_sizes() {
    let inst = random_instance(8, 0.5, 3);
    let paths = inst.enumerate_paths(2, 10);
    let mut fam = paths.clone();
    fam.push(vec![0]);
    assert!(miss_probability(&inst, &fam, 10, 1).is_err());
    assert!(miss_probability(&inst, &[], 10, 1).is_err());
}

#[test]
fn miss_probability_r2_is_below_bound() {
    let inst = random_instance(30, 0.3, 4);
    let fam = inst.enumerate_paths(2, usize::MAX);
    let rep = miss_probability(&inst, &fam, 10_000, 6).unwrap();
    assert_eq!(rep.r, 2);
    assert!(rep.within_bound(3.0), "{rep:?}");
}

#[test]
fn exploration_single_path_with_certain_elements() {
    let p = vec![1.0, 1.0, 1.0, 0.2];
    let adj = vec![vec![1], vec![0, 2], vec![1, 3], vec![2]];
    let inst = SprinkleInstance::explicit(p, adj).unwrap();
    let fam = vec![vec![0, 1, 2]];
    let mask = vec![true; 4];
    let trace = useful_exploration(&inst, &fam, &mask).unwrap();
    assert_eq!(trace.outcome, ExplorationOutcome::Success);
    assert!(trace.steps.len() <= 3);
}

#[test]
fn exploration_with_zero_probability() {
    let inst = SprinkleInstance::explicit(vec![0.0; 3], vec![vec![1], vec![0, 2], vec![1]]).unwrap();
    let trace = useful_exploration(&inst, &[vec![0, 1, 2]], &[false; 3]).unwrap();
    assert!(trace.steps.is_empty());
    assert_eq!(trace.outcome, ExplorationOutcome::Failure);
}

#[test]
fn exploration_on_random_instances() {
    let mut failures = 0u64;
    let mut bound_sum = 0.0;
    let total = 1000u64;
    for s in 0..total {
        let m = 10 + (s as usize % 31);
        let r = 2 + (s as usize % 2);
        let inst = random_instance(m, 0.15, 100 + s);
        let fam = inst.enumerate_paths(r, 5000);
        if fam.is_empty() {
            continue;
        }
        let mask = sample_xp_mask(&inst, &mut seeded(s));
        let trace = useful_exploration(&inst, &fam, &mask).unwrap();
        assert_ne!(trace.outcome, ExplorationOutcome::Contradiction, "seed {s}");
        check_trace(&trace);
        failures += u64::from(trace.outcome == ExplorationOutcome::Failure);
        bound_sum += (-trace.p_family / (24.0 * trace.delta.powi(r as i32 - 1))).exp();
    }
    // The per-instance failure bound, averaged, with slack for sampling noise.
    let rate = failures as f64 / total as f64;
    assert!(rate <= bound_sum / total as f64 * 1.1 + 0.03, "failure rate {rate}");
}

fn check_trace(trace: &ExplorationTrace) {
    let mut last_q = 0.0;
    let mut last_z = 0.0;
    for s in &trace.steps {
        assert!(s.q_mass >= last_q);
        assert!(s.z_mass > last_z);
        assert!(s.gain >= trace.useful_threshold);
        last_q = s.q_mass;
        last_z = s.z_mass;
    }
}

#[test]
fn boost_isolated_pair() {
    let n = 12;
    let g = Graph::from_edges(n, (0..5).map(|i| (2 * i, 2 * i + 1))).unwrap();
    let r = RateMatrix::complete(n, 1.8).unwrap();
    let params = BoostParams { i: 1, scale: 1.0 / 3.0, trials: 1000, seed: 8, require_se: None };
    let rep = boost_experiment(&g, &r, &params).unwrap();
    assert!(rep.fraction >= 0.99, "fraction {}", rep.fraction);
    assert_eq!(rep.records.len(), 1000);

    let zero = BoostParams { scale: 0.0, ..params.clone() };
    assert_eq!(boost_experiment(&g, &r, &zero).unwrap().fraction, 0.0);

    let ham = BoostParams { i: 2, ..params };
    assert!(boost_experiment(&Graph::cycle(n), &r, &ham).is_err());
}

#[test]
fn boost_fraction_grows_with_n() {
    // A perfect matching minus one edge: the two exposed vertices need a booster.
    let mut fractions = Vec::new();
    for n in [10usize, 12, 14] {
        let g = Graph::from_edges(n, (0..n / 2 - 1).map(|i| (2 * i, 2 * i + 1))).unwrap();
        let r = RateMatrix::complete(n, 0.6).unwrap();
        let params = BoostParams { i: 1, scale: 1.0 / 3.0, trials: 20_000, seed: 3, require_se: None };
        fractions.push(boost_experiment(&g, &r, &params).unwrap().fraction);
    }
    assert!(fractions.windows(2).all(|w| w[1] > w[0]), "{fractions:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn miss_rate_respects_bound_under_hypothesis(seed in 0u64..100_000, m in 6usize..20) {
        let inst = random_instance(m, 0.4, seed);
        let fam = inst.enumerate_paths(2, usize::MAX);
        prop_assume!(!fam.is_empty());
        let rep = miss_probability(&inst, &fam, 4000, seed).unwrap();
        if rep.hypothesis {
            prop_assert!(rep.within_bound(3.0));
        }
    }
}
