use hitpack_core::graph::Graph;
use hitpack_core::numeric::binomial_stderr;
use hitpack_core::process::*;
use hitpack_core::spectral::{normalize_to_rm1, transition_matrix, RateMatrix};
use proptest::prelude::*;

fn table4() -> ClockAssignment {
    ClockAssignment::from_times(
        4,
        0,
        &[(0, 1, 0.7), (0, 2, 0.2), (0, 3, 1.9), (1, 2, 0.4), (1, 3, 0.9), (2, 3, 1.3)],
    )
    .unwrap()
}

fn path_rates(n: usize) -> RateMatrix {
    RateMatrix::from_fn(n, |u, v| if v == u + 1 { 1.0 } else { 0.0 }).unwrap()
}

/// Degree-by-degree replay of the sorted arrivals.
fn replay_tau(clocks: &ClockAssignment, k: usize) -> f64 {
    let mut deg = vec![0; clocks.n()];
    for a in clocks.arrivals() {
        deg[a.u] += 1;
        deg[a.v] += 1;
        if deg.iter().all(|&d| d >= k) {
            return a.time;
        }
    }
    f64::INFINITY
}

#[test]
fn zero_rate_pairs_never_arrive() {
    let c = sample_clocks(&path_rates(5), 1);
    assert_eq!(c.arrival(0, 2), f64::INFINITY);
    assert!(c.arrival(0, 1).is_finite());
    assert_eq!(c.arrivals().len(), 4);
    assert_eq!(graph_at(&c, f64::INFINITY), Graph::path(5));
    assert_eq!(graph_at(&c, 0.0).edge_count(), 0);
}

#[test]
fn clock_mean_matches_rate() {
    let r = RateMatrix::complete(2, 2.0).unwrap();
    let trials = 100_000u64;
    let mean = (0..trials).map(|s| sample_clocks(&r, s).arrival(0, 1)).sum::<f64>() / trials as f64;
    assert!((mean - 0.5).abs() < 0.01, "{mean}");
}

#[test]
fn clocks_are_deterministic() {
    let r = RateMatrix::complete(30, 0.1).unwrap();
    assert_eq!(sample_clocks(&r, 5), sample_clocks(&r, 5));
    assert_ne!(sample_clocks(&r, 5), sample_clocks(&r, 6));
}

#[test]
fn median_snapshot_of_table() {
    let c = table4();
    // Sorted: 0.2, 0.4, 0.7 | 0.9, 1.3, 1.9.
    let g = graph_at(&c, 0.7);
    let mut e = g.edges();
    e.sort();
    assert_eq!(e, vec![(0, 1), (0, 2), (1, 2)]);
}

#[test]
fn hitting_times_on_tables() {
    let c = ClockAssignment::from_times(2, 0, &[(0, 1, 0.37)]).unwrap();
    assert_eq!(hitting_time(&c, 1), 0.37);
    let c = table4();
    for k in 1..=3 {
        assert_eq!(hitting_time(&c, k), replay_tau(&c, k));
    }
    assert_eq!(hitting_time(&c, 1), 0.9);
    assert_eq!(hitting_time(&c, 4), f64::INFINITY);
}

#[test]
fn hitting_time_brackets_min_degree() {
    let r = RateMatrix::complete(60, 1.0).unwrap();
    for seed in 0..20 {
        let c = sample_clocks(&r, seed);
        let h = hitting_times(&c, &[1, 2, 3], &[2, 4]);
        let taus: Vec<f64> = h.tau_k.values().copied().collect();
        assert!(taus.windows(2).all(|w| w[0] <= w[1]));
        for (&k, &tau) in &h.tau_k {
            assert_eq!(tau, replay_tau(&c, k));
            assert!(graph_at(&c, tau).min_degree() >= k);
            assert!(graph_at(&c, tau - 1e-12).min_degree() < k);
        }
        for u in 0..60 {
            assert!(h.per_vertex_td[&2][u] <= h.per_vertex_td[&4][u]);
        }
    }
}

#[test]
fn h_matches_defining_predicate() {
    let r = RateMatrix::complete(12, 1.0).unwrap();
    for seed in 0..10 {
        let c = sample_clocks(&r, seed);
        let tau = hitting_time(&c, 2);
        let g = graph_at(&c, tau);
        assert_eq!(build_h(&c, 11, tau), g);
        let h = build_h(&c, 2, tau);
        assert!(h.min_degree() >= 2);
        assert!(h.is_subgraph_of(&g));
        for u in 0..12 {
            for v in u + 1..12 {
                let e = c.arrival(u, v);
                let want = e <= tau && e <= c.t_d(u, 2).max(c.t_d(v, 2));
                assert_eq!(h.has_edge(u, v), want, "seed {seed} pair ({u},{v})");
            }
            assert!(h.degree(u) >= g.degree(u).min(2));
        }
    }
}

#[test]
fn small_sets_at_extremes_and_trend() {
    let c = sample_clocks(&path_rates(6), 3);
    assert_eq!(small_vertex_set(&c, 0.0, 1), (0..6).collect::<Vec<_>>());
    assert_eq!(small_vertex_set(&c, f64::INFINITY, 2), vec![0, 5]);

    let fractions: Vec<f64> = [200usize, 400, 800]
        .iter()
        .map(|&n| {
            let (_, r) = normalize_to_rm1(&RateMatrix::complete(n, 1.0).unwrap()).unwrap();
            let total: usize = (0..4).map(|s| small_vertex_set(&sample_clocks(&r, s), 0.25, 2).len()).sum();
            total as f64 / (4 * n) as f64
        })
        .collect();
    assert!(fractions.windows(2).all(|w| w[1] < w[0]), "{fractions:?}");
}

#[test]
fn g_star_sandwich() {
    let r = RateMatrix::complete(40, 0.1).unwrap();
    for seed in 0..10 {
        let c = sample_clocks(&r, seed);
        let tau = hitting_time(&c, 2);
        assert_eq!(g_star(&c, 4, tau, tau, tau), graph_at(&c, tau));
        assert_eq!(g_star(&c, 0, 0.1, 0.3, tau), graph_at(&c, 0.3));
        let (t0, t1) = (0.3 * tau, 0.6 * tau);
        let gs = g_star(&c, 4, t0, t1, tau);
        assert!(graph_at(&c, t1).is_subgraph_of(&gs));
        assert!(gs.is_subgraph_of(&graph_at(&c, tau)));
    }
}

#[test]
fn d_out_shape_and_frequencies() {
    let n = 30;
    let d = 3;
    let r = RateMatrix::from_fn(n, |u, v| 1.0 + ((u * 7 + v * 3) % 5) as f64).unwrap();
    let m = transition_matrix(&r).unwrap();
    let trials = 10_000u64;
    let mut hits = vec![0u64; n];
    for s in 0..trials {
        let g = sample_d_out(&r, d, s).unwrap();
        assert!(g.out.iter().all(|o| o.len() == d));
        let e = g.graph.edge_count();
        assert!(e >= d * n / 2 && e <= d * n);
        for &v in &g.out[0] {
            hits[v] += 1;
        }
    }
    for v in 1..n {
        let bound = 2.0 * d as f64 * m.get(0, v);
        if m.get(0, v) <= 1.0 / (2 * d) as f64 {
            let freq = hits[v] as f64 / trials as f64;
            assert!(freq <= bound * 1.05, "v={v}: {freq} > {bound}");
        }
    }
    let err = sample_d_out(&path_rates(5), 2, 0).unwrap_err();
    assert!(matches!(err, hitpack_core::Error::InsufficientSupport { .. }), "{err}");
}

#[test]
fn coupling_examples() {
    let r = RateMatrix::complete(2, 1.0).unwrap();
    let dc = sample_directed_clocks(&r, 0);
    assert!(coupling_check(&dc, 1, hitting_time(&dc.undirected(), 1)));

    let r = RateMatrix::complete(50, 0.1).unwrap();
    for seed in 0..1000 {
        let dc = sample_directed_clocks(&r, seed);
        let tau = hitting_time(&dc.undirected(), 2);
        assert!(coupling_check(&dc, 4, tau), "seed {seed}");
    }
}

#[test]
fn coupling_with_tied_clocks() {
    // Every directed clock at vertex 0 ties at 1.0; the rest tie at 2.0.
    let n = 6;
    let mut x = vec![f64::INFINITY; n * n];
    for u in 0..n {
        for v in 0..n {
            if u != v {
                x[u * n + v] = if u == 0 || v == 0 { 1.0 } else { 2.0 };
            }
        }
    }
    let dc = DirectedClockAssignment::from_table(n, 0, x).unwrap();
    for d in 1..=4 {
        assert!(coupling_check(&dc, d, f64::INFINITY), "D = {d}");
        assert!(coupling_check(&dc, d, 1.5), "D = {d}");
    }
}

#[test]
fn static_sampling_marginals() {
    let n = 8;
    assert_eq!(sample_static(&ProbabilityMatrix::constant(n, 1.0).unwrap(), 1), Graph::complete(n));
    assert_eq!(sample_static(&ProbabilityMatrix::constant(n, 0.0).unwrap(), 1).edge_count(), 0);
    assert!(ProbabilityMatrix::constant(n, 1.5).is_err());

    let p = ProbabilityMatrix::from_fn(n, |u, v| ((u + v) % 4) as f64 / 4.0 + 0.1).unwrap();
    let trials = 10_000u64;
    let mut count = vec![0u64; n * n];
    for s in 0..trials {
        for (u, v) in sample_static(&p, s).edges() {
            count[u * n + v] += 1;
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let f = count[u * n + v] as f64 / trials as f64;
            assert!((f - p.get(u, v)).abs() < 0.02, "({u},{v}) {f} vs {}", p.get(u, v));
        }
    }
}

#[test]
fn process_snapshot_matches_static_law() {
    let n = 6;
    let r = RateMatrix::from_fn(n, |u, v| 0.5 + (u * v % 3) as f64).unwrap();
    let t = 0.4;
    let p = ProbabilityMatrix::at_time(&r, t).unwrap();
    let trials = 10_000u64;
    let mut count = vec![0u64; n * n];
    for s in 0..trials {
        for (u, v) in graph_at(&sample_clocks(&r, s), t).edges() {
            count[u * n + v] += 1;
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let f = count[u * n + v] as f64 / trials as f64;
            let se = (p.get(u, v) * (1.0 - p.get(u, v)) / trials as f64).sqrt();
            assert!((f - p.get(u, v)).abs() <= 3.0 * se + 1e-3, "({u},{v})");
        }
    }
}

#[test]
fn degree_tail_through_the_coupling() {
    // The light-vertex condition d_R(u) / d_R(v) <= l / 20D never holds for
    // l <= 18 and D >= 1, so the tail bound is checked through the coupling
    // step P(d_H(u) >= l) <= 2 P(d(u) >= l/2) of the D-out graph instead.
    let (n, d) = (60, 2);
    for l in [10usize, 14, 18] {
        assert!((l as f64) / (20 * d) as f64 <= 1.0);
    }
    let r = RateMatrix::from_fn(n, |u, v| if u == 0 || v == 0 { 4.0 } else { 0.2 }).unwrap();
    let trials = 4_000u64;
    let l = 6;
    let (mut h_hits, mut out_hits) = (0u64, 0u64);
    for s in 0..trials {
        let dc = sample_directed_clocks(&r, s);
        let c = dc.undirected();
        let tau = hitting_time(&c, 1);
        h_hits += (build_h(&c, d, tau).degree(0) >= l) as u64;
        out_hits += (sample_d_out(&r, d, s + trials).unwrap().graph.degree(0) >= l / 2) as u64;
    }
    let p_h = h_hits as f64 / trials as f64;
    let p_out = out_hits as f64 / trials as f64;
    let slack = 3.0 * (binomial_stderr(h_hits, trials) + 2.0 * binomial_stderr(out_hits, trials));
    assert!(p_h <= 2.0 * p_out + slack, "{p_h} vs 2 * {p_out}");
}

#[test]
fn trajectory_round_trip() {
    let c = sample_clocks(&RateMatrix::complete(9, 0.7).unwrap(), 12);
    let (back, d) = ClockAssignment::parse_trajectory(&c.to_trajectory_string(5)).unwrap();
    assert_eq!(d, 5);
    assert_eq!(back, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn snapshots_are_monotone(seed in 0u64..1_000_000, s in 0.0f64..2.0, dt in 0.0f64..2.0) {
        let c = sample_clocks(&RateMatrix::complete(15, 0.3).unwrap(), seed);
        prop_assert!(graph_at(&c, s).is_subgraph_of(&graph_at(&c, s + dt)));
    }

    #[test]
    fn h_degree_floor(seed in 0u64..1_000_000, k in 1usize..4, extra in 0usize..4) {
        let c = sample_clocks(&RateMatrix::complete(25, 0.2).unwrap(), seed);
        let tau = hitting_time(&c, k);
        prop_assert!(build_h(&c, k + extra, tau).min_degree() >= k);
    }
}
