use hitpack_core::graph::*;
use hitpack_core::packing::maximum_matching;
use hitpack_core::process::{build_h, hitting_time, sample_clocks, sample_static, ProbabilityMatrix};
use hitpack_core::spectral::{normalize_to_rm1, RateMatrix};
use hitpack_core::Error;
use proptest::prelude::*;

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_static(&ProbabilityMatrix::constant(n, p).unwrap(), seed)
}

fn petersen() -> Graph {
    let mut e: Vec<Edge> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    e.extend((0..5).map(|i| (i, i + 5)));
    e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
    Graph::from_edges(10, e).unwrap()
}

#[test]
fn k5_decomposes_into_two_hamilton_cycles() {
    let g = Graph::complete(5);
    let f = KGraph::new(4, vec![Component::Cycle(vec![0, 1, 2, 3, 4]), Component::Cycle(vec![0, 2, 4, 1, 3])], None);
    let check = is_certificate_for_a_k(&g, &f, 4);
    assert!(check.accepted, "{:?}", check.violations);
    assert_eq!(s_k_size(&f), 10);
}

#[test]
fn k4_cycle_plus_matching() {
    let g = Graph::complete(4);
    let f = KGraph::new(3, vec![Component::Cycle(vec![0, 1, 2, 3])], Some(vec![(0, 2), (1, 3)]));
    assert!(is_certificate_for_a_k(&g, &f, 3).accepted);
    assert_eq!(f.edges().len(), 6);

    let short = KGraph::new(3, vec![Component::Cycle(vec![0, 1, 2, 3])], Some(vec![(0, 2)]));
    let check = is_certificate_for_a_k(&g, &short, 3);
    assert!(!check.accepted);
    assert!(check.violations.iter().any(|v| matches!(v, Violation::EdgeDeficit { .. })));

    let outside = is_certificate_for_a_k(&Graph::cycle(4), &f, 3);
    assert!(outside.violations.iter().any(|v| matches!(v, Violation::EdgeNotInGraph { .. })));
}

#[test]
fn exact_s_k_examples() {
    assert_eq!(exact_s_k(&Graph::cycle(5), 2).unwrap(), 5);
    let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
    assert_eq!(exact_s_k(&star, 1).unwrap(), 1);
    let p = petersen();
    assert_eq!(exact_s_k(&p, 1).unwrap(), 5);
    assert_eq!(maximum_matching(&p).len(), 5);
    assert!(matches!(exact_s_k(&Graph::complete(13), 1), Err(Error::TooLarge { .. })));
}

#[test]
fn expansion_examples() {
    let rep = expansion_check(&Graph::complete(12), 2, 0.25);
    assert!(rep.pass());
    assert_eq!(rep.method, ExpansionMethod::Exhaustive);
    let rep = expansion_check(&Graph::path(20), 2, 0.3);
    let w = rep.witness.expect("interval witness");
    assert!(w.len() < 6);
    assert!(Graph::path(20).neighborhood(&w).len() < 2 * w.len());
}

#[test]
fn sampled_expansion_agrees_with_exhaustive_on_h() {
    let (_, r) = normalize_to_rm1(&RateMatrix::complete(20, 1.0).unwrap()).unwrap();
    for seed in 0..10 {
        let c = sample_clocks(&r, seed);
        let h = build_h(&c, 8, hitting_time(&c, 2));
        for k in [1, 2, 3] {
            let ex = expansion_check_exhaustive(&h, k, 0.25);
            let sa = expansion_check_sampled(&h, k, 0.25, 20_000, seed);
            assert_eq!(ex.pass(), sa.pass(), "seed {seed} k {k}");
        }
    }
}

#[test]
fn light_tail_examples_and_trend() {
    let g = gnp(30, 0.2, 1);
    let r = RateMatrix::complete(30, 1.0).unwrap();
    let tail = light_tail_check(&g, &r, (g.max_degree() + 1) as f64);
    assert!(tail.s_theta.is_empty() && tail.closed_fraction == 0.0);
    assert!(light_tail_check(&Graph::complete(30), &r, 30.0).s_theta.is_empty());

    // theta = D ln ln n; at ln ln n itself every vertex of H is heavy.
    let d = 8;
    let fractions: Vec<f64> = [200usize, 400, 800]
        .iter()
        .map(|&n| {
            let (_, r) = normalize_to_rm1(&RateMatrix::complete(n, 1.0).unwrap()).unwrap();
            let theta = d as f64 * (n as f64).ln().ln();
            (0..10)
                .map(|s| {
                    let c = sample_clocks(&r, s);
                    light_tail_check(&build_h(&c, d, hitting_time(&c, 2)), &r, theta).closed_fraction
                })
                .sum::<f64>()
                / 10.0
        })
        .collect();
    assert!(fractions.windows(2).all(|w| w[1] < w[0]), "{fractions:?}");
}

#[test]
fn se_class_examples() {
    let r = RateMatrix::complete(12, 1.0).unwrap();
    for k in 1..=2 {
        assert!(se_class_check(&Graph::complete(12), &r, k, 0.25, 100.0, 0.1).pass);
    }
    assert!(!se_class_check(&Graph::new(12), &r, 1, 0.25, 100.0, 0.1).pass);

    let (_, r) = normalize_to_rm1(&RateMatrix::complete(20, 1.0).unwrap()).unwrap();
    for seed in 0..10 {
        let c = sample_clocks(&r, seed);
        let h = build_h(&c, 8, hitting_time(&c, 3));
        let Ok(Some(cycle)) = hamilton_cycle_dp(&h) else { continue };
        let edges = Component::Cycle(cycle).edges();
        let rest = h.without_edges(&edges);
        let se = se_class_check(&rest, &r, 1, 0.2, 1e9, 1.0);
        assert_eq!(se.pass, expansion_check_exhaustive(&rest, 1, 0.2).pass());
    }
}

#[test]
fn text_formats_round_trip() {
    let g = gnp(9, 0.4, 3);
    assert_eq!(Graph::parse_edge_list(&g.to_edge_list_string()).unwrap(), g);
    let f = KGraph::new(3, vec![Component::Cycle(vec![0, 1, 2, 3])], Some(vec![(0, 2), (1, 3)]));
    assert_eq!(KGraph::parse(&f.to_text()).unwrap(), f);
    assert!(matches!(Graph::parse_edge_list("3 1\n0 3\n"), Err(Error::Parse { line: 2, .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certificates_match_exact_s_k(seed in 0u64..1_000_000, n in 3usize..=9, k in 1usize..=3, p in 0.4f64..0.95) {
        let g = gnp(n, p, seed);
        let best = exact_max_k_graph(&g, k).unwrap();
        let full = k * n / 2;
        let check = is_certificate_for_a_k(&g, &best, k);
        prop_assert_eq!(check.accepted, exact_s_k(&g, k).unwrap() == full);
        prop_assert!(best.edges().iter().all(|&(u, v)| g.has_edge(u, v)));
    }

    #[test]
    fn s_k_is_monotone(seed in 0u64..1_000_000, n in 3usize..=8, k in 1usize..=2) {
        let g = gnp(n, 0.4, seed);
        let base = exact_s_k(&g, k).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if !g.has_edge(u, v) {
                    let mut h = g.clone();
                    h.add_edge(u, v);
                    prop_assert!(exact_s_k(&h, k).unwrap() >= base);
                }
            }
        }
    }

    #[test]
    fn se_closure_under_sparse_removal(seed in 0u64..1_000_000, n in 10usize..=16) {
        let g = gnp(n, 0.75, seed);
        let (k, beta) = (3, 0.2);
        prop_assume!(expansion_check_exhaustive(&g, k, beta).pass());
        // F: a maximal matching, so Delta(F) = 1.
        let mut used = vec![false; n];
        let mut f = Vec::new();
        for (u, v) in g.edges() {
            if !used[u] && !used[v] && !(u + v + seed as usize).is_multiple_of(3) {
                used[u] = true;
                used[v] = true;
                f.push((u, v));
            }
        }
        prop_assert!(expansion_check_exhaustive(&g.without_edges(&f), k - 1, beta).pass());
    }
}
