use corruptnet_core::certify::{certify, CertVerdict, CertifyOptions, Condition, Criterion, MethodChoice};
use corruptnet_core::constructions::{
    build_np_gadget, build_separator_scenarios, dense_gadget, independent_sets, verify_indistinguishable,
};
use corruptnet_core::detection::{
    agreement_components, agreement_graph, certain_labels, detect_directed, detect_undirected, max_weight_independent_set_budgeted,
    ComponentWeights, DetectMode, Label,
};
use corruptnet_core::generators::{complete, complete_digraph, grid};
use corruptnet_core::graph::{connected_components, strongly_connected_components, Graph};
use corruptnet_core::reporting::{
    consistency_check, enumerate_consistent, generate_reports, mirror_set, Adversary, ReportSet, Verdict, World,
    ORACLE_BOUND,
};
use num_rational::Rational64;
use proptest::prelude::*;

fn arb_graph(directed: bool, max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        let pairs = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |keep| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in 0..n {
                    if u == v || (!directed && v < u) {
                        continue;
                    }
                    if keep[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, directed, edges).unwrap()
        })
    })
}

fn arb_world(n: usize) -> impl Strategy<Value = World> {
    proptest::collection::vec(any::<bool>(), n).prop_map(World::from_flags)
}

fn arb_adversary(n: usize, arcs: usize) -> impl Strategy<Value = Adversary> {
    prop_oneof![
        Just(Adversary::MirrorConfusion { pairing: None }),
        Just(Adversary::ColludePraise),
        Just(Adversary::AllAccuse),
        any::<u64>().prop_map(|seed| Adversary::Random { seed }),
        proptest::collection::vec(any::<bool>(), n).prop_map(|sep| Adversary::ScenarioRi {
            separator: (0..sep.len()).filter(|&v| sep[v]).collect(),
        }),
        proptest::collection::vec(any::<bool>(), arcs).prop_map(|v| Adversary::Scripted {
            verdicts: v.into_iter().map(Verdict::from_bool).collect(),
        }),
    ]
}

fn instance(directed: bool, max_n: usize) -> impl Strategy<Value = (Graph, World, Adversary)> {
    arb_graph(directed, max_n).prop_flat_map(|g| {
        let (n, arcs) = (g.n(), g.arc_count());
        (Just(g), arb_world(n), arb_adversary(n, arcs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn true_world_is_consistent((g, w, adv) in instance(false, 10)) {
        let r = generate_reports(&g, &w, &adv).unwrap();
        prop_assert!(consistency_check(&g, &r, &w));
    }

    #[test]
    fn truthful_reports_ignore_the_adversary((g, w, adv) in instance(true, 9)) {
        let r = generate_reports(&g, &w, &adv).unwrap();
        let base = generate_reports(&g, &w, &Adversary::AllAccuse).unwrap();
        for (u, v, idx) in g.arcs() {
            if w.is_truthful(u) {
                prop_assert_eq!(r.by_index(idx), base.by_index(idx));
                prop_assert_eq!(r.by_index(idx), w.verdict(v));
            }
        }
    }

    #[test]
    fn agreement_components_are_type_pure((g, w, adv) in instance(false, 12)) {
        let r = generate_reports(&g, &w, &adv).unwrap();
        let parts = connected_components(&agreement_graph(&g, &r).unwrap()).unwrap();
        for c in &parts.components {
            prop_assert!(c.iter().all(|&v| w.is_truthful(v) == w.is_truthful(c[0])));
        }
    }

    #[test]
    fn union_find_components_match_traversal((g, w, adv) in instance(false, 12)) {
        let r = generate_reports(&g, &w, &adv).unwrap();
        let direct = connected_components(&agreement_graph(&g, &r).unwrap()).unwrap();
        prop_assert_eq!(agreement_components(&g, &r).unwrap(), direct);
    }

    #[test]
    fn filtered_strong_components_match_agreement_digraph((g, w, adv) in instance(true, 10)) {
        let r = generate_reports(&g, &w, &adv).unwrap();
        let direct = strongly_connected_components(&agreement_graph(&g, &r).unwrap()).unwrap();
        prop_assert_eq!(agreement_components(&g, &r).unwrap(), direct);
    }

    #[test]
    fn strong_components_are_type_pure((g, w, adv) in instance(true, 10)) {
        let r = generate_reports(&g, &w, &adv).unwrap();
        let parts = strongly_connected_components(&agreement_graph(&g, &r).unwrap()).unwrap();
        for c in &parts.components {
            prop_assert!(c.iter().all(|&v| w.is_truthful(v) == w.is_truthful(c[0])));
        }
    }

    #[test]
    fn enumeration_agrees_with_consistency_check((g, w, adv) in instance(false, 8), min_t in 0usize..6) {
        let r = generate_reports(&g, &w, &adv).unwrap();
        let listed = enumerate_consistent(&g, &r, min_t, ORACLE_BOUND).unwrap();
        let n = g.n();
        let mut expect = Vec::new();
        for mask in 0u32..1 << n {
            let cand = World::from_flags((0..n).map(|v| mask >> v & 1 == 1).collect());
            if cand.truthful_count() >= min_t && consistency_check(&g, &r, &cand) {
                expect.push(cand);
            }
        }
        let mut got = listed.clone();
        got.sort_by_key(|w| w.flags().to_vec());
        expect.sort_by_key(|w| w.flags().to_vec());
        prop_assert_eq!(got, expect);
        if w.truthful_count() >= min_t {
            prop_assert!(listed.contains(&w));
        }
    }

    /// Under a truthful majority a giant agreement component is truthful, so
    /// whatever the fast path labels without falling back is correct.
    #[test]
    fn fast_path_is_sound_under_majority((g, w, adv) in instance(false, 12), delta in 0.0f64..0.125) {
        prop_assume!(2 * w.truthful_count() > g.n());
        let r = generate_reports(&g, &w, &adv).unwrap();
        if let Ok(res) = detect_undirected(&g, &r, DetectMode::Fast, delta) {
            if res.notices.is_empty() {
                for v in 0..g.n() {
                    if res.labels[v] != Label::Unknown {
                        prop_assert_eq!(res.labels[v], Label::from(w.verdict(v)));
                    }
                }
                let oracle = certain_labels(&g, &r).unwrap();
                for v in 0..g.n() {
                    if res.labels[v] != Label::Unknown {
                        prop_assert_eq!(res.labels[v], oracle.labels[v]);
                    }
                }
            }
        }
    }

    #[test]
    fn mwis_matches_enumeration(
        sizes in proptest::collection::vec(1usize..20, 1..=12),
        edge_bits in proptest::collection::vec(any::<bool>(), 66),
        forced_pick in any::<prop::sample::Index>(),
    ) {
        let k = sizes.len();
        let mut edges = Vec::new();
        let mut bit = 0;
        for a in 0..k {
            for b in a + 1..k {
                if edge_bits[bit] {
                    edges.push((a, b));
                }
                bit += 1;
            }
        }
        let s = ComponentWeights::from_parts(sizes.clone(), &edges).unwrap();
        let forced = forced_pick.index(k);
        let (best, set) = max_weight_independent_set_budgeted(&s, forced, u64::MAX).unwrap();
        let adjacent = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
        let mut oracle: Option<(usize, Vec<usize>)> = None;
        for mask in 0u32..1 << k {
            if mask >> forced & 1 == 0 {
                continue;
            }
            let members: Vec<usize> = (0..k).filter(|&v| mask >> v & 1 == 1).collect();
            if members.iter().any(|&a| members.iter().any(|&b| a < b && adjacent(a, b))) {
                continue;
            }
            let w: usize = members.iter().map(|&v| sizes[v]).sum();
            oracle = match oracle {
                Some((bw, bs)) if bw > w || (bw == w && bs <= members) => Some((bw, bs)),
                _ => Some((w, members)),
            };
        }
        prop_assert_eq!((best, set), oracle.unwrap());
    }

    #[test]
    fn expansion_condition_monotone_in_delta(g in arb_graph(false, 11), d1 in 0.01f64..0.124, d2 in 0.01f64..0.124) {
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let opts = CertifyOptions { method: MethodChoice::Exhaustive, ..CertifyOptions::default() };
        let expansion = |delta: f64| {
            certify(&g, delta, Criterion::UndirectedGood, &opts)
                .unwrap()
                .conditions
                .iter()
                .find(|c| c.condition == Condition::Expansion)
                .map_or(CertVerdict::Pass, |c| c.verdict)
        };
        // a pass at the larger delta covers every set checked at the smaller one
        if expansion(hi) == CertVerdict::Pass {
            prop_assert_eq!(expansion(lo), CertVerdict::Pass);
        }
    }

    #[test]
    fn adding_edges_keeps_conditions(g in arb_graph(false, 10), extra in proptest::collection::vec((0usize..10, 0usize..10), 1..6), delta in 0.02f64..0.124) {
        let n = g.n();
        let mut edges = g.edges().to_vec();
        edges.extend(extra.into_iter().map(|(a, b)| ((a % n).min(b % n), (a % n).max(b % n))).filter(|(a, b)| a != b));
        edges.sort_unstable();
        edges.dedup();
        let bigger = Graph::undirected(n, edges).unwrap();
        let opts = CertifyOptions { method: MethodChoice::Exhaustive, ..CertifyOptions::default() };
        for criterion in [Criterion::UndirectedGood, Criterion::DeltaConnected] {
            let a = certify(&g, delta, criterion, &opts).unwrap();
            let b = certify(&bigger, delta, criterion, &opts).unwrap();
            for (ca, cb) in a.conditions.iter().zip(&b.conditions) {
                if ca.verdict == CertVerdict::Pass {
                    prop_assert_eq!(cb.verdict, CertVerdict::Pass);
                }
            }
        }
    }
}

#[test]
fn mirror_reports_are_swap_symmetric() {
    for n in [4usize, 6, 8] {
        let g = complete(n);
        let t: Vec<usize> = (0..n / 2).collect();
        let w = World::from_truthful(n, &t).unwrap();
        let r = generate_reports(&g, &w, &Adversary::MirrorConfusion { pairing: None }).unwrap();
        let v2 = mirror_set(&w, None).unwrap();
        assert!(v2.iter().enumerate().all(|(v, &x)| x == (v >= n / 2)));
        let perm = |v: usize| (v + n / 2) % n;
        for (u, v, idx) in g.arcs() {
            assert_eq!(r.by_index(idx), r.get(&g, perm(u), perm(v)).unwrap());
        }
        // the consistent worlds are closed under the swap
        let worlds = enumerate_consistent(&g, &r, 1, ORACLE_BOUND).unwrap();
        for x in &worlds {
            let swapped = World::from_flags((0..n).map(|v| x.is_truthful(perm(v))).collect());
            assert!(worlds.contains(&swapped));
        }
    }
}

#[test]
fn scenario_families_are_indistinguishable() {
    for (rows, cols) in [(3, 3), (3, 4), (4, 4), (5, 5), (4, 6)] {
        let g = grid(rows, cols);
        let sep: Vec<usize> = (0..cols).map(|c| rows / 2 * cols + c).collect();
        let biggest = (rows / 2).max(rows - rows / 2 - 1) * cols;
        let eps = biggest.max(cols) as f64 / g.n() as f64;
        let fam = build_separator_scenarios(&g, &sep, eps).unwrap();
        assert!(verify_indistinguishable(&fam));
        assert!(fam.common_truthful().is_empty());
    }
}

#[test]
fn gadget_reports_fit_every_independent_set() {
    let path = |m: usize| Graph::undirected(m, (1..m).map(|i| (i - 1, i)).collect()).unwrap();
    let cases = [
        (12, path(4), Rational64::new(1, 4)),
        (14, path(6), Rational64::new(1, 3)),
        (10, complete(4), Rational64::new(1, 4)),
    ];
    for (n, h, a) in cases {
        let spec = dense_gadget(n, h.clone(), a, a / 2).unwrap();
        let (g, r) = build_np_gadget(&spec).unwrap();
        for i in independent_sets(&h) {
            assert!(consistency_check(&g, &r, &spec.world_for(&i).unwrap()));
        }
    }
}

#[test]
fn detectors_on_complete_graphs() {
    for n in 3..=9 {
        let g = complete(n);
        let dg = complete_digraph(n);
        for t in n / 2 + 1..=n {
            let w = World::from_truthful(n, &(0..t).collect::<Vec<_>>()).unwrap();
            for adv in [Adversary::ColludePraise, Adversary::AllAccuse, Adversary::MirrorConfusion { pairing: None }] {
                let r = generate_reports(&g, &w, &adv).unwrap();
                let res = detect_undirected(&g, &r, DetectMode::General, 0.05).unwrap();
                assert_eq!(res.unknown_count(), 0);
                assert!(res.labels.iter().enumerate().all(|(v, &l)| (l == Label::Truthful) == w.is_truthful(v)));
                let r: ReportSet = generate_reports(&dg, &w, &adv).unwrap();
                let res = detect_directed(&dg, &r, DetectMode::General, 0.03).unwrap();
                assert!(res.labels.iter().enumerate().all(|(v, &l)| (l == Label::Truthful) == w.is_truthful(v)));
            }
        }
    }
}
