use idensity::density::{
    add_set_sandwich, density, matching_exact, matching_greedy, matching_upper_bound,
    profile_branching, profile_branching_with, profile_oracle, BranchOptions, Probability,
};
use idensity::exec::Exec;
use idensity::finitize::{cor_reduce, k3_gadget};
use idensity::hypercore::{
    antichain_reduce, induced_sub, is_antichain, is_independent, neighbourhood, parse, to_text,
};
use idensity::{Hypergraph, VertexSubset};
use num_traits::Zero;
use proptest::prelude::*;

fn hypergraph(max_n: usize, max_rank: usize) -> impl Strategy<Value = Hypergraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let edge = proptest::sample::subsequence((0..n as u32).collect::<Vec<_>>(), 1..=max_rank.min(n));
        proptest::collection::vec(edge, 0..=2 * n).prop_map(move |edges| {
            let labels = (0..n).map(|i| format!("v{i}")).collect();
            Hypergraph::new(labels, edges).unwrap()
        })
    })
}

fn probability() -> impl Strategy<Value = Probability> {
    (2i64..=16)
        .prop_flat_map(|d| (1..d, Just(d)))
        .prop_map(|(n, d)| Probability::ratio(n, d).unwrap())
}

fn subset(h: &Hypergraph, bits: u64) -> VertexSubset {
    VertexSubset::new(
        (0..h.num_vertices() as u32)
            .filter(|v| bits >> v & 1 == 1)
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn branching_matches_oracle(h in hypergraph(12, 4)) {
        prop_assert_eq!(profile_branching(&h), profile_oracle(&h).unwrap());
    }

    #[test]
    fn engine_modes_agree(h in hypergraph(14, 4)) {
        let seq = BranchOptions { exec: Exec::Sequential, ..BranchOptions::default() };
        let par = BranchOptions { exec: Exec::default(), parallel_depth: 64, ..BranchOptions::default() };
        prop_assert_eq!(profile_branching_with(&h, &seq).unwrap(), profile_branching_with(&h, &par).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adding_an_edge_never_raises_density(
        h in hypergraph(10, 4),
        bits in 1u64..1024,
        ps in proptest::collection::vec(probability(), 10),
    ) {
        let e = subset(&h, bits);
        prop_assume!(!e.is_empty());
        let g = h.with_edge(&e).unwrap();
        for p in &ps {
            prop_assert!(density(&g, p) <= density(&h, p));
        }
    }

    #[test]
    fn disjoint_union_multiplies(g in hypergraph(6, 3), h in hypergraph(6, 3), p in probability()) {
        let h = h.relabel(|l| format!("{l}'")).unwrap();
        let u = g.disjoint_union(&h).unwrap();
        prop_assert_eq!(density(&u, &p).into_inner(), density(&g, &p).into_inner() * density(&h, &p).into_inner());
        prop_assert_eq!(profile_oracle(&u).unwrap(), profile_branching(&u));
    }

    #[test]
    fn matching_bound_holds(h in hypergraph(10, 4), p in probability()) {
        let exact = matching_exact(&h).unwrap();
        let greedy = matching_greedy(&h);
        prop_assert!(greedy.size() <= exact.size());
        let d = density(&h, &p);
        prop_assert!(d <= matching_upper_bound(&h, &p, &exact).unwrap());
        prop_assert!(d <= matching_upper_bound(&h, &p, &greedy).unwrap());
    }

    #[test]
    fn antichain_reduction_keeps_density(h in hypergraph(12, 4), p in probability()) {
        let a = antichain_reduce(&h);
        prop_assert!(is_antichain(&a));
        prop_assert_eq!(density(&a, &p), density(&h, &p));
    }

    #[test]
    fn antichain_reduction_keeps_independence(h in hypergraph(10, 4), bits in 0u64..1024) {
        let s = subset(&h, bits);
        let a = antichain_reduce(&h);
        prop_assert_eq!(is_independent(&h, &s).unwrap(), is_independent(&a, &s).unwrap());
    }

    #[test]
    fn density_is_positive(h in hypergraph(12, 4), p in probability()) {
        prop_assert!(!density(&h, &p).value().is_zero());
    }

    #[test]
    fn induced_sub_idempotent(h in hypergraph(10, 4), bits in 0u64..1024) {
        let s = subset(&h, bits);
        let once = induced_sub(&h, &s).unwrap();
        let all = VertexSubset::all(&once);
        prop_assert_eq!(induced_sub(&once, &all).unwrap(), once);
    }

    #[test]
    fn neighbourhood_of_empty_set_is_identity(h in hypergraph(10, 4)) {
        let n = neighbourhood(&h, &VertexSubset::empty()).unwrap();
        prop_assert!(!n.contains_empty_edge);
        prop_assert_eq!(n.hypergraph, h);
    }

    #[test]
    fn text_round_trip(h in hypergraph(10, 4)) {
        let text = to_text(&h);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(to_text(&back), text);
    }

    #[test]
    fn gadget_preserves_half_density(h in hypergraph(10, 2)) {
        let g = k3_gadget(&h).unwrap();
        prop_assert!(g.edges().iter().all(|e| e.len() == 2));
        let half = Probability::half();
        prop_assert_eq!(density(&g, &half), density(&h, &half));
    }

    #[test]
    fn cor_reduce_keeps_antichains(h in hypergraph(10, 4), bits in 1u64..1024) {
        let h = antichain_reduce(&h);
        let x = subset(&h, bits);
        prop_assume!(!x.is_empty() && is_independent(&h, &x).unwrap());
        let r = cor_reduce(&h, &x).unwrap();
        prop_assert!(is_antichain(&r.hypergraph));
        if !r.noop {
            prop_assert!(r.density_delta(&h, &Probability::half()) > Zero::zero());
        }
    }
}

/// `x` on the first vertices, disjoint witnesses `Y_i` after it, every
/// `x ∪ Y_i` an edge, plus extra edges that keep `x` independent.
fn sandwich_instance() -> impl Strategy<Value = (Hypergraph, VertexSubset, Vec<VertexSubset>)> {
    (1usize..=2, 1usize..=3, 1usize..=3, 0usize..=4).prop_flat_map(|(xs, m, ys, extra)| {
        let n = xs + m * ys + 2;
        let edge = proptest::sample::subsequence((0..n as u32).collect::<Vec<_>>(), 1..=(xs + ys).min(n));
        (
            Just((xs, m, ys, n)),
            proptest::collection::vec(1..=ys, m),
            proptest::collection::vec(edge, extra),
        )
    })
    .prop_filter_map("x must stay independent", |((xs, m, _ys, n), sizes, extra)| {
        let x: Vec<u32> = (0..xs as u32).collect();
        let mut next = xs as u32;
        let mut witnesses = Vec::new();
        let mut edges = Vec::new();
        for &s in sizes.iter().take(m) {
            let y: Vec<u32> = (next..next + s as u32).collect();
            next += s as u32;
            edges.push(x.iter().chain(&y).copied().collect::<Vec<_>>());
            witnesses.push(VertexSubset::new(y));
        }
        edges.extend(extra.into_iter().filter(|e: &Vec<u32>| !e.iter().all(|v| x.contains(v))));
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let h = Hypergraph::new(labels, edges).ok()?;
        Some((h, VertexSubset::new(x), witnesses))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sandwich_brackets_density((h, x, ys) in sandwich_instance(), p in probability()) {
        let s = add_set_sandwich(&h, &x, &ys, &p).unwrap();
        let d = density(&h, &p);
        prop_assert!(s.lower < d, "left side must be strict");
        prop_assert!(d <= s.upper);
    }
}
