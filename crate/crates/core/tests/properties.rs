use proptest::prelude::*;

use sweeplab::bisect::symmetry_group;
use sweeplab::cobordism::{
    cover_bound_data, cover_graph, lifted_bound, lifted_sweepout, stabilization_budget, token_game, IntersectionGraph,
    LabelledEdge, ReleasePolicy,
};
use sweeplab::folner::{check_quotient_monotone, profile_exact, ExactOptions};
use sweeplab::graph::{gradient_total, VertexFunction, VertexSet};
use sweeplab::groups::{catalog_maps, make_family, pushforward, quotient_cosets, schreier_graph, Family};
use sweeplab::sweepout::{cutwidth_exact, folsw_bound, sweepout_recursive, Sweepout};
use sweeplab::Graph;

fn catalog_map() -> impl Strategy<Value = (Family, Family)> {
    let pairs = catalog_maps(24);
    (0..pairs.len()).prop_map(move |i| pairs[i].clone())
}

fn labels(family: &Family) -> Vec<String> {
    make_family(family).unwrap().generators().iter().map(|g| g.label.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pushforward_preserves_mass_and_contracts_gradient(
        (fine, coarse) in catalog_map(),
        values in prop::collection::vec(-9i64..=9, 128),
    ) {
        let src = make_family(&fine).unwrap();
        let tgt = make_family(&coarse).unwrap();
        let map = quotient_cosets(&src, &tgt).unwrap();
        let f = VertexFunction(values[..src.coset_count()].to_vec());
        let pushed = pushforward(&map, &f).unwrap();
        prop_assert_eq!(pushed.total(), f.total());
        let down = gradient_total(&schreier_graph(&tgt), &pushed).unwrap();
        let up = gradient_total(&schreier_graph(&src), &f).unwrap();
        prop_assert!(down <= up);
    }

    #[test]
    fn quotient_profiles_are_monotone((fine, coarse) in catalog_map()) {
        let map = quotient_cosets(&make_family(&fine).unwrap(), &make_family(&coarse).unwrap()).unwrap();
        let v = map.source().coset_count().min(12);
        let rows = check_quotient_monotone(&map, v, &ExactOptions { anchor: Some(0), ..Default::default() }).unwrap();
        for r in rows {
            prop_assert!(r.target <= r.source);
            prop_assert!(r.rebuilt_size <= r.v && r.rebuilt_size > 0);
        }
    }

    #[test]
    fn lifted_sweepouts_respect_the_constant(
        n in 1usize..=9,
        reds in 1usize..=3,
        blues in 1usize..=3,
        raw in prop::collection::vec((0usize..3, 0usize..3, prop::collection::vec(0usize..2, 0..=2)), 1..=6),
    ) {
        let family = Family::Cyclic(n);
        let action = make_family(&family).unwrap();
        let names = labels(&family);
        let edges = raw
            .iter()
            .map(|(r, b, word)| LabelledEdge {
                red: r % reds,
                blue: b % blues,
                word: word.iter().map(|&i| names[i % names.len()].clone()).collect(),
            })
            .collect();
        let base = IntersectionGraph::new(reds, blues, edges).unwrap();
        let cover = cover_graph(&base, &action).unwrap();
        prop_assert_eq!(cover.graph.edge_count(), base.edges().len() * n);
        let coset = Sweepout::new(&schreier_graph(&action), (0..n).collect()).unwrap();
        let w = coset.width_vertex();
        let data = cover_bound_data(&base, &action, &cover, w);
        let lifted = lifted_sweepout(&base, &cover, &coset).unwrap();
        prop_assert!(lifted.width_vertex() as u128 <= lifted_bound(&data, w));

        let k = cover.graph.max_degree().max(1);
        let lw = lifted.width_vertex();
        let m = stabilization_budget(k, lw).m;
        let trace = token_game(&cover.graph, &cover.blue, &lifted, k, m, ReleasePolicy::LeavingBoundary).unwrap();
        prop_assert!(trace.success());
        prop_assert!(trace.max_attached <= (k * k * lw) as u128);
    }

    #[test]
    fn token_game_on_arbitrary_orders(
        n in 2usize..=14,
        pairs in prop::collection::vec((0usize..14, 0usize..14), 0..=24),
        shuffle in Just(()).prop_perturb(|_, mut rng| {
            let mut v: Vec<usize> = (0..14).collect();
            for i in (1..v.len()).rev() {
                v.swap(i, rng.random_range(0..=i));
            }
            v
        }),
    ) {
        let blue: Vec<bool> = (0..n).map(|v| v % 2 == 1).collect();
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(a, b)| (2 * (a % n.div_ceil(2)), (2 * (b % (n / 2)) + 1)))
            .filter(|&(r, b)| r < n && b < n)
            .collect();
        let g = Graph::new(n, edges).unwrap();
        let order: Vec<usize> = shuffle.into_iter().filter(|&v| v < n).collect();
        let s = Sweepout::new(&g, order).unwrap();
        let k = g.max_degree().max(1);
        let m = stabilization_budget(k, s.width_vertex()).m;
        let trace = token_game(&g, &blue, &s, k, m, ReleasePolicy::LeavingBoundary).unwrap();
        prop_assert!(trace.success());
    }
}

#[test]
fn recursion_dominates_oracle_on_small_catalog() {
    for family in [
        Family::Cyclic(12),
        Family::Dihedral(5),
        Family::Dihedral(8),
        Family::Heisenberg(2),
        Family::Lamplighter(2),
        Family::Torus { dim: 2, n: 4 },
        Family::Torus { dim: 3, n: 2 },
    ] {
        let action = make_family(&family).unwrap();
        let g = schreier_graph(&action);
        let n = g.vertex_count();
        let q = symmetry_group(&action, 1000, 0);
        let profile = profile_exact(&g, n).unwrap();
        let rec = sweepout_recursive(&g, &VertexSet::full(n), &profile, &q).unwrap();
        let (oracle, _) = cutwidth_exact(&g).unwrap();
        let w = rec.sweepout.width_edge();
        assert!(oracle <= w, "{family}");
        assert!(w <= rec.chain_bound, "{family}");
        let bound = folsw_bound(&profile, n);
        assert!(num_rational::BigRational::from_integer(w.into()) <= bound, "{family}");
        assert!(num_rational::BigRational::from_integer(oracle.into()) <= bound, "{family}");
    }
}
