mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::select;

use reconforge::generators;
use reconforge::graph::{categorical_product, double_cover, is_homomorphism, product_projections};
use reconforge::oracle::{self, MoveRule, ReachResult, Witness, DEFAULT_CAP};
use reconforge::reduction::{compile, GadgetLibrary, HostKit};
use reconforge::transforms::{bipartite_instance_to_cover, cover_to_instance};
use reconforge::{Graph, Vertex};

fn graph(max_n: usize, loops: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(any::<bool>(), pairs),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(edges, looped)| {
                let mut b = Graph::builder(n);
                let mut k = 0;
                for (u, &has_loop) in looped.iter().enumerate() {
                    for v in u + 1..n {
                        if edges[k] {
                            b.add_edge(u, v).unwrap();
                        }
                        k += 1;
                    }
                    if loops && has_loop {
                        b.add_loop(u).unwrap();
                    }
                }
                b.build()
            })
    })
}

fn cube_library() -> &'static GadgetLibrary {
    static LIB: OnceLock<GadgetLibrary> = OnceLock::new();
    LIB.get_or_init(|| {
        let (cube, e) = generators::cube();
        GadgetLibrary::new(HostKit::quadrangulation(&cube, &e, None).unwrap(), DEFAULT_CAP).unwrap()
    })
}

/// A proper 4-colouring of `g`, if it has one, chosen by `pick`.
fn some_colouring(g: &Graph, pick: usize) -> Option<Vec<Vertex>> {
    let all = common::homs(g, &generators::complete(4));
    (!all.is_empty()).then(|| all[pick % all.len()].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_edges_are_coordinatewise(f1 in graph(4, true), f2 in graph(4, true)) {
        let p = categorical_product(&f1, &f2);
        let n2 = f2.vertex_count();
        prop_assert_eq!(p.vertex_count(), f1.vertex_count() * n2);
        for x in p.vertices() {
            for y in p.vertices() {
                let (x1, x2) = product_projections(n2, x);
                let (y1, y2) = product_projections(n2, y);
                prop_assert_eq!(p.has_edge(x, y), f1.has_edge(x1, y1) && f2.has_edge(x2, y2));
            }
        }
    }

    #[test]
    fn double_cover_is_bipartite_with_twice_the_edges(h in graph(6, false)) {
        let c = double_cover(&h);
        prop_assert!(c.is_bipartite());
        prop_assert_eq!(c.edge_count(), 2 * h.edge_count());
        // Both projections are homomorphisms.
        let first: Vec<Vertex> = c.vertices().map(|x| x / 2).collect();
        prop_assert!(is_homomorphism(&c, &h, &first).unwrap());
    }

    #[test]
    fn enumeration_matches_backtracking(g in graph(4, true), h in graph(4, true)) {
        let ours: BTreeSet<Vec<Vertex>> = oracle::enumerate_homs(&g, &h, DEFAULT_CAP).unwrap().into_iter().collect();
        let reference: BTreeSet<Vec<Vertex>> = common::homs(&g, &h).into_iter().collect();
        prop_assert_eq!(ours, reference);
    }

    #[test]
    fn reachability_matches_union_find(
        g in graph(3, false),
        h in graph(5, false),
        i in any::<usize>(),
        j in any::<usize>(),
        reflexive in any::<bool>(),
    ) {
        let (g, h, rule) = if reflexive {
            (g.reflexive_closure(), h.reflexive_closure(), MoveRule::Reflexive)
        } else {
            (g, h, MoveRule::Irreflexive)
        };
        let (all, labels) = common::component_labels(&g, &h, rule);
        prop_assume!(!all.is_empty());
        let (i, j) = (i % all.len(), j % all.len());
        match oracle::reachable(&g, &h, &all[i], &all[j], rule, DEFAULT_CAP).unwrap() {
            ReachResult::Reachable { witness, .. } => {
                prop_assert_eq!(labels[i], labels[j]);
                prop_assert!(common::walk_ok(&g, &h, &witness.0, rule).is_ok());
                prop_assert!(oracle::validate_witness(&g, &h, &witness, rule).valid);
                prop_assert_eq!(witness.first(), Some(&all[i]));
                prop_assert_eq!(witness.last(), Some(&all[j]));
            }
            ReachResult::Unreachable { .. } => prop_assert_ne!(labels[i], labels[j]),
            ReachResult::CapExceeded { .. } => prop_assert!(false, "cap exceeded"),
        }
    }

    #[test]
    fn cover_round_trip(g in graph(6, false), h in graph(4, false), pick in any::<usize>()) {
        prop_assume!(g.is_bipartite());
        let all = common::homs(&g, &h);
        prop_assume!(!all.is_empty());
        let f = &all[pick % all.len()];
        let lifted = bipartite_instance_to_cover(&g, f).unwrap();
        prop_assert!(common::is_hom(&g, &double_cover(&h), &lifted));
        prop_assert_eq!(&cover_to_instance(&lifted), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn encode_then_project_is_identity(g in graph(4, false), a in any::<usize>(), b in any::<usize>()) {
        let (Some(f), Some(t)) = (some_colouring(&g, a), some_colouring(&g, b)) else {
            return Ok(());
        };
        let bundle = compile(&g, &f, &t, cube_library().clone()).unwrap();
        prop_assert!(common::is_hom(&bundle.g_prime, bundle.host(), &bundle.f_prime));
        prop_assert_eq!(bundle.project(&bundle.f_prime).unwrap(), f);
        prop_assert_eq!(bundle.project(&bundle.g_prime_colouring).unwrap(), t);
        prop_assert_eq!(bundle.nbo_count(), 8 * g.edge_count());
        prop_assert_eq!(bundle.naz_count(), g.vertex_count());
    }

    #[test]
    fn random_source_walks_lift(
        g in graph(4, false),
        start in any::<usize>(),
        steps in proptest::collection::vec((any::<usize>(), 0..4usize), 0..6),
    ) {
        let Some(f) = some_colouring(&g, start) else {
            return Ok(());
        };
        let k4 = generators::complete(4);
        let mut walk = vec![f.clone()];
        let mut c = f.clone();
        for (v, col) in steps {
            let v = v % g.vertex_count();
            let mut next = c.clone();
            next[v] = col;
            if next != c && common::is_hom(&g, &k4, &next) {
                c = next;
                walk.push(c.clone());
            }
        }
        let bundle = compile(&g, &f, &c, cube_library().clone()).unwrap();
        let lifted = bundle.lift_sequence(&Witness(walk)).unwrap();
        prop_assert!(common::walk_ok(&bundle.g_prime, bundle.host(), &lifted.0, MoveRule::Irreflexive).is_ok());
        prop_assert_eq!(lifted.first(), Some(&bundle.f_prime));
        prop_assert_eq!(lifted.last(), Some(&bundle.g_prime_colouring));
        for state in &lifted.0 {
            let p = bundle.project(state).unwrap();
            prop_assert!(common::is_hom(&g, &k4, &p));
        }
    }

    #[test]
    fn walk_projections_stay_proper(seed in any::<u64>(), edge in select(vec![(0usize, 1usize), (0, 2), (1, 3)])) {
        let k2 = generators::complete(2);
        let f = vec![edge.0, edge.1];
        let bundle = compile(&k2, &f, &f, cube_library().clone()).unwrap();
        let report = bundle.random_walk_check(300, seed, DEFAULT_CAP).unwrap();
        prop_assert_eq!(report.violations, 0, "{:?}", report.first_violation);
    }
}
