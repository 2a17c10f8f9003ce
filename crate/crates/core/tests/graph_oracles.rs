//! Clique search, canonical forms and edit distances against brute force.

mod common;

use common::*;
use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use turmlab::canon::canonical_form;
use turmlab::clique::{clique_number, is_clique};
use turmlab::{edit_count_labelled, edit_distance_iso, enumerate_members, find_kr_touching, max_clique};
use turmlab::{Graph, Instance, VertexSet};

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let bits = n * (n - 1) / 2;
        (Just(n), 0u64..(1u64 << bits)).prop_map(|(n, mask)| graph_from_mask(n, mask))
    })
}

fn graph_with_marks(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    small_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), 0u64..(1u64 << n)).prop_map(move |(g, mask)| (g, VertexSet::from_mask(n, mask)))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn max_clique_matches_subset_enumeration(g in small_graph(7)) {
        let best = clique_number_brute(&g);
        let c = max_clique(&g, &g.vertices());
        prop_assert_eq!(c.len(), best);
        prop_assert!(is_clique(&g, &c));
        prop_assert_eq!(clique_number(&g, &g.vertices()), best);
        let lex_first = (0..g.n()).combinations(best).find(|s| is_clique_brute(&g, s)).unwrap();
        prop_assert_eq!(c.to_vec(), lex_first);
    }

    #[test]
    fn touching_clique_search_matches_enumeration((g, m) in graph_with_marks(7), r in 3usize..=5) {
        let inst = Instance::new(g.clone(), m.clone(), r).unwrap();
        let brute = violates_brute(&g, &m.to_vec(), r);
        match find_kr_touching(&inst) {
            Some(w) => {
                prop_assert!(brute);
                prop_assert_eq!(w.vertices.len(), r);
                prop_assert!(is_clique(&g, &w.vertices));
                prop_assert!(w.vertices.intersects(&m));
            }
            None => prop_assert!(!brute),
        }
        prop_assert_eq!(inst.satisfies_constraint(), !brute);
    }

    #[test]
    fn labelled_distance_is_a_metric(a in small_graph(7), mask_b in any::<u64>(), mask_c in any::<u64>()) {
        let n = a.n();
        let bits = n * (n - 1) / 2;
        let keep = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        let b = graph_from_mask(n, mask_b & keep);
        let c = graph_from_mask(n, mask_c & keep);
        let d = |x: &Graph, y: &Graph| edit_count_labelled(x, y).unwrap();
        prop_assert_eq!(d(&a, &b), labelled_distance_brute(&a, &b));
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn iso_distance_matches_permutation_search(
        (g, m) in graph_with_marks(6),
        mask in any::<u64>(),
    ) {
        let n = g.n();
        let bits = n * (n - 1) / 2;
        let h = graph_from_mask(n, if bits == 0 { 0 } else { mask & ((1u64 << bits) - 1) });
        let d = edit_distance_iso(&g, &h, &m).unwrap();
        prop_assert!(d.exact);
        prop_assert_eq!(d.edits, iso_distance_brute(&g, &h, &m.to_vec()));
        let plain = edit_distance_iso(&g, &h, &VertexSet::empty(n)).unwrap();
        prop_assert!(plain.edits <= d.edits);
    }

    #[test]
    fn canonical_form_is_invariant_under_relabelling(
        (g, m, p) in graph_with_marks(9).prop_flat_map(|(g, m)| {
            let n = g.n();
            (Just(g), Just(m), permutation(n))
        }),
    ) {
        let h = g.permuted(&p);
        let hm = VertexSet::from_iter_in(g.n(), m.iter().map(|v| p[v]));
        prop_assert_eq!(canonical_form(&g, &m), canonical_form(&h, &hm));
    }

    #[test]
    fn canonical_form_decides_marked_isomorphism(
        (g, m, p) in graph_with_marks(6).prop_flat_map(|(g, m)| {
            let n = g.n();
            (Just(g), Just(m), permutation(n))
        }),
        mask in any::<u64>(),
        relabel in any::<bool>(),
    ) {
        let n = g.n();
        let bits = n * (n - 1) / 2;
        // half the cases compare against a relabelled copy, so positives occur
        let (h, hm) = if relabel {
            (g.permuted(&p), VertexSet::from_iter_in(n, m.iter().map(|v| p[v])))
        } else {
            (graph_from_mask(n, if bits == 0 { 0 } else { mask & ((1u64 << bits) - 1) }), m.clone())
        };
        let same_form = canonical_form(&g, &m) == canonical_form(&h, &hm);
        let iso = (0..n)
            .permutations(n)
            .any(|q| m.iter().all(|v| hm.contains(q[v])) && g.permuted(&q) == h);
        prop_assert_eq!(same_form, iso);
        if hm == m {
            prop_assert_eq!(same_form, edit_distance_iso(&g, &h, &m).unwrap().edits == 0);
        }
    }
}

#[test]
fn frozen_distances() {
    let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    assert_eq!(edit_distance_iso(&c4, &p4, &VertexSet::empty(4)).unwrap().edits, 1);

    // K_{3,3} with M = {0} against the (3, 6, 1) family
    let k33 = complete_bipartite(6, &[0, 1, 2]);
    let m = VertexSet::singleton(6, 0);
    let family = enumerate_members(3, 6, 1).unwrap();
    let lib = family
        .iter()
        .map(|f| edit_distance_iso(&k33, f.instance.graph(), &m).unwrap().edits)
        .min()
        .unwrap();
    let brute = family
        .iter()
        .map(|f| iso_distance_brute(&k33, f.instance.graph(), &[0]))
        .min()
        .unwrap();
    assert_eq!(lib, brute);
    assert_eq!(lib, 4);
}

#[test]
fn relabelled_copies_are_at_distance_zero() {
    let mut rng = rng(7);
    for _ in 0..20 {
        let inst = random_instance(&mut rng, 10);
        let n = inst.n();
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        let h = inst.graph().permuted(&p);
        let d = edit_distance_iso(inst.graph(), &h, &VertexSet::empty(n)).unwrap();
        assert_eq!(d.edits, 0);
    }
}
