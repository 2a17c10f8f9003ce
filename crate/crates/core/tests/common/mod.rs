//! Brute-force reference implementations and seeded instance generators.
//!
//! Nothing here calls the library's search code: cliques are found by
//! subset enumeration, isomorphism and distances by trying every permutation.

#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turmlab::{build_member, FamilySpec, Graph, Instance, VertexSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).tuple_combinations().collect()
}

/// Graph on `n` vertices whose edges are the set bits of `mask` over `pairs(n)`.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let ps = pairs(n);
    Graph::from_edges(n, ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p)).unwrap()
}

pub fn is_clique_brute(g: &Graph, vs: &[usize]) -> bool {
    vs.iter().tuple_combinations().all(|(&a, &b)| g.has_edge(a, b))
}

/// Some `r`-clique meets `m`.
pub fn violates_brute(g: &Graph, m: &[usize], r: usize) -> bool {
    (0..g.n())
        .combinations(r)
        .any(|c| c.iter().any(|v| m.contains(v)) && is_clique_brute(g, &c))
}

pub fn clique_number_brute(g: &Graph) -> usize {
    (0..=g.n())
        .rev()
        .find(|&k| (0..g.n()).combinations(k).any(|c| is_clique_brute(g, &c)))
        .unwrap_or(0)
}

/// Permutations of `0..n` mapping `preserve` onto itself.
pub fn preserving_perms(n: usize, preserve: &[usize]) -> Vec<Vec<usize>> {
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|v| preserve.contains(&p[v]) == preserve.contains(&v)))
        .collect()
}

pub fn labelled_distance_brute(g: &Graph, h: &Graph) -> usize {
    pairs(g.n()).into_iter().filter(|&(u, v)| g.has_edge(u, v) != h.has_edge(u, v)).count()
}

pub fn iso_distance_brute(g: &Graph, h: &Graph, preserve: &[usize]) -> usize {
    preserving_perms(g.n(), preserve)
        .iter()
        .map(|p| labelled_distance_brute(&g.permuted(p), h))
        .min()
        .unwrap()
}

/// Members of the extremal family built by hand for `r = 3`: complete
/// bipartite graphs with the two sides given.
pub fn complete_bipartite(n: usize, left: &[usize]) -> Graph {
    Graph::from_edges(
        n,
        pairs(n).into_iter().filter(|&(u, v)| left.contains(&u) != left.contains(&v)),
    )
    .unwrap()
}

/// Deletes one random edge of some touching `K_r` until none is left.
pub fn repair(inst: &Instance, rng: &mut ChaCha8Rng) -> Instance {
    let mut g = inst.graph().clone();
    loop {
        let cur = inst.with_graph(g.clone()).unwrap();
        let Some(w) = turmlab::find_kr_touching(&cur) else {
            return cur;
        };
        let vs = w.vertices.to_vec();
        let (a, b) = vs.iter().tuple_combinations().collect::<Vec<_>>()[rng.gen_range(0..vs.len() * (vs.len() - 1) / 2)];
        g.remove_edge(*a, *b);
    }
}

/// Random constraint-satisfying instance: either a repaired random graph or
/// a family member with random edges deleted and random relabelling.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> Instance {
    let r = rng.gen_range(3..=5);
    let n = rng.gen_range(r..=max_n);
    let m = rng.gen_range(0..=n / 2);
    if rng.gen_bool(0.5) || n <= (r - 1) * m {
        let p: f64 = rng.gen_range(0.2..0.95);
        let mut g = Graph::empty(n);
        for (u, v) in pairs(n) {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(rng);
        let m_set = VertexSet::from_iter_in(n, verts[..m].iter().copied());
        repair(&Instance::new(g, m_set, r).unwrap(), rng)
    } else {
        let spec = random_spec(rng, r, n, m);
        let member = build_member(&spec).unwrap();
        let mut g = member.instance.graph().clone();
        let edges: Vec<_> = g.edges().collect();
        let deletions = rng.gen_range(0..=edges.len().min(3 * n));
        for &(u, v) in edges.choose_multiple(rng, deletions) {
            g.remove_edge(u, v);
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let m_set = VertexSet::from_iter_in(n, member.instance.m_set().iter().map(|v| perm[v]));
        Instance::new(g.permuted(&perm), m_set, r).unwrap()
    }
}

/// Random valid specification with `n > (r-1)m`.
pub fn random_spec(rng: &mut ChaCha8Rng, r: usize, n: usize, m: usize) -> FamilySpec {
    let mut placement = vec![0; r - 1];
    for _ in 0..m {
        let i = rng.gen_range(0..r - 1);
        placement[i] += 1;
    }
    let room = (n - (r - 1) * m).min(r - 1);
    let k = rng.gen_range(0..=room);
    let mut idx: Vec<usize> = (1..r).collect();
    idx.shuffle(rng);
    idx.truncate(k);
    FamilySpec {
        r,
        n,
        m,
        placement,
        kept_sporadic: idx,
    }
}
