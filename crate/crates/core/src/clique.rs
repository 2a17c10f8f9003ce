//! Maximum cliques and constrained clique search.
//!
//! The maximum-clique search is a colour-bounded branch and bound: the
//! candidate set is greedily coloured, vertices are branched on from the
//! highest colour down, and a branch is cut once `|clique| + colour` cannot
//! beat the incumbent. The lexicographically smallest maximum clique is then
//! fixed vertex by vertex with feasibility queries against the same search.

use crate::graph::{Graph, VertexSet};
use crate::instance::{CliqueWitness, Instance};

struct Search<'a> {
    g: &'a Graph,
    best: usize,
    stop_at: usize,
}

impl Search<'_> {
    /// Returns true once a clique of size `stop_at` has been seen.
    fn expand(&mut self, size: usize, mut cand: VertexSet) -> bool {
        let (order, colours) = colour_sort(self.g, &cand);
        for idx in (0..order.len()).rev() {
            if size + colours[idx] <= self.best {
                return false;
            }
            let v = order[idx];
            let next = cand.intersection(self.g.neighbours(v));
            if next.is_empty() {
                if size + 1 > self.best {
                    self.best = size + 1;
                    if self.best >= self.stop_at {
                        return true;
                    }
                }
            } else if self.expand(size + 1, next) {
                return true;
            }
            cand.remove(v);
        }
        false
    }
}

/// Greedy sequential colouring; returns vertices sorted by colour together with
/// each vertex's colour (1-based).
fn colour_sort(g: &Graph, cand: &VertexSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.len());
    let mut colours = Vec::with_capacity(cand.len());
    let mut uncoloured = cand.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut open = uncoloured.clone();
        while let Some(v) = open.first() {
            order.push(v);
            colours.push(colour);
            uncoloured.remove(v);
            open.remove(v);
            open.difference_with(g.neighbours(v));
        }
    }
    (order, colours)
}

/// Size of a maximum clique of `G[restrict]`.
pub fn clique_number(g: &Graph, restrict: &VertexSet) -> usize {
    if restrict.is_empty() {
        return 0;
    }
    let mut s = Search {
        g,
        best: 0,
        stop_at: usize::MAX,
    };
    s.expand(0, restrict.clone());
    s.best
}

/// Whether `G[within]` contains a clique on `k` vertices.
pub fn has_clique_of_size(g: &Graph, within: &VertexSet, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if within.len() < k {
        return false;
    }
    if k == 1 {
        return true;
    }
    let mut s = Search {
        g,
        best: k - 1,
        stop_at: k,
    };
    s.expand(0, within.clone())
}

/// The lexicographically smallest maximum clique of `G[restrict]`.
pub fn max_clique(g: &Graph, restrict: &VertexSet) -> VertexSet {
    let mut need = clique_number(g, restrict);
    let mut chosen = VertexSet::empty(g.n());
    let mut cand = restrict.clone();
    while need > 0 {
        let v = cand.first().expect("candidate set ran dry before the clique was fixed");
        let next = cand.intersection(g.neighbours(v));
        if has_clique_of_size(g, &next, need - 1) {
            chosen.insert(v);
            cand = next;
            need -= 1;
        } else {
            cand.remove(v);
        }
    }
    chosen
}

pub fn is_clique(g: &Graph, set: &VertexSet) -> bool {
    set.iter().all(|v| {
        let mut others = set.clone();
        others.remove(v);
        others.is_subset(g.neighbours(v))
    })
}

/// The lexicographically least `r`-clique meeting `M`, if any.
pub fn find_kr_touching(inst: &Instance) -> Option<CliqueWitness> {
    let g = inst.graph();
    let mut chosen = Vec::with_capacity(inst.r());
    if touching_dfs(g, inst.m_set(), inst.r(), &mut chosen, false, g.vertices()) {
        Some(CliqueWitness {
            vertices: VertexSet::from_iter_in(g.n(), chosen),
        })
    } else {
        None
    }
}

fn touching_dfs(
    g: &Graph,
    m: &VertexSet,
    r: usize,
    chosen: &mut Vec<usize>,
    has_m: bool,
    cand: VertexSet,
) -> bool {
    if chosen.len() == r {
        return has_m;
    }
    let need = r - chosen.len();
    if cand.len() < need {
        return false;
    }
    if !has_m && !cand.intersects(m) {
        return false;
    }
    for v in cand.iter() {
        let in_m = m.contains(v);
        if !has_m && !in_m {
            let mut later_m = cand.intersection(m);
            later_m.retain_above(v);
            if later_m.is_empty() {
                return false;
            }
        }
        let mut next = cand.intersection(g.neighbours(v));
        next.retain_above(v);
        chosen.push(v);
        if touching_dfs(g, m, r, chosen, has_m || in_m, next) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn k33() -> Graph {
        Graph::from_edges(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))).unwrap()
    }

    #[test]
    fn complete_graph_is_its_own_clique() {
        let g = Graph::complete(4);
        assert_eq!(max_clique(&g, &g.vertices()).to_vec(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn five_cycle_has_edge_cliques() {
        let g = cycle(5);
        let c = max_clique(&g, &g.vertices());
        assert_eq!(c.to_vec(), vec![0, 1]);
    }

    #[test]
    fn bipartite_clique_number_two() {
        let g = k33();
        assert_eq!(max_clique(&g, &g.vertices()).to_vec(), vec![0, 3]);
    }

    #[test]
    fn restriction_is_respected() {
        let g = Graph::complete(5);
        let r = VertexSet::from_iter_in(5, [1, 3, 4]);
        assert_eq!(max_clique(&g, &r).to_vec(), vec![1, 3, 4]);
        assert!(max_clique(&g, &VertexSet::empty(5)).is_empty());
    }

    #[test]
    fn witness_through_m_in_k4() {
        let inst = Instance::with_prefix(Graph::complete(4), 1, 3).unwrap();
        let w = find_kr_touching(&inst).unwrap();
        assert_eq!(w.vertices.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn witness_must_touch_m() {
        // triangle on {0,1,2}, M = {3} joined to 0 only
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        let m = VertexSet::singleton(4, 3);
        let inst = Instance::new(g.clone(), m, 3).unwrap();
        assert!(find_kr_touching(&inst).is_none());
        let inst = Instance::new(g, VertexSet::singleton(4, 2), 3).unwrap();
        assert_eq!(find_kr_touching(&inst).unwrap().vertices.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn triangle_free_cycle_has_no_witness() {
        let inst = Instance::with_prefix(cycle(5), 1, 3).unwrap();
        assert!(find_kr_touching(&inst).is_none());
    }

    #[test]
    fn witness_is_lexicographically_least() {
        // triangles {0,3,4} and {1,2,3}; M = {3}
        let g = Graph::from_edges(5, [(0, 3), (0, 4), (3, 4), (1, 2), (1, 3), (2, 3)]).unwrap();
        let inst = Instance::new(g, VertexSet::singleton(5, 3), 3).unwrap();
        assert_eq!(find_kr_touching(&inst).unwrap().vertices.to_vec(), vec![0, 3, 4]);
    }
}
