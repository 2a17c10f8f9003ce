//! Canonical forms of graphs with a distinguished vertex set.
//!
//! Two graphs get the same [`CanonicalForm`] exactly when some vertex
//! bijection maps one onto the other and the marked set onto the marked set.
//!
//! Vertices are first merged into twin classes (same mark and same open or
//! closed neighbourhood); twins are interchangeable, so the highly symmetric
//! graphs of the extremal family collapse to a handful of classes. The
//! quotient is then labelled by individualisation and refinement, keeping the
//! smallest leaf code.

use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    bits: Vec<u64>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Single,
    Independent,
    Clique,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ClassLabel {
    // false sorts first, so marked classes lead the labelling
    unmarked: bool,
    kind: Kind,
    size: usize,
}

struct Quotient {
    labels: Vec<ClassLabel>,
    members: Vec<Vec<usize>>,
    adj: Vec<Vec<bool>>,
}

fn twin_classes(g: &Graph, marked: &VertexSet) -> Quotient {
    let n = g.n();
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut kinds = Vec::new();

    // false twins: equal open neighbourhoods
    let mut by_open: Vec<usize> = (0..n).collect();
    by_open.sort_by(|&a, &b| {
        marked
            .contains(a)
            .cmp(&marked.contains(b))
            .then(g.neighbours(a).lex_cmp(g.neighbours(b)))
            .then(a.cmp(&b))
    });
    group_runs(&by_open, |a, b| {
        marked.contains(a) == marked.contains(b) && g.neighbours(a) == g.neighbours(b)
    })
    .into_iter()
    .filter(|run| run.len() > 1)
    .for_each(|run| {
        for &v in &run {
            class_of[v] = members.len();
        }
        members.push(run);
        kinds.push(Kind::Independent);
    });

    // true twins among the rest: equal closed neighbourhoods
    let closed = |v: usize| {
        let mut s = g.neighbours(v).clone();
        s.insert(v);
        s
    };
    let mut rest: Vec<usize> = (0..n).filter(|&v| class_of[v] == usize::MAX).collect();
    let closed_rows: Vec<VertexSet> = (0..n).map(closed).collect();
    rest.sort_by(|&a, &b| {
        marked
            .contains(a)
            .cmp(&marked.contains(b))
            .then(closed_rows[a].lex_cmp(&closed_rows[b]))
            .then(a.cmp(&b))
    });
    for run in group_runs(&rest, |a, b| {
        marked.contains(a) == marked.contains(b) && closed_rows[a] == closed_rows[b]
    }) {
        for &v in &run {
            class_of[v] = members.len();
        }
        kinds.push(if run.len() > 1 { Kind::Clique } else { Kind::Single });
        members.push(run);
    }

    let q = members.len();
    let labels = members
        .iter()
        .zip(&kinds)
        .map(|(mem, &kind)| ClassLabel {
            unmarked: !marked.contains(mem[0]),
            kind,
            size: mem.len(),
        })
        .collect();
    let adj = (0..q)
        .map(|a| {
            (0..q)
                .map(|b| a != b && g.has_edge(members[a][0], members[b][0]))
                .collect()
        })
        .collect();
    Quotient {
        labels,
        members,
        adj,
    }
}

fn group_runs(sorted: &[usize], same: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for &v in sorted {
        match runs.last_mut() {
            Some(run) if same(run[0], v) => run.push(v),
            _ => runs.push(vec![v]),
        }
    }
    runs
}

/// Ordered partition of quotient vertices.
type Partition = Vec<Vec<usize>>;

fn refine(q: &Quotient, mut part: Partition) -> Partition {
    loop {
        let mut cell_of = vec![0; q.labels.len()];
        for (i, cell) in part.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut next: Partition = Vec::with_capacity(part.len());
        for cell in &part {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut counts = vec![0usize; part.len()];
                    for (u, &adj) in q.adj[v].iter().enumerate() {
                        if adj {
                            counts[cell_of[u]] += 1;
                        }
                    }
                    (counts, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == part.len() {
            return next;
        }
        part = next;
    }
}

struct Best {
    code: Vec<u64>,
    order: Vec<usize>,
}

fn quotient_code(q: &Quotient, order: &[usize]) -> Vec<u64> {
    let mut code = Vec::with_capacity(order.len() * 2 + order.len() * order.len() / 64 + 1);
    for &v in order {
        let l = &q.labels[v];
        code.push(((l.unmarked as u64) << 62) | ((l.kind as u64) << 60) | l.size as u64);
    }
    let mut word = 0u64;
    let mut nbits = 0;
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            word = (word << 1) | q.adj[a][b] as u64;
            nbits += 1;
            if nbits == 63 {
                code.push(word);
                word = 0;
                nbits = 0;
            }
        }
    }
    code.push(word << (63 - nbits));
    code
}

fn search(q: &Quotient, part: Partition, best: &mut Option<Best>) {
    let part = refine(q, part);
    let target = part.iter().position(|c| c.len() > 1);
    match target {
        None => {
            let order: Vec<usize> = part.iter().map(|c| c[0]).collect();
            let code = quotient_code(q, &order);
            if best.as_ref().is_none_or(|b| code < b.code) {
                *best = Some(Best { code, order });
            }
        }
        Some(t) => {
            for &v in &part[t] {
                let mut child = Vec::with_capacity(part.len() + 1);
                child.extend_from_slice(&part[..t]);
                child.push(vec![v]);
                child.push(part[t].iter().copied().filter(|&u| u != v).collect());
                child.extend_from_slice(&part[t + 1..]);
                search(q, child, best);
            }
        }
    }
}

/// Canonical relabelling: `labelling[v]` is the new index of vertex `v`.
pub fn canonical_labelling(g: &Graph, marked: &VertexSet) -> Vec<usize> {
    let q = twin_classes(g, marked);
    let mut idx: Vec<usize> = (0..q.labels.len()).collect();
    idx.sort_by(|&a, &b| q.labels[a].cmp(&q.labels[b]));
    let initial = group_runs(&idx, |a, b| q.labels[a] == q.labels[b]);
    let mut best = None;
    search(&q, initial, &mut best);
    let order = best.map(|b| b.order).unwrap_or_default();
    let mut labelling = vec![0; g.n()];
    let mut next = 0;
    for class in order {
        for &v in &q.members[class] {
            labelling[v] = next;
            next += 1;
        }
    }
    labelling
}

/// The canonical form of `(g, marked)`.
pub fn canonical_form(g: &Graph, marked: &VertexSet) -> CanonicalForm {
    let lab = canonical_labelling(g, marked);
    encode(g, marked, &lab)
}

/// The canonical representative graph and its marked set.
pub fn canonical_graph(g: &Graph, marked: &VertexSet) -> (Graph, VertexSet) {
    let lab = canonical_labelling(g, marked);
    let h = g.permuted(&lab);
    let m = VertexSet::from_iter_in(g.n(), marked.iter().map(|v| lab[v]));
    (h, m)
}

fn encode(g: &Graph, marked: &VertexSet, lab: &[usize]) -> CanonicalForm {
    let n = g.n();
    let total = n + n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u64; total.div_ceil(64)];
    let mut set = |i: usize| bits[i / 64] |= 1 << (i % 64);
    for v in marked.iter() {
        set(lab[v]);
    }
    for (u, v) in g.edges() {
        let (a, b) = if lab[u] < lab[v] { (lab[u], lab[v]) } else { (lab[v], lab[u]) };
        // column-major upper triangle: (a, b) with a < b sits at b(b-1)/2 + a
        set(n + b * (b - 1) / 2 + a);
    }
    CanonicalForm { n, bits }
}
