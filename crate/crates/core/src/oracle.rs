//! Exhaustive ground truth for small orders.
//!
//! Graphs on `n <= 10` labelled vertices with `M = {0..m-1}` are searched by
//! deciding edges one at a time (vertex-major order). An edge is only added
//! when it closes no `K_r` through `M`, so every violating edge set is cut
//! together with all its supersets. The search space is split by the first
//! `split_depth` decisions and the pieces run independently; results are
//! merged by maximum and by ordered union of canonical forms, so the output
//! never depends on scheduling or thread count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_labelling, CanonicalForm};
use crate::edit::edit_distance_iso;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::turan::{enumerate_members, turm_number};

/// Largest order searched edge set by edge set.
pub const FULL_LIMIT: usize = 8;
/// Largest order accepted at all.
pub const BNB_LIMIT: usize = 10;
/// Leaves collected in branch-and-bound mode before the extremal list is
/// declared incomplete.
const BNB_LEAF_CAP: usize = 1 << 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every constraint-satisfying edge set is reachable; pruning is by edge
    /// count alone.
    Full,
    /// Adds a clique-packing bound; only `max_edges` is guaranteed.
    BranchAndBound,
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
    /// Number of leading edge decisions that define the parallel work units.
    pub split_depth: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            threads: None,
            split_depth: 12,
        }
    }
}

impl OracleConfig {
    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .expect("failed to build worker pool")
                .install(f),
            None => f(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub r: usize,
    pub n: usize,
    pub m: usize,
    pub mode: Mode,
    pub max_edges: usize,
    /// Extremal graphs up to isomorphisms fixing `M`, each canonically
    /// labelled with `M = {0..m-1}`, ordered by canonical form.
    pub extremal: Vec<Graph>,
    /// Search nodes visited.
    pub explored: u64,
    /// False when the extremal list was truncated.
    pub complete: bool,
}

fn check_range(r: usize, n: usize, m: usize, limit: usize, bound: &'static str) -> Result<()> {
    if r < 3 {
        return Err(Error::CliqueOrder(r));
    }
    if m > n {
        return Err(Error::SetTooLarge { m, n });
    }
    if n > limit {
        return Err(Error::OracleRange {
            bound,
            detail: format!("n = {n}"),
        });
    }
    Ok(())
}

type Row = u16;

#[derive(Clone)]
struct State {
    adj: [Row; BNB_LIMIT],
    edges: usize,
}

impl State {
    fn new() -> Self {
        State {
            adj: [0; BNB_LIMIT],
            edges: 0,
        }
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        self.edges += 1;
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        self.edges -= 1;
    }
}

/// Whether `set` contains a `k`-clique, which must meet `m_mask` if `need_m`.
fn clique_in(adj: &[Row], set: Row, k: usize, need_m: bool, m_mask: Row) -> bool {
    if k == 0 {
        return !need_m;
    }
    if (set.count_ones() as usize) < k || (need_m && set & m_mask == 0) {
        return false;
    }
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let in_m = m_mask >> v & 1 == 1;
        if need_m && !in_m && rest & m_mask == 0 {
            return false;
        }
        if clique_in(adj, rest & adj[v], k - 1, need_m && !in_m, m_mask) {
            return true;
        }
    }
    false
}

struct Space {
    r: usize,
    n: usize,
    m_mask: Row,
    edges: Vec<(usize, usize)>,
    mode: Mode,
}

#[derive(Clone)]
struct Prefix {
    state: State,
    /// Number of decided pairs.
    depth: usize,
}

impl Space {
    fn new(r: usize, n: usize, m: usize, mode: Mode) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for v in 1..n {
            for u in 0..v {
                edges.push((u, v));
            }
        }
        Space {
            r,
            n,
            m_mask: ((1u32 << m) - 1) as Row,
            edges,
            mode,
        }
    }

    /// Adding `{u, v}` would close a `K_r` meeting `M`.
    fn closes_touching_clique(&self, st: &State, u: usize, v: usize) -> bool {
        let common = st.adj[u] & st.adj[v];
        let touches = (self.m_mask >> u | self.m_mask >> v) & 1 == 1;
        clique_in(&st.adj, common, self.r - 2, !touches, self.m_mask)
    }

    /// Lower bound on how many still-open pairs must stay absent: a greedy
    /// packing of `r`-sets meeting `M`, pairwise disjoint on open pairs.
    fn packing(&self, st: &State, depth: usize) -> usize {
        let n = self.n;
        let mut open = [0 as Row; BNB_LIMIT];
        for &(u, v) in &self.edges[depth..] {
            open[u] |= 1 << v;
            open[v] |= 1 << u;
        }
        let mut avail = [0 as Row; BNB_LIMIT];
        for v in 0..n {
            avail[v] = st.adj[v] | open[v];
        }
        let mut used = [0 as Row; BNB_LIMIT];
        let mut count = 0;
        let mut chosen = Vec::with_capacity(self.r);
        self.pack_dfs(&avail, &open, &mut used, &mut chosen, ((1u32 << n) - 1) as Row, false, &mut count);
        count
    }

    #[allow(clippy::too_many_arguments)]
    fn pack_dfs(
        &self,
        avail: &[Row; BNB_LIMIT],
        open: &[Row; BNB_LIMIT],
        used: &mut [Row; BNB_LIMIT],
        chosen: &mut Vec<usize>,
        cand: Row,
        has_m: bool,
        count: &mut usize,
    ) {
        if chosen.len() == self.r {
            if !has_m {
                return;
            }
            let mut any_open = false;
            for (i, &a) in chosen.iter().enumerate() {
                for &b in &chosen[i + 1..] {
                    if used[a] >> b & 1 == 1 {
                        return;
                    }
                    any_open |= open[a] >> b & 1 == 1;
                }
            }
            if !any_open {
                return;
            }
            for (i, &a) in chosen.iter().enumerate() {
                for &b in &chosen[i + 1..] {
                    if open[a] >> b & 1 == 1 {
                        used[a] |= 1 << b;
                        used[b] |= 1 << a;
                    }
                }
            }
            *count += 1;
            return;
        }
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // pairs already claimed cannot be reused inside this r-set
            let mut ok = true;
            for &a in chosen.iter() {
                if used[a] >> v & 1 == 1 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            chosen.push(v);
            let in_m = self.m_mask >> v & 1 == 1;
            self.pack_dfs(avail, open, used, chosen, rest & avail[v], has_m || in_m, count);
            chosen.pop();
        }
    }

    fn upper(&self, st: &State, depth: usize) -> usize {
        let open = self.edges.len() - depth;
        match self.mode {
            Mode::Full => st.edges + open,
            Mode::BranchAndBound => st.edges + open - self.packing(st, depth),
        }
    }

    /// All decision prefixes of length `depth` whose bound reaches `target`.
    fn prefixes(&self, depth: usize, target: usize) -> Vec<Prefix> {
        let mut out = Vec::new();
        let mut st = State::new();
        self.prefix_dfs(&mut st, 0, depth, target, &mut out);
        out
    }

    fn prefix_dfs(&self, st: &mut State, i: usize, depth: usize, target: usize, out: &mut Vec<Prefix>) {
        if st.edges + (self.edges.len() - i) < target {
            return;
        }
        if i == depth {
            out.push(Prefix {
                state: st.clone(),
                depth: i,
            });
            return;
        }
        let (u, v) = self.edges[i];
        if !self.closes_touching_clique(st, u, v) {
            st.add(u, v);
            self.prefix_dfs(st, i + 1, depth, target, out);
            st.remove(u, v);
        }
        self.prefix_dfs(st, i + 1, depth, target, out);
    }

    /// Edges of the graph reached by always adding the next admissible edge.
    fn greedy_lower_bound(&self) -> usize {
        let mut st = State::new();
        for &(u, v) in &self.edges {
            if !self.closes_touching_clique(&st, u, v) {
                st.add(u, v);
            }
        }
        st.edges
    }

    fn max_dfs(&self, st: &mut State, i: usize, best: &mut usize, nodes: &mut u64) {
        *nodes += 1;
        if st.edges + (self.edges.len() - i) <= *best {
            return;
        }
        if i == self.edges.len() {
            *best = st.edges;
            return;
        }
        if self.mode == Mode::BranchAndBound && self.upper(st, i) <= *best {
            return;
        }
        let (u, v) = self.edges[i];
        if !self.closes_touching_clique(st, u, v) {
            st.add(u, v);
            self.max_dfs(st, i + 1, best, nodes);
            st.remove(u, v);
        }
        self.max_dfs(st, i + 1, best, nodes);
    }

    fn collect_dfs(&self, st: &mut State, i: usize, target: usize, sink: &mut Sink) {
        sink.nodes += 1;
        if st.edges + (self.edges.len() - i) < target || sink.truncated {
            return;
        }
        if i == self.edges.len() {
            sink.accept(self, st);
            return;
        }
        if self.mode == Mode::BranchAndBound && self.upper(st, i) < target {
            return;
        }
        let (u, v) = self.edges[i];
        if !self.closes_touching_clique(st, u, v) {
            st.add(u, v);
            self.collect_dfs(st, i + 1, target, sink);
            st.remove(u, v);
        }
        self.collect_dfs(st, i + 1, target, sink);
    }

    fn to_graph(&self, st: &State) -> Graph {
        let mut g = Graph::empty(self.n);
        for &(u, v) in &self.edges {
            if st.adj[u] >> v & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    }
}

/// Canonical representatives keyed by canonical form.
type Classes = BTreeMap<CanonicalForm, Graph>;

struct Sink {
    classes: Classes,
    nodes: u64,
    leaves: usize,
    cap: usize,
    truncated: bool,
}

impl Sink {
    fn new(cap: usize) -> Self {
        Sink {
            classes: BTreeMap::new(),
            nodes: 0,
            leaves: 0,
            cap,
            truncated: false,
        }
    }

    fn accept(&mut self, space: &Space, st: &State) {
        self.leaves += 1;
        if self.leaves > self.cap {
            self.truncated = true;
            return;
        }
        let g = space.to_graph(st);
        let m = VertexSet::from_mask(space.n, space.m_mask as u64);
        let (form, canon) = canonical_pair(&g, &m);
        self.classes.entry(form).or_insert(canon);
    }
}

/// Canonical form and canonical relabelling in one pass; `M` stays a prefix.
fn canonical_pair(g: &Graph, m: &VertexSet) -> (CanonicalForm, Graph) {
    let lab = canonical_labelling(g, m);
    let canon = g.permuted(&lab);
    let form = crate::canon::canonical_form(&canon, m);
    (form, canon)
}

/// Maximum edge count, found by branch and bound over independent partitions.
fn search_max(space: &Space, cfg: &OracleConfig) -> (usize, u64) {
    let seed = space.greedy_lower_bound();
    let depth = cfg.split_depth.min(space.edges.len());
    let parts = space.prefixes(depth, seed + 1);
    let results: Vec<(usize, u64)> = cfg.run(|| {
        parts
            .par_iter()
            .map(|p| {
                let mut st = p.state.clone();
                let mut best = seed;
                let mut nodes = 0;
                space.max_dfs(&mut st, p.depth, &mut best, &mut nodes);
                (best, nodes)
            })
            .collect()
    });
    let best = results.iter().map(|r| r.0).fold(seed, usize::max);
    let nodes = results.iter().map(|r| r.1).sum::<u64>() + parts.len() as u64;
    (best, nodes)
}

/// Classes of admissible graphs with at least `target` edges.
fn search_collect(space: &Space, cfg: &OracleConfig, target: usize, cap: usize) -> (Classes, u64, bool) {
    let depth = cfg.split_depth.min(space.edges.len());
    let parts = space.prefixes(depth, target);
    let per_part = (cap / parts.len().max(1)).max(1);
    let sinks: Vec<Sink> = cfg.run(|| {
        parts
            .par_iter()
            .map(|p| {
                let mut st = p.state.clone();
                let mut sink = Sink::new(if cap == usize::MAX { cap } else { per_part });
                space.collect_dfs(&mut st, p.depth, target, &mut sink);
                sink
            })
            .collect()
    });
    let mut classes = Classes::new();
    let mut nodes = parts.len() as u64;
    let mut truncated = false;
    for s in sinks {
        nodes += s.nodes;
        truncated |= s.truncated;
        classes.extend(s.classes);
    }
    (classes, nodes, truncated)
}

pub fn max_edges_exhaustive(r: usize, n: usize, m: usize) -> Result<OracleResult> {
    max_edges_with(r, n, m, &OracleConfig::default())
}

/// Exhaustive maximum: full enumeration for `n <= 8`, branch and bound up to
/// `n = 10`.
pub fn max_edges_with(r: usize, n: usize, m: usize, cfg: &OracleConfig) -> Result<OracleResult> {
    check_range(r, n, m, BNB_LIMIT, "n <= 10")?;
    let mode = if n <= FULL_LIMIT { Mode::Full } else { Mode::BranchAndBound };
    oracle_in_mode(r, n, m, mode, cfg)
}

/// Runs the oracle in a chosen mode (branch and bound is allowed at any
/// supported order, which lets the two modes be compared).
pub fn oracle_in_mode(r: usize, n: usize, m: usize, mode: Mode, cfg: &OracleConfig) -> Result<OracleResult> {
    let limit = if mode == Mode::Full { FULL_LIMIT } else { BNB_LIMIT };
    check_range(r, n, m, limit, if mode == Mode::Full { "n <= 8" } else { "n <= 10" })?;
    let space = Space::new(r, n, m, mode);
    let (max_edges, nodes_max) = search_max(&space, cfg);
    let cap = if mode == Mode::Full { usize::MAX } else { BNB_LEAF_CAP };
    let (classes, nodes_collect, truncated) = search_collect(&space, cfg, max_edges, cap);
    Ok(OracleResult {
        r,
        n,
        m,
        mode,
        max_edges,
        extremal: classes.into_values().collect(),
        explored: nodes_max + nodes_collect,
        complete: !truncated,
    })
}

/// Admissible graphs with at least `turm - slack` edges, up to isomorphisms
/// fixing `M`, ordered by canonical form.
pub fn near_extremal(r: usize, n: usize, m: usize, slack: usize) -> Result<Vec<Graph>> {
    near_extremal_with(r, n, m, slack, &OracleConfig::default())
}

pub fn near_extremal_with(r: usize, n: usize, m: usize, slack: usize, cfg: &OracleConfig) -> Result<Vec<Graph>> {
    check_range(r, n, m, FULL_LIMIT, "n <= 8")?;
    let target = (turm_number(r, n, m)? as usize).saturating_sub(slack);
    let space = Space::new(r, n, m, Mode::Full);
    let (classes, _, _) = search_collect(&space, cfg, target, usize::MAX);
    Ok(classes.into_values().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub r: usize,
    pub n: usize,
    pub m: usize,
    pub oracle_max: usize,
    pub formula: u64,
    /// Extremal classes found by the oracle (isomorphisms fixing `M`).
    pub oracle_classes: usize,
    /// Classes produced by the family enumeration.
    pub family_classes: usize,
    /// Oracle classes that are not family members.
    pub outside_family: usize,
    /// Family members the oracle did not find.
    pub missed_by_oracle: usize,
    /// Whether the sets agree once `M` is ignored.
    pub agree_ignoring_m: bool,
    pub holds: bool,
}

pub fn verify_uniqueness(r: usize, n: usize, m: usize) -> Result<UniquenessReport> {
    verify_uniqueness_with(r, n, m, &OracleConfig::default())
}

pub fn verify_uniqueness_with(r: usize, n: usize, m: usize, cfg: &OracleConfig) -> Result<UniquenessReport> {
    check_range(r, n, m, FULL_LIMIT, "n <= 8")?;
    let res = oracle_in_mode(r, n, m, Mode::Full, cfg)?;
    let formula = turm_number(r, n, m)?;
    let m_set = VertexSet::prefix(n, m);
    let form = |g: &Graph, s: &VertexSet| crate::canon::canonical_form(g, s);
    let oracle: std::collections::BTreeSet<CanonicalForm> =
        res.extremal.iter().map(|g| form(g, &m_set)).collect();
    let family = enumerate_members(r, n, m)?;
    let fam: std::collections::BTreeSet<CanonicalForm> = family
        .iter()
        .map(|f| form(f.instance.graph(), f.instance.m_set()))
        .collect();
    let outside_family = oracle.difference(&fam).count();
    let missed_by_oracle = fam.difference(&oracle).count();
    let empty = VertexSet::empty(n);
    let plain = |forms: Vec<&Graph>| -> std::collections::BTreeSet<CanonicalForm> {
        forms.into_iter().map(|g| form(g, &empty)).collect()
    };
    let agree_ignoring_m = plain(res.extremal.iter().collect())
        == plain(family.iter().map(|f| f.instance.graph()).collect());
    Ok(UniquenessReport {
        r,
        n,
        m,
        oracle_max: res.max_edges,
        formula,
        oracle_classes: oracle.len(),
        family_classes: fam.len(),
        outside_family,
        missed_by_oracle,
        agree_ignoring_m,
        holds: res.max_edges as u64 == formula && outside_family == 0 && missed_by_oracle == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub deficiency: usize,
    pub graph_count: usize,
    pub min_distance: Option<usize>,
    pub max_distance: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub r: usize,
    pub n: usize,
    pub m: usize,
    pub turm: u64,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    /// Maximum distance is nondecreasing over the rows that have graphs.
    pub fn max_distance_monotone(&self) -> bool {
        let maxes: Vec<usize> = self.rows.iter().filter_map(|r| r.max_distance).collect();
        maxes.windows(2).all(|w| w[0] <= w[1])
    }
}

pub fn stability_scan(r: usize, n: usize, m: usize, max_slack: usize) -> Result<ScanReport> {
    stability_scan_with(r, n, m, max_slack, &OracleConfig::default())
}

/// For each deficiency `d <= max_slack`, the spread of edit distances (with
/// `M` held fixed) from the admissible graphs with `turm - d` edges to the
/// nearest family member.
pub fn stability_scan_with(
    r: usize,
    n: usize,
    m: usize,
    max_slack: usize,
    cfg: &OracleConfig,
) -> Result<ScanReport> {
    check_range(r, n, m, FULL_LIMIT, "n <= 8")?;
    let turm = turm_number(r, n, m)?;
    let graphs = near_extremal_with(r, n, m, max_slack, cfg)?;
    let family = enumerate_members(r, n, m)?;
    let m_set = VertexSet::prefix(n, m);
    let distances: Vec<Result<(usize, usize)>> = cfg.run(|| {
        graphs
            .par_iter()
            .map(|g| {
                let mut best = usize::MAX;
                for f in &family {
                    best = best.min(edit_distance_iso(g, f.instance.graph(), &m_set)?.edits);
                }
                Ok((turm as usize - g.edge_count(), best))
            })
            .collect()
    });
    let mut rows: Vec<ScanRow> = (0..=max_slack)
        .map(|d| ScanRow {
            deficiency: d,
            graph_count: 0,
            min_distance: None,
            max_distance: None,
        })
        .collect();
    for entry in distances {
        let (d, dist) = entry?;
        let row = &mut rows[d];
        row.graph_count += 1;
        row.min_distance = Some(row.min_distance.map_or(dist, |x| x.min(dist)));
        row.max_distance = Some(row.max_distance.map_or(dist, |x| x.max(dist)));
    }
    Ok(ScanReport { r, n, m, turm, rows })
}
