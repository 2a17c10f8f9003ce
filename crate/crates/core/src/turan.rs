//! Turán graphs, the extremal count `turm(r-1, n, m)` and the extremal family.
//!
//! In the regime `n > (r-1)m` the extremal graphs are built from a balanced
//! `(r-1)`-partite graph with classes `V_1..V_{r-1}` of size `m` holding `M`,
//! a clique `Y` of vertices joined to everything outside `M`, and up to
//! `r-1` *sporadic* vertices `v_i` joined to everything except `V_i`. For
//! `n <= (r-1)m` the only extremal graph is the Turán graph itself, with `M`
//! anywhere.

use std::collections::HashSet;

use crate::canon::{canonical_form, CanonicalForm};
use crate::edit::EXACT_ISO_LIMIT;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::instance::Instance;

#[inline]
pub fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Class sizes of `T_parts(n)`, largest first, zero-sized classes omitted.
pub fn turan_class_sizes(parts: usize, n: usize) -> Vec<usize> {
    assert!(parts >= 1, "a Turán graph needs at least one class");
    let q = n / parts;
    let rem = n % parts;
    (0..parts)
        .map(|i| if i < rem { q + 1 } else { q })
        .filter(|&s| s > 0)
        .collect()
}

/// `T_parts(n)` with classes in contiguous blocks, larger classes first.
pub fn turan_graph(parts: usize, n: usize) -> Graph {
    let mut class = Vec::with_capacity(n);
    for (i, s) in turan_class_sizes(parts, n).into_iter().enumerate() {
        class.extend(std::iter::repeat_n(i, s));
    }
    complete_multipartite(&class)
}

/// Joins every pair of vertices carrying different class labels.
fn complete_multipartite(class: &[usize]) -> Graph {
    let n = class.len();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if class[u] != class[v] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// `t_parts(n)`, the number of edges of `T_parts(n)`.
pub fn turan_number(parts: usize, n: usize) -> u64 {
    assert!(parts >= 1, "a Turán graph needs at least one class");
    let q = (n / parts) as u64;
    let rem = (n % parts) as u64;
    let parts = parts as u64;
    binom2(n as u64) - rem * binom2(q + 1) - (parts - rem) * binom2(q)
}

/// Maximum number of edges of an `n`-vertex graph with no `K_r` meeting an
/// `m`-set.
pub fn turm_number(r: usize, n: usize, m: usize) -> Result<u64> {
    if r < 3 {
        return Err(Error::CliqueOrder(r));
    }
    if m > n {
        return Err(Error::SetTooLarge { m, n });
    }
    if n <= (r - 1) * m {
        Ok(turan_number(r - 1, n))
    } else {
        Ok(turm_case_two(r as u64, n as u64, m as u64))
    }
}

/// `C(n,2) - nm + (r-1) C(m+1,2)`, without the regime switch.
pub fn turm_case_two(r: u64, n: u64, m: u64) -> u64 {
    binom2(n) + (r - 1) * binom2(m + 1) - n * m
}

/// `C(n-(r-1)m, 2) + (n-(r-1)m)(r-2)m + t_{r-1}((r-1)m)`: the edge count of a
/// family member read off from its three blocks.
pub fn member_edge_sum(r: usize, n: usize, m: usize) -> u64 {
    let core = (r - 1) * m;
    assert!(n >= core);
    let outside = (n - core) as u64;
    binom2(outside) + outside * ((r - 2) * m) as u64 + turan_number(r - 1, core)
}

/// Discrete choices selecting one member of the extremal family when
/// `n > (r-1)m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub r: usize,
    pub n: usize,
    pub m: usize,
    /// `placement[i]` vertices of `M` lie in class `V_{i+1}`.
    pub placement: Vec<usize>,
    /// 1-based indices `i` of the sporadic vertices `v_i` that are kept.
    pub kept_sporadic: Vec<usize>,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let FamilySpec { r, n, m, .. } = *self;
        let bad = |invariant, detail: String| Err(Error::InvalidSpec { invariant, detail });
        if r < 3 {
            return Err(Error::CliqueOrder(r));
        }
        if m > n {
            return Err(Error::SetTooLarge { m, n });
        }
        if n <= (r - 1) * m {
            return bad("n > (r-1)m", format!("n = {n}, (r-1)m = {}", (r - 1) * m));
        }
        if self.placement.len() != r - 1 {
            return bad(
                "placement has r-1 entries",
                format!("got {} entries for r = {r}", self.placement.len()),
            );
        }
        if self.placement.iter().sum::<usize>() != m {
            return bad(
                "placement sums to m",
                format!("sum {} != m = {m}", self.placement.iter().sum::<usize>()),
            );
        }
        if let Some(&x) = self.placement.iter().find(|&&x| x > m) {
            return bad("placement entries at most m", format!("entry {x} > m = {m}"));
        }
        let mut seen = HashSet::new();
        for &i in &self.kept_sporadic {
            if i == 0 || i > r - 1 {
                return bad("kept sporadic indices in 1..=r-1", format!("index {i}"));
            }
            if !seen.insert(i) {
                return bad("kept sporadic indices distinct", format!("index {i} repeated"));
            }
        }
        let room = n - (r - 1) * m;
        if self.kept_sporadic.len() > room {
            return bad(
                "|K| <= n-(r-1)m",
                format!("|K| = {} > n-(r-1)m = {room}", self.kept_sporadic.len()),
            );
        }
        Ok(())
    }
}

/// Where each kind of vertex of a constructed member ended up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberLayout {
    /// Colour classes `V_i` (empty in the Turán regime when a class is unused).
    pub classes: Vec<VertexSet>,
    /// `(i, vertex)` for each kept sporadic `v_i`.
    pub sporadic: Vec<(usize, usize)>,
    /// Remaining `Y`-vertices.
    pub y: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberOrigin {
    /// `T_{r-1}(n)` with `loads[i]` vertices of `M` in class `i`.
    Turan { loads: Vec<usize> },
    Construction(FamilySpec),
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub instance: Instance,
    pub origin: MemberOrigin,
    pub layout: MemberLayout,
}

impl FamilyMember {
    pub fn spec(&self) -> Option<&FamilySpec> {
        match &self.origin {
            MemberOrigin::Construction(s) => Some(s),
            MemberOrigin::Turan { .. } => None,
        }
    }
}

/// Builds the member of the family selected by `spec`, with `M = {0..m-1}`.
///
/// Vertices are numbered: `M` (class by class), the remaining class vertices
/// (class by class), kept sporadic vertices, then `Y`.
pub fn build_member(spec: &FamilySpec) -> Result<FamilyMember> {
    spec.validate()?;
    let FamilySpec { r, n, m, .. } = *spec;
    let parts = r - 1;
    let mut class_of: Vec<Option<usize>> = Vec::with_capacity(n);
    for (i, &load) in spec.placement.iter().enumerate() {
        class_of.extend(std::iter::repeat_n(Some(i), load));
    }
    for (i, &load) in spec.placement.iter().enumerate() {
        class_of.extend(std::iter::repeat_n(Some(i), m - load));
    }
    let mut kept = spec.kept_sporadic.clone();
    kept.sort_unstable();
    let core = parts * m;
    let mut g = Graph::empty(n);
    for u in 0..core {
        for v in (u + 1)..core {
            if class_of[u] != class_of[v] {
                g.add_edge(u, v);
            }
        }
    }
    let mut sporadic = Vec::with_capacity(kept.len());
    for (k, &i) in kept.iter().enumerate() {
        let s = core + k;
        sporadic.push((i, s));
        for (u, class) in class_of.iter().enumerate().take(core) {
            if *class != Some(i - 1) {
                g.add_edge(s, u);
            }
        }
    }
    // sporadic and Y vertices form a clique
    for u in core..n {
        for v in (u + 1)..n {
            g.add_edge(u, v);
        }
    }
    let y_start = core + kept.len();
    for y in y_start..n {
        for u in m..core {
            g.add_edge(y, u);
        }
    }
    let classes = (0..parts)
        .map(|i| VertexSet::from_iter_in(n, (0..core).filter(|&u| class_of[u] == Some(i))))
        .collect();
    let instance = Instance::with_prefix(g, m, r)?;
    Ok(FamilyMember {
        instance,
        origin: MemberOrigin::Construction(spec.clone()),
        layout: MemberLayout {
            classes,
            sporadic,
            y: VertexSet::from_iter_in(n, y_start..n),
        },
    })
}

/// `T_{r-1}(n)` with `loads[i]` vertices of `M = {0..m-1}` in class `i`.
pub fn build_turan_member(r: usize, n: usize, loads: &[usize]) -> Result<FamilyMember> {
    if r < 3 {
        return Err(Error::CliqueOrder(r));
    }
    let sizes = turan_class_sizes(r - 1, n);
    let m: usize = loads.iter().sum();
    if m > n {
        return Err(Error::SetTooLarge { m, n });
    }
    if loads.len() > sizes.len() || loads.iter().zip(&sizes).any(|(l, s)| l > s) {
        return Err(Error::InvalidSpec {
            invariant: "M loads fit the Turán classes",
            detail: format!("loads {loads:?} vs class sizes {sizes:?}"),
        });
    }
    let load = |i: usize| loads.get(i).copied().unwrap_or(0);
    let mut class = Vec::with_capacity(n);
    for i in 0..sizes.len() {
        class.extend(std::iter::repeat_n(i, load(i)));
    }
    for (i, &s) in sizes.iter().enumerate() {
        class.extend(std::iter::repeat_n(i, s - load(i)));
    }
    let g = complete_multipartite(&class);
    let classes = (0..r - 1)
        .map(|i| VertexSet::from_iter_in(n, (0..n).filter(|&u| class[u] == i)))
        .collect();
    Ok(FamilyMember {
        instance: Instance::with_prefix(g, m, r)?,
        origin: MemberOrigin::Turan {
            loads: (0..sizes.len()).map(load).collect(),
        },
        layout: MemberLayout {
            classes,
            sporadic: Vec::new(),
            y: VertexSet::empty(n),
        },
    })
}

/// Vectors `x` with `x[i] <= caps[i]`, summing to `total`, nonincreasing
/// across runs of equal caps (caps themselves nonincreasing).
fn placements(caps: &[usize], total: usize) -> Vec<Vec<usize>> {
    fn go(caps: &[usize], i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest_cap: usize = caps[i + 1..].iter().sum();
        let mut hi = caps[i].min(left);
        if i > 0 && caps[i] == caps[i - 1] {
            hi = hi.min(cur[i - 1]);
        }
        for x in (0..=hi).rev() {
            if left - x > rest_cap {
                break;
            }
            cur.push(x);
            go(caps, i + 1, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(caps, 0, total, &mut Vec::new(), &mut out);
    out
}

/// Pairwise non-isomorphic members of `Turm(r-1, n, m)` (isomorphisms fixing
/// `M` setwise), each with `M = {0..m-1}`.
pub fn enumerate_members(r: usize, n: usize, m: usize) -> Result<Vec<FamilyMember>> {
    if r < 3 {
        return Err(Error::CliqueOrder(r));
    }
    if m > n {
        return Err(Error::SetTooLarge { m, n });
    }
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut out = Vec::new();
    let mut keep = |member: FamilyMember| {
        let form = canonical_form(member.instance.graph(), member.instance.m_set());
        if seen.insert(form) {
            out.push(member);
        }
    };
    if n <= (r - 1) * m {
        let sizes = turan_class_sizes(r - 1, n);
        for loads in placements(&sizes, m) {
            keep(build_turan_member(r, n, &loads)?);
        }
    } else {
        let room = n - (r - 1) * m;
        for placement in placements(&vec![m; r - 1], m) {
            for subset in 0u32..(1 << (r - 1)) {
                if subset.count_ones() as usize > room {
                    continue;
                }
                let kept_sporadic = (1..r).filter(|&i| subset >> (i - 1) & 1 == 1).collect();
                keep(build_member(&FamilySpec {
                    r,
                    n,
                    m,
                    placement: placement.clone(),
                    kept_sporadic,
                })?);
            }
        }
    }
    Ok(out)
}

/// Whether `inst` is, up to an isomorphism fixing `M`, a member of
/// `Turm(r-1, n, m)`.
pub fn is_member(inst: &Instance) -> bool {
    let verdict = structural_membership(inst);
    if !verdict && inst.n() <= EXACT_ISO_LIMIT {
        return enumerated_membership(inst);
    }
    verdict
}

/// Membership decided against the enumerated family.
pub fn enumerated_membership(inst: &Instance) -> bool {
    let Ok(members) = enumerate_members(inst.r(), inst.n(), inst.m()) else {
        return false;
    };
    let form = canonical_form(inst.graph(), inst.m_set());
    members
        .iter()
        .any(|mem| canonical_form(mem.instance.graph(), mem.instance.m_set()) == form)
}

/// Non-adjacency classes if the complement of `G[set]` is a disjoint union of
/// cliques.
fn independent_classes(g: &Graph, set: &VertexSet) -> Option<Vec<VertexSet>> {
    let mut left = set.clone();
    let mut classes = Vec::new();
    while let Some(v) = left.first() {
        let class = set.difference(g.neighbours(v));
        if !class.is_subset(&left) {
            return None;
        }
        for u in class.iter() {
            if g.neighbours(u).intersects(&class) || set.difference(g.neighbours(u)) != class {
                return None;
            }
        }
        left.difference_with(&class);
        classes.push(class);
    }
    Some(classes)
}

/// Membership read off from the graph's structure.
pub fn structural_membership(inst: &Instance) -> bool {
    let (g, r, n, m) = (inst.graph(), inst.r(), inst.n(), inst.m());
    let Ok(target) = turm_number(r, n, m) else {
        return false;
    };
    if g.edge_count() as u64 != target {
        return false;
    }
    if n <= (r - 1) * m {
        let Some(classes) = independent_classes(g, &g.vertices()) else {
            return false;
        };
        let mut sizes: Vec<usize> = classes.iter().map(VertexSet::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        return sizes == turan_class_sizes(r - 1, n);
    }
    let m_set = inst.m_set();
    let outside = m_set.complement();
    let mut z = VertexSet::empty(n);
    for v in outside.iter() {
        if !g.neighbours(v).intersects(m_set) {
            let mut expect = outside.clone();
            expect.remove(v);
            if g.neighbours(v) != &expect {
                return false;
            }
            z.insert(v);
        }
    }
    let w = z.complement();
    if m == 0 {
        return w.is_empty();
    }
    let Some(classes) = independent_classes(g, &w) else {
        return false;
    };
    if classes.len() != r - 1 {
        return false;
    }
    let mut sporadic = 0;
    for c in &classes {
        match c.len() {
            s if s == m => {}
            s if s == m + 1 && !c.is_subset(m_set) => sporadic += 1,
            _ => return false,
        }
    }
    sporadic <= n - (r - 1) * m
}
