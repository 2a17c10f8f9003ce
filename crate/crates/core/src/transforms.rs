//! Graph transformations and counting bounds from the extremal argument.
//!
//! * [`push`] symmetrises low-degree vertices outside `M` onto `V \ M`;
//! * [`redirect`] moves degree-`(n-m-1)` vertices with a neighbour in `M`
//!   off `M` without changing the edge count;
//! * [`compute_x`] collects vertices with many `M`-neighbours and certifies
//!   the size bound on that set;
//! * [`peel`] removes maximum cliques of order at least `r` greedily, and
//!   [`g_value`] / [`largem_bound`] bound the edge count from the peeled sizes;
//! * [`seq_check`] applies a single-vertex rewiring to a family member.
//!
//! Thresholds involving `mu` and `nu` are evaluated in exact rational
//! arithmetic.

use num_rational::Ratio;

use crate::clique::{find_kr_touching, max_clique};
use crate::edit::edit_count_labelled;
use crate::error::{Error, Result, SeqPrecondition};
use crate::graph::{Graph, VertexSet};
use crate::instance::{CliqueWitness, Instance};
use crate::turan::{binom2, is_member, turan_number, FamilyMember};

pub type Rational = Ratio<i64>;

fn check_unit(name: &'static str, x: Rational) -> Result<()> {
    if x < Rational::from_integer(0) || x >= Rational::from_integer(1) {
        return Err(Error::RatioOutOfRange {
            name,
            value: x.to_string(),
        });
    }
    Ok(())
}

fn int(x: usize) -> Rational {
    Rational::from_integer(x as i64)
}

fn require_constraint(inst: &Instance, operation: &'static str) -> Result<()> {
    match find_kr_touching(inst) {
        None => Ok(()),
        Some(w) => Err(Error::Precondition {
            operation,
            detail: format!("K_{} on {} meets M", inst.r(), w.vertices),
        }),
    }
}

/// `V \ (M + v)`.
fn full_outside(inst: &Instance, v: usize) -> VertexSet {
    let mut s = inst.m_set().complement();
    s.remove(v);
    s
}

/// One neighbourhood replacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewireStep {
    pub vertex: usize,
    pub old: VertexSet,
    pub new: VertexSet,
}

#[derive(Clone, Debug)]
pub struct PushTrace {
    pub result: Instance,
    pub steps: Vec<RewireStep>,
    /// Edge edits summed over all steps.
    pub edits: usize,
    /// `e(result) - e(input)`.
    pub gain: usize,
}

/// `n - m - mu n - 1`, the degree floor for vertices outside `M`.
pub fn push_degree_floor(n: usize, m: usize, mu: Rational) -> Rational {
    int(n) - int(m) - mu * int(n) - int(1)
}

/// Rewires, lowest index first, every vertex outside `M` whose degree is below
/// `n - m - mu n - 1` to be adjacent to exactly `V \ (M + v)`, until none
/// remains.
pub fn push(inst: &Instance, mu: Rational) -> Result<PushTrace> {
    check_unit("mu", mu)?;
    require_constraint(inst, "push")?;
    let (n, m) = (inst.n(), inst.m());
    let floor = push_degree_floor(n, m, mu);
    let outside = inst.m_set().complement();
    let mut g = inst.graph().clone();
    let mut steps = Vec::new();
    let mut edits = 0;
    while let Some(v) = outside.iter().find(|&v| int(g.degree(v)) < floor) {
        let old = g.neighbours(v).clone();
        let new = full_outside(inst, v);
        edits += g.set_neighbourhood(v, &new);
        steps.push(RewireStep { vertex: v, old, new });
    }
    let gain = g.edge_count() - inst.edge_count();
    let trace = PushTrace {
        result: inst.with_graph(g)?,
        steps,
        edits,
        gain,
    };
    verify_push(inst, mu, &trace)?;
    Ok(trace)
}

/// Checks the four guarantees of [`push`] on a trace.
pub fn verify_push(input: &Instance, mu: Rational, trace: &PushTrace) -> Result<()> {
    let fail = |detail: String| Err(Error::ConclusionFailed { operation: "push", detail });
    let out = &trace.result;
    let (n, m) = (input.n(), input.m());
    if let Some(w) = find_kr_touching(out) {
        return fail(format!("(a) result has K_r {} meeting M", w.vertices));
    }
    let (before, after) = (input.edge_count(), out.edge_count());
    if after < before || after - before != trace.gain {
        return fail(format!("(b) edge count went {before} -> {after}, gain {}", trace.gain));
    }
    if (after == before) != (out.graph() == input.graph()) {
        return fail("(b) equality of edge counts must coincide with an unchanged graph".into());
    }
    if trace.edits < trace.gain {
        return fail(format!("edits {} below gain {}", trace.edits, trace.gain));
    }
    let labelled = edit_count_labelled(input.graph(), out.graph())?;
    if labelled > trace.edits {
        return fail(format!("labelled distance {labelled} exceeds step edits {}", trace.edits));
    }
    let n2 = int(n * n);
    if !(int(trace.gain) > mu * mu * n2 || int(trace.edits) <= mu * n2) {
        return fail(format!(
            "(c) gain {} <= mu^2 n^2 and edits {} > mu n^2",
            trace.gain, trace.edits
        ));
    }
    let floor = push_degree_floor(n, m, mu);
    if let Some(v) = input.m_set().complement().iter().find(|&v| int(out.graph().degree(v)) < floor) {
        return fail(format!("(d) vertex {v} has degree {}", out.graph().degree(v)));
    }
    Ok(())
}

/// Rewires, lowest index first, each vertex outside `M` of degree exactly
/// `n - m - 1` that still has a neighbour in `M` onto `V \ (M + v)`.
pub fn redirect(inst: &Instance) -> Result<Instance> {
    Ok(redirect_traced(inst)?.0)
}

/// [`redirect`] together with its steps.
pub fn redirect_traced(inst: &Instance) -> Result<(Instance, Vec<RewireStep>)> {
    require_constraint(inst, "redirect")?;
    let (n, m) = (inst.n(), inst.m());
    let outside = inst.m_set().complement();
    if let Some(v) = outside.iter().find(|&v| inst.graph().degree(v) + m + 1 < n) {
        return Err(Error::Precondition {
            operation: "redirect",
            detail: format!(
                "vertex {v} outside M has degree {} < n - m - 1 = {}",
                inst.graph().degree(v),
                n - m - 1
            ),
        });
    }
    let target = n - m - 1;
    let mut g = inst.graph().clone();
    let mut steps = Vec::new();
    while let Some(v) = outside
        .iter()
        .find(|&v| g.degree(v) == target && g.neighbours(v).intersects(inst.m_set()))
    {
        let old = g.neighbours(v).clone();
        let new = full_outside(inst, v);
        let before = g.edge_count();
        g.set_neighbourhood(v, &new);
        debug_assert_eq!(before, g.edge_count());
        steps.push(RewireStep { vertex: v, old, new });
    }
    Ok((inst.with_graph(g)?, steps))
}

/// Vertices outside `M` with at least `max(1, nu n)` neighbours in `M`.
#[derive(Clone, Debug)]
pub struct XSet {
    pub members: VertexSet,
    /// `(1 + nu)(r - 2)m`.
    pub bound: Rational,
    /// Whether every member has degree at least `n - m - nu^2 n`, which is
    /// what makes `|X| <= bound` a guarantee.
    pub certified: bool,
}

pub fn compute_x(inst: &Instance, nu: Rational) -> Result<XSet> {
    check_unit("nu", nu)?;
    require_constraint(inst, "compute_x")?;
    let (g, n, m, r) = (inst.graph(), inst.n(), inst.m(), inst.r());
    let need = std::cmp::max(int(1), nu * int(n));
    let members = VertexSet::from_iter_in(
        n,
        inst.m_set()
            .complement()
            .iter()
            .filter(|&v| int(g.neighbours(v).intersection_len(inst.m_set())) >= need),
    );
    let floor = int(n) - int(m) - nu * nu * int(n);
    let certified = members.iter().all(|v| int(g.degree(v)) >= floor);
    let bound = (int(1) + nu) * int((r - 2) * m);
    if certified && int(members.len()) > bound {
        return Err(Error::ConclusionFailed {
            operation: "compute_x",
            detail: format!("|X| = {} exceeds {bound}", members.len()),
        });
    }
    Ok(XSet {
        members,
        bound,
        certified,
    })
}

/// Disjoint cliques removed greedily, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeling {
    pub cliques: Vec<VertexSet>,
}

impl Peeling {
    pub fn sizes(&self) -> Vec<usize> {
        self.cliques.iter().map(VertexSet::len).collect()
    }

    pub fn total(&self) -> usize {
        self.cliques.iter().map(VertexSet::len).sum()
    }
}

/// Repeatedly removes a maximum clique of the remaining graph while it has at
/// least `r` vertices.
pub fn peel(inst: &Instance) -> Result<Peeling> {
    require_constraint(inst, "peel")?;
    let g = inst.graph();
    let mut rest = g.vertices();
    let mut cliques = Vec::new();
    loop {
        let c = max_clique(g, &rest);
        if c.len() < inst.r() {
            break;
        }
        debug_assert!(!c.intersects(inst.m_set()));
        rest.difference_with(&c);
        cliques.push(c);
    }
    Ok(Peeling { cliques })
}

fn check_sizes(n: usize, r: usize, sizes: &[usize]) -> Result<usize> {
    if let Some(&size) = sizes.iter().find(|&&p| p < r) {
        return Err(Error::CliqueTooSmall { size, r });
    }
    let total: usize = sizes.iter().sum();
    if total > n {
        return Err(Error::SizesExceedOrder { total, n });
    }
    Ok(total)
}

/// Upper bound on `e(G)` given the peeled clique sizes:
/// `sum C(p_i,2) + sum_{i<j} (p_i-1)p_j + (p-k)(n-m-p) + mk(r-2) + t_{r-1}(n-p)`.
pub fn g_value(n: usize, m: usize, r: usize, sizes: &[usize]) -> Result<i64> {
    if r < 3 {
        return Err(Error::CliqueOrder(r));
    }
    let p = check_sizes(n, r, sizes)? as i64;
    let k = sizes.len() as i64;
    let (n_, m_, r_) = (n as i64, m as i64, r as i64);
    let within: i64 = sizes.iter().map(|&s| binom2(s as u64) as i64).sum();
    let mut between = 0i64;
    for (i, &a) in sizes.iter().enumerate() {
        for &b in &sizes[i + 1..] {
            between += (a as i64 - 1) * b as i64;
        }
    }
    Ok(within
        + between
        + (p - k) * (n_ - m_ - p)
        + m_ * k * (r_ - 2)
        + turan_number(r - 1, n - p as usize) as i64)
}

/// The telescoped form of [`g_value`] valid when `n <= (r-1)m`:
/// `t_{r-1}(n) - sum_i sum_{j=0}^{p_i-r} (m - floor((n - (p - j - s_i))/(r-1)) - 1)`
/// with `s_i` the total size of the cliques after the `i`-th.
pub fn largem_bound(n: usize, m: usize, r: usize, sizes: &[usize]) -> Result<i64> {
    if r < 3 {
        return Err(Error::CliqueOrder(r));
    }
    if n > (r - 1) * m {
        return Err(Error::NotCaseOne { n, m, r });
    }
    let p = check_sizes(n, r, sizes)?;
    let mut total = turan_number(r - 1, n) as i64;
    let mut suffix: usize = p;
    for &pi in sizes {
        suffix -= pi;
        for j in 0..=(pi - r) {
            let removed = p - j - suffix;
            total -= m as i64 - ((n - removed) / (r - 1)) as i64 - 1;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct SeqOutcome {
    /// No `K_r` meets `M` after the rewiring.
    pub admissible: bool,
    pub modified: Instance,
    pub witness: Option<CliqueWitness>,
}

/// Replaces the neighbourhood `V \ (M + v)` of `v` in a family member by
/// `new_neighbourhood` (of size `n - m - 1`, meeting `M`). When no `K_r` meets
/// `M` afterwards the result is checked to be a family member again.
pub fn seq_check(
    member: &FamilyMember,
    v: usize,
    new_neighbourhood: &VertexSet,
) -> Result<SeqOutcome> {
    let inst = &member.instance;
    let (n, m, r) = (inst.n(), inst.m(), inst.r());
    if n <= (r - 1) * m {
        return Err(SeqPrecondition::NotCaseTwo.into());
    }
    if v >= n {
        return Err(SeqPrecondition::VertexOutOfRange(v).into());
    }
    if inst.m_set().contains(v) {
        return Err(SeqPrecondition::VertexInM(v).into());
    }
    if inst.graph().neighbours(v) != &full_outside(inst, v) {
        return Err(SeqPrecondition::NotFullNeighbourhood(v).into());
    }
    if new_neighbourhood.universe() != n {
        return Err(Error::SizeMismatch {
            left: new_neighbourhood.universe(),
            right: n,
        });
    }
    if new_neighbourhood.contains(v) {
        return Err(SeqPrecondition::ContainsSelf.into());
    }
    if new_neighbourhood.len() != n - m - 1 {
        return Err(SeqPrecondition::WrongSize {
            got: new_neighbourhood.len(),
            expected: n - m - 1,
        }
        .into());
    }
    if !new_neighbourhood.intersects(inst.m_set()) {
        return Err(SeqPrecondition::MissesM.into());
    }
    let mut g: Graph = inst.graph().clone();
    g.set_neighbourhood(v, new_neighbourhood);
    let modified = inst.with_graph(g)?;
    let witness = find_kr_touching(&modified);
    let admissible = witness.is_none();
    if admissible && !is_member(&modified) {
        return Err(Error::ConclusionFailed {
            operation: "seq_check",
            detail: "admissible rewiring left the extremal family".into(),
        });
    }
    Ok(SeqOutcome {
        admissible,
        modified,
        witness,
    })
}
