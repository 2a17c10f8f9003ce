use crate::clique;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// A graph together with the protected set `M` and the clique order `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    graph: Graph,
    m_set: VertexSet,
    r: usize,
}

impl Instance {
    pub fn new(graph: Graph, m_set: VertexSet, r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::CliqueOrder(r));
        }
        if m_set.universe() != graph.n() {
            return Err(Error::SizeMismatch {
                left: m_set.universe(),
                right: graph.n(),
            });
        }
        Ok(Instance { graph, m_set, r })
    }

    /// Instance with `M = {0, ..., m-1}`.
    pub fn with_prefix(graph: Graph, m: usize, r: usize) -> Result<Self> {
        let n = graph.n();
        if m > n {
            return Err(Error::SetTooLarge { m, n });
        }
        Self::new(graph, VertexSet::prefix(n, m), r)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn m_set(&self) -> &VertexSet {
        &self.m_set
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.m_set.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `n <= (r-1)m`.
    pub fn is_case_one(&self) -> bool {
        self.n() <= (self.r - 1) * self.m()
    }

    /// Same `M` and `r`, different graph on the same vertex set.
    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        Self::new(graph, self.m_set.clone(), self.r)
    }

    /// True when no `K_r` meets `M`.
    pub fn satisfies_constraint(&self) -> bool {
        clique::find_kr_touching(self).is_none()
    }
}

/// An `r`-clique that meets `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueWitness {
    pub vertices: VertexSet,
}
