//! JSON instance documents.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use turmlab::{Graph, Instance, VertexSet};

use crate::graph6::{self, Graph6Error};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphPayload {
    Graph6(String),
    Edges(Vec<[usize; 2]>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub format_version: u32,
    pub r: usize,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    pub graph: GraphPayload,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("graph6 payload: {0}")]
    Graph6(#[from] Graph6Error),
    #[error("graph6 payload has {decoded} vertices but n = {declared}")]
    OrderMismatch { declared: usize, decoded: usize },
    #[error("M must be strictly increasing")]
    UnsortedM,
    #[error(transparent)]
    Instance(#[from] turmlab::Error),
}

impl InstanceDocument {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceDocument {
            format_version: FORMAT_VERSION,
            r: inst.r(),
            n: inst.n(),
            m: inst.m_set().to_vec(),
            graph: GraphPayload::Graph6(graph6::encode(inst.graph())),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, DocumentError> {
        if self.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.format_version));
        }
        if self.m.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DocumentError::UnsortedM);
        }
        let graph = match &self.graph {
            GraphPayload::Graph6(s) => {
                let g = graph6::decode(s)?;
                if g.n() != self.n {
                    return Err(DocumentError::OrderMismatch {
                        declared: self.n,
                        decoded: g.n(),
                    });
                }
                g
            }
            GraphPayload::Edges(edges) => Graph::from_edges(self.n, edges.iter().map(|e| (e[0], e[1])))?,
        };
        let m = VertexSet::try_from_iter(self.n, self.m.iter().copied())?;
        Ok(Instance::new(graph, m, self.r)?)
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }
}
