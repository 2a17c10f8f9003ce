//! Exact combinatorics for graphs in which no `r`-clique meets a fixed vertex
//! set `M`: the extremal count and family, the symmetrisation-style
//! transforms used to reach them, and exhaustive oracles for small orders.

pub mod canon;
pub mod clique;
pub mod edit;
pub mod error;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod transforms;
pub mod turan;

pub use canon::{canonical_form, CanonicalForm};
pub use clique::{find_kr_touching, max_clique};
pub use edit::{edit_count_labelled, edit_distance_iso, IsoDistance};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use instance::{CliqueWitness, Instance};
pub use oracle::{
    max_edges_exhaustive, near_extremal, stability_scan, verify_uniqueness, OracleConfig,
    OracleResult, ScanReport, ScanRow, UniquenessReport,
};
pub use turan::{
    build_member, enumerate_members, is_member, turan_graph, turan_number, turm_number,
    FamilyMember, FamilySpec,
};
pub use transforms::{
    compute_x, g_value, largem_bound, peel, push, redirect, seq_check, Peeling, PushTrace,
    Rational, XSet,
};
