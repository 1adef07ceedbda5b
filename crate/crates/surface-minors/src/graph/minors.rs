use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CanonicalForm, Graph, GraphError, VertexId};

/// One minor operation, naming edges by endpoints so that the op survives
/// serialisation independently of edge numbering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum MinorOp {
    DeleteVertex { v: VertexId },
    DeleteEdge { u: VertexId, v: VertexId },
    ContractEdge { u: VertexId, v: VertexId },
}

impl MinorOp {
    pub fn apply(&self, g: &Graph) -> Result<Graph, GraphError> {
        match *self {
            MinorOp::DeleteVertex { v } => g.delete_vertex(v),
            MinorOp::DeleteEdge { u, v } => g.delete_edge(g.edge_between(u, v).ok_or(GraphError::UnknownVertex(u, v))?),
            MinorOp::ContractEdge { u, v } => {
                g.contract_edge(g.edge_between(u, v).ok_or(GraphError::UnknownVertex(u, v))?)
            }
        }
    }

    fn kind(&self) -> u8 {
        match self {
            MinorOp::DeleteVertex { .. } => 0,
            MinorOp::DeleteEdge { .. } => 1,
            MinorOp::ContractEdge { .. } => 2,
        }
    }
}

impl std::fmt::Display for MinorOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MinorOp::DeleteVertex { v } => write!(f, "delete vertex {v}"),
            MinorOp::DeleteEdge { u, v } => write!(f, "delete edge {u}-{v}"),
            MinorOp::ContractEdge { u, v } => write!(f, "contract edge {u}-{v}"),
        }
    }
}

/// Every vertex deletion, edge deletion and edge contraction, keeping the
/// first op of each kind per isomorphism class of the result.
pub(super) fn one_step_minors(g: &Graph) -> Vec<(MinorOp, Graph)> {
    let mut ops = Vec::new();
    for &v in g.vertices() {
        ops.push(MinorOp::DeleteVertex { v });
    }
    for &(u, v) in g.edges() {
        ops.push(MinorOp::DeleteEdge { u, v });
    }
    for &(u, v) in g.edges() {
        ops.push(MinorOp::ContractEdge { u, v });
    }
    let mut seen: BTreeSet<(u8, CanonicalForm)> = BTreeSet::new();
    let mut out = Vec::new();
    for op in ops {
        let h = op.apply(g).expect("op built from the graph itself");
        if seen.insert((op.kind(), h.canonical_form())) {
            out.push((op, h));
        }
    }
    out
}
