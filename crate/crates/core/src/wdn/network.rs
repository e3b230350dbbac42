use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::RealMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Junction,
    Tank,
    Reservoir,
}

/// Node or edge identifier; JSON files may use strings or integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ident {
    Num(u64),
    Name(String),
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ident::Num(n) => write!(f, "{n}"),
            Ident::Name(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: Ident,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: Ident,
    pub tail: Ident,
    pub head: Ident,
}

/// Diagonal hydraulic parameters of the elastic water column model.
///
/// `l`, `r` and `cl` have one entry per pipe; `d`, `cn` and `q` one per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HydraulicParams {
    /// Hydraulic inductance.
    #[serde(rename = "L")]
    pub l: Vec<f64>,
    /// Hydraulic resistance.
    #[serde(rename = "R")]
    pub r: Vec<f64>,
    /// Valve and pressure discharge.
    #[serde(rename = "D")]
    pub d: Vec<f64>,
    /// Link capacitance.
    #[serde(rename = "Cl")]
    pub cl: Vec<f64>,
    /// Node capacitance.
    #[serde(rename = "Cn")]
    pub cn: Vec<f64>,
    /// Outflow and demand.
    #[serde(rename = "Q")]
    pub q: Vec<f64>,
}

impl HydraulicParams {
    /// All-ones parameters with zero demand and zero discharge.
    pub fn unit(nodes: usize, edges: usize) -> Self {
        Self {
            l: vec![1.0; edges],
            r: vec![1.0; edges],
            d: vec![0.0; nodes],
            cl: vec![1.0; edges],
            cn: vec![1.0; nodes],
            q: vec![0.0; nodes],
        }
    }

    pub fn validate(&self, nodes: usize, edges: usize) -> Result<()> {
        let checks: [(&'static str, &[f64], usize, bool); 6] = [
            ("L", &self.l, edges, true),
            ("R", &self.r, edges, true),
            ("Cl", &self.cl, edges, true),
            ("D", &self.d, nodes, false),
            ("Cn", &self.cn, nodes, true),
            ("Q", &self.q, nodes, false),
        ];
        for (name, values, len, positive) in checks {
            if values.len() != len {
                return Err(Error::InvalidParameter {
                    name,
                    msg: format!("expected {len} entries, found {}", values.len()),
                });
            }
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    msg: format!("non-finite entry {v}"),
                });
            }
            if positive {
                if let Some(v) = values.iter().find(|&&v| v <= 0.0) {
                    return Err(Error::InvalidParameter {
                        name,
                        msg: format!("entries must be positive, found {v}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Flow and head vectors, either an operating point or an initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub q: Vec<f64>,
    pub h: Vec<f64>,
}

impl OperatingPoint {
    pub fn new(q: Vec<f64>, h: Vec<f64>) -> Self {
        Self { q, h }
    }

    pub fn from_state(x: &[f64], edges: usize) -> Self {
        Self {
            q: x[..edges].to_vec(),
            h: x[edges..].to_vec(),
        }
    }

    pub fn to_state(&self) -> Vec<f64> {
        self.q.iter().chain(self.h.iter()).copied().collect()
    }

    /// Checks the dimensions and strict positivity of every entry.
    pub fn validate(&self, nodes: usize, edges: usize) -> Result<()> {
        if self.q.len() != edges || self.h.len() != nodes {
            return Err(Error::DimensionMismatch {
                context: "operating point (q, h)",
                expected: (edges, nodes),
                found: (self.q.len(), self.h.len()),
            });
        }
        for (index, &value) in self.q.iter().chain(self.h.iter()).enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveState { index, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NetworkFile {
    nodes: Vec<Node>,
    edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<HydraulicParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<OperatingPoint>,
}

/// Pipe with resolved endpoint indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: Ident,
    pub tail: usize,
    pub head: usize,
}

/// Validated network topology with optional hydraulic parameters.
///
/// Edge order is the declaration order and determines the incidence column
/// order as well as the numbering of flow states.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    params: Option<HydraulicParams>,
    state: Option<OperatingPoint>,
}

impl NetworkModel {
    /// Builds a network from `(tail, head)` index pairs; nodes are junctions
    /// numbered from 1 and edges are numbered from 1.
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let nodes = (0..nodes)
            .map(|i| Node {
                id: Ident::Num(i as u64 + 1),
                kind: NodeKind::Junction,
            })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(k, &(t, h))| EdgeSpec {
                id: Ident::Num(k as u64 + 1),
                tail: Ident::Num(t as u64 + 1),
                head: Ident::Num(h as u64 + 1),
            })
            .collect();
        Self::new(nodes, edges, None)
    }

    pub fn new(nodes: Vec<Node>, edges: Vec<EdgeSpec>, params: Option<HydraulicParams>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id.clone(), i).is_some() {
                return Err(Error::DuplicateNode(node.id.to_string()));
            }
        }
        let resolve = |edge: &EdgeSpec, end: &Ident| {
            index.get(end).copied().ok_or_else(|| Error::DanglingEdge {
                edge: edge.id.to_string(),
                node: end.to_string(),
            })
        };
        let edges = edges
            .iter()
            .map(|e| {
                let tail = resolve(e, &e.tail)?;
                let head = resolve(e, &e.head)?;
                if tail == head {
                    return Err(Error::SelfLoopEdge(e.id.to_string()));
                }
                Ok(Edge {
                    id: e.id.clone(),
                    tail,
                    head,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(p) = &params {
            p.validate(nodes.len(), edges.len())?;
        }
        Ok(Self {
            nodes,
            edges,
            params,
            state: None,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        let mut net = Self::new(file.nodes, file.edges, file.params)?;
        if let Some(state) = file.state {
            state.validate(net.node_count(), net.edge_count())?;
            net.state = Some(state);
        }
        Ok(net)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = NetworkFile {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    tail: self.nodes[e.tail].id.clone(),
                    head: self.nodes[e.head].id.clone(),
                })
                .collect(),
            params: self.params.clone(),
            state: self.state.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn with_params(mut self, params: HydraulicParams) -> Result<Self> {
        params.validate(self.node_count(), self.edge_count())?;
        self.params = Some(params);
        Ok(self)
    }

    pub fn with_state(mut self, state: OperatingPoint) -> Result<Self> {
        state.validate(self.node_count(), self.edge_count())?;
        self.state = Some(state);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Flow states followed by head states.
    pub fn state_count(&self) -> usize {
        self.edges.len() + self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn params(&self) -> Option<&HydraulicParams> {
        self.params.as_ref()
    }

    pub fn state(&self) -> Option<&OperatingPoint> {
        self.state.as_ref()
    }

    /// Node-by-edge incidence: `-1` at the tail, `+1` at the head.
    pub fn incidence(&self) -> RealMatrix {
        let mut m = DMatrix::zeros(self.node_count(), self.edge_count());
        for (k, e) in self.edges.iter().enumerate() {
            m[(e.tail, k)] = -1.0;
            m[(e.head, k)] = 1.0;
        }
        RealMatrix::new(m).expect("incidence entries are finite")
    }

    /// `A(i, j) = 1` iff some pipe runs from node `j` to node `i`.
    pub fn adjacency(&self) -> RealMatrix {
        let n = self.node_count();
        let mut m = DMatrix::zeros(n, n);
        for e in &self.edges {
            m[(e.head, e.tail)] = 1.0;
        }
        RealMatrix::new(m).expect("adjacency entries are finite")
    }
}
