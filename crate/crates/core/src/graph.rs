//! Graph views of pattern matrices and of physical networks.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::pattern::{PatternMatrix, PatternSymbol, RealMatrix};
use crate::wdn::NetworkModel;

/// Directed graph associated with a pattern matrix `M`.
///
/// Edge `(j, i)` is in the star set iff `M(i, j) = *` and in the unknown set
/// iff `M(i, j) = ?`. Edges are kept sorted by `(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    nodes: usize,
    shape: (usize, usize),
    star_edges: BTreeSet<(usize, usize)>,
    unknown_edges: BTreeSet<(usize, usize)>,
}

impl DirectedGraph {
    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// Shape of the matrix this graph was built from.
    pub fn source_shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn star_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.star_edges.iter().copied()
    }

    pub fn unknown_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.unknown_edges.iter().copied()
    }

    pub fn star_edge_count(&self) -> usize {
        self.star_edges.len()
    }

    pub fn unknown_edge_count(&self) -> usize {
        self.unknown_edges.len()
    }

    pub fn has_star_edge(&self, from: usize, to: usize) -> bool {
        self.star_edges.contains(&(from, to))
    }

    /// Rebuilds the matrix the graph was derived from.
    pub fn to_pattern(&self) -> PatternMatrix {
        let (rows, cols) = self.shape;
        let mut m = PatternMatrix::zeros(rows, cols);
        for &(j, i) in &self.star_edges {
            m.set(i, j, PatternSymbol::Star);
        }
        for &(j, i) in &self.unknown_edges {
            m.set(i, j, PatternSymbol::Unknown);
        }
        m
    }
}

/// Graph `G(M)` on `max(rows, cols)` nodes.
pub fn graph_of(m: &PatternMatrix) -> DirectedGraph {
    let mut star_edges = BTreeSet::new();
    let mut unknown_edges = BTreeSet::new();
    for (i, j, s) in m.iter() {
        match s {
            PatternSymbol::Star => {
                star_edges.insert((j, i));
            }
            PatternSymbol::Unknown => {
                unknown_edges.insert((j, i));
            }
            PatternSymbol::Zero => {}
        }
    }
    DirectedGraph {
        nodes: m.rows().max(m.cols()),
        shape: m.shape(),
        star_edges,
        unknown_edges,
    }
}

/// Adjacency and incidence matrices of a physical network.
///
/// `A_adj(i, j) = 1` iff a pipe runs from node `j` to node `i`;
/// `A_inc(i, k)` is `-1` at the tail and `+1` at the head of pipe `k`.
pub fn adjacency_and_incidence(net: &NetworkModel) -> Result<(RealMatrix, RealMatrix)> {
    if net.node_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    Ok((net.adjacency(), net.incidence()))
}
