//! PageRank centrality and the derived sensor-location cost.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pattern::{PatternMatrix, PatternSymbol, RealMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    /// Damping factor in `[0, 1]`.
    pub alpha: f64,
    pub max_iters: usize,
    /// Max-norm change between iterates at which the iteration stops.
    pub residual_tol: f64,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            alpha: 0.85,
            max_iters: 10_000,
            residual_tol: 1e-12,
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidConfig(format!("alpha {} outside [0, 1]", self.alpha)));
        }
        if !(self.residual_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "residual_tol must be positive, got {}",
                self.residual_tol
            )));
        }
        Ok(())
    }
}

/// PageRank by power iteration.
///
/// `adj(i, j) = 1` encodes an edge `j → i`. Column `j` is normalized by the
/// out-degree of `j`; nodes without out-edges spread their mass uniformly.
/// The result sums to one.
pub fn pagerank(adj: &RealMatrix, cfg: &PageRankConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let (n, cols) = adj.shape();
    if n != cols {
        return Err(Error::NotSquare {
            context: "pagerank",
            rows: n,
            cols,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = adj.as_dmatrix();
    if let Some(v) = a.iter().find(|&&v| v != 0.0 && v != 1.0) {
        return Err(Error::InvalidParameter {
            name: "A_adj",
            msg: format!("entries must be 0 or 1, found {v}"),
        });
    }

    let out_degree: Vec<f64> = (0..n).map(|j| a.column(j).sum()).collect();
    let mut transition = DMatrix::zeros(n, n);
    for j in 0..n {
        if out_degree[j] > 0.0 {
            for i in 0..n {
                transition[(i, j)] = a[(i, j)] / out_degree[j];
            }
        }
    }
    let dangling: Vec<usize> = (0..n).filter(|&j| out_degree[j] == 0.0).collect();

    let uniform = 1.0 / n as f64;
    let teleport = (1.0 - cfg.alpha) * uniform;
    let mut pr = nalgebra::DVector::from_element(n, uniform);
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let dangling_mass: f64 = dangling.iter().map(|&j| pr[j]).sum();
        let mut next = &transition * &pr;
        next.apply(|v| *v = cfg.alpha * (*v + dangling_mass * uniform) + teleport);
        let total = next.sum();
        next /= total;
        residual = (&next - &pr).amax();
        pr = next;
        if residual < cfg.residual_tol {
            return Ok(pr.iter().copied().collect());
        }
    }
    Err(Error::NonConvergence {
        iters: cfg.max_iters,
        residual,
    })
}

/// How a PageRank score is turned into a sensor cost (higher rank, lower cost).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PageRankCost {
    /// `1 - PR(i)`.
    #[default]
    Reflect,
    /// `1 / PR(i)`.
    Reciprocal,
}

/// Raw (unnormalized) cost per node.
pub fn pagerank_cost(pr: &[f64], mode: PageRankCost) -> Result<Vec<f64>> {
    if let Some((index, &value)) = pr.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::NonPositiveRank { index, value });
    }
    Ok(match mode {
        PageRankCost::Reflect => pr.iter().map(|p| 1.0 - p).collect(),
        PageRankCost::Reciprocal => pr.iter().map(|p| 1.0 / p).collect(),
    })
}

/// Adjacency of the `*` edges of `G(Aᵀ)`: `adj(i, j) = 1` iff `A(j, i) = *`.
///
/// This is the state block of the graph the color-change rule runs on.
/// With `undirected` set, each edge is mirrored.
pub fn state_adjacency(a: &PatternMatrix, undirected: bool) -> Result<RealMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            context: "state_adjacency",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let star = |i: usize, j: usize| a.get(j, i) == PatternSymbol::Star;
    let m = DMatrix::from_fn(n, n, |i, j| {
        if star(i, j) || (undirected && star(j, i)) {
            1.0
        } else {
            0.0
        }
    });
    RealMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::wdn::NetworkModel;

    fn cycle(n: usize) -> RealMatrix {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        NetworkModel::from_edges(n, &edges).unwrap().adjacency()
    }

    #[test]
    fn cycle_is_uniform() {
        let pr = pagerank(&cycle(6), &PageRankConfig::default()).unwrap();
        for p in pr {
            assert!((p - 1.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_damping_is_exactly_uniform() {
        let adj = NetworkModel::from_edges(2, &[(0, 1)]).unwrap().adjacency();
        let cfg = PageRankConfig {
            alpha: 0.0,
            ..Default::default()
        };
        assert_eq!(pagerank(&adj, &cfg).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn star_hub_has_highest_rank() {
        let adj = state_adjacency(&fixtures::star_a(), false).unwrap();
        let pr = pagerank(&adj, &PageRankConfig::default()).unwrap();
        let (hub, _) = pr
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert_eq!(hub, 4);
        let floor = 0.15 / 5.0;
        assert!(pr.iter().all(|&p| p >= floor));
        assert!((pr.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dangling_node_mass_is_redistributed() {
        // 0 -> 1, node 1 has no out-edges
        let adj = NetworkModel::from_edges(2, &[(0, 1)]).unwrap().adjacency();
        let pr = pagerank(&adj, &PageRankConfig::default()).unwrap();
        assert!((pr[0] + pr[1] - 1.0).abs() < 1e-12);
        assert!(pr[1] > pr[0]);
        // fixed point: p0 = 0.85 * p1 / 2 + 0.075
        assert!((pr[0] - (0.85 * pr[1] / 2.0 + 0.075)).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        let cfg = PageRankConfig {
            alpha: 1.5,
            ..Default::default()
        };
        assert!(pagerank(&cycle(3), &cfg).is_err());
        let tight = PageRankConfig {
            max_iters: 2,
            ..Default::default()
        };
        let adj = state_adjacency(&fixtures::star_a(), false).unwrap();
        assert_eq!(pagerank(&adj, &tight).unwrap_err().kind(), "non_convergence");
        let weighted = RealMatrix::from_rows(&[&[0.0, 2.0], &[1.0, 0.0]]).unwrap();
        assert!(pagerank(&weighted, &PageRankConfig::default()).is_err());
    }

    #[test]
    fn cost_transforms() {
        assert_eq!(pagerank_cost(&[0.25, 0.5], PageRankCost::Reciprocal).unwrap(), vec![4.0, 2.0]);
        assert_eq!(pagerank_cost(&[0.25, 0.5], PageRankCost::Reflect).unwrap(), vec![0.75, 0.5]);
        let uniform = pagerank_cost(&[0.25; 4], PageRankCost::Reciprocal).unwrap();
        assert!(uniform.iter().all(|&c| c == 4.0));
        assert_eq!(pagerank_cost(&[0.5, 0.0], PageRankCost::Reflect).unwrap_err().kind(), "non_positive_rank");
    }

    #[test]
    fn state_adjacency_follows_transpose() {
        let a: PatternMatrix = "0*\n0?".parse().unwrap();
        // A(0,1) = * gives edge 0 -> 1 in G(Aᵀ), i.e. adj(1, 0) = 1
        let adj = state_adjacency(&a, false).unwrap();
        assert_eq!(adj.get(1, 0), 1.0);
        assert_eq!(adj.get(0, 1), 0.0);
        assert_eq!(adj.get(1, 1), 0.0);
        let und = state_adjacency(&a, true).unwrap();
        assert_eq!(und.get(0, 1), 1.0);
    }
}
