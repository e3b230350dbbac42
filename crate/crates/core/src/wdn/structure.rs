use super::network::NetworkModel;
use crate::error::{Error, Result};
use crate::pattern::{PatternMatrix, PatternSymbol, RealMatrix};

use PatternSymbol::{Star, Unknown, Zero};

/// Structured state matrix `[[diag{*}, 𝒜_incᵀ], [𝒜_inc, diag{?}]]` of a network.
///
/// Flow states come first (one per pipe, declaration order), then head
/// states (one per node). Only the topology is used.
pub fn derive_wdn_pattern(net: &NetworkModel) -> Result<PatternMatrix> {
    if net.node_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    let m = net.edge_count();
    let mut a = PatternMatrix::zeros(net.state_count(), net.state_count());
    for (k, e) in net.edges().iter().enumerate() {
        a.set(k, k, Star);
        for node in [e.tail, e.head] {
            a.set(k, m + node, Star);
            a.set(m + node, k, Star);
        }
    }
    for i in 0..net.node_count() {
        a.set(m + i, m + i, Unknown);
    }
    Ok(a)
}

/// Pattern of a sensor-selection output matrix.
///
/// `c` must be binary with exactly one `1` per row and at most one per column.
pub fn derive_output_pattern(c: &RealMatrix) -> Result<PatternMatrix> {
    let mut used = vec![false; c.cols()];
    for i in 0..c.rows() {
        let mut ones = Vec::new();
        for j in 0..c.cols() {
            let v = c.get(i, j);
            if v == 1.0 {
                ones.push(j);
            } else if v != 0.0 {
                return Err(Error::MalformedOutput {
                    row: i,
                    msg: format!("entry {v} at column {} is not 0 or 1", j + 1),
                });
            }
        }
        match ones.as_slice() {
            [j] if used[*j] => {
                return Err(Error::MalformedOutput {
                    row: i,
                    msg: format!("column {} already measured by another row", j + 1),
                })
            }
            [j] => used[*j] = true,
            _ => {
                return Err(Error::MalformedOutput {
                    row: i,
                    msg: format!("expected exactly one 1, found {}", ones.len()),
                })
            }
        }
    }
    Ok(c.support(0.0))
}

/// Structured matrix `[[0, diag{*}], [𝒦, diag{?}]]` of a mass-spring-damper chain.
///
/// `inc` is the mass-by-spring incidence (a column with a single nonzero is
/// a spring to a fixed wall). The stiffness block `𝒦` is the pattern of
/// `A_inc K_c A_incᵀ` for positive spring constants: `*` on the diagonal of
/// every sprung mass and between masses sharing a spring.
pub fn mass_spring_pattern(inc: &RealMatrix) -> PatternMatrix {
    let n = inc.rows();
    let mut a = PatternMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        a.set(i, n + i, Star);
        a.set(n + i, n + i, Unknown);
    }
    for s in 0..inc.cols() {
        let ends: Vec<usize> = (0..n).filter(|&i| inc.get(i, s) != 0.0).collect();
        for &i in &ends {
            for &j in &ends {
                a.set(n + i, j, Star);
            }
        }
    }
    a
}

/// Series RLC circuit with state `(V_C, I_L)`: `[[0, *], [*, *]]`.
pub fn rlc_pattern() -> PatternMatrix {
    PatternMatrix::from_rows(vec![vec![Zero, Star], vec![Star, Star]]).expect("2x2")
}

/// Realization `[[0, -1/C], [1/L, -(R_L + R_C)/L]]` of [`rlc_pattern`].
pub fn rlc_matrix(r_l: f64, r_c: f64, l: f64, c: f64) -> Result<RealMatrix> {
    RealMatrix::from_rows(&[&[0.0, -1.0 / c], &[1.0 / l, -(r_l + r_c) / l]])
}
