//! Reference systems used throughout the tests, the CLI fixtures and the
//! acceptance suite.
//!
//! State and node numbering here is 0-based; tables list 1-based states.

use crate::pattern::PatternMatrix;
use crate::wdn::{self, Ident, Node, NodeKind, EdgeSpec, NetworkModel};

fn parse(rows: &str) -> PatternMatrix {
    rows.parse().expect("fixture patterns are well formed")
}

/// Three-state example `A` (its transpose is `0** / **0 / *?*`).
pub fn example_a() -> PatternMatrix {
    parse("0**\n**0\n*?*").transpose()
}

/// Published `Āᵀ` for [`example_a`].
pub fn example_abar_t() -> PatternMatrix {
    parse("***\n*?0\n*??")
}

/// Single sensor reading states 1 and 3 in `Cᵀ = (*, 0, *)ᵀ`.
pub fn example_c() -> PatternMatrix {
    parse("*\n0\n*").transpose()
}

/// `M = [Aᵀ Cᵀ]` for the example pair; not colorable.
pub fn example_m() -> PatternMatrix {
    parse("0***\n**00\n*?**")
}

pub fn example_mbar() -> PatternMatrix {
    parse("****\n*?00\n*??*")
}

/// Two-column adjusted output with `Cᵀ = [*0; 00; **]`.
pub fn example_c_adjusted() -> PatternMatrix {
    parse("*0\n00\n**").transpose()
}

/// `M` for the adjusted output; colorable.
pub fn example_m_adjusted() -> PatternMatrix {
    parse("0***0\n**000\n*?***")
}

/// Five-state star network with a cycle through states 1, 4 and 5,
/// given as the system pattern `A` (the published matrix is `Aᵀ`).
pub fn star_a() -> PatternMatrix {
    star_a_t().transpose()
}

pub fn star_a_t() -> PatternMatrix {
    parse(
        "000**\n\
         0000*\n\
         0000*\n\
         0000*\n\
         ****0",
    )
}

/// Sensors of the published star solution (states 1, 2, 3).
pub const STAR_SENSORS: [usize; 3] = [0, 1, 2];

/// The two published WDN solutions: states {4, 6} and {4, 7}.
pub const WDN_SENSORS: [[usize; 2]; 2] = [[3, 5], [3, 6]];

/// Triangular water network: junctions 1-3, tank 4 and four pipes
/// 1→4, 3→1, 2→1, 3→2 in declaration order.
pub fn triangular_wdn() -> NetworkModel {
    let node = |id: u64, kind| Node {
        id: Ident::Num(id),
        kind,
    };
    let edge = |id: u64, tail: u64, head: u64| EdgeSpec {
        id: Ident::Num(id),
        tail: Ident::Num(tail),
        head: Ident::Num(head),
    };
    NetworkModel::new(
        vec![
            node(1, NodeKind::Junction),
            node(2, NodeKind::Junction),
            node(3, NodeKind::Junction),
            node(4, NodeKind::Tank),
        ],
        vec![edge(1, 1, 4), edge(2, 3, 1), edge(3, 2, 1), edge(4, 3, 2)],
        None,
    )
    .expect("fixture network is valid")
}

/// 8×8 structured state matrix of [`triangular_wdn`].
pub fn triangular_wdn_pattern() -> PatternMatrix {
    wdn::derive_wdn_pattern(&triangular_wdn()).expect("fixture network is nonempty")
}

/// One row of a published sensor-cost table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostRow {
    /// 1-based state.
    pub state: usize,
    pub c_out: f64,
    pub c_in: f64,
    pub c_pr: f64,
    pub c_ind: f64,
    pub c_n: f64,
}

const fn row(state: usize, c_out: f64, c_in: f64, c_pr: f64, c_ind: f64, c_n: f64) -> CostRow {
    CostRow {
        state,
        c_out,
        c_in,
        c_pr,
        c_ind,
        c_n,
    }
}

/// Sensor costs for the star network, in published row order.
pub const STAR_COSTS: [CostRow; 5] = [
    row(5, 1.0, 1.0, 0.0, 1.0, 1.0),
    row(4, 0.333, 0.0, 1.0, 1.0, 0.381),
    row(1, 0.0, 0.333, 0.83503, 1.0, 0.000486),
    row(2, 0.0, 0.0, 1.0, 1.0, 0.0),
    row(3, 0.0, 0.0, 1.0, 1.0, 0.0),
];

/// Sensor costs for the triangular WDN, in published row order.
pub const WDN_COSTS: [CostRow; 8] = [
    row(2, 0.75, 0.75, 0.16967, 1.0, 1.0),
    row(3, 0.75, 0.75, 0.16967, 1.0, 1.0),
    row(5, 1.0, 1.0, 0.14991, 0.0, 0.78423),
    row(4, 0.75, 0.75, 0.14578, 0.4995, 0.78086),
    row(1, 0.75, 0.75, 0.0, 0.4995, 0.76509),
    row(6, 0.5, 0.5, 0.61626, 0.0, 0.39658),
    row(7, 0.5, 0.5, 0.61626, 0.0, 0.39658),
    row(8, 0.0, 0.0, 1.0, 0.0, 0.0),
];

/// Renders a cost table in the CSV format read by the placement module.
pub fn cost_csv(rows: &[CostRow]) -> String {
    let mut out = String::from("state,c_out,c_in,c_pr,c_ind,c_n\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.state, r.c_out, r.c_in, r.c_pr, r.c_ind, r.c_n
        ));
    }
    out
}
