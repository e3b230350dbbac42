//! Water distribution network model: topology, elastic water column
//! dynamics, linearization and structured patterns.

mod ewc;
mod network;
mod structure;

pub use ewc::{balance_at, ewc_rhs, linearize, simulate_rk4, Trajectory, DEFAULT_STEP};
pub use network::{Edge, EdgeSpec, HydraulicParams, Ident, NetworkModel, Node, NodeKind, OperatingPoint};
pub use structure::{
    derive_output_pattern, derive_wdn_pattern, mass_spring_pattern, rlc_matrix, rlc_pattern,
};
