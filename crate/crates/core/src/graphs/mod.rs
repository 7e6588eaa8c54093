//! Simple graphs and the brute-force oracles used to check the polynomial machinery.

pub mod graph;
pub mod montecarlo;
pub mod oracle;

pub use graph::{bridges, is_connected, one_point_union, SimpleGraph};
pub use montecarlo::{monte_carlo_reliability, MCEstimate};
pub use oracle::{brute_force_spanning_counts, bridge_pair_counts, connected_graphs_up_to, MAX_BRUTE_FORCE_EDGES};
