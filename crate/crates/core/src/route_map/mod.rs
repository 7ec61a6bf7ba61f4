//! The Route Map: a planar network whose full path families are catalysts
//! of a unital arrowflow.

pub mod build;
pub mod dfs;
pub mod dot;
pub mod network;
pub mod plane;
pub mod weights;

pub use build::{build_hemisphere, build_route_map, build_route_map_with, gadget_nodes, induced_path, subtree_node_set, psi, psi_inverse, RouteMap, MAX_FAMILY_ENUM_N};
pub use dfs::{canonical_nip, dfs_walk, dfs_walk_iterative, in_indices, in_indices_by_definition, interlace_decompose, is_interlacing_word, step_types};
pub use dot::{display_label, node_name, to_dot};
pub use network::{expected_flow, flow, lgv_involution, Hemi, Network, Node, NodeKind, PathFamily};
pub use plane::{build_t0, ArcClass, PlaneRootedTree};
pub use weights::{canonical_weight, family_weight, route_arc_weights};
