//! Exact verification of determinant identities for tree distance matrices.
//!
//! The crate covers the combinatorial side (catalysts, arrowflows, their
//! sign-reversing involutions, route-map networks and non-intersecting path
//! families) and the algebraic side (weighted and q-deformed distance
//! matrices, closed-form right-hand sides, exact and randomized checks).

pub mod catalysts;
pub mod error;
pub mod exactalg;
pub mod formulas;
pub mod matrices;
pub mod route_map;
pub mod tree;

pub use error::{Error, Result};
pub use tree::{all_trees, Arc, Edge, MarkedPath, Tree, TreePath, Vertex};
