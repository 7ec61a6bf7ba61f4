//! Arc weights on the Route Map.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::exactalg::Scalar;
use crate::matrices::WeightAssignment;
use crate::tree::Arc;

use super::build::RouteMap;
use super::network::{Node, PathFamily};
use super::plane::ArcClass;

/// Non-unit arc weights: `x` on south arcs leaving `e(γ)`, `y` on the
/// bridge of `γ`, `z` on north arcs entering `e'(γ)`.
///
/// Arcs through `e(a,r)` and `e(b,r)` carry no variable; `γ = (r,a)` and
/// `(r,b)` borrow the variables of `(b,a)` and `(a,b)`.
pub fn route_arc_weights<S: Scalar>(rm: &RouteMap, w: &WeightAssignment<S>) -> Result<BTreeMap<(Node, Node), S>> {
    let t0 = rm.t0();
    let r = t0.root();
    let into_root = |g: Arc| g.head == r;
    let mut out = BTreeMap::new();
    for (u, v) in rm.network().arcs() {
        let weight = if rm.network().is_bridge(u, v) {
            let g = u.e_arc().expect("bridges leave e-nodes");
            Some(w.y(t0.to_tree_arc(g))?)
        } else if !u.is_north() {
            match u.e_arc() {
                Some(g) if !into_root(g) => Some(w.x(t0.to_tree_arc(g))?),
                _ => None,
            }
        } else {
            match v.e_arc() {
                Some(g) if !into_root(g) => Some(w.z(t0.to_tree_arc(g))?),
                _ => None,
            }
        };
        if let Some(s) = weight {
            out.insert((u, v), s.clone());
        }
    }
    Ok(out)
}

pub fn family_weight<S: Scalar>(rm: &RouteMap, fam: &PathFamily, w: &WeightAssignment<S>) -> Result<S> {
    Ok(fam.weight(&route_arc_weights(rm, w)?, w.one()))
}

/// `∏_{UB} x · ∏_{F} y · ∏_{DB} z` over the arcs of `T0`, the weight `Λ*`
/// must carry.
pub fn canonical_weight<S: Scalar>(rm: &RouteMap, w: &WeightAssignment<S>) -> Result<S> {
    let t0 = rm.t0();
    let r = t0.root();
    let mut acc = w.one().clone();
    for g in t0.arcs() {
        let a = t0.to_tree_arc(g);
        let factor = match t0.classify_arc(g)? {
            ArcClass::UpwardBackward if g.head == r => continue,
            ArcClass::UpwardBackward => w.x(a)?,
            ArcClass::DownwardBackward => w.z(a)?,
            _ => w.y(a)?,
        };
        acc = acc.times(factor);
    }
    Ok(acc)
}
