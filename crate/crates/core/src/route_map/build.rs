//! Hemispheres, the Route Map, and lifting catalysts to path families.

use std::collections::BTreeSet;

use crate::catalysts::{Arrowflow, Catalyst};
use crate::error::{Error, Result};
use crate::tree::{Arc, MarkedPath, Tree, Vertex};

use super::network::{Hemi, Network, Node, NodeKind, PathFamily};
use super::plane::{build_t0, PlaneRootedTree};

pub const MAX_FAMILY_ENUM_N: usize = 5;

/// The hemisphere `H(Y)`, tagged as south.
///
/// Sources are `v(1..=n)`; sinks are `e(a)` for `a` in the orientation of
/// `Y`, in lexicographic order.
pub fn build_hemisphere(y: &PlaneRootedTree) -> Result<Network> {
    let mut nodes = BTreeSet::new();
    let mut arcs = BTreeSet::new();
    for i in y.vertices() {
        nodes.insert(Node::v(i));
        let nb = y.neighbors(i);
        for &j in &nb {
            nodes.insert(Node::e(Arc::new(i, j)));
            nodes.insert(Node::e(Arc::new(j, i)));
        }
        for w in nb.windows(2) {
            nodes.insert(Node::s(i, w[0], w[1]));
            nodes.insert(Node::s(i, w[1], w[0]));
        }
        for (u, v) in gadget_arcs(i, &nb) {
            arcs.insert((u, v));
        }
    }
    let sources = (1..=y.n()).map(Node::v).collect();
    let sinks = y.orientation().iter().map(|&a| Node::e(a)).collect();
    Network::new(nodes, arcs, sources, sinks, Vec::new())
}

/// Arcs of the local gadget at `i` with neighbors `nb` in plane order.
fn gadget_arcs(i: Vertex, nb: &[Vertex]) -> Vec<(Node, Node)> {
    let m = nb.len();
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let e_out = |k: usize| Node::e(Arc::new(i, nb[k]));
    let e_in = |k: usize| Node::e(Arc::new(nb[k], i));
    let up = |k: usize| Node::s(i, nb[k], nb[k + 1]);
    let down = |k: usize| Node::s(i, nb[k + 1], nb[k]);
    out.push((Node::v(i), e_out(0)));
    if m == 1 {
        return out;
    }
    out.push((Node::v(i), up(0)));
    for k in 0..m - 1 {
        out.push((e_in(k), up(k)));
        out.push((up(k), e_out(k + 1)));
        out.push((down(k), e_out(k)));
        out.push((e_in(k + 1), down(k)));
        if k + 1 < m - 1 {
            out.push((up(k), up(k + 1)));
            out.push((down(k + 1), down(k)));
        }
    }
    out
}

/// Nodes of the gadget `Γ(i)`: `v(i)`, its `s`-nodes, and the `e`-nodes of
/// arcs incident to `i`.
pub fn gadget_nodes(y: &PlaneRootedTree, i: Vertex) -> BTreeSet<Node> {
    let nb = y.neighbors(i);
    let mut out = BTreeSet::from([Node::v(i)]);
    for &j in &nb {
        out.insert(Node::e(Arc::new(i, j)));
        out.insert(Node::e(Arc::new(j, i)));
    }
    for w in nb.windows(2) {
        out.insert(Node::s(i, w[0], w[1]));
        out.insert(Node::s(i, w[1], w[0]));
    }
    out
}

/// `Σ(j)`: the union of the gadgets of `j` and its descendants.
pub fn subtree_node_set(y: &PlaneRootedTree, j: Vertex) -> BTreeSet<Node> {
    let mut out = BTreeSet::new();
    let mut stack = vec![j];
    while let Some(h) = stack.pop() {
        out.extend(gadget_nodes(y, h));
        stack.extend_from_slice(y.children(h));
    }
    out
}

/// The relabelling `Ψ` into the north hemisphere.
pub fn psi(v: Node) -> Node {
    let kind = match v.kind {
        NodeKind::V(i) => NodeKind::V(i),
        NodeKind::E(i, j) => NodeKind::E(j, i),
        NodeKind::S(c, a, b) => NodeKind::S(c, b, a),
    };
    Node { hemi: Hemi::North, kind }
}

/// Inverse of [`psi`], back to a south-tagged label.
pub fn psi_inverse(v: Node) -> Node {
    let mut out = psi(v);
    out.hemi = Hemi::South;
    out
}

/// `S ∪ N` joined by one bridge per arc of `A0`, with the data needed to
/// move between catalysts and path families.
#[derive(Clone, Debug)]
pub struct RouteMap {
    tree: Tree,
    arrowflow: Arrowflow,
    t0: PlaneRootedTree,
    network: Network,
}

/// Builds the Route Map of a unital arrowflow with the default plane order.
pub fn build_route_map(tree: &Tree, a: &Arrowflow) -> Result<RouteMap> {
    let t0 = build_t0(tree, a)?;
    build_route_map_with(tree, a, t0)
}

/// Builds the Route Map over a given admissible plane structure of `T0`.
pub fn build_route_map_with(tree: &Tree, a: &Arrowflow, t0: PlaneRootedTree) -> Result<RouteMap> {
    if t0.is_mirrored() || !t0.is_admissible() || t0.n() != tree.n() {
        return Err(Error::Precondition("plane structure is not an admissible T0".into()));
    }
    let south = build_hemisphere(&t0)?;
    let mirror = build_hemisphere(&t0.mirror())?;
    let mut nodes: BTreeSet<Node> = south.nodes().iter().copied().collect();
    nodes.extend(mirror.nodes().iter().map(|&v| psi(v)));
    let mut arcs: BTreeSet<(Node, Node)> = south.arcs().into_iter().collect();
    arcs.extend(mirror.arcs().into_iter().map(|(u, v)| (psi(v), psi(u))));
    let bridges: Vec<(Node, Node)> = t0
        .orientation()
        .iter()
        .map(|&g| (Node::e(g), Node::e(g).with_hemi(Hemi::North)))
        .collect();
    arcs.extend(bridges.iter().copied());
    let n = tree.n();
    let sources = (1..=n).map(Node::v).collect();
    let sinks = (1..=n).map(|i| Node::v(i).with_hemi(Hemi::North)).collect();
    let network = Network::new(nodes, arcs, sources, sinks, bridges)?;
    Ok(RouteMap {
        tree: tree.clone(),
        arrowflow: a.clone(),
        t0,
        network,
    })
}

/// The `T0` vertex sequence traced by a hemisphere walk starting at `v(i)`.
pub fn induced_path(walk: &[Node]) -> Vec<Vertex> {
    let mut out = Vec::new();
    if let Some(NodeKind::V(i)) = walk.first().map(|v| v.kind) {
        out.push(i);
    }
    for v in walk {
        if let NodeKind::E(i, j) = v.kind {
            if out.is_empty() {
                out.push(i);
            }
            out.push(j);
        }
    }
    out
}

impl RouteMap {
    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn arrowflow(&self) -> &Arrowflow {
        &self.arrowflow
    }

    pub fn t0(&self) -> &PlaneRootedTree {
        &self.t0
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    /// A copy with bridge `k` deleted, used as a negative control.
    pub fn without_bridge(&self, k: usize) -> Result<RouteMap> {
        let net = &self.network;
        let dropped = *net
            .bridges()
            .get(k)
            .ok_or_else(|| Error::Precondition(format!("no bridge {k}")))?;
        let arcs = net.arcs().into_iter().filter(|&b| b != dropped).collect();
        let bridges = net.bridges().iter().copied().filter(|&b| b != dropped).collect();
        let network = Network::new(
            net.nodes().iter().copied().collect(),
            arcs,
            net.sources().to_vec(),
            net.sinks().to_vec(),
            bridges,
        )?;
        Ok(RouteMap {
            network,
            ..self.clone()
        })
    }

    /// The south hemisphere `S = H(T0)` as its own network.
    pub fn south(&self) -> Result<Network> {
        build_hemisphere(&self.t0)
    }

    /// `H(T0')`, the mirror hemisphere before relabelling.
    pub fn mirror_hemisphere(&self) -> Result<Network> {
        build_hemisphere(&self.t0.mirror())
    }

    /// Lifts a marked path of `T` whose marked step lies in `A`.
    pub fn lift_marked_path(&self, mp: &MarkedPath) -> Result<Vec<Node>> {
        self.tree.check_path(mp.path())?;
        self.lift_t0_marked_path(&self.t0.lift_marked_path(mp)?)
    }

    /// Lifts a marked path of `T0` whose marked step lies in `A0`.
    pub fn lift_t0_marked_path(&self, mp: &MarkedPath) -> Result<Vec<Node>> {
        let verts = mp.path().vertices();
        for w in verts.windows(2) {
            if !self.t0.has_arc(Arc::new(w[0], w[1])) {
                return Err(Error::NotAnEdge(w[0], w[1]));
            }
        }
        let g = mp.marked_arc();
        if !self.t0.orientation().contains(&g) {
            return Err(Error::Precondition(format!("marked step {g} is not forward")));
        }
        let (start, end) = (mp.path().origin(), mp.path().terminus());
        if start == self.t0.root() || end == self.t0.root() {
            return Err(Error::Precondition("path endpoint is the root".into()));
        }
        let missing = || Error::Network(format!("no lift of {mp}"));
        let mut south = self.network.unique_path(Node::v(start), Node::e(g))?.ok_or_else(missing)?;
        let north = self
            .network
            .unique_path(Node::e(g).with_hemi(Hemi::North), Node::v(end).with_hemi(Hemi::North))?
            .ok_or_else(missing)?;
        south.extend(north);
        Ok(south)
    }

    /// Lifts every marked path of a catalyst in `C(A)`.
    pub fn lift_catalyst(&self, k: &Catalyst) -> Result<PathFamily> {
        if k.induced_arrowflow() != self.arrowflow {
            return Err(Error::Precondition(format!(
                "catalyst induces {}, not {}",
                k.induced_arrowflow(),
                self.arrowflow
            )));
        }
        let paths = (1..=self.tree.n())
            .map(|i| self.lift_marked_path(&k.marked_path(&self.tree, i)?))
            .collect::<Result<Vec<_>>>()?;
        PathFamily::new(&self.network, paths)
    }

    /// Reads `sigma` from endpoints and `f` from bridges of a full family.
    pub fn project_family(&self, fam: &PathFamily) -> Result<Catalyst> {
        if !fam.is_full(&self.network) {
            return Err(Error::NotFull("some bridge is unused or reused".into()));
        }
        let sigma = fam.permutation(&self.network)?;
        let f = fam
            .paths()
            .iter()
            .map(|p| {
                p.windows(2)
                    .find(|w| self.network.is_bridge(w[0], w[1]))
                    .and_then(|w| w[0].e_arc())
                    .map(|g| self.t0.to_tree_arc(g))
                    .ok_or_else(|| Error::NotFull("path without a bridge".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Catalyst::new(&self.tree, sigma, f)
    }

    /// The south portion of each path, ending at the bridge tail.
    pub fn south_restriction(&self, fam: &PathFamily) -> PathFamily {
        PathFamily::from_paths_unchecked(
            fam.paths()
                .iter()
                .map(|p| p.iter().copied().filter(|v| !v.is_north()).collect())
                .collect(),
        )
    }

    /// The north portion of each path pulled back to `H(T0')`: unlabel by
    /// `Ψ` and reverse, so path `k` runs from `v(σ(k))`.
    pub fn mirror_restriction(&self, fam: &PathFamily) -> Result<PathFamily> {
        let sigma = fam.permutation(&self.network)?;
        let mut paths = vec![Vec::new(); fam.len()];
        for (k, p) in fam.paths().iter().enumerate() {
            let mut q: Vec<Node> = p.iter().filter(|v| v.is_north()).map(|&v| psi_inverse(v)).collect();
            q.reverse();
            paths[sigma[k] - 1] = q;
        }
        Ok(PathFamily::from_paths_unchecked(paths))
    }

    /// Every full family, each path chosen by its bridge and its sink.
    pub fn enumerate_full_families(&self) -> Result<Vec<PathFamily>> {
        let n = self.tree.n();
        if n > MAX_FAMILY_ENUM_N {
            return Err(Error::Guard {
                op: "enumerate_full_families",
                got: n,
                range: "2..=5",
            });
        }
        let bridges = self.network.bridges().to_vec();
        let sinks = self.network.sinks().to_vec();
        // south[i][b], north[b][j]: the unique sub-paths, when they exist
        let mut south = vec![vec![None; bridges.len()]; n];
        let mut north = vec![vec![None; n]; bridges.len()];
        for (b, &(tail, head)) in bridges.iter().enumerate() {
            for i in 0..n {
                south[i][b] = self.network.unique_path(Node::v(i + 1), tail)?;
            }
            for (j, &sink) in sinks.iter().enumerate() {
                north[b][j] = self.network.unique_path(head, sink)?;
            }
        }
        let mut out = Vec::new();
        let mut used_b = vec![false; bridges.len()];
        let mut used_s = vec![false; n];
        let mut current: Vec<Vec<Node>> = Vec::with_capacity(n);
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            n: usize,
            south: &[Vec<Option<Vec<Node>>>],
            north: &[Vec<Option<Vec<Node>>>],
            used_b: &mut [bool],
            used_s: &mut [bool],
            current: &mut Vec<Vec<Node>>,
            out: &mut Vec<Vec<Vec<Node>>>,
        ) {
            if i == n {
                out.push(current.clone());
                return;
            }
            for b in 0..used_b.len() {
                let Some(sp) = south[i][b].as_ref().filter(|_| !used_b[b]) else {
                    continue;
                };
                used_b[b] = true;
                for j in 0..n {
                    let Some(np) = north[b][j].as_ref().filter(|_| !used_s[j]) else {
                        continue;
                    };
                    used_s[j] = true;
                    let mut p = sp.clone();
                    p.extend_from_slice(np);
                    current.push(p);
                    rec(i + 1, n, south, north, used_b, used_s, current, out);
                    current.pop();
                    used_s[j] = false;
                }
                used_b[b] = false;
            }
        }
        let mut raw = Vec::new();
        rec(0, n, &south, &north, &mut used_b, &mut used_s, &mut current, &mut raw);
        for paths in raw {
            out.push(PathFamily::new(&self.network, paths)?);
        }
        Ok(out)
    }
}
