//! Acyclic planar networks and families of paths in them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::catalysts::permutation_sign;
use crate::error::{Error, Result};
use crate::tree::{Arc, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hemi {
    South,
    North,
}

/// Node labels inside one hemisphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    /// `v(i)`
    V(Vertex),
    /// `e(i, j)`
    E(Vertex, Vertex),
    /// `s_i(j, k)`, stored as `(i, j, k)`
    S(Vertex, Vertex, Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub hemi: Hemi,
    pub kind: NodeKind,
}

impl Node {
    pub fn south(kind: NodeKind) -> Self {
        Node { hemi: Hemi::South, kind }
    }

    pub fn north(kind: NodeKind) -> Self {
        Node { hemi: Hemi::North, kind }
    }

    pub fn v(i: Vertex) -> Self {
        Node::south(NodeKind::V(i))
    }

    pub fn e(a: Arc) -> Self {
        Node::south(NodeKind::E(a.tail, a.head))
    }

    pub fn s(center: Vertex, from: Vertex, to: Vertex) -> Self {
        Node::south(NodeKind::S(center, from, to))
    }

    pub fn with_hemi(self, hemi: Hemi) -> Self {
        Node { hemi, kind: self.kind }
    }

    pub fn is_north(self) -> bool {
        self.hemi == Hemi::North
    }

    /// The arc of an `e`-node.
    pub fn e_arc(self) -> Option<Arc> {
        match self.kind {
            NodeKind::E(i, j) => Some(Arc::new(i, j)),
            _ => None,
        }
    }

    /// The vertex whose local gadget contains this node (`None` for `e`).
    pub fn gadget(self) -> Option<Vertex> {
        match self.kind {
            NodeKind::V(i) | NodeKind::S(i, _, _) => Some(i),
            NodeKind::E(..) => None,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.is_north() { "'" } else { "" };
        match self.kind {
            NodeKind::V(i) => write!(f, "v{prime}({i})"),
            NodeKind::E(i, j) => write!(f, "e{prime}({i},{j})"),
            NodeKind::S(i, j, k) => write!(f, "s{prime}_{i}({j},{k})"),
        }
    }
}

/// A finite acyclic directed graph with ordered sources and sinks.
#[derive(Clone, Debug)]
pub struct Network {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    sources: Vec<Node>,
    sinks: Vec<Node>,
    bridges: Vec<(Node, Node)>,
}

impl Network {
    /// Builds the network and checks acyclicity and endpoint membership.
    pub fn new(
        nodes: BTreeSet<Node>,
        arcs: BTreeSet<(Node, Node)>,
        sources: Vec<Node>,
        sinks: Vec<Node>,
        bridges: Vec<(Node, Node)>,
    ) -> Result<Self> {
        let nodes: Vec<Node> = nodes.into_iter().collect();
        let index: HashMap<Node, usize> = nodes.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut succ = vec![Vec::new(); nodes.len()];
        let mut pred = vec![Vec::new(); nodes.len()];
        let lookup = |v: &Node| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::Network(format!("unknown node {v}")))
        };
        for (u, v) in &arcs {
            let (iu, iv) = (lookup(u)?, lookup(v)?);
            succ[iu].push(iv);
            pred[iv].push(iu);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
        }
        for v in sources.iter().chain(&sinks) {
            lookup(v)?;
        }
        for (u, v) in &bridges {
            if !arcs.contains(&(*u, *v)) {
                return Err(Error::Network(format!("bridge {u} -> {v} is not an arc")));
            }
        }
        let net = Network {
            nodes,
            index,
            succ,
            pred,
            sources,
            sinks,
            bridges,
        };
        if net.topological_order().is_none() {
            return Err(Error::Network("network has a directed cycle".into()));
        }
        Ok(net)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, v: Node) -> bool {
        self.index.contains_key(&v)
    }

    pub fn id(&self, v: Node) -> Result<usize> {
        self.index
            .get(&v)
            .copied()
            .ok_or_else(|| Error::Network(format!("unknown node {v}")))
    }

    /// Arcs in lexicographic order of `(tail, head)`.
    pub fn arcs(&self) -> Vec<(Node, Node)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (self.nodes[u], self.nodes[v])))
            .collect()
    }

    pub fn has_arc(&self, u: Node, v: Node) -> bool {
        match (self.index.get(&u), self.index.get(&v)) {
            (Some(&a), Some(&b)) => self.succ[a].binary_search(&b).is_ok(),
            _ => false,
        }
    }

    pub fn successors(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        let list: &[usize] = self.index.get(&v).map_or(&[], |&k| &self.succ[k]);
        list.iter().map(|&k| self.nodes[k])
    }

    pub fn predecessors(&self, v: Node) -> impl Iterator<Item = Node> + '_ {
        let list: &[usize] = self.index.get(&v).map_or(&[], |&k| &self.pred[k]);
        list.iter().map(|&k| self.nodes[k])
    }

    pub fn out_degree(&self, v: Node) -> usize {
        self.index.get(&v).map_or(0, |&k| self.succ[k].len())
    }

    pub fn in_degree(&self, v: Node) -> usize {
        self.index.get(&v).map_or(0, |&k| self.pred[k].len())
    }

    pub fn sources(&self) -> &[Node] {
        &self.sources
    }

    pub fn sinks(&self) -> &[Node] {
        &self.sinks
    }

    pub fn bridges(&self) -> &[(Node, Node)] {
        &self.bridges
    }

    pub fn is_bridge(&self, u: Node, v: Node) -> bool {
        self.bridges.contains(&(u, v))
    }

    /// Kahn's algorithm; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<Node>> {
        let mut indeg: Vec<usize> = self.pred.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..self.nodes.len()).filter(|&k| indeg[k] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(u) = stack.pop() {
            order.push(self.nodes[u]);
            for &v in &self.succ[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    /// Nodes from which `to` is reachable.
    fn co_reachable(&self, to: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[to] = true;
        let mut stack = vec![to];
        while let Some(v) = stack.pop() {
            for &u in &self.pred[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    pub fn reaches(&self, from: Node, to: Node) -> Result<bool> {
        let (f, t) = (self.id(from)?, self.id(to)?);
        Ok(self.co_reachable(t)[f])
    }

    /// The directed path `from -> to`, or `None` if there is none.
    ///
    /// Errors when two distinct paths exist.
    pub fn unique_path(&self, from: Node, to: Node) -> Result<Option<Vec<Node>>> {
        let (f, t) = (self.id(from)?, self.id(to)?);
        let good = self.co_reachable(t);
        if !good[f] {
            return Ok(None);
        }
        let mut path = vec![from];
        let mut cur = f;
        while cur != t {
            let mut next = self.succ[cur].iter().copied().filter(|&v| good[v]);
            let step = next.next().expect("a co-reachable node has a co-reachable successor");
            if next.next().is_some() {
                return Err(Error::Network(format!("several paths from {from} to {to}")));
            }
            path.push(self.nodes[step]);
            cur = step;
        }
        Ok(Some(path))
    }

    /// Number of directed paths `from -> to`.
    pub fn count_paths(&self, from: Node, to: Node) -> Result<u128> {
        let (f, t) = (self.id(from)?, self.id(to)?);
        let order = self.topological_order().expect("acyclic");
        let mut count = vec![0u128; self.nodes.len()];
        count[f] = 1;
        for v in order {
            let k = self.index[&v];
            if count[k] == 0 {
                continue;
            }
            for &w in &self.succ[k] {
                count[w] += count[k];
            }
        }
        Ok(count[t])
    }

    /// Checks that `path` is a directed path of the network.
    pub fn check_path(&self, path: &[Node]) -> Result<()> {
        if path.is_empty() {
            return Err(Error::Network("empty path".into()));
        }
        for v in path {
            self.id(*v)?;
        }
        for w in path.windows(2) {
            if !self.has_arc(w[0], w[1]) {
                return Err(Error::Network(format!("{} -> {} is not an arc", w[0], w[1])));
            }
        }
        Ok(())
    }
}

/// One path per source, listed in source order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathFamily {
    paths: Vec<Vec<Node>>,
}

impl PathFamily {
    /// Validates that path `k` runs from source `k` to some sink, with
    /// distinct sinks.
    pub fn new(net: &Network, paths: Vec<Vec<Node>>) -> Result<Self> {
        if paths.len() != net.sources().len() {
            return Err(Error::Network(format!(
                "{} paths for {} sources",
                paths.len(),
                net.sources().len()
            )));
        }
        let mut ends = BTreeSet::new();
        for (k, p) in paths.iter().enumerate() {
            net.check_path(p)?;
            if p[0] != net.sources()[k] {
                return Err(Error::Network(format!("path {k} does not start at {}", net.sources()[k])));
            }
            let end = *p.last().expect("nonempty");
            if !net.sinks().contains(&end) {
                return Err(Error::Network(format!("path {k} ends at {end}, not a sink")));
            }
            if !ends.insert(end) {
                return Err(Error::Network(format!("two paths end at {end}")));
            }
        }
        Ok(PathFamily { paths })
    }

    /// Wraps paths without validation, for sub-networks and restrictions.
    pub fn from_paths_unchecked(paths: Vec<Vec<Node>>) -> Self {
        PathFamily { paths }
    }

    pub fn paths(&self) -> &[Vec<Node>] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `sigma(k) = m` when path `k` ends at sink `m` (both 1-based).
    pub fn permutation(&self, net: &Network) -> Result<Vec<usize>> {
        self.paths
            .iter()
            .map(|p| {
                let end = p.last().expect("nonempty");
                net.sinks()
                    .iter()
                    .position(|s| s == end)
                    .map(|m| m + 1)
                    .ok_or_else(|| Error::Network(format!("{end} is not a sink")))
            })
            .collect()
    }

    pub fn sign(&self, net: &Network) -> Result<i64> {
        Ok(permutation_sign(&self.permutation(net)?))
    }

    /// Multiset of traversed arcs with multiplicities.
    pub fn steps(&self) -> BTreeMap<(Node, Node), usize> {
        let mut out = BTreeMap::new();
        for p in &self.paths {
            for w in p.windows(2) {
                *out.entry((w[0], w[1])).or_insert(0) += 1;
            }
        }
        out
    }

    /// Every bridge is used exactly once.
    pub fn is_full(&self, net: &Network) -> bool {
        let steps = self.steps();
        let used: usize = net
            .bridges()
            .iter()
            .map(|b| steps.get(b).copied().unwrap_or(0))
            .sum();
        used == net.bridges().len() && net.bridges().iter().all(|b| steps.get(b) == Some(&1))
    }

    /// No node lies on two paths.
    pub fn is_non_intersecting(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.paths.iter().flatten().all(|v| seen.insert(*v))
    }

    /// Every node of the family with the number of paths through it.
    pub fn node_counts(&self) -> BTreeMap<Node, usize> {
        let mut out = BTreeMap::new();
        for v in self.paths.iter().flatten() {
            *out.entry(*v).or_insert(0) += 1;
        }
        out
    }

    /// Product of arc weights over all steps; missing arcs weigh `one`.
    pub fn weight<S: crate::exactalg::Scalar>(&self, weights: &BTreeMap<(Node, Node), S>, one: &S) -> S {
        let mut acc = one.clone();
        for p in &self.paths {
            for w in p.windows(2) {
                if let Some(x) = weights.get(&(w[0], w[1])) {
                    acc = acc.times(x);
                }
            }
        }
        acc
    }
}

/// Tail-swapping involution on families with a shared node.
///
/// Picks the lowest-index path `p` meeting another path, its first shared
/// node `x`, and the lowest-index other path `q` through `x`, then swaps the
/// portions after `x`. Non-intersecting families are fixed.
pub fn lgv_involution(family: &PathFamily) -> PathFamily {
    let counts = family.node_counts();
    let paths = family.paths();
    for (p, path) in paths.iter().enumerate() {
        let Some(pos_p) = path.iter().position(|v| counts[v] > 1) else {
            continue;
        };
        let x = path[pos_p];
        let q = (0..paths.len())
            .find(|&q| q != p && paths[q].contains(&x))
            .expect("shared node lies on another path");
        let pos_q = paths[q].iter().position(|&v| v == x).expect("q passes x");
        let mut new_p = paths[p][..=pos_p].to_vec();
        new_p.extend_from_slice(&paths[q][pos_q + 1..]);
        let mut new_q = paths[q][..=pos_q].to_vec();
        new_q.extend_from_slice(&paths[p][pos_p + 1..]);
        let mut out = paths.to_vec();
        out[p] = new_p;
        out[q] = new_q;
        return PathFamily { paths: out };
    }
    family.clone()
}

/// `sum over X of (outdeg - indeg)` inside the step set of the family.
pub fn flow(family: &PathFamily, set: &BTreeSet<Node>) -> i64 {
    let mut total = 0i64;
    for ((u, v), mult) in family.steps() {
        let m = mult as i64;
        if set.contains(&u) {
            total += m;
        }
        if set.contains(&v) {
            total -= m;
        }
    }
    total
}

/// `#(sources in X) - #(sinks in X)`, the value [`flow`] must take.
pub fn expected_flow(net: &Network, set: &BTreeSet<Node>) -> i64 {
    let s = net.sources().iter().filter(|v| set.contains(v)).count() as i64;
    let t = net.sinks().iter().filter(|v| set.contains(v)).count() as i64;
    s - t
}
