//! Labeled trees on `1..=n`, their arcs, unique paths and marked paths.
//!
//! Trees are immutable once built. Paths are answered from a BFS parent
//! array rooted at vertex 1, so a query costs O(d) in the path length.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An oriented edge `(tail, head)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arc {
    pub tail: Vertex,
    pub head: Vertex,
}

impl Arc {
    pub const fn new(tail: Vertex, head: Vertex) -> Self {
        Arc { tail, head }
    }

    pub const fn reverse(self) -> Arc {
        Arc {
            tail: self.head,
            head: self.tail,
        }
    }

    pub fn edge(self) -> Edge {
        Edge::new(self.tail, self.head)
    }

    /// `true` for the canonical orientation `e+ = (lo, hi)`.
    pub fn is_positive(self) -> bool {
        self.tail < self.head
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.tail, self.head)
    }
}

/// An unordered edge, stored with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub lo: Vertex,
    pub hi: Vertex,
}

impl Edge {
    pub fn new(i: Vertex, j: Vertex) -> Self {
        if i <= j {
            Edge { lo: i, hi: j }
        } else {
            Edge { lo: j, hi: i }
        }
    }

    pub fn positive(self) -> Arc {
        Arc::new(self.lo, self.hi)
    }

    pub fn negative(self) -> Arc {
        Arc::new(self.hi, self.lo)
    }

    pub fn arcs(self) -> [Arc; 2] {
        [self.positive(), self.negative()]
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint other than `v`.
    pub fn other(self, v: Vertex) -> Vertex {
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// A path `i0 i1 ... id` given by its vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreePath {
    vertices: Vec<Vertex>,
}

impl TreePath {
    /// Wraps a vertex sequence. Adjacency is checked by [`Tree::check_path`].
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidTree("empty path".into()));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidTree(format!(
                "path {vertices:?} repeats a vertex"
            )));
        }
        Ok(TreePath { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn origin(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn terminus(&self) -> Vertex {
        *self.vertices.last().expect("paths are non-empty")
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn steps(&self) -> impl Iterator<Item = Arc> + '_ {
        self.vertices.windows(2).map(|w| Arc::new(w[0], w[1]))
    }

    pub fn reversed(&self) -> TreePath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        TreePath { vertices }
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A path with one distinguished step, split into tail, body and head.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedPath {
    path: TreePath,
    mark: usize,
}

impl MarkedPath {
    pub fn new(path: TreePath, mark: usize) -> Result<Self> {
        if mark >= path.len() {
            return Err(Error::Precondition(format!(
                "mark {mark} outside a path of {} steps",
                path.len()
            )));
        }
        Ok(MarkedPath { path, mark })
    }

    /// Marks the first occurrence of `arc` along `path`.
    pub fn with_marked_arc(path: TreePath, arc: Arc) -> Result<Self> {
        let mark = path
            .steps()
            .position(|s| s == arc)
            .ok_or_else(|| Error::Precondition(format!("{arc} is not a step of {path}")))?;
        Ok(MarkedPath { path, mark })
    }

    pub fn path(&self) -> &TreePath {
        &self.path
    }

    pub fn mark(&self) -> usize {
        self.mark
    }

    pub fn marked_arc(&self) -> Arc {
        let v = self.path.vertices();
        Arc::new(v[self.mark], v[self.mark + 1])
    }

    /// Steps before the mark.
    pub fn tail(&self) -> Vec<Arc> {
        self.path.steps().take(self.mark).collect()
    }

    pub fn body(&self) -> Arc {
        self.marked_arc()
    }

    /// Steps after the mark.
    pub fn head(&self) -> Vec<Arc> {
        self.path.steps().skip(self.mark + 1).collect()
    }
}

impl fmt::Display for MarkedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.path, self.marked_arc())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    edges: Vec<Edge>,
    // index 0 unused throughout
    adjacency: Vec<Vec<Vertex>>,
    parent: Vec<Vertex>,
    depth: Vec<usize>,
}

impl Tree {
    /// Builds a tree on `1..=n`, checking that the edges form a spanning tree.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            for v in [i, j] {
                if v == 0 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(Error::InvalidTree(format!("self-loop at {i}")));
            }
            if !set.insert(Edge::new(i, j)) {
                return Err(Error::InvalidTree(format!("duplicate edge {}", Edge::new(i, j))));
            }
        }
        if set.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges given, a tree on {n} vertices has {}",
                set.len(),
                n - 1
            )));
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n + 1];
        for e in &edges {
            adjacency[e.lo].push(e.hi);
            adjacency[e.hi].push(e.lo);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }

        let mut parent = vec![0; n + 1];
        let mut depth = vec![0; n + 1];
        let mut seen = vec![false; n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        let mut visited = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    visited += 1;
                    parent[u] = v;
                    depth[u] = depth[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        if visited != n {
            return Err(Error::InvalidTree("graph is disconnected".into()));
        }
        Ok(Tree {
            n,
            edges,
            adjacency,
            parent,
            depth,
        })
    }

    pub fn single_vertex() -> Self {
        Tree::new(1, []).expect("one vertex is a tree")
    }

    pub fn path_graph(n: usize) -> Result<Self> {
        Tree::new(n, (1..n).map(|i| (i, i + 1)))
    }

    pub fn star(n: usize, center: Vertex) -> Result<Self> {
        Tree::new(n, (1..=n).filter(|&v| v != center).map(|v| (center, v)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// All `2(n-1)` arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> = self.edges.iter().flat_map(|e| e.arcs()).collect();
        arcs.sort_unstable();
        arcs
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, i: Vertex, j: Vertex) -> bool {
        i >= 1 && i <= self.n && self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn check_edge(&self, e: Edge) -> Result<()> {
        if self.has_edge(e.lo, e.hi) {
            Ok(())
        } else {
            Err(Error::NotAnEdge(e.lo, e.hi))
        }
    }

    pub fn check_arc(&self, a: Arc) -> Result<()> {
        if self.has_edge(a.tail, a.head) {
            Ok(())
        } else {
            Err(Error::NotAnEdge(a.tail, a.head))
        }
    }

    /// Checks that every step of `path` is an edge of this tree.
    pub fn check_path(&self, path: &TreePath) -> Result<()> {
        for &v in path.vertices() {
            self.check_vertex(v)?;
        }
        for s in path.steps() {
            self.check_arc(s)?;
        }
        Ok(())
    }

    /// The unique path from `i` to `j`.
    pub fn path_between(&self, i: Vertex, j: Vertex) -> Result<TreePath> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        let (mut a, mut b) = (i, j);
        let mut front = vec![a];
        let mut back = vec![b];
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
            front.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
            back.push(b);
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
            front.push(a);
            back.push(b);
        }
        back.pop();
        front.extend(back.into_iter().rev());
        Ok(TreePath { vertices: front })
    }

    pub fn distance(&self, i: Vertex, j: Vertex) -> Result<usize> {
        Ok(self.path_between(i, j)?.len())
    }

    /// `U(e)`: arcs on edges other than `e` that point toward `e`.
    pub fn arcs_toward_edge(&self, e: Edge) -> Result<Vec<Arc>> {
        self.check_edge(e)?;
        let mut out = Vec::with_capacity(self.n.saturating_sub(2));
        for f in &self.edges {
            if *f == e {
                continue;
            }
            // whichever endpoint of f is closer to e is the head
            let d_lo = self.distance(f.lo, e.lo)?.min(self.distance(f.lo, e.hi)?);
            let d_hi = self.distance(f.hi, e.lo)?.min(self.distance(f.hi, e.hi)?);
            out.push(if d_lo < d_hi { f.negative() } else { f.positive() });
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Decodes a Prüfer sequence into the tree on `seq.len() + 2` vertices.
    pub fn from_prufer(seq: &[Vertex]) -> Result<Self> {
        let n = seq.len() + 2;
        for &v in seq {
            if v == 0 || v > n {
                return Err(Error::InvalidPrufer(format!(
                    "entry {v} outside 1..={n}"
                )));
            }
        }
        let mut degree = vec![1usize; n + 1];
        for &v in seq {
            degree[v] += 1;
        }
        let mut leaves: BTreeSet<Vertex> = (1..=n).filter(|&v| degree[v] == 1).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &v in seq {
            let leaf = leaves.pop_first().expect("a leaf always exists");
            edges.push((leaf, v));
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.insert(v);
            }
        }
        let last: Vec<Vertex> = leaves.into_iter().collect();
        debug_assert_eq!(last.len(), 2);
        edges.push((last[0], last[1]));
        Tree::new(n, edges)
    }

    pub fn to_prufer(&self) -> Result<Vec<Vertex>> {
        if self.n < 2 {
            return Err(Error::InvalidPrufer("Prüfer codes need n >= 2".into()));
        }
        let mut degree: Vec<usize> = (0..=self.n).map(|v| if v == 0 { 0 } else { self.degree(v) }).collect();
        let mut removed = vec![false; self.n + 1];
        let mut leaves: BTreeSet<Vertex> = self.vertices().filter(|&v| degree[v] == 1).collect();
        let mut seq = Vec::with_capacity(self.n - 2);
        for _ in 0..self.n - 2 {
            let leaf = leaves.pop_first().expect("a leaf always exists");
            removed[leaf] = true;
            let nb = *self.adjacency[leaf]
                .iter()
                .find(|&&u| !removed[u])
                .expect("a leaf has one live neighbor");
            seq.push(nb);
            degree[nb] -= 1;
            if degree[nb] == 1 {
                leaves.insert(nb);
            }
        }
        Ok(seq)
    }

    /// Uniform random labeled tree via a random Prüfer code.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidTree("a tree needs at least one vertex".into())),
            1 => Ok(Tree::single_vertex()),
            _ => {
                let seq: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
                Tree::from_prufer(&seq)
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|e| format!("{}-{}", e.lo, e.hi)).collect();
        write!(f, "T{}[{}]", self.n, parts.join(" "))
    }
}

pub const MAX_ENUMERATED_TREE: usize = 8;

/// Every labeled tree on `n` vertices, once each, in Prüfer-lexicographic order.
pub fn all_trees(n: usize) -> Result<AllTrees> {
    if !(2..=MAX_ENUMERATED_TREE).contains(&n) {
        return Err(Error::Guard {
            op: "all_trees",
            got: n,
            range: "2..=8",
        });
    }
    Ok(AllTrees {
        n,
        code: Some(vec![1; n - 2]),
    })
}

pub struct AllTrees {
    n: usize,
    code: Option<Vec<Vertex>>,
}

impl Iterator for AllTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        let code = self.code.as_mut()?;
        let tree = Tree::from_prufer(code).expect("codes stay in range");
        // odometer, last digit fastest
        let mut k = code.len();
        loop {
            if k == 0 {
                self.code = None;
                break;
            }
            k -= 1;
            if code[k] < self.n {
                code[k] += 1;
                break;
            }
            code[k] = 1;
        }
        Some(tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_tree() -> Tree {
        Tree::new(9, [(1, 2), (1, 3), (1, 4), (4, 7), (4, 8), (4, 9), (2, 5), (2, 6)]).unwrap()
    }

    fn bfs_distance(t: &Tree, i: Vertex, j: Vertex) -> usize {
        let mut dist = vec![usize::MAX; t.n() + 1];
        dist[i] = 0;
        let mut q = VecDeque::from([i]);
        while let Some(v) = q.pop_front() {
            for &u in t.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
            }
        }
        dist[j]
    }

    #[test]
    fn rejects_bad_trees() {
        assert!(Tree::new(3, [(1, 2)]).is_err());
        assert!(Tree::new(3, [(1, 2), (2, 1)]).is_err());
        assert!(Tree::new(4, [(1, 2), (3, 4), (1, 2)]).is_err());
        assert!(Tree::new(4, [(1, 2), (2, 3), (3, 1)]).is_err());
        assert!(Tree::new(3, [(1, 1), (2, 3)]).is_err());
        assert!(matches!(
            Tree::new(3, [(1, 2), (2, 5)]),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
        assert_eq!(Tree::single_vertex().edges().len(), 0);
    }

    #[test]
    fn paths_in_small_trees() {
        let p = Tree::path_graph(3).unwrap();
        assert_eq!(p.path_between(1, 3).unwrap().vertices(), &[1, 2, 3]);
        let s = Tree::star(4, 1).unwrap();
        assert_eq!(s.path_between(2, 3).unwrap().vertices(), &[2, 1, 3]);
        let t = sample_tree();
        assert_eq!(t.path_between(9, 1).unwrap().vertices(), &[9, 4, 1]);
        assert_eq!(t.path_between(5, 5).unwrap().len(), 0);
        assert!(matches!(
            t.path_between(0, 3),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(t.path_between(1, 10).is_err());
    }

    #[test]
    fn distances() {
        let p = Tree::path_graph(3).unwrap();
        assert_eq!(p.distance(1, 3).unwrap(), 2);
        assert_eq!(p.distance(2, 2).unwrap(), 0);
        let t = sample_tree();
        assert_eq!(t.distance(1, 6).unwrap(), bfs_distance(&t, 1, 6));
        assert_eq!(t.distance(1, 6).unwrap(), 2);
        assert_eq!(t.distance(9, 6).unwrap(), 4);
        for i in t.vertices() {
            for j in t.vertices() {
                assert_eq!(t.distance(i, j).unwrap(), bfs_distance(&t, i, j));
            }
        }
    }

    #[test]
    fn prufer_examples() {
        let t = Tree::from_prufer(&[]).unwrap();
        assert_eq!(t.edges(), &[Edge::new(1, 2)]);
        let star = Tree::from_prufer(&[1, 1]).unwrap();
        assert_eq!(star, Tree::star(4, 1).unwrap());
        assert_eq!(Tree::star(5, 3).unwrap().to_prufer().unwrap(), vec![3, 3, 3]);
        assert_eq!(Tree::path_graph(3).unwrap().to_prufer().unwrap(), vec![2]);
        assert!(Tree::from_prufer(&[5, 1]).is_err());
        assert!(Tree::from_prufer(&[0]).is_err());
        assert!(Tree::single_vertex().to_prufer().is_err());
    }

    #[test]
    fn cayley_counts() {
        assert!(all_trees(1).is_err());
        assert!(all_trees(9).is_err());
        assert_eq!(all_trees(2).unwrap().count(), 1);
        assert_eq!(all_trees(3).unwrap().count(), 3);
        assert_eq!(all_trees(5).unwrap().count(), 125);
        let distinct: BTreeSet<Vec<Edge>> =
            all_trees(5).unwrap().map(|t| t.edges().to_vec()).collect();
        assert_eq!(distinct.len(), 125);
    }

    #[test]
    fn prufer_round_trip_exhaustive() {
        for n in 2..=7 {
            for t in all_trees(n).unwrap() {
                let code = t.to_prufer().unwrap();
                assert_eq!(Tree::from_prufer(&code).unwrap(), t);
            }
        }
    }

    #[test]
    fn paths_exhaustive() {
        for n in 2..=7 {
            for t in all_trees(n).unwrap() {
                for i in t.vertices() {
                    for j in t.vertices() {
                        let p = t.path_between(i, j).unwrap();
                        t.check_path(&p).unwrap();
                        let distinct: BTreeSet<_> = p.vertices().iter().collect();
                        assert_eq!(distinct.len(), p.vertices().len());
                        assert_eq!(p.reversed(), t.path_between(j, i).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn arcs_toward_edge_examples() {
        let p = Tree::path_graph(3).unwrap();
        assert_eq!(p.arcs_toward_edge(Edge::new(1, 2)).unwrap(), vec![Arc::new(3, 2)]);
        let s = Tree::star(4, 1).unwrap();
        assert_eq!(
            s.arcs_toward_edge(Edge::new(1, 2)).unwrap(),
            vec![Arc::new(3, 1), Arc::new(4, 1)]
        );
        assert!(matches!(
            s.arcs_toward_edge(Edge::new(2, 3)),
            Err(Error::NotAnEdge(2, 3))
        ));
    }

    #[test]
    fn arcs_toward_edge_cover_the_other_arcs() {
        for n in 2..=6 {
            for t in all_trees(n).unwrap() {
                for &e in t.edges() {
                    let u = t.arcs_toward_edge(e).unwrap();
                    assert_eq!(u.len(), n - 2);
                    let mut both: BTreeSet<Arc> = u.iter().copied().collect();
                    both.extend(u.iter().map(|a| a.reverse()));
                    let expected: BTreeSet<Arc> =
                        t.arcs().into_iter().filter(|a| a.edge() != e).collect();
                    assert_eq!(both, expected);
                    // definition: head lies on the path from tail to e.lo
                    for a in &u {
                        let path = t.path_between(a.tail, e.lo).unwrap();
                        assert!(path.vertices().contains(&a.head));
                    }
                }
            }
        }
    }

    #[test]
    fn marked_path_parts() {
        let p = TreePath::new(vec![1, 2, 3, 4]).unwrap();
        let mp = MarkedPath::new(p.clone(), 1).unwrap();
        assert_eq!(mp.tail(), vec![Arc::new(1, 2)]);
        assert_eq!(mp.body(), Arc::new(2, 3));
        assert_eq!(mp.head(), vec![Arc::new(3, 4)]);
        assert!(MarkedPath::new(p, 3).is_err());
        assert!(TreePath::new(vec![1, 2, 1]).is_err());
    }

    proptest! {
        #[test]
        fn four_point_condition(seed in any::<u64>(), n in 4usize..14) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = Tree::random(n, &mut rng).unwrap();
            for _ in 0..20 {
                let [i, j, k, l] = [0; 4].map(|_| rng.gen_range(1..=n));
                let d = |a, b| t.distance(a, b).unwrap();
                let lhs = d(i, j) + d(k, l);
                let rhs = (d(i, k) + d(j, l)).max(d(i, l) + d(j, k));
                prop_assert!(lhs <= rhs);
            }
        }

        #[test]
        fn prufer_round_trip_random(seq in (2usize..20).prop_flat_map(|n| proptest::collection::vec(1..=n, n - 2))) {
            let t = Tree::from_prufer(&seq).unwrap();
            prop_assert_eq!(t.to_prufer().unwrap(), seq);
        }
    }
}
