//! The oriented plane rooted tree `T0` and its mirror image.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::catalysts::Arrowflow;
use crate::error::{Error, Result};
use crate::tree::{Arc, Edge, MarkedPath, Tree, TreePath, Vertex};

/// Step types relative to the orientation and the rooting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcClass {
    UpwardForward,
    UpwardBackward,
    DownwardForward,
    DownwardBackward,
}

impl ArcClass {
    pub fn is_forward(self) -> bool {
        matches!(self, ArcClass::UpwardForward | ArcClass::DownwardForward)
    }

    pub fn short(self) -> &'static str {
        match self {
            ArcClass::UpwardForward | ArcClass::DownwardForward => "F",
            ArcClass::UpwardBackward => "UB",
            ArcClass::DownwardBackward => "DB",
        }
    }
}

/// A rooted plane tree with an orientation `A0` (one arc per edge).
///
/// Vertices are `1..=n` plus the root `r = n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneRootedTree {
    n: usize,
    parent: Vec<Vertex>,
    children: Vec<Vec<Vertex>>,
    orientation: BTreeSet<Arc>,
    marked: Option<Edge>,
    mirrored: bool,
}

impl PlaneRootedTree {
    /// A lone root, which yields a one-node hemisphere.
    pub fn single_root() -> Self {
        PlaneRootedTree {
            n: 0,
            parent: vec![0; 2],
            children: vec![Vec::new(); 2],
            orientation: BTreeSet::new(),
            marked: None,
            mirrored: false,
        }
    }

    /// Number of non-root vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Vertex {
        self.n + 1
    }

    /// The marked edge `{a, b}` subdivided by the root.
    pub fn marked_edge(&self) -> Option<Edge> {
        self.marked
    }

    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n + 1
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        match self.parent[v] {
            0 => None,
            p => Some(p),
        }
    }

    /// Children in plane order.
    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    /// Children in plane order followed by the parent.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = self.children[v].clone();
        out.extend(self.parent(v));
        out
    }

    pub fn orientation(&self) -> &BTreeSet<Arc> {
        &self.orientation
    }

    /// Every arc supported on the tree, lexicographically.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut out: Vec<Arc> = self
            .orientation
            .iter()
            .flat_map(|&a| [a, a.reverse()])
            .collect();
        out.sort_unstable();
        out
    }

    pub fn has_arc(&self, a: Arc) -> bool {
        self.orientation.contains(&a) || self.orientation.contains(&a.reverse())
    }

    pub fn is_ascending_child(&self, parent: Vertex, child: Vertex) -> bool {
        self.orientation.contains(&Arc::new(child, parent))
    }

    pub fn classify_arc(&self, a: Arc) -> Result<ArcClass> {
        if !self.has_arc(a) {
            return Err(Error::NotAnEdge(a.tail, a.head));
        }
        let forward = self.orientation.contains(&a);
        let upward = self.parent(a.tail) == Some(a.head);
        Ok(match (upward, forward) {
            (true, true) => ArcClass::UpwardForward,
            (true, false) => ArcClass::UpwardBackward,
            (false, true) => ArcClass::DownwardForward,
            (false, false) => ArcClass::DownwardBackward,
        })
    }

    /// Reversed orientation and reversed child orders.
    pub fn mirror(&self) -> PlaneRootedTree {
        let mut out = self.clone();
        out.orientation = self.orientation.iter().map(|a| a.reverse()).collect();
        for c in &mut out.children {
            c.reverse();
        }
        out.mirrored = !self.mirrored;
        out
    }

    /// `true` when each child list puts ascending children first.
    pub fn is_admissible(&self) -> bool {
        self.vertices().all(|i| {
            let asc: Vec<bool> = self.children[i]
                .iter()
                .map(|&j| self.is_ascending_child(i, j))
                .collect();
            asc.windows(2).all(|w| w[0] || !w[1])
        })
    }

    /// Randomly permutes children within the ascending and descending groups.
    pub fn shuffle_admissible<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for i in 1..=self.n + 1 {
            let (mut asc, mut desc): (Vec<Vertex>, Vec<Vertex>) = self.children[i]
                .iter()
                .partition(|&&j| self.orientation.contains(&Arc::new(j, i)));
            asc.shuffle(rng);
            desc.shuffle(rng);
            asc.extend(desc);
            self.children[i] = asc;
        }
    }

    /// Maps a `T0` arc to the arc of `T` it stands for.
    pub fn to_tree_arc(&self, a: Arc) -> Arc {
        let r = self.root();
        match (self.marked, a.tail == r, a.head == r) {
            (Some(m), true, _) => Arc::new(m.other(a.head), a.head),
            (Some(m), _, true) => Arc::new(a.tail, m.other(a.tail)),
            _ => a,
        }
    }

    /// Maps a `T` arc to its `T0` counterpart: `(a,b) -> (r,b)`.
    pub fn from_tree_arc(&self, a: Arc) -> Arc {
        match self.marked {
            Some(m) if a.edge() == m => Arc::new(self.root(), a.head),
            _ => a,
        }
    }

    /// Rewrites a path of `T` in `T0` by inserting `r` inside the marked edge.
    pub fn lift_tree_path(&self, path: &TreePath) -> TreePath {
        let mut out = Vec::with_capacity(path.vertices().len() + 1);
        for (k, &v) in path.vertices().iter().enumerate() {
            if k > 0 {
                let prev = path.vertices()[k - 1];
                if self.marked == Some(Edge::new(prev, v)) {
                    out.push(self.root());
                }
            }
            out.push(v);
        }
        TreePath::new(out).expect("inserting r keeps the path simple")
    }

    /// The `T0` marked path attached to a marked path of `T`.
    pub fn lift_marked_path(&self, mp: &MarkedPath) -> Result<MarkedPath> {
        let path = self.lift_tree_path(mp.path());
        MarkedPath::with_marked_arc(path, self.from_tree_arc(mp.marked_arc()))
    }

    /// The `T` marked path of a `T0` marked path, removing `r`.
    pub fn project_marked_path(&self, mp: &MarkedPath) -> Result<MarkedPath> {
        let r = self.root();
        let verts: Vec<Vertex> = mp.path().vertices().iter().copied().filter(|&v| v != r).collect();
        MarkedPath::with_marked_arc(TreePath::new(verts)?, self.to_tree_arc(mp.marked_arc()))
    }
}

/// Subdivides the marked edge of a unital arrowflow with a root `r = n + 1`.
///
/// Children are ordered ascending first, then descending, each group by
/// label; the root's children are `a < b`.
pub fn build_t0(tree: &Tree, a: &Arrowflow) -> Result<PlaneRootedTree> {
    let marked = a.unital_marked_edge(tree)?;
    let n = tree.n();
    let r = n + 1;
    let mut adjacency = vec![Vec::new(); n + 2];
    for e in tree.edges() {
        if *e != marked {
            adjacency[e.lo].push(e.hi);
            adjacency[e.hi].push(e.lo);
        }
    }
    for v in [marked.lo, marked.hi] {
        adjacency[r].push(v);
        adjacency[v].push(r);
    }
    let mut orientation: BTreeSet<Arc> = a
        .arcs()
        .iter()
        .copied()
        .filter(|x| x.edge() != marked)
        .collect();
    orientation.insert(Arc::new(r, marked.lo));
    orientation.insert(Arc::new(r, marked.hi));

    let mut parent = vec![0; n + 2];
    let mut children = vec![Vec::new(); n + 2];
    let mut seen = vec![false; n + 2];
    seen[r] = true;
    let mut queue = VecDeque::from([r]);
    while let Some(v) = queue.pop_front() {
        let mut kids: Vec<Vertex> = adjacency[v].iter().copied().filter(|&u| !seen[u]).collect();
        for &u in &kids {
            seen[u] = true;
            parent[u] = v;
            queue.push_back(u);
        }
        kids.sort_by_key(|&u| (!orientation.contains(&Arc::new(u, v)), u));
        children[v] = kids;
    }
    Ok(PlaneRootedTree {
        n,
        parent,
        children,
        orientation,
        marked: Some(marked),
        mirrored: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalysts::unital_arrowflows;

    pub(crate) fn sample_tree() -> Tree {
        Tree::new(9, [(1, 2), (1, 3), (1, 4), (4, 7), (4, 8), (4, 9), (2, 5), (2, 6)]).unwrap()
    }

    pub(crate) fn sample_arrowflow() -> Arrowflow {
        Arrowflow::parse(&sample_tree(), "1>2,2>1,3>1,4>1,8>4,4>7,4>9,6>2,2>5").unwrap()
    }

    #[test]
    fn edge_tree_t0() {
        let t = Tree::new(2, [(1, 2)]).unwrap();
        let a = Arrowflow::parse(&t, "1>2,2>1").unwrap();
        let y = build_t0(&t, &a).unwrap();
        assert_eq!(y.root(), 3);
        assert_eq!(y.children(3), &[1, 2]);
        assert_eq!(y.orientation().iter().copied().collect::<Vec<_>>(), vec![Arc::new(3, 1), Arc::new(3, 2)]);
        assert_eq!(y.classify_arc(Arc::new(3, 1)).unwrap(), ArcClass::DownwardForward);
        assert_eq!(y.classify_arc(Arc::new(1, 3)).unwrap(), ArcClass::UpwardBackward);
    }

    #[test]
    fn sample_plane_structure() {
        let y = build_t0(&sample_tree(), &sample_arrowflow()).unwrap();
        let r = y.root();
        assert_eq!(y.children(r), &[1, 2]);
        assert_eq!(y.children(1), &[3, 4]);
        assert_eq!(y.children(4), &[8, 7, 9]);
        assert_eq!(y.children(2), &[6, 5]);
        assert_eq!(y.neighbors(4), vec![8, 7, 9, 1]);
        assert!(y.is_admissible());
        assert!(y.is_ascending_child(1, 3));
        assert!(!y.is_ascending_child(4, 7));
    }

    #[test]
    fn orientation_covers_each_edge_once() {
        for n in 2..=5 {
            for t in crate::tree::all_trees(n).unwrap() {
                for a in unital_arrowflows(&t) {
                    let y = build_t0(&t, &a).unwrap();
                    assert_eq!(y.orientation().len(), n);
                    let edges: BTreeSet<Edge> = y.orientation().iter().map(|x| x.edge()).collect();
                    assert_eq!(edges.len(), n);
                    assert!(y.is_admissible());
                    let r = y.root();
                    assert!(y.children(r).iter().all(|&c| !y.is_ascending_child(r, c)));
                }
            }
        }
    }

    #[test]
    fn mirror_properties() {
        let y = build_t0(&sample_tree(), &sample_arrowflow()).unwrap();
        let m = y.mirror();
        assert_eq!(m.mirror(), y);
        assert!(m.is_admissible());
        assert!(m.is_mirrored());
        // 7 was descending under 4, so it becomes ascending
        assert!(m.is_ascending_child(4, 7));
        assert_eq!(m.children(4), &[9, 7, 8]);
        let r = m.root();
        assert!(m.children(r).iter().all(|&c| m.is_ascending_child(r, c)));
    }

    #[test]
    fn non_unital_is_rejected() {
        let t = Tree::path_graph(3).unwrap();
        let a = Arrowflow::parse(&t, "1>2,1>2,3>2").unwrap();
        assert!(matches!(build_t0(&t, &a), Err(Error::NotUnital(_))));
    }

    #[test]
    fn marked_path_round_trip() {
        let t = sample_tree();
        let y = build_t0(&t, &sample_arrowflow()).unwrap();
        let mp = MarkedPath::with_marked_arc(t.path_between(1, 6).unwrap(), Arc::new(1, 2)).unwrap();
        let lifted = y.lift_marked_path(&mp).unwrap();
        assert_eq!(lifted.path().vertices(), &[1, 10, 2, 6]);
        assert_eq!(lifted.marked_arc(), Arc::new(10, 2));
        assert_eq!(y.project_marked_path(&lifted).unwrap(), mp);
        assert_eq!(y.to_tree_arc(Arc::new(10, 1)), Arc::new(2, 1));
        assert_eq!(y.to_tree_arc(Arc::new(1, 10)), Arc::new(1, 2));
    }

    #[test]
    fn shuffled_orders_stay_admissible() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut y = build_t0(&sample_tree(), &sample_arrowflow()).unwrap();
        for _ in 0..20 {
            y.shuffle_admissible(&mut rng);
            assert!(y.is_admissible());
        }
    }
}
