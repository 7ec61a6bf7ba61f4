//! Catalysts, arrowflows and the sign-reversing involutions on zero-sum classes.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::Scalar;
use crate::matrices::{weight_of_marked_path, WeightAssignment};
use crate::tree::{Arc, Edge, MarkedPath, Tree, Vertex};

pub const MAX_CATALYST_N: usize = 7;
pub const MAX_PARTITION_N: usize = 6;

/// A derangement `sigma` together with a step `f(i)` of each path `P(i, sigma(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Catalyst {
    sigma: Vec<Vertex>,
    f: Vec<Arc>,
}

impl Catalyst {
    /// Builds a catalyst from one-line arrays: `sigma[i-1] = σ(i)`, `f[i-1] = f(i)`.
    pub fn new(tree: &Tree, sigma: Vec<Vertex>, f: Vec<Arc>) -> Result<Self> {
        let n = tree.n();
        if sigma.len() != n || f.len() != n {
            return Err(Error::InvalidCatalyst(format!(
                "expected {n} entries, got sigma {} and f {}",
                sigma.len(),
                f.len()
            )));
        }
        let mut seen = vec![false; n + 1];
        for (k, &s) in sigma.iter().enumerate() {
            tree.check_vertex(s)?;
            if seen[s] {
                return Err(Error::InvalidCatalyst(format!("sigma repeats {s}")));
            }
            seen[s] = true;
            if s == k + 1 {
                return Err(Error::InvalidCatalyst(format!("sigma fixes {s}")));
            }
        }
        for i in 1..=n {
            let path = tree.path_between(i, sigma[i - 1])?;
            if !path.steps().any(|a| a == f[i - 1]) {
                return Err(Error::InvalidCatalyst(format!(
                    "f({i}) = {} is not a step of {path}",
                    f[i - 1]
                )));
            }
        }
        Ok(Catalyst { sigma, f })
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self, i: Vertex) -> Vertex {
        self.sigma[i - 1]
    }

    pub fn f(&self, i: Vertex) -> Arc {
        self.f[i - 1]
    }

    pub fn sigma_one_line(&self) -> &[Vertex] {
        &self.sigma
    }

    pub fn f_one_line(&self) -> &[Arc] {
        &self.f
    }

    /// Parity of `sigma` as ±1.
    pub fn sign(&self) -> i64 {
        permutation_sign(&self.sigma)
    }

    /// The marked path `(P(i, sigma(i)); f(i))`.
    pub fn marked_path(&self, tree: &Tree, i: Vertex) -> Result<MarkedPath> {
        MarkedPath::with_marked_arc(tree.path_between(i, self.sigma(i))?, self.f(i))
    }

    /// The multiset image of `f`.
    pub fn induced_arrowflow(&self) -> Arrowflow {
        Arrowflow::from_sorted(self.f.clone())
    }

    /// `(sigma ∘ (i j), f ∘ (i j))`, or `(sigma ∘ (i j), f)` if `keep_f`.
    fn compose_transposition(&self, i: Vertex, j: Vertex, keep_f: bool) -> Catalyst {
        let mut out = self.clone();
        out.sigma.swap(i - 1, j - 1);
        if !keep_f {
            out.f.swap(i - 1, j - 1);
        }
        out
    }
}

impl fmt::Display for Catalyst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.sigma.iter().map(|v| v.to_string()).collect();
        let a: Vec<String> = self.f.iter().map(|a| a.to_string()).collect();
        write!(f, "sigma=[{}] f=[{}]", s.join(","), a.join(","))
    }
}

/// Sign of a one-line permutation of `1..=n`.
pub fn permutation_sign(perm: &[Vertex]) -> i64 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k] - 1;
        }
    }
    if (n - cycles) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Cycle lengths of a one-line permutation.
pub fn cycle_type(perm: &[Vertex]) -> Vec<usize> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k] - 1;
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

/// A multiset of arcs, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrowflow {
    arcs: Vec<Arc>,
}

impl Arrowflow {
    fn from_sorted(mut arcs: Vec<Arc>) -> Self {
        arcs.sort_unstable();
        Arrowflow { arcs }
    }

    /// Validates that there are exactly `n` arcs, all supported on `tree`.
    pub fn new(tree: &Tree, arcs: Vec<Arc>) -> Result<Self> {
        if arcs.len() != tree.n() {
            return Err(Error::InvalidArrowflow(format!(
                "{} arcs given, expected {}",
                arcs.len(),
                tree.n()
            )));
        }
        for &a in &arcs {
            tree.check_arc(a)?;
        }
        Ok(Self::from_sorted(arcs))
    }

    /// Parses `"1>2,2>1,3>2"`; repetition encodes multiplicity.
    pub fn parse(tree: &Tree, spec: &str) -> Result<Self> {
        let mut arcs = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = part
                .split_once('>')
                .ok_or_else(|| Error::Parse(format!("arc {part:?} is not of the form i>j")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<Vertex>()
                    .map_err(|_| Error::Parse(format!("bad vertex {s:?} in {part:?}")))
            };
            arcs.push(Arc::new(parse(a)?, parse(b)?));
        }
        Self::new(tree, arcs)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn multiplicity(&self, a: Arc) -> usize {
        self.arcs.iter().filter(|&&b| b == a).count()
    }

    pub fn carries(&self, e: Edge) -> bool {
        self.arcs.iter().any(|a| a.edge() == e)
    }

    pub fn to_spec(&self) -> String {
        let parts: Vec<String> = self.arcs.iter().map(|a| a.to_string()).collect();
        parts.join(",")
    }

    pub fn classify(&self, tree: &Tree) -> Classification {
        if let Some(&free) = tree.edges().iter().find(|&&e| !self.carries(e)) {
            return Classification::ZeroSumDisconnected { free_edge: free };
        }
        let marked = *tree
            .edges()
            .iter()
            .find(|&&e| self.arcs.iter().filter(|a| a.edge() == e).count() == 2)
            .expect("n arcs on n-1 covered edges leave one edge doubled");
        let on_marked: Vec<Arc> = self.arcs.iter().copied().filter(|a| a.edge() == marked).collect();
        if on_marked[0] == on_marked[1] {
            Classification::ZeroSumConnected {
                marked_edge: marked,
                repeated_arc: on_marked[0],
            }
        } else {
            Classification::Unital { marked_edge: marked }
        }
    }

    /// The marked edge of a unital arrowflow.
    pub fn unital_marked_edge(&self, tree: &Tree) -> Result<Edge> {
        match self.classify(tree) {
            Classification::Unital { marked_edge } => Ok(marked_edge),
            other => Err(Error::NotUnital(other.to_string())),
        }
    }
}

impl fmt::Display for Arrowflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_spec())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    Unital { marked_edge: Edge },
    ZeroSumDisconnected { free_edge: Edge },
    ZeroSumConnected { marked_edge: Edge, repeated_arc: Arc },
}

impl Classification {
    pub fn is_unital(self) -> bool {
        matches!(self, Classification::Unital { .. })
    }

    pub fn kind(self) -> &'static str {
        match self {
            Classification::Unital { .. } => "unital",
            Classification::ZeroSumDisconnected { .. } => "zero-sum-disconnected",
            Classification::ZeroSumConnected { .. } => "zero-sum-connected",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Unital { marked_edge } => write!(f, "unital, marked edge {marked_edge}"),
            Classification::ZeroSumDisconnected { free_edge } => {
                write!(f, "zero-sum disconnected, edge {free_edge} carries no arc")
            }
            Classification::ZeroSumConnected {
                marked_edge,
                repeated_arc,
            } => write!(
                f,
                "zero-sum connected, marked edge {marked_edge}, arc {repeated_arc} repeated"
            ),
        }
    }
}

/// All unital arrowflows: a marked edge with both arcs, one arc on every
/// other edge. There are `(n-1) 2^(n-2)` of them.
pub fn unital_arrowflows(tree: &Tree) -> Vec<Arrowflow> {
    let edges = tree.edges();
    let mut out = Vec::new();
    for (m, &marked) in edges.iter().enumerate() {
        let others: Vec<Edge> = edges.iter().enumerate().filter(|&(k, _)| k != m).map(|(_, &e)| e).collect();
        for bits in 0u64..(1 << others.len()) {
            let mut arcs = vec![marked.positive(), marked.negative()];
            for (k, e) in others.iter().enumerate() {
                arcs.push(if bits >> k & 1 == 0 { e.positive() } else { e.negative() });
            }
            out.push(Arrowflow::from_sorted(arcs));
        }
    }
    out.sort();
    out
}

/// All derangements of `1..=n` in lexicographic one-line order.
pub fn derangements(n: usize) -> Vec<Vec<Vertex>> {
    fn rec(n: usize, prefix: &mut Vec<Vertex>, used: &mut [bool], out: &mut Vec<Vec<Vertex>>) {
        let pos = prefix.len() + 1;
        if pos > n {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=n {
            if v != pos && !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(n, prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::with_capacity(n), &mut vec![false; n + 1], &mut out);
    out
}

/// Every catalyst of `tree`: derangements in lexicographic order, then the
/// step choices as a mixed-radix counter (last vertex fastest).
pub fn enumerate_catalysts(tree: &Tree) -> Result<CatalystIter> {
    if tree.n() > MAX_CATALYST_N {
        return Err(Error::Guard {
            op: "enumerate_catalysts",
            got: tree.n(),
            range: "1..=7",
        });
    }
    let derangements = derangements(tree.n());
    let mut it = CatalystIter {
        tree: tree.clone(),
        derangements,
        next_derangement: 0,
        steps: Vec::new(),
        counter: Vec::new(),
        sigma: Vec::new(),
        exhausted: false,
    };
    it.load_next();
    Ok(it)
}

pub struct CatalystIter {
    tree: Tree,
    derangements: Vec<Vec<Vertex>>,
    next_derangement: usize,
    steps: Vec<Vec<Arc>>,
    counter: Vec<usize>,
    sigma: Vec<Vertex>,
    exhausted: bool,
}

impl CatalystIter {
    fn load_next(&mut self) {
        let Some(sigma) = self.derangements.get(self.next_derangement) else {
            self.exhausted = true;
            return;
        };
        self.next_derangement += 1;
        self.sigma = sigma.clone();
        self.steps = (1..=self.tree.n())
            .map(|i| {
                self.tree
                    .path_between(i, sigma[i - 1])
                    .expect("vertices in range")
                    .steps()
                    .collect()
            })
            .collect();
        self.counter = vec![0; self.tree.n()];
    }
}

impl Iterator for CatalystIter {
    type Item = Catalyst;

    fn next(&mut self) -> Option<Catalyst> {
        if self.exhausted {
            return None;
        }
        let f: Vec<Arc> = self.counter.iter().zip(&self.steps).map(|(&c, s)| s[c]).collect();
        let out = Catalyst {
            sigma: self.sigma.clone(),
            f,
        };
        let mut k = self.counter.len();
        loop {
            if k == 0 {
                self.load_next();
                break;
            }
            k -= 1;
            self.counter[k] += 1;
            if self.counter[k] < self.steps[k].len() {
                break;
            }
            self.counter[k] = 0;
        }
        Some(out)
    }
}

/// Catalysts grouped by induced arrowflow.
pub fn arrowflow_partition(tree: &Tree) -> Result<BTreeMap<Arrowflow, Vec<Catalyst>>> {
    if tree.n() > MAX_PARTITION_N {
        return Err(Error::Guard {
            op: "arrowflow_partition",
            got: tree.n(),
            range: "1..=6",
        });
    }
    let mut classes: BTreeMap<Arrowflow, Vec<Catalyst>> = BTreeMap::new();
    for k in enumerate_catalysts(tree)? {
        classes.entry(k.induced_arrowflow()).or_default().push(k);
    }
    Ok(classes)
}

pub fn signed_class_sum(class: &[Catalyst]) -> i64 {
    class.iter().map(Catalyst::sign).sum()
}

fn check_member(tree: &Tree, a: &Arrowflow, k: &Catalyst) -> Result<()> {
    Catalyst::new(tree, k.sigma.clone(), k.f.clone())?;
    if k.induced_arrowflow() != *a {
        return Err(Error::Precondition(format!("{k} does not induce {a}")));
    }
    Ok(())
}

/// Swaps the roles of the endpoints of an edge `e` carrying no arc of `a`.
pub fn involution_disconnected(tree: &Tree, a: &Arrowflow, e: Edge, k: &Catalyst) -> Result<Catalyst> {
    if !matches!(a.classify(tree), Classification::ZeroSumDisconnected { .. }) {
        return Err(Error::Precondition(format!("{a} is not disconnected")));
    }
    tree.check_edge(e)?;
    if a.carries(e) {
        return Err(Error::Precondition(format!("edge {e} carries an arc of {a}")));
    }
    check_member(tree, a, k)?;
    let out = k.compose_transposition(e.lo, e.hi, false);
    check_member(tree, a, &out)?;
    Ok(out)
}

/// Swaps `sigma` on the two preimages of the repeated arc.
pub fn involution_connected(tree: &Tree, a: &Arrowflow, k: &Catalyst) -> Result<Catalyst> {
    let Classification::ZeroSumConnected { repeated_arc, .. } = a.classify(tree) else {
        return Err(Error::Precondition(format!("{a} is not connected zero-sum")));
    };
    check_member(tree, a, k)?;
    let pre: Vec<Vertex> = (1..=k.n()).filter(|&i| k.f(i) == repeated_arc).collect();
    let [i, j] = pre[..] else {
        return Err(Error::Precondition(format!(
            "{repeated_arc} has {} preimages under f",
            pre.len()
        )));
    };
    let out = k.compose_transposition(i, j, true);
    check_member(tree, a, &out)?;
    Ok(out)
}

/// The involution attached to a zero-sum class; `None` on unital classes.
pub fn involution(tree: &Tree, a: &Arrowflow, k: &Catalyst) -> Result<Option<Catalyst>> {
    match a.classify(tree) {
        Classification::Unital { .. } => Ok(None),
        Classification::ZeroSumDisconnected { free_edge } => {
            involution_disconnected(tree, a, free_edge, k).map(Some)
        }
        Classification::ZeroSumConnected { .. } => involution_connected(tree, a, k).map(Some),
    }
}

/// Product of the marked-path weights `w(P(i, sigma(i)); f(i))`.
pub fn catalyst_weight<S: Scalar>(tree: &Tree, k: &Catalyst, w: &WeightAssignment<S>) -> Result<S> {
    let mut acc = w.one().clone();
    for i in 1..=k.n() {
        acc = acc.times(&weight_of_marked_path(&k.marked_path(tree, i)?, w)?);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub arrowflow: String,
    pub classification: String,
    pub class_size: usize,
    pub signed_sum: i64,
}

pub fn class_reports(tree: &Tree) -> Result<Vec<ClassReport>> {
    Ok(arrowflow_partition(tree)?
        .into_iter()
        .map(|(a, class)| ClassReport {
            arrowflow: a.to_spec(),
            classification: a.classify(tree).kind().to_owned(),
            class_size: class.len(),
            signed_sum: signed_class_sum(&class),
        })
        .collect())
}
