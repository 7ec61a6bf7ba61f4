//! Depth-first walks of `T0`, in-indices, and the interlacing family `Λ*`.

use crate::error::{Error, Result};
use crate::tree::{Arc, MarkedPath, TreePath, Vertex};

use super::build::RouteMap;
use super::network::PathFamily;
use super::plane::{ArcClass, PlaneRootedTree};

fn check_shape(y: &PlaneRootedTree) -> Result<()> {
    let r = y.root();
    if y.is_mirrored() || y.children(r).len() != 2 || y.children(r).iter().any(|&c| y.is_ascending_child(r, c)) {
        return Err(Error::Precondition("DFS walk needs T0 with two descending root children".into()));
    }
    Ok(())
}

/// `dfs(r)` where `dfs(i) = i dfs(j1) i ... dfs(jm) i`; length `2n + 1`.
pub fn dfs_walk(y: &PlaneRootedTree) -> Result<Vec<Vertex>> {
    check_shape(y)?;
    fn rec(y: &PlaneRootedTree, i: Vertex, out: &mut Vec<Vertex>) {
        out.push(i);
        for &j in y.children(i) {
            rec(y, j, out);
            out.push(i);
        }
    }
    let mut out = Vec::with_capacity(2 * y.n() + 1);
    rec(y, y.root(), &mut out);
    Ok(out)
}

/// The same walk from the successor rule `w_k = NEXT(w_{k-2}, w_{k-1})`.
pub fn dfs_walk_iterative(y: &PlaneRootedTree) -> Result<Vec<Vertex>> {
    check_shape(y)?;
    let r = y.root();
    let mut w = vec![r, y.children(r)[0]];
    while w.len() < 2 * y.n() + 1 {
        let (i, j) = (w[w.len() - 2], w[w.len() - 1]);
        let nb = y.neighbors(j);
        let next = if y.parent(i) == Some(j) {
            let pos = nb.iter().position(|&v| v == i).expect("child is a neighbor");
            *nb.get(pos + 1)
                .ok_or_else(|| Error::Precondition(format!("walk stalls after {i} {j}")))?
        } else {
            nb[0]
        };
        w.push(next);
    }
    Ok(w)
}

fn class(y: &PlaneRootedTree, u: Vertex, v: Vertex) -> ArcClass {
    y.classify_arc(Arc::new(u, v)).expect("walk steps are arcs")
}

/// Positions `k` with `w_k != r`, `(w_{k-1}, w_k)` not upward backward and
/// `(w_k, w_{k+1})` not downward backward.
pub fn in_indices(y: &PlaneRootedTree, walk: &[Vertex]) -> Vec<usize> {
    let r = y.root();
    (1..walk.len().saturating_sub(1))
        .filter(|&k| {
            walk[k] != r
                && class(y, walk[k - 1], walk[k]) != ArcClass::UpwardBackward
                && class(y, walk[k], walk[k + 1]) != ArcClass::DownwardBackward
        })
        .collect()
}

/// In-indices from the definition: the occurrence of each vertex with all
/// visits to ascending children before it and to descending children after.
pub fn in_indices_by_definition(y: &PlaneRootedTree, walk: &[Vertex]) -> Vec<usize> {
    let r = y.root();
    let mut out = Vec::new();
    for i in y.vertices().filter(|&i| i != r) {
        let occurrences = walk.iter().enumerate().filter(|&(_, &v)| v == i).map(|(k, _)| k);
        let good: Vec<usize> = occurrences
            .filter(|&k| {
                y.children(i).iter().all(|&c| {
                    let mut visits = walk.iter().enumerate().filter(|&(_, &v)| v == c).map(|(p, _)| p);
                    if y.is_ascending_child(i, c) {
                        visits.all(|p| p < k)
                    } else {
                        visits.all(|p| p > k)
                    }
                })
            })
            .collect();
        out.extend(good);
    }
    out.sort_unstable();
    out
}

/// Splits the cyclic walk at consecutive in-indices into marked paths of
/// `T0`, marked at their unique forward step.
pub fn interlace_decompose(y: &PlaneRootedTree, walk: &[Vertex], omega: &[usize]) -> Result<Vec<MarkedPath>> {
    let len = walk.len() - 1;
    if omega.is_empty() {
        return Err(Error::Precondition("no in-indices".into()));
    }
    let mut out = Vec::with_capacity(omega.len());
    for (t, &u) in omega.iter().enumerate() {
        let v = omega[(t + 1) % omega.len()];
        let mut verts = Vec::new();
        let mut k = u;
        loop {
            verts.push(walk[k]);
            if k == v && verts.len() > 1 {
                break;
            }
            k = (k + 1) % len;
        }
        let path = TreePath::new(verts)?;
        let forward: Vec<usize> = path
            .steps()
            .enumerate()
            .filter(|&(_, a)| y.orientation().contains(&a))
            .map(|(p, _)| p)
            .collect();
        if forward.len() != 1 {
            return Err(Error::Precondition(format!("chunk {path} has {} forward steps", forward.len())));
        }
        out.push(MarkedPath::new(path, forward[0])?);
    }
    Ok(out)
}

/// Step classes along a `T0` path.
pub fn step_types(y: &PlaneRootedTree, path: &TreePath) -> Result<Vec<ArcClass>> {
    path.steps().map(|a| y.classify_arc(a)).collect()
}

/// `true` for words of the form `UB^p F DB^q`.
pub fn is_interlacing_word(word: &[ArcClass]) -> bool {
    let Some(f) = word.iter().position(|c| c.is_forward()) else {
        return false;
    };
    word[..f].iter().all(|&c| c == ArcClass::UpwardBackward)
        && word[f + 1..].iter().all(|&c| c == ArcClass::DownwardBackward)
}

/// The family `Λ*` of lifted chunks, path `k` starting at `v(k)`.
pub fn canonical_nip(rm: &RouteMap) -> Result<PathFamily> {
    let y = rm.t0();
    let walk = dfs_walk(y)?;
    let omega = in_indices(y, &walk);
    let chunks = interlace_decompose(y, &walk, &omega)?;
    let mut paths = vec![Vec::new(); y.n()];
    for c in &chunks {
        paths[c.path().origin() - 1] = rm.lift_t0_marked_path(c)?;
    }
    PathFamily::new(rm.network(), paths)
}
