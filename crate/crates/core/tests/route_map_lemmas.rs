//! Structural facts about non-intersecting families in hemispheres and
//! Route Maps.

use std::collections::{BTreeMap, BTreeSet};

use arborflow::catalysts::{catalyst_weight, unital_arrowflows, Arrowflow};
use arborflow::exactalg::{det_expansion_poly, MultiPoly, VarRegistry};
use arborflow::matrices::{weighted_distance_matrix, WeightAssignment};
use arborflow::route_map::{
    build_route_map, build_route_map_with, build_t0, canonical_nip, canonical_weight, expected_flow, family_weight,
    flow, subtree_node_set, ArcClass, Network, Node, NodeKind, PathFamily, PlaneRootedTree, RouteMap,
};
use arborflow::tree::Arc;
use arborflow::{all_trees, Tree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn degrees(fam: &PathFamily) -> BTreeMap<Node, (usize, usize)> {
    let mut out: BTreeMap<Node, (usize, usize)> = BTreeMap::new();
    for ((u, v), m) in fam.steps() {
        out.entry(u).or_default().0 += m;
        out.entry(v).or_default().1 += m;
    }
    out
}

fn termini(fam: &PathFamily) -> BTreeSet<Node> {
    fam.paths().iter().map(|p| *p.last().unwrap()).collect()
}

/// Arcs of `Γ(i)`: those touching `v(i)` or an `s`-node centered at `i`.
fn local_steps(fam: &PathFamily, i: usize) -> BTreeSet<(Node, Node)> {
    fam.steps()
        .into_keys()
        .filter(|(u, v)| u.gadget() == Some(i) || v.gadget() == Some(i))
        .collect()
}

fn expected_trace(y: &PlaneRootedTree, i: usize) -> BTreeSet<(Node, Node)> {
    let nb = y.neighbors(i);
    let e = |a: usize, b: usize| Node::e(Arc::new(a, b));
    let mut out = BTreeSet::new();
    if i == y.root() {
        let ch = y.children(i);
        let descending = ch.iter().all(|&c| !y.is_ascending_child(i, c));
        if descending {
            let (a, b) = (ch[0], ch[1]);
            out.insert((e(a, i), Node::s(i, a, b)));
            out.insert((Node::s(i, a, b), e(i, b)));
            out.insert((e(b, i), Node::s(i, b, a)));
            out.insert((Node::s(i, b, a), e(i, a)));
        }
        return out;
    }
    let m = nb.len();
    // 0-based index of the first non-ascending neighbor
    let p = y.children(i).iter().take_while(|&&c| y.is_ascending_child(i, c)).count();
    let mut prev = Node::v(i);
    for k in 0..p {
        let s = Node::s(i, nb[k], nb[k + 1]);
        out.insert((prev, s));
        prev = s;
    }
    out.insert((prev, e(i, nb[p])));
    for k in p..m - 1 {
        let s = Node::s(i, nb[k], nb[k + 1]);
        out.insert((e(nb[k], i), s));
        out.insert((s, e(i, nb[k + 1])));
    }
    out
}

/// Checks every hemisphere lemma for a non-intersecting family of `H(Y)`.
fn check_hemisphere(y: &PlaneRootedTree, net: &Network, fam: &PathFamily) {
    assert!(fam.is_non_intersecting());
    let deg = degrees(fam);
    let on: BTreeSet<Node> = fam.paths().iter().flatten().copied().collect();
    let ends = termini(fam);

    // in/out degrees
    for &v in net.nodes() {
        let d = deg.get(&v).copied().unwrap_or((0, 0));
        if net.sources().contains(&v) {
            assert_eq!(d, (1, 0), "{v}");
        } else if net.sinks().contains(&v) {
            assert_eq!(d, (0, 1), "{v}");
        } else {
            assert!(d == (1, 1) || d == (0, 0), "{v}: {d:?}");
        }
    }

    for i in y.vertices() {
        let Some(parent) = y.parent(i) else { continue };
        // zero flow through the parent edge
        let down = Node::e(Arc::new(i, parent));
        let up = Node::e(Arc::new(parent, i));
        assert_eq!(deg.get(&down).map_or(0, |d| d.0), deg.get(&up).map_or(0, |d| d.1));
        let sigma = subtree_node_set(y, i);
        assert_eq!(flow(fam, &sigma), 0);
        assert_eq!(expected_flow(net, &sigma), 0);
    }

    // e-node law
    for g in y.arcs() {
        let v = Node::e(g);
        match y.classify_arc(g).unwrap() {
            c if c.is_forward() => assert!(ends.contains(&v), "{v} should be a terminus"),
            ArcClass::UpwardBackward => assert!(on.contains(&v) && !ends.contains(&v), "{v} should be intermediary"),
            _ => assert!(!on.contains(&v), "{v} should be unused"),
        }
    }

    // s-node law
    let r = y.root();
    let mut want_s = BTreeSet::new();
    for i in y.vertices() {
        let nb = y.neighbors(i);
        for w in nb.windows(2) {
            if i != r {
                want_s.insert(Node::s(i, w[0], w[1]));
            } else if y.children(r).iter().all(|&c| !y.is_ascending_child(r, c)) {
                want_s.insert(Node::s(i, w[0], w[1]));
                want_s.insert(Node::s(i, w[1], w[0]));
            }
        }
    }
    let got_s: BTreeSet<Node> = on.iter().copied().filter(|v| matches!(v.kind, NodeKind::S(..))).collect();
    assert_eq!(got_s, want_s);

    // traces in each gadget
    for i in y.vertices() {
        assert_eq!(local_steps(fam, i), expected_trace(y, i), "gadget {i}");
    }
}

fn check_route_map(rm: &RouteMap) {
    let star = canonical_nip(rm).unwrap();
    let south = rm.south().unwrap();
    let s_fam = PathFamily::new(&south, rm.south_restriction(&star).paths().to_vec()).unwrap();
    check_hemisphere(rm.t0(), &south, &s_fam);
    let mirror = rm.mirror_hemisphere().unwrap();
    let m_fam = PathFamily::new(&mirror, rm.mirror_restriction(&star).unwrap().paths().to_vec()).unwrap();
    check_hemisphere(&rm.t0().mirror(), &mirror, &m_fam);
}

#[test]
fn hemisphere_lemmas_hold_for_all_small_arrowflows() {
    for n in 2..=5 {
        for t in all_trees(n).unwrap() {
            for a in unital_arrowflows(&t) {
                check_route_map(&build_route_map(&t, &a).unwrap());
            }
        }
    }
}

#[test]
fn hemisphere_paths_are_unique() {
    for n in 2..=4 {
        for t in all_trees(n).unwrap() {
            for a in unital_arrowflows(&t).into_iter().take(4) {
                let rm = build_route_map(&t, &a).unwrap();
                for net in [rm.south().unwrap(), rm.mirror_hemisphere().unwrap()] {
                    for &u in net.nodes() {
                        for &v in net.nodes() {
                            assert!(net.count_paths(u, v).unwrap() <= 1, "{u} -> {v}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn canonical_family_weight() {
    for n in 2..=5 {
        for t in all_trees(n).unwrap() {
            let w = WeightAssignment::symbolic(&t, &VarRegistry::for_tree(&t)).unwrap();
            for a in unital_arrowflows(&t) {
                let rm = build_route_map(&t, &a).unwrap();
                let star = canonical_nip(&rm).unwrap();
                let fw = family_weight(&rm, &star, &w).unwrap();
                assert_eq!(fw, canonical_weight(&rm, &w).unwrap(), "{t} {a}");
                let k = rm.project_family(&star).unwrap();
                assert_eq!(fw, catalyst_weight(&t, &k, &w).unwrap());
            }
        }
    }
}

#[test]
fn determinant_is_signed_sum_of_canonical_weights() {
    for n in 2..=4 {
        for t in all_trees(n).unwrap() {
            let w = WeightAssignment::symbolic(&t, &VarRegistry::for_tree(&t)).unwrap();
            let mut total = MultiPoly::zero();
            for a in unital_arrowflows(&t) {
                total = total.add(&canonical_weight(&build_route_map(&t, &a).unwrap(), &w).unwrap());
            }
            if n % 2 == 0 {
                total = total.neg();
            }
            let det = det_expansion_poly(&weighted_distance_matrix(&t, &w).unwrap()).unwrap();
            assert_eq!(total, det, "{t}");
        }
    }
}

#[test]
fn shuffled_plane_orders_keep_a_unique_nip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 3..=4 {
        for t in all_trees(n).unwrap() {
            for a in unital_arrowflows(&t) {
                let mut y = build_t0(&t, &a).unwrap();
                y.shuffle_admissible(&mut rng);
                let rm = build_route_map_with(&t, &a, y).unwrap();
                let nips: Vec<PathFamily> = rm
                    .enumerate_full_families()
                    .unwrap()
                    .into_iter()
                    .filter(PathFamily::is_non_intersecting)
                    .collect();
                assert_eq!(nips, vec![canonical_nip(&rm).unwrap()], "{t} {a}");
                check_route_map(&rm);
            }
        }
    }
}

#[test]
fn sample_lift_example() {
    // the marked path 9 4 1 marked at 41 lifts through e(4,1)
    let t = Tree::new(9, [(1, 2), (1, 3), (1, 4), (4, 7), (4, 8), (4, 9), (2, 5), (2, 6)]).unwrap();
    let a = Arrowflow::parse(&t, "1>2,2>1,3>1,4>1,8>4,4>7,4>9,6>2,2>5").unwrap();
    let rm = build_route_map(&t, &a).unwrap();
    let mp = arborflow::MarkedPath::with_marked_arc(t.path_between(9, 1).unwrap(), Arc::new(4, 1)).unwrap();
    let lifted = rm.lift_marked_path(&mp).unwrap();
    let bridge = lifted.windows(2).find(|w| rm.network().is_bridge(w[0], w[1])).unwrap();
    assert_eq!(bridge[0], Node::e(Arc::new(4, 1)));
    assert_eq!(lifted.first(), Some(&Node::v(9)));
    assert!(lifted.last().unwrap().is_north());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_route_maps_satisfy_lemmas(n in 2usize..=8, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Tree::random(n, &mut rng).unwrap();
        let flows = unital_arrowflows(&t);
        prop_assert_eq!(flows.len(), (n - 1) << (n - 2));
        let a = &flows[pick.index(flows.len())];
        let rm = build_route_map(&t, a).unwrap();
        prop_assert_eq!(rm.network().node_count(), 2 * (5 * n - 1));
        check_route_map(&rm);
    }
}
