//! Graphviz export.

use std::fmt::Write;

use super::network::{Network, Node, NodeKind};

fn label(v: usize, root: usize) -> String {
    if v == root {
        "r".into()
    } else {
        v.to_string()
    }
}

/// Node identifier: `v_i`, `e_i_j`, `s_i_j_k`, prefixed `N_` in the north.
pub fn node_name(v: Node, root: usize) -> String {
    let l = |x| label(x, root);
    let base = match v.kind {
        NodeKind::V(i) => format!("v_{}", l(i)),
        NodeKind::E(i, j) => format!("e_{}_{}", l(i), l(j)),
        NodeKind::S(i, j, k) => format!("s_{}_{}_{}", l(i), l(j), l(k)),
    };
    if v.is_north() {
        format!("N_{base}")
    } else {
        base
    }
}

/// Human-readable label such as `s'_r(1,2)`.
pub fn display_label(v: Node, root: usize) -> String {
    let l = |x| label(x, root);
    let prime = if v.is_north() { "'" } else { "" };
    match v.kind {
        NodeKind::V(i) => format!("v{prime}({})", l(i)),
        NodeKind::E(i, j) => format!("e{prime}({},{})", l(i), l(j)),
        NodeKind::S(i, j, k) => format!("s{prime}_{}({},{})", l(i), l(j), l(k)),
    }
}

/// DOT text with dashed bridges, sources ranked first and sinks last.
///
/// `root` is the label printed as `r`.
pub fn to_dot(net: &Network, root: usize) -> String {
    let mut out = String::from("digraph route_map {\n  rankdir=LR;\n");
    for &v in net.nodes() {
        let _ = writeln!(out, "  {} [label=\"{}\"];", node_name(v, root), display_label(v, root));
    }
    for (u, v) in net.arcs() {
        let style = if net.is_bridge(u, v) { " [style=dashed]" } else { "" };
        let _ = writeln!(out, "  {} -> {}{};", node_name(u, root), node_name(v, root), style);
    }
    for (rank, set) in [("min", net.sources()), ("max", net.sinks())] {
        let names: Vec<String> = set.iter().map(|&v| node_name(v, root)).collect();
        let _ = writeln!(out, "  {{ rank={rank}; {}; }}", names.join("; "));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalysts::Arrowflow;
    use crate::route_map::build::build_route_map;
    use crate::tree::Tree;

    #[test]
    fn edge_tree_dot() {
        let t = Tree::path_graph(2).unwrap();
        let rm = build_route_map(&t, &Arrowflow::parse(&t, "1>2,2>1").unwrap()).unwrap();
        let dot = to_dot(rm.network(), 3);
        assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 18);
        assert_eq!(dot.matches("style=dashed").count(), 2);
        assert!(dot.contains("e_r_1 -> N_e_r_1 [style=dashed]"));
        assert!(dot.contains("N_s_r_1_2 [label=\"s'_r(1,2)\"]"));
        assert!(dot.contains("{ rank=min; v_1; v_2; }"));
        assert!(dot.contains("{ rank=max; N_v_1; N_v_2; }"));
    }
}
