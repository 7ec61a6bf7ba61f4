//! Plain-text tree files: a line with `n`, then one `i j` line per edge.
//! Text after `#` is ignored.

use arborflow::Tree;

use crate::error::CliError;

pub fn parse_tree(text: &str) -> Result<Tree, CliError> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| CliError::Format("empty tree file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| CliError::Format(format!("bad vertex count {header:?}")))?;
    let mut edges = Vec::new();
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [i, j] = parts.as_slice() else {
            return Err(CliError::Format(format!("expected \"i j\", got {line:?}")));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| CliError::Format(format!("bad vertex {s:?}")))
        };
        edges.push((parse(i)?, parse(j)?));
    }
    Tree::new(n, edges).map_err(|e| CliError::Format(e.to_string()))
}

pub fn format_tree(tree: &Tree) -> String {
    let mut out = format!("{}\n", tree.n());
    for e in tree.edges() {
        out.push_str(&format!("{} {}\n", e.lo, e.hi));
    }
    out
}
