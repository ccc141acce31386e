//! Graphviz export of the three connection levels.
//!
//! Blocks become clusters. Level-1 edges join basis elements; level-2 and
//! level-3 edges join the least member of each class they connect.

use std::fmt::Write;

use basisdiv::{AlgebraPresentation, ConnectionLevels};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(a: &AlgebraPresentation, levels: &ConnectionLevels) -> String {
    let labels = a.labels();
    let node = |i: usize| quote(&labels[i]);
    let mut out = String::from("graph connection_levels {\n  node [shape=circle];\n");
    for (b, block) in levels.level3.iter().enumerate() {
        writeln!(out, "  subgraph cluster_block{b} {{\n    label=\"block {b}\";").unwrap();
        for &c2 in block {
            writeln!(out, "    subgraph cluster_l2_{c2} {{\n      label=\"\"; style=dashed;").unwrap();
            for &c1 in &levels.level2[c2] {
                let members: Vec<String> = levels.level1[c1].iter().map(|&i| node(i)).collect();
                writeln!(out, "      {{ {} }}", members.join("; ")).unwrap();
            }
            out.push_str("    }\n");
        }
        out.push_str("  }\n");
    }
    for &(i, j) in &levels.edges1 {
        writeln!(out, "  {} -- {} [label=\"L1\"];", node(i), node(j)).unwrap();
    }
    for &(c, d) in &levels.edges2 {
        let (x, y) = (levels.level1[c][0], levels.level1[d][0]);
        writeln!(out, "  {} -- {} [style=dashed, label=\"L2\"];", node(x), node(y)).unwrap();
    }
    for &(b, c) in &levels.edges3 {
        let (x, y) = (levels.level2_indices(b)[0], levels.level2_indices(c)[0]);
        writeln!(out, "  {} -- {} [style=dotted, label=\"L3\"];", node(x), node(y)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use basisdiv::{connection_levels, Field};

    #[test]
    fn lists_every_node_and_edge() {
        let f = Field::prime(2).unwrap();
        let a = AlgebraPresentation::from_entries(f, 3, [(0, 1, 1, f.one())]).unwrap();
        let dot = to_dot(&a, &connection_levels(&a));
        assert!(dot.starts_with("graph connection_levels {"));
        assert!(dot.contains("\"e1\" -- \"e2\" [label=\"L1\"];"));
        assert!(dot.contains("{ \"e3\" }"));
        assert_eq!(dot.matches("cluster_block").count(), 2);
    }
}
