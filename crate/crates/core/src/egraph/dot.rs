use std::fmt::Write;

use super::EGraph;
use crate::expr::Head;

/// Graphviz rendering: one cluster per e-class, edges from e-nodes to the
/// child class clusters.
pub(super) fn to_dot(g: &EGraph) -> String {
    let mut out = String::from("digraph egraph {\n  compound=true;\n  clusterrank=local;\n");
    for class in g.classes() {
        let _ = writeln!(out, "  subgraph cluster_{} {{", class.id);
        let _ = writeln!(out, "    style=dotted; label=\"{}\";", class.id);
        for (i, node) in class.nodes.iter().enumerate() {
            let label = match node.head {
                Head::Const(c) => c.to_string(),
                Head::X => "x".into(),
                Head::Hole => "y".into(),
                Head::Op(op) => op.name().into(),
            };
            let _ = writeln!(out, "    n{}_{} [label=\"{}\"];", class.id, i, label.replace('"', "\\\""));
        }
        out.push_str("  }\n");
    }
    for class in g.classes() {
        for (i, node) in class.nodes.iter().enumerate() {
            for child in &node.children {
                let child = g.find(*child);
                let _ = writeln!(out, "  n{}_{} -> n{}_0 [lhead=cluster_{}];", class.id, i, child, child);
            }
        }
    }
    out.push_str("}\n");
    out
}
