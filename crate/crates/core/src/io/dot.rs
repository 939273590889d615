use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::pdgraph::{Orientation, OrientationProblem, VertexId};
use crate::reduction::{GadgetLabel, GadgetRegistry};

fn cluster_of(label: GadgetLabel) -> (String, String) {
    match label {
        GadgetLabel::Base { var, copy, .. } => {
            (format!("cluster_x{}_{}", var + 1, copy + 1), format!("x{} copy {}", var + 1, copy + 1))
        }
        GadgetLabel::Clause { clause, .. } => (format!("cluster_c{}", clause + 1), format!("c{}", clause + 1)),
    }
}

/// Graphviz text. Odd-set vertices are filled black, the others white.
/// Fixed arcs and oriented edges are arrows, undirected edges plain lines.
/// With a registry, each base gadget and each clause gadget is a cluster.
pub fn export_dot(
    problem: &OrientationProblem,
    orientation: Option<&Orientation>,
    registry: Option<&GadgetRegistry>,
) -> String {
    let g = problem.graph();
    let mut out = String::from("digraph instance {\n  node [shape=circle, style=filled, fillcolor=white, fontcolor=black];\n");
    let node_line = |out: &mut String, indent: &str, v: VertexId| {
        let label = registry.and_then(|r| r.label(v)).map_or_else(|| v.to_string(), |l| l.to_string());
        let colors = if problem.is_odd(v) { ", fillcolor=black, fontcolor=white" } else { "" };
        let _ = writeln!(out, "{indent}{} [label=\"{label}\"{colors}];", v.0);
    };
    let mut clusters: BTreeMap<String, (String, Vec<VertexId>)> = BTreeMap::new();
    let mut loose = Vec::new();
    for &v in g.vertices() {
        match registry.and_then(|r| r.label(v)) {
            Some(l) => {
                let (key, title) = cluster_of(l);
                clusters.entry(key).or_insert_with(|| (title, Vec::new())).1.push(v);
            }
            None => loose.push(v),
        }
    }
    for (key, (title, members)) in &clusters {
        let _ = writeln!(out, "  subgraph {key} {{\n    label=\"{title}\";");
        for &v in members {
            node_line(&mut out, "    ", v);
        }
        out.push_str("  }\n");
    }
    for v in loose {
        node_line(&mut out, "  ", v);
    }
    for e in g.edges() {
        match orientation.and_then(|o| o.direction_of(e.lo(), e.hi())) {
            Some(a) => {
                let _ = writeln!(out, "  {} -> {};", a.tail.0, a.head.0);
            }
            None => {
                let _ = writeln!(out, "  {} -> {} [dir=none];", e.lo().0, e.hi().0);
            }
        }
    }
    for a in g.arcs() {
        let _ = writeln!(out, "  {} -> {} [penwidth=2];", a.tail.0, a.head.0);
    }
    out.push_str("}\n");
    out
}
