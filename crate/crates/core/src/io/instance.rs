use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::p3sat::{Formula, IncidenceNode, Literal, PlanarFormula, RotationSystem};
use crate::pdgraph::{Orientation, OrientationProblem, PartiallyDirectedGraph, VertexId};
use crate::reduction::{GadgetLabel, GadgetRegistry, ReductionArtifact};

pub const FORMAT_NAME: &str = "acyclic-parity-orientation";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format: String,
    version: u32,
    vertices: Vec<VertexRecord>,
    #[serde(default)]
    edges: Vec<[u32; 2]>,
    #[serde(default)]
    arcs: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rotation: Option<BTreeMap<u32, Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<SourceSection>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default)]
    in_t: bool,
}

/// The formula an artifact was built from, with its incidence rotation.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceSection {
    variables: usize,
    clauses: Vec<[i64; 3]>,
    rotation: BTreeMap<String, Vec<String>>,
}

/// Optional sections of an instance document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceExtras {
    pub rotation: Option<RotationSystem<VertexId>>,
    pub labels: BTreeMap<VertexId, String>,
    pub source: Option<PlanarFormula>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedInstance {
    pub problem: OrientationProblem,
    pub extras: InstanceExtras,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReadOptions {
    /// Replace each repeated undirected edge by a single edge when it occurs
    /// an odd number of times, and drop it when even. Repeated arcs are
    /// still rejected.
    pub normalize_multi: bool,
}

fn pair(p: [u32; 2]) -> (VertexId, VertexId) {
    (VertexId(p[0]), VertexId(p[1]))
}

fn merge_multi_edges(edges: Vec<(VertexId, VertexId)>) -> Vec<(VertexId, VertexId)> {
    let mut counts: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (a, b) in edges {
        *counts.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    counts.into_iter().filter(|&(_, c)| c % 2 == 1).map(|(p, _)| p).collect()
}

pub fn read_instance(text: &str, options: ReadOptions) -> Result<LoadedInstance, IoError> {
    let doc: Document = serde_json::from_str(text)?;
    if doc.format != FORMAT_NAME {
        return Err(IoError::Format(format!("format {:?}, expected {FORMAT_NAME:?}", doc.format)));
    }
    if doc.version != FORMAT_VERSION {
        return Err(IoError::Format(format!("version {}, expected {FORMAT_VERSION}", doc.version)));
    }
    let mut ids = BTreeSet::new();
    for r in &doc.vertices {
        if !ids.insert(r.id) {
            return Err(IoError::Format(format!("vertex {} listed twice", r.id)));
        }
    }
    let mut edges: Vec<_> = doc.edges.iter().copied().map(pair).collect();
    if options.normalize_multi {
        edges = merge_multi_edges(edges);
    }
    let graph = PartiallyDirectedGraph::new(
        doc.vertices.iter().map(|r| VertexId(r.id)),
        edges,
        doc.arcs.iter().copied().map(pair),
    )?;
    let problem = OrientationProblem::new(graph, doc.vertices.iter().filter(|r| r.in_t).map(|r| VertexId(r.id)))?;
    let rotation = match doc.rotation {
        None => None,
        Some(orders) => {
            if let Some(v) = orders.iter().flat_map(|(v, o)| std::iter::once(v).chain(o)).find(|v| !ids.contains(v)) {
                return Err(IoError::Format(format!("rotation mentions unknown vertex {v}")));
            }
            Some(RotationSystem::new(
                orders.into_iter().map(|(v, o)| (VertexId(v), o.into_iter().map(VertexId).collect())).collect(),
            ))
        }
    };
    let labels = doc.vertices.iter().filter_map(|r| Some((VertexId(r.id), r.label.clone()?))).collect();
    let source = doc.source.map(source_from_section).transpose()?;
    Ok(LoadedInstance { problem, extras: InstanceExtras { rotation, labels, source } })
}

fn source_from_section(s: SourceSection) -> Result<PlanarFormula, IoError> {
    let lit = |v: i64| Literal::from_dimacs(v).ok_or_else(|| IoError::Format("literal 0 in source clause".into()));
    let clauses = s
        .clauses
        .iter()
        .map(|c| Ok([lit(c[0])?, lit(c[1])?, lit(c[2])?]))
        .collect::<Result<Vec<_>, IoError>>()?;
    let formula = Formula::new(s.variables, clauses)?;
    let node = |t: &str| t.parse::<IncidenceNode>().map_err(IoError::Format);
    let mut orders = BTreeMap::new();
    for (v, order) in &s.rotation {
        orders.insert(node(v)?, order.iter().map(|t| node(t)).collect::<Result<_, _>>()?);
    }
    Ok(PlanarFormula::new(formula, RotationSystem::new(orders))?)
}

fn section_from_source(p: &PlanarFormula) -> SourceSection {
    SourceSection {
        variables: p.formula().variable_count(),
        clauses: p.formula().clauses().iter().map(|c| c.map(Literal::to_dimacs)).collect(),
        rotation: p
            .rotation()
            .orders()
            .iter()
            .map(|(v, o)| (v.to_string(), o.iter().map(ToString::to_string).collect()))
            .collect(),
    }
}

/// Canonical text: vertices by id, links in sorted order, one record per
/// line. Equal inputs give identical bytes.
pub fn write_instance(problem: &OrientationProblem, extras: &InstanceExtras) -> String {
    let g = problem.graph();
    let doc = Document {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        vertices: g
            .vertices()
            .iter()
            .map(|&v| VertexRecord { id: v.0, label: extras.labels.get(&v).cloned(), in_t: problem.is_odd(v) })
            .collect(),
        edges: g.edges().iter().map(|e| [e.lo().0, e.hi().0]).collect(),
        arcs: g.arcs().iter().map(|a| [a.tail.0, a.head.0]).collect(),
        rotation: extras
            .rotation
            .as_ref()
            .map(|r| r.orders().iter().map(|(v, o)| (v.0, o.iter().map(|u| u.0).collect())).collect()),
        source: extras.source.as_ref().map(section_from_source),
    };
    layout(&doc)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("documents always serialize")
}

fn list<T: Serialize>(out: &mut String, key: &str, items: impl ExactSizeIterator<Item = T>) {
    let n = items.len();
    if n == 0 {
        let _ = write!(out, "  {}: []", json(key));
        return;
    }
    let _ = writeln!(out, "  {}: [", json(key));
    for (i, item) in items.enumerate() {
        let _ = writeln!(out, "    {}{}", json(&item), if i + 1 < n { "," } else { "" });
    }
    out.push_str("  ]");
}

fn layout(doc: &Document) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"format\": {},", json(&doc.format));
    let _ = writeln!(out, "  \"version\": {},", doc.version);
    list(&mut out, "vertices", doc.vertices.iter());
    out.push_str(",\n");
    list(&mut out, "edges", doc.edges.iter());
    out.push_str(",\n");
    list(&mut out, "arcs", doc.arcs.iter());
    if let Some(rot) = &doc.rotation {
        out.push_str(",\n  \"rotation\": {");
        for (i, (v, order)) in rot.iter().enumerate() {
            let _ = write!(out, "{}\n    \"{}\": {}", if i > 0 { "," } else { "" }, v, json(order));
        }
        out.push_str(if rot.is_empty() { "}" } else { "\n  }" });
    }
    if let Some(src) = &doc.source {
        let _ = write!(out, ",\n  \"source\": {}", json(src));
    }
    out.push_str("\n}\n");
    out
}

pub fn write_artifact(artifact: &ReductionArtifact) -> String {
    let extras = InstanceExtras {
        rotation: Some(artifact.rotation.clone()),
        labels: artifact.registry.iter().map(|(v, l)| (v, l.to_string())).collect(),
        source: Some(artifact.source.clone()),
    };
    write_instance(&artifact.problem, &extras)
}

/// Reads a document written by [`write_artifact`]: rotation, labels and
/// source are all required.
pub fn read_artifact(text: &str) -> Result<ReductionArtifact, IoError> {
    let loaded = read_instance(text, ReadOptions::default())?;
    let rotation = loaded.extras.rotation.ok_or_else(|| IoError::Format("artifact needs a rotation section".into()))?;
    let source = loaded.extras.source.ok_or_else(|| IoError::Format("artifact needs a source section".into()))?;
    let pairs = loaded
        .extras
        .labels
        .iter()
        .map(|(&v, l)| Ok((v, l.parse::<GadgetLabel>()?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    let registry = GadgetRegistry::from_pairs(pairs)?;
    Ok(ReductionArtifact { problem: loaded.problem, registry, rotation, source })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessDocument {
    arcs: Vec<[u32; 2]>,
}

pub fn write_witness(orientation: &Orientation) -> String {
    let doc = WitnessDocument { arcs: orientation.arcs().iter().map(|a| [a.tail.0, a.head.0]).collect() };
    let mut out = String::from("{\n");
    list(&mut out, "arcs", doc.arcs.iter());
    out.push_str("\n}\n");
    out
}

pub fn read_witness(text: &str, graph: &PartiallyDirectedGraph) -> Result<Orientation, IoError> {
    let doc: WitnessDocument = serde_json::from_str(text)?;
    let arcs = doc.arcs.iter().map(|&[t, h]| crate::pdgraph::Arc::new(VertexId(t), VertexId(h)));
    Ok(Orientation::new(graph, arcs)?)
}
