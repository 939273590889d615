//! Partially directed graphs: undirected edges plus fixed arcs over opaque
//! vertex ids, orientations extending the arcs, boundary operators and the
//! two predicates every witness must pass (acyclicity and T-oddness).

mod acyclic;
mod boundary;
mod orientation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use acyclic::{is_acyclic, Acyclicity};
pub use boundary::{boundary, subgraph_with_boundary, is_uniform, BoundaryView};
pub use orientation::{flip_all, is_t_odd_on, restrict, Orientation, OrientationError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered pair, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> VertexId {
        self.lo
    }

    pub fn hi(&self) -> VertexId {
        self.hi
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}–{}", self.lo, self.hi)
    }
}

/// Ordered pair `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Arc { tail, head }
    }

    pub fn reversed(&self) -> Self {
        Arc { tail: self.head, head: self.tail }
    }

    pub fn edge(&self) -> Edge {
        Edge::new(self.tail, self.head)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.tail, self.head)
    }
}

/// An edge or an arc of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Link {
    Edge(Edge),
    Arc(Arc),
}

impl Link {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        match self {
            Link::Edge(e) => e.endpoints(),
            Link::Arc(a) => (a.tail, a.head),
        }
    }

    pub fn pair(&self) -> Edge {
        match self {
            Link::Edge(e) => *e,
            Link::Arc(a) => a.edge(),
        }
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        self.pair().other(v)
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Link::Edge(e) => e.fmt(f),
            Link::Arc(a) => a.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Loop { vertex: VertexId },
    Parallel { a: VertexId, b: VertexId },
    Dangling { vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Loop { vertex } => write!(f, "loop at {vertex}"),
            Violation::Parallel { a, b } => write!(f, "parallel link {a}–{b}"),
            Violation::Dangling { vertex } => write!(f, "unknown endpoint {vertex}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("link {0} is not in the graph")]
    UnknownLink(Link),
}

/// Reports loops, parallel links and unknown endpoints in raw graph data.
pub fn validate_parts(
    vertices: &[VertexId],
    edges: &[(VertexId, VertexId)],
    arcs: &[(VertexId, VertexId)],
) -> ValidationReport {
    let known: BTreeSet<VertexId> = vertices.iter().copied().collect();
    let mut report = ValidationReport::default();
    let mut dangling = BTreeSet::new();
    let mut seen_pairs = BTreeSet::new();
    let mut reported_pairs = BTreeSet::new();
    for &(a, b) in edges.iter().chain(arcs.iter()) {
        for v in [a, b] {
            if !known.contains(&v) && dangling.insert(v) {
                report.violations.push(Violation::Dangling { vertex: v });
            }
        }
        if a == b {
            report.violations.push(Violation::Loop { vertex: a });
            continue;
        }
        let pair = Edge::new(a, b);
        if !seen_pairs.insert(pair) && reported_pairs.insert(pair) {
            report.violations.push(Violation::Parallel { a: pair.lo, b: pair.hi });
        }
    }
    report
}

/// A simple partially directed graph. Immutable after construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartiallyDirectedGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
    arcs: BTreeSet<Arc>,
    links: BTreeMap<VertexId, Vec<Link>>,
}

impl PartiallyDirectedGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let vertices: Vec<VertexId> = vertices.into_iter().collect();
        let edges: Vec<(VertexId, VertexId)> = edges.into_iter().collect();
        let arcs: Vec<(VertexId, VertexId)> = arcs.into_iter().collect();
        let report = validate_parts(&vertices, &edges, &arcs);
        if !report.is_empty() {
            return Err(GraphError::Invalid(report));
        }
        Ok(Self::from_checked(
            vertices.into_iter().collect(),
            edges.into_iter().map(|(a, b)| Edge::new(a, b)).collect(),
            arcs.into_iter().map(|(t, h)| Arc::new(t, h)).collect(),
        ))
    }

    fn from_checked(vertices: BTreeSet<VertexId>, edges: BTreeSet<Edge>, arcs: BTreeSet<Arc>) -> Self {
        let mut links: BTreeMap<VertexId, Vec<Link>> =
            vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &edges {
            links.get_mut(&e.lo).unwrap().push(Link::Edge(*e));
            links.get_mut(&e.hi).unwrap().push(Link::Edge(*e));
        }
        for a in &arcs {
            links.get_mut(&a.tail).unwrap().push(Link::Arc(*a));
            links.get_mut(&a.head).unwrap().push(Link::Arc(*a));
        }
        for list in links.values_mut() {
            list.sort();
        }
        PartiallyDirectedGraph { vertices, edges, arcs, links }
    }

    /// Always empty for a constructed graph; kept for symmetry with
    /// [`validate_parts`].
    pub fn validate(&self) -> ValidationReport {
        let vertices: Vec<VertexId> = self.vertices.iter().copied().collect();
        let edges: Vec<_> = self.edges.iter().map(|e| e.endpoints()).collect();
        let arcs: Vec<_> = self.arcs.iter().map(|a| (a.tail, a.head)).collect();
        validate_parts(&vertices, &edges, &arcs)
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn link_count(&self) -> usize {
        self.edges.len() + self.arcs.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_link(&self, link: &Link) -> bool {
        match link {
            Link::Edge(e) => self.edges.contains(e),
            Link::Arc(a) => self.arcs.contains(a),
        }
    }

    /// All edges then all arcs, each in sorted order.
    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.edges
            .iter()
            .map(|e| Link::Edge(*e))
            .chain(self.arcs.iter().map(|a| Link::Arc(*a)))
    }

    /// Links incident to `v`; empty for unknown vertices.
    pub fn incident(&self, v: VertexId) -> &[Link] {
        self.links.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    pub fn max_degree(&self) -> usize {
        self.links.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v).iter().map(move |l| l.other(v))
    }

    /// The link joining `a` and `b`, in either direction.
    pub fn link_between(&self, a: VertexId, b: VertexId) -> Option<Link> {
        self.incident(a).iter().copied().find(|l| l.other(a) == b)
    }

    pub fn next_vertex_id(&self) -> VertexId {
        VertexId(self.vertices.iter().next_back().map_or(0, |v| v.0 + 1))
    }

    /// Same vertices and edges, every fixed arc reversed.
    pub fn reversed(&self) -> Self {
        Self::from_checked(
            self.vertices.clone(),
            self.edges.clone(),
            self.arcs.iter().map(Arc::reversed).collect(),
        )
    }

    pub fn without_link(&self, link: &Link) -> Result<Self, GraphError> {
        if !self.contains_link(link) {
            return Err(GraphError::UnknownLink(*link));
        }
        let mut edges = self.edges.clone();
        let mut arcs = self.arcs.clone();
        match link {
            Link::Edge(e) => edges.remove(e),
            Link::Arc(a) => arcs.remove(a),
        };
        Ok(Self::from_checked(self.vertices.clone(), edges, arcs))
    }

    /// True when the underlying undirected graph (arcs read as edges) has no cycle.
    pub fn is_forest(&self) -> bool {
        let index: BTreeMap<VertexId, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for link in self.links() {
            let (a, b) = link.endpoints();
            let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Self {
        Self::from_checked(
            keep.intersection(&self.vertices).copied().collect(),
            self.edges
                .iter()
                .filter(|e| keep.contains(&e.lo) && keep.contains(&e.hi))
                .copied()
                .collect(),
            self.arcs
                .iter()
                .filter(|a| keep.contains(&a.tail) && keep.contains(&a.head))
                .copied()
                .collect(),
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("odd-set vertex {0} is not in the graph")]
    UnknownOddVertex(VertexId),
}

/// A graph together with the set T of vertices that must get odd in-degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrientationProblem {
    graph: PartiallyDirectedGraph,
    odd_set: BTreeSet<VertexId>,
}

impl OrientationProblem {
    pub fn new(
        graph: PartiallyDirectedGraph,
        odd_set: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self, ProblemError> {
        let odd_set: BTreeSet<VertexId> = odd_set.into_iter().collect();
        if let Some(&v) = odd_set.iter().find(|v| !graph.contains_vertex(**v)) {
            return Err(ProblemError::UnknownOddVertex(v));
        }
        Ok(OrientationProblem { graph, odd_set })
    }

    pub fn graph(&self) -> &PartiallyDirectedGraph {
        &self.graph
    }

    pub fn odd_set(&self) -> &BTreeSet<VertexId> {
        &self.odd_set
    }

    pub fn is_odd(&self, v: VertexId) -> bool {
        self.odd_set.contains(&v)
    }
}

/// Handshake condition: every orientation has in-degree sum |E| + |A|, so a
/// T-odd orientation can only exist when |E| + |A| + |T| is even. For
/// undirected graphs this is the classical existence condition; with fixed
/// arcs it is necessary only.
pub fn parity_feasible(problem: &OrientationProblem) -> bool {
    let g = problem.graph();
    (g.edges().len() + g.arcs().len() + problem.odd_set().len()).is_multiple_of(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn loop_is_reported() {
        let report = validate_parts(&[v(0)], &[(v(0), v(0))], &[]);
        assert_eq!(report.violations, vec![Violation::Loop { vertex: v(0) }]);
        assert_eq!(report.to_string(), "loop at 0");
    }

    #[test]
    fn edge_and_arc_on_same_pair_is_parallel() {
        let report = validate_parts(&[v(0), v(1)], &[(v(0), v(1))], &[(v(0), v(1))]);
        assert_eq!(report.violations, vec![Violation::Parallel { a: v(0), b: v(1) }]);
        assert_eq!(report.to_string(), "parallel link 0–1");
    }

    #[test]
    fn opposite_arcs_are_parallel_and_dangling_is_reported() {
        let report = validate_parts(&[v(0), v(1)], &[], &[(v(0), v(1)), (v(1), v(0)), (v(1), v(7))]);
        assert_eq!(
            report.violations,
            vec![Violation::Parallel { a: v(0), b: v(1) }, Violation::Dangling { vertex: v(7) }]
        );
        assert!(PartiallyDirectedGraph::new([v(0), v(1)], [], [(v(0), v(1)), (v(1), v(0))]).is_err());
    }

    #[test]
    fn parity_examples() {
        let path = PartiallyDirectedGraph::new([v(0), v(1), v(2)], [(v(0), v(1)), (v(1), v(2))], []).unwrap();
        assert!(!parity_feasible(&OrientationProblem::new(path.clone(), [v(1)]).unwrap()));
        assert!(parity_feasible(&OrientationProblem::new(path, [v(0), v(2)]).unwrap()));
        let single = PartiallyDirectedGraph::new([v(0), v(1)], [(v(0), v(1))], []).unwrap();
        assert!(!parity_feasible(&OrientationProblem::new(single, []).unwrap()));
    }

    #[test]
    fn odd_set_must_be_inside_graph() {
        let g = PartiallyDirectedGraph::new([v(0)], [], []).unwrap();
        assert_eq!(
            OrientationProblem::new(g, [v(3)]).unwrap_err(),
            ProblemError::UnknownOddVertex(v(3))
        );
    }

    #[test]
    fn forest_and_components() {
        let g = PartiallyDirectedGraph::new(
            (0..5).map(v),
            [(v(0), v(1)), (v(3), v(4))],
            [(v(1), v(2))],
        )
        .unwrap();
        assert!(g.is_forest());
        assert_eq!(g.components(), vec![vec![v(0), v(1), v(2)], vec![v(3), v(4)]]);
        let tri = PartiallyDirectedGraph::new((0..3).map(v), [(v(0), v(1)), (v(1), v(2))], [(v(2), v(0))]).unwrap();
        assert!(!tri.is_forest());
        assert_eq!(tri.max_degree(), 2);
    }
}
