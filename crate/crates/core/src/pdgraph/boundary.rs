use std::collections::BTreeSet;

use super::{Arc, Edge, GraphError, Link, Orientation, PartiallyDirectedGraph, VertexId};

/// The links leaving a vertex set X, split into undirected edges, arcs
/// pointing out of X and arcs pointing into X.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundaryView {
    pub edge_boundary: BTreeSet<Edge>,
    pub out_arcs: BTreeSet<Arc>,
    pub in_arcs: BTreeSet<Arc>,
}

impl BoundaryView {
    pub fn len(&self) -> usize {
        self.edge_boundary.len() + self.out_arcs.len() + self.in_arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_uniform(&self) -> bool {
        is_uniform(self)
    }
}

/// Uniform: no undirected edge, and the arcs all point the same way.
pub fn is_uniform(boundary: &BoundaryView) -> bool {
    boundary.edge_boundary.is_empty() && (boundary.out_arcs.is_empty() || boundary.in_arcs.is_empty())
}

fn check_subset(graph: &PartiallyDirectedGraph, x: &BTreeSet<VertexId>) -> Result<(), GraphError> {
    match x.iter().find(|v| !graph.contains_vertex(**v)) {
        Some(&v) => Err(GraphError::UnknownVertex(v)),
        None => Ok(()),
    }
}

/// Links with exactly one endpoint in `x`. With an orientation, edges are
/// classified by their direction under it and `edge_boundary` is empty.
pub fn boundary(
    graph: &PartiallyDirectedGraph,
    x: &BTreeSet<VertexId>,
    orientation: Option<&Orientation>,
) -> Result<BoundaryView, GraphError> {
    check_subset(graph, x)?;
    let mut view = BoundaryView::default();
    for link in graph.links() {
        let (a, b) = link.endpoints();
        if x.contains(&a) == x.contains(&b) {
            continue;
        }
        let arc = match (link, orientation) {
            (Link::Arc(arc), _) => arc,
            (Link::Edge(e), Some(o)) => o.direction_of(a, b).ok_or(GraphError::UnknownLink(Link::Edge(e)))?,
            (Link::Edge(e), None) => {
                view.edge_boundary.insert(e);
                continue;
            }
        };
        if x.contains(&arc.tail) {
            view.out_arcs.insert(arc);
        } else {
            view.in_arcs.insert(arc);
        }
    }
    Ok(view)
}

/// The subgraph formed by the links inside `h` and its boundary links,
/// including the outside endpoints of the boundary.
pub fn subgraph_with_boundary(
    graph: &PartiallyDirectedGraph,
    h: &BTreeSet<VertexId>,
) -> Result<PartiallyDirectedGraph, GraphError> {
    check_subset(graph, h)?;
    let mut vertices = h.clone();
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for link in graph.links() {
        let (a, b) = link.endpoints();
        if !h.contains(&a) && !h.contains(&b) {
            continue;
        }
        vertices.insert(a);
        vertices.insert(b);
        match link {
            Link::Edge(_) => edges.push((a, b)),
            Link::Arc(_) => arcs.push((a, b)),
        }
    }
    PartiallyDirectedGraph::new(vertices, edges, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn undirected_triangle_boundary() {
        let g = PartiallyDirectedGraph::new((0..3).map(v), [(v(0), v(1)), (v(1), v(2)), (v(0), v(2))], []).unwrap();
        let b = boundary(&g, &[v(0)].into(), None).unwrap();
        assert_eq!(b.edge_boundary.len(), 2);
        assert!(b.out_arcs.is_empty() && b.in_arcs.is_empty());
        assert!(!is_uniform(&b));
    }

    #[test]
    fn single_arc_boundary() {
        let g = PartiallyDirectedGraph::new([v(0), v(1)], [], [(v(0), v(1))]).unwrap();
        let b = boundary(&g, &[v(0)].into(), None).unwrap();
        assert_eq!(b.out_arcs, BTreeSet::from([Arc::new(v(0), v(1))]));
        assert!(b.in_arcs.is_empty());
        assert!(is_uniform(&b));
        assert_eq!(boundary(&g, &[v(9)].into(), None).unwrap_err(), GraphError::UnknownVertex(v(9)));
    }

    #[test]
    fn uniformity_cases() {
        let e = Edge::new(v(0), v(1));
        let only_out = BoundaryView { out_arcs: [Arc::new(v(0), v(1))].into(), ..Default::default() };
        let only_edge = BoundaryView { edge_boundary: [e].into(), ..Default::default() };
        assert!(is_uniform(&only_out));
        assert!(!is_uniform(&only_edge));
        assert!(is_uniform(&BoundaryView::default()));
    }

    #[test]
    fn subgraph_of_isolated_vertex() {
        let g = PartiallyDirectedGraph::new([v(0), v(1), v(2)], [(v(1), v(2))], []).unwrap();
        let sub = subgraph_with_boundary(&g, &[v(0)].into()).unwrap();
        assert_eq!(sub.vertices(), &BTreeSet::from([v(0)]));
        assert_eq!(sub.link_count(), 0);
    }

    #[test]
    fn subgraph_keeps_boundary_endpoints() {
        let g = PartiallyDirectedGraph::new((0..4).map(v), [(v(0), v(1)), (v(2), v(3))], [(v(1), v(2))]).unwrap();
        let sub = subgraph_with_boundary(&g, &[v(0), v(1)].into()).unwrap();
        assert_eq!(sub.vertices(), &BTreeSet::from([v(0), v(1), v(2)]));
        assert_eq!(sub.edges().len(), 1);
        assert_eq!(sub.arcs().len(), 1);
    }
}
