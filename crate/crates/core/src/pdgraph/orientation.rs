use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Arc, Edge, GraphError, Link, OrientationProblem, PartiallyDirectedGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("edge {0} has no direction")]
    Undirected(Edge),
    #[error("fixed arc {0} is reversed or missing")]
    MissingFixedArc(Arc),
    #[error("arc {0} does not orient any link of the graph")]
    Foreign(Arc),
}

/// A direction for every link of a graph. Two orientations are equal iff
/// their arc sets are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Orientation {
    arcs: BTreeSet<Arc>,
}

impl Orientation {
    /// Checks that `arcs` directs each edge exactly once, contains every
    /// fixed arc, and nothing else.
    pub fn new(
        graph: &PartiallyDirectedGraph,
        arcs: impl IntoIterator<Item = Arc>,
    ) -> Result<Self, OrientationError> {
        let arcs: BTreeSet<Arc> = arcs.into_iter().collect();
        for a in &arcs {
            let fixed = graph.arcs().contains(a);
            if !fixed && !graph.edges().contains(&a.edge()) {
                return Err(OrientationError::Foreign(*a));
            }
        }
        for fixed in graph.arcs() {
            if !arcs.contains(fixed) {
                return Err(OrientationError::MissingFixedArc(*fixed));
            }
        }
        for e in graph.edges() {
            let fwd = arcs.contains(&Arc::new(e.lo(), e.hi()));
            let bwd = arcs.contains(&Arc::new(e.hi(), e.lo()));
            if !(fwd ^ bwd) {
                return Err(OrientationError::Undirected(*e));
            }
        }
        Ok(Orientation { arcs })
    }

    /// Orientation of the graph given one direction per edge.
    pub fn from_edge_directions(
        graph: &PartiallyDirectedGraph,
        mut head_of: impl FnMut(&Edge) -> VertexId,
    ) -> Self {
        let mut arcs: BTreeSet<Arc> = graph.arcs().clone();
        for e in graph.edges() {
            let head = head_of(e);
            arcs.insert(Arc::new(e.other(head), head));
        }
        Orientation { arcs }
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn into_arcs(self) -> BTreeSet<Arc> {
        self.arcs
    }

    pub fn contains(&self, arc: &Arc) -> bool {
        self.arcs.contains(arc)
    }

    /// The arc covering the pair `{a, b}`, if any.
    pub fn direction_of(&self, a: VertexId, b: VertexId) -> Option<Arc> {
        let fwd = Arc::new(a, b);
        if self.arcs.contains(&fwd) {
            Some(fwd)
        } else if self.arcs.contains(&fwd.reversed()) {
            Some(fwd.reversed())
        } else {
            None
        }
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|a| a.head == v).count()
    }

    pub fn in_degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut out = BTreeMap::new();
        for a in &self.arcs {
            *out.entry(a.head).or_insert(0) += 1;
        }
        out
    }

    /// Every arc reversed. The result orients the reversed graph.
    pub fn flipped(&self) -> Self {
        Orientation { arcs: self.arcs.iter().map(Arc::reversed).collect() }
    }
}

pub fn flip_all(orientation: &Orientation) -> Orientation {
    orientation.flipped()
}

/// Whether every vertex of `scope` has odd in-degree exactly when it is in
/// the problem's odd set.
pub fn is_t_odd_on(
    problem: &OrientationProblem,
    orientation: &Orientation,
    scope: &BTreeSet<VertexId>,
) -> bool {
    let indeg = orientation.in_degrees();
    scope
        .iter()
        .all(|v| (indeg.get(v).copied().unwrap_or(0) % 2 == 1) == problem.is_odd(*v))
}

/// The arcs of `orientation` covering the given links.
pub fn restrict(
    graph: &PartiallyDirectedGraph,
    orientation: &Orientation,
    links: impl IntoIterator<Item = Link>,
) -> Result<BTreeSet<Arc>, GraphError> {
    let mut out = BTreeSet::new();
    for link in links {
        if !graph.contains_link(&link) {
            return Err(GraphError::UnknownLink(link));
        }
        let (a, b) = link.endpoints();
        let arc = orientation.direction_of(a, b).ok_or(GraphError::UnknownLink(link))?;
        out.insert(arc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdgraph::is_acyclic;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn single_arc() -> PartiallyDirectedGraph {
        PartiallyDirectedGraph::new([v(0), v(1)], [], [(v(0), v(1))]).unwrap()
    }

    #[test]
    fn t_odd_single_arc() {
        let g = single_arc();
        let o = Orientation::new(&g, [Arc::new(v(0), v(1))]).unwrap();
        let scope: BTreeSet<_> = [v(0), v(1)].into();
        assert!(is_t_odd_on(&OrientationProblem::new(g.clone(), [v(1)]).unwrap(), &o, &scope));
        assert!(!is_t_odd_on(&OrientationProblem::new(g, [v(0)]).unwrap(), &o, &scope));
    }

    #[test]
    fn orientation_must_extend_fixed_arcs() {
        let g = single_arc();
        assert_eq!(
            Orientation::new(&g, [Arc::new(v(1), v(0))]).unwrap_err(),
            OrientationError::Foreign(Arc::new(v(1), v(0)))
        );
        let g = PartiallyDirectedGraph::new([v(0), v(1), v(2)], [(v(1), v(2))], [(v(0), v(1))]).unwrap();
        assert_eq!(
            Orientation::new(&g, [Arc::new(v(0), v(1))]).unwrap_err(),
            OrientationError::Undirected(Edge::new(v(1), v(2)))
        );
        assert_eq!(
            Orientation::new(&g, [Arc::new(v(1), v(2))]).unwrap_err(),
            OrientationError::MissingFixedArc(Arc::new(v(0), v(1)))
        );
    }

    #[test]
    fn flip_single_arc_and_involution() {
        let o = Orientation::new(&single_arc(), [Arc::new(v(0), v(1))]).unwrap();
        assert_eq!(flip_all(&o).arcs(), &BTreeSet::from([Arc::new(v(1), v(0))]));
        assert_eq!(flip_all(&flip_all(&o)), o);
        assert!(is_acyclic(flip_all(&o).arcs()).is_acyclic());
    }

    #[test]
    fn restrict_examples() {
        let g = PartiallyDirectedGraph::new([v(0), v(1), v(2)], [(v(1), v(2))], [(v(0), v(1))]).unwrap();
        let o = Orientation::new(&g, [Arc::new(v(0), v(1)), Arc::new(v(2), v(1))]).unwrap();
        assert!(restrict(&g, &o, []).unwrap().is_empty());
        let e = Link::Edge(Edge::new(v(1), v(2)));
        let a = Link::Arc(Arc::new(v(0), v(1)));
        let mut union = restrict(&g, &o, [e]).unwrap();
        union.extend(restrict(&g, &o, [a]).unwrap());
        assert_eq!(&union, o.arcs());
        let missing = Link::Edge(Edge::new(v(0), v(2)));
        assert_eq!(restrict(&g, &o, [missing]).unwrap_err(), GraphError::UnknownLink(missing));
    }
}
