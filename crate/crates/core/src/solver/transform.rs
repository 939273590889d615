//! Instance transforms: the apex construction for undirected instances and
//! the reduction of an instance to one with an empty odd set.

use std::collections::{BTreeMap, BTreeSet};

use super::SolveError;
use crate::pdgraph::{Arc, Link, Orientation, OrientationProblem, PartiallyDirectedGraph, VertexId};

/// How to read the target odd set of the apex construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ApexReading {
    /// The new apex is the only vertex allowed even in-degree.
    #[default]
    NewApex,
    /// One instance per original vertex `v`, in which `v` is the only even
    /// vertex and the apex must be odd. Feasible if any of them is.
    EachOriginalVertex,
}

/// Adds a vertex joined by an edge to every vertex outside T. The returned
/// instance asks for every original vertex to be odd.
pub fn apex_transform(problem: &OrientationProblem) -> Result<OrientationProblem, SolveError> {
    let (graph, _) = apex_graph(problem)?;
    let odd = problem.graph().vertices().clone();
    Ok(OrientationProblem::new(graph, odd).expect("odd set is inside the graph"))
}

/// All instances of the chosen reading; the original is feasible iff one of
/// them is.
pub fn apex_candidates(
    problem: &OrientationProblem,
    reading: ApexReading,
) -> Result<Vec<OrientationProblem>, SolveError> {
    match reading {
        ApexReading::NewApex => Ok(vec![apex_transform(problem)?]),
        ApexReading::EachOriginalVertex => {
            let (graph, apex) = apex_graph(problem)?;
            Ok(problem
                .graph()
                .vertices()
                .iter()
                .map(|&even| {
                    let odd = graph.vertices().iter().copied().filter(|&w| w != even);
                    OrientationProblem::new(graph.clone(), odd).expect("odd set is inside the graph")
                })
                .inspect(|p| debug_assert!(p.is_odd(apex)))
                .collect())
        }
    }
}

fn apex_graph(problem: &OrientationProblem) -> Result<(PartiallyDirectedGraph, VertexId), SolveError> {
    let g = problem.graph();
    if !g.arcs().is_empty() {
        return Err(SolveError::Precondition("apex transform needs an undirected graph".into()));
    }
    let apex = g.next_vertex_id();
    let vertices = g.vertices().iter().copied().chain([apex]);
    let edges = g
        .edges()
        .iter()
        .map(|e| e.endpoints())
        .chain(g.vertices().iter().filter(|v| !problem.is_odd(**v)).map(|&v| (apex, v)));
    Ok((PartiallyDirectedGraph::new(vertices, edges, [])?, apex))
}

/// One contracted odd vertex of degree 2 and the link that replaced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub vertex: VertexId,
    pub ends: (VertexId, VertexId),
    pub merged: Link,
}

/// Turns witnesses of a normalized instance back into witnesses of the
/// original one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationMap {
    original: OrientationProblem,
    contracted: PartiallyDirectedGraph,
    steps: Vec<Contraction>,
}

impl NormalizationMap {
    pub fn steps(&self) -> &[Contraction] {
        &self.steps
    }

    /// The contracted graph before arcs were reversed.
    pub fn contracted(&self) -> &PartiallyDirectedGraph {
        &self.contracted
    }

    pub fn back_map(&self, normalized_witness: &Orientation) -> Result<Orientation, SolveError> {
        let mut arcs: BTreeSet<Arc> = normalized_witness.flipped().into_arcs();
        for step in self.steps.iter().rev() {
            let (a, b) = step.ends;
            let through = if arcs.remove(&Arc::new(a, b)) {
                (a, b)
            } else if arcs.remove(&Arc::new(b, a)) {
                (b, a)
            } else {
                return Err(SolveError::Precondition(format!(
                    "witness does not orient merged link {a}–{b}"
                )));
            };
            arcs.insert(Arc::new(through.0, step.vertex));
            arcs.insert(Arc::new(step.vertex, through.1));
        }
        Orientation::new(self.original.graph(), arcs)
            .map_err(|e| SolveError::Precondition(format!("back-mapped witness is not an orientation: {e}")))
    }
}

/// Contracts every odd vertex of degree 2 into a single link between its
/// neighbors, then reverses all arcs. When the contracted instance has odd
/// set equal to its odd-degree vertices, flipping maps its T-odd
/// orientations onto the empty-odd-set orientations of the reversed graph,
/// so the returned instance has an empty odd set and the same answer.
pub fn normalize_empty_t(
    problem: &OrientationProblem,
) -> Result<(OrientationProblem, NormalizationMap), SolveError> {
    let g = problem.graph();
    let mut vertices: BTreeSet<VertexId> = g.vertices().clone();
    let mut adj: BTreeMap<VertexId, BTreeMap<VertexId, Link>> = g
        .vertices()
        .iter()
        .map(|&v| (v, g.incident(v).iter().map(|l| (l.other(v), *l)).collect()))
        .collect();
    let mut odd: BTreeSet<VertexId> = problem.odd_set().clone();
    let mut steps = Vec::new();
    let candidates: Vec<VertexId> = odd.iter().copied().filter(|&v| g.degree(v) == 2).collect();
    for v in candidates {
        let pair: Vec<(VertexId, Link)> = adj[&v].iter().map(|(&w, &l)| (w, l)).collect();
        let [(a, la), (b, lb)] = pair[..] else { continue };
        let blocked = |reason: &str| SolveError::NormalizationBlocked { vertex: v, reason: reason.into() };
        if adj[&a].contains_key(&b) {
            return Err(blocked("its neighbors are already linked"));
        }
        // Odd in-degree on two links: exactly one points in.
        let into_v = |l: Link| match l {
            Link::Arc(arc) => Some(arc.head == v),
            Link::Edge(_) => None,
        };
        let merged = match (into_v(la), into_v(lb)) {
            (None, None) => Link::Edge(crate::pdgraph::Edge::new(a, b)),
            (Some(true), Some(true)) | (Some(false), Some(false)) => {
                return Err(blocked("both arcs point the same way at it"));
            }
            (Some(true), _) | (_, Some(false)) => Link::Arc(Arc::new(a, b)),
            (Some(false), _) | (_, Some(true)) => Link::Arc(Arc::new(b, a)),
        };
        adj.get_mut(&a).unwrap().remove(&v);
        adj.get_mut(&b).unwrap().remove(&v);
        adj.get_mut(&a).unwrap().insert(b, merged);
        adj.get_mut(&b).unwrap().insert(a, merged);
        adj.remove(&v);
        vertices.remove(&v);
        odd.remove(&v);
        steps.push(Contraction { vertex: v, ends: (a, b), merged });
    }
    if let Some((&v, _)) = adj.iter().find(|(v, nb)| (nb.len() % 2 == 1) != odd.contains(v)) {
        return Err(SolveError::NormalizationBlocked {
            vertex: v,
            reason: "degree parity does not match membership in the odd set".into(),
        });
    }
    let links: BTreeSet<Link> = adj.values().flat_map(|nb| nb.values().copied()).collect();
    let (edges, arcs): (Vec<Link>, Vec<Link>) = links.into_iter().partition(|l| matches!(l, Link::Edge(_)));
    let contracted = PartiallyDirectedGraph::new(
        vertices,
        edges.iter().map(Link::endpoints),
        arcs.iter().map(Link::endpoints),
    )?;
    let normalized = OrientationProblem::new(contracted.reversed(), []).expect("empty odd set");
    let map = NormalizationMap { original: problem.clone(), contracted, steps };
    Ok((normalized, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdgraph::Edge;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn apex_on_single_vertex() {
        let g = PartiallyDirectedGraph::new([v(0)], [], []).unwrap();
        let p = OrientationProblem::new(g, []).unwrap();
        let q = apex_transform(&p).unwrap();
        assert_eq!(q.graph().edges(), &BTreeSet::from([Edge::new(v(0), v(1))]));
        assert_eq!(q.odd_set(), &BTreeSet::from([v(0)]));
    }

    #[test]
    fn apex_with_full_t_is_isolated() {
        let g = PartiallyDirectedGraph::new([v(0), v(1)], [(v(0), v(1))], []).unwrap();
        let p = OrientationProblem::new(g, [v(0), v(1)]).unwrap();
        let q = apex_transform(&p).unwrap();
        assert_eq!(q.graph().degree(v(2)), 0);
        assert_eq!(q.graph().edges().len(), 1);
    }

    #[test]
    fn apex_rejects_arcs() {
        let g = PartiallyDirectedGraph::new([v(0), v(1)], [], [(v(0), v(1))]).unwrap();
        let p = OrientationProblem::new(g, []).unwrap();
        assert!(matches!(apex_transform(&p), Err(SolveError::Precondition(_))));
    }

    /// K4 on 0..4 with the link 0–1 subdivided by vertex 4.
    fn subdivided_k4(first: (u32, u32), second: (u32, u32), as_arcs: bool) -> OrientationProblem {
        let mut edges: Vec<(VertexId, VertexId)> =
            [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].iter().map(|&(a, b)| (v(a), v(b))).collect();
        let mut arcs = Vec::new();
        let pieces = [(v(first.0), v(first.1)), (v(second.0), v(second.1))];
        if as_arcs {
            arcs.extend(pieces);
        } else {
            edges.extend(pieces);
        }
        let g = PartiallyDirectedGraph::new((0..5).map(v), edges, arcs).unwrap();
        OrientationProblem::new(g, (0..5).map(v)).unwrap()
    }

    #[test]
    fn edge_pair_contracts_to_edge() {
        let (q, map) = normalize_empty_t(&subdivided_k4((0, 4), (4, 1), false)).unwrap();
        assert_eq!(map.steps().len(), 1);
        assert_eq!(map.steps()[0].merged, Link::Edge(Edge::new(v(0), v(1))));
        assert!(q.odd_set().is_empty());
        assert_eq!(q.graph().edges().len(), 6);
    }

    #[test]
    fn arcs_through_vertex_compose() {
        let (q, map) = normalize_empty_t(&subdivided_k4((0, 4), (4, 1), true)).unwrap();
        assert_eq!(map.steps()[0].merged, Link::Arc(Arc::new(v(0), v(1))));
        assert!(map.contracted().arcs().contains(&Arc::new(v(0), v(1))));
        // The normalized instance is the reversed graph.
        assert!(q.graph().arcs().contains(&Arc::new(v(1), v(0))));
    }

    #[test]
    fn colliding_arcs_block() {
        let err = normalize_empty_t(&subdivided_k4((0, 4), (1, 4), true)).unwrap_err();
        assert!(matches!(err, SolveError::NormalizationBlocked { vertex, .. } if vertex == v(4)));
    }

    #[test]
    fn existing_link_blocks() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4)].map(|(a, b)| (v(a), v(b)));
        let g = PartiallyDirectedGraph::new((0..5).map(v), edges, []).unwrap();
        let p = OrientationProblem::new(g, (0..5).map(v)).unwrap();
        let err = normalize_empty_t(&p).unwrap_err();
        assert!(matches!(err, SolveError::NormalizationBlocked { vertex, .. } if vertex == v(4)));
    }

    #[test]
    fn back_map_restores_original_witness() {
        // With every vertex odd there is no valid source, so add vertex 5 on
        // 2 and 3 and leave 2, 3, 5 even.
        let edges = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (2, 5), (3, 5)].map(|(a, b)| (v(a), v(b)));
        let g = PartiallyDirectedGraph::new((0..6).map(v), edges, [(v(0), v(4)), (v(4), v(1))]).unwrap();
        let p = OrientationProblem::new(g, [v(0), v(1), v(4)]).unwrap();
        let (q, map) = normalize_empty_t(&p).unwrap();
        let witness = match crate::solver::decide(&q).status {
            crate::solver::SolveStatus::Feasible(o) => o,
            other => panic!("{other:?}"),
        };
        let back = map.back_map(&witness).unwrap();
        let all = p.graph().vertices().clone();
        assert!(crate::pdgraph::is_t_odd_on(&p, &back, &all));
        assert!(crate::pdgraph::is_acyclic(back.arcs()).is_acyclic());
    }
}
