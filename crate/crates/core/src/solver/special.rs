//! Polynomial cases: forests (unique T-odd orientation by leaf peeling) and
//! graphs of maximum degree 2 (paths plus cycles with two candidates each).

use std::collections::{BTreeMap, BTreeSet};

use super::{Infeasibility, Method, SolveError, SolveResult, SolveStats, SolveStatus};
use crate::pdgraph::{Arc, Orientation, OrientationProblem, PartiallyDirectedGraph, VertexId};

pub fn solve_tree(problem: &OrientationProblem) -> Result<SolveResult, SolveError> {
    if !problem.graph().is_forest() {
        return Err(SolveError::Precondition("underlying graph is not a forest".into()));
    }
    let mut stats = SolveStats::default();
    let status = match peel_forest(problem.graph(), problem, &mut stats) {
        Err(reason) => SolveStatus::Infeasible(reason),
        Ok(arcs) => finish(problem, arcs),
    };
    Ok(SolveResult { status, stats, method: Method::Tree })
}

fn finish(problem: &OrientationProblem, arcs: BTreeSet<Arc>) -> SolveStatus {
    if problem.graph().arcs().iter().any(|a| !arcs.contains(a)) {
        return SolveStatus::Infeasible(Infeasibility::FixedArcConflict);
    }
    SolveStatus::Feasible(Orientation::new(problem.graph(), arcs).expect("peeling directs every link"))
}

/// Directs every link of the forest `graph` (arcs read as edges) so that
/// each vertex meets its parity demand, or reports a component whose
/// parity cannot be met.
fn peel_forest(
    graph: &PartiallyDirectedGraph,
    problem: &OrientationProblem,
    stats: &mut SolveStats,
) -> Result<BTreeSet<Arc>, Infeasibility> {
    let mut owed: BTreeMap<VertexId, bool> = graph.vertices().iter().map(|&v| (v, problem.is_odd(v))).collect();
    let mut nbrs: BTreeMap<VertexId, BTreeSet<VertexId>> =
        graph.vertices().iter().map(|&v| (v, graph.neighbors(v).collect())).collect();
    if nbrs.iter().any(|(v, n)| n.is_empty() && owed[v]) {
        return Err(Infeasibility::Parity);
    }
    let mut leaves: BTreeSet<VertexId> = nbrs.iter().filter(|(_, n)| n.len() == 1).map(|(&v, _)| v).collect();
    let mut arcs = BTreeSet::new();
    while let Some(leaf) = leaves.pop_first() {
        let Some(&inner) = nbrs[&leaf].iter().next() else { continue };
        stats.propagations += 1;
        if owed[&leaf] {
            arcs.insert(Arc::new(inner, leaf));
        } else {
            arcs.insert(Arc::new(leaf, inner));
            *owed.get_mut(&inner).unwrap() ^= true;
        }
        *owed.get_mut(&leaf).unwrap() = false;
        nbrs.get_mut(&leaf).unwrap().clear();
        let rest = nbrs.get_mut(&inner).unwrap();
        rest.remove(&leaf);
        match rest.len() {
            0 if owed[&inner] => return Err(Infeasibility::Parity),
            0 => {
                leaves.remove(&inner);
            }
            1 => {
                leaves.insert(inner);
            }
            _ => {}
        }
    }
    Ok(arcs)
}

pub fn solve_degree_two(problem: &OrientationProblem) -> Result<SolveResult, SolveError> {
    let graph = problem.graph();
    if graph.max_degree() > 2 {
        return Err(SolveError::Precondition("a vertex has degree above 2".into()));
    }
    let mut stats = SolveStats::default();
    let mut path_vertices = BTreeSet::new();
    let mut cycles = Vec::new();
    for comp in graph.components() {
        let links: usize = comp.iter().map(|&v| graph.degree(v)).sum::<usize>() / 2;
        if links == comp.len() {
            cycles.push(comp);
        } else {
            path_vertices.extend(comp);
        }
    }
    let mut arcs = match peel_forest(&graph.induced(&path_vertices), problem, &mut stats) {
        Ok(arcs) => arcs,
        Err(reason) => return Ok(infeasible(reason, stats)),
    };
    for comp in cycles {
        match orient_cycle(graph, problem, comp[0], &mut stats) {
            Ok(found) => arcs.extend(found),
            Err(reason) => return Ok(infeasible(reason, stats)),
        }
    }
    Ok(SolveResult { status: finish(problem, arcs), stats, method: Method::DegreeTwo })
}

fn infeasible(reason: Infeasibility, stats: SolveStats) -> SolveResult {
    SolveResult { status: SolveStatus::Infeasible(reason), stats, method: Method::DegreeTwo }
}

/// Walks the cycle through `start`, toward its smaller neighbor first.
fn cycle_order(graph: &PartiallyDirectedGraph, start: VertexId) -> Vec<VertexId> {
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = graph.neighbors(start).min().expect("cycle vertex has neighbors");
    while cur != start {
        order.push(cur);
        let next = graph.neighbors(cur).find(|&w| w != prev).expect("cycle vertex has two neighbors");
        prev = cur;
        cur = next;
    }
    order
}

/// Both T-odd orientations of a cycle component, filtered by the fixed arcs
/// and by acyclicity. Returns the first survivor.
fn orient_cycle(
    graph: &PartiallyDirectedGraph,
    problem: &OrientationProblem,
    start: VertexId,
    stats: &mut SolveStats,
) -> Result<BTreeSet<Arc>, Infeasibility> {
    let order = cycle_order(graph, start);
    let len = order.len();
    let link_arc = |i: usize, forward: bool| {
        let (a, b) = (order[i], order[(i + 1) % len]);
        if forward {
            Arc::new(a, b)
        } else {
            Arc::new(b, a)
        }
    };
    let mut reason = Infeasibility::Parity;
    // forward[i]: link i points from order[i] to order[i + 1]. Starting with
    // forward = false points the first link at `start`, the smaller end.
    for first in [false, true] {
        stats.enumerated += 1;
        let mut forward = vec![first; len];
        for i in 1..len {
            let owed = problem.is_odd(order[i]);
            forward[i] = !(owed ^ forward[i - 1]);
        }
        let closes = (forward[len - 1] as u8 + !forward[0] as u8) % 2 == problem.is_odd(order[0]) as u8;
        if !closes {
            continue;
        }
        let arcs: BTreeSet<Arc> = (0..len).map(|i| link_arc(i, forward[i])).collect();
        if graph.arcs().iter().any(|a| order.contains(&a.tail) && !arcs.contains(a)) {
            reason = Infeasibility::FixedArcConflict;
            continue;
        }
        if forward.iter().all(|&f| f == forward[0]) {
            if reason == Infeasibility::Parity {
                reason = Infeasibility::Cyclic;
            }
            continue;
        }
        return Ok(arcs);
    }
    Err(reason)
}
