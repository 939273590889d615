use std::collections::{BTreeMap, BTreeSet};

use crate::pdgraph::{Arc, Orientation, OrientationProblem, VertexId};

/// Index-based view of a problem. Dense indices follow ascending vertex id,
/// so for every edge `(lo, hi)` we have `lo < hi`.
pub(crate) struct Dense {
    pub ids: Vec<VertexId>,
    pub edges: Vec<(usize, usize)>,
    pub arcs: Vec<(usize, usize)>,
    /// Required in-degree parity (`true` = odd); `None` leaves a vertex free.
    pub demand: Vec<Option<bool>>,
}

impl Dense {
    pub fn new(problem: &OrientationProblem, scope: Option<&BTreeSet<VertexId>>) -> Self {
        let g = problem.graph();
        let ids: Vec<VertexId> = g.vertices().iter().copied().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = g.edges().iter().map(|e| (index[&e.lo()], index[&e.hi()])).collect();
        let arcs = g.arcs().iter().map(|a| (index[&a.tail], index[&a.head])).collect();
        let demand = ids
            .iter()
            .map(|v| match scope {
                Some(s) if !s.contains(v) => None,
                _ => Some(problem.is_odd(*v)),
            })
            .collect();
        Dense { ids, edges, arcs, demand }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    /// `up[i]` directs edge `i` from its lower to its higher vertex.
    pub fn arcs_for(&self, up: impl Fn(usize) -> bool) -> BTreeSet<Arc> {
        let mut out: BTreeSet<Arc> =
            self.arcs.iter().map(|&(t, h)| Arc::new(self.ids[t], self.ids[h])).collect();
        for (i, &(lo, hi)) in self.edges.iter().enumerate() {
            let (t, h) = if up(i) { (lo, hi) } else { (hi, lo) };
            out.insert(Arc::new(self.ids[t], self.ids[h]));
        }
        out
    }

    pub fn orientation_for(&self, problem: &OrientationProblem, up: impl Fn(usize) -> bool) -> Orientation {
        Orientation::new(problem.graph(), self.arcs_for(up)).expect("dense orientation covers every link")
    }
}
