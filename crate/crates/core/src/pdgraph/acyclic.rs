use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use super::{Arc, VertexId};

/// Outcome of an acyclicity test, with a witness either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    /// Topological order of every vertex touched by an arc; ties broken by
    /// ascending id.
    Acyclic { order: Vec<VertexId> },
    /// Vertices of a directed cycle `c0 -> c1 -> ... -> c0`, starting at its
    /// smallest vertex.
    Cyclic { cycle: Vec<VertexId> },
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic { .. })
    }

    /// Re-checks the witness against `arcs`.
    pub fn verify<'a>(&self, arcs: impl IntoIterator<Item = &'a Arc>) -> bool {
        let arcs: BTreeSet<Arc> = arcs.into_iter().copied().collect();
        match self {
            Acyclicity::Acyclic { order } => {
                let pos: BTreeMap<VertexId, usize> =
                    order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                pos.len() == order.len()
                    && arcs.iter().all(|a| match (pos.get(&a.tail), pos.get(&a.head)) {
                        (Some(t), Some(h)) => t < h,
                        _ => false,
                    })
            }
            Acyclicity::Cyclic { cycle } => {
                !cycle.is_empty()
                    && cycle.iter().collect::<BTreeSet<_>>().len() == cycle.len()
                    && (0..cycle.len())
                        .all(|i| arcs.contains(&Arc::new(cycle[i], cycle[(i + 1) % cycle.len()])))
            }
        }
    }
}

/// Kahn's algorithm over the vertices touched by `arcs`.
pub fn is_acyclic<'a>(arcs: impl IntoIterator<Item = &'a Arc>) -> Acyclicity {
    let mut succ: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut pred: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut indeg: BTreeMap<VertexId, usize> = BTreeMap::new();
    for a in arcs {
        succ.entry(a.tail).or_default().push(a.head);
        pred.entry(a.head).or_default().push(a.tail);
        indeg.entry(a.tail).or_insert(0);
        *indeg.entry(a.head).or_insert(0) += 1;
    }
    let mut ready: BinaryHeap<Reverse<VertexId>> =
        indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| Reverse(v)).collect();
    let mut order = Vec::with_capacity(indeg.len());
    let mut remaining = indeg.clone();
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        remaining.remove(&v);
        for &w in succ.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            let d = remaining.get_mut(&w).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    if remaining.is_empty() {
        return Acyclicity::Acyclic { order };
    }
    // Every leftover vertex keeps a leftover predecessor; walk back until a repeat.
    let mut walk = vec![*remaining.keys().next().unwrap()];
    let mut pos: BTreeMap<VertexId, usize> = BTreeMap::from([(walk[0], 0)]);
    loop {
        let cur = *walk.last().unwrap();
        let prev = pred[&cur]
            .iter()
            .copied()
            .filter(|p| remaining.contains_key(p))
            .min()
            .expect("leftover vertex without leftover predecessor");
        if let Some(&start) = pos.get(&prev) {
            let mut cycle: Vec<VertexId> = walk[start..].to_vec();
            cycle.reverse();
            let min_at = cycle.iter().enumerate().min_by_key(|(_, v)| **v).unwrap().0;
            cycle.rotate_left(min_at);
            return Acyclicity::Cyclic { cycle };
        }
        pos.insert(prev, walk.len());
        walk.push(prev);
    }
}
