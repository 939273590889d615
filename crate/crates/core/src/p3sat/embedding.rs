use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A cyclic order of neighbors around every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem<N: Ord> {
    orders: BTreeMap<N, Vec<N>>,
}

impl<N: Ord + Copy> RotationSystem<N> {
    pub fn new(orders: BTreeMap<N, Vec<N>>) -> Self {
        RotationSystem { orders }
    }

    pub fn orders(&self) -> &BTreeMap<N, Vec<N>> {
        &self.orders
    }

    pub fn order(&self, v: N) -> Option<&[N]> {
        self.orders.get(&v).map(Vec::as_slice)
    }

    /// 0-based position of `u` in the order around `v`.
    pub fn index_of(&self, v: N, u: N) -> Option<usize> {
        self.orders.get(&v)?.iter().position(|&w| w == u)
    }

    /// The neighbor following `u` around `v`.
    pub fn successor(&self, v: N, u: N) -> Option<N> {
        let order = self.orders.get(&v)?;
        let i = order.iter().position(|&w| w == u)?;
        Some(order[(i + 1) % order.len()])
    }

    /// Renames every vertex through `f`.
    pub fn map<M: Ord + Copy>(&self, f: impl Fn(N) -> M) -> RotationSystem<M> {
        RotationSystem {
            orders: self.orders.iter().map(|(&v, order)| (f(v), order.iter().map(|&u| f(u)).collect())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError<N: fmt::Display + fmt::Debug> {
    #[error("rotation has no order for vertex {0}")]
    Missing(N),
    #[error("rotation at {0} is not a permutation of its neighbors")]
    NotPermutation(N),
    #[error("rotation mentions vertex {0} which is not in the graph")]
    Foreign(N),
}

/// Face count of one connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentFaces<N> {
    /// Smallest vertex of the component.
    pub first: N,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl<N> ComponentFaces<N> {
    pub fn expected_faces(&self) -> i64 {
        2 - self.vertices as i64 + self.edges as i64
    }

    pub fn is_genus_zero(&self) -> bool {
        self.faces as i64 == self.expected_faces()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport<N> {
    pub components: Vec<ComponentFaces<N>>,
    /// Total number of darts visited by the face walk.
    pub darts: usize,
}

impl<N> EmbeddingReport<N> {
    pub fn is_planar(&self) -> bool {
        self.components.iter().all(ComponentFaces::is_genus_zero)
    }

    pub fn failing_component(&self) -> Option<&ComponentFaces<N>> {
        self.components.iter().find(|c| !c.is_genus_zero())
    }

    pub fn faces(&self) -> usize {
        self.components.iter().map(|c| c.faces).sum()
    }
}

/// Traces the faces of the rotation system and compares each connected
/// component with Euler's formula. From dart `u→v` the walk continues with
/// `v→w`, where `w` follows `u` in the order around `v`. An isolated vertex
/// counts as one face.
pub fn validate_embedding<N>(
    neighbors: &BTreeMap<N, BTreeSet<N>>,
    rotation: &RotationSystem<N>,
) -> Result<EmbeddingReport<N>, EmbeddingError<N>>
where
    N: Ord + Copy + fmt::Display + fmt::Debug,
{
    if let Some(&v) = rotation.orders.keys().find(|v| !neighbors.contains_key(v)) {
        return Err(EmbeddingError::Foreign(v));
    }
    for (&v, nb) in neighbors {
        let Some(order) = rotation.orders.get(&v) else {
            if nb.is_empty() {
                continue;
            }
            return Err(EmbeddingError::Missing(v));
        };
        let as_set: BTreeSet<N> = order.iter().copied().collect();
        if order.len() != nb.len() || &as_set != nb {
            return Err(EmbeddingError::NotPermutation(v));
        }
    }

    let mut component_of: BTreeMap<N, usize> = BTreeMap::new();
    let mut components = Vec::new();
    for &start in neighbors.keys() {
        if component_of.contains_key(&start) {
            continue;
        }
        let id = components.len();
        let mut stack = vec![start];
        component_of.insert(start, id);
        let (mut vertices, mut degree_sum) = (0, 0);
        while let Some(v) = stack.pop() {
            vertices += 1;
            degree_sum += neighbors[&v].len();
            for &w in &neighbors[&v] {
                if component_of.insert(w, id).is_none() {
                    stack.push(w);
                }
            }
        }
        components.push(ComponentFaces { first: start, vertices, edges: degree_sum / 2, faces: 0 });
    }

    let mut seen: BTreeSet<(N, N)> = BTreeSet::new();
    let mut darts = 0;
    for (&u, nb) in neighbors {
        if nb.is_empty() {
            components[component_of[&u]].faces += 1;
            continue;
        }
        for &v in nb {
            if seen.contains(&(u, v)) {
                continue;
            }
            components[component_of[&u]].faces += 1;
            let (mut a, mut b) = (u, v);
            while seen.insert((a, b)) {
                darts += 1;
                let c = rotation.successor(b, a).expect("orders are permutations of neighbors");
                (a, b) = (b, c);
            }
        }
    }
    Ok(EmbeddingReport { components, darts })
}
