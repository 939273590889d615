//! Random instance builders and a from-scratch brute-force oracle shared by
//! the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use aop_core::pdgraph::{OrientationProblem, PartiallyDirectedGraph, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn v(i: u32) -> VertexId {
    VertexId(i)
}

/// A random simple graph on `n` vertices with at most `max_links` links,
/// each link fixed as an arc with probability `arc_prob`, and a random odd
/// set.
pub fn random_problem(rng: &mut impl Rng, n: u32, max_links: usize, arc_prob: f64) -> OrientationProblem {
    let mut pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    let count = rng.gen_range(0..=max_links.min(pairs.len()));
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for &(a, b) in &pairs[..count] {
        let (a, b) = if rng.gen() { (a, b) } else { (b, a) };
        if rng.gen_bool(arc_prob) {
            arcs.push((v(a), v(b)));
        } else {
            edges.push((v(a), v(b)));
        }
    }
    let odd: Vec<VertexId> = (0..n).filter(|_| rng.gen()).map(v).collect();
    let g = PartiallyDirectedGraph::new((0..n).map(v), edges, arcs).unwrap();
    OrientationProblem::new(g, odd).unwrap()
}

/// A random forest: each vertex after the first attaches to an earlier one
/// with probability 0.8.
pub fn random_forest(rng: &mut impl Rng, n: u32, arc_prob: f64) -> OrientationProblem {
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for b in 1..n {
        if rng.gen_bool(0.8) {
            let a = rng.gen_range(0..b);
            if rng.gen_bool(arc_prob) {
                arcs.push(if rng.gen() { (v(a), v(b)) } else { (v(b), v(a)) });
            } else {
                edges.push((v(a), v(b)));
            }
        }
    }
    let odd: Vec<VertexId> = (0..n).filter(|_| rng.gen()).map(v).collect();
    let g = PartiallyDirectedGraph::new((0..n).map(v), edges, arcs).unwrap();
    OrientationProblem::new(g, odd).unwrap()
}

/// Disjoint paths and cycles covering `n` shuffled vertices.
pub fn random_degree_two(rng: &mut impl Rng, n: u32, arc_prob: f64) -> OrientationProblem {
    let mut order: Vec<u32> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    let mut rest = &order[..];
    while !rest.is_empty() {
        let len = rng.gen_range(1..=rest.len());
        let (piece, tail) = rest.split_at(len);
        rest = tail;
        let mut links: Vec<(u32, u32)> = piece.windows(2).map(|w| (w[0], w[1])).collect();
        if len >= 3 && rng.gen() {
            links.push((piece[len - 1], piece[0]));
        }
        for (a, b) in links {
            if rng.gen_bool(arc_prob) {
                arcs.push(if rng.gen() { (v(a), v(b)) } else { (v(b), v(a)) });
            } else {
                edges.push((v(a), v(b)));
            }
        }
    }
    let odd: Vec<VertexId> = (0..n).filter(|_| rng.gen()).map(v).collect();
    let g = PartiallyDirectedGraph::new((0..n).map(v), edges, arcs).unwrap();
    OrientationProblem::new(g, odd).unwrap()
}

/// Counts acyclic orientations meeting the parity demand on every vertex,
/// by trying every direction of every edge and peeling sources.
pub fn oracle_count(problem: &OrientationProblem) -> u64 {
    let g = problem.graph();
    let n = g.vertex_count();
    let index = |x: VertexId| g.vertices().iter().position(|&w| w == x).unwrap();
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (index(e.lo()), index(e.hi()))).collect();
    let fixed: Vec<(usize, usize)> = g.arcs().iter().map(|a| (index(a.tail), index(a.head))).collect();
    let odd: Vec<bool> = g.vertices().iter().map(|&x| problem.is_odd(x)).collect();
    assert!(edges.len() <= 20, "oracle is exponential in the edge count");
    let mut count = 0;
    for mask in 0..1u64 << edges.len() {
        let mut arcs = fixed.clone();
        arcs.extend(edges.iter().enumerate().map(|(i, &(a, b))| if mask >> i & 1 == 1 { (a, b) } else { (b, a) }));
        let mut indeg = vec![0usize; n];
        for &(_, h) in &arcs {
            indeg[h] += 1;
        }
        if (0..n).any(|x| (indeg[x] % 2 == 1) != odd[x]) {
            continue;
        }
        let mut alive = vec![true; n];
        let mut left = n;
        loop {
            let source = (0..n).find(|&x| alive[x] && !arcs.iter().any(|&(t, h)| h == x && alive[t]));
            match source {
                Some(x) => {
                    alive[x] = false;
                    left -= 1;
                }
                None => break,
            }
        }
        if left == 0 {
            count += 1;
        }
    }
    count
}

pub fn all_vertices(problem: &OrientationProblem) -> BTreeSet<VertexId> {
    problem.graph().vertices().clone()
}
