use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use super::{BaseCopy, BaseRole, ClausePorts, ClauseRole, GadgetLabel, GadgetRegistry};
use crate::p3sat::RotationSystem;
use crate::pdgraph::{is_acyclic, Arc, OrientationProblem, PartiallyDirectedGraph, VertexId};
use crate::solver::enumerate;

use BaseRole::*;

const BASE_EDGES: [(BaseRole, BaseRole); 8] = [(U, A), (A, B), (B, C), (C, D), (D, UHat), (S, E), (E, F), (F, T)];
pub(super) const BASE_ARCS: [(BaseRole, BaseRole); 4] = [(A, S), (E, B), (F, C), (D, T)];

/// Accumulates vertices, links, odd set, rotation, and labels.
#[derive(Debug, Default)]
pub(super) struct Builder {
    next: u32,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub arcs: Vec<(VertexId, VertexId)>,
    pub odd: BTreeSet<VertexId>,
    pub rotation: BTreeMap<VertexId, Vec<VertexId>>,
    pub registry: GadgetRegistry,
}

impl Builder {
    pub fn fresh(&mut self, label: Option<GadgetLabel>) -> VertexId {
        let v = VertexId(self.next);
        self.next += 1;
        self.vertices.push(v);
        if let Some(l) = label {
            self.registry.insert(v, l).expect("builder labels are fresh");
        }
        v
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId) {
        self.edges.push((a, b));
    }

    pub fn rotate(&mut self, v: VertexId, order: Vec<VertexId>) {
        self.rotation.insert(v, order);
    }

    /// One base gadget. Rotations of u, û, s, t depend on their outside
    /// neighbors and are left to the caller.
    pub fn add_base(&mut self, var: usize, copy: usize) -> BaseCopy {
        let mut ids = [VertexId(0); 10];
        for role in BaseRole::ALL {
            ids[role.index()] = self.fresh(Some(GadgetLabel::Base { var, copy, role }));
        }
        let at = |r: BaseRole| ids[r.index()];
        for (x, y) in BASE_EDGES {
            self.edge(at(x), at(y));
        }
        for (x, y) in BASE_ARCS {
            self.arcs.push((at(x), at(y)));
        }
        self.odd.extend(BaseRole::ALL.into_iter().filter(|&r| r != UHat).map(at));
        // Clockwise with the outer path on top: outward, forward, inward,
        // backward.
        self.rotate(at(A), vec![at(B), at(S), at(U)]);
        self.rotate(at(B), vec![at(C), at(E), at(A)]);
        self.rotate(at(C), vec![at(D), at(F), at(B)]);
        self.rotate(at(D), vec![at(UHat), at(T), at(C)]);
        self.rotate(at(E), vec![at(B), at(F), at(S)]);
        self.rotate(at(F), vec![at(C), at(T), at(E)]);
        ids
    }

    /// `degree` base gadgets in a ring, `t` of each copy linked to `s` of the
    /// next. Rotations of u and û are left to the caller.
    pub fn add_variable(&mut self, var: usize, degree: usize) -> Vec<BaseCopy> {
        let copies: Vec<BaseCopy> = (0..degree).map(|k| self.add_base(var, k)).collect();
        for k in 0..degree {
            let (cur, next, prev) = (copies[k], copies[(k + 1) % degree], copies[(k + degree - 1) % degree]);
            self.edge(cur[T.index()], next[S.index()]);
            self.rotate(cur[S.index()], vec![cur[A.index()], cur[E.index()], prev[T.index()]]);
            self.rotate(cur[T.index()], vec![cur[D.index()], next[S.index()], cur[F.index()]]);
        }
        copies
    }

    /// Hexagon w1 ŵ1 w2 ŵ2 w3 ŵ3 with a pendant port vertex on each corner.
    /// Rotations of the port vertices are left to the caller.
    #[allow(clippy::needless_range_loop)]
    pub fn add_clause(&mut self, clause: usize, positive: [bool; 3]) -> ClausePorts {
        let label = |me: &mut Self, role| me.fresh(Some(GadgetLabel::Clause { clause, role }));
        let mut p = ClausePorts { w: [VertexId(0); 3], w_hat: [VertexId(0); 3], v: [VertexId(0); 3], v_hat: [VertexId(0); 3] };
        for k in 0..3 {
            p.w[k] = label(self, ClauseRole::W(k));
            p.w_hat[k] = label(self, ClauseRole::WHat(k));
        }
        for k in 0..3 {
            p.v[k] = label(self, ClauseRole::V(k));
            p.v_hat[k] = label(self, ClauseRole::VHat(k));
        }
        for k in 0..3 {
            let next = (k + 1) % 3;
            let prev = (k + 2) % 3;
            self.edge(p.w[k], p.w_hat[k]);
            self.edge(p.w_hat[k], p.w[next]);
            self.edge(p.v[k], p.w[k]);
            self.edge(p.v_hat[k], p.w_hat[k]);
            self.rotate(p.w[k], vec![p.v[k], p.w_hat[k], p.w_hat[prev]]);
            self.rotate(p.w_hat[k], vec![p.v_hat[k], p.w[next], p.w[k]]);
            self.odd.insert(p.w[k]);
            self.odd.insert(p.w_hat[k]);
            if positive[k] {
                self.odd.insert(p.v[k]);
                self.odd.insert(p.v_hat[k]);
            }
        }
        p
    }

    /// A leaf hanging off `inner`, standing in for a neighbor outside the
    /// gadget.
    fn stub(&mut self, inner: VertexId) -> VertexId {
        let s = self.fresh(None);
        self.edge(inner, s);
        self.rotate(s, vec![inner]);
        s
    }

    pub fn problem(&self) -> OrientationProblem {
        let g = PartiallyDirectedGraph::new(self.vertices.iter().copied(), self.edges.iter().copied(), self.arcs.iter().copied())
            .expect("gadget construction is simple");
        OrientationProblem::new(g, self.odd.iter().copied()).expect("odd set inside the graph")
    }
}

/// A gadget with leaves standing in for its outside neighbors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub problem: OrientationProblem,
    /// The gadget's own vertices (everything but the leaves).
    pub scope: BTreeSet<VertexId>,
    pub registry: GadgetRegistry,
    pub rotation: RotationSystem<VertexId>,
    /// `(gadget vertex, leaf)` for every boundary link.
    pub boundary: Vec<(VertexId, VertexId)>,
}

fn finish(b: Builder, boundary: Vec<(VertexId, VertexId)>) -> GadgetInstance {
    let scope = b.registry.iter().map(|(v, _)| v).collect();
    GadgetInstance {
        problem: b.problem(),
        scope,
        registry: b.registry.clone(),
        rotation: RotationSystem::new(b.rotation.clone()),
        boundary,
    }
}

/// One base gadget with leaves at u, û, s, t.
pub fn base_gadget_instance() -> GadgetInstance {
    let mut b = Builder::default();
    let m = b.add_base(0, 0);
    let mut boundary = Vec::new();
    for role in [U, UHat, S, T] {
        let inner = m[role.index()];
        let leaf = b.stub(inner);
        boundary.push((inner, leaf));
    }
    let [u, leaf_u, uh, leaf_uh, s, leaf_s, t, leaf_t] =
        [boundary[0].0, boundary[0].1, boundary[1].0, boundary[1].1, boundary[2].0, boundary[2].1, boundary[3].0, boundary[3].1];
    let at = |r: BaseRole| m[r.index()];
    b.rotate(u, vec![leaf_u, at(A)]);
    b.rotate(uh, vec![at(D), leaf_uh]);
    b.rotate(s, vec![at(A), at(E), leaf_s]);
    b.rotate(t, vec![at(D), leaf_t, at(F)]);
    finish(b, boundary)
}

/// A ring of `degree` base gadgets with a leaf on every u and û.
pub fn variable_gadget_instance(degree: usize) -> GadgetInstance {
    let mut b = Builder::default();
    let copies = b.add_variable(0, degree);
    let mut boundary = Vec::new();
    for copy in &copies {
        let (u, uh) = (copy[U.index()], copy[UHat.index()]);
        let leaf_u = b.stub(u);
        let leaf_uh = b.stub(uh);
        b.rotate(u, vec![leaf_u, copy[A.index()]]);
        b.rotate(uh, vec![copy[D.index()], leaf_uh]);
        boundary.push((u, leaf_u));
        boundary.push((uh, leaf_uh));
    }
    finish(b, boundary)
}

/// A clause gadget with a leaf on every port vertex. `positive[k]` is the
/// polarity of the literal at port `k`.
pub fn clause_gadget_instance(positive: [bool; 3]) -> GadgetInstance {
    let mut b = Builder::default();
    let p = b.add_clause(0, positive);
    let mut boundary = Vec::new();
    for k in 0..3 {
        for (port, w) in [(p.v[k], p.w[k]), (p.v_hat[k], p.w_hat[k])] {
            let leaf = b.stub(port);
            b.rotate(port, vec![w, leaf]);
            boundary.push((port, leaf));
        }
    }
    finish(b, boundary)
}

/// Number of acyclic orientations of the base gadget with leaves that meet
/// the parity demand on the gadget itself. Computed once per process; the
/// construction is only sound if this is exactly 2.
pub fn base_gadget_self_check() -> u64 {
    static COUNT: OnceLock<u64> = OnceLock::new();
    *COUNT.get_or_init(|| {
        let g = base_gadget_instance();
        enumerate(&g.problem, &g.scope, 0).expect("12 free edges").total_valid
    })
}

/// One parity-consistent way to direct a clause hexagon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseCompletion {
    pub hexagon: BTreeSet<Arc>,
    pub cyclic: bool,
}

/// Every way to direct the hexagon so each corner gets odd in-degree, when
/// exactly the first `inward` ports point into it. Brute force over the six
/// hexagon edges; acyclicity is reported, not required.
pub fn clause_completions(inward: usize) -> Vec<ClauseCompletion> {
    assert!(inward <= 3, "a clause has three ports");
    let hex: Vec<u32> = (0..6).collect();
    (0..1u32 << 6)
        .filter_map(|mask| {
            let forward = |i: usize| mask >> i & 1 == 1;
            let ok = (0..6).all(|i| {
                let into_from_prev = forward((i + 5) % 6) as usize;
                let into_from_next = !forward(i) as usize;
                let port = usize::from(i / 2 < inward);
                (into_from_prev + into_from_next + port) % 2 == 1
            });
            ok.then(|| {
                let hexagon: BTreeSet<Arc> = (0..6)
                    .map(|i| {
                        let (a, b) = (VertexId(hex[i]), VertexId(hex[(i + 1) % 6]));
                        if forward(i) {
                            Arc::new(a, b)
                        } else {
                            Arc::new(b, a)
                        }
                    })
                    .collect();
                let cyclic = !is_acyclic(&hexagon).is_acyclic();
                ClauseCompletion { hexagon, cyclic }
            })
        })
        .collect()
}
