//! Complete backtracking search over the undirected edges.
//!
//! Two propagation rules run to a fixpoint after every decision:
//! parity forcing (a constrained vertex with a single open edge dictates
//! its direction) and cycle forcing (an open edge whose one direction would
//! close a directed cycle among decided arcs takes the other one). Every arc
//! is also checked against the decided graph when it is placed, so complete
//! assignments are acyclic by construction.

use std::collections::BTreeSet;

use super::dense::Dense;
use super::{Infeasibility, Method, SolveError, SolveResult, SolveStats, SolveStatus};
use crate::pdgraph::{is_acyclic, GraphError, Orientation, OrientationProblem, VertexId};

pub const DEFAULT_SEARCH_NODES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of branching decisions.
    pub max_decisions: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_decisions: DEFAULT_SEARCH_NODES }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub count: u64,
    pub witnesses: Vec<Orientation>,
    pub stats: SolveStats,
}

pub fn solve_exact(problem: &OrientationProblem, budget: &SearchBudget) -> SolveResult {
    let dense = Dense::new(problem, None);
    let mut engine = Engine::new(&dense, budget.max_decisions, Mode::First);
    let status = match engine.run() {
        Outcome::Abort => SolveStatus::Aborted { budget: budget.max_decisions },
        _ => match engine.solutions.first() {
            Some(dirs) => SolveStatus::Feasible(dense.orientation_for(problem, |i| dirs[i] == UP)),
            None if engine.fixed_cyclic => SolveStatus::Infeasible(Infeasibility::FixedArcsCyclic),
            None => SolveStatus::Infeasible(Infeasibility::SearchExhausted),
        },
    };
    SolveResult { status, stats: engine.stats, method: Method::Exact }
}

/// Counts all acyclic orientations that are T-odd on `scope`.
pub fn count_exact(
    problem: &OrientationProblem,
    scope: &BTreeSet<VertexId>,
    budget: &SearchBudget,
    witness_cap: usize,
) -> Result<CountReport, SolveError> {
    if let Some(&v) = scope.iter().find(|v| !problem.graph().contains_vertex(**v)) {
        return Err(GraphError::UnknownVertex(v).into());
    }
    let dense = Dense::new(problem, Some(scope));
    let mut engine = Engine::new(&dense, budget.max_decisions, Mode::Count { cap: witness_cap });
    if let Outcome::Abort = engine.run() {
        return Err(SolveError::BudgetExceeded(format!(
            "search exceeded {} decisions",
            budget.max_decisions
        )));
    }
    let witnesses = engine
        .solutions
        .iter()
        .map(|dirs| dense.orientation_for(problem, |i| dirs[i] == UP))
        .collect();
    Ok(CountReport { count: engine.count, witnesses, stats: engine.stats })
}

const UP: u8 = 0;
const DOWN: u8 = 1;
const OPEN: u8 = 2;

#[derive(Clone, Copy)]
enum Mode {
    First,
    Count { cap: usize },
}

enum Outcome {
    Continue,
    Stop,
    Abort,
}

#[derive(Clone)]
struct State {
    dir: Vec<u8>,
    open: Vec<u32>,
    parity: Vec<bool>,
}

struct Engine<'a> {
    d: &'a Dense,
    incident: Vec<Vec<usize>>,
    fixed_succ: Vec<Vec<usize>>,
    max_decisions: u64,
    mode: Mode,
    stats: SolveStats,
    solutions: Vec<Vec<u8>>,
    count: u64,
    fixed_cyclic: bool,
}

impl<'a> Engine<'a> {
    fn new(d: &'a Dense, max_decisions: u64, mode: Mode) -> Self {
        let n = d.n();
        let mut incident = vec![Vec::new(); n];
        for (i, &(lo, hi)) in d.edges.iter().enumerate() {
            incident[lo].push(i);
            incident[hi].push(i);
        }
        let mut fixed_succ = vec![Vec::new(); n];
        for &(t, h) in &d.arcs {
            fixed_succ[t].push(h);
        }
        Engine {
            d,
            incident,
            fixed_succ,
            max_decisions,
            mode,
            stats: SolveStats::default(),
            solutions: Vec::new(),
            count: 0,
            fixed_cyclic: false,
        }
    }

    fn run(&mut self) -> Outcome {
        let fixed: Vec<_> = self
            .d
            .arcs
            .iter()
            .map(|&(t, h)| crate::pdgraph::Arc::new(self.d.ids[t], self.d.ids[h]))
            .collect();
        if !is_acyclic(&fixed).is_acyclic() {
            self.fixed_cyclic = true;
            return Outcome::Continue;
        }
        let n = self.d.n();
        let mut state = State {
            dir: vec![OPEN; self.d.edges.len()],
            open: (0..n).map(|v| self.incident[v].len() as u32).collect(),
            parity: vec![false; n],
        };
        for &(_, h) in &self.d.arcs {
            state.parity[h] ^= true;
        }
        let queue: Vec<usize> = (0..n).collect();
        if !self.propagate(&mut state, queue) {
            return Outcome::Continue;
        }
        self.search(state)
    }

    fn head_tail(&self, e: usize, dir: u8) -> (usize, usize) {
        let (lo, hi) = self.d.edges[e];
        if dir == UP {
            (hi, lo)
        } else {
            (lo, hi)
        }
    }

    /// Whether `to` is reachable from `from` along decided arcs.
    fn reaches(&self, state: &State, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.d.n()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            let decided = self.incident[x].iter().filter_map(|&e| {
                let d = state.dir[e];
                if d == OPEN {
                    return None;
                }
                let (h, t) = self.head_tail(e, d);
                (t == x).then_some(h)
            });
            for y in self.fixed_succ[x].iter().copied().chain(decided) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// Places edge `e`; false if the arc would close a cycle.
    fn apply(&self, state: &mut State, e: usize, dir: u8, queue: &mut Vec<usize>) -> bool {
        let (head, tail) = self.head_tail(e, dir);
        if self.reaches(state, head, tail) {
            return false;
        }
        state.dir[e] = dir;
        state.open[head] -= 1;
        state.open[tail] -= 1;
        state.parity[head] ^= true;
        queue.push(head);
        queue.push(tail);
        true
    }

    fn propagate(&mut self, state: &mut State, mut queue: Vec<usize>) -> bool {
        loop {
            while let Some(v) = queue.pop() {
                let Some(want) = self.d.demand[v] else { continue };
                match state.open[v] {
                    0 if state.parity[v] != want => return false,
                    1 => {
                        let e = *self.incident[v].iter().find(|&&e| state.dir[e] == OPEN).unwrap();
                        let into_v = state.parity[v] != want;
                        let (lo, _) = self.d.edges[e];
                        let dir = if into_v == (v == lo) { DOWN } else { UP };
                        self.stats.propagations += 1;
                        if !self.apply(state, e, dir, &mut queue) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            let Some(forced) = self.cycle_forced(state) else { return false };
            if forced.is_empty() {
                return true;
            }
            for (e, dir) in forced {
                if state.dir[e] != OPEN {
                    if state.dir[e] != dir {
                        return false;
                    }
                    continue;
                }
                self.stats.propagations += 1;
                if !self.apply(state, e, dir, &mut queue) {
                    return false;
                }
            }
        }
    }

    /// Open edges with exactly one direction left that keeps the decided
    /// graph acyclic. `None` when an edge has no direction left.
    fn cycle_forced(&self, state: &State) -> Option<Vec<(usize, u8)>> {
        if !state.dir.contains(&OPEN) {
            return Some(Vec::new());
        }
        let n = self.d.n();
        let words = n.div_ceil(64);
        let mut succ = self.fixed_succ.clone();
        let mut indeg = vec![0usize; n];
        for (e, &d) in state.dir.iter().enumerate() {
            if d != OPEN {
                let (h, t) = self.head_tail(e, d);
                succ[t].push(h);
            }
        }
        for s in &succ {
            for &h in s {
                indeg[h] += 1;
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    order.push(w);
                }
            }
        }
        debug_assert_eq!(order.len(), n, "decided arcs must stay acyclic");
        let mut reach = vec![0u64; n * words];
        for &v in order.iter().rev() {
            reach[v * words + v / 64] |= 1 << (v % 64);
            for &w in &succ[v] {
                for k in 0..words {
                    reach[v * words + k] |= reach[w * words + k];
                }
            }
        }
        let reaches = |a: usize, b: usize| reach[a * words + b / 64] >> (b % 64) & 1 == 1;
        let mut forced = Vec::new();
        for (e, &d) in state.dir.iter().enumerate() {
            if d != OPEN {
                continue;
            }
            let (lo, hi) = self.d.edges[e];
            match (reaches(lo, hi), reaches(hi, lo)) {
                (true, true) => return None,
                (true, false) => forced.push((e, UP)),
                (false, true) => forced.push((e, DOWN)),
                (false, false) => {}
            }
        }
        Some(forced)
    }

    fn pick(&self, state: &State) -> Option<usize> {
        (0..self.d.edges.len())
            .filter(|&e| state.dir[e] == OPEN)
            .min_by_key(|&e| {
                let (lo, hi) = self.d.edges[e];
                (state.open[lo] + state.open[hi], e)
            })
    }

    fn search(&mut self, state: State) -> Outcome {
        let Some(e) = self.pick(&state) else {
            self.count += 1;
            match self.mode {
                Mode::First => {
                    self.solutions.push(state.dir);
                    return Outcome::Stop;
                }
                Mode::Count { cap } => {
                    if self.solutions.len() < cap {
                        self.solutions.push(state.dir);
                    }
                    return Outcome::Continue;
                }
            }
        };
        // Lower vertex id first: the head of DOWN is the lower endpoint.
        for dir in [DOWN, UP] {
            if self.stats.decisions >= self.max_decisions {
                return Outcome::Abort;
            }
            self.stats.decisions += 1;
            let mut next = state.clone();
            let mut queue = Vec::new();
            if !self.apply(&mut next, e, dir, &mut queue) || !self.propagate(&mut next, queue) {
                continue;
            }
            match self.search(next) {
                Outcome::Continue => {}
                other => return other,
            }
        }
        Outcome::Continue
    }
}
