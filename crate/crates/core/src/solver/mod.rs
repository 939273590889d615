//! Decision procedures for acyclic T-odd orientations of partially directed
//! graphs.

mod dense;
mod enumerate;
mod exact;
mod special;
mod transform;

use std::fmt;

use thiserror::Error;

use crate::pdgraph::{parity_feasible, GraphError, Orientation, OrientationProblem, VertexId};

pub use enumerate::{enumerate, enumerate_with_limit, EnumerationReport, DEFAULT_ENUMERATION_LIMIT};
pub use exact::{count_exact, solve_exact, CountReport, SearchBudget, DEFAULT_SEARCH_NODES};
pub use special::{solve_degree_two, solve_tree};
pub use transform::{apex_candidates, apex_transform, normalize_empty_t, ApexReading, Contraction, NormalizationMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("normalization blocked at vertex {vertex}: {reason}")]
    NormalizationBlocked { vertex: VertexId, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Why an instance has no acyclic T-odd orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// Parity counting rules out any T-odd orientation.
    Parity,
    /// The only parity-consistent orientations contradict a fixed arc.
    FixedArcConflict,
    /// Every parity-consistent candidate contains a directed cycle.
    Cyclic,
    /// The fixed arcs already contain a directed cycle.
    FixedArcsCyclic,
    /// Complete search found nothing.
    SearchExhausted,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Infeasibility::Parity => "parity",
            Infeasibility::FixedArcConflict => "fixed arcs",
            Infeasibility::Cyclic => "cyclic",
            Infeasibility::FixedArcsCyclic => "fixed arcs cyclic",
            Infeasibility::SearchExhausted => "search exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Feasible(Orientation),
    Infeasible(Infeasibility),
    Aborted { budget: u64 },
}

impl SolveStatus {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveStatus::Feasible(_))
    }

    pub fn is_aborted(&self) -> bool {
        matches!(self, SolveStatus::Aborted { .. })
    }

    pub fn witness(&self) -> Option<&Orientation> {
        match self {
            SolveStatus::Feasible(o) => Some(o),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub enumerated: u64,
}

/// Which procedure produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ParityGate,
    Tree,
    DegreeTwo,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ParityGate => "parity",
            Method::Tree => "tree",
            Method::DegreeTwo => "degree-two",
            Method::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub stats: SolveStats,
    pub method: Method,
}

pub fn decide(problem: &OrientationProblem) -> SolveResult {
    decide_with(problem, &SearchBudget::default())
}

/// Parity gate, then the forest and degree-2 solvers where they apply, and
/// the backtracking search otherwise.
pub fn decide_with(problem: &OrientationProblem, budget: &SearchBudget) -> SolveResult {
    if !parity_feasible(problem) {
        return SolveResult {
            status: SolveStatus::Infeasible(Infeasibility::Parity),
            stats: SolveStats::default(),
            method: Method::ParityGate,
        };
    }
    let graph = problem.graph();
    if graph.is_forest() {
        return solve_tree(problem).expect("forest precondition checked");
    }
    if graph.max_degree() <= 2 {
        return solve_degree_two(problem).expect("degree precondition checked");
    }
    solve_exact(problem, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdgraph::PartiallyDirectedGraph;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn dispatch_picks_the_special_cases() {
        let path = PartiallyDirectedGraph::new((0..3).map(v), [(v(0), v(1)), (v(1), v(2))], []).unwrap();
        let p = OrientationProblem::new(path, [v(0), v(2)]).unwrap();
        let r = decide(&p);
        assert_eq!(r.method, Method::Tree);
        assert_eq!(r, solve_tree(&p).unwrap());

        let p = OrientationProblem::new(p.graph().clone(), [v(1)]).unwrap();
        let r = decide(&p);
        assert_eq!((r.method, r.status), (Method::ParityGate, SolveStatus::Infeasible(Infeasibility::Parity)));

        let tri = PartiallyDirectedGraph::new((0..3).map(v), [(v(0), v(1)), (v(1), v(2)), (v(0), v(2))], []).unwrap();
        let r = decide(&OrientationProblem::new(tri, [v(0)]).unwrap());
        assert_eq!(r.method, Method::DegreeTwo);
        assert!(r.status.is_feasible());
    }
}
