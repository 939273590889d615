use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::mapping::{assignment_from_orientation, orientation_from_assignment};
use super::{assemble, GadgetLabel, ReductionArtifact, ReductionError};
use crate::p3sat::{sat_oracle, validate_embedding, PlanarFormula, SatBudgetExceeded};
use crate::pdgraph::{is_acyclic, parity_feasible, Link, VertexId};
use crate::solver::{decide_with, SearchBudget, SolveStatus};

/// Outcome of the structural checks on an assembled instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralReport {
    /// `Err` names the first component that fails Euler's formula, or the
    /// malformed rotation.
    pub planarity: Result<(), String>,
    pub max_degree: usize,
    /// Vertices outside the odd set whose degree is not 2.
    pub even_degree_violations: Vec<VertexId>,
    pub parity_ok: bool,
    pub registry_ok: bool,
    /// Links joining two different clause gadgets.
    pub inter_clause_links: Vec<Link>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = &self.planarity {
            out.push(format!("planarity: {e}"));
        }
        if self.max_degree > 3 {
            out.push(format!("max degree {} exceeds 3", self.max_degree));
        }
        if let Some(v) = self.even_degree_violations.first() {
            out.push(format!(
                "even vertex {v} does not have degree 2 ({} such vertices)",
                self.even_degree_violations.len()
            ));
        }
        if !self.parity_ok {
            out.push("|E| + |A| + |T| is odd".into());
        }
        if !self.registry_ok {
            out.push("registry is not a bijection onto the vertices".into());
        }
        if let Some(l) = self.inter_clause_links.first() {
            let (a, b) = l.endpoints();
            out.push(format!("clause gadgets joined by {a}–{b}"));
        }
        out
    }
}

impl fmt::Display for StructuralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
        writeln!(f, "planar (Euler per component): {}", mark(self.planarity.is_ok()))?;
        writeln!(f, "max degree {}: {}", self.max_degree, mark(self.max_degree <= 3))?;
        writeln!(f, "even vertices have degree 2: {}", mark(self.even_degree_violations.is_empty()))?;
        writeln!(f, "parity: {}", mark(self.parity_ok))?;
        writeln!(f, "registry bijective: {}", mark(self.registry_ok))?;
        write!(f, "no links between clause gadgets: {}", mark(self.inter_clause_links.is_empty()))
    }
}

pub fn structural_check(artifact: &ReductionArtifact) -> StructuralReport {
    let problem = &artifact.problem;
    let g = problem.graph();
    let neighbors: BTreeMap<VertexId, BTreeSet<VertexId>> =
        g.vertices().iter().map(|&v| (v, g.neighbors(v).collect())).collect();
    let planarity = match validate_embedding(&neighbors, &artifact.rotation) {
        Err(e) => Err(e.to_string()),
        Ok(report) => match report.failing_component() {
            None => Ok(()),
            Some(c) => Err(format!(
                "component of vertex {} has {} faces, Euler needs {}",
                c.first,
                c.faces,
                c.expected_faces()
            )),
        },
    };
    let even_degree_violations =
        g.vertices().iter().copied().filter(|&v| !problem.is_odd(v) && g.degree(v) != 2).collect();
    let registry_ok = artifact.registry.is_bijective()
        && artifact.registry.len() == g.vertex_count()
        && artifact.registry.iter().all(|(v, _)| g.contains_vertex(v));
    let clause_of = |v: VertexId| match artifact.registry.label(v) {
        Some(GadgetLabel::Clause { clause, .. }) => Some(clause),
        _ => None,
    };
    let inter_clause_links = g
        .links()
        .filter(|l| {
            let (a, b) = l.endpoints();
            matches!((clause_of(a), clause_of(b)), (Some(x), Some(y)) if x != y)
        })
        .collect();
    StructuralReport {
        planarity,
        max_degree: g.max_degree(),
        even_degree_violations,
        parity_ok: parity_feasible(problem),
        registry_ok,
        inter_clause_links,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error(transparent)]
    Sat(#[from] SatBudgetExceeded),
    #[error("solver gave up after {budget} decisions")]
    SolverAborted { budget: u64 },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub sat: bool,
    pub orientation_feasible: bool,
    /// Satisfiable exactly when the instance is feasible.
    pub agree: bool,
    /// When satisfiable: the orientation built from the oracle's assignment
    /// is acyclic.
    pub constructive_ok: Option<bool>,
    /// When feasible: the assignment read off the solver's witness
    /// satisfies the formula.
    pub extracted_ok: Option<bool>,
}

impl EquivalenceReport {
    pub fn all_ok(&self) -> bool {
        self.agree && self.constructive_ok != Some(false) && self.extracted_ok != Some(false)
    }
}

/// Runs the brute-force SAT oracle on the formula and the solver on its
/// assembled instance, and cross-checks both witnesses.
pub fn verify_equivalence(
    source: &PlanarFormula,
    sat_budget: usize,
    search: &SearchBudget,
) -> Result<EquivalenceReport, EquivalenceError> {
    let formula = source.formula();
    let sat_witness = sat_oracle(formula, sat_budget)?;
    let artifact = assemble(source);
    let result = decide_with(&artifact.problem, search);
    let witness = match result.status {
        SolveStatus::Aborted { budget } => return Err(EquivalenceError::SolverAborted { budget }),
        SolveStatus::Feasible(o) => Some(o),
        SolveStatus::Infeasible(_) => None,
    };
    let constructive_ok = match &sat_witness {
        Some(alpha) => Some(is_acyclic(orientation_from_assignment(&artifact, alpha)?.arcs()).is_acyclic()),
        None => None,
    };
    let extracted_ok = match &witness {
        Some(o) => Some(formula.eval(&assignment_from_orientation(&artifact, o)?)),
        None => None,
    };
    let sat = sat_witness.is_some();
    let orientation_feasible = witness.is_some();
    Ok(EquivalenceReport { sat, orientation_feasible, agree: sat == orientation_feasible, constructive_ok, extracted_ok })
}
