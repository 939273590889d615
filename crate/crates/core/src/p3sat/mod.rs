//! 3-SAT formulas whose variable/clause incidence graph comes with a planar
//! rotation system.

mod embedding;
mod generate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use embedding::{validate_embedding, ComponentFaces, EmbeddingError, EmbeddingReport, RotationSystem};
pub use generate::{generate, search_unsatisfiable, GenerateError};

pub const DEFAULT_SAT_BUDGET: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    /// Parses a signed 1-based DIMACS literal.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = usize::try_from(value.unsigned_abs() - 1).ok()?;
        Some(Literal { var, positive: value > 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn holds(self, assignment: &Assignment) -> bool {
        assignment.value(self.var) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("¬")?;
        }
        write!(f, "x{}", self.var + 1)
    }
}

pub type Clause = [Literal; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("clause {clause}: variable x{var} out of range (formula has {count} variables)")]
    OutOfRange { clause: usize, var: usize, count: usize },
    #[error("clause {clause} contains both a variable and its negation (x{var})")]
    Complementary { clause: usize, var: usize },
    #[error("clause {clause} repeats variable x{var}")]
    Repeated { clause: usize, var: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Formula {
    variable_count: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(variable_count: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for (j, clause) in clauses.iter().enumerate() {
            for (k, lit) in clause.iter().enumerate() {
                if lit.var >= variable_count {
                    return Err(FormulaError::OutOfRange { clause: j + 1, var: lit.var + 1, count: variable_count });
                }
                if let Some(other) = clause[..k].iter().find(|o| o.var == lit.var) {
                    return Err(if other.positive != lit.positive {
                        FormulaError::Complementary { clause: j + 1, var: lit.var + 1 }
                    } else {
                        FormulaError::Repeated { clause: j + 1, var: lit.var + 1 }
                    });
                }
            }
        }
        Ok(Formula { variable_count, clauses })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Number of clauses mentioning `var`.
    pub fn occurrences(&self, var: usize) -> usize {
        self.clauses.iter().filter(|c| c.iter().any(|l| l.var == var)).count()
    }

    pub fn eval(&self, assignment: &Assignment) -> bool {
        eval(self, assignment)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("⊤");
        }
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "({} ∨ {} ∨ {})", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn all(value: bool, n: usize) -> Self {
        Assignment(vec![value; n])
    }

    /// Bit `i` of `mask` is the value of variable `i`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Panics if the assignment is shorter than the formula's variable count.
pub fn eval(formula: &Formula, assignment: &Assignment) -> bool {
    assert!(assignment.len() >= formula.variable_count, "assignment does not cover every variable");
    formula.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{variables} variables exceed the brute-force budget of {budget}")]
pub struct SatBudgetExceeded {
    pub variables: usize,
    pub budget: usize,
}

/// Tries every assignment in increasing bitmask order and returns the first
/// satisfying one.
pub fn sat_oracle(formula: &Formula, budget: usize) -> Result<Option<Assignment>, SatBudgetExceeded> {
    let n = formula.variable_count;
    if n > budget || n >= 64 {
        return Err(SatBudgetExceeded { variables: n, budget });
    }
    let clauses = clause_masks(&formula.clauses);
    let found = (0..1u64 << n).find(|&mask| satisfies_masks(&clauses, mask));
    Ok(found.map(|mask| Assignment::from_mask(mask, n)))
}

/// Clauses as (mask of variables, mask of variables appearing positively).
pub(crate) fn clause_masks(clauses: &[Clause]) -> Vec<(u64, u64)> {
    clauses
        .iter()
        .map(|c| c.iter().fold((0, 0), |(vars, pos), l| (vars | 1 << l.var, pos | (l.positive as u64) << l.var)))
        .collect()
}

pub(crate) fn satisfies_masks(clauses: &[(u64, u64)], assignment: u64) -> bool {
    clauses.iter().all(|&(vars, pos)| !(assignment ^ pos) & vars != 0)
}

/// A vertex of the variable/clause incidence graph (0-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IncidenceNode {
    Variable(usize),
    Clause(usize),
}

impl fmt::Display for IncidenceNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncidenceNode::Variable(i) => write!(f, "x{}", i + 1),
            IncidenceNode::Clause(j) => write!(f, "c{}", j + 1),
        }
    }
}

impl std::str::FromStr for IncidenceNode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected x<i> or c<j>, got {s:?}");
        let (kind, num) = s.split_at_checked(1).ok_or_else(bad)?;
        let index: usize = num.parse().map_err(|_| bad())?;
        let index = index.checked_sub(1).ok_or_else(bad)?;
        match kind {
            "x" => Ok(IncidenceNode::Variable(index)),
            "c" => Ok(IncidenceNode::Clause(index)),
            _ => Err(bad()),
        }
    }
}

/// Bipartite variable/clause graph. Clause neighbors follow literal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceGraph {
    adjacency: BTreeMap<IncidenceNode, BTreeSet<IncidenceNode>>,
}

impl IncidenceGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, node: IncidenceNode) -> usize {
        self.adjacency.get(&node).map_or(0, BTreeSet::len)
    }

    pub fn neighbors(&self) -> &BTreeMap<IncidenceNode, BTreeSet<IncidenceNode>> {
        &self.adjacency
    }
}

pub fn incidence_graph(formula: &Formula) -> IncidenceGraph {
    let mut adjacency: BTreeMap<IncidenceNode, BTreeSet<IncidenceNode>> = (0..formula.variable_count)
        .map(IncidenceNode::Variable)
        .chain((0..formula.clauses.len()).map(IncidenceNode::Clause))
        .map(|n| (n, BTreeSet::new()))
        .collect();
    for (j, clause) in formula.clauses.iter().enumerate() {
        for lit in clause {
            let (x, c) = (IncidenceNode::Variable(lit.var), IncidenceNode::Clause(j));
            adjacency.get_mut(&x).unwrap().insert(c);
            adjacency.get_mut(&c).unwrap().insert(x);
        }
    }
    IncidenceGraph { adjacency }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarFormulaError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError<IncidenceNode>),
    #[error("rotation is not planar on the component of {component}: {faces} faces, Euler needs {expected}")]
    NotPlanar { component: IncidenceNode, faces: usize, expected: i64 },
}

/// A formula together with a genus-0 rotation system of its incidence graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarFormula {
    formula: Formula,
    rotation: RotationSystem<IncidenceNode>,
}

impl PlanarFormula {
    pub fn new(formula: Formula, rotation: RotationSystem<IncidenceNode>) -> Result<Self, PlanarFormulaError> {
        let report = validate_embedding(incidence_graph(&formula).neighbors(), &rotation)?;
        if let Some(bad) = report.failing_component() {
            return Err(PlanarFormulaError::NotPlanar {
                component: bad.first,
                faces: bad.faces,
                expected: bad.expected_faces(),
            });
        }
        Ok(PlanarFormula { formula, rotation })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn rotation(&self) -> &RotationSystem<IncidenceNode> {
        &self.rotation
    }

    /// Position of clause `clause` in the cyclic order around variable `var`.
    pub fn copy_index(&self, var: usize, clause: usize) -> usize {
        self.rotation
            .index_of(IncidenceNode::Variable(var), IncidenceNode::Clause(clause))
            .expect("clause is a neighbor of the variable")
    }

    /// Position of variable `var` in the cyclic order around clause `clause`.
    pub fn port_index(&self, clause: usize, var: usize) -> usize {
        self.rotation
            .index_of(IncidenceNode::Clause(clause), IncidenceNode::Variable(var))
            .expect("variable is a neighbor of the clause")
    }
}
