//! A small worked instance used by tests, examples, and the CLI.

use std::collections::BTreeMap;

use crate::p3sat::{Formula, IncidenceNode, Literal, PlanarFormula, RotationSystem};

/// Five variables, five clauses:
///
/// ```text
/// c1 = x1 ∨ x2 ∨ x3
/// c2 = ¬x1 ∨ x5 ∨ x2
/// c3 = x2 ∨ ¬x4 ∨ x5
/// c4 = ¬x2 ∨ x5 ∨ x4
/// c5 = ¬x3 ∨ ¬x2 ∨ x5
/// ```
///
/// with a planar rotation system of its incidence graph (seven faces).
pub fn five_variable_instance() -> PlanarFormula {
    let lit = |v: i64| Literal::from_dimacs(v).unwrap();
    let clauses = [[1, 2, 3], [-1, 5, 2], [2, -4, 5], [-2, 5, 4], [-3, -2, 5]]
        .iter()
        .map(|c| c.map(lit))
        .collect();
    let formula = Formula::new(5, clauses).unwrap();
    let x = |i: usize| IncidenceNode::Variable(i - 1);
    let c = |j: usize| IncidenceNode::Clause(j - 1);
    let orders: BTreeMap<IncidenceNode, Vec<IncidenceNode>> = [
        (x(1), vec![c(1), c(2)]),
        (x(2), vec![c(1), c(2), c(4), c(3), c(5)]),
        (x(3), vec![c(1), c(5)]),
        (x(4), vec![c(3), c(4)]),
        (x(5), vec![c(5), c(3), c(4), c(2)]),
        (c(1), vec![x(1), x(2), x(3)]),
        (c(2), vec![x(1), x(5), x(2)]),
        (c(3), vec![x(2), x(4), x(5)]),
        (c(4), vec![x(2), x(5), x(4)]),
        (c(5), vec![x(3), x(2), x(5)]),
    ]
    .into();
    PlanarFormula::new(formula, RotationSystem::new(orders)).expect("fixture rotation is planar")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3sat::{incidence_graph, validate_embedding};

    #[test]
    fn seven_faces() {
        let p = five_variable_instance();
        let r = validate_embedding(incidence_graph(p.formula()).neighbors(), p.rotation()).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.faces(), 7);
    }
}
