use super::gadgets::{base_gadget_self_check, Builder};
use super::{BaseCopy, BaseRole, ReductionArtifact};
use crate::p3sat::{IncidenceNode, PlanarFormula, RotationSystem};

/// Builds the orientation instance of a planar formula. Copy `k` of a
/// variable serves the `k`-th clause around it, port `k` of a clause the
/// `k`-th variable around it, so the connector pairs follow the incidence
/// embedding and the global rotation stays planar.
///
/// Panics if the base gadget ever stops having exactly two valid
/// orientations, since every later step depends on it.
pub fn assemble(source: &PlanarFormula) -> ReductionArtifact {
    assert_eq!(base_gadget_self_check(), 2, "base gadget must admit exactly two orientations");
    let formula = source.formula();
    let mut b = Builder::default();
    let copies: Vec<Vec<BaseCopy>> =
        (0..formula.variable_count()).map(|i| b.add_variable(i, formula.occurrences(i))).collect();

    for (j, clause) in formula.clauses().iter().enumerate() {
        let order = source.rotation().order(IncidenceNode::Clause(j)).expect("clause has a rotation").to_vec();
        let vars: Vec<usize> = order
            .iter()
            .map(|n| match n {
                IncidenceNode::Variable(x) => *x,
                IncidenceNode::Clause(_) => unreachable!("incidence graph is bipartite"),
            })
            .collect();
        let positive = [0, 1, 2].map(|k| clause.iter().any(|l| l.var == vars[k] && l.positive));
        let ports = b.add_clause(j, positive);
        for (k, &x) in vars.iter().enumerate() {
            let copy = copies[x][source.copy_index(x, j)];
            let (u, u_hat) = (copy[BaseRole::U.index()], copy[BaseRole::UHat.index()]);
            b.edge(u, ports.v_hat[k]);
            b.edge(u_hat, ports.v[k]);
            b.rotate(u, vec![ports.v_hat[k], copy[BaseRole::A.index()]]);
            b.rotate(u_hat, vec![copy[BaseRole::D.index()], ports.v[k]]);
            b.rotate(ports.v[k], vec![ports.w[k], u_hat]);
            b.rotate(ports.v_hat[k], vec![ports.w_hat[k], u]);
        }
    }

    ReductionArtifact {
        problem: b.problem(),
        rotation: RotationSystem::new(b.rotation.clone()),
        registry: b.registry,
        source: source.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::five_variable_instance;
    use crate::pdgraph::parity_feasible;

    #[test]
    fn five_variable_sizes() {
        let a = assemble(&five_variable_instance());
        let g = a.problem.graph();
        assert_eq!((g.vertex_count(), g.edges().len(), g.arcs().len()), (210, 225, 60));
        assert_eq!(a.problem.odd_set().len(), 185);
        assert!(parity_feasible(&a.problem));
        assert_eq!(a.registry.len(), 210);
    }

    #[test]
    fn u_hat_vertices_are_even_and_degree_two() {
        let a = assemble(&five_variable_instance());
        let g = a.problem.graph();
        for (v, label) in a.registry.iter() {
            if let crate::reduction::GadgetLabel::Base { role: BaseRole::UHat, .. } = label {
                assert_eq!(g.degree(v), 2);
                assert!(!a.problem.is_odd(v));
            }
        }
    }
}
