use std::collections::BTreeSet;
use std::fmt;

use super::gadgets::BASE_ARCS;
use super::{BaseCopy, BaseRole, GadgetLabel, ReductionArtifact, ReductionError};
use crate::p3sat::Assignment;
use crate::pdgraph::{Arc, Orientation, PartiallyDirectedGraph, VertexId};

use BaseRole::*;

/// The two orientations of a variable gadget: every connector pointing out
/// of it (the variable is true) or into it (false).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableMode {
    Out,
    In,
}

impl VariableMode {
    pub fn from_value(value: bool) -> Self {
        if value {
            VariableMode::Out
        } else {
            VariableMode::In
        }
    }
}

/// Inner links of a base gadget in the outward mode, as (tail, head).
const OUT_MODE: [(BaseRole, BaseRole); 8] =
    [(A, U), (B, A), (B, C), (D, C), (UHat, D), (E, S), (F, E), (T, F)];

fn outside_neighbor(graph: &PartiallyDirectedGraph, copy: &BaseCopy, role: BaseRole, inner: BaseRole) -> Option<VertexId> {
    let v = copy[role.index()];
    graph.neighbors(v).find(|&w| w != copy[inner.index()])
}

/// Every arc of the ring `copies` and its connectors in the given mode,
/// fixed arcs included. Fails if a copy lost one of its connectors.
pub(crate) fn ring_mode_arcs(
    graph: &PartiallyDirectedGraph,
    copies: &[BaseCopy],
    var: usize,
    mode: VariableMode,
) -> Result<BTreeSet<Arc>, ReductionError> {
    let mut out = BTreeSet::new();
    let d = copies.len();
    for (k, copy) in copies.iter().enumerate() {
        let at = |r: BaseRole| copy[r.index()];
        for (tail, head) in BASE_ARCS {
            out.insert(Arc::new(at(tail), at(head)));
        }
        let connector = |role: BaseRole, inner: BaseRole| {
            outside_neighbor(graph, copy, role, inner)
                .ok_or(ReductionError::MissingConnector(GadgetLabel::Base { var, copy: k, role }))
        };
        let mut directed: Vec<Arc> = OUT_MODE.iter().map(|&(t, h)| Arc::new(at(t), at(h))).collect();
        directed.push(Arc::new(at(U), connector(U, A)?));
        directed.push(Arc::new(at(UHat), connector(UHat, D)?));
        directed.push(Arc::new(at(T), copies[(k + 1) % d][S.index()]));
        for arc in directed {
            out.insert(if mode == VariableMode::Out { arc } else { arc.reversed() });
        }
    }
    Ok(out)
}

/// The orientation of a variable gadget and its connectors in `mode`.
pub fn variable_mode_arcs(
    artifact: &ReductionArtifact,
    var: usize,
    mode: VariableMode,
) -> Result<BTreeSet<Arc>, ReductionError> {
    let copies = (0..artifact.copy_count(var))
        .map(|k| artifact.base_copy(var, k))
        .collect::<Result<Vec<_>, _>>()?;
    ring_mode_arcs(artifact.problem.graph(), &copies, var, mode)
}

/// Orients every variable gadget by its value, then each port edge by the
/// parity of its port vertex, then each hexagon with the completion that
/// directs ŵ1 → w2. The result is always parity-correct; it is acyclic iff
/// the assignment satisfies every clause.
pub fn orientation_from_assignment(
    artifact: &ReductionArtifact,
    assignment: &Assignment,
) -> Result<Orientation, ReductionError> {
    let formula = artifact.source.formula();
    if assignment.len() != formula.variable_count() {
        return Err(ReductionError::AssignmentLength { got: assignment.len(), expected: formula.variable_count() });
    }
    let graph = artifact.problem.graph();
    let mut arcs: BTreeSet<Arc> = graph.arcs().clone();
    for var in 0..formula.variable_count() {
        arcs.extend(variable_mode_arcs(artifact, var, VariableMode::from_value(assignment.value(var)))?);
    }
    for j in 0..formula.clause_count() {
        let ports = artifact.clause_ports(j)?;
        let mut inward = [false; 6];
        for k in 0..3 {
            for (slot, port, corner) in [(2 * k, ports.v[k], ports.w[k]), (2 * k + 1, ports.v_hat[k], ports.w_hat[k])] {
                let outside = graph.neighbors(port).find(|&x| x != corner).ok_or(ReductionError::UndirectedBoundary {
                    clause: j,
                    port: k,
                })?;
                let from_outside = arcs.contains(&Arc::new(outside, port));
                // The port vertex has degree 2: its other link makes up the
                // parity.
                let into_corner = from_outside == artifact.problem.is_odd(port);
                inward[slot] = into_corner;
                arcs.insert(if into_corner { Arc::new(port, corner) } else { Arc::new(corner, port) });
            }
        }
        arcs.extend(complete_hexagon(&ports.hexagon(), &inward));
    }
    Ok(Orientation::new(graph, arcs).expect("every link is directed"))
}

/// `forward[i]` directs hexagon link `i` from corner `i` to corner `i + 1`.
/// Starts from link 1 (ŵ1 → w2) and walks the parity around.
fn complete_hexagon(hex: &[VertexId; 6], inward: &[bool; 6]) -> Vec<Arc> {
    let mut forward = [false; 6];
    forward[1] = true;
    for step in 2..8 {
        let i = step % 6;
        forward[i] = forward[(i + 5) % 6] ^ inward[i];
    }
    debug_assert_eq!(forward[1], forward[0] ^ inward[1], "hexagon parity closes");
    (0..6)
        .map(|i| {
            let (a, b) = (hex[i], hex[(i + 1) % 6]);
            if forward[i] {
                Arc::new(a, b)
            } else {
                Arc::new(b, a)
            }
        })
        .collect()
}

/// Reads each variable's value off its gadget. Variables that occur in no
/// clause have no gadget and read as false.
pub fn assignment_from_orientation(
    artifact: &ReductionArtifact,
    orientation: &Orientation,
) -> Result<Assignment, ReductionError> {
    let n = artifact.source.formula().variable_count();
    let mut values = vec![false; n];
    for (var, value) in values.iter_mut().enumerate() {
        if artifact.copy_count(var) == 0 {
            continue;
        }
        let out = variable_mode_arcs(artifact, var, VariableMode::Out)?;
        if out.iter().all(|a| orientation.contains(a)) {
            *value = true;
            continue;
        }
        let inn = variable_mode_arcs(artifact, var, VariableMode::In)?;
        if !inn.iter().all(|a| orientation.contains(a)) {
            return Err(ReductionError::MalformedWitness(var));
        }
    }
    Ok(Assignment(values))
}

/// Number of ports pointing into a clause hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseClass(pub u8);

impl fmt::Display for ClauseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

pub fn clause_boundary_class(
    artifact: &ReductionArtifact,
    clause: usize,
    orientation: &Orientation,
) -> Result<ClauseClass, ReductionError> {
    let ports = artifact.clause_ports(clause)?;
    let mut count = 0;
    for k in 0..3 {
        let dir = |port: VertexId, corner: VertexId| {
            orientation
                .direction_of(port, corner)
                .map(|a| a.head == corner)
                .ok_or(ReductionError::UndirectedBoundary { clause, port: k })
        };
        match (dir(ports.v[k], ports.w[k])?, dir(ports.v_hat[k], ports.w_hat[k])?) {
            (true, true) => count += 1,
            (false, false) => {}
            _ => return Err(ReductionError::MixedPort { clause, port: k }),
        }
    }
    Ok(ClauseClass(count))
}
