//! Builds an orientation instance from a planar 3-SAT formula, and maps
//! assignments to orientations and back.
//!
//! Every variable occurrence gets a ten-vertex base gadget; the copies of a
//! variable are linked in a ring that admits exactly two acyclic parity
//! orientations, one with all connectors pointing out (true) and one with
//! all pointing in (false). Every clause gets a hexagon with three ports.
//! The hexagon is forced into a directed cycle exactly when no port points
//! into it.

mod assemble;
mod check;
mod gadgets;
mod mapping;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::p3sat::{IncidenceNode, PlanarFormula, RotationSystem};
use crate::pdgraph::{OrientationProblem, VertexId};

pub use assemble::assemble;
pub use check::{structural_check, verify_equivalence, EquivalenceError, EquivalenceReport, StructuralReport};
pub use gadgets::{
    base_gadget_instance, base_gadget_self_check, clause_completions, clause_gadget_instance,
    variable_gadget_instance, ClauseCompletion, GadgetInstance,
};
pub use mapping::{
    assignment_from_orientation, clause_boundary_class, orientation_from_assignment, variable_mode_arcs,
    ClauseClass, VariableMode,
};

/// Vertex roles inside one base gadget. `u` and `û` are the connector ends
/// on the outer path, `s` and `t` link neighboring copies on the inner path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseRole {
    U,
    A,
    B,
    C,
    D,
    UHat,
    S,
    E,
    F,
    T,
}

impl BaseRole {
    pub const ALL: [BaseRole; 10] = [
        BaseRole::U,
        BaseRole::A,
        BaseRole::B,
        BaseRole::C,
        BaseRole::D,
        BaseRole::UHat,
        BaseRole::S,
        BaseRole::E,
        BaseRole::F,
        BaseRole::T,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    fn symbol(self) -> &'static str {
        match self {
            BaseRole::U => "u",
            BaseRole::A => "a",
            BaseRole::B => "b",
            BaseRole::C => "c",
            BaseRole::D => "d",
            BaseRole::UHat => "û",
            BaseRole::S => "s",
            BaseRole::E => "e",
            BaseRole::F => "f",
            BaseRole::T => "t",
        }
    }
}

/// Vertex roles inside a clause gadget; the index is the 0-based port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseRole {
    W(usize),
    WHat(usize),
    V(usize),
    VHat(usize),
}

impl ClauseRole {
    fn parts(self) -> (&'static str, usize) {
        match self {
            ClauseRole::W(k) => ("w", k),
            ClauseRole::WHat(k) => ("ŵ", k),
            ClauseRole::V(k) => ("v", k),
            ClauseRole::VHat(k) => ("v\u{302}", k),
        }
    }
}

/// What a vertex of an assembled instance stands for. Indices are 0-based
/// and printed 1-based, e.g. `û_2^3` is role û of variable 2, copy 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GadgetLabel {
    Base { var: usize, copy: usize, role: BaseRole },
    Clause { clause: usize, role: ClauseRole },
}

impl fmt::Display for GadgetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GadgetLabel::Base { var, copy, role } => write!(f, "{}_{}^{}", role.symbol(), var + 1, copy + 1),
            GadgetLabel::Clause { clause, role } => {
                let (sym, k) = role.parts();
                write!(f, "{}_{}^{}", sym, k + 1, clause + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a gadget label: {0:?}")]
pub struct LabelParseError(pub String);

impl FromStr for GadgetLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabelParseError(s.to_string());
        let (sym, rest) = s.split_once('_').ok_or_else(bad)?;
        let (lower, upper) = rest.split_once('^').ok_or_else(bad)?;
        let lower: usize = lower.parse().map_err(|_| bad())?;
        let upper: usize = upper.parse().map_err(|_| bad())?;
        let (lower, upper) = (lower.checked_sub(1).ok_or_else(bad)?, upper.checked_sub(1).ok_or_else(bad)?);
        if let Some(role) = BaseRole::ALL.into_iter().find(|r| r.symbol() == sym) {
            return Ok(GadgetLabel::Base { var: lower, copy: upper, role });
        }
        let role = match sym {
            "w" => ClauseRole::W(lower),
            "ŵ" => ClauseRole::WHat(lower),
            "v" => ClauseRole::V(lower),
            "v\u{302}" => ClauseRole::VHat(lower),
            _ => return Err(bad()),
        };
        if lower >= 3 {
            return Err(bad());
        }
        Ok(GadgetLabel::Clause { clause: upper, role })
    }
}

/// The ten vertices of one base gadget, indexed by [`BaseRole::index`].
pub type BaseCopy = [VertexId; 10];

/// The twelve vertices of a clause gadget, by port.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClausePorts {
    pub w: [VertexId; 3],
    pub w_hat: [VertexId; 3],
    pub v: [VertexId; 3],
    pub v_hat: [VertexId; 3],
}

impl ClausePorts {
    /// The hexagon in cyclic order w1 ŵ1 w2 ŵ2 w3 ŵ3.
    pub fn hexagon(&self) -> [VertexId; 6] {
        [self.w[0], self.w_hat[0], self.w[1], self.w_hat[1], self.w[2], self.w_hat[2]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("label {0} is used twice")]
    DuplicateLabel(GadgetLabel),
    #[error("vertex {0} has two labels")]
    DuplicateVertex(VertexId),
}

/// Two-way map between vertices and gadget labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GadgetRegistry {
    by_vertex: BTreeMap<VertexId, GadgetLabel>,
    by_label: BTreeMap<GadgetLabel, VertexId>,
}

impl GadgetRegistry {
    pub fn insert(&mut self, v: VertexId, label: GadgetLabel) -> Result<(), RegistryError> {
        if self.by_label.contains_key(&label) {
            return Err(RegistryError::DuplicateLabel(label));
        }
        if self.by_vertex.contains_key(&v) {
            return Err(RegistryError::DuplicateVertex(v));
        }
        self.by_vertex.insert(v, label);
        self.by_label.insert(label, v);
        Ok(())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, GadgetLabel)>) -> Result<Self, RegistryError> {
        let mut r = GadgetRegistry::default();
        for (v, l) in pairs {
            r.insert(v, l)?;
        }
        Ok(r)
    }

    pub fn len(&self) -> usize {
        self.by_vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_vertex.is_empty()
    }

    pub fn label(&self, v: VertexId) -> Option<GadgetLabel> {
        self.by_vertex.get(&v).copied()
    }

    pub fn vertex(&self, label: GadgetLabel) -> Option<VertexId> {
        self.by_label.get(&label).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, GadgetLabel)> + '_ {
        self.by_vertex.iter().map(|(&v, &l)| (v, l))
    }

    /// Both directions agree and no label or vertex repeats.
    pub fn is_bijective(&self) -> bool {
        self.by_vertex.len() == self.by_label.len()
            && self.by_vertex.iter().all(|(v, l)| self.by_label.get(l) == Some(v))
    }

    pub fn base_copy(&self, var: usize, copy: usize) -> Option<BaseCopy> {
        let mut out = [VertexId(0); 10];
        for role in BaseRole::ALL {
            out[role.index()] = self.vertex(GadgetLabel::Base { var, copy, role })?;
        }
        Some(out)
    }

    /// Number of base gadgets registered for `var`.
    pub fn copy_count(&self, var: usize) -> usize {
        (0..).take_while(|&k| self.vertex(GadgetLabel::Base { var, copy: k, role: BaseRole::U }).is_some()).count()
    }

    pub fn clause_ports(&self, clause: usize) -> Option<ClausePorts> {
        let get = |role| self.vertex(GadgetLabel::Clause { clause, role });
        let mut p = ClausePorts { w: [VertexId(0); 3], w_hat: [VertexId(0); 3], v: [VertexId(0); 3], v_hat: [VertexId(0); 3] };
        for k in 0..3 {
            p.w[k] = get(ClauseRole::W(k))?;
            p.w_hat[k] = get(ClauseRole::WHat(k))?;
            p.v[k] = get(ClauseRole::V(k))?;
            p.v_hat[k] = get(ClauseRole::VHat(k))?;
        }
        Some(p)
    }
}

/// An assembled instance with everything needed to interpret it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub problem: OrientationProblem,
    pub registry: GadgetRegistry,
    pub rotation: RotationSystem<VertexId>,
    pub source: PlanarFormula,
}

impl ReductionArtifact {
    pub fn base_copy(&self, var: usize, copy: usize) -> Result<BaseCopy, ReductionError> {
        self.registry.base_copy(var, copy).ok_or(ReductionError::MissingGadget(IncidenceNode::Variable(var)))
    }

    pub fn clause_ports(&self, clause: usize) -> Result<ClausePorts, ReductionError> {
        self.registry.clause_ports(clause).ok_or(ReductionError::MissingGadget(IncidenceNode::Clause(clause)))
    }

    pub fn copy_count(&self, var: usize) -> usize {
        self.source.formula().occurrences(var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("registry has no complete gadget for {0}")]
    MissingGadget(IncidenceNode),
    #[error("assignment covers {got} variables, formula has {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error("malformed witness: gadget of x{} matches neither mode", .0 + 1)]
    MalformedWitness(usize),
    #[error("clause c{}: port {} has an undirected matching edge", .clause + 1, .port + 1)]
    UndirectedBoundary { clause: usize, port: usize },
    #[error("clause c{}: port {} points both into and out of the hexagon", .clause + 1, .port + 1)]
    MixedPort { clause: usize, port: usize },
    #[error("connector of {0} is missing")]
    MissingConnector(GadgetLabel),
}
