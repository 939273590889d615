//! Acyclic parity-constrained orientations of partially directed graphs.
//!
//! - [`pdgraph`]: graphs with edges and fixed arcs, orientations, boundaries.
//! - [`solver`]: exhaustive oracle, backtracking search, forest and degree-2
//!   solvers, apex and empty-odd-set transforms.
//! - [`p3sat`]: planar 3-SAT formulas with rotation systems.
//! - [`reduction`]: gadget construction from a planar formula and the
//!   assignment/orientation correspondence.
//! - [`io`]: JSON instances, DIMACS-style formula files, DOT export.

pub mod pdgraph;
pub mod solver;
pub mod p3sat;

pub mod fixtures;
pub mod reduction;
pub mod io;
