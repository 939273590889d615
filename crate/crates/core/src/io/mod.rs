//! File formats: JSON instances and witnesses, DIMACS-style formulas with
//! rotation lines, and Graphviz export.

mod dot;
mod formula;
mod instance;

use thiserror::Error;

use crate::p3sat::{FormulaError, PlanarFormulaError};
use crate::pdgraph::{GraphError, OrientationError, ProblemError};
use crate::reduction::{LabelParseError, RegistryError};

pub use dot::export_dot;
pub use formula::{read_formula, write_formula, FormulaFile};
pub use instance::{
    read_artifact, read_instance, read_witness, write_artifact, write_instance, write_witness, InstanceExtras,
    LoadedInstance, ReadOptions, FORMAT_NAME, FORMAT_VERSION,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported document: {0}")]
    Format(String),
    #[error("embedding required: no rotation lines")]
    MissingEmbedding,
    #[error("line {line}: {message}")]
    Formula { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error(transparent)]
    Clause(#[from] FormulaError),
    #[error(transparent)]
    Planar(#[from] PlanarFormulaError),
    #[error(transparent)]
    Label(#[from] LabelParseError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
