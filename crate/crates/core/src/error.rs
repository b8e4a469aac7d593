use std::fmt;

use crate::generator::CatalogId;

/// Errors raised by the network algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown taxon `{0}`")]
    UnknownTaxon(String),
    #[error("taxon set must not be empty")]
    EmptyTaxonSet,
    #[error("restriction needs at least 2 taxa, got {0}")]
    RestrictionTooSmall(usize),
    #[error("network has {0} leaves, need at least 3")]
    TooFewLeaves(usize),
    #[error("network is not simple")]
    NotSimple,
    #[error("network has no reticulation, it has no underlying generator")]
    NoGenerator,
    #[error("generator matches no catalog entry")]
    UnknownGenerator,
    #[error("trinet generator {found:?} does not match {expected:?}")]
    GeneratorMismatch {
        expected: CatalogId,
        found: CatalogId,
    },
    #[error("reticulation side {0} has no leaf")]
    EmptyReticulationSide(String),
    #[error("invalid side assignment: {0}")]
    InvalidAssignment(String),
    #[error("empty trinet collection")]
    EmptyCollection,
    #[error("insufficient trinets: no cut-arc set can be found on {0} taxa")]
    InsufficientTrinets(usize),
    #[error("entry `{0}` is level {1}, only level-2 input is supported")]
    LevelTooHigh(String, usize),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("taxon `{0}` occurs in both networks")]
    LabelCollision(String),
    #[error("`{0}` is not a leaf")]
    NotALeaf(String),
    #[error("{stage}: {message}")]
    Stage { stage: Stage, message: String },
}

/// Stage of the simple-network construction, used in diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Level,
    Generator,
    ReticulationLeaves,
    ArcClasses,
    Partition,
    Alignment,
    Ordering,
    Attach,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Level => "level",
            Stage::Generator => "generator",
            Stage::ReticulationLeaves => "reticulation leaves",
            Stage::ArcClasses => "arc classes",
            Stage::Partition => "arc side partition",
            Stage::Alignment => "side alignment",
            Stage::Ordering => "side ordering",
            Stage::Attach => "attach",
        };
        f.write_str(name)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
