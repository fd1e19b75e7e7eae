//! Forest categories and the group-of-fractions construction.

mod annular;
mod forest;
mod fraction;
mod limit;
mod tree;

pub use annular::{annular_compose, AnnularForest};
pub use forest::{common_refinement, compose_forests, Forest};
pub use fraction::{fraction_equals, fraction_multiply, FractionCategory, FractionPair, PlanarForests};
pub use limit::{limit_act, limit_equivalent, limit_inner, Functor, LimitVector};
pub use tree::{tree_count, Tree};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("cannot stack a forest with {roots} roots on {leaves} leaves")]
    ArityMismatch { leaves: usize, roots: usize },
    #[error("a forest needs at least one tree")]
    EmptyForest,
    #[error("tree pair has {num} and {den} leaves")]
    LeafCountMismatch { num: usize, den: usize },
}

/// A literal that failed to parse, with the byte offset of the problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}
