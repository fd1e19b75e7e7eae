//! Thompson's groups `F`, `T` and `V` through reduced tree-pair diagrams.

mod diagram;
mod dyadic;
mod elements;
mod plmap;
mod random;

pub use diagram::TreePairDiagram;
pub use dyadic::Dyadic;
pub use elements::{dyadic_angle, rotation_element, FElement, GroupElement, TElement, VElement};
pub use plmap::PLMap;
pub use random::{random_element, random_f_with, random_t_with, random_tree, random_v_with, seeded_rng};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThompsonError {
    #[error("tree pair has {range} and {domain} leaves")]
    LeafCountMismatch { range: usize, domain: usize },
    #[error("cannot multiply an element of {left} by an element of {right}")]
    KindMismatch { left: &'static str, right: &'static str },
    #[error("rotation {a}/2^{n} is out of range")]
    RotationOutOfRange { a: u64, n: u32 },
    #[error("not a permutation of the leaves: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("invalid PL map: {0}")]
    InvalidPLMap(String),
}
