//! Closed trivalent diagrams attached to elements of `F` and their partition
//! functions: tensor contraction (edge 3-colorings), map colorings of the
//! faces, and a chromatic-polynomial evaluator for the quotient planar algebra.

mod chromatic;
mod coloring;
mod diagram;
mod tensor;

pub use chromatic::{chromatic_polynomial, chromatic_value, ChromaticPolynomial};
pub use coloring::{edge_coloring_count, face_coloring_count, vertex_coloring_count};
pub use diagram::{closed_graph, ClosedDiagram};
pub use tensor::{apply_forest, phi_forest, LinearMap, TensorFunctor, VertexTensor, WeightedVector};

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Zero};
use thiserror::Error;

use crate::categories::{limit_act, limit_inner, Forest, LimitVector, PlanarForests};
use crate::thompson::FElement;

/// Exact values of closed diagrams and coefficients.
pub type PartitionValue = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("a vertex tensor of dimension {k} needs k^3 entries, got {len}")]
    TensorShape { k: usize, len: usize },
    #[error("vertex tensor fails the unitarity condition")]
    NotUnitary,
    #[error("total vertex weight {0} is odd; the normalization is not rational")]
    IrrationalNormalization(u32),
    #[error("the loop parameter d = 1 is singular")]
    SingularLoopParameter,
    #[error("graph with {0} vertices exceeds the 64-vertex limit")]
    TooLarge(usize),
    #[error("unknown model `{0}` (expected edge3, face:<n> or chromatic)")]
    UnknownModel(String),
}

/// Which closed-diagram evaluation a coefficient uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    /// Proper edge 3-colorings, normalized by the vertex tensor's unitarity constant.
    Edge3,
    /// Proper face colorings with `n` colors, divided by `n`.
    Face(usize),
    /// The chromatic evaluation at loop parameter `d`, divided by `d`.
    Chromatic(BigRational),
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Edge3 => f.write_str("edge3"),
            Model::Face(n) => write!(f, "face:{n}"),
            Model::Chromatic(_) => f.write_str("chromatic"),
        }
    }
}

impl FromStr for Model {
    type Err = EvalError;

    /// Parses `edge3` or `face:<n>`; `chromatic` needs a loop parameter and is
    /// built with [`Model::Chromatic`] directly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge3" => Ok(Model::Edge3),
            _ => match s.strip_prefix("face:").and_then(|n| n.parse().ok()) {
                Some(n) if n >= 1 => Ok(Model::Face(n)),
                _ => Err(EvalError::UnknownModel(s.to_string())),
            },
        }
    }
}

/// `⟨π(g)Ω, Ω⟩` in the chosen model, computed from the closed diagram of `g`.
pub fn coefficient(g: &FElement, model: &Model) -> Result<PartitionValue, EvalError> {
    let d = closed_graph(g);
    match model {
        Model::Edge3 => {
            let c = VertexTensor::three_coloring().unitarity_constant()?;
            let count = BigRational::from_integer(edge_coloring_count(&d, 3));
            let scale = num::pow(c, d.vertex_count() / 2) * BigRational::from_integer(3.into());
            Ok(count / scale)
        }
        Model::Face(n) => {
            let count = face_coloring_count(&d, *n);
            Ok(BigRational::new(count, BigInt::from(*n)))
        }
        Model::Chromatic(loop_parameter) => {
            if loop_parameter.is_zero() {
                return Err(EvalError::SingularLoopParameter);
            }
            Ok(chromatic_value(&d, loop_parameter)? / loop_parameter)
        }
    }
}

/// `⟨g·Ω, Ω⟩` computed in the direct limit of the tensor functor, without
/// building the closed diagram: `⟨Φ(T₂)Ω, Φ(T₁)Ω⟩`.
pub fn vacuum_coefficient(g: &FElement, phi: &TensorFunctor) -> Result<PartitionValue, EvalError> {
    let cat = PlanarForests;
    let omega = LimitVector::new(Forest::trivial(1), phi.vacuum());
    let moved = limit_act(&g.to_fraction(), &omega, &cat, phi);
    limit_inner(&moved, &omega, &cat, phi)
}

/// `face_coloring_count(g, 3) / 3`: 2 when the map can be 3-colored, else 0.
pub fn face_coefficient(g: &FElement) -> PartitionValue {
    let count = face_coloring_count(&closed_graph(g), 3);
    BigRational::new(count, BigInt::from(3))
}

/// Outcome of checking that the elements with face coefficient 2 form a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Value2Report {
    pub samples: usize,
    /// Samples whose face count at `n = 3` is neither 0 nor 6.
    pub unexpected_counts: Vec<(FElement, BigInt)>,
    /// Number of samples with face coefficient 2.
    pub members: usize,
    pub products_checked: usize,
    pub product_failures: Vec<(FElement, FElement)>,
    pub inverse_failures: Vec<FElement>,
}

impl Value2Report {
    pub fn passed(&self) -> bool {
        self.unexpected_counts.is_empty() && self.product_failures.is_empty() && self.inverse_failures.is_empty()
    }
}

/// Checks that face counts lie in {0, 6} and that the value-2 samples are
/// closed under products (all ordered pairs) and inverses.
pub fn value2_subgroup_test(sample: &[FElement]) -> Value2Report {
    let six = BigInt::from(6);
    let two = BigRational::from_integer(2.into());
    let mut unexpected_counts = Vec::new();
    let mut members = Vec::new();
    for g in sample {
        let count = face_coloring_count(&closed_graph(g), 3);
        if count == six {
            members.push(g.clone());
        } else if !count.is_zero() {
            unexpected_counts.push((g.clone(), count));
        }
    }
    let mut product_failures = Vec::new();
    let mut products_checked = 0;
    for g in &members {
        for h in &members {
            products_checked += 1;
            if face_coefficient(&g.multiply(h)) != two {
                product_failures.push((g.clone(), h.clone()));
            }
        }
    }
    let inverse_failures = members.iter().filter(|g| face_coefficient(&g.inverse()) != two).cloned().collect();
    Value2Report {
        samples: sample.len(),
        unexpected_counts,
        members: members.len(),
        products_checked,
        product_failures,
        inverse_failures,
    }
}
