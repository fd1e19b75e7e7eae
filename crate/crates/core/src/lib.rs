//! Thompson's groups `F`, `T` and `V` built as groups of fractions of forest
//! categories, closed-diagram coefficients of the representations they carry,
//! and a renormalization-map engine that certifies decay of dyadic rotations.
//!
//! The crate is organised bottom-up:
//!
//! * [`categories`]: trees, forests, annular forests and the generic
//!   group-of-fractions machinery (pairs, multiplication, direct-limit action).
//! * [`thompson`]: reduced tree-pair diagrams for `F`, `T`, `V`, dyadic
//!   rationals and piecewise-linear maps.
//! * [`evaluate`]: closed trivalent diagrams and their partition functions
//!   (edge 3-colorings, face colorings, chromatic evaluation).
//! * [`renorm`]: the quadratic map on the three-dimensional space of four-boxes,
//!   its bound constant, certificate search and parameter scans.
//!
//! A narrative guide lives in the `book/` directory at the repository root; its
//! code listings are compiled and run as doc-tests of this crate.

pub mod categories;
pub mod evaluate;
pub mod renorm;
pub mod thompson;

pub use categories::{AnnularForest, Forest, FractionPair, Tree};
pub use thompson::{Dyadic, FElement, PLMap, TElement, VElement};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/forests.md")]
    mod forests {}
    #[doc = include_str!("../../../book/src/thompson.md")]
    mod thompson {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/renormalization.md")]
    mod renormalization {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
