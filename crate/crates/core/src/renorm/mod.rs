//! The quadratic renormalization map on the three-dimensional space of
//! four-boxes, the bound constant `M(d)`, decay certificates, parameter scans
//! and decay profiles.
//!
//! Coordinates are taken in the basis `{b₁, b₂, b₃}`: `b₁` is the two-vertex
//! four-box and `b₂`, `b₃` the two Temperley–Lieb four-boxes, labelled so that
//! `𝓡(b₃) = b₁`.
//!
//! When `d` is rational everything is exact. Otherwise `d` is enclosed in an
//! interval and every reported norm is a rigorous upper bound.

mod analysis;
mod certify;
mod map;
mod param;
mod scalar;

pub use analysis::{bound_check, bound_expression, compare_square_forms, BoundReport, SquareLine, SquaresReport};
pub use certify::{
    decay_profile, find_certificate, iterate_norms, scan, Certificate, DecayRow, Failure, FailureReason, NormStep, Number, Outcome, ScanReport,
    ScanRow, VariantVerdict, DIVERGENCE_BOUND, EXACT_BIT_LIMIT,
};
pub use map::{bilinear_map, m_constant, renorm_map, Q4Vector, RenormMap};
pub use param::{four_cos_squared, parse_rational, LoopParameter, ParamValue, Provenance, Variant};
pub use scalar::{bits_for_digits, decimal_string, ln_rational, round_to_bits, Interval, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenormError {
    #[error("loop parameter {0} is not known to exceed 1")]
    LoopParameterOutOfRange(String),
    #[error("exact iteration exhausted its precision budget at step {step} ({bits} bits)")]
    PrecisionExhausted { step: usize, bits: u64 },
    #[error("at least one step is required")]
    ZeroSteps,
    #[error("no decay certificate: {0}")]
    NoCertificate(String),
    #[error("scan range {from}..={to} is invalid (need 5 <= from <= to)")]
    InvalidRange { from: u32, to: u32 },
    #[error("family index m = {0} is invalid")]
    InvalidFamilyIndex(u32),
    #[error("unknown variant `{0}` (expected plus or minus)")]
    UnknownVariant(String),
    #[error("cannot parse `{0}` as a rational number")]
    InvalidNumber(String),
}
