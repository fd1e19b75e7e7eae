use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use rayon::prelude::*;

use super::map::{Q4Vector, RenormMap};
use super::param::{LoopParameter, ParamValue, Provenance, Variant};
use super::scalar::{decimal_string, ln_rational, Interval, Scalar};
use super::RenormError;

/// Exact iterates whose coordinates exceed this many bits abort with
/// [`RenormError::PrecisionExhausted`] rather than stalling.
pub const EXACT_BIT_LIMIT: u64 = 1 << 22;

/// Iterates with an ℓ¹ norm above this bound are reported as divergent and
/// the search stops.
pub const DIVERGENCE_BOUND: u64 = 1 << 40;

/// A reported quantity: exact, or a rigorous upper bound printed with a
/// stated number of digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Number {
    Exact(BigRational),
    Upper { value: BigRational, digits: u32 },
}

impl Number {
    /// The exact value, or the upper bound.
    pub fn value(&self) -> &BigRational {
        match self {
            Number::Exact(v) | Number::Upper { value: v, .. } => v,
        }
    }

    pub fn digits(&self) -> Option<u32> {
        match self {
            Number::Exact(_) => None,
            Number::Upper { digits, .. } => Some(*digits),
        }
    }
}

impl fmt::Display for Number {
    /// `p/q` for exact values; a decimal rounded up for upper bounds.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(v) => write!(f, "{v}"),
            Number::Upper { value, digits } => f.write_str(&decimal_string(value, *digits, true)),
        }
    }
}

/// `M·‖𝓡ⁿ(b₁)‖₁ < 1` at step `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub k: Number,
    pub m: Number,
    pub product: Number,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// No step up to `n_max` satisfied the inequality.
    NotReached,
    /// The bound `‖𝓡(a)‖₁ ≤ M‖a‖₁²` is only established for `d ≥ 2`.
    BoundInvalid,
    /// The norm exceeded [`DIVERGENCE_BOUND`]; the search stopped there.
    Diverged,
    /// Exact coordinates exceeded [`EXACT_BIT_LIMIT`] bits.
    PrecisionExhausted,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::NotReached => "not-reached",
            FailureReason::BoundInvalid => "bound-invalid-below-2",
            FailureReason::Diverged => "diverged",
            FailureReason::PrecisionExhausted => "precision-exhausted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub reason: FailureReason,
    /// Steps actually iterated.
    pub steps: usize,
    pub m: Number,
    /// The smallest `M·K` seen and the step where it occurred.
    pub best: Option<(usize, Number)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Certified(Certificate),
    Failed(Failure),
}

impl Outcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::Failed(_) => None,
        }
    }
}

/// One step of an orbit: `(n, ‖𝓡ⁿ(x₀)‖₁)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormStep {
    pub n: usize,
    pub l1: Number,
}

/// Dispatches on the scalar field of `d`. Built once per search, so the size
/// difference between the variants does not matter.
#[allow(clippy::large_enum_variant)]
enum Field {
    Exact(RenormMap<BigRational>),
    Enclosed(RenormMap<Interval>, u32),
}

fn field(d: &LoopParameter) -> Result<Field, RenormError> {
    d.check_domain()?;
    Ok(match &d.value {
        ParamValue::Exact(v) => Field::Exact(RenormMap::new(v)?),
        ParamValue::Enclosed { value, digits } => Field::Enclosed(RenormMap::new(value)?, *digits),
    })
}

fn orbit<S: Scalar>(map: &RenormMap<S>, x0: &Q4Vector<S>, steps: usize) -> Result<Vec<BigRational>, RenormError> {
    let mut a = x0.clone();
    let mut out = Vec::with_capacity(steps);
    for n in 1..=steps {
        a = map.apply(&a);
        if a.p.is_exact() && a.bit_size() > EXACT_BIT_LIMIT {
            return Err(RenormError::PrecisionExhausted { step: n, bits: a.bit_size() });
        }
        out.push(a.l1_upper());
    }
    Ok(out)
}

/// `‖𝓡ⁿ(x₀)‖₁` for `n = 1..=steps`: exact when `d` is rational, otherwise
/// upper bounds from outward-rounded intervals.
pub fn iterate_norms(x0: &Q4Vector<BigRational>, d: &LoopParameter, steps: usize) -> Result<Vec<NormStep>, RenormError> {
    if steps == 0 {
        return Err(RenormError::ZeroSteps);
    }
    let (norms, digits) = match field(d)? {
        Field::Exact(map) => (orbit(&map, x0, steps)?, None),
        Field::Enclosed(map, digits) => {
            let start = Q4Vector::from_rationals(map.d(), &x0.p, &x0.q, &x0.r);
            (orbit(&map, &start, steps)?, Some(digits))
        }
    };
    Ok(norms
        .into_iter()
        .enumerate()
        .map(|(i, v)| NormStep {
            n: i + 1,
            l1: wrap(v, digits),
        })
        .collect())
}

fn wrap(value: BigRational, digits: Option<u32>) -> Number {
    match digits {
        None => Number::Exact(value),
        Some(digits) => Number::Upper { value, digits },
    }
}

fn search<S: Scalar>(map: &RenormMap<S>, n_max: usize, digits: Option<u32>) -> Outcome {
    let one = BigRational::one();
    let m_hi = map.m_constant().upper();
    let m = wrap(m_hi.clone(), digits);
    let fail = |reason, steps, best: Option<(usize, BigRational)>| {
        Outcome::Failed(Failure {
            reason,
            steps,
            m: m.clone(),
            best: best.map(|(n, v)| (n, wrap(v, digits))),
        })
    };
    if map.d().lower() < BigRational::from_integer(BigInt::from(2)) {
        return fail(FailureReason::BoundInvalid, 0, None);
    }
    let mut a = Q4Vector::basis(map.d(), 1);
    let mut best: Option<(usize, BigRational)> = None;
    let limit = BigRational::from_integer(BigInt::from(DIVERGENCE_BOUND));
    for n in 1..=n_max {
        a = map.apply(&a);
        if a.p.is_exact() && a.bit_size() > EXACT_BIT_LIMIT {
            return fail(FailureReason::PrecisionExhausted, n, best);
        }
        let k = a.l1_upper();
        let product = &m_hi * &k;
        if product < one {
            return Outcome::Certified(Certificate {
                n,
                k: wrap(k, digits),
                m,
                product: wrap(product, digits),
            });
        }
        if best.as_ref().is_none_or(|(_, b)| product < *b) {
            best = Some((n, product));
        }
        if k > limit {
            return fail(FailureReason::Diverged, n, best);
        }
    }
    fail(FailureReason::NotReached, n_max, best)
}

/// The smallest `n ≤ n_max` with `M·‖𝓡ⁿ(b₁)‖₁ < 1`, checked against upper
/// bounds when `d` is only known to lie in an interval.
pub fn find_certificate(d: &LoopParameter, n_max: usize) -> Result<Outcome, RenormError> {
    if n_max == 0 {
        return Err(RenormError::ZeroSteps);
    }
    Ok(match field(d)? {
        Field::Exact(map) => search(&map, n_max, None),
        Field::Enclosed(map, digits) => search(&map, n_max, Some(digits)),
    })
}

/// One row of a decay profile.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    pub k: Number,
    /// `ln ‖𝓡ⁿ(b₁)‖₁`, or `None` when the norm is zero.
    pub log_k: Option<f64>,
    /// `ln K_{n+1} / ln K_n`, when both are defined.
    pub ratio: Option<f64>,
    /// `K_{n+1} ≤ M·K_n²`, checked exactly on the reported values.
    pub bound_holds: Option<bool>,
}

/// Decay of `‖𝓡ⁿ(b₁)‖₁` for `n = 1..=steps`. Requires a certificate within
/// `steps` (or 64 steps, whichever is larger).
pub fn decay_profile(d: &LoopParameter, steps: usize) -> Result<(Certificate, Vec<DecayRow>), RenormError> {
    let certificate = match find_certificate(d, steps.max(64))? {
        Outcome::Certified(c) => c,
        Outcome::Failed(f) => return Err(RenormError::NoCertificate(f.reason.to_string())),
    };
    let norms = iterate_norms(&Q4Vector::b1(), d, steps + 1)?;
    let m = certificate.m.value().clone();
    let logs: Vec<Option<f64>> = norms
        .iter()
        .map(|s| (!s.l1.value().is_zero()).then(|| ln_rational(s.l1.value())))
        .collect();
    let rows = (0..steps)
        .map(|i| {
            let (k, next) = (norms[i].l1.value(), norms[i + 1].l1.value());
            let ratio = match (logs[i], logs[i + 1]) {
                (Some(a), Some(b)) if a != 0.0 => Some(b / a),
                _ => None,
            };
            DecayRow {
                n: norms[i].n,
                k: norms[i].l1.clone(),
                log_k: logs[i],
                ratio,
                bound_holds: Some(*next <= &m * k * k),
            }
        })
        .collect();
    Ok((certificate, rows))
}

/// One parameter point of a scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub d: LoopParameter,
    pub outcome: Result<Outcome, RenormError>,
}

impl ScanRow {
    pub fn family(&self) -> Option<(u32, Variant)> {
        match self.d.provenance {
            Provenance::Family { m, variant } => Some((m, variant)),
            Provenance::Explicit => None,
        }
    }

    pub fn certified(&self) -> bool {
        matches!(&self.outcome, Ok(o) if o.is_certified())
    }
}

/// How one variant's outcomes compare with the claimed pattern: certified for
/// `m = 7..=20`, failing for `m = 5, 6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantVerdict {
    pub variant: Variant,
    /// Values of `m` whose outcome contradicts the claim.
    pub mismatches: Vec<u32>,
    /// Values of `m` in the claimed range that were scanned.
    pub assessed: usize,
}

impl VariantVerdict {
    pub fn matches(&self) -> bool {
        self.assessed > 0 && self.mismatches.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub n_max: usize,
    pub digits: u32,
    pub verdicts: Vec<VariantVerdict>,
    /// Whether `d = 3` certified, when it was included.
    pub d3: Option<bool>,
}

fn claimed(m: u32) -> Option<bool> {
    match m {
        5 | 6 => Some(false),
        7..=20 => Some(true),
        _ => None,
    }
}

impl ScanReport {
    /// A one-line summary naming the variant that reproduces the claim.
    pub fn verdict_line(&self) -> String {
        let matching: Vec<String> = self.verdicts.iter().filter(|v| v.matches()).map(|v| v.variant.to_string()).collect();
        let mut parts = Vec::new();
        for v in &self.verdicts {
            if v.matches() {
                parts.push(format!("{} matches the claimed pattern ({} values of m assessed)", v.variant, v.assessed));
            } else if v.assessed == 0 {
                parts.push(format!("{} was not assessed (no m in 5..=20)", v.variant));
            } else {
                let list: Vec<String> = v.mismatches.iter().map(u32::to_string).collect();
                parts.push(format!("{} disagrees at m = {}", v.variant, list.join(", ")));
            }
        }
        if let Some(ok) = self.d3 {
            parts.push(format!("d = 3 {}", if ok { "certified" } else { "not certified" }));
        }
        let head = match matching.as_slice() {
            [] => "verdict: no variant reproduces the claimed pattern".to_string(),
            [one] => format!("verdict: {one}"),
            many => format!("verdict: {} (ambiguous)", many.join(" and ")),
        };
        format!("{head}; {}", parts.join("; "))
    }
}

/// Runs [`find_certificate`] for every `m` in `m_from..=m_to` and every
/// requested variant (plus first, then minus), optionally followed by `d = 3`.
/// Rows are computed in parallel and reported in parameter order.
pub fn scan(m_from: u32, m_to: u32, variants: &[Variant], include_d3: bool, n_max: usize, digits: u32) -> Result<ScanReport, RenormError> {
    if m_from < 5 || m_from > m_to {
        return Err(RenormError::InvalidRange { from: m_from, to: m_to });
    }
    let mut params = Vec::new();
    for &variant in variants {
        for m in m_from..=m_to {
            params.push(LoopParameter::family(m, variant, digits)?);
        }
    }
    if include_d3 {
        params.push(LoopParameter::exact(BigRational::from_integer(BigInt::from(3))));
    }
    let rows: Vec<ScanRow> = params
        .into_par_iter()
        .map(|d| {
            let outcome = find_certificate(&d, n_max);
            ScanRow { d, outcome }
        })
        .collect();
    let verdicts = variants
        .iter()
        .map(|&variant| {
            let mut mismatches = Vec::new();
            let mut assessed = 0;
            for row in &rows {
                if let Some((m, v)) = row.family() {
                    if v != variant {
                        continue;
                    }
                    if let Some(expected) = claimed(m) {
                        assessed += 1;
                        if row.certified() != expected {
                            mismatches.push(m);
                        }
                    }
                }
            }
            VariantVerdict { variant, mismatches, assessed }
        })
        .collect();
    let d3 = include_d3.then(|| rows.last().is_some_and(ScanRow::certified));
    Ok(ScanReport {
        rows,
        n_max,
        digits,
        verdicts,
        d3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn exact(n: i64) -> LoopParameter {
        LoopParameter::exact(q(n, 1))
    }

    #[test]
    fn certificate_at_three() {
        let c = find_certificate(&exact(3), 64).unwrap();
        assert_eq!(
            c,
            Outcome::Certified(Certificate {
                n: 2,
                k: Number::Exact(q(7, 32)),
                m: Number::Exact(q(15, 4)),
                product: Number::Exact(q(105, 128)),
            })
        );
    }

    #[test]
    fn one_step_is_not_enough_at_three() {
        let Outcome::Failed(f) = find_certificate(&exact(3), 1).unwrap() else {
            panic!("one step cannot certify");
        };
        assert_eq!(f.reason, FailureReason::NotReached);
        assert_eq!(f.best, Some((1, Number::Exact(q(45, 16)))));
    }

    #[test]
    fn fails_at_two() {
        let Outcome::Failed(f) = find_certificate(&exact(2), 64).unwrap() else {
            panic!("d = 2 should not certify");
        };
        assert_ne!(f.reason, FailureReason::BoundInvalid);
    }

    #[test]
    fn norms_at_three() {
        let steps = iterate_norms(&Q4Vector::b1(), &exact(3), 2).unwrap();
        let values: Vec<_> = steps.iter().map(|s| s.l1.clone()).collect();
        assert_eq!(values, vec![Number::Exact(q(3, 4)), Number::Exact(q(7, 32))]);
    }

    #[test]
    fn b3_orbit_is_shifted_b1_orbit() {
        let from_b3 = iterate_norms(&Q4Vector::b3(), &exact(3), 4).unwrap();
        let from_b1 = iterate_norms(&Q4Vector::b1(), &exact(3), 3).unwrap();
        assert_eq!(from_b3[0].l1, Number::Exact(q(1, 1)));
        for i in 0..3 {
            assert_eq!(from_b3[i + 1].l1, from_b1[i].l1);
        }
    }

    #[test]
    fn interval_mode_encloses_exact() {
        // an exact parameter pushed through the interval engine
        let d = q(3, 1);
        let iv = Interval::point(&d, 200);
        let param = LoopParameter {
            value: ParamValue::Enclosed { value: iv, digits: 50 },
            provenance: Provenance::Explicit,
        };
        let bounds = iterate_norms(&Q4Vector::b1(), &param, 5).unwrap();
        let exact_norms = iterate_norms(&Q4Vector::b1(), &exact(3), 5).unwrap();
        for (b, e) in bounds.iter().zip(&exact_norms) {
            assert!(b.l1.value() >= e.l1.value());
            assert!(b.l1.value() - e.l1.value() < q(1, 1_000_000_000));
        }
    }

    #[test]
    fn m7_minus_certifies() {
        let d = LoopParameter::family(7, Variant::Minus, 60).unwrap();
        assert!(find_certificate(&d, 64).unwrap().is_certified());
    }

    #[test]
    fn scan_m6_minus() {
        let report = scan(6, 6, &[Variant::Minus], false, 64, 60).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].d.lower(), q(2, 1));
        assert!(!report.rows[0].certified());
    }

    #[test]
    fn decay_needs_certificate() {
        assert!(decay_profile(&exact(2), 6).is_err());
        let (_, rows) = decay_profile(&exact(3), 6).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.bound_holds == Some(true)));
    }
}
