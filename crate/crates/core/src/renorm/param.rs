use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::scalar::{bits_for_digits, decimal_string, Interval, Scalar};
use super::RenormError;

/// The two readings of the loop-parameter family `4cos²(π/m) ± 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plus,
    Minus,
}

impl Variant {
    pub fn sign(self) -> i64 {
        match self {
            Variant::Plus => 1,
            Variant::Minus => -1,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plus => "plus",
            Variant::Minus => "minus",
        })
    }
}

impl FromStr for Variant {
    type Err = RenormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" => Ok(Variant::Plus),
            "minus" => Ok(Variant::Minus),
            _ => Err(RenormError::UnknownVariant(s.to_string())),
        }
    }
}

/// Where a loop parameter came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    Family { m: u32, variant: Variant },
}

/// The value of `d`: exact, or an enclosing interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Exact(BigRational),
    Enclosed { value: Interval, digits: u32 },
}

/// The loop parameter `d` together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopParameter {
    pub value: ParamValue,
    pub provenance: Provenance,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `C_m(x)` with `C_0 = 2`, `C_1 = x`, `C_{k+1} = x·C_k − C_{k−1}`, so that
/// `C_m(2cos θ) = 2cos(mθ)`.
fn vieta_lucas(m: u32, x: &BigRational) -> BigRational {
    let (mut prev, mut cur) = (q(2), x.clone());
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = x * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// An interval around `4cos²(π/m)` with `bits` significant bits, or the exact
/// value when it is rational.
pub fn four_cos_squared(m: u32, bits: u32) -> Result<Result<BigRational, Interval>, RenormError> {
    let exact = match m {
        0 => return Err(RenormError::InvalidFamilyIndex(m)),
        1 => Some(4),
        2 => Some(0),
        3 => Some(1),
        4 => Some(2),
        6 => Some(3),
        _ => None,
    };
    if let Some(v) = exact {
        return Ok(Ok(q(v)));
    }
    // y = 2cos(π/(2m)) is the largest root of C_m, and lies in [2 − 2.5/m², 2].
    let mut lo = q(2) - BigRational::new(BigInt::from(5), BigInt::from(2u64 * u64::from(m) * u64::from(m)));
    let mut hi = q(2);
    assert!(vieta_lucas(m, &lo).is_negative(), "C_m changes sign on the bracket");
    assert!(vieta_lucas(m, &hi).is_positive(), "C_m changes sign on the bracket");
    let target = BigRational::new(BigInt::one(), num::pow(BigInt::from(2), bits as usize + 4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    while &hi - &lo > target {
        let mid = (&lo + &hi) * &half;
        if vieta_lucas(m, &mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // δ = y² − 2 = 2cos(π/m) is positive here, so δ² is monotone in y.
    let two = q(2);
    let d_lo = &lo * &lo - &two;
    let d_hi = &hi * &hi - &two;
    assert!(d_lo.is_positive());
    Ok(Err(Interval::new(&(&d_lo * &d_lo), &(&d_hi * &d_hi), bits)))
}

impl LoopParameter {
    pub fn exact(d: BigRational) -> LoopParameter {
        LoopParameter {
            value: ParamValue::Exact(d),
            provenance: Provenance::Explicit,
        }
    }

    /// `d = 4cos²(π/m) ± 1`, exact where possible and otherwise enclosed at
    /// `digits` decimal digits.
    pub fn family(m: u32, variant: Variant, digits: u32) -> Result<LoopParameter, RenormError> {
        let bits = bits_for_digits(digits);
        let shift = q(variant.sign());
        let value = match four_cos_squared(m, bits)? {
            Ok(v) => ParamValue::Exact(v + shift),
            Err(iv) => ParamValue::Enclosed {
                value: iv.add(&iv.constant(&shift)),
                digits,
            },
        };
        let p = LoopParameter {
            value,
            provenance: Provenance::Family { m, variant },
        };
        Ok(p)
    }

    /// Lower bound on `d`.
    pub fn lower(&self) -> BigRational {
        match &self.value {
            ParamValue::Exact(d) => d.clone(),
            ParamValue::Enclosed { value, .. } => value.lower(),
        }
    }

    pub fn upper(&self) -> BigRational {
        match &self.value {
            ParamValue::Exact(d) => d.clone(),
            ParamValue::Enclosed { value, .. } => value.upper(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.value, ParamValue::Exact(_))
    }

    /// Digits used for enclosures, if any.
    pub fn digits(&self) -> Option<u32> {
        match &self.value {
            ParamValue::Exact(_) => None,
            ParamValue::Enclosed { digits, .. } => Some(*digits),
        }
    }

    /// Whether `d > 1` is guaranteed.
    pub fn check_domain(&self) -> Result<(), RenormError> {
        if self.lower() > BigRational::one() {
            Ok(())
        } else {
            Err(RenormError::LoopParameterOutOfRange(self.to_string()))
        }
    }
}

impl fmt::Display for LoopParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ParamValue::Exact(d) => write!(f, "{d}"),
            ParamValue::Enclosed { value, digits } => {
                // midpoint to the stated number of digits; the enclosure is much tighter
                let mid = (value.lo() + value.hi()) / q(2);
                write!(f, "{}", decimal_string(&mid, *digits, false))
            }
        }
    }
}

/// Parses a loop parameter as an exact rational: `3`, `9/4`, `2.25`.
pub fn parse_rational(s: &str) -> Result<BigRational, RenormError> {
    let bad = || RenormError::InvalidNumber(s.to_string());
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let scale = num::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = BigRational::new(int_part.abs() * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_family_members() {
        let d6 = LoopParameter::family(6, Variant::Minus, 60).unwrap();
        assert_eq!(d6.value, ParamValue::Exact(q(2)));
        let d3 = LoopParameter::family(3, Variant::Plus, 60).unwrap();
        assert_eq!(d3.value, ParamValue::Exact(q(2)));
    }

    #[test]
    fn golden_ratio_for_m5() {
        let d5 = LoopParameter::family(5, Variant::Minus, 40).unwrap();
        // 4cos²(π/5) − 1 = φ = (1+√5)/2
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let lo: f64 = decimal_string(&d5.lower(), 17, false).parse().unwrap();
        let hi: f64 = decimal_string(&d5.upper(), 17, true).parse().unwrap();
        assert!(lo <= phi + 1e-15 && phi - 1e-15 <= hi);
        assert!(d5.upper() - d5.lower() < BigRational::new(1.into(), num::pow(BigInt::from(10), 40)));
    }

    #[test]
    fn m7_value() {
        let d7 = LoopParameter::family(7, Variant::Minus, 30).unwrap();
        assert!(d7.to_string().starts_with("2.2469796037"), "{d7}");
    }

    #[test]
    fn parse_numbers() {
        assert_eq!(parse_rational("9/4").unwrap(), BigRational::new(9.into(), 4.into()));
        assert_eq!(parse_rational("2.25").unwrap(), BigRational::new(9.into(), 4.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("3").unwrap(), q(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
