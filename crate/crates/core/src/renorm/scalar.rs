//! Scalar fields for the renormalization engine: exact rationals, and closed
//! intervals with rational endpoints rounded outward to a fixed number of
//! significant bits.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// The arithmetic the renormalization map needs. Operations on intervals
/// enclose the exact result; on rationals they are exact.
pub trait Scalar: Clone + fmt::Debug + PartialEq {
    /// A constant in the same field (and precision) as `self`.
    fn constant(&self, q: &BigRational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `None` when the divisor may be zero.
    fn div(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    /// Lower and upper rational bounds.
    fn lower(&self) -> BigRational;
    fn upper(&self) -> BigRational;
    /// An upper bound for `|self|`.
    fn abs_upper(&self) -> BigRational {
        let (lo, hi) = (self.lower(), self.upper());
        lo.abs().max(hi.abs())
    }
    /// Total bit length of the representation, used to guard against blow-up.
    fn bit_size(&self) -> u64;
    fn is_exact(&self) -> bool;
}

impl Scalar for BigRational {
    fn constant(&self, q: &BigRational) -> Self {
        q.clone()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn lower(&self) -> BigRational {
        self.clone()
    }

    fn upper(&self) -> BigRational {
        self.clone()
    }

    fn bit_size(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    fn is_exact(&self) -> bool {
        true
    }
}

/// Number of significant bits needed to carry `digits` decimal digits, with
/// a few guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// `⌊log₂|q|⌋` for nonzero `q`.
fn floor_log2(q: &BigRational) -> i64 {
    let (n, d) = (q.numer().abs(), q.denom().clone());
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e ≤ n/d < 2^{e+1} after at most one correction
    if shift(&BigRational::from_integer(BigInt::one()), e) > BigRational::new(n.clone(), d.clone()) {
        e -= 1;
    }
    e
}

fn shift(q: &BigRational, e: i64) -> BigRational {
    let two = BigInt::from(2);
    if e >= 0 {
        q * BigRational::from_integer(num::pow(two, e as usize))
    } else {
        q / BigRational::from_integer(num::pow(two, (-e) as usize))
    }
}

/// Rounds `q` to `bits` significant bits, toward `-∞` (`up = false`) or `+∞`.
pub fn round_to_bits(q: &BigRational, bits: u32, up: bool) -> BigRational {
    if q.is_zero() {
        return q.clone();
    }
    let scale = i64::from(bits) - 1 - floor_log2(q);
    let scaled = shift(q, scale);
    let (fl, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let m = if up && !rem.is_zero() { fl + 1 } else { fl };
    shift(&BigRational::from_integer(m), -scale)
}

/// A closed interval `[lo, hi]` with endpoints carrying at most `bits`
/// significant bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
    bits: u32,
}

impl Interval {
    /// The smallest representable interval containing `[lo, hi]`.
    pub fn new(lo: &BigRational, hi: &BigRational, bits: u32) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval {
            lo: round_to_bits(lo, bits, false),
            hi: round_to_bits(hi, bits, true),
            bits,
        }
    }

    pub fn point(q: &BigRational, bits: u32) -> Interval {
        Interval::new(q, q, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }
}

impl Scalar for Interval {
    fn constant(&self, q: &BigRational) -> Self {
        Interval::point(q, self.bits)
    }

    fn add(&self, other: &Self) -> Self {
        Interval::new(&(&self.lo + &other.lo), &(&self.hi + &other.hi), self.bits)
    }

    fn sub(&self, other: &Self) -> Self {
        Interval::new(&(&self.lo - &other.hi), &(&self.hi - &other.lo), self.bits)
    }

    fn mul(&self, other: &Self) -> Self {
        let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = products.iter().min().expect("four products");
        let hi = products.iter().max().expect("four products");
        Interval::new(lo, hi, self.bits)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let one = BigRational::one();
        let recip = Interval::new(&(&one / &other.hi), &(&one / &other.lo), self.bits);
        Some(self.mul(&recip))
    }

    fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    fn lower(&self) -> BigRational {
        self.lo.clone()
    }

    fn upper(&self) -> BigRational {
        self.hi.clone()
    }

    fn bit_size(&self) -> u64 {
        self.lo.bit_size() + self.hi.bit_size()
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// Decimal expansion of `q` with `digits` digits after the point, rounded
/// toward `+∞` when `up` and toward `-∞` otherwise.
pub fn decimal_string(q: &BigRational, digits: u32, up: bool) -> String {
    let scale = num::pow(BigInt::from(10), digits as usize);
    let scaled = q * BigRational::from_integer(scale.clone());
    let (fl, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let m = if up && !rem.is_zero() { fl + 1 } else { fl };
    let negative = m.is_negative();
    let (int, frac) = m.abs().div_mod_floor(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{frac:0>width$}", width = digits as usize)
}

/// Natural logarithm of a positive rational, to double precision.
pub fn ln_rational(q: &BigRational) -> f64 {
    assert!(q.is_positive(), "logarithm of a positive number");
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_string().parse::<f64>().expect("decimal integer").ln();
    }
    let drop = bits - 64;
    let top: BigInt = n >> drop;
    top.to_string().parse::<f64>().expect("decimal integer").ln() + drop as f64 * std::f64::consts::LN_2
}
