use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::categories::ParseError;

/// An exact dyadic rational `numerator / 2^exponent`, kept in lowest terms
/// (odd numerator, or exponent 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: BigInt, exponent: u32) -> Dyadic {
        let mut d = Dyadic { numerator, exponent };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn zero() -> Dyadic {
        Dyadic::from_int(0)
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(1)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0).min(self.exponent as u64) as u32;
        if tz > 0 {
            self.numerator >>= tz as usize;
            self.exponent -= tz;
        }
    }

    /// `self · 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if k >= 0 {
            let k = k as u64;
            if k <= self.exponent as u64 {
                Dyadic::new(self.numerator.clone(), self.exponent - k as u32)
            } else {
                Dyadic::new(&self.numerator << (k - self.exponent as u64) as usize, 0)
            }
        } else {
            Dyadic::new(self.numerator.clone(), self.exponent + (-k) as u32)
        }
    }

    /// If `self` is `±2^k`, returns `k`.
    pub fn log2_exact(&self) -> Option<i64> {
        if !self.numerator.is_positive() {
            None
        } else if self.exponent > 0 {
            self.numerator.is_one().then(|| -(self.exponent as i64))
        } else {
            (self.numerator.magnitude().count_ones() == 1).then(|| self.numerator.bits() as i64 - 1)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), BigInt::one() << self.exponent as usize)
    }

    /// Integer part and fractional part, `floor(self)` and `self - floor(self)`.
    pub fn split_floor(&self) -> (BigInt, Dyadic) {
        let den = BigInt::one() << self.exponent as usize;
        let (q, r) = self.numerator.div_mod_floor(&den);
        (q, Dyadic::new(r, self.exponent))
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u32) {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent) as usize;
        let b = &other.numerator << (e - other.exponent) as usize;
        (a, b, e)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numerator * &rhs.numerator, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic::new(-&self.numerator, self.exponent)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, BigInt::one() << self.exponent as usize)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Dyadic {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| ParseError::new(0, "invalid numerator"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseError::new(s.find('/').map_or(0, |i| i + 1), "invalid denominator"))?;
        if !den.is_positive() || den.magnitude().count_ones() != 1 {
            return Err(ParseError::new(s.find('/').map_or(0, |i| i + 1), "denominator must be a power of two"));
        }
        Ok(Dyadic::new(num, den.trailing_zeros().unwrap_or(0) as u32))
    }
}
