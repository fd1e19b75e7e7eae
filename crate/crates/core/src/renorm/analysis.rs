//! Checks on the algebra behind the bound: the completed-squares rewriting of
//! the map and the inequality `‖𝓡(a)‖₁ ≤ M‖a‖₁²` on the unit sphere.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::thompson::seeded_rng;

use super::map::{Q4Vector, RenormMap};
use super::RenormError;

type Form = fn(&BigRational, &Q4Vector<BigRational>) -> BigRational;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sq(x: &BigRational) -> BigRational {
    x * x
}

/// `(p+q)² + (r + (d−2)/(d−1)·p)² − (d+1)(d−2)/(d−1)²·p²`
fn printed_b1(d: &BigRational, a: &Q4Vector<BigRational>) -> BigRational {
    let dm1 = d - int(1);
    let dm2 = d - int(2);
    sq(&(&a.p + &a.q)) + sq(&(&a.r + &dm2 / &dm1 * &a.p)) - (d + int(1)) * &dm2 / sq(&dm1) * sq(&a.p)
}

/// `−{(p+q)²/(d−1) − d(d−2)/(d−1)^e·p²}` with `e = 2` as printed.
fn printed_b2(d: &BigRational, a: &Q4Vector<BigRational>) -> BigRational {
    b2_with_exponent(d, a, 2)
}

fn corrected_b2(d: &BigRational, a: &Q4Vector<BigRational>) -> BigRational {
    b2_with_exponent(d, a, 3)
}

fn b2_with_exponent(d: &BigRational, a: &Q4Vector<BigRational>, e: usize) -> BigRational {
    let dm1 = d - int(1);
    -(sq(&(&a.p + &a.q)) / &dm1 - d * (d - int(2)) / num::pow(dm1, e) * sq(&a.p))
}

/// The printed third line repeats the first.
fn printed_b3(d: &BigRational, a: &Q4Vector<BigRational>) -> BigRational {
    printed_b1(d, a)
}

/// `(p+q)²/(d−1) − (d−2)/(d−1)³·p²`, which agrees with the raw polynomial.
fn corrected_b3(d: &BigRational, a: &Q4Vector<BigRational>) -> BigRational {
    let dm1 = d - int(1);
    sq(&(&a.p + &a.q)) / &dm1 - (d - int(2)) / num::pow(dm1, 3) * sq(&a.p)
}

/// Discrepancy between one completed-squares line and the raw polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareLine {
    pub name: &'static str,
    /// Which raw coordinate the line is compared with (1, 2 or 3).
    pub coordinate: usize,
    pub max_discrepancy: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquaresReport {
    pub d: BigRational,
    pub samples: usize,
    pub seed: u64,
    pub lines: Vec<SquareLine>,
    /// Raw and printed third coordinate at `(p, q, r) = (0, 0, 1)`.
    pub b3_at_unit_r: (BigRational, BigRational),
}

fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-1000i64..=1000)), BigInt::from(rng.gen_range(1i64..=97)))
}

/// Evaluates the raw map and each completed-squares line on random inputs
/// and records the largest absolute difference per line.
pub fn compare_square_forms(d: &BigRational, samples: usize, seed: u64) -> Result<SquaresReport, RenormError> {
    let map = RenormMap::new(d)?;
    let mut rng = seeded_rng(seed);
    let mut points: Vec<Q4Vector<BigRational>> = vec![Q4Vector::b1(), Q4Vector::b2(), Q4Vector::b3()];
    points.extend((0..samples).map(|_| Q4Vector::exact(random_rational(&mut rng), random_rational(&mut rng), random_rational(&mut rng))));
    let forms: [(&'static str, usize, Form); 5] = [
        ("b1 printed", 1, printed_b1),
        ("b2 printed", 2, printed_b2),
        ("b2 corrected", 2, corrected_b2),
        ("b3 printed", 3, printed_b3),
        ("b3 corrected", 3, corrected_b3),
    ];
    let mut lines: Vec<SquareLine> = forms
        .iter()
        .map(|&(name, coordinate, _)| SquareLine {
            name,
            coordinate,
            max_discrepancy: BigRational::zero(),
        })
        .collect();
    for a in &points {
        let raw = map.apply(a);
        for (line, (_, coordinate, form)) in lines.iter_mut().zip(&forms) {
            let target = match coordinate {
                1 => &raw.p,
                2 => &raw.q,
                _ => &raw.r,
            };
            let diff = (form(d, a) - target).abs();
            if diff > line.max_discrepancy {
                line.max_discrepancy = diff;
            }
        }
    }
    let unit_r = Q4Vector::b3();
    let b3_at_unit_r = (map.apply(&unit_r).r, printed_b3(d, &unit_r));
    Ok(SquaresReport {
        d: d.clone(),
        samples,
        seed,
        lines,
        b3_at_unit_r,
    })
}

/// The right-hand side of the norm estimate:
/// `(d+1)/(d−1)(p+q)² + (r + (d−2)/(d−1)p)² + d(d+1)(d−2)/(d−1)³ p²`.
pub fn bound_expression(d: &BigRational, a: &Q4Vector<BigRational>) -> BigRational {
    let dm1 = d - int(1);
    let dm2 = d - int(2);
    let dp1 = d + int(1);
    &dp1 / &dm1 * sq(&(&a.p + &a.q)) + sq(&(&a.r + &dm2 / &dm1 * &a.p)) + d * &dp1 * &dm2 / num::pow(dm1, 3) * sq(&a.p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub d: BigRational,
    pub m: BigRational,
    pub samples: usize,
    pub seed: u64,
    /// Samples with `‖𝓡(a)‖₁ > M`.
    pub violations: usize,
    /// Samples with `‖𝓡(a)‖₁` above the bound expression.
    pub expression_violations: usize,
    /// The largest `‖𝓡(a)‖₁` seen on the sphere.
    pub max_norm: BigRational,
    /// The bound expression at `±b₁, ±b₂, ±b₃`.
    pub extremes: Vec<(&'static str, BigRational)>,
    /// Whether the largest extreme value is attained at `±b₁` and equals `M`.
    pub extreme_max_at_b1: bool,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.expression_violations == 0 && self.extreme_max_at_b1
    }
}

/// A random point of the ℓ¹ unit sphere with dyadic coordinates.
fn sphere_point<R: Rng>(rng: &mut R) -> Q4Vector<BigRational> {
    const N: i64 = 1 << 20;
    let mut cuts = [rng.gen_range(0..=N), rng.gen_range(0..=N)];
    cuts.sort_unstable();
    let parts = [cuts[0], cuts[1] - cuts[0], N - cuts[1]];
    let mut coord = |x: i64| {
        let signed = if rng.gen::<bool>() { -x } else { x };
        BigRational::new(BigInt::from(signed), BigInt::from(N))
    };
    let p = coord(parts[0]);
    let q = coord(parts[1]);
    let r = coord(parts[2]);
    Q4Vector::exact(p, q, r)
}

/// Samples the ℓ¹ unit sphere and checks `‖𝓡(a)‖₁ ≤ M` exactly, then
/// evaluates the bound expression at the six signed basis vectors.
pub fn bound_check(d: &BigRational, samples: usize, seed: u64) -> Result<BoundReport, RenormError> {
    let map = RenormMap::new(d)?;
    let m = map.m_constant();
    let mut rng = seeded_rng(seed);
    let points: Vec<_> = (0..samples).map(|_| sphere_point(&mut rng)).collect();
    let results: Vec<(bool, bool, BigRational)> = points
        .par_iter()
        .map(|a| {
            let norm = map.apply(a).l1_upper();
            let expr = bound_expression(d, a);
            (norm > m, norm > expr, norm)
        })
        .collect();
    let violations = results.iter().filter(|r| r.0).count();
    let expression_violations = results.iter().filter(|r| r.1).count();
    let max_norm = results.into_iter().map(|r| r.2).max().unwrap_or_else(BigRational::zero);
    let one = BigRational::one();
    let names = ["+b1", "-b1", "+b2", "-b2", "+b3", "-b3"];
    let extremes: Vec<(&'static str, BigRational)> = names
        .iter()
        .enumerate()
        .map(|(i, &name)| {
            let sign = if i % 2 == 0 { one.clone() } else { -one.clone() };
            let basis = match i / 2 {
                0 => Q4Vector::b1(),
                1 => Q4Vector::b2(),
                _ => Q4Vector::b3(),
            };
            (name, bound_expression(d, &basis.scale(&sign)))
        })
        .collect();
    let top = extremes.iter().map(|(_, v)| v).max().expect("six extremes");
    let extreme_max_at_b1 = extremes[0].1 == m && extremes[1].1 == m && *top == m;
    Ok(BoundReport {
        d: d.clone(),
        m,
        samples,
        seed,
        violations,
        expression_violations,
        max_norm,
        extremes,
        extreme_max_at_b1,
    })
}
