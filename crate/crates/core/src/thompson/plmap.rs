use std::fmt;

use super::{Dyadic, ThompsonError};

/// A piecewise-linear homeomorphism of `[0, 1]` with dyadic breakpoints and
/// power-of-two slopes, stored with the minimal set of breakpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    points: Vec<(Dyadic, Dyadic)>,
}

impl PLMap {
    pub fn identity() -> PLMap {
        PLMap {
            points: vec![(Dyadic::zero(), Dyadic::zero()), (Dyadic::one(), Dyadic::one())],
        }
    }

    /// Validates and canonicalises a breakpoint list.
    pub fn from_points(points: Vec<(Dyadic, Dyadic)>) -> Result<PLMap, ThompsonError> {
        let bad = |why: &str| ThompsonError::InvalidPLMap(why.to_string());
        if points.len() < 2 {
            return Err(bad("need at least the two endpoints"));
        }
        if points[0] != (Dyadic::zero(), Dyadic::zero()) {
            return Err(bad("must start at (0, 0)"));
        }
        if points[points.len() - 1] != (Dyadic::one(), Dyadic::one()) {
            return Err(bad("must end at (1, 1)"));
        }
        for w in points.windows(2) {
            let dx = &w[1].0 - &w[0].0;
            let dy = &w[1].1 - &w[0].1;
            if dx <= Dyadic::zero() || dy <= Dyadic::zero() {
                return Err(bad("breakpoints must increase strictly"));
            }
            if slope_exponent(&dx, &dy).is_none() {
                return Err(bad("slopes must be powers of two"));
            }
        }
        let mut map = PLMap { points };
        map.merge_collinear();
        Ok(map)
    }

    pub fn points(&self) -> &[(Dyadic, Dyadic)] {
        &self.points
    }

    /// Log₂ of each segment's slope.
    pub fn slope_exponents(&self) -> Vec<i64> {
        self.points
            .windows(2)
            .map(|w| slope_exponent(&(&w[1].0 - &w[0].0), &(&w[1].1 - &w[0].1)).expect("validated"))
            .collect()
    }

    fn merge_collinear(&mut self) {
        let mut out: Vec<(Dyadic, Dyadic)> = Vec::with_capacity(self.points.len());
        for p in self.points.drain(..) {
            if out.len() >= 2 {
                let a = &out[out.len() - 2];
                let b = &out[out.len() - 1];
                let s1 = slope_exponent(&(&b.0 - &a.0), &(&b.1 - &a.1));
                let s2 = slope_exponent(&(&p.0 - &b.0), &(&p.1 - &b.1));
                if s1 == s2 {
                    out.pop();
                }
            }
            out.push(p);
        }
        self.points = out;
    }

    /// Evaluates the map at `x ∈ [0, 1]`.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        assert!(*x >= Dyadic::zero() && *x <= Dyadic::one(), "argument outside [0, 1]");
        let i = self.points.partition_point(|(px, _)| px <= x).clamp(1, self.points.len() - 1);
        let (x0, y0) = &self.points[i - 1];
        let (x1, y1) = &self.points[i];
        let k = slope_exponent(&(x1 - x0), &(y1 - y0)).expect("validated");
        y0 + &(x - x0).mul_pow2(k)
    }

    pub fn inverse(&self) -> PLMap {
        PLMap {
            points: self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        }
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &PLMap) -> PLMap {
        let inner_inv = inner.inverse();
        let mut xs: Vec<Dyadic> = inner.points.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(self.points.iter().map(|(y, _)| inner_inv.eval(y)));
        xs.sort();
        xs.dedup();
        let points = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x));
                (x, y)
            })
            .collect();
        let mut map = PLMap { points };
        map.merge_collinear();
        map
    }
}

fn slope_exponent(dx: &Dyadic, dy: &Dyadic) -> Option<i64> {
    // dy / dx = 2^k  iff  dy = dx · 2^k; both numerators odd or zero after normalisation.
    if dx.numerator() != dy.numerator() {
        return None;
    }
    Some(dx.exponent() as i64 - dy.exponent() as i64)
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn map(pts: &[(&str, &str)]) -> PLMap {
        PLMap::from_points(pts.iter().map(|(x, y)| (d(x), d(y))).collect()).unwrap()
    }

    #[test]
    fn slopes_must_be_powers_of_two() {
        let pts = vec![(d("0"), d("0")), (d("1/2"), d("3/4")), (d("1"), d("1"))];
        assert!(PLMap::from_points(pts).is_err());
    }

    #[test]
    fn collinear_points_merge() {
        let m = map(&[("0", "0"), ("1/4", "1/4"), ("1", "1")]);
        assert_eq!(m, PLMap::identity());
    }

    #[test]
    fn eval_compose_inverse() {
        let x0 = map(&[("0", "0"), ("1/2", "1/4"), ("3/4", "1/2"), ("1", "1")]);
        assert_eq!(x0.eval(&d("1/4")), d("1/8"));
        assert_eq!(x0.eval(&d("7/8")), d("3/4"));
        assert_eq!(x0.compose(&x0.inverse()), PLMap::identity());
        let sq = x0.compose(&x0);
        assert_eq!(sq.to_string(), "0->0 1/2->1/8 3/4->1/4 7/8->1/2 1->1");
        assert_eq!(sq.slope_exponents(), vec![-2, -1, 1, 2]);
    }
}
