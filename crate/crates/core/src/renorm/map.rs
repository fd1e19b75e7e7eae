use num::{BigInt, BigRational, One};

use super::scalar::Scalar;
use super::RenormError;

/// Coordinates `(p, q, r)` of `p b₁ + q b₂ + r b₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q4Vector<S> {
    pub p: S,
    pub q: S,
    pub r: S,
}

impl<S: Scalar> Q4Vector<S> {
    pub fn new(p: S, q: S, r: S) -> Self {
        Q4Vector { p, q, r }
    }

    /// Builds a vector in the scalar field of `like` from rational coordinates.
    pub fn from_rationals(like: &S, p: &BigRational, q: &BigRational, r: &BigRational) -> Self {
        Q4Vector::new(like.constant(p), like.constant(q), like.constant(r))
    }

    pub fn basis(like: &S, i: usize) -> Self {
        let (z, o) = (BigRational::from_integer(BigInt::from(0)), BigRational::one());
        match i {
            1 => Q4Vector::from_rationals(like, &o, &z, &z),
            2 => Q4Vector::from_rationals(like, &z, &o, &z),
            3 => Q4Vector::from_rationals(like, &z, &z, &o),
            _ => panic!("basis index is 1, 2 or 3"),
        }
    }

    /// An upper bound for `|p| + |q| + |r|` (exact for rationals).
    pub fn l1_upper(&self) -> BigRational {
        self.p.abs_upper() + self.q.abs_upper() + self.r.abs_upper()
    }

    pub fn add(&self, other: &Self) -> Self {
        Q4Vector::new(self.p.add(&other.p), self.q.add(&other.q), self.r.add(&other.r))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Q4Vector::new(self.p.sub(&other.p), self.q.sub(&other.q), self.r.sub(&other.r))
    }

    pub fn scale(&self, s: &S) -> Self {
        Q4Vector::new(self.p.mul(s), self.q.mul(s), self.r.mul(s))
    }

    pub fn bit_size(&self) -> u64 {
        self.p.bit_size() + self.q.bit_size() + self.r.bit_size()
    }
}

impl Q4Vector<BigRational> {
    pub fn exact(p: BigRational, q: BigRational, r: BigRational) -> Self {
        Q4Vector { p, q, r }
    }

    pub fn b1() -> Self {
        Q4Vector::basis(&BigRational::one(), 1)
    }

    pub fn b2() -> Self {
        Q4Vector::basis(&BigRational::one(), 2)
    }

    pub fn b3() -> Self {
        Q4Vector::basis(&BigRational::one(), 3)
    }
}

/// The renormalization map at a fixed loop parameter, with its coefficients
/// precomputed.
#[derive(Clone, Debug)]
pub struct RenormMap<S> {
    d: S,
    two: S,
    /// `(d²−5d+7)/(d−1)²`
    pp1: S,
    /// `2(d−2)/(d−1)`
    pr1: S,
    /// `1/(d−1)³`
    pp2: S,
    /// `1/(d−1)`
    inv: S,
    /// `(d²−3d+3)/(d−1)³`
    pp3: S,
}

impl<S: Scalar> RenormMap<S> {
    pub fn new(d: &S) -> Result<Self, RenormError> {
        let c = |n: i64| d.constant(&BigRational::from_integer(BigInt::from(n)));
        let dm1 = d.sub(&c(1));
        if dm1.lower() <= BigRational::from_integer(BigInt::from(0)) {
            return Err(RenormError::LoopParameterOutOfRange(format!("{:?}", d.lower())));
        }
        let dm1_2 = dm1.mul(&dm1);
        let dm1_3 = dm1_2.mul(&dm1);
        let d2 = d.mul(d);
        let div = |a: &S, b: &S| a.div(b).expect("d − 1 is bounded away from zero");
        let pp1 = div(&d2.sub(&d.mul(&c(5))).add(&c(7)), &dm1_2);
        let pr1 = div(&d.sub(&c(2)).mul(&c(2)), &dm1);
        let pp2 = div(&c(1), &dm1_3);
        let inv = div(&c(1), &dm1);
        let pp3 = div(&d2.sub(&d.mul(&c(3))).add(&c(3)), &dm1_3);
        Ok(RenormMap {
            d: d.clone(),
            two: c(2),
            pp1,
            pr1,
            pp2,
            inv,
            pp3,
        })
    }

    pub fn d(&self) -> &S {
        &self.d
    }

    /// `𝓡(a)` from the displayed polynomial.
    pub fn apply(&self, a: &Q4Vector<S>) -> Q4Vector<S> {
        let (p, q, r) = (&a.p, &a.q, &a.r);
        let pp = p.mul(p);
        let pq2 = p.mul(q).mul(&self.two);
        let qq = q.mul(q);
        let mixed = pq2.add(&qq).mul(&self.inv);
        let p1 = self.pp1.mul(&pp).add(&pq2).add(&self.pr1.mul(&p.mul(r))).add(&qq).add(&r.mul(r));
        let q1 = self.pp2.mul(&pp).add(&mixed).neg();
        let r1 = self.pp3.mul(&pp).add(&mixed);
        Q4Vector::new(p1, q1, r1)
    }

    /// `𝓑(x, y) = (𝓡(x+y) − 𝓡(x) − 𝓡(y)) / 2`.
    pub fn bilinear(&self, x: &Q4Vector<S>, y: &Q4Vector<S>) -> Q4Vector<S> {
        let sum = self.apply(&x.add(y)).sub(&self.apply(x)).sub(&self.apply(y));
        let half = self.two.constant(&BigRational::new(BigInt::from(1), BigInt::from(2)));
        sum.scale(&half)
    }

    /// `M = (d+1)/(d−1) + ((d−2)/(d−1))² + d(d+1)(d−2)/(d−1)³`.
    pub fn m_constant(&self) -> S {
        let d = &self.d;
        let c = |n: i64| d.constant(&BigRational::from_integer(BigInt::from(n)));
        let dp1 = d.add(&c(1));
        let dm2 = d.sub(&c(2));
        let t1 = dp1.mul(&self.inv);
        let t2 = dm2.mul(&self.inv);
        let t3 = d.mul(&dp1).mul(&dm2).mul(&self.inv).mul(&self.inv).mul(&self.inv);
        t1.add(&t2.mul(&t2)).add(&t3)
    }
}

/// `𝓡(a)` over the rationals.
pub fn renorm_map(a: &Q4Vector<BigRational>, d: &BigRational) -> Result<Q4Vector<BigRational>, RenormError> {
    Ok(RenormMap::new(d)?.apply(a))
}

/// `𝓑(x, y)` over the rationals, by polarization.
pub fn bilinear_map(x: &Q4Vector<BigRational>, y: &Q4Vector<BigRational>, d: &BigRational) -> Result<Q4Vector<BigRational>, RenormError> {
    Ok(RenormMap::new(d)?.bilinear(x, y))
}

/// The bound constant `M(d)`.
pub fn m_constant(d: &BigRational) -> Result<BigRational, RenormError> {
    Ok(RenormMap::new(d)?.m_constant())
}
