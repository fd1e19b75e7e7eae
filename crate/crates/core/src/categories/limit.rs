//! The direct system attached to a functor out of a fraction category, and the
//! action of the group of fractions on its limit.

use super::{FractionCategory, FractionPair};

/// A functor from a fraction category to vector spaces, restricted to what the
/// direct limit needs: pushing vectors along morphisms and an inner product on
/// each space.
pub trait Functor<C: FractionCategory> {
    type Vector: Clone;
    type Scalar;
    type Error;

    /// `Φ(p)(v)`.
    fn apply(&self, p: &C::Morphism, v: &Self::Vector) -> Self::Vector;

    /// Inner product of two vectors living in the same space.
    fn inner(&self, a: &Self::Vector, b: &Self::Vector) -> Result<Self::Scalar, Self::Error>;
}

/// A representative `(anchor, payload)` of a vector in the direct limit: the
/// payload lives in the space attached to the anchor's target.
#[derive(Clone)]
pub struct LimitVector<C: FractionCategory, V> {
    pub anchor: C::Morphism,
    pub payload: V,
}

impl<C: FractionCategory, V: Clone> LimitVector<C, V> {
    pub fn new(anchor: C::Morphism, payload: V) -> Self {
        LimitVector { anchor, payload }
    }

    /// Moves the representative along `p`: `(f, v) ≅ (p f, Φ(p) v)`.
    pub fn refine<F>(&self, p: &C::Morphism, cat: &C, phi: &F) -> Self
    where
        F: Functor<C, Vector = V>,
    {
        LimitVector {
            anchor: cat.compose(&self.anchor, p).expect("refinement composes"),
            payload: phi.apply(p, &self.payload),
        }
    }
}

/// `(f₁, g₁) · (f₂, v) = (p f₁, Φ(q) v)` with `p g₁ = q f₂`.
pub fn limit_act<C, F>(g: &FractionPair<C>, v: &LimitVector<C, F::Vector>, cat: &C, phi: &F) -> LimitVector<C, F::Vector>
where
    C: FractionCategory,
    F: Functor<C>,
{
    let (p, q) = cat.stabilize(&g.den, &v.anchor);
    LimitVector {
        anchor: cat.compose(&g.num, &p).expect("stabilisers compose"),
        payload: phi.apply(&q, &v.payload),
    }
}

/// Inner product in the limit: bring both representatives to a common anchor.
pub fn limit_inner<C, F>(a: &LimitVector<C, F::Vector>, b: &LimitVector<C, F::Vector>, cat: &C, phi: &F) -> Result<F::Scalar, F::Error>
where
    C: FractionCategory,
    F: Functor<C>,
{
    let (p, q) = cat.stabilize(&a.anchor, &b.anchor);
    phi.inner(&phi.apply(&p, &a.payload), &phi.apply(&q, &b.payload))
}

/// Whether two representatives define the same limit vector, judged by
/// comparing payloads at a common anchor.
pub fn limit_equivalent<C, F>(a: &LimitVector<C, F::Vector>, b: &LimitVector<C, F::Vector>, cat: &C, phi: &F) -> bool
where
    C: FractionCategory,
    F: Functor<C>,
    F::Vector: PartialEq,
{
    let (p, q) = cat.stabilize(&a.anchor, &b.anchor);
    phi.apply(&p, &a.payload) == phi.apply(&q, &b.payload)
}
