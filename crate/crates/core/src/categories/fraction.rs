use std::fmt;
use std::str::FromStr;

use super::{common_refinement, CategoryError, Forest, ParseError, Tree};

/// A small category with a unit object in which any two morphisms out of the
/// unit can be stabilised, `p ∘ f = q ∘ g`, and cancellation holds. Such a
/// category has a group of fractions.
pub trait FractionCategory {
    type Morphism: Clone + PartialEq + fmt::Debug;

    /// The identity on the unit object.
    fn unit(&self) -> Self::Morphism;

    /// Stacks `then` after `first`.
    fn compose(&self, first: &Self::Morphism, then: &Self::Morphism) -> Result<Self::Morphism, CategoryError>;

    /// For `f`, `g` out of the unit, returns `(p, q)` with `f` then `p` equal to
    /// `g` then `q`.
    fn stabilize(&self, f: &Self::Morphism, g: &Self::Morphism) -> (Self::Morphism, Self::Morphism);
}

/// The category of planar binary forests; its unit is the one-leaf tree and
/// stabilisation uses the minimal common refinement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlanarForests;

impl FractionCategory for PlanarForests {
    type Morphism = Forest;

    fn unit(&self) -> Forest {
        Forest::trivial(1)
    }

    fn compose(&self, first: &Forest, then: &Forest) -> Result<Forest, CategoryError> {
        Forest::compose(first, then)
    }

    fn stabilize(&self, f: &Forest, g: &Forest) -> (Forest, Forest) {
        let (f, g) = match (f.as_tree(), g.as_tree()) {
            (Some(f), Some(g)) => (f, g),
            _ => panic!("stabilize expects morphisms out of the unit object"),
        };
        let (_, p, q) = common_refinement(f, g);
        (p, q)
    }
}

/// An ordered pair `(num, den)` of morphisms out of the unit with a common
/// target; the equivalence class is a group element.
#[derive(Clone, PartialEq)]
pub struct FractionPair<C: FractionCategory = PlanarForests> {
    pub num: C::Morphism,
    pub den: C::Morphism,
}

impl<C: FractionCategory> fmt::Debug for FractionPair<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FractionPair").field("num", &self.num).field("den", &self.den).finish()
    }
}

impl<C: FractionCategory> FractionPair<C> {
    pub fn new(num: C::Morphism, den: C::Morphism) -> Self {
        FractionPair { num, den }
    }

    pub fn identity(cat: &C) -> Self {
        FractionPair {
            num: cat.unit(),
            den: cat.unit(),
        }
    }

    /// `[(f, g)]⁻¹ = [(g, f)]`.
    pub fn inverse(&self) -> Self {
        FractionPair {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    /// `(f₁, g₁)(f₂, g₂) = (p f₁, q g₂)` where `p g₁ = q f₂`.
    pub fn multiply(&self, other: &Self, cat: &C) -> Self {
        let (p, q) = cat.stabilize(&self.den, &other.num);
        FractionPair {
            num: cat.compose(&self.num, &p).expect("stabilisers compose"),
            den: cat.compose(&other.den, &q).expect("stabilisers compose"),
        }
    }

    /// Equivalence of pairs: stabilise the numerators and compare the
    /// correspondingly refined denominators.
    pub fn equivalent(&self, other: &Self, cat: &C) -> bool {
        let (p, q) = cat.stabilize(&self.num, &other.num);
        cat.compose(&self.den, &p).ok() == cat.compose(&other.den, &q).ok()
    }

    /// Refines both components by the same morphism `p`.
    pub fn refine(&self, p: &C::Morphism, cat: &C) -> Result<Self, CategoryError> {
        Ok(FractionPair {
            num: cat.compose(&self.num, p)?,
            den: cat.compose(&self.den, p)?,
        })
    }
}

pub fn fraction_multiply<C: FractionCategory>(a: &FractionPair<C>, b: &FractionPair<C>, cat: &C) -> FractionPair<C> {
    a.multiply(b, cat)
}

pub fn fraction_equals<C: FractionCategory>(a: &FractionPair<C>, b: &FractionPair<C>, cat: &C) -> bool {
    a.equivalent(b, cat)
}

impl FractionPair<PlanarForests> {
    pub fn from_trees(num: Tree, den: Tree) -> Result<Self, CategoryError> {
        if num.leaves() != den.leaves() {
            return Err(CategoryError::LeafCountMismatch {
                num: num.leaves(),
                den: den.leaves(),
            });
        }
        Ok(FractionPair {
            num: Forest::single(num),
            den: Forest::single(den),
        })
    }

    pub fn num_tree(&self) -> &Tree {
        self.num.as_tree().expect("morphism out of the unit")
    }

    pub fn den_tree(&self) -> &Tree {
        self.den.as_tree().expect("morphism out of the unit")
    }

    /// The representative with no caret common to both trees.
    pub fn reduced(&self) -> Self {
        let mut num = self.num_tree().clone();
        let mut den = self.den_tree().clone();
        'outer: loop {
            for i in den.caret_positions() {
                if num.has_caret_at(i) {
                    num = num.collapse_caret(i).expect("caret present");
                    den = den.collapse_caret(i).expect("caret present");
                    continue 'outer;
                }
            }
            break;
        }
        FractionPair {
            num: Forest::single(num),
            den: Forest::single(den),
        }
    }
}

impl fmt::Display for FractionPair<PlanarForests> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.num, self.den)
    }
}

impl FromStr for FractionPair<PlanarForests> {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let num = Tree::parse_at(bytes, &mut pos)?;
        if bytes.get(pos) != Some(&b'|') {
            return Err(ParseError::new(pos, "expected '|' between the two trees"));
        }
        pos += 1;
        let den = Tree::parse_at(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(ParseError::new(pos, "trailing input after tree pair"));
        }
        FractionPair::from_trees(num, den).map_err(|e| ParseError::new(0, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> FractionPair {
        s.parse().unwrap()
    }

    #[test]
    fn inverse_and_identity() {
        let cat = PlanarForests;
        let x0 = p("((..).)|(.(..))");
        let id = FractionPair::identity(&cat);
        assert!(x0.multiply(&x0.inverse(), &cat).equivalent(&id, &cat));
        assert!(id.multiply(&x0, &cat).equivalent(&x0, &cat));
    }

    #[test]
    fn equivalence_examples() {
        let cat = PlanarForests;
        assert!(p("(..)|(..)").equivalent(&p(".|."), &cat));
        let x0 = p("((..).)|(.(..))");
        assert!(!x0.equivalent(&x0.inverse(), &cat));
        let refined = x0.refine(&"(..),.,.".parse().unwrap(), &cat).unwrap();
        assert!(refined.equivalent(&x0, &cat));
        assert_eq!(refined.reduced(), x0);
    }

    #[test]
    fn x0_squared() {
        let cat = PlanarForests;
        let x0 = p("((..).)|(.(..))");
        let sq = x0.multiply(&x0, &cat);
        assert_eq!(sq.num_tree().leaves(), 4);
        assert_eq!(sq.reduced().to_string(), "(((..).).)|(.(.(..)))");
    }

    #[test]
    fn leaf_count_mismatch_rejected() {
        assert!("(..)|.".parse::<FractionPair>().is_err());
    }
}
