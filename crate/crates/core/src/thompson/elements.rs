use std::fmt;
use std::str::FromStr;

use num::BigInt;

use crate::categories::{FractionPair, ParseError, PlanarForests, Tree};

use super::{Dyadic, PLMap, ThompsonError, TreePairDiagram};

/// An element of Thompson's group `F`: a reduced tree pair `T₁|T₂` sending
/// the partition of `T₂` onto that of `T₁`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FElement(TreePairDiagram);

/// An element of `T`: a reduced tree pair with a cyclic offset `mark`, so that
/// interval `i` of `T₂` goes to interval `i + mark (mod n)` of `T₁`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TElement(TreePairDiagram);

/// An element of `V`: a reduced tree pair with a leaf bijection.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VElement(TreePairDiagram);

fn check_leaves(range: &Tree, domain: &Tree) -> Result<usize, ThompsonError> {
    let (a, b) = (range.leaves(), domain.leaves());
    if a != b {
        return Err(ThompsonError::LeafCountMismatch { range: a, domain: b });
    }
    Ok(a)
}

impl FElement {
    /// Reduces the pair `(range, domain)`.
    pub fn reduce(range: Tree, domain: Tree) -> Result<FElement, ThompsonError> {
        let n = check_leaves(&range, &domain)?;
        Ok(FElement(TreePairDiagram::new(range, domain, (0..n).collect()).reduced()))
    }

    pub fn identity() -> FElement {
        FElement(TreePairDiagram::identity())
    }

    /// `x₀ = ((..).)|(.(..))`.
    pub fn x0() -> FElement {
        FElement::reduce("((..).)".parse().unwrap(), "(.(..))".parse().unwrap()).unwrap()
    }

    /// `x₁ = (.((..).))|(.(.(..)))`.
    pub fn x1() -> FElement {
        FElement::reduce("(.((..).))".parse().unwrap(), "(.(.(..)))".parse().unwrap()).unwrap()
    }

    pub fn range(&self) -> &Tree {
        &self.0.range
    }

    pub fn domain(&self) -> &Tree {
        &self.0.domain
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves()
    }

    pub fn is_identity(&self) -> bool {
        self.leaves() == 1
    }

    pub fn diagram(&self) -> &TreePairDiagram {
        &self.0
    }

    /// `self · other`, acting by `other` first.
    pub fn multiply(&self, other: &FElement) -> FElement {
        FElement(self.0.compose(&other.0))
    }

    pub fn inverse(&self) -> FElement {
        FElement(self.0.inverse())
    }

    pub fn pow(&self, k: i64) -> FElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(FElement::identity(), |acc, _| acc.multiply(&base))
    }

    pub fn to_pl_map(&self) -> PLMap {
        let xs = self.domain().partition();
        let ys = self.range().partition();
        PLMap::from_points(xs.into_iter().zip(ys).collect()).expect("tree pairs give valid PL maps")
    }

    pub fn to_fraction(&self) -> FractionPair<PlanarForests> {
        FractionPair::from_trees(self.range().clone(), self.domain().clone()).expect("equal leaves")
    }

    pub fn from_fraction(pair: &FractionPair<PlanarForests>) -> FElement {
        FElement::reduce(pair.num_tree().clone(), pair.den_tree().clone()).expect("equal leaves")
    }

    /// The image in `T` with mark 0.
    pub fn to_t(&self) -> TElement {
        TElement(self.0.clone())
    }

    pub fn to_v(&self) -> VElement {
        VElement(self.0.clone())
    }
}

impl TElement {
    pub fn reduce(range: Tree, domain: Tree, mark: i64) -> Result<TElement, ThompsonError> {
        let n = check_leaves(&range, &domain)?;
        let k = mark.rem_euclid(n as i64) as usize;
        let sigma = (0..n).map(|i| (i + k) % n).collect();
        Ok(TElement(TreePairDiagram::new(range, domain, sigma).reduced()))
    }

    pub fn identity() -> TElement {
        TElement(TreePairDiagram::identity())
    }

    pub fn range(&self) -> &Tree {
        &self.0.range
    }

    pub fn domain(&self) -> &Tree {
        &self.0.domain
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves()
    }

    pub fn mark(&self) -> usize {
        self.0.sigma[0]
    }

    pub fn is_identity(&self) -> bool {
        self.leaves() == 1
    }

    pub fn diagram(&self) -> &TreePairDiagram {
        &self.0
    }

    pub fn multiply(&self, other: &TElement) -> TElement {
        TElement(self.0.compose(&other.0))
    }

    pub fn inverse(&self) -> TElement {
        TElement(self.0.inverse())
    }

    pub fn pow(&self, k: i64) -> TElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(TElement::identity(), |acc, _| acc.multiply(&base))
    }

    /// The point of the circle `ℝ/ℤ` (represented in `[0, 1)`) that `x` goes to.
    pub fn apply(&self, x: &Dyadic) -> Dyadic {
        let (_, frac) = x.split_floor();
        self.0.apply(&frac)
    }
}

/// Rotation of the circle by `a / 2^n`, as a `T` element whose trees are both
/// the full tree of depth `n`.
pub fn rotation_element(a: u64, n: u32) -> Result<TElement, ThompsonError> {
    if n >= 63 || a >= 1u64 << n {
        return Err(ThompsonError::RotationOutOfRange { a, n });
    }
    let full = Tree::complete(n);
    TElement::reduce(full.clone(), full, a as i64)
}

impl VElement {
    pub fn reduce(range: Tree, domain: Tree, perm: Vec<usize>) -> Result<VElement, ThompsonError> {
        let n = check_leaves(&range, &domain)?;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(ThompsonError::InvalidPermutation(perm));
        }
        Ok(VElement(TreePairDiagram::new(range, domain, perm).reduced()))
    }

    pub fn identity() -> VElement {
        VElement(TreePairDiagram::identity())
    }

    pub fn range(&self) -> &Tree {
        &self.0.range
    }

    pub fn domain(&self) -> &Tree {
        &self.0.domain
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.0.sigma
    }

    pub fn is_identity(&self) -> bool {
        self.leaves() == 1
    }

    pub fn diagram(&self) -> &TreePairDiagram {
        &self.0
    }

    pub fn multiply(&self, other: &VElement) -> VElement {
        VElement(self.0.compose(&other.0))
    }

    pub fn inverse(&self) -> VElement {
        VElement(self.0.inverse())
    }

    /// Image of `x ∈ [0, 1)` under the interval exchange.
    pub fn apply(&self, x: &Dyadic) -> Dyadic {
        self.0.apply(x)
    }
}

/// Any of the three kinds, as parsed from a literal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupElement {
    F(FElement),
    T(TElement),
    V(VElement),
}

impl GroupElement {
    pub fn kind(&self) -> &'static str {
        match self {
            GroupElement::F(_) => "F",
            GroupElement::T(_) => "T",
            GroupElement::V(_) => "V",
        }
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement, ThompsonError> {
        match (self, other) {
            (GroupElement::F(a), GroupElement::F(b)) => Ok(GroupElement::F(a.multiply(b))),
            (GroupElement::T(a), GroupElement::T(b)) => Ok(GroupElement::T(a.multiply(b))),
            (GroupElement::V(a), GroupElement::V(b)) => Ok(GroupElement::V(a.multiply(b))),
            _ => Err(ThompsonError::KindMismatch {
                left: self.kind(),
                right: other.kind(),
            }),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::F(a) => GroupElement::F(a.inverse()),
            GroupElement::T(a) => GroupElement::T(a.inverse()),
            GroupElement::V(a) => GroupElement::V(a.inverse()),
        }
    }
}

fn parse_pair(s: &str) -> Result<(Tree, Tree, usize), ParseError> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let range = Tree::parse_at(bytes, &mut pos)?;
    if bytes.get(pos) != Some(&b'|') {
        return Err(ParseError::new(pos, "expected '|' between the two trees"));
    }
    pos += 1;
    let domain = Tree::parse_at(bytes, &mut pos)?;
    Ok((range, domain, pos))
}

fn domain_error(e: ThompsonError) -> ParseError {
    ParseError::new(0, e.to_string())
}

impl FromStr for FElement {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (range, domain, pos) = parse_pair(s)?;
        if pos != s.len() {
            return Err(ParseError::new(pos, "trailing input after tree pair"));
        }
        FElement::reduce(range, domain).map_err(domain_error)
    }
}

impl FromStr for TElement {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (range, domain, pos) = parse_pair(s)?;
        let mark = match s.as_bytes().get(pos) {
            None => 0,
            Some(b'@') => s[pos + 1..]
                .trim()
                .parse::<i64>()
                .map_err(|e| ParseError::new(pos + 1, format!("invalid mark: {e}")))?,
            Some(_) => return Err(ParseError::new(pos, "expected '@' followed by the mark")),
        };
        TElement::reduce(range, domain, mark).map_err(domain_error)
    }
}

impl FromStr for VElement {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (range, domain, pos) = parse_pair(s)?;
        let rest = &s[pos..];
        let perm = if rest.trim().is_empty() {
            (0..range.leaves()).collect()
        } else {
            let body = rest
                .trim_start()
                .strip_prefix('%')
                .ok_or_else(|| ParseError::new(pos, "expected '%' followed by the permutation"))?;
            body.split_whitespace()
                .map(|p| p.parse::<usize>().map_err(|e| ParseError::new(pos, format!("invalid permutation entry: {e}"))))
                .collect::<Result<Vec<_>, _>>()?
        };
        VElement::reduce(range, domain, perm).map_err(domain_error)
    }
}

impl FromStr for GroupElement {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.contains('%') {
            s.parse().map(GroupElement::V)
        } else if s.contains('@') {
            s.parse().map(GroupElement::T)
        } else {
            s.parse().map(GroupElement::F)
        }
    }
}

impl fmt::Display for FElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.range(), self.domain())
    }
}

impl fmt::Display for TElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}@{}", self.range(), self.domain(), self.mark())
    }
}

impl fmt::Display for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{} %", self.range(), self.domain())?;
        for p in self.permutation() {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::F(a) => a.fmt(f),
            GroupElement::T(a) => a.fmt(f),
            GroupElement::V(a) => a.fmt(f),
        }
    }
}

macro_rules! debug_via_display {
    ($($t:ty),*) => {$(
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($t), self)
            }
        }
    )*};
}
debug_via_display!(FElement, TElement, VElement);

/// `a / 2^n` as a dyadic rational, for rotation bookkeeping.
pub fn dyadic_angle(a: u64, n: u32) -> Dyadic {
    Dyadic::new(BigInt::from(a), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        assert!(FElement::reduce(Tree::caret(), Tree::caret()).unwrap().is_identity());
        let x0 = FElement::x0();
        assert_eq!(x0.to_string(), "((..).)|(.(..))");
        let refined = FElement::reduce("((..)(..))".parse().unwrap(), "((..)(.(..)))".parse().unwrap());
        assert!(refined.is_err());
        let refined = FElement::reduce("(((..).)(..))".parse().unwrap(), "((.(..))(..))".parse().unwrap()).unwrap();
        assert_eq!(refined.to_string(), "(((..).).)|((.(..)).)");
        let r2 = FElement::reduce("(((..).).)".parse().unwrap(), "((.(..)).)".parse().unwrap()).unwrap();
        assert_eq!(r2, refined);
    }

    #[test]
    fn x0_pl_map() {
        assert_eq!(FElement::identity().to_pl_map(), PLMap::identity());
        assert_eq!(FElement::x0().to_pl_map().to_string(), "0->0 1/2->1/4 3/4->1/2 1->1");
    }

    #[test]
    fn generators_match_pl_composition() {
        let (x0, x1) = (FElement::x0(), FElement::x1());
        let prod = x0.multiply(&x1);
        assert_eq!(prod.to_pl_map(), x0.to_pl_map().compose(&x1.to_pl_map()));
        // x1 x0 = x0 x2 with x2 = x0^-1 x1 x0
        let x2 = x0.inverse().multiply(&x1).multiply(&x0);
        assert_eq!(x1.multiply(&x0), x0.multiply(&x2));
    }

    #[test]
    fn rotations() {
        assert!(rotation_element(0, 3).unwrap().is_identity());
        let half = rotation_element(1, 1).unwrap();
        assert!(half.multiply(&half).is_identity());
        let quarter = rotation_element(1, 2).unwrap();
        assert_eq!(quarter.multiply(&quarter), rotation_element(2, 2).unwrap());
        assert_eq!(rotation_element(2, 2).unwrap(), half);
        assert!(rotation_element(4, 2).is_err());
        assert_eq!(quarter.apply(&"7/8".parse().unwrap()), "1/8".parse().unwrap());
    }

    #[test]
    fn kind_mismatch() {
        let f: GroupElement = "((..).)|(.(..))".parse().unwrap();
        let t: GroupElement = "(..)|(..)@1".parse().unwrap();
        assert_eq!(f.kind(), "F");
        assert_eq!(t.kind(), "T");
        assert!(matches!(f.multiply(&t), Err(ThompsonError::KindMismatch { .. })));
    }

    #[test]
    fn literals_round_trip() {
        for s in ["((..).)|(.(..))", "(..)|(..)@1", "((..).)|(.(..)) % 1 2 0"] {
            let g: GroupElement = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
            assert_eq!(g.to_string().parse::<GroupElement>().unwrap(), g);
        }
        assert!("(..)|(..) % 0 0".parse::<VElement>().is_err());
    }

    #[test]
    fn v_reduction_respects_order() {
        // swapping the halves of a caret is not reducible
        let swap = VElement::reduce(Tree::caret(), Tree::caret(), vec![1, 0]).unwrap();
        assert_eq!(swap.leaves(), 2);
        assert!(swap.multiply(&swap).is_identity());
        // a permutation that maps a caret order-preservingly reduces
        let v = VElement::reduce("((..).)".parse().unwrap(), "(.(..))".parse().unwrap(), vec![2, 0, 1]).unwrap();
        assert_eq!(v.to_string(), "(..)|(..) % 1 0");
    }
}
