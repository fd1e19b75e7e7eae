use std::fmt;
use std::str::FromStr;

use super::{CategoryError, Forest, ParseError};

/// A periodic (annular) forest, stored as a planar forest plus a leaf shift.
///
/// Roots and leaves are indexed by integers, periodically: the tree on root
/// `r` (for `0 <= r < roots`) owns the leaves
/// `offset(r) + shift .. offset(r + 1) + shift`, and root `r + t·roots` owns the
/// same leaves moved by `t·leaves`. The pair `(forest, shift)` is therefore the
/// unique normal form `ρ^shift ∘ forest` and `shift` ranges over all integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnnularForest {
    forest: Forest,
    shift: i64,
}

impl AnnularForest {
    pub fn new(forest: Forest, shift: i64) -> AnnularForest {
        AnnularForest { forest, shift }
    }

    /// The planar forest `F` viewed as an annular forest with shift 0.
    pub fn planar(forest: Forest) -> AnnularForest {
        AnnularForest { forest, shift: 0 }
    }

    /// `ρ_n^k`: the one-step rotation on `n` points raised to `k`.
    pub fn rotation(n: usize, k: i64) -> AnnularForest {
        AnnularForest {
            forest: Forest::trivial(n),
            shift: k,
        }
    }

    /// `τ_n = ρ_n^n`, a full turn.
    pub fn full_turn(n: usize) -> AnnularForest {
        AnnularForest::rotation(n, n as i64)
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn roots(&self) -> usize {
        self.forest.roots()
    }

    pub fn leaves(&self) -> usize {
        self.forest.leaves()
    }

    /// Inverse of a rotation `ρ_n^k`; forests with carets are not invertible.
    pub fn rotation_inverse(&self) -> Option<AnnularForest> {
        self.forest.is_trivial().then(|| AnnularForest::rotation(self.roots(), -self.shift))
    }

    /// Stacks `upper` on `lower`, matching leaf `j` of `lower` with root `j` of
    /// `upper` for every integer `j`.
    pub fn compose(lower: &AnnularForest, upper: &AnnularForest) -> Result<AnnularForest, CategoryError> {
        let n = lower.leaves();
        if n != upper.roots() {
            return Err(CategoryError::ArityMismatch {
                leaves: n,
                roots: upper.roots(),
            });
        }
        let n_i = n as i64;
        let start = lower.shift.rem_euclid(n_i) as usize;
        let turns = lower.shift.div_euclid(n_i);
        let rotated = upper.forest.rotate_left(start);
        let forest = Forest::compose(&lower.forest, &rotated)?;
        let upper_offsets = upper.forest.offsets();
        let shift = upper_offsets[start] as i64 + upper.shift + turns * upper.leaves() as i64;
        Ok(AnnularForest { forest, shift })
    }
}

/// `annular_compose(a, b)`: `b` stacked on top of `a`.
pub fn annular_compose(a: &AnnularForest, b: &AnnularForest) -> Result<AnnularForest, CategoryError> {
    AnnularForest::compose(a, b)
}

impl fmt::Display for AnnularForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.forest, self.shift)
    }
}

impl fmt::Debug for AnnularForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnnularForest({self})")
    }
}

impl FromStr for AnnularForest {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let forest = Forest::parse_at(bytes, &mut pos)?;
        if bytes.get(pos) != Some(&b'@') {
            return Err(ParseError::new(pos, "expected '@' followed by the shift"));
        }
        let shift = s[pos + 1..]
            .parse::<i64>()
            .map_err(|e| ParseError::new(pos + 1, format!("invalid shift: {e}")))?;
        Ok(AnnularForest { forest, shift })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> AnnularForest {
        s.parse().unwrap()
    }

    #[test]
    fn rotations_add_exponents() {
        for n in 1..6usize {
            let r = AnnularForest::rotation(n, 1);
            let rest = AnnularForest::rotation(n, n as i64 - 1);
            assert_eq!(AnnularForest::compose(&rest, &r).unwrap(), AnnularForest::full_turn(n));
        }
        let r = AnnularForest::rotation(3, 5);
        let inv = r.rotation_inverse().unwrap();
        assert_eq!(AnnularForest::compose(&r, &inv).unwrap(), AnnularForest::rotation(3, 0));
    }

    #[test]
    fn shift_zero_is_planar_stacking() {
        let lower = a("(..),.@0");
        let upper = a(".,(..),(..)@0");
        let c = AnnularForest::compose(&lower, &upper).unwrap();
        assert_eq!(c.shift(), 0);
        assert_eq!(c.forest(), &Forest::compose(lower.forest(), upper.forest()).unwrap());
    }

    #[test]
    fn full_turn_commutes_with_forests() {
        let f = a("(..),((..).)@0");
        let below = AnnularForest::compose(&AnnularForest::full_turn(2), &f).unwrap();
        let above = AnnularForest::compose(&f, &AnnularForest::full_turn(5)).unwrap();
        assert_eq!(below, above);
        assert_eq!(above, a("(..),((..).)@5"));
    }

    #[test]
    fn literal_round_trip() {
        let x = a("(..),.@-3");
        assert_eq!(x.to_string().parse::<AnnularForest>().unwrap(), x);
        assert!("(..)@".parse::<AnnularForest>().is_err());
        assert_eq!("(..)".parse::<AnnularForest>().unwrap_err().position, 4);
    }
}
