use std::fmt;
use std::str::FromStr;

use super::{CategoryError, ParseError, Tree};

/// A planar binary forest: an ordered, nonempty list of trees.
///
/// As a morphism it goes from `roots()` to `leaves()`. Composition stacks an
/// upper forest onto the leaves of a lower one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    pub fn from_trees(trees: Vec<Tree>) -> Result<Forest, CategoryError> {
        if trees.is_empty() {
            return Err(CategoryError::EmptyForest);
        }
        Ok(Forest { trees })
    }

    pub fn single(tree: Tree) -> Forest {
        Forest { trees: vec![tree] }
    }

    /// The identity morphism on `n`: `n` bare leaves.
    pub fn trivial(n: usize) -> Forest {
        assert!(n > 0, "forests have at least one root");
        Forest {
            trees: vec![Tree::Leaf; n],
        }
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn into_trees(self) -> Vec<Tree> {
        self.trees
    }

    pub fn roots(&self) -> usize {
        self.trees.len()
    }

    pub fn leaves(&self) -> usize {
        self.trees.iter().map(Tree::leaves).sum()
    }

    pub fn carets(&self) -> usize {
        self.leaves() - self.roots()
    }

    pub fn is_trivial(&self) -> bool {
        self.trees.iter().all(Tree::is_leaf)
    }

    /// The single tree of a one-root forest.
    pub fn as_tree(&self) -> Option<&Tree> {
        match self.trees.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    /// Index of the first leaf of each tree, plus the total leaf count.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.trees.len() + 1);
        let mut acc = 0;
        out.push(0);
        for t in &self.trees {
            acc += t.leaves();
            out.push(acc);
        }
        out
    }

    /// Cyclically rotates the list of trees so that tree `k` comes first.
    pub fn rotate_left(&self, k: usize) -> Forest {
        let mut trees = self.trees.clone();
        let n = trees.len();
        trees.rotate_left(k % n);
        Forest { trees }
    }

    /// Stacks `upper` on `lower`: the `i`-th tree of `upper` is attached to the
    /// `i`-th leaf of `lower`.
    pub fn compose(lower: &Forest, upper: &Forest) -> Result<Forest, CategoryError> {
        if lower.leaves() != upper.roots() {
            return Err(CategoryError::ArityMismatch {
                leaves: lower.leaves(),
                roots: upper.roots(),
            });
        }
        let mut it = upper.trees.iter();
        let trees = lower.trees.iter().map(|t| t.graft_iter(&mut it)).collect();
        Ok(Forest { trees })
    }

    /// Stacks `self` on top of `lower`.
    pub fn after(&self, lower: &Forest) -> Result<Forest, CategoryError> {
        Forest::compose(lower, self)
    }
}

/// Stacks `upper` on top of `lower`.
pub fn compose_forests(lower: &Forest, upper: &Forest) -> Result<Forest, CategoryError> {
    Forest::compose(lower, upper)
}

/// Minimal common refinement of two trees: returns `(u, p, q)` with
/// `u = s ∘ p = t ∘ q`, where `u`'s partition is the union of the partitions of
/// `s` and `t`.
pub fn common_refinement(s: &Tree, t: &Tree) -> (Tree, Forest, Forest) {
    let u = s.union(t);
    let p = u.quotient(s).expect("union refines s");
    let q = u.quotient(t).expect("union refines t");
    (u, p, q)
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Self {
        Forest::single(t)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({self})")
    }
}

impl Forest {
    pub(crate) fn parse_at(s: &[u8], pos: &mut usize) -> Result<Forest, ParseError> {
        let mut trees = vec![Tree::parse_at(s, pos)?];
        while s.get(*pos) == Some(&b',') {
            *pos += 1;
            trees.push(Tree::parse_at(s, pos)?);
        }
        Ok(Forest { trees })
    }
}

impl FromStr for Forest {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let f = Forest::parse_at(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(ParseError::new(pos, "trailing input after forest"));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Forest {
        s.parse().unwrap()
    }

    #[test]
    fn leaf_lower_is_identity() {
        let t = f("((..)(.(..)))");
        assert_eq!(Forest::compose(&f("."), &t).unwrap(), t);
    }

    #[test]
    fn caret_then_caret_leaf() {
        assert_eq!(Forest::compose(&f("(..)"), &f("(..),.")).unwrap(), f("((..).)"));
    }

    #[test]
    fn arity_mismatch() {
        let e = Forest::compose(&f("(..)"), &f("(..)")).unwrap_err();
        assert_eq!(e, CategoryError::ArityMismatch { leaves: 2, roots: 1 });
    }

    #[test]
    fn associativity_spot_check() {
        let a = f("(..),(.(..))");
        let b = f(".,(..),.,.,.");
        let c = f(".,.,.,(..),.,.");
        let left = Forest::compose(&Forest::compose(&a, &b).unwrap(), &c).unwrap();
        let right = Forest::compose(&a, &Forest::compose(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.roots(), 2);
        assert_eq!(left.leaves(), 7);
    }

    #[test]
    fn refinement_examples() {
        let t: Tree = "((..)(.(..)))".parse().unwrap();
        let (u, p, q) = common_refinement(&t, &t);
        assert_eq!(u, t);
        assert!(p.is_trivial() && q.is_trivial());

        let (u, p, q) = common_refinement(&Tree::caret(), &"((..).)".parse().unwrap());
        assert_eq!(u.to_string(), "((..).)");
        assert_eq!(p, f("(..),."));
        assert!(q.is_trivial());

        let s: Tree = "((..).)".parse().unwrap();
        let t: Tree = "(.(..))".parse().unwrap();
        let (u, p, q) = common_refinement(&s, &t);
        assert_eq!(u.to_string(), "((..)(..))");
        assert_eq!(s.graft(&p).unwrap(), u);
        assert_eq!(t.graft(&q).unwrap(), u);
    }
}
