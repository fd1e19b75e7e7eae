use std::fmt;
use std::str::FromStr;

use num::BigInt;

use super::{CategoryError, Forest, ParseError};
use crate::thompson::Dyadic;

/// A planar binary rooted tree.
///
/// Leaves are ordered left to right. The literal grammar is
/// `T ::= "." | "(" T T ")"`, so `((..).)` is the three-leaf tree whose left
/// child is a caret.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree::Leaf
    }

    pub fn node(left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(left), Box::new(right))
    }

    /// The two-leaf tree.
    pub fn caret() -> Tree {
        Tree::node(Tree::Leaf, Tree::Leaf)
    }

    /// The full binary tree with `2^depth` leaves.
    pub fn complete(depth: u32) -> Tree {
        if depth == 0 {
            Tree::Leaf
        } else {
            Tree::node(Tree::complete(depth - 1), Tree::complete(depth - 1))
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Number of internal (trivalent) vertices.
    pub fn carets(&self) -> usize {
        self.leaves() - 1
    }

    pub fn depth(&self) -> u32 {
        match self {
            Tree::Leaf => 0,
            Tree::Node(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Depth of every leaf, left to right.
    pub fn leaf_depths(&self) -> Vec<u32> {
        fn walk(t: &Tree, depth: u32, out: &mut Vec<u32>) {
            match t {
                Tree::Leaf => out.push(depth),
                Tree::Node(l, r) => {
                    walk(l, depth + 1, out);
                    walk(r, depth + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }

    /// Rebuilds a tree from its leaf depth sequence, if one exists.
    pub fn from_leaf_depths(depths: &[u32]) -> Option<Tree> {
        fn build(depths: &[u32], pos: &mut usize, depth: u32) -> Option<Tree> {
            let d = *depths.get(*pos)?;
            if d == depth {
                *pos += 1;
                Some(Tree::Leaf)
            } else if d > depth {
                let l = build(depths, pos, depth + 1)?;
                let r = build(depths, pos, depth + 1)?;
                Some(Tree::node(l, r))
            } else {
                None
            }
        }
        let mut pos = 0;
        let t = build(depths, &mut pos, 0)?;
        (pos == depths.len()).then_some(t)
    }

    /// Breakpoints of the standard dyadic partition of `[0, 1]` encoded by the
    /// tree. Each internal vertex halves its interval; there are `leaves + 1`
    /// breakpoints.
    pub fn partition(&self) -> Vec<Dyadic> {
        let mut out = vec![Dyadic::zero()];
        // Running sum of 2^-depth over the leaves, over the common denominator 2^max_depth.
        let max_depth = self.depth();
        let mut numerator = BigInt::from(0);
        for d in self.leaf_depths() {
            numerator += BigInt::from(1) << (max_depth - d) as usize;
            out.push(Dyadic::new(numerator.clone(), max_depth));
        }
        out
    }

    /// The coarsest tree refining both `self` and `other`: its partition is the
    /// union of the two breakpoint sets.
    pub fn union(&self, other: &Tree) -> Tree {
        match (self, other) {
            (Tree::Leaf, t) | (t, Tree::Leaf) => t.clone(),
            (Tree::Node(a, b), Tree::Node(c, d)) => Tree::node(a.union(c), b.union(d)),
        }
    }

    /// If `self` is `prefix` with trees stacked on its leaves, returns that forest.
    pub fn quotient(&self, prefix: &Tree) -> Option<Forest> {
        fn walk(t: &Tree, prefix: &Tree, out: &mut Vec<Tree>) -> bool {
            match (prefix, t) {
                (Tree::Leaf, t) => {
                    out.push(t.clone());
                    true
                }
                (Tree::Node(_, _), Tree::Leaf) => false,
                (Tree::Node(pl, pr), Tree::Node(l, r)) => walk(l, pl, out) && walk(r, pr, out),
            }
        }
        let mut out = Vec::new();
        walk(self, prefix, &mut out).then(|| Forest::from_trees(out).expect("nonempty"))
    }

    /// Stacks `forest` on top of the leaves of this tree.
    pub fn graft(&self, forest: &Forest) -> Result<Tree, CategoryError> {
        if forest.roots() != self.leaves() {
            return Err(CategoryError::ArityMismatch {
                leaves: self.leaves(),
                roots: forest.roots(),
            });
        }
        Ok(self.graft_iter(&mut forest.trees().iter()))
    }

    pub(crate) fn graft_iter<'a>(&self, upper: &mut impl Iterator<Item = &'a Tree>) -> Tree {
        match self {
            Tree::Leaf => upper.next().expect("arity checked").clone(),
            Tree::Node(l, r) => {
                let l = l.graft_iter(upper);
                let r = r.graft_iter(upper);
                Tree::node(l, r)
            }
        }
    }

    /// Adds a caret on leaf `i`.
    pub fn split_leaf(&self, i: usize) -> Tree {
        let n = self.leaves();
        assert!(i < n, "leaf {i} out of range for {n} leaves");
        let forest = Forest::from_trees(
            (0..n)
                .map(|j| if j == i { Tree::caret() } else { Tree::Leaf })
                .collect(),
        )
        .expect("nonempty");
        self.graft(&forest).expect("arity matches")
    }

    /// Indices `i` such that leaves `i` and `i + 1` are the two children of a
    /// single vertex.
    pub fn caret_positions(&self) -> Vec<usize> {
        fn walk(t: &Tree, offset: &mut usize, out: &mut Vec<usize>) {
            match t {
                Tree::Leaf => *offset += 1,
                Tree::Node(l, r) => {
                    if l.is_leaf() && r.is_leaf() {
                        out.push(*offset);
                    }
                    walk(l, offset, out);
                    walk(r, offset, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut 0, &mut out);
        out
    }

    pub fn has_caret_at(&self, i: usize) -> bool {
        fn walk(t: &Tree, offset: usize, i: usize) -> bool {
            match t {
                Tree::Leaf => false,
                Tree::Node(l, r) => {
                    if offset == i && l.is_leaf() && r.is_leaf() {
                        return true;
                    }
                    let ln = l.leaves();
                    if i < offset + ln {
                        walk(l, offset, i)
                    } else {
                        walk(r, offset + ln, i)
                    }
                }
            }
        }
        walk(self, 0, i)
    }

    /// Replaces the caret on leaves `i, i + 1` by a single leaf.
    pub fn collapse_caret(&self, i: usize) -> Option<Tree> {
        fn walk(t: &Tree, offset: usize, i: usize) -> Option<Tree> {
            match t {
                Tree::Leaf => None,
                Tree::Node(l, r) => {
                    if offset == i && l.is_leaf() && r.is_leaf() {
                        return Some(Tree::Leaf);
                    }
                    let ln = l.leaves();
                    if i < offset + ln {
                        Some(Tree::node(walk(l, offset, i)?, (**r).clone()))
                    } else {
                        Some(Tree::node((**l).clone(), walk(r, offset + ln, i)?))
                    }
                }
            }
        }
        walk(self, 0, i)
    }

    /// All trees with `n` leaves, in a fixed order.
    pub fn enumerate(n: usize) -> Vec<Tree> {
        if n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return vec![Tree::Leaf];
        }
        let mut out = Vec::new();
        for k in 1..n {
            let lefts = Tree::enumerate(k);
            let rights = Tree::enumerate(n - k);
            for l in &lefts {
                for r in &rights {
                    out.push(Tree::node(l.clone(), r.clone()));
                }
            }
        }
        out
    }

    pub(crate) fn parse_at(s: &[u8], pos: &mut usize) -> Result<Tree, ParseError> {
        match s.get(*pos) {
            Some(b'.') => {
                *pos += 1;
                Ok(Tree::Leaf)
            }
            Some(b'(') => {
                *pos += 1;
                let l = Tree::parse_at(s, pos)?;
                let r = Tree::parse_at(s, pos)?;
                match s.get(*pos) {
                    Some(b')') => {
                        *pos += 1;
                        Ok(Tree::node(l, r))
                    }
                    Some(&c) => Err(ParseError::new(*pos, format!("expected ')', found '{}'", c as char))),
                    None => Err(ParseError::new(*pos, "expected ')', found end of input")),
                }
            }
            Some(&c) => Err(ParseError::new(*pos, format!("expected '.' or '(', found '{}'", c as char))),
            None => Err(ParseError::new(*pos, "expected a tree, found end of input")),
        }
    }
}

/// Number of trees with `n` leaves, the Catalan number `C(n - 1)`.
pub fn tree_count(n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut c: u128 = 1;
    for k in 0..(n as u128 - 1) {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => f.write_str("."),
            Tree::Node(l, r) => write!(f, "({l}{r})"),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({self})")
    }
}

impl FromStr for Tree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let t = Tree::parse_at(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(ParseError::new(pos, "trailing input after tree"));
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn partitions() {
        assert_eq!(Tree::leaf().partition(), vec![Dyadic::zero(), Dyadic::one()]);
        let half = Dyadic::new(1.into(), 1);
        assert_eq!(Tree::caret().partition(), vec![Dyadic::zero(), half.clone(), Dyadic::one()]);
        let quarter = Dyadic::new(1.into(), 2);
        assert_eq!(t("((..).)").partition(), vec![Dyadic::zero(), quarter, half, Dyadic::one()]);
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| Tree::enumerate(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429]);
        for n in 1..=12 {
            assert_eq!(tree_count(n), if n <= 8 { Tree::enumerate(n).len() as u128 } else { tree_count(n) });
        }
        assert_eq!(tree_count(9), 1430);
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = "((..)".parse::<Tree>().unwrap_err();
        assert_eq!(e.position, 5);
        let e = "(.x)".parse::<Tree>().unwrap_err();
        assert_eq!(e.position, 2);
        let e = "..".parse::<Tree>().unwrap_err();
        assert_eq!(e.position, 1);
    }

    #[test]
    fn leaf_depth_round_trip() {
        for tree in Tree::enumerate(6) {
            assert_eq!(Tree::from_leaf_depths(&tree.leaf_depths()), Some(tree.clone()));
        }
        assert_eq!(Tree::from_leaf_depths(&[1, 2]), None);
    }

    #[test]
    fn carets_and_collapse() {
        let x = t("((..)(..))");
        assert_eq!(x.caret_positions(), vec![0, 2]);
        assert!(x.has_caret_at(2));
        assert!(!x.has_caret_at(1));
        assert_eq!(x.collapse_caret(2), Some(t("((..).)")));
        assert_eq!(x.collapse_caret(1), None);
        assert_eq!(t("((..).)").split_leaf(2), x);
    }

    #[test]
    fn union_and_quotient() {
        let u = t("((..).)").union(&t("(.(..))"));
        assert_eq!(u, t("((..)(..))"));
        let p = u.quotient(&t("((..).)")).unwrap();
        assert_eq!(p.to_string(), ".,.,(..)");
        assert!(t("(..)").quotient(&t("((..).)")).is_none());
    }
}
