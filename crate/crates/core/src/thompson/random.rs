use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::categories::{tree_count, Tree};

use super::{FElement, TElement, VElement};

/// A uniformly random tree with `n` leaves, splitting the leaves between the
/// two subtrees with Catalan weights.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
    assert!(n >= 1);
    if n == 1 {
        return Tree::Leaf;
    }
    let total = tree_count(n);
    let mut pick = rng.gen_range(0..total);
    for k in 1..n {
        let w = tree_count(k) * tree_count(n - k);
        if pick < w {
            let l = random_tree(k, rng);
            let r = random_tree(n - k, rng);
            return Tree::node(l, r);
        }
        pick -= w;
    }
    unreachable!("Catalan weights sum to the total")
}

/// Two independent uniform trees with exactly `leaf_bound` leaves, reduced.
pub fn random_f_with<R: Rng + ?Sized>(leaf_bound: usize, rng: &mut R) -> FElement {
    assert!(leaf_bound >= 1, "leaf bound must be positive");
    let a = random_tree(leaf_bound, rng);
    let b = random_tree(leaf_bound, rng);
    FElement::reduce(a, b).expect("equal leaf counts")
}

/// Deterministic random element of `F` for a given seed.
pub fn random_element(leaf_bound: usize, seed: u64) -> FElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_f_with(leaf_bound, &mut rng)
}

pub fn random_t_with<R: Rng + ?Sized>(leaf_bound: usize, rng: &mut R) -> TElement {
    let a = random_tree(leaf_bound, rng);
    let b = random_tree(leaf_bound, rng);
    let mark = rng.gen_range(0..leaf_bound as i64);
    TElement::reduce(a, b, mark).expect("equal leaf counts")
}

pub fn random_v_with<R: Rng + ?Sized>(leaf_bound: usize, rng: &mut R) -> VElement {
    let a = random_tree(leaf_bound, rng);
    let b = random_tree(leaf_bound, rng);
    let mut perm: Vec<usize> = (0..leaf_bound).collect();
    perm.shuffle(rng);
    VElement::reduce(a, b, perm).expect("valid permutation")
}

/// A seeded generator for reproducible sampling runs.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
