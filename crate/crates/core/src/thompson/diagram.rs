use crate::categories::{common_refinement, Forest, Tree};

use super::Dyadic;

/// A tree-pair diagram `(range, domain, σ)`: the `i`-th standard dyadic
/// interval of `domain` is mapped affinely onto the `σ(i)`-th interval of
/// `range`. `F` uses `σ = id`, `T` cyclic shifts, `V` arbitrary permutations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreePairDiagram {
    pub range: Tree,
    pub domain: Tree,
    pub sigma: Vec<usize>,
}

impl TreePairDiagram {
    pub fn new(range: Tree, domain: Tree, sigma: Vec<usize>) -> TreePairDiagram {
        debug_assert_eq!(range.leaves(), domain.leaves());
        debug_assert_eq!(sigma.len(), domain.leaves());
        TreePairDiagram { range, domain, sigma }
    }

    pub fn identity() -> TreePairDiagram {
        TreePairDiagram::new(Tree::Leaf, Tree::Leaf, vec![0])
    }

    pub fn leaves(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma_inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.sigma.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            inv[s] = i;
        }
        inv
    }

    pub fn inverse(&self) -> TreePairDiagram {
        TreePairDiagram::new(self.domain.clone(), self.range.clone(), self.sigma_inverse())
    }

    /// Refines the range by `upper` (indexed by range leaves) and the domain by
    /// the matching trees, so the map is unchanged.
    pub fn refine_range(&self, upper: &Forest) -> TreePairDiagram {
        let trees = upper.trees();
        let pulled: Vec<Tree> = self.sigma.iter().map(|&s| trees[s].clone()).collect();
        let pulled = Forest::from_trees(pulled).expect("nonempty");
        let range = self.range.graft(upper).expect("arity matches");
        let domain = self.domain.graft(&pulled).expect("arity matches");
        let range_offsets = upper.offsets();
        let mut sigma = Vec::with_capacity(domain.leaves());
        for &s in &self.sigma {
            for j in 0..trees[s].leaves() {
                sigma.push(range_offsets[s] + j);
            }
        }
        TreePairDiagram { range, domain, sigma }
    }

    /// Refines the domain by `upper` (indexed by domain leaves).
    pub fn refine_domain(&self, upper: &Forest) -> TreePairDiagram {
        let inv = self.sigma_inverse();
        let trees = upper.trees();
        let pushed = Forest::from_trees(inv.iter().map(|&i| trees[i].clone()).collect()).expect("nonempty");
        self.refine_range(&pushed)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &TreePairDiagram) -> TreePairDiagram {
        let (_, p, q) = common_refinement(&self.domain, &other.range);
        let a = self.refine_domain(&p);
        let b = other.refine_range(&q);
        debug_assert_eq!(a.domain, b.range);
        let sigma = b.sigma.iter().map(|&i| a.sigma[i]).collect();
        TreePairDiagram::new(a.range, b.domain, sigma).reduced()
    }

    /// First cancellable caret: domain leaves `i, i+1` form a caret whose image
    /// in the range is again a caret, in order.
    fn cancellable_caret(&self) -> Option<usize> {
        self.domain.caret_positions().into_iter().find(|&i| {
            let j = self.sigma[i];
            self.sigma[i + 1] == j + 1 && self.range.has_caret_at(j)
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.cancellable_caret().is_none()
    }

    pub fn reduced(mut self) -> TreePairDiagram {
        while let Some(i) = self.cancellable_caret() {
            let j = self.sigma[i];
            self.domain = self.domain.collapse_caret(i).expect("caret present");
            self.range = self.range.collapse_caret(j).expect("caret present");
            let mut sigma = Vec::with_capacity(self.sigma.len() - 1);
            for (k, &s) in self.sigma.iter().enumerate() {
                if k == i + 1 {
                    continue;
                }
                sigma.push(if s > j { s - 1 } else { s });
            }
            self.sigma = sigma;
        }
        self
    }

    /// Applies the map to `x ∈ [0, 1)`, with half-open intervals.
    pub fn apply(&self, x: &Dyadic) -> Dyadic {
        let dom = self.domain.partition();
        let ran = self.range.partition();
        let i = dom.partition_point(|b| b <= x) - 1;
        let i = i.min(self.leaves() - 1);
        let j = self.sigma[i];
        let dom_depth = self.domain.leaf_depths()[i] as i64;
        let ran_depth = self.range.leaf_depths()[j] as i64;
        &ran[j] + &(x - &dom[i]).mul_pow2(dom_depth - ran_depth)
    }
}
