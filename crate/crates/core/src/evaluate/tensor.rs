use num::{BigRational, One, Zero};

use crate::categories::{Forest, Functor, PlanarForests, Tree};

use super::EvalError;

/// A trivalent vertex tensor `R[i][j][r]`: `i`, `j` are the colors of the
/// left and right children, `r` the color of the parent edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTensor {
    k: usize,
    entries: Vec<BigRational>,
}

impl VertexTensor {
    pub fn new(k: usize, entries: Vec<BigRational>) -> Result<VertexTensor, EvalError> {
        if k == 0 || entries.len() != k * k * k {
            return Err(EvalError::TensorShape { k, len: entries.len() });
        }
        Ok(VertexTensor { k, entries })
    }

    /// `R[i][j][r] = 1` when the three colors are distinct, else 0.
    pub fn three_coloring() -> VertexTensor {
        let k = 3;
        let mut entries = vec![BigRational::zero(); k * k * k];
        for i in 0..k {
            for j in 0..k {
                for r in 0..k {
                    if i != j && j != r && i != r {
                        entries[(i * k + j) * k + r] = BigRational::one();
                    }
                }
            }
        }
        VertexTensor { k, entries }
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize, r: usize) -> &BigRational {
        &self.entries[(i * self.k + j) * self.k + r]
    }

    /// Checks `Σ_{i,j} R[i][j][a]·R[i][j][b] = c·δ_{ab}` and returns `c`.
    pub fn unitarity_constant(&self) -> Result<BigRational, EvalError> {
        let k = self.k;
        let mut c = None;
        for a in 0..k {
            for b in 0..k {
                let mut s = BigRational::zero();
                for i in 0..k {
                    for j in 0..k {
                        s += self.get(i, j, a) * self.get(i, j, b);
                    }
                }
                if a == b {
                    match &c {
                        None => c = Some(s),
                        Some(c0) if *c0 == s => {}
                        Some(_) => return Err(EvalError::NotUnitary),
                    }
                } else if !s.is_zero() {
                    return Err(EvalError::NotUnitary);
                }
            }
        }
        match c {
            Some(c) if c > BigRational::zero() => Ok(c),
            _ => Err(EvalError::NotUnitary),
        }
    }

    /// The tensor with every entry multiplied by `s`.
    pub fn scaled(&self, s: &BigRational) -> VertexTensor {
        VertexTensor {
            k: self.k,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }
}

/// A dense linear map `k^inputs → k^outputs` over the rationals.
///
/// Multi-indices are big-endian: the first strand is the most significant
/// digit. `column(x)` is the image of the basis vector `e_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    k: usize,
    inputs: usize,
    outputs: usize,
    columns: Vec<Vec<BigRational>>,
}

impl LinearMap {
    pub fn identity(k: usize, strands: usize) -> LinearMap {
        let dim = k.pow(strands as u32);
        let columns = (0..dim)
            .map(|x| {
                let mut v = vec![BigRational::zero(); dim];
                v[x] = BigRational::one();
                v
            })
            .collect();
        LinearMap {
            k,
            inputs: strands,
            outputs: strands,
            columns,
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn column(&self, x: usize) -> &[BigRational] {
        &self.columns[x]
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.k.pow(self.outputs as u32)];
        for (x, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(&self.columns[x]) {
                if !m.is_zero() {
                    *o += coeff * m;
                }
            }
        }
        out
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &LinearMap) -> LinearMap {
        assert_eq!(self.outputs, then.inputs, "composable maps");
        LinearMap {
            k: self.k,
            inputs: self.inputs,
            outputs: then.outputs,
            columns: self.columns.iter().map(|c| then.apply(c)).collect(),
        }
    }

    /// `⟨M e_a, M e_b⟩` for all `a, b`.
    pub fn gram(&self) -> Vec<Vec<BigRational>> {
        self.columns.iter().map(|a| self.columns.iter().map(|b| dot(a, b)).collect()).collect()
    }
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Image of the color `c` on the root edge of `t`: a vector over `k^leaves`.
fn tree_image(t: &Tree, r: &VertexTensor, c: usize) -> Vec<BigRational> {
    match t {
        Tree::Leaf => {
            let mut v = vec![BigRational::zero(); r.k];
            v[c] = BigRational::one();
            v
        }
        Tree::Node(left, right) => {
            let right_dim = r.k.pow(right.leaves() as u32);
            let mut out = vec![BigRational::zero(); r.k.pow(t.leaves() as u32)];
            for i in 0..r.k {
                for j in 0..r.k {
                    let w = r.get(i, j, c);
                    if w.is_zero() {
                        continue;
                    }
                    let lv = tree_image(left, r, i);
                    let rv = tree_image(right, r, j);
                    for (a, x) in lv.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                        let wx = w * x;
                        for (b, y) in rv.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                            out[a * right_dim + b] += &wx * y;
                        }
                    }
                }
            }
            out
        }
    }
}

/// Applies `Φ(f)` to a vector over `k^{roots}` without materializing the map.
pub fn apply_forest(f: &Forest, r: &VertexTensor, v: &[BigRational]) -> Vec<BigRational> {
    let k = r.k;
    assert_eq!(v.len(), k.pow(f.roots() as u32), "vector dimension matches the roots");
    let mut cur = v.to_vec();
    // Process strands right to left so that earlier strand positions are unchanged.
    let trees = f.trees();
    let mut suffix = 1usize;
    for (pos, t) in trees.iter().enumerate().rev() {
        if t.is_leaf() {
            suffix *= k;
            continue;
        }
        let prefix = k.pow(pos as u32);
        let images: Vec<_> = (0..k).map(|c| tree_image(t, r, c)).collect();
        let width = images[0].len();
        let mut next = vec![BigRational::zero(); prefix * width * suffix];
        for p in 0..prefix {
            for c in 0..k {
                for s in 0..suffix {
                    let x = &cur[(p * k + c) * suffix + s];
                    if x.is_zero() {
                        continue;
                    }
                    for (y, m) in images[c].iter().enumerate().filter(|(_, m)| !m.is_zero()) {
                        next[(p * width + y) * suffix + s] += x * m;
                    }
                }
            }
        }
        cur = next;
        suffix *= width;
    }
    cur
}

/// The dense matrix of `Φ(f): k^{roots} → k^{leaves}`.
pub fn phi_forest(f: &Forest, r: &VertexTensor) -> LinearMap {
    let dim = r.k.pow(f.roots() as u32);
    let columns = (0..dim)
        .map(|x| {
            let mut e = vec![BigRational::zero(); dim];
            e[x] = BigRational::one();
            apply_forest(f, r, &e)
        })
        .collect();
    LinearMap {
        k: r.k,
        inputs: f.roots(),
        outputs: f.leaves(),
        columns,
    }
}

/// A vector of the limit space: `coords · c^{-weight/2}`, where every vertex
/// contributes one unit of weight. The surd `√c` is never materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedVector {
    pub coords: Vec<BigRational>,
    pub weight: u32,
}

/// The functor `Φ_R` on planar forests, normalized by `1/√c` per vertex.
#[derive(Clone, Debug)]
pub struct TensorFunctor {
    tensor: VertexTensor,
    c: BigRational,
}

impl TensorFunctor {
    pub fn new(tensor: VertexTensor) -> Result<TensorFunctor, EvalError> {
        let c = tensor.unitarity_constant()?;
        Ok(TensorFunctor { tensor, c })
    }

    pub fn unitarity(&self) -> &BigRational {
        &self.c
    }

    /// The vacuum `Ω` on one strand: the first basis vector.
    pub fn vacuum(&self) -> WeightedVector {
        let mut coords = vec![BigRational::zero(); self.tensor.k];
        coords[0] = BigRational::one();
        WeightedVector { coords, weight: 0 }
    }
}

impl Functor<PlanarForests> for TensorFunctor {
    type Vector = WeightedVector;
    type Scalar = BigRational;
    type Error = EvalError;

    fn apply(&self, f: &Forest, v: &WeightedVector) -> WeightedVector {
        WeightedVector {
            coords: apply_forest(f, &self.tensor, &v.coords),
            weight: v.weight + f.carets() as u32,
        }
    }

    fn inner(&self, a: &WeightedVector, b: &WeightedVector) -> Result<BigRational, EvalError> {
        let total = a.weight + b.weight;
        if !total.is_multiple_of(2) {
            return Err(EvalError::IrrationalNormalization(total));
        }
        let scale = num::pow(self.c.clone(), (total / 2) as usize);
        Ok(dot(&a.coords, &b.coords) / scale)
    }
}
