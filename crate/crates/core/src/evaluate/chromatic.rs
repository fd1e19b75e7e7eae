use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::{ClosedDiagram, EvalError};

/// A polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticPolynomial {
    coeffs: Vec<BigInt>,
}

impl ChromaticPolynomial {
    fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ChromaticPolynomial { coeffs }
    }

    fn zero() -> Self {
        ChromaticPolynomial { coeffs: Vec::new() }
    }

    fn one() -> Self {
        ChromaticPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// `x (x-1) ⋯ (x-n+1)`: the chromatic polynomial of `K_n`.
    fn falling_factorial(n: usize) -> Self {
        (0..n).fold(Self::one(), |p, i| p.times_linear(i as i64))
    }

    /// `self · (x − a)`.
    fn times_linear(&self, a: i64) -> Self {
        let a = BigInt::from(a);
        let mut out = vec![BigInt::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * &a;
        }
        Self::from_coeffs(out)
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = other.coeffs.get(i).cloned().unwrap_or_default();
                a - b
            })
            .collect();
        Self::from_coeffs(out)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// `self / x`, when `x` divides `self`.
    pub fn divide_by_x(&self) -> Option<Self> {
        match self.coeffs.first() {
            None => Some(Self::zero()),
            Some(c) if c.is_zero() => Some(Self::from_coeffs(self.coeffs[1..].to_vec())),
            Some(_) => None,
        }
    }
}

impl fmt::Display for ChromaticPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}")?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Removes vertex `v` from a bitmask and shifts the higher vertices down.
fn squeeze(mask: u64, v: usize) -> u64 {
    let low = mask & ((1u64 << v) - 1);
    let high = if v + 1 >= 64 { 0 } else { (mask >> (v + 1)) << v };
    low | high
}

fn remove_vertex(adj: &[u64], v: usize) -> Vec<u64> {
    adj.iter()
        .enumerate()
        .filter(|&(i, _)| i != v)
        .map(|(_, &m)| squeeze(m, v))
        .collect()
}

struct Solver {
    memo: HashMap<Vec<u64>, ChromaticPolynomial>,
}

impl Solver {
    fn solve(&mut self, adj: Vec<u64>) -> ChromaticPolynomial {
        let n = adj.len();
        if n == 0 {
            return ChromaticPolynomial::one();
        }
        // Low-degree vertices peel off with a linear factor.
        if let Some(v) = adj.iter().position(|m| m.count_ones() <= 1) {
            let factor = adj[v].count_ones() as i64;
            return self.solve(remove_vertex(&adj, v)).times_linear(factor);
        }
        let edges: u32 = adj.iter().map(|m| m.count_ones()).sum::<u32>() / 2;
        if edges as usize == n * (n - 1) / 2 {
            return ChromaticPolynomial::falling_factorial(n);
        }
        if let Some(p) = self.memo.get(&adj) {
            return p.clone();
        }
        // Delete–contract an edge at a vertex of maximum degree.
        let u = (0..n).max_by_key(|&i| adj[i].count_ones()).expect("nonempty");
        let v = adj[u].trailing_zeros() as usize;
        let mut deleted = adj.clone();
        deleted[u] &= !(1u64 << v);
        deleted[v] &= !(1u64 << u);
        let mut merged = deleted.clone();
        let (keep, gone) = (u.min(v), u.max(v));
        merged[keep] |= merged[gone];
        for (i, m) in merged.iter_mut().enumerate() {
            if *m & (1u64 << gone) != 0 {
                *m = (*m & !(1u64 << gone)) | if i == keep { 0 } else { 1u64 << keep };
            }
        }
        merged[keep] &= !(1u64 << keep);
        let contracted = remove_vertex(&merged, gone);
        let p = self.solve(deleted).sub(&self.solve(contracted));
        self.memo.insert(adj, p.clone());
        p
    }
}

/// The chromatic polynomial of a multigraph by deletion–contraction. Parallel
/// edges do not change it; a self-loop makes it zero.
pub fn chromatic_polynomial(vertices: usize, edges: &[(usize, usize)]) -> Result<ChromaticPolynomial, EvalError> {
    if vertices > 64 {
        return Err(EvalError::TooLarge(vertices));
    }
    if edges.iter().any(|&(a, b)| a == b) {
        return Ok(ChromaticPolynomial::zero());
    }
    let mut adj = vec![0u64; vertices];
    for &(a, b) in edges {
        adj[a] |= 1u64 << b;
        adj[b] |= 1u64 << a;
    }
    let mut solver = Solver { memo: HashMap::new() };
    Ok(solver.solve(adj))
}

/// Evaluation of the closed diagram in the quotient planar algebra with loop
/// parameter `d`: `(d−1)^{−V/2} · χ_{dual}(d+1)/(d+1)`.
pub fn chromatic_value(d: &ClosedDiagram, loop_parameter: &BigRational) -> Result<BigRational, EvalError> {
    let one = BigRational::one();
    if *loop_parameter == one {
        return Err(EvalError::SingularLoopParameter);
    }
    let (faces, dual) = d.dual();
    let chi = chromatic_polynomial(faces, &dual)?;
    let reduced = chi.divide_by_x().expect("chromatic polynomials of nonempty graphs vanish at 0");
    let value = reduced.eval(&(loop_parameter + &one));
    let half_v = (d.vertex_count() / 2) as i32;
    let scale = num::pow(loop_parameter - &one, half_v as usize);
    Ok(value / scale)
}
