//! Chevalley–Eilenberg cochains with trivial coefficients.
//!
//! `Λ^k g*` is indexed by strictly increasing `k`-tuples in lexicographic
//! order, and a basis form `e^I` evaluates to 1 on `(e_i)_{i in I}`. The
//! differential is
//! `dω(x_0..x_k) = Σ_{a<b} (-1)^{a+b} ω([x_a, x_b], x_0, .., x̂_a, .., x̂_b, .., x_k)`,
//! so `dξ(x, y) = -ξ([x, y])` on 1-forms.

use std::collections::HashMap;

use num_rational::BigRational;

use super::{InvariantForm, LieAlgebra};
use crate::algebra_core::{binomial, combinations, sort_with_sign, RatMatrix};
use crate::error::{Error, Result};

/// Matrix of `d: Λ^k → Λ^{k+1}`, of shape `C(n, k+1) × C(n, k)`.
pub fn ce_differential(l: &LieAlgebra, k: usize) -> Result<RatMatrix> {
    let n = l.dim();
    if k > n {
        return Err(Error::OutOfRange(format!("degree {k} exceeds dimension {n}")));
    }
    let sources = combinations(n, k);
    let targets = combinations(n, k + 1);
    let index: HashMap<&[usize], usize> = sources
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut d = RatMatrix::zeros(targets.len(), sources.len());
    if k == 0 {
        return Ok(d);
    }
    for (row, j) in targets.iter().enumerate() {
        for a in 0..j.len() {
            for b in a + 1..j.len() {
                let bracket = l.basis_bracket(j[a], j[b]);
                let rest: Vec<usize> = j
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != a && p != b)
                    .map(|(_, &x)| x)
                    .collect();
                let outer = if (a + b) % 2 == 0 { 1 } else { -1 };
                for (m, c) in bracket.iter().enumerate() {
                    if num_traits::Zero::is_zero(c) {
                        continue;
                    }
                    let mut tuple = Vec::with_capacity(k);
                    tuple.push(m);
                    tuple.extend_from_slice(&rest);
                    let Some((sorted, sign)) = sort_with_sign(&tuple) else {
                        continue;
                    };
                    let col = index[sorted.as_slice()];
                    let s = BigRational::from_integer((outer * sign).into());
                    d[(row, col)] += s * c;
                }
            }
        }
    }
    Ok(d)
}

/// `dim ker d_k - rank d_{k-1}`.
pub fn betti(l: &LieAlgebra, k: usize) -> Result<usize> {
    l.require_valid()?;
    let n = l.dim();
    if k > n {
        return Err(Error::OutOfRange(format!("degree {k} exceeds dimension {n}")));
    }
    let rank_k = ce_differential(l, k)?.rank();
    let rank_prev = if k == 0 {
        0
    } else {
        ce_differential(l, k - 1)?.rank()
    };
    Ok(binomial(n, k) - rank_k - rank_prev)
}

/// All Betti numbers `b_0 .. b_dim`.
pub fn betti_numbers(l: &LieAlgebra) -> Result<Vec<usize>> {
    l.require_valid()?;
    let n = l.dim();
    let ranks: Vec<usize> = (0..=n)
        .map(|k| ce_differential(l, k).map(|d| d.rank()))
        .collect::<Result<_>>()?;
    Ok((0..=n)
        .map(|k| binomial(n, k) - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
        .collect())
}

/// Componentwise Chevalley–Eilenberg differential of a vector-valued form.
pub fn exterior_derivative(l: &LieAlgebra, form: &InvariantForm) -> Result<InvariantForm> {
    if form.algebra_dim() != l.dim() {
        return Err(Error::DimensionMismatch(format!(
            "form on a {}-dimensional algebra, base has dimension {}",
            form.algebra_dim(),
            l.dim()
        )));
    }
    let k = form.degree();
    let n = l.dim();
    let mut out = InvariantForm::zero(k + 1, n, form.value_dim());
    if k >= n {
        return Ok(out);
    }
    let d = ce_differential(l, k)?;
    for v in 0..form.value_dim() {
        let column = form.value_column(v);
        let image = d.mul_vec(&column)?;
        out.set_value_column(v, &image);
    }
    Ok(out)
}
