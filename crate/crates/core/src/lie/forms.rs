use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{cohomology::exterior_derivative, LieAlgebra};
use crate::algebra_core::{combination_rank, combinations, lcm_of_denominators, sort_with_sign, RatMatrix, RatVector};
use crate::error::{Error, Result};

/// Bilinear form on a Lie algebra, `B(e_i, e_j) = gram[i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    gram: RatMatrix,
}

impl BilinearForm {
    pub fn new(gram: RatMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        Ok(Self { gram })
    }

    pub fn euclidean(n: usize) -> Self {
        Self {
            gram: RatMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn eval(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let gy = self.gram.mul_vec(y).expect("dimension checked by caller");
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram.is_symmetric()
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim()
    }

    /// First basis triple `(x, y, z)` with `B([x,y],z) + B(y,[x,z]) != 0`.
    pub fn invariance_failure(&self, l: &LieAlgebra) -> Option<(usize, usize, usize)> {
        let n = l.dim();
        for x in 0..n {
            for y in 0..n {
                let xy = l.basis_bracket(x, y);
                for z in 0..n {
                    let xz = l.basis_bracket(x, z);
                    let lhs = self.eval(&xy, &super::unit(n, z)) + self.eval(&super::unit(n, y), &xz);
                    if !lhs.is_zero() {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_ad_invariant(&self, l: &LieAlgebra) -> bool {
        self.dim() == l.dim() && self.invariance_failure(l).is_none()
    }
}

/// Alternating multilinear form on a Lie algebra with values in `Q^value_dim`,
/// stored on strictly increasing index tuples in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    degree: usize,
    algebra_dim: usize,
    value_dim: usize,
    components: Vec<RatVector>,
}

impl InvariantForm {
    pub fn zero(degree: usize, algebra_dim: usize, value_dim: usize) -> Self {
        let count = combinations(algebra_dim, degree).len();
        Self {
            degree,
            algebra_dim,
            value_dim,
            components: vec![vec![BigRational::zero(); value_dim]; count],
        }
    }

    /// Builds a form from components on index tuples; tuples may be
    /// unsorted (the alternating sign is applied) and omitted ones are zero.
    pub fn from_components(
        degree: usize,
        algebra_dim: usize,
        value_dim: usize,
        components: impl IntoIterator<Item = (Vec<usize>, RatVector)>,
    ) -> Result<Self> {
        let mut form = Self::zero(degree, algebra_dim, value_dim);
        for (tuple, value) in components {
            if tuple.len() != degree || tuple.iter().any(|&i| i >= algebra_dim) {
                return Err(Error::OutOfRange(format!(
                    "tuple {tuple:?} for a degree-{degree} form in dimension {algebra_dim}"
                )));
            }
            if value.len() != value_dim {
                return Err(Error::DimensionMismatch(format!(
                    "value of length {} for value dimension {value_dim}",
                    value.len()
                )));
            }
            let Some((sorted, sign)) = sort_with_sign(&tuple) else {
                return Err(Error::InvalidInput(format!("repeated index in {tuple:?}")));
            };
            let idx = form.position(&sorted);
            let s = BigRational::from_integer(sign.into());
            for (slot, x) in form.components[idx].iter_mut().zip(value) {
                *slot += &s * x;
            }
        }
        Ok(form)
    }

    /// Scalar 1-form `sum_i coeffs[i] e^i`.
    pub fn scalar_one_form(coeffs: RatVector) -> Self {
        let n = coeffs.len();
        Self {
            degree: 1,
            algebra_dim: n,
            value_dim: 1,
            components: coeffs.into_iter().map(|c| vec![c]).collect(),
        }
    }

    /// 1-form given by the images of the basis vectors.
    pub fn one_form(values: Vec<RatVector>, value_dim: usize) -> Result<Self> {
        if values.iter().any(|v| v.len() != value_dim) {
            return Err(Error::DimensionMismatch("inconsistent value dimension".into()));
        }
        Ok(Self {
            degree: 1,
            algebra_dim: values.len(),
            value_dim,
            components: values,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn value_dim(&self) -> usize {
        self.value_dim
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        combinations(self.algebra_dim, self.degree)
    }

    fn position(&self, sorted: &[usize]) -> usize {
        combination_rank(self.algebra_dim, sorted)
    }

    /// Components in lexicographic tuple order.
    pub fn components(&self) -> &[RatVector] {
        &self.components
    }

    /// Value on an arbitrary basis tuple, using the alternating extension.
    pub fn eval(&self, tuple: &[usize]) -> RatVector {
        match sort_with_sign(tuple) {
            None => vec![BigRational::zero(); self.value_dim],
            Some((sorted, sign)) => {
                let v = &self.components[self.position(&sorted)];
                if sign > 0 {
                    v.clone()
                } else {
                    v.iter().map(|x| -x).collect()
                }
            }
        }
    }

    pub fn nonzero_components(&self) -> BTreeMap<Vec<usize>, RatVector> {
        self.tuples()
            .into_iter()
            .zip(&self.components)
            .filter(|(_, v)| v.iter().any(|x| !x.is_zero()))
            .map(|(t, v)| (t, v.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(Zero::is_zero)
    }

    pub(crate) fn value_column(&self, v: usize) -> RatVector {
        self.components.iter().map(|c| c[v].clone()).collect()
    }

    pub(crate) fn set_value_column(&mut self, v: usize, column: &[BigRational]) {
        for (c, x) in self.components.iter_mut().zip(column) {
            c[v] = x.clone();
        }
    }

    pub(crate) fn component_mut(&mut self, idx: usize) -> &mut RatVector {
        &mut self.components[idx]
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree
            || self.algebra_dim != other.algebra_dim
            || self.value_dim != other.value_dim
        {
            return Err(Error::DimensionMismatch(format!(
                "forms of shape ({},{},{}) and ({},{},{})",
                self.degree,
                self.algebra_dim,
                self.value_dim,
                other.degree,
                other.algebra_dim,
                other.value_dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = self.clone();
        for x in out.components.iter_mut().flatten() {
            *x *= s;
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let mut out = self.clone();
        for (a, b) in out.components.iter_mut().zip(&other.components) {
            for (x, y) in a.iter_mut().zip(b) {
                *x = f(x, y);
            }
        }
        out
    }

    /// Applies a linear map `Q^value_dim → Q^rows` to every component.
    pub fn map_values(&self, f: &RatMatrix) -> Result<Self> {
        if f.cols() != self.value_dim {
            return Err(Error::DimensionMismatch(format!(
                "map with {} columns applied to values of dimension {}",
                f.cols(),
                self.value_dim
            )));
        }
        Ok(Self {
            degree: self.degree,
            algebra_dim: self.algebra_dim,
            value_dim: f.rows(),
            components: self
                .components
                .iter()
                .map(|v| f.mul_vec(v))
                .collect::<Result<_>>()?,
        })
    }
}

/// A basis element of the invariant-form space together with its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedForm {
    pub form: BilinearForm,
    pub rank: usize,
    pub nondegenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFormSpace {
    pub basis: Vec<RankedForm>,
    /// An element of maximal rank in the span of `basis`.
    pub maximal_rank_element: Option<RankedForm>,
}

impl InvariantFormSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn maximal_rank(&self) -> usize {
        self.maximal_rank_element.as_ref().map_or(0, |f| f.rank)
    }

    pub fn contains(&self, b: &BilinearForm) -> bool {
        let n = b.dim();
        let mut cols: Vec<RatVector> = self.basis.iter().map(|f| f.form.gram().entries().to_vec()).collect();
        let before = RatMatrix::from_columns(n * n, &cols).rank();
        cols.push(b.gram().entries().to_vec());
        RatMatrix::from_columns(n * n, &cols).rank() == before
    }
}

fn ranked(form: BilinearForm) -> RankedForm {
    let rank = form.rank();
    RankedForm {
        nondegenerate: rank == form.dim(),
        rank,
        form,
    }
}

/// Symmetric forms with `B([x,y],z) + B(y,[x,z]) = 0` on every basis triple.
pub fn invariant_symmetric_forms(l: &LieAlgebra) -> Result<InvariantFormSpace> {
    l.require_valid()?;
    let n = l.dim();
    let mut unknown = vec![vec![0usize; n]; n];
    let mut count = 0;
    for p in 0..n {
        for q in p..n {
            unknown[p][q] = count;
            unknown[q][p] = count;
            count += 1;
        }
    }
    let brackets: Vec<Vec<RatVector>> = (0..n)
        .map(|a| (0..n).map(|b| l.basis_bracket(a, b)).collect())
        .collect();
    let mut rows: Vec<RatVector> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let mut row = vec![BigRational::zero(); count];
                for (m, coeff) in brackets[a][b].iter().enumerate() {
                    if !coeff.is_zero() {
                        row[unknown[m][c]] += coeff;
                    }
                }
                for (m, coeff) in brackets[a][c].iter().enumerate() {
                    if !coeff.is_zero() {
                        row[unknown[b][m]] += coeff;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        RatMatrix::zeros(0, count)
    } else {
        RatMatrix::from_rows(rows)?
    };
    let basis: Vec<RankedForm> = system
        .kernel_basis()
        .into_iter()
        .map(|sol| {
            let mut g = RatMatrix::zeros(n, n);
            for p in 0..n {
                for q in 0..n {
                    g[(p, q)] = sol[unknown[p][q]].clone();
                }
            }
            ranked(BilinearForm { gram: g })
        })
        .collect();
    let maximal_rank_element = maximal_rank_combination(n, &basis);
    Ok(InvariantFormSpace {
        basis,
        maximal_rank_element,
    })
}

/// Rank of pseudo-random integer combinations of the basis, maximized over
/// a fixed sequence of trials. A combination with coefficients drawn from
/// `[1, 2^31)` attains the generic rank unless it hits the zero set of a
/// non-zero minor of degree at most `n`, which happens with probability at
/// most `n / 2^31` per trial; the seed is fixed, so the output is
/// deterministic.
fn maximal_rank_combination(n: usize, basis: &[RankedForm]) -> Option<RankedForm> {
    const TRIALS: usize = 16;
    if basis.is_empty() {
        return None;
    }
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        // splitmix64
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        ((z ^ (z >> 31)) % ((1 << 31) - 1)) + 1
    };
    let mut best: Option<RankedForm> = None;
    for _ in 0..TRIALS {
        let mut g = RatMatrix::zeros(n, n);
        for b in basis {
            let c = BigRational::from_integer(BigInt::from(next()));
            g = g.add(&b.form.gram.scale(&c)).expect("same shape");
        }
        let candidate = ranked(BilinearForm { gram: g });
        let done = candidate.rank == n;
        if best.as_ref().is_none_or(|b| candidate.rank > b.rank) {
            best = Some(candidate);
        }
        if done {
            break;
        }
    }
    best
}

/// The 3-form `ν(x,y,z) = B([x,y],z)` and its checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuReport {
    pub form: InvariantForm,
    pub closed: bool,
    /// Least positive integer `p` making `p ν` integral in the given basis.
    pub integrality_multiplier: BigInt,
}

impl NuReport {
    pub fn is_integral(&self) -> bool {
        self.integrality_multiplier.is_one()
    }
}

pub fn nu_form(l: &LieAlgebra, b: &BilinearForm) -> Result<NuReport> {
    let n = l.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "form of dimension {} on an algebra of dimension {n}",
            b.dim()
        )));
    }
    if !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let nu = |x: usize, y: usize, z: usize| b.eval(&l.basis_bracket(x, y), &super::unit(n, z));
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if nu(x, y, z) + nu(x, z, y) != BigRational::zero() {
                    return Err(Error::NotAntisymmetric(x, y, z));
                }
            }
        }
    }
    let mut form = InvariantForm::zero(3, n, 1);
    for (idx, t) in form.tuples().into_iter().enumerate() {
        form.component_mut(idx)[0] = nu(t[0], t[1], t[2]);
    }
    let closed = exterior_derivative(l, &form)?.is_zero();
    let integrality_multiplier = lcm_of_denominators(form.components().iter().flatten());
    Ok(NuReport {
        form,
        closed,
        integrality_multiplier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::{frac, rat};

    #[test]
    fn abelian_forms_are_all_symmetric_forms() {
        for n in 1..=4 {
            let s = invariant_symmetric_forms(&LieAlgebra::abelian(n)).unwrap();
            assert_eq!(s.dimension(), n * (n + 1) / 2);
            assert_eq!(s.maximal_rank(), n);
        }
    }

    /// Hand solution: the invariance equations force B(x,z) = B(y,z) =
    /// B(z,z) = 0 (e.g. (x,y,x): B(z,x) = 0), leaving B(x,x), B(x,y),
    /// B(y,y) free.
    #[test]
    fn heisenberg_forms_are_degenerate() {
        let h = LieAlgebra::heisenberg();
        let s = invariant_symmetric_forms(&h).unwrap();
        assert_eq!(s.dimension(), 3);
        assert!(s.maximal_rank() < 3);
        for f in &s.basis {
            assert!(!f.nondegenerate);
            assert!(f.form.is_ad_invariant(&h));
            assert!(f.form.gram()[(2, 2)].is_zero());
            assert!(f.form.gram()[(0, 2)].is_zero());
        }
    }

    #[test]
    fn nu_vanishes_on_abelian() {
        let l = LieAlgebra::abelian(3);
        let r = nu_form(&l, &BilinearForm::euclidean(3)).unwrap();
        assert!(r.form.is_zero());
        assert!(r.closed);
    }

    #[test]
    fn nu_rejects_bad_forms() {
        let h = LieAlgebra::heisenberg();
        let asym = BilinearForm::new(RatMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(nu_form(&h, &asym), Err(Error::NotSymmetric));
        // Euclidean product on Heisenberg is not invariant.
        assert!(matches!(
            nu_form(&h, &BilinearForm::euclidean(3)),
            Err(Error::NotAntisymmetric(..))
        ));
    }

    #[test]
    fn form_alternation() {
        let f = InvariantForm::from_components(2, 3, 1, [(vec![1, 0], vec![rat(2)])]).unwrap();
        assert_eq!(f.eval(&[0, 1]), vec![rat(-2)]);
        assert_eq!(f.eval(&[1, 0]), vec![rat(2)]);
        assert_eq!(f.eval(&[1, 1]), vec![rat(0)]);
        assert!(InvariantForm::from_components(2, 3, 1, [(vec![1, 1], vec![rat(1)])]).is_err());
        let g = f.scale(&frac(1, 2));
        assert_eq!(g.eval(&[0, 1]), vec![rat(-1)]);
    }
}
