//! Finite-dimensional Lie algebras over the rationals.
//!
//! Algebras are presented by structure constants on a basis; everything
//! downstream (Chevalley–Eilenberg cohomology, invariant forms, double
//! extensions, curvature of constant-coefficient forms) is exact.

mod cohomology;
mod curvature;
mod double_extension;
mod forms;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra_core::{RatMatrix, RatVector};
use crate::error::{Error, Result};

pub use cohomology::{betti, betti_numbers, ce_differential, exterior_derivative};
pub use curvature::{
    bracket_forms, curvature, curving, naturality_holds, pushforward_form,
    transformation_law_holds,
};
pub use double_extension::double_extension;
pub use forms::{
    invariant_symmetric_forms, nu_form, BilinearForm, InvariantForm, InvariantFormSpace,
    NuReport, RankedForm,
};

/// A Lie algebra given by `[e_i, e_j] = sum_k c_ij^k e_k` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    basis_names: Vec<String>,
    brackets: BTreeMap<(usize, usize), RatVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    #[serde(serialize_with = "crate::io::ser_rat_vec")]
    pub defect: RatVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub jacobi_holds: bool,
    pub violations: Vec<JacobiViolation>,
    /// Length of the lower central series; `None` when not nilpotent.
    pub nilpotency_class: Option<usize>,
    pub integral_structure_constants: bool,
}

impl LieAlgebra {
    /// Builds an algebra from bracket entries keyed by basis pairs. Pairs with
    /// `i > j` are stored as `-[e_j, e_i]`; repeated pairs are summed.
    pub fn new(
        basis_names: Vec<String>,
        brackets: impl IntoIterator<Item = ((usize, usize), RatVector)>,
    ) -> Result<Self> {
        let n = basis_names.len();
        let mut map: BTreeMap<(usize, usize), RatVector> = BTreeMap::new();
        for ((i, j), v) in brackets {
            if i >= n || j >= n {
                return Err(Error::OutOfRange(format!("bracket ({i},{j}) in dimension {n}")));
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "bracket ({i},{j}) has {} coefficients, expected {n}",
                    v.len()
                )));
            }
            if i == j {
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                return Err(Error::InvalidInput(format!("non-zero bracket [e{i}, e{i}]")));
            }
            let (key, v) = if i < j {
                ((i, j), v)
            } else {
                ((j, i), v.into_iter().map(|x| -x).collect())
            };
            let slot = map
                .entry(key)
                .or_insert_with(|| vec![BigRational::zero(); n]);
            for (s, x) in slot.iter_mut().zip(v) {
                *s += x;
            }
        }
        map.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        Ok(Self {
            basis_names,
            brackets: map,
        })
    }

    pub fn abelian(n: usize) -> Self {
        Self {
            basis_names: (0..n).map(|i| format!("e{}", i + 1)).collect(),
            brackets: BTreeMap::new(),
        }
    }

    /// `[x, y] = z`.
    pub fn heisenberg() -> Self {
        Self::from_integer_brackets(&["x", "y", "z"], &[(0, 1, &[0, 0, 1])])
    }

    /// `gl(n)` on the matrix units `E_ij` (index `i * n + j`).
    pub fn gl(n: usize) -> Self {
        let dim = n * n;
        let mut names = Vec::with_capacity(dim);
        for i in 0..n {
            for j in 0..n {
                names.push(format!("E{}{}", i + 1, j + 1));
            }
        }
        let mut brackets = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                let (i, j) = (a / n, a % n);
                let (k, l) = (b / n, b % n);
                let mut v = vec![BigRational::zero(); dim];
                if j == k {
                    v[i * n + l] += BigRational::from_integer(1.into());
                }
                if l == i {
                    v[k * n + j] -= BigRational::from_integer(1.into());
                }
                brackets.push(((a, b), v));
            }
        }
        Self::new(names, brackets).expect("gl(n) brackets are well-formed")
    }

    /// Helper for small integral presentations: `(i, j, coefficients)`.
    pub fn from_integer_brackets(names: &[&str], brackets: &[(usize, usize, &[i64])]) -> Self {
        let n = names.len();
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            brackets.iter().map(|(i, j, c)| {
                let mut v: RatVector = c.iter().map(|&x| crate::algebra_core::rat(x)).collect();
                v.resize(n, BigRational::zero());
                ((*i, *j), v)
            }),
        )
        .expect("literal brackets are well-formed")
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// Non-zero brackets `[e_i, e_j]`, `i < j`.
    pub fn brackets(&self) -> impl Iterator<Item = (&(usize, usize), &RatVector)> {
        self.brackets.iter()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> RatVector {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self
                .brackets
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| vec![BigRational::zero(); self.dim()]),
            Greater => self
                .basis_bracket(j, i)
                .into_iter()
                .map(|x| -x)
                .collect(),
            Equal => vec![BigRational::zero(); self.dim()],
        }
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> BigRational {
        self.basis_bracket(i, j)[k].clone()
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[BigRational], y: &[BigRational]) -> Result<RatVector> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "bracket of vectors of length {} and {} in dimension {n}",
                x.len(),
                y.len()
            )));
        }
        let mut out = vec![BigRational::zero(); n];
        for (&(i, j), c) in &self.brackets {
            let coeff = &x[i] * &y[j] - &x[j] * &y[i];
            if coeff.is_zero() {
                continue;
            }
            for (o, ck) in out.iter_mut().zip(c) {
                if !ck.is_zero() {
                    *o += &coeff * ck;
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad(e_i)` acting on column vectors.
    pub fn ad_matrix(&self, i: usize) -> RatMatrix {
        let n = self.dim();
        let cols: Vec<RatVector> = (0..n).map(|j| self.basis_bracket(i, j)).collect();
        RatMatrix::from_columns(n, &cols)
    }

    fn jacobi_defect(&self, i: usize, j: usize, k: usize) -> RatVector {
        let e = |a: usize| unit(self.dim(), a);
        let t1 = self.bracket(&self.basis_bracket(i, j), &e(k)).expect("dims");
        let t2 = self.bracket(&self.basis_bracket(j, k), &e(i)).expect("dims");
        let t3 = self.bracket(&self.basis_bracket(k, i), &e(j)).expect("dims");
        t1.iter()
            .zip(&t2)
            .zip(&t3)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }

    pub fn jacobi_violations(&self) -> Vec<JacobiViolation> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let defect = self.jacobi_defect(i, j, k);
                    if defect.iter().any(|x| !x.is_zero()) {
                        out.push(JacobiViolation {
                            triple: (i, j, k),
                            defect,
                        });
                    }
                }
            }
        }
        out
    }

    /// Lower central series dimensions `dim g^1, dim g^2, ...` down to the
    /// first repeated value.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.dim();
        let mut current: Vec<RatVector> = (0..n).map(|i| unit(n, i)).collect();
        let mut dims = vec![n];
        loop {
            let mut next = Vec::new();
            for i in 0..n {
                for v in &current {
                    next.push(self.bracket(&unit(n, i), v).expect("dims"));
                }
            }
            let basis = span_basis(n, &next);
            let d = basis.len();
            let stalled = d == *dims.last().expect("non-empty");
            dims.push(d);
            if d == 0 || stalled {
                break;
            }
            current = basis;
        }
        dims
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        if self.dim() == 0 {
            return Some(0);
        }
        let lcs = self.lower_central_series();
        (*lcs.last().expect("non-empty") == 0).then(|| lcs.len() - 1)
    }

    pub fn has_integral_structure_constants(&self) -> bool {
        self.brackets.values().flatten().all(|x| x.is_integer())
    }

    pub fn validate(&self) -> ValidationReport {
        let violations = self.jacobi_violations();
        ValidationReport {
            jacobi_holds: violations.is_empty(),
            violations,
            nilpotency_class: self.nilpotency_class(),
            integral_structure_constants: self.has_integral_structure_constants(),
        }
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let v = self.jacobi_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra {
                violations: v.len(),
            })
        }
    }

    /// `tr ad(x) = 0` for every `x`.
    pub fn is_unimodular(&self) -> bool {
        (0..self.dim()).all(|i| self.ad_matrix(i).trace().is_zero())
    }
}

pub(crate) fn unit(n: usize, i: usize) -> RatVector {
    let mut v = vec![BigRational::zero(); n];
    v[i] = BigRational::from_integer(1.into());
    v
}

/// Basis of the span of `vectors` (each of length `n`), chosen greedily.
pub(crate) fn span_basis(n: usize, vectors: &[RatVector]) -> Vec<RatVector> {
    let mut basis: Vec<RatVector> = Vec::new();
    for v in vectors {
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        basis.push(v.clone());
        if RatMatrix::from_columns(n, &basis).rank() < basis.len() {
            basis.pop();
        }
    }
    basis
}
