//! Double extension of an abelian metric space by a skew derivation.
//!
//! The output lives on `V* ⊕ U ⊕ V` with basis `(f, e_1, .., e_m, z)`:
//! `[e_a, e_b] = w(e_a, e_b) f` with `w(u, u') = <h u, u'>`, `[z, e_a] = h e_a`,
//! `f` central. The scalar product restricts to the given form on `U` and
//! pairs the ends by `<f, z> = 1`, `<z, z> = 1`, `<f, f> = 0`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{BilinearForm, LieAlgebra};
use crate::algebra_core::{format_rational, RatMatrix};
use crate::error::{Error, Result};

pub fn double_extension(u_form: &BilinearForm, h: &RatMatrix) -> Result<(LieAlgebra, BilinearForm)> {
    let m = u_form.dim();
    if h.rows() != m || h.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "derivation is {}x{}, space has dimension {m}",
            h.rows(),
            h.cols()
        )));
    }
    if !u_form.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let rank = u_form.rank();
    if rank < m {
        return Err(Error::Degenerate { rank, dim: m });
    }

    // w(e_a, e_b) = <h e_a, e_b> = (hᵀ G)[a][b]
    let w = h.transpose().mul(u_form.gram())?;
    for a in 0..m {
        for b in a..m {
            if w[(a, b)] != -w[(b, a)].clone() {
                return Err(Error::NotSkew {
                    i: a + 1,
                    j: b + 1,
                    w_ij: format_rational(&w[(a, b)]),
                    w_ji: format_rational(&w[(b, a)]),
                });
            }
        }
    }

    let dim = m + 2;
    let z = m + 1;
    let mut names = vec!["f".to_string()];
    names.extend((1..=m).map(|i| format!("e{i}")));
    names.push("z".to_string());

    let mut brackets = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let mut v = vec![BigRational::zero(); dim];
            v[0] = w[(a, b)].clone();
            brackets.push(((a + 1, b + 1), v));
        }
        // [e_a, z] = -h e_a
        let mut v = vec![BigRational::zero(); dim];
        for i in 0..m {
            v[i + 1] = -h[(i, a)].clone();
        }
        brackets.push(((a + 1, z), v));
    }
    let algebra = LieAlgebra::new(names, brackets)?;

    let mut gram = RatMatrix::zeros(dim, dim);
    for a in 0..m {
        for b in 0..m {
            gram[(a + 1, b + 1)] = u_form.gram()[(a, b)].clone();
        }
    }
    gram[(0, z)] = BigRational::one();
    gram[(z, 0)] = BigRational::one();
    gram[(z, z)] = BigRational::one();
    let product = BilinearForm::new(gram)?;

    assert!(algebra.jacobi_violations().is_empty(), "double extension violates Jacobi");
    assert!(product.is_ad_invariant(&algebra), "double extension product is not invariant");
    assert!(product.is_nondegenerate(), "double extension product is degenerate");
    Ok((algebra, product))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::rat;

    fn rotation() -> RatMatrix {
        // h e1 = e2, h e2 = -e1 (columns are images)
        RatMatrix::from_i64_rows(&[&[0, -1], &[1, 0]])
    }

    #[test]
    fn zero_derivation_gives_abelian() {
        let (l, b) = double_extension(&BilinearForm::euclidean(2), &RatMatrix::zeros(2, 2)).unwrap();
        assert_eq!(l.dim(), 4);
        assert!(l.is_abelian());
        assert!(b.is_nondegenerate());
    }

    #[test]
    fn rotation_gives_oscillator() {
        let (l, b) = double_extension(&BilinearForm::euclidean(2), &rotation()).unwrap();
        // basis f, e1, e2, z
        assert_eq!(l.basis_bracket(3, 1), vec![rat(0), rat(0), rat(1), rat(0)]);
        assert_eq!(l.basis_bracket(3, 2), vec![rat(0), rat(-1), rat(0), rat(0)]);
        assert_eq!(l.basis_bracket(1, 2), vec![rat(1), rat(0), rat(0), rat(0)]);
        for i in 0..4 {
            assert!(l.basis_bracket(0, i).iter().all(Zero::is_zero));
        }
        assert!(b.is_ad_invariant(&l));
        assert!(b.is_nondegenerate());
        assert_eq!(l.validate().nilpotency_class, None);
    }

    #[test]
    fn non_skew_derivation_rejected() {
        // h e1 = e2, h e2 = 0
        let h = RatMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]);
        let err = double_extension(&BilinearForm::euclidean(2), &h).unwrap_err();
        assert_eq!(
            err,
            Error::NotSkew {
                i: 1,
                j: 2,
                w_ij: "1".into(),
                w_ji: "0".into()
            }
        );
    }

    #[test]
    fn degenerate_form_rejected() {
        let g = BilinearForm::new(RatMatrix::from_i64_rows(&[&[1, 0], &[0, 0]])).unwrap();
        assert!(matches!(
            double_extension(&g, &RatMatrix::zeros(2, 2)),
            Err(Error::Degenerate { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn indefinite_base_form() {
        // U = R^{1,1} with a boost, skew for diag(1,-1).
        let g = BilinearForm::new(RatMatrix::from_i64_rows(&[&[1, 0], &[0, -1]])).unwrap();
        let h = RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let (l, b) = double_extension(&g, &h).unwrap();
        assert!(b.is_ad_invariant(&l));
    }
}
