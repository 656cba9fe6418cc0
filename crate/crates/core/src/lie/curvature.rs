//! Curvature of constant-coefficient connection forms.
//!
//! A connection form is a 1-form on a base algebra with values in a second
//! ("value") algebra. Its curvature is `Ω = dθ + ½[θ,θ]` where
//! `[θ,α](x,y) = [θ(x),α(y)] - [θ(y),α(x)]`, so `½[θ,θ](x,y) = [θ(x),θ(y)]`.

use num_rational::BigRational;

use super::{exterior_derivative, InvariantForm, LieAlgebra};
use crate::algebra_core::RatMatrix;
use crate::error::{Error, Result};

fn check_connection(base: &LieAlgebra, values: &LieAlgebra, theta: &InvariantForm) -> Result<()> {
    if theta.degree() != 1 {
        return Err(Error::InvalidInput(format!(
            "connection forms have degree 1, got {}",
            theta.degree()
        )));
    }
    if theta.algebra_dim() != base.dim() || theta.value_dim() != values.dim() {
        return Err(Error::DimensionMismatch(format!(
            "form on ({}, {}) but algebras have dimensions ({}, {})",
            theta.algebra_dim(),
            theta.value_dim(),
            base.dim(),
            values.dim()
        )));
    }
    Ok(())
}

/// Graded bracket of two value-algebra-valued 1-forms.
pub fn bracket_forms(
    base: &LieAlgebra,
    values: &LieAlgebra,
    theta: &InvariantForm,
    alpha: &InvariantForm,
) -> Result<InvariantForm> {
    check_connection(base, values, theta)?;
    check_connection(base, values, alpha)?;
    let n = base.dim();
    let mut out = InvariantForm::zero(2, n, values.dim());
    for (idx, t) in out.tuples().into_iter().enumerate() {
        let (x, y) = (t[0], t[1]);
        let a = values.bracket(&theta.eval(&[x]), &alpha.eval(&[y]))?;
        let b = values.bracket(&theta.eval(&[y]), &alpha.eval(&[x]))?;
        let slot = out.component_mut(idx);
        for ((s, p), q) in slot.iter_mut().zip(a).zip(b) {
            *s = p - q;
        }
    }
    Ok(out)
}

pub fn curvature(base: &LieAlgebra, values: &LieAlgebra, theta: &InvariantForm) -> Result<InvariantForm> {
    check_connection(base, values, theta)?;
    let d = exterior_derivative(base, theta)?;
    let half = BigRational::new(1.into(), 2.into());
    let b = bracket_forms(base, values, theta, theta)?.scale(&half);
    d.add(&b)
}

/// `curvature(θ) - curvature(α)`.
pub fn curving(
    base: &LieAlgebra,
    values: &LieAlgebra,
    theta: &InvariantForm,
    alpha: &InvariantForm,
) -> Result<InvariantForm> {
    curvature(base, values, theta)?.sub(&curvature(base, values, alpha)?)
}

/// Checks `Ω(θ+α) = Ω(θ) + dα + ½([α,α] + [θ,α] + [α,θ])`.
pub fn transformation_law_holds(
    base: &LieAlgebra,
    values: &LieAlgebra,
    theta: &InvariantForm,
    alpha: &InvariantForm,
) -> Result<bool> {
    let lhs = curvature(base, values, &theta.add(alpha)?)?;
    let half = BigRational::new(1.into(), 2.into());
    let brackets = bracket_forms(base, values, alpha, alpha)?
        .add(&bracket_forms(base, values, theta, alpha)?)?
        .add(&bracket_forms(base, values, alpha, theta)?)?
        .scale(&half);
    let rhs = curvature(base, values, theta)?
        .add(&exterior_derivative(base, alpha)?)?
        .add(&brackets)?;
    Ok(lhs == rhs)
}

fn check_morphism(f: &RatMatrix, source: &LieAlgebra, target: &LieAlgebra) -> Result<()> {
    if f.rows() != target.dim() || f.cols() != source.dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, algebras have dimensions {} -> {}",
            f.rows(),
            f.cols(),
            source.dim(),
            target.dim()
        )));
    }
    let n = source.dim();
    let images: Vec<_> = (0..n).map(|i| f.column(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = f.mul_vec(&source.basis_bracket(i, j))?;
            let rhs = target.bracket(&images[i], &images[j])?;
            if lhs != rhs {
                return Err(Error::NotLieMorphism(i, j));
            }
        }
    }
    Ok(())
}

/// Applies a verified Lie algebra morphism to the values of a form.
pub fn pushforward_form(
    f: &RatMatrix,
    source: &LieAlgebra,
    target: &LieAlgebra,
    form: &InvariantForm,
) -> Result<InvariantForm> {
    check_morphism(f, source, target)?;
    form.map_values(f)
}

/// `f ∘ Ω(θ) == Ω(f ∘ θ)`.
pub fn naturality_holds(
    base: &LieAlgebra,
    source: &LieAlgebra,
    target: &LieAlgebra,
    f: &RatMatrix,
    theta: &InvariantForm,
) -> Result<bool> {
    let pushed_curvature = pushforward_form(f, source, target, &curvature(base, source, theta)?)?;
    let curvature_of_pushed = curvature(base, target, &pushforward_form(f, source, target, theta)?)?;
    Ok(pushed_curvature == curvature_of_pushed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::rat;

    fn heis_z_star() -> InvariantForm {
        InvariantForm::scalar_one_form(vec![rat(0), rat(0), rat(1)])
    }

    #[test]
    fn zero_connection_is_flat() {
        let base = LieAlgebra::heisenberg();
        let values = LieAlgebra::gl(2);
        let theta = InvariantForm::zero(1, 3, 4);
        assert!(curvature(&base, &values, &theta).unwrap().is_zero());
    }

    #[test]
    fn abelian_everything_is_flat() {
        let base = LieAlgebra::abelian(3);
        let values = LieAlgebra::abelian(2);
        let theta = InvariantForm::one_form(
            vec![vec![rat(1), rat(2)], vec![rat(-1), rat(0)], vec![rat(3), rat(5)]],
            2,
        )
        .unwrap();
        assert!(curvature(&base, &values, &theta).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_curvature() {
        let base = LieAlgebra::heisenberg();
        let values = LieAlgebra::abelian(1);
        let omega = curvature(&base, &values, &heis_z_star()).unwrap();
        assert_eq!(omega.eval(&[0, 1]), vec![rat(-1)]);
        assert_eq!(omega.nonzero_components().len(), 1);
    }

    #[test]
    fn curving_examples() {
        let base = LieAlgebra::heisenberg();
        let values = LieAlgebra::abelian(1);
        let theta = heis_z_star();
        assert!(curving(&base, &values, &theta, &theta).unwrap().is_zero());
        let zero = InvariantForm::zero(1, 3, 1);
        assert_eq!(
            curving(&base, &values, &theta, &zero).unwrap(),
            curvature(&base, &values, &theta).unwrap()
        );
        let alpha = InvariantForm::scalar_one_form(vec![rat(1), rat(0), rat(0)]);
        let l = curving(&base, &values, &theta, &alpha).unwrap();
        assert_eq!(l.eval(&[0, 1]), vec![rat(-1)]);
        assert_eq!(l.nonzero_components().len(), 1);
    }

    #[test]
    fn transformation_law_on_gl2() {
        let base = LieAlgebra::heisenberg();
        let values = LieAlgebra::gl(2);
        let theta = InvariantForm::one_form(
            vec![
                vec![rat(1), rat(2), rat(0), rat(-1)],
                vec![rat(0), rat(1), rat(3), rat(0)],
                vec![rat(2), rat(0), rat(1), rat(1)],
            ],
            4,
        )
        .unwrap();
        let alpha = InvariantForm::one_form(
            vec![
                vec![rat(0), rat(1), rat(1), rat(0)],
                vec![rat(-2), rat(0), rat(0), rat(1)],
                vec![rat(0), rat(0), rat(4), rat(0)],
            ],
            4,
        )
        .unwrap();
        assert!(transformation_law_holds(&base, &values, &theta, &alpha).unwrap());
    }

    #[test]
    fn trace_kills_traceless_curvature() {
        let base = LieAlgebra::heisenberg();
        let gl2 = LieAlgebra::gl(2);
        let line = LieAlgebra::abelian(1);
        let trace = RatMatrix::from_i64_rows(&[&[1, 0, 0, 1]]);
        // traceless values: E12, E21, E11 - E22
        let theta = InvariantForm::one_form(
            vec![
                vec![rat(0), rat(1), rat(0), rat(0)],
                vec![rat(0), rat(0), rat(1), rat(0)],
                vec![rat(1), rat(0), rat(0), rat(-1)],
            ],
            4,
        )
        .unwrap();
        let omega = curvature(&base, &gl2, &theta).unwrap();
        assert!(!omega.is_zero());
        let pushed = pushforward_form(&trace, &gl2, &line, &omega).unwrap();
        assert!(pushed.is_zero());
        assert!(naturality_holds(&base, &gl2, &line, &trace, &theta).unwrap());
    }

    #[test]
    fn pushforward_identity_and_zero() {
        let g = LieAlgebra::gl(2);
        let theta = InvariantForm::one_form(vec![vec![rat(1), rat(2), rat(3), rat(4)]; 3], 4).unwrap();
        assert_eq!(pushforward_form(&RatMatrix::identity(4), &g, &g, &theta).unwrap(), theta);
        assert!(pushforward_form(&RatMatrix::zeros(4, 4), &g, &g, &theta).unwrap().is_zero());
    }

    #[test]
    fn non_morphism_rejected() {
        let g = LieAlgebra::gl(2);
        let line = LieAlgebra::abelian(1);
        // [E12, E21] = E11 - E22 has E11-coordinate 1, but the line is abelian.
        let f = RatMatrix::from_i64_rows(&[&[1, 0, 0, 0]]);
        let theta = InvariantForm::zero(1, 3, 4);
        assert_eq!(
            pushforward_form(&f, &g, &line, &theta),
            Err(Error::NotLieMorphism(1, 2))
        );
    }
}
