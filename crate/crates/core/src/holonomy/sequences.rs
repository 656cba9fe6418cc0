//! Higher cocycles attached to 2-sequences with abelian coefficients.

use crate::cech::{coboundary, cohomology, is_coboundary, AbelianCoefficients, Cochain, CohomologyGroup, Nerve};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeCocycle {
    pub cstar: Cochain,
    pub closed: bool,
}

/// `c*(ijl) = u*(li) + u*(ij) + u*(jl)` with alternating evaluation, which
/// is `(δu*)(ijl)`.
pub fn two_sequence_3cocycle(nerve: &Nerve, ustar: &Cochain) -> Result<ThreeCocycle> {
    if ustar.degree() != 1 {
        return Err(Error::DimensionMismatch(format!("u* must have degree 1, got {}", ustar.degree())));
    }
    let values = nerve
        .simplices(2)
        .iter()
        .map(|t| {
            let (i, j, l) = (t[0], t[1], t[2]);
            Ok(ustar.eval(nerve, &[l, i])? + ustar.eval(nerve, &[i, j])? + ustar.eval(nerve, &[j, l])?)
        })
        .collect::<Result<Vec<_>>>()?;
    let cstar = Cochain::new(nerve, 2, ustar.coefficients().clone(), values)?;
    debug_assert_eq!(cstar, coboundary(nerve, ustar)?);
    let closed = coboundary(nerve, &cstar)?.is_zero();
    Ok(ThreeCocycle { cstar, closed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourCocycle {
    pub c: Cochain,
    pub closed: bool,
    /// Whether `c` is a coboundary.
    pub class_trivial: bool,
    /// `H^3` of the nerve, when computable for the coefficients.
    pub h3: Option<CohomologyGroup>,
}

/// `c(ijlm) = (δc*)(ijlm)`.
pub fn two_sequence_4cocycle(nerve: &Nerve, cstar: &Cochain) -> Result<FourCocycle> {
    if cstar.degree() != 2 {
        return Err(Error::DimensionMismatch(format!("c* must have degree 2, got {}", cstar.degree())));
    }
    let c = coboundary(nerve, cstar)?;
    let closed = coboundary(nerve, &c)?.is_zero();
    assert!(closed, "δδ != 0");
    let class_trivial = is_coboundary(nerve, &c)?;
    let h3 = match cstar.coefficients() {
        AbelianCoefficients::RationalsModOne => None,
        k => Some(cohomology(nerve, 3, k)?),
    };
    Ok(FourCocycle {
        c,
        closed,
        class_trivial,
        h3,
    })
}
