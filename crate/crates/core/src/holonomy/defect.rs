//! Matrix-valued constant data on a nerve: the curvature defect and the
//! connective-structure relation. Group elements are invertible rational
//! matrices acting on the Lie algebra of matrices by `Ad_u(X) = u X u⁻¹`.

use serde::Serialize;

use crate::algebra_core::RatMatrix;
use crate::cech::{coboundary, AbelianCoefficients, Cochain, Nerve};
use crate::error::{Error, Result};

fn ad(u: &RatMatrix, x: &RatMatrix) -> Result<RatMatrix> {
    let inv = u
        .inverse()
        .ok_or_else(|| Error::InvalidInput("group element is not invertible".into()))?;
    u.mul(x)?.mul(&inv)
}

fn check_shapes(nerve: &Nerve, per_vertex: &[RatMatrix], per_edge: &[RatMatrix]) -> Result<usize> {
    if per_vertex.len() != nerve.count(0) || per_edge.len() != nerve.count(1) {
        return Err(Error::MissingData(format!(
            "{} vertex and {} edge values for {} vertices and {} edges",
            per_vertex.len(),
            per_edge.len(),
            nerve.count(0),
            nerve.count(1)
        )));
    }
    let n = per_vertex.first().or(per_edge.first()).map_or(0, RatMatrix::rows);
    if per_vertex
        .iter()
        .chain(per_edge)
        .any(|m| m.rows() != n || m.cols() != n)
    {
        return Err(Error::DimensionMismatch(format!("all matrices must be {n}x{n}")));
    }
    Ok(n)
}

fn edge(nerve: &Nerve, a: usize, b: usize) -> usize {
    nerve.index_of(&[a, b]).expect("edge in nerve")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureDefect {
    /// `Δ(ij) = Ω_i - Ad_{u_ij}(Ω_j)` per edge, nerve order.
    pub delta: Vec<RatMatrix>,
    /// Triangles where `u_ij u_jl = u_il`; only these are checked.
    pub strict_triangles: Vec<Vec<usize>>,
    /// Strict triangles where `Δ(ij) + Ad_{u_ij} Δ(jl) - Δ(il) ≠ 0`.
    pub violations: Vec<Vec<usize>>,
}

impl CurvatureDefect {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn curvature_defect(nerve: &Nerve, omega: &[RatMatrix], u: &[RatMatrix]) -> Result<CurvatureDefect> {
    check_shapes(nerve, omega, u)?;
    let delta = nerve
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(e, s)| omega[s[0]].sub(&ad(&u[e], &omega[s[1]])?))
        .collect::<Result<Vec<_>>>()?;
    let mut strict_triangles = Vec::new();
    let mut violations = Vec::new();
    for t in nerve.simplices(2) {
        let (ij, jl, il) = (edge(nerve, t[0], t[1]), edge(nerve, t[1], t[2]), edge(nerve, t[0], t[2]));
        if u[ij].mul(&u[jl])? != u[il] {
            continue;
        }
        strict_triangles.push(t.clone());
        let twisted = delta[ij].add(&ad(&u[ij], &delta[jl])?)?.sub(&delta[il])?;
        if !twisted.is_zero() {
            violations.push(t.clone());
        }
    }
    Ok(CurvatureDefect {
        delta,
        strict_triangles,
        violations,
    })
}

/// Abelian case: `Δ(ij) = Ω_i - Ω_j = -(δΩ)(ij)`.
pub fn curvature_defect_abelian(nerve: &Nerve, omega: &Cochain) -> Result<Cochain> {
    if omega.degree() != 0 {
        return Err(Error::DimensionMismatch("curvature data is a 0-cochain".into()));
    }
    Ok(coboundary(nerve, omega)?.neg())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleResidual {
    pub triangle: Vec<usize>,
    /// `Ad_{u_il}(α_l - Ad_c(α_l))` is zero.
    pub defect_vanishes: bool,
    /// The relation holds exactly.
    pub residual_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectiveReport {
    /// `α_ij = α_i - Ad_{u_ij}(α_j)` per edge.
    pub alpha_edges: Vec<RatMatrix>,
    pub triangles: Vec<TriangleResidual>,
}

impl ConnectiveReport {
    pub fn passed(&self) -> bool {
        self.triangles.iter().all(|t| t.residual_zero)
    }
}

/// On every triangle, `α_ij + Ad_{u_ij}(α_jl) - α_il` must equal the
/// conjugation defect `Ad_{u_il}(α_l - Ad_{c_ijl}(α_l))`, given
/// `u_ij u_jl = u_il c_ijl`.
pub fn connective_consistency(
    nerve: &Nerve,
    alpha: &[RatMatrix],
    u: &[RatMatrix],
    c: &[RatMatrix],
) -> Result<ConnectiveReport> {
    let n = check_shapes(nerve, alpha, u)?;
    if c.len() != nerve.count(2) || c.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::MissingData("need one n x n matrix per triangle".into()));
    }
    let alpha_edges = nerve
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(e, s)| alpha[s[0]].sub(&ad(&u[e], &alpha[s[1]])?))
        .collect::<Result<Vec<_>>>()?;
    let mut triangles = Vec::new();
    for (ti, t) in nerve.simplices(2).iter().enumerate() {
        let (ij, jl, il) = (edge(nerve, t[0], t[1]), edge(nerve, t[1], t[2]), edge(nerve, t[0], t[2]));
        if u[ij].mul(&u[jl])? != u[il].mul(&c[ti])? {
            return Err(Error::NotCocycle(format!("u_ij u_jl != u_il c_ijl on {t:?}")));
        }
        let combination = alpha_edges[ij].add(&ad(&u[ij], &alpha_edges[jl])?)?.sub(&alpha_edges[il])?;
        let al = &alpha[t[2]];
        let defect = ad(&u[il], &al.sub(&ad(&c[ti], al)?)?)?;
        triangles.push(TriangleResidual {
            triangle: t.clone(),
            defect_vanishes: defect.is_zero(),
            residual_zero: combination.sub(&defect)?.is_zero(),
        });
    }
    Ok(ConnectiveReport { alpha_edges, triangles })
}

/// Scalar (1x1) data read as an abelian cochain over `Q`.
pub fn scalars_to_cochain(nerve: &Nerve, degree: usize, values: &[RatMatrix]) -> Result<Cochain> {
    Cochain::new(
        nerve,
        degree,
        AbelianCoefficients::Rationals,
        values.iter().map(|m| m[(0, 0)].clone()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::rat;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    /// u_ij = g_i g_j⁻¹ is a strict cocycle.
    fn gauge_cocycle(nerve: &Nerve, g: &[RatMatrix]) -> Vec<RatMatrix> {
        nerve
            .simplices(1)
            .iter()
            .map(|e| g[e[0]].mul(&g[e[1]].inverse().unwrap()).unwrap())
            .collect()
    }

    fn sl2_gauges() -> Vec<RatMatrix> {
        vec![
            m(&[&[1, 0], &[0, 1]]),
            m(&[&[1, 1], &[0, 1]]),
            m(&[&[1, 0], &[2, 1]]),
            m(&[&[2, 1], &[1, 1]]),
        ]
    }

    #[test]
    fn equal_curvatures_trivial_gauge() {
        let n = Nerve::tetrahedron_boundary();
        let omega = vec![m(&[&[1, 2], &[3, -1]]); 4];
        let u = vec![RatMatrix::identity(2); 6];
        let r = curvature_defect(&n, &omega, &u).unwrap();
        assert!(r.delta.iter().all(RatMatrix::is_zero));
        assert_eq!(r.strict_triangles.len(), 4);
    }

    #[test]
    fn traceless_defect_satisfies_twisted_law() {
        let n = Nerve::tetrahedron_boundary();
        let omega = vec![
            m(&[&[1, 0], &[0, -1]]),
            m(&[&[0, 1], &[0, 0]]),
            m(&[&[0, 0], &[1, 0]]),
            m(&[&[2, 3], &[-1, -2]]),
        ];
        let u = gauge_cocycle(&n, &sl2_gauges());
        let r = curvature_defect(&n, &omega, &u).unwrap();
        assert_eq!(r.strict_triangles.len(), 4);
        assert!(r.passed());
        assert!(r.delta.iter().any(|d| !d.is_zero()));
    }

    #[test]
    fn scalar_defect_is_minus_coboundary() {
        let n = Nerve::tetrahedron_boundary();
        let omega: Vec<RatMatrix> = [3, -1, 4, 7].iter().map(|&v| m(&[&[v]])).collect();
        let u = vec![RatMatrix::identity(1); 6];
        let r = curvature_defect(&n, &omega, &u).unwrap();
        let from_matrices = scalars_to_cochain(&n, 1, &r.delta).unwrap();
        let cochain = scalars_to_cochain(&n, 0, &omega).unwrap();
        assert_eq!(curvature_defect_abelian(&n, &cochain).unwrap(), from_matrices);
    }

    #[test]
    fn connective_relation_with_trivial_twist() {
        let n = Nerve::tetrahedron_boundary();
        let alpha = vec![
            m(&[&[0, 1], &[0, 0]]),
            m(&[&[1, 0], &[0, -1]]),
            m(&[&[0, 0], &[5, 0]]),
            m(&[&[1, 1], &[1, -1]]),
        ];
        let u = gauge_cocycle(&n, &sl2_gauges());
        let c = vec![RatMatrix::identity(2); 4];
        let r = connective_consistency(&n, &alpha, &u, &c).unwrap();
        assert!(r.passed());
        assert!(r.triangles.iter().all(|t| t.defect_vanishes));
    }

    #[test]
    fn central_twist_has_no_defect() {
        // c = -I is central; u_ij u_jl = u_il c on the single triangle.
        let n = Nerve::from_facets(&[vec![0, 1, 2]]).unwrap();
        let u01 = m(&[&[0, -1], &[1, 0]]);
        let u12 = m(&[&[0, -1], &[1, 0]]);
        let c = m(&[&[-1, 0], &[0, -1]]);
        // u01 u12 = -I, so u02 = I.
        let u02 = RatMatrix::identity(2);
        let u = vec![u01, u02, u12];
        let alpha = vec![m(&[&[1, 2], &[3, 4]]), m(&[&[0, 1], &[-1, 0]]), m(&[&[2, 0], &[0, 5]])];
        let r = connective_consistency(&n, &alpha, &u, &[c]).unwrap();
        assert!(r.passed());
        assert!(r.triangles[0].defect_vanishes);
    }

    #[test]
    fn non_central_twist_defect_is_accounted_for() {
        let n = Nerve::from_facets(&[vec![0, 1, 2]]).unwrap();
        let u01 = m(&[&[1, 1], &[0, 1]]);
        let u12 = RatMatrix::identity(2);
        let u02 = RatMatrix::identity(2);
        // c = u02⁻¹ u01 u12 = u01, not central.
        let c = u01.clone();
        let u = vec![u01, u02, u12];
        let alpha = vec![m(&[&[0, 0], &[0, 0]]), m(&[&[0, 0], &[0, 0]]), m(&[&[0, 0], &[1, 0]])];
        let r = connective_consistency(&n, &alpha, &u, &[c]).unwrap();
        assert!(r.passed());
        assert!(!r.triangles[0].defect_vanishes);
        let wrong = connective_consistency(&n, &alpha, &u, &[RatMatrix::identity(2)]);
        assert!(matches!(wrong, Err(Error::NotCocycle(_))));
    }

    #[test]
    fn abelian_alpha_edges_are_closed() {
        let n = Nerve::tetrahedron_boundary();
        let alpha: Vec<RatMatrix> = [1, 5, -2, 8].iter().map(|&v| m(&[&[v]])).collect();
        let u = vec![RatMatrix::identity(1); 6];
        let c = vec![RatMatrix::identity(1); 4];
        let r = connective_consistency(&n, &alpha, &u, &c).unwrap();
        let edges = scalars_to_cochain(&n, 1, &r.alpha_edges).unwrap();
        assert!(coboundary(&n, &edges).unwrap().is_zero());
        assert_eq!(edges.values()[0], rat(1 - 5));
    }
}
