//! Group-valued cochains, the twisted 2-cocycle law, induced cocycles and
//! lifting obstructions.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{AbelianCoefficients, Cochain, Nerve};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};

/// A cochain with values in a finite group, one element index per simplex
/// in nerve order. Values live on increasing tuples only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupCochain {
    pub degree: usize,
    pub values: Vec<usize>,
}

impl GroupCochain {
    pub fn new(nerve: &Nerve, group: &FiniteGroup, degree: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != nerve.count(degree) {
            return Err(Error::MissingData(format!(
                "{} values for {} simplices of degree {degree}",
                values.len(),
                nerve.count(degree)
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= group.order()) {
            return Err(Error::OutOfRange(format!("element {bad} in a group of order {}", group.order())));
        }
        Ok(Self { degree, values })
    }

    pub fn constant(nerve: &Nerve, degree: usize, value: usize) -> Self {
        Self {
            degree,
            values: vec![value; nerve.count(degree)],
        }
    }

    pub fn at(&self, nerve: &Nerve, simplex: &[usize]) -> usize {
        self.values[nerve.index_of(simplex).expect("simplex in nerve")]
    }

    /// `Z/m`-valued cochain read as an abelian cochain over `Z/m`, using the
    /// element labelling of [`FiniteGroup::cyclic`].
    pub fn to_cyclic(&self, nerve: &Nerve, m: u64) -> Result<Cochain> {
        let values: Vec<i64> = self.values.iter().map(|&v| v as i64).collect();
        Cochain::from_integers(nerve, self.degree, AbelianCoefficients::modular(m)?, &values)
    }

    pub fn from_cyclic(c: &Cochain) -> Result<Self> {
        let AbelianCoefficients::IntegersMod(_) = c.coefficients() else {
            return Err(Error::UnsupportedCoefficients(format!("expected Z/m, got {}", c.coefficients())));
        };
        let values = c
            .values()
            .iter()
            .map(|v| usize::try_from(v.to_integer()).expect("reduced residue"))
            .collect();
        Ok(Self {
            degree: c.degree(),
            values,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    /// Triangles where `λ_ij ∘ λ_jl ≠ Ad(c_ijl) ∘ λ_il`.
    pub triangle_violations: Vec<Vec<usize>>,
    /// Tetrahedra where `λ_ij(c_jlm) c_ijm ≠ c_ijl c_ilm`.
    pub tetrahedron_violations: Vec<Vec<usize>>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.triangle_violations.is_empty() && self.tetrahedron_violations.is_empty()
    }
}

/// Checks the twisted 2-cocycle law for automorphisms `lambda` (one per
/// edge, nerve order) and a 2-cochain `c` in `h`.
pub fn nonabelian_2cocycle_check(
    nerve: &Nerve,
    h: &FiniteGroup,
    lambda: &[GroupHom],
    c: &GroupCochain,
) -> Result<CocycleReport> {
    if lambda.len() != nerve.count(1) {
        return Err(Error::MissingData(format!(
            "{} automorphisms for {} edges",
            lambda.len(),
            nerve.count(1)
        )));
    }
    for (e, l) in lambda.iter().enumerate() {
        if !l.is_bijective_onto(h) {
            return Err(Error::InvalidInput(format!(
                "map on edge {:?} is not an automorphism",
                nerve.simplices(1)[e]
            )));
        }
    }
    if c.degree != 2 || c.values.len() != nerve.count(2) {
        return Err(Error::MissingData("2-cochain does not cover every triangle".into()));
    }
    let lam = |a: usize, b: usize| &lambda[nerve.index_of(&[a, b]).expect("edge")];
    let mut report = CocycleReport::default();
    for t in nerve.simplices(2) {
        let (i, j, l) = (t[0], t[1], t[2]);
        let cijl = c.at(nerve, t);
        let composed = lam(i, j).compose(lam(j, l));
        let twisted = GroupHom::conjugation(h, cijl).compose(lam(i, l));
        if composed != twisted {
            report.triangle_violations.push(t.clone());
        }
    }
    for s in nerve.simplices(3) {
        let (i, j, l, m) = (s[0], s[1], s[2], s[3]);
        let lhs = h.mul(lam(i, j).apply(c.at(nerve, &[j, l, m])), c.at(nerve, &[i, j, m]));
        let rhs = h.mul(c.at(nerve, &[i, j, l]), c.at(nerve, &[i, l, m]));
        if lhs != rhs {
            report.tetrahedron_violations.push(s.clone());
        }
    }
    let trivial_band = lambda.iter().all(|l| *l == GroupHom::identity(h));
    if h.is_abelian() && trivial_band {
        // Reduces to δc = 0 written multiplicatively.
        let delta_nonzero: Vec<Vec<usize>> = nerve
            .simplices(3)
            .iter()
            .filter(|s| {
                let v = |a: usize, b: usize, d: usize| c.at(nerve, &[s[a], s[b], s[d]]);
                let x = h.mul(h.mul(v(1, 2, 3), h.inv(v(0, 2, 3))), h.mul(v(0, 1, 3), h.inv(v(0, 1, 2))));
                x != h.identity()
            })
            .cloned()
            .collect();
        assert_eq!(delta_nonzero, report.tetrahedron_violations, "abelian specialization disagrees with δc");
    }
    Ok(report)
}

/// Identity automorphism on every edge.
pub fn trivial_band(nerve: &Nerve, h: &FiniteGroup) -> Vec<GroupHom> {
    vec![GroupHom::identity(h); nerve.count(1)]
}

/// Applies `f` valuewise.
pub fn induced_cocycle(f: &GroupHom, c: &GroupCochain) -> GroupCochain {
    GroupCochain {
        degree: c.degree,
        values: c.values.iter().map(|&v| f.apply(v)).collect(),
    }
}

/// `1 → H → L' → L → 1` with a set-theoretic section `s : L → L'`.
#[derive(Clone, Debug)]
pub struct GroupExtensionData {
    pub h: FiniteGroup,
    pub l_prime: FiniteGroup,
    pub l: FiniteGroup,
    pub inclusion: GroupHom,
    pub projection: GroupHom,
    pub section: Vec<usize>,
    preimage: BTreeMap<usize, usize>,
}

impl GroupExtensionData {
    pub fn new(
        h: FiniteGroup,
        l_prime: FiniteGroup,
        l: FiniteGroup,
        inclusion: Vec<usize>,
        projection: Vec<usize>,
        section: Vec<usize>,
    ) -> Result<Self> {
        let inclusion = GroupHom::new(&h, &l_prime, inclusion)?;
        let projection = GroupHom::new(&l_prime, &l, projection)?;
        if !inclusion.is_injective() {
            return Err(Error::InvalidExtension("inclusion is not injective".into()));
        }
        if projection.image().len() != l.order() {
            return Err(Error::InvalidExtension("projection is not surjective".into()));
        }
        if projection.kernel(&l_prime, &l) != inclusion.image() {
            return Err(Error::InvalidExtension("kernel of the projection is not the image of H".into()));
        }
        if section.len() != l.order() || section.iter().any(|&x| x >= l_prime.order()) {
            return Err(Error::InvalidExtension("section has the wrong shape".into()));
        }
        if (0..l.order()).any(|g| projection.apply(section[g]) != g) {
            return Err(Error::InvalidExtension("section is not a right inverse of the projection".into()));
        }
        let preimage = (0..h.order()).map(|x| (inclusion.apply(x), x)).collect();
        Ok(Self {
            h,
            l_prime,
            l,
            inclusion,
            projection,
            section,
            preimage,
        })
    }

    /// `Z/2 → Z/4 → Z/2` with section `0 ↦ 0, 1 ↦ 1`.
    pub fn z2_z4_z2() -> Self {
        let z2 = FiniteGroup::cyclic(2);
        Self::new(z2.clone(), FiniteGroup::cyclic(4), z2, vec![0, 2], vec![0, 1, 0, 1], vec![0, 1])
            .expect("Z/4 extension")
    }

    /// `Z/2 → Z/2 × Z/2 → Z/2`, split, with the homomorphic section.
    pub fn split_z2() -> Self {
        let z2 = FiniteGroup::cyclic(2);
        let v4 = FiniteGroup::direct_product(&z2, &z2);
        // (a, b) has index 2a + b; H is the first factor, L the second.
        Self::new(z2.clone(), v4, z2, vec![0, 2], vec![0, 1, 0, 1], vec![0, 1]).expect("split extension")
    }

    /// `Z/3 → S3 → Z/2` via the sign, with a transposition as section.
    pub fn z3_s3_z2() -> Self {
        let s3 = FiniteGroup::symmetric(3);
        let rotation = s3.index_of("(0 1 2)").expect("3-cycle");
        let transposition = s3.index_of("(0 1)").expect("transposition");
        let z3 = FiniteGroup::cyclic(3);
        let inclusion: Vec<usize> = (0..3).map(|k| s3.power(rotation, k)).collect();
        let projection: Vec<usize> = (0..6).map(|g| usize::from(!inclusion.contains(&g))).collect();
        Self::new(z3, s3, FiniteGroup::cyclic(2), inclusion, projection, vec![0, transposition])
            .expect("S3 extension")
    }

    pub fn with_section(&self, section: Vec<usize>) -> Result<Self> {
        Self::new(
            self.h.clone(),
            self.l_prime.clone(),
            self.l.clone(),
            self.inclusion.map().to_vec(),
            self.projection.map().to_vec(),
            section,
        )
    }

    pub fn is_central(&self) -> bool {
        let image = self.inclusion.image();
        let center = self.l_prime.center();
        image.iter().all(|x| center.contains(x))
    }

    /// The element of `H` mapping to `x`, if `x` lies in its image.
    pub fn pull_back(&self, x: usize) -> Option<usize> {
        self.preimage.get(&x).copied()
    }
}

fn check_strict_cocycle(nerve: &Nerve, l: &FiniteGroup, u: &GroupCochain) -> Result<()> {
    if u.degree != 1 || u.values.len() != nerve.count(1) {
        return Err(Error::MissingData("1-cochain does not cover every edge".into()));
    }
    if let Some(&bad) = u.values.iter().find(|&&v| v >= l.order()) {
        return Err(Error::OutOfRange(format!("element {bad} in a group of order {}", l.order())));
    }
    for t in nerve.simplices(2) {
        let (i, j, k) = (t[0], t[1], t[2]);
        if l.mul(u.at(nerve, &[i, j]), u.at(nerve, &[j, k])) != u.at(nerve, &[i, k]) {
            return Err(Error::NotCocycle(format!("{t:?}")));
        }
    }
    Ok(())
}

fn obstruction_values(nerve: &Nerve, ext: &GroupExtensionData, u: &GroupCochain) -> GroupCochain {
    let lp = &ext.l_prime;
    let s = |a: usize, b: usize| ext.section[u.at(nerve, &[a, b])];
    let values = nerve
        .simplices(2)
        .iter()
        .map(|t| {
            let (i, j, l) = (t[0], t[1], t[2]);
            let x = lp.mul(lp.mul(s(i, j), s(j, l)), lp.inv(s(i, l)));
            ext.pull_back(x).expect("u is a cocycle, so the defect lies in H")
        })
        .collect();
    GroupCochain { degree: 2, values }
}

/// `c_ijl = s(u_ij) s(u_jl) s(u_il)⁻¹` in `H`, for central `H`.
pub fn lifting_obstruction(nerve: &Nerve, ext: &GroupExtensionData, u: &GroupCochain) -> Result<GroupCochain> {
    check_strict_cocycle(nerve, &ext.l, u)?;
    if !ext.is_central() {
        return Err(Error::NotCentral);
    }
    let c = obstruction_values(nerve, ext, u);
    debug_assert!(nonabelian_2cocycle_check(nerve, &ext.h, &trivial_band(nerve, &ext.h), &c)
        .expect("shapes")
        .passed());
    Ok(c)
}

/// For non-central `H`: the band `λ_ij = Ad(s(u_ij))` restricted to `H`,
/// together with the obstruction cochain.
pub fn lifting_obstruction_twisted(
    nerve: &Nerve,
    ext: &GroupExtensionData,
    u: &GroupCochain,
) -> Result<(Vec<GroupHom>, GroupCochain)> {
    check_strict_cocycle(nerve, &ext.l, u)?;
    let lp = &ext.l_prime;
    let lambda = nerve
        .simplices(1)
        .iter()
        .map(|e| {
            let s = ext.section[u.at(nerve, e)];
            let map = (0..ext.h.order())
                .map(|x| {
                    ext.pull_back(lp.conjugate(ext.inclusion.apply(x), s))
                        .expect("H is normal")
                })
                .collect();
            GroupHom::new(&ext.h, &ext.h, map)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((lambda, obstruction_values(nerve, ext, u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_data_passes() {
        let n = Nerve::tetrahedron_boundary();
        let s3 = FiniteGroup::symmetric(3);
        let c = GroupCochain::constant(&n, 2, s3.identity());
        assert!(nonabelian_2cocycle_check(&n, &s3, &trivial_band(&n, &s3), &c).unwrap().passed());
    }

    #[test]
    fn abelian_failure_lists_tetrahedra() {
        let n = Nerve::full_simplex(5);
        let z3 = FiniteGroup::cyclic(3);
        let mut values = vec![0; n.count(2)];
        values[0] = 1;
        let c = GroupCochain::new(&n, &z3, 2, values).unwrap();
        let report = nonabelian_2cocycle_check(&n, &z3, &trivial_band(&n, &z3), &c).unwrap();
        // Oracle: the tetrahedra containing the triangle (0,1,2).
        let expected: Vec<Vec<usize>> = n
            .simplices(3)
            .iter()
            .filter(|s| s.starts_with(&[0, 1, 2]))
            .cloned()
            .collect();
        assert_eq!(report.tetrahedron_violations, expected);
        let delta = super::super::coboundary(&n, &c.to_cyclic(&n, 3).unwrap()).unwrap();
        let nonzero: Vec<Vec<usize>> = n
            .simplices(3)
            .iter()
            .zip(delta.values())
            .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
            .map(|(s, _)| s.clone())
            .collect();
        assert_eq!(nonzero, expected);
    }

    #[test]
    fn rp2_z4_obstruction_is_nonzero() {
        let n = Nerve::projective_plane();
        let ext = GroupExtensionData::z2_z4_z2();
        let u = rp2_generator(&n);
        let c = lifting_obstruction(&n, &ext, &u).unwrap();
        assert!(nonabelian_2cocycle_check(&n, &ext.h, &trivial_band(&n, &ext.h), &c).unwrap().passed());
        let abelian = c.to_cyclic(&n, 2).unwrap();
        assert!(!super::super::is_coboundary(&n, &abelian).unwrap());
    }

    /// The nonzero class of H^1(RP^2; Z/2), found by exhaustive search.
    pub(crate) fn rp2_generator(n: &Nerve) -> GroupCochain {
        let z2 = FiniteGroup::cyclic(2);
        let edges = n.count(1);
        for mask in 0u32..(1 << edges) {
            let values: Vec<usize> = (0..edges).map(|e| ((mask >> e) & 1) as usize).collect();
            let u = GroupCochain::new(n, &z2, 1, values).unwrap();
            if check_strict_cocycle(n, &z2, &u).is_ok()
                && !super::super::is_coboundary(n, &u.to_cyclic(n, 2).unwrap()).unwrap()
            {
                return u;
            }
        }
        unreachable!("H^1(RP^2; Z/2) is nonzero")
    }

    #[test]
    fn split_extension_gives_identity() {
        let n = Nerve::projective_plane();
        let ext = GroupExtensionData::split_z2();
        let c = lifting_obstruction(&n, &ext, &rp2_generator(&n)).unwrap();
        assert!(c.values.iter().all(|&v| v == 0));
    }

    #[test]
    fn s3_twisted_obstruction_satisfies_the_law() {
        let n = Nerve::tetrahedron_boundary();
        let ext = GroupExtensionData::z3_s3_z2();
        assert!(!ext.is_central());
        // u = constant generator is not a cocycle; use u = δ of a 0-cochain.
        let phase = [0usize, 1, 1, 0];
        let values: Vec<usize> = n.simplices(1).iter().map(|e| phase[e[0]] ^ phase[e[1]]).collect();
        let u = GroupCochain::new(&n, &ext.l, 1, values).unwrap();
        assert!(matches!(lifting_obstruction(&n, &ext, &u), Err(Error::NotCentral)));
        let (lambda, c) = lifting_obstruction_twisted(&n, &ext, &u).unwrap();
        assert!(nonabelian_2cocycle_check(&n, &ext.h, &lambda, &c).unwrap().passed());
        assert!(lambda.iter().any(|l| *l != GroupHom::identity(&ext.h)));
    }

    #[test]
    fn non_cocycle_rejected() {
        let n = Nerve::tetrahedron_boundary();
        let ext = GroupExtensionData::z2_z4_z2();
        let u = GroupCochain::constant(&n, 1, 1);
        assert!(matches!(lifting_obstruction(&n, &ext, &u), Err(Error::NotCocycle(_))));
    }

    #[test]
    fn induced_cocycles() {
        let n = Nerve::tetrahedron_boundary();
        let s3 = FiniteGroup::symmetric(3);
        let z2 = FiniteGroup::cyclic(2);
        let sign: Vec<usize> = (0..6)
            .map(|g| usize::from(s3.element_order(g) == 2))
            .collect();
        let sign = GroupHom::new(&s3, &z2, sign).unwrap();
        let ext = GroupExtensionData::z3_s3_z2();
        let phase = [0usize, 1, 0, 1];
        let values: Vec<usize> = n.simplices(1).iter().map(|e| phase[e[0]] ^ phase[e[1]]).collect();
        let u = GroupCochain::new(&n, &ext.l, 1, values).unwrap();
        let (_, c) = lifting_obstruction_twisted(&n, &ext, &u).unwrap();
        // Push the Z/3 values into S3, then along the sign.
        let in_s3 = induced_cocycle(&ext.inclusion, &c);
        let image = induced_cocycle(&sign, &in_s3);
        assert!(nonabelian_2cocycle_check(&n, &z2, &trivial_band(&n, &z2), &image).unwrap().passed());
        assert_eq!(induced_cocycle(&GroupHom::identity(&s3), &in_s3), in_s3);
        assert!(induced_cocycle(&GroupHom::trivial(&s3, &z2), &in_s3).values.iter().all(|&v| v == 0));
    }
}
