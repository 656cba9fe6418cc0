use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::Nerve;
use crate::algebra_core::{
    format_rational, mod_int, mod_one, smith_normal_form, sort_with_sign, RatMatrix, RatVector,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "modulus", rename_all = "snake_case")]
pub enum AbelianCoefficients {
    Integers,
    Rationals,
    IntegersMod(u64),
    /// `Q/Z`, values kept in `[0, 1)`.
    RationalsModOne,
}

impl fmt::Display for AbelianCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => write!(f, "Z"),
            Self::Rationals => write!(f, "Q"),
            Self::IntegersMod(m) => write!(f, "Z/{m}"),
            Self::RationalsModOne => write!(f, "Q/Z"),
        }
    }
}

impl AbelianCoefficients {
    /// Parses `Z`, `Q`, `Z/m` or `Q/Z`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" => Ok(Self::Integers),
            "Q" => Ok(Self::Rationals),
            "Q/Z" | "U1" => Ok(Self::RationalsModOne),
            other => {
                let m = other
                    .strip_prefix("Z/")
                    .and_then(|m| m.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown coefficients {other:?}")))?;
                Self::modular(m)
            }
        }
    }

    pub fn modular(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!("modulus must be at least 2, got {m}")));
        }
        Ok(Self::IntegersMod(m))
    }

    /// Canonical representative, or an error for a non-integer in an
    /// integral coefficient group.
    pub fn normalize(&self, q: &BigRational) -> Result<BigRational> {
        match self {
            Self::Rationals => Ok(q.clone()),
            Self::RationalsModOne => Ok(mod_one(q)),
            Self::Integers | Self::IntegersMod(_) if !q.is_integer() => Err(Error::InvalidInput(format!(
                "{} is not an integer",
                format_rational(q)
            ))),
            Self::Integers => Ok(q.clone()),
            Self::IntegersMod(m) => Ok(mod_int(q, &BigInt::from(*m))),
        }
    }
}

/// Abelian `k`-cochain, one value per `k`-simplex in nerve order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    coefficients: AbelianCoefficients,
    values: Vec<BigRational>,
}

impl Cochain {
    pub fn new(nerve: &Nerve, degree: usize, coefficients: AbelianCoefficients, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != nerve.count(degree) {
            return Err(Error::MissingData(format!(
                "{} values for {} simplices of degree {degree}",
                values.len(),
                nerve.count(degree)
            )));
        }
        let values = values.iter().map(|v| coefficients.normalize(v)).collect::<Result<_>>()?;
        Ok(Self {
            degree,
            coefficients,
            values,
        })
    }

    pub fn from_integers(nerve: &Nerve, degree: usize, coefficients: AbelianCoefficients, values: &[i64]) -> Result<Self> {
        Self::new(
            nerve,
            degree,
            coefficients,
            values.iter().map(|&v| BigRational::from_integer(v.into())).collect(),
        )
    }

    /// Builds a cochain from values on vertex tuples. Tuples in any order
    /// are accepted; an odd reordering negates the value.
    pub fn from_map(
        nerve: &Nerve,
        degree: usize,
        coefficients: AbelianCoefficients,
        map: &BTreeMap<Vec<usize>, BigRational>,
    ) -> Result<Self> {
        let mut values: Vec<Option<BigRational>> = vec![None; nerve.count(degree)];
        for (tuple, v) in map {
            if tuple.len() != degree + 1 {
                return Err(Error::DimensionMismatch(format!("{tuple:?} is not a {degree}-simplex")));
            }
            let (sorted, sign) =
                sort_with_sign(tuple).ok_or_else(|| Error::InvalidInput(format!("{tuple:?} repeats a vertex")))?;
            let idx = nerve
                .index_of(&sorted)
                .ok_or_else(|| Error::InvalidInput(format!("{tuple:?} is not in the nerve")))?;
            values[idx] = Some(if sign < 0 { -v.clone() } else { v.clone() });
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingData(format!("no value on {:?}", nerve.simplices(degree)[i]))))
            .collect::<Result<_>>()?;
        Self::new(nerve, degree, coefficients, values)
    }

    pub fn zero(nerve: &Nerve, degree: usize, coefficients: AbelianCoefficients) -> Self {
        Self {
            degree,
            coefficients,
            values: vec![BigRational::zero(); nerve.count(degree)],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &AbelianCoefficients {
        &self.coefficients
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Alternating evaluation on an arbitrary vertex ordering.
    pub fn eval(&self, nerve: &Nerve, tuple: &[usize]) -> Result<BigRational> {
        let (sorted, sign) =
            sort_with_sign(tuple).ok_or_else(|| Error::InvalidInput(format!("{tuple:?} repeats a vertex")))?;
        let idx = nerve
            .index_of(&sorted)
            .filter(|_| sorted.len() == self.degree + 1)
            .ok_or_else(|| Error::MissingData(format!("no value on {tuple:?}")))?;
        let v = &self.values[idx];
        self.coefficients.normalize(&if sign < 0 { -v.clone() } else { v.clone() })
    }

    /// Values keyed by their simplex.
    pub fn to_map(&self, nerve: &Nerve) -> BTreeMap<Vec<usize>, BigRational> {
        nerve
            .simplices(self.degree)
            .iter()
            .cloned()
            .zip(self.values.iter().cloned())
            .collect()
    }

    fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.coefficients != other.coefficients || self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch(format!(
                "cochains of degree {} over {} and degree {} over {}",
                self.degree, self.coefficients, other.degree, other.coefficients
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| self.coefficients.normalize(&(a + b)))
            .collect::<Result<_>>()?;
        Ok(Cochain { values, ..self.clone() })
    }

    pub fn neg(&self) -> Cochain {
        let values = self
            .values
            .iter()
            .map(|a| self.coefficients.normalize(&-a).expect("closed under negation"))
            .collect();
        Cochain { values, ..self.clone() }
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    /// Reinterprets the values in other coefficients (reduction mod m, Z ⊂ Q, ...).
    pub fn with_coefficients(&self, coefficients: AbelianCoefficients) -> Result<Cochain> {
        let values = self.values.iter().map(|v| coefficients.normalize(v)).collect::<Result<_>>()?;
        Ok(Cochain {
            degree: self.degree,
            coefficients,
            values,
        })
    }
}

/// `(δc)(i_0..i_{k+1}) = Σ_j (-1)^j c(i_0..î_j..i_{k+1})`
pub fn coboundary(nerve: &Nerve, c: &Cochain) -> Result<Cochain> {
    if c.values.len() != nerve.count(c.degree) {
        return Err(Error::MissingData(format!(
            "cochain has {} values, nerve has {} simplices of degree {}",
            c.values.len(),
            nerve.count(c.degree),
            c.degree
        )));
    }
    let k = c.degree;
    let values = nerve
        .simplices(k + 1)
        .iter()
        .map(|s| {
            let mut total = BigRational::zero();
            for j in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(p, _)| p != j).map(|(_, &v)| v).collect();
                let v = &c.values[nerve.index_of(&face).expect("faces are closed")];
                if j % 2 == 0 {
                    total += v;
                } else {
                    total -= v;
                }
            }
            c.coefficients.normalize(&total)
        })
        .collect::<Result<_>>()?;
    Ok(Cochain {
        degree: k + 1,
        coefficients: c.coefficients.clone(),
        values,
    })
}

/// `c + δb`
pub fn twist_by_coboundary(nerve: &Nerve, c: &Cochain, b: &Cochain) -> Result<Cochain> {
    if b.degree + 1 != c.degree {
        return Err(Error::DimensionMismatch(format!(
            "twisting a {}-cochain by a {}-cochain",
            c.degree, b.degree
        )));
    }
    c.add(&coboundary(nerve, b)?)
}

/// A finitely generated abelian group `R^free ⊕ ⊕ Z/t_i` over the
/// coefficient ring `R` (for `Z/m`, `R^free` means `(Z/m)^free`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub coefficients: AbelianCoefficients,
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigint_vec")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigint_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Dimension over a field: `Q`, or `Z/p` with `p` prime.
    pub fn dimension(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = match &self.coefficients {
            AbelianCoefficients::IntegersMod(m) => format!("Z/{m}"),
            c => c.to_string(),
        };
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(ring),
            r => parts.push(format!("{ring}^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn integral_cohomology(nerve: &Nerve, k: usize) -> (usize, Vec<BigInt>) {
    let c_k = nerve.count(k);
    let rank_k = smith_normal_form(&nerve.coboundary_matrix(k)).rank();
    let (rank_prev, torsion) = if k == 0 {
        (0, Vec::new())
    } else {
        let snf = smith_normal_form(&nerve.coboundary_matrix(k - 1));
        let factors = snf.invariant_factors();
        (factors.len(), factors.into_iter().filter(|d| !d.is_one()).collect())
    };
    (c_k - rank_k - rank_prev, torsion)
}

/// `H^k` of the nerve with constant coefficients. Integer cohomology comes
/// from Smith forms of the coboundary matrices; `Z/m` from the universal
/// coefficient theorem `H^k(Z) ⊗ Z/m ⊕ Tor(H^{k+1}(Z), Z/m)`.
pub fn cohomology(nerve: &Nerve, k: usize, coefficients: &AbelianCoefficients) -> Result<CohomologyGroup> {
    let (free, torsion) = integral_cohomology(nerve, k);
    match coefficients {
        AbelianCoefficients::Integers => Ok(CohomologyGroup {
            coefficients: coefficients.clone(),
            free_rank: free,
            torsion,
        }),
        AbelianCoefficients::Rationals => Ok(CohomologyGroup {
            coefficients: coefficients.clone(),
            free_rank: free,
            torsion: Vec::new(),
        }),
        AbelianCoefficients::IntegersMod(m) => {
            let m = BigInt::from(*m);
            let (_, next_torsion) = integral_cohomology(nerve, k + 1);
            let mut free_rank = free;
            let mut out = Vec::new();
            for t in torsion.iter().chain(&next_torsion) {
                let g = t.gcd(&m);
                if g == m {
                    free_rank += 1;
                } else if !g.is_one() {
                    out.push(g);
                }
            }
            out.sort();
            Ok(CohomologyGroup {
                coefficients: coefficients.clone(),
                free_rank,
                torsion: out,
            })
        }
        AbelianCoefficients::RationalsModOne => Err(Error::UnsupportedCoefficients(
            "cohomology with Q/Z coefficients is not computed; use Z and the universal coefficient theorem".into(),
        )),
    }
}

/// Solves `δb = target` for a `(k-1)`-cochain `b`, if possible.
fn solve_coboundary(nerve: &Nerve, target: &Cochain) -> Result<Option<Cochain>> {
    let k = target.degree;
    if k == 0 {
        return Err(Error::OutOfRange("degree 0 cochains have no coboundaries".into()));
    }
    let coeffs = target.coefficients.clone();
    let d = nerve.coboundary_matrix(k - 1);
    let unknowns = d.cols();
    let y: RatVector = match &coeffs {
        AbelianCoefficients::Rationals => {
            let Some(sol) = solve_rational(&d.to_rat(), &target.values) else {
                return Ok(None);
            };
            sol
        }
        _ => {
            let snf = smith_normal_form(&d);
            let t = snf.u.to_rat().mul_vec(&target.values)?;
            let diag = snf.d.diagonal_entries();
            let mut y = vec![BigRational::zero(); unknowns];
            for (i, ti) in t.iter().enumerate() {
                let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
                let solved = match &coeffs {
                    AbelianCoefficients::Integers => {
                        if di.is_zero() {
                            ti.is_zero().then(BigRational::zero)
                        } else {
                            let q = ti / BigRational::from_integer(di.clone());
                            q.is_integer().then_some(q)
                        }
                    }
                    AbelianCoefficients::IntegersMod(m) => {
                        let m = BigInt::from(*m);
                        let ti = ti.to_integer().mod_floor(&m);
                        let g = di.gcd(&m);
                        if !ti.is_multiple_of(&g) {
                            None
                        } else if di.is_zero() {
                            Some(BigRational::zero())
                        } else {
                            let mg = &m / &g;
                            let inv = mod_inverse(&(&di / &g), &mg);
                            Some(BigRational::from_integer(((&ti / &g) * inv).mod_floor(&mg)))
                        }
                    }
                    AbelianCoefficients::RationalsModOne => {
                        if di.is_zero() {
                            ti.is_integer().then(BigRational::zero)
                        } else {
                            Some(ti / BigRational::from_integer(di.clone()))
                        }
                    }
                    AbelianCoefficients::Rationals => unreachable!(),
                };
                match solved {
                    Some(v) if i < unknowns => y[i] = v,
                    Some(_) => {}
                    None => return Ok(None),
                }
            }
            snf.v.to_rat().mul_vec(&y)?
        }
    };
    let b = Cochain::new(nerve, k - 1, coeffs, y)?;
    assert_eq!(coboundary(nerve, &b)?, *target, "coboundary witness does not solve the system");
    Ok(Some(b))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

fn solve_rational(a: &RatMatrix, b: &[BigRational]) -> Option<RatVector> {
    // Particular solution from the kernel of [A | -b] with last coordinate 1.
    let mut aug = RatMatrix::zeros(a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, a.cols())] = -b[r].clone();
    }
    let kernel = aug.kernel_basis();
    let v = kernel.iter().find(|v| !v[a.cols()].is_zero())?;
    let last = v[a.cols()].clone();
    Some(v[..a.cols()].iter().map(|x| x / &last).collect())
}

/// A witness `b` with `c' = c + δb`, or `None` when the classes differ.
pub fn are_cohomologous(nerve: &Nerve, c: &Cochain, c_prime: &Cochain) -> Result<Option<Cochain>> {
    solve_coboundary(nerve, &c_prime.sub(c)?)
}

pub fn is_coboundary(nerve: &Nerve, c: &Cochain) -> Result<bool> {
    Ok(solve_coboundary(nerve, c)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::rat;

    fn z() -> AbelianCoefficients {
        AbelianCoefficients::Integers
    }

    #[test]
    fn triangle_coboundary_example() {
        let n = Nerve::from_facets(&[vec![0, 1, 2]]).unwrap();
        // edges in order (0,1), (0,2), (1,2)
        let c = Cochain::from_integers(&n, 1, z(), &[1, 2, 1]).unwrap();
        assert!(coboundary(&n, &c).unwrap().is_zero());
        let constant = Cochain::from_integers(&n, 0, z(), &[5, 5, 5]).unwrap();
        assert!(coboundary(&n, &constant).unwrap().is_zero());
    }

    #[test]
    fn alternating_evaluation() {
        let n = Nerve::from_facets(&[vec![0, 1, 2]]).unwrap();
        let c = Cochain::from_integers(&n, 1, z(), &[1, 2, 3]).unwrap();
        assert_eq!(c.eval(&n, &[1, 0]).unwrap(), rat(-1));
        let map = BTreeMap::from([
            (vec![1, 0], rat(-1)),
            (vec![0, 2], rat(2)),
            (vec![2, 1], rat(-3)),
        ]);
        assert_eq!(Cochain::from_map(&n, 1, z(), &map).unwrap(), c);
        let missing = BTreeMap::from([(vec![0, 1], rat(1))]);
        assert!(matches!(Cochain::from_map(&n, 1, z(), &missing), Err(Error::MissingData(_))));
    }

    #[test]
    fn cohomology_examples() {
        let full = Nerve::full_simplex(4);
        for k in 1..4 {
            assert!(cohomology(&full, k, &z()).unwrap().is_zero());
        }
        assert_eq!(cohomology(&full, 0, &z()).unwrap().free_rank, 1);
        let sphere = Nerve::tetrahedron_boundary();
        let h2 = cohomology(&sphere, 2, &z()).unwrap();
        assert_eq!((h2.free_rank, h2.torsion.len()), (1, 0));
        assert!(cohomology(&sphere, 1, &z()).unwrap().is_zero());
        let rp2 = Nerve::projective_plane();
        assert!(cohomology(&rp2, 1, &z()).unwrap().is_zero());
        let h2 = cohomology(&rp2, 2, &z()).unwrap();
        assert_eq!((h2.free_rank, h2.torsion.clone()), (0, vec![BigInt::from(2)]));
        let z2 = AbelianCoefficients::IntegersMod(2);
        for k in 0..3 {
            assert_eq!(cohomology(&rp2, k, &z2).unwrap().dimension(), 1);
        }
        assert_eq!(cohomology(&rp2, 2, &AbelianCoefficients::Rationals).unwrap().dimension(), 0);
        assert_eq!(cohomology(&rp2, 1, &AbelianCoefficients::IntegersMod(3)).unwrap().dimension(), 0);
        let torus = Nerve::torus();
        let ranks: Vec<usize> = (0..3).map(|k| cohomology(&torus, k, &z()).unwrap().free_rank).collect();
        assert_eq!(ranks, vec![1, 2, 1]);
        assert!(matches!(
            cohomology(&rp2, 1, &AbelianCoefficients::RationalsModOne),
            Err(Error::UnsupportedCoefficients(_))
        ));
    }

    #[test]
    fn rp2_mod_four_has_mixed_torsion() {
        // H^1(RP^2; Z/4) = Tor(Z/2, Z/4) = Z/2, H^2 = Z/2 ⊗ Z/4 = Z/2.
        let rp2 = Nerve::projective_plane();
        let z4 = AbelianCoefficients::IntegersMod(4);
        let h1 = cohomology(&rp2, 1, &z4).unwrap();
        assert_eq!((h1.free_rank, h1.torsion.clone()), (0, vec![BigInt::from(2)]));
        assert_eq!(h1.to_string(), "Z/2");
    }

    #[test]
    fn sphere_generator_not_cohomologous_to_zero() {
        let n = Nerve::tetrahedron_boundary();
        let mut values = vec![0; 4];
        values[0] = 1;
        let c = Cochain::from_integers(&n, 2, z(), &values).unwrap();
        let zero = Cochain::zero(&n, 2, z());
        assert!(are_cohomologous(&n, &c, &zero).unwrap().is_none());
        // The generator survives reduction mod 2.
        let c2 = c.with_coefficients(AbelianCoefficients::IntegersMod(2)).unwrap();
        assert!(!is_coboundary(&n, &c2).unwrap());
        // Over Q/Z, 1/2 on one face is not a coboundary, but is after doubling.
        let half = Cochain::new(
            &n,
            2,
            AbelianCoefficients::RationalsModOne,
            vec![BigRational::new(1.into(), 2.into()), rat(0), rat(0), rat(0)],
        )
        .unwrap();
        assert!(!is_coboundary(&n, &half).unwrap());
        assert!(is_coboundary(&n, &half.add(&half).unwrap()).unwrap());
    }

    #[test]
    fn twist_round_trip() {
        let n = Nerve::projective_plane();
        for coeffs in [
            z(),
            AbelianCoefficients::Rationals,
            AbelianCoefficients::IntegersMod(6),
            AbelianCoefficients::RationalsModOne,
        ] {
            let c = Cochain::new(
                &n,
                2,
                coeffs.clone(),
                (0..10).map(|i| BigRational::new((i * 7 % 5).into(), 3.into()) * BigRational::from_integer(3.into())).collect(),
            )
            .unwrap();
            let b = Cochain::new(&n, 1, coeffs.clone(), (0..15).map(|i| rat(i % 4 - 1)).collect()).unwrap();
            assert_eq!(twist_by_coboundary(&n, &c, &Cochain::zero(&n, 1, coeffs.clone())).unwrap(), c);
            let c2 = twist_by_coboundary(&n, &c, &b).unwrap();
            let w = are_cohomologous(&n, &c, &c2).unwrap().expect("witness");
            assert_eq!(twist_by_coboundary(&n, &c, &w).unwrap(), c2);
        }
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!(AbelianCoefficients::parse("Z/5").unwrap(), AbelianCoefficients::IntegersMod(5));
        assert_eq!(AbelianCoefficients::parse("Q/Z").unwrap(), AbelianCoefficients::RationalsModOne);
        assert!(AbelianCoefficients::parse("Z/1").is_err());
        assert!(AbelianCoefficients::parse("R").is_err());
    }
}
