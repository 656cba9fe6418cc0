//! Global quotients `T^n / G` of a torus by an integer-matrix action.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra_core::{
    combinations, format_rational, mod_one, smith_normal_form, IntMatrix, RatMatrix, RatVector,
    SmithDecomposition,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub type ComplexMatrix = DMatrix<Complex64>;

/// Entry tolerance for the complex representation checks.
pub const REPRESENTATION_TOLERANCE: f64 = 1e-9;
/// Default tolerance when snapping eigenvalue angles to roots of unity.
pub const DEFAULT_EIGENVALUE_TOLERANCE: f64 = 1e-6;
/// Fixed loci with more components than this are counted but not enumerated.
pub const MAX_ENUMERATED_COMPONENTS: usize = 1 << 16;

/// Which subgroup acts on the fixed locus of `g` when forming its sector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorSymmetry {
    /// Normalizer of the cyclic subgroup generated by `g`.
    #[default]
    Normalizer,
    /// Centralizer of `g`.
    Centralizer,
}

#[derive(Clone, Debug)]
pub struct ToralAction {
    group: FiniteGroup,
    n: usize,
    rho_z: Vec<IntMatrix>,
    rho_c: Option<Vec<ComplexMatrix>>,
}

fn max_entry_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

impl ToralAction {
    /// `rho_z[g]` and `rho_c[g]` are indexed by group element.
    pub fn new(group: FiniteGroup, n: usize, rho_z: Vec<IntMatrix>, rho_c: Option<Vec<ComplexMatrix>>) -> Result<Self> {
        let order = group.order();
        if rho_z.len() != order {
            return Err(Error::MissingData(format!(
                "integer action given on {} of {order} elements",
                rho_z.len()
            )));
        }
        for (g, m) in rho_z.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "integer matrix of {} is {}x{}, expected {n}x{n}",
                    group.label(g),
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_unimodular() {
                return Err(Error::InvalidInput(format!(
                    "integer matrix of {} is not invertible over Z",
                    group.label(g)
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                if rho_z[a].mul(&rho_z[b])? != rho_z[group.mul(a, b)] {
                    return Err(Error::NotHomomorphism { a, b });
                }
            }
        }
        if let Some(rc) = &rho_c {
            if n % 2 != 0 {
                return Err(Error::DimensionMismatch(format!(
                    "a complex structure needs even real dimension, got {n}"
                )));
            }
            let m = n / 2;
            if rc.len() != order {
                return Err(Error::MissingData(format!(
                    "complex representation given on {} of {order} elements",
                    rc.len()
                )));
            }
            for (g, mat) in rc.iter().enumerate() {
                if mat.nrows() != m || mat.ncols() != m {
                    return Err(Error::DimensionMismatch(format!(
                        "complex matrix of {} is {}x{}, expected {m}x{m}",
                        group.label(g),
                        mat.nrows(),
                        mat.ncols()
                    )));
                }
                if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "complex matrix of {} has non-finite entries",
                        group.label(g)
                    )));
                }
            }
            for a in 0..order {
                for b in 0..order {
                    let prod = &rc[a] * &rc[b];
                    if max_entry_distance(&prod, &rc[group.mul(a, b)]) > REPRESENTATION_TOLERANCE {
                        return Err(Error::NotHomomorphism { a, b });
                    }
                }
            }
            for (g, mat) in rc.iter().enumerate() {
                let power = (0..group.element_order(g)).fold(ComplexMatrix::identity(m, m), |acc, _| acc * mat);
                if max_entry_distance(&power, &ComplexMatrix::identity(m, m)) > REPRESENTATION_TOLERANCE {
                    return Err(Error::InvalidInput(format!(
                        "complex matrix of {} does not have finite order {}",
                        group.label(g),
                        group.element_order(g)
                    )));
                }
                // The integer action must be the realification of the complex one.
                let real_trace = rho_z[g].diagonal_entries().iter().sum::<BigInt>().to_f64().unwrap_or(f64::NAN);
                let complex_trace = 2.0 * mat.trace().re;
                if (real_trace - complex_trace).abs() > 1e-6 {
                    return Err(Error::InvalidInput(format!(
                        "integer and complex actions of {} have inconsistent traces ({real_trace} vs {complex_trace})",
                        group.label(g)
                    )));
                }
            }
        }
        Ok(Self { group, n, rho_z, rho_c })
    }

    /// The trivial group acting on `T^n`.
    pub fn trivial(n: usize) -> Self {
        let rho_c = (n % 2 == 0).then(|| vec![ComplexMatrix::identity(n / 2, n / 2)]);
        Self::new(FiniteGroup::trivial(), n, vec![IntMatrix::identity(n)], rho_c).expect("trivial action")
    }

    /// `Z/2` acting by `-I` on `T^n`, with `-I` on `C^{n/2}` when `n` is even.
    pub fn minus_identity(n: usize) -> Self {
        let rho_z = vec![IntMatrix::identity(n), IntMatrix::identity(n).neg()];
        let m = n / 2;
        let rho_c = (n % 2 == 0).then(|| {
            vec![
                ComplexMatrix::identity(m, m),
                -ComplexMatrix::identity(m, m),
            ]
        });
        Self::new(FiniteGroup::cyclic(2), n, rho_z, rho_c).expect("minus identity action")
    }

    /// `Z/3` acting on the hexagonal torus `T^2` by rotation through `2π/3`.
    pub fn hexagonal_rotation() -> Self {
        let r = IntMatrix::from_i64_rows(&[&[0, -1], &[1, -1]]);
        let r2 = r.mul(&r).expect("square");
        let w = Complex64::from_polar(1.0, TAU / 3.0);
        let rho_c = vec![
            ComplexMatrix::identity(1, 1),
            ComplexMatrix::from_element(1, 1, w),
            ComplexMatrix::from_element(1, 1, w * w),
        ];
        Self::new(FiniteGroup::cyclic(3), 2, vec![IntMatrix::identity(2), r, r2], Some(rho_c))
            .expect("hexagonal action")
    }

    /// The finite matrix group generated by `generators` (acting faithfully).
    /// Elements are labelled by shortest words in `names`, identity `e`.
    pub fn from_generators(n: usize, names: &[&str], generators: Vec<IntMatrix>, max_order: usize) -> Result<Self> {
        if names.len() != generators.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} names for {} generators",
                names.len(),
                generators.len()
            )));
        }
        let mut elements = vec![IntMatrix::identity(n)];
        let mut labels = vec!["e".to_string()];
        let mut index: HashMap<IntMatrix, usize> = HashMap::from([(IntMatrix::identity(n), 0)]);
        let mut next = 0;
        while next < elements.len() {
            for (name, g) in names.iter().zip(&generators) {
                let m = elements[next].mul(g)?;
                if !index.contains_key(&m) {
                    if elements.len() == max_order {
                        return Err(Error::GroupTooLarge {
                            order: max_order + 1,
                            bound: max_order,
                        });
                    }
                    let label = if next == 0 { name.to_string() } else { format!("{}{name}", labels[next]) };
                    index.insert(m.clone(), elements.len());
                    elements.push(m);
                    labels.push(label);
                }
            }
            next += 1;
        }
        let mul = elements
            .iter()
            .map(|a| elements.iter().map(|b| Ok(index[&a.mul(b)?])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let group = FiniteGroup::from_table(mul, Some(labels))?;
        Self::new(group, n, elements, None)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn complex_dim(&self) -> Option<usize> {
        self.rho_c.as_ref().map(|_| self.n / 2)
    }

    pub fn rho_z(&self, g: usize) -> &IntMatrix {
        &self.rho_z[g]
    }

    pub fn rho_c(&self, g: usize) -> Option<&ComplexMatrix> {
        self.rho_c.as_ref().map(|rc| &rc[g])
    }

    fn check_element(&self, g: usize) -> Result<()> {
        if g >= self.group.order() {
            return Err(Error::OutOfRange(format!(
                "element {g} in a group of order {}",
                self.group.order()
            )));
        }
        Ok(())
    }

    pub fn degree_shift(&self, g: usize, tolerance: f64) -> Result<DegreeShift> {
        self.check_element(g)?;
        let mat = self
            .rho_c(g)
            .ok_or_else(|| Error::MissingData("complex representation".into()))?;
        let order = self.group.element_order(g);
        let eigenvalues = if mat.nrows() == 0 {
            Vec::new()
        } else {
            mat.clone()
                .schur()
                .eigenvalues()
                .ok_or_else(|| Error::InvalidInput("complex eigenvalues unavailable".into()))?
                .iter()
                .copied()
                .collect()
        };
        let mut angles = Vec::with_capacity(eigenvalues.len());
        for lambda in &eigenvalues {
            let theta = lambda.arg().rem_euclid(TAU);
            let steps = theta * order as f64 / TAU;
            let nearest = steps.round();
            let error = (theta - nearest * TAU / order as f64).abs();
            if error > tolerance {
                return Err(Error::EigenvalueNotRootOfUnity {
                    angle: theta,
                    order,
                    tolerance,
                });
            }
            let k = (nearest as i64).rem_euclid(order as i64);
            angles.push(BigRational::new(k.into(), (order as i64).into()));
        }
        angles.sort();
        let shift: BigRational = angles.iter().sum();
        let det = if mat.nrows() == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            mat.clone().determinant()
        };
        let det_value = det.arg() / TAU;
        let gap = shift.to_f64().unwrap_or(f64::NAN) - det_value;
        let slack = tolerance * (angles.len().max(1) as f64) + 1e-12;
        if (gap - gap.round()).abs() > slack {
            return Err(Error::InvalidInput(format!(
                "eigenvalue shift {} disagrees with the determinant value {det_value} modulo 1",
                format_rational(&shift)
            )));
        }
        Ok(DegreeShift {
            shift,
            angles,
            det_value,
        })
    }

    pub fn fixed_locus(&self, g: usize) -> Result<FixedLocus> {
        self.check_element(g)?;
        Ok(FixedLocus::new(&self.rho_z[g]))
    }

    /// Elements acting on the fixed locus of `g` for its sector.
    pub fn sector_group(&self, g: usize, symmetry: SectorSymmetry) -> Result<Vec<usize>> {
        self.check_element(g)?;
        match symmetry {
            SectorSymmetry::Centralizer => Ok(self.group.centralizer(g)),
            SectorSymmetry::Normalizer => self.group.normalizer(&self.group.generated_subgroup(&[g])),
        }
    }

    /// Betti numbers of the quotient of the fixed locus of `g` by the
    /// sector group, by averaging characters over the group.
    pub fn sector_betti(&self, g: usize, symmetry: SectorSymmetry) -> Result<Vec<usize>> {
        let locus = self.fixed_locus(g)?;
        let symmetries = self.sector_group(g, symmetry)?;
        if locus.components > MAX_ENUMERATED_COMPONENTS {
            return Err(Error::OutOfRange(format!(
                "{} fixed components exceed the enumeration bound {MAX_ENUMERATED_COMPONENTS}",
                locus.components
            )));
        }
        let f = locus.fixed_dim;
        let basis = RatMatrix::from_columns(self.n, &locus.tangent_basis);
        let gram_inv = basis
            .transpose()
            .mul(&basis)?
            .inverse()
            .expect("tangent basis has full column rank");
        let projector = gram_inv.mul(&basis.transpose())?;

        let mut totals = vec![BigRational::zero(); f + 1];
        for &c in &symmetries {
            let rho = self.rho_z[c].to_rat();
            let image = rho.mul(&basis)?;
            let restricted = projector.mul(&image)?;
            assert_eq!(basis.mul(&restricted)?, image, "fixed subspace is not preserved");
            let moved = locus
                .component_reps
                .iter()
                .enumerate()
                .filter(|(k, rep)| {
                    let target = mod_one_vec(&rho.mul_vec(rep).expect("shape"));
                    locus.component_of(&target) == *k
                })
                .count();
            let permtrace = BigRational::from_integer(moved.into());
            for (p, total) in totals.iter_mut().enumerate() {
                *total += &permtrace * exterior_trace(&restricted, p);
            }
        }
        let size = BigRational::from_integer(symmetries.len().into());
        totals
            .into_iter()
            .enumerate()
            .map(|(p, t)| {
                let avg = t / &size;
                if !avg.is_integer() || avg.is_negative() {
                    return Err(Error::NonIntegralAverage(format!(
                        "degree {p} of the sector of {} averages to {}",
                        self.group.label(g),
                        format_rational(&avg)
                    )));
                }
                Ok(avg.to_integer().to_usize().expect("small Betti number"))
            })
            .collect()
    }

    pub fn sector(&self, g: usize, tolerance: f64, symmetry: SectorSymmetry) -> Result<SectorReport> {
        let locus = self.fixed_locus(g)?;
        Ok(SectorReport {
            class_rep: g,
            class_label: self.group.label(g).to_string(),
            fixed_dim: locus.fixed_dim,
            components: locus.components,
            shift: self.degree_shift(g, tolerance)?.shift,
            betti: self.sector_betti(g, symmetry)?,
        })
    }

    /// One sector per conjugacy class, each shifted up by twice its degree
    /// shift, summed per total degree.
    pub fn cr_cohomology(&self, tolerance: f64, symmetry: SectorSymmetry) -> Result<CrCohomology> {
        let sectors: Vec<SectorReport> = self
            .group
            .conjugacy_classes()
            .iter()
            .map(|class| self.sector(class[0], tolerance, symmetry))
            .collect::<Result<_>>()?;
        let mut degrees: BTreeMap<BigRational, usize> = BTreeMap::new();
        for s in &sectors {
            let offset = &s.shift * BigRational::from_integer(2.into());
            for (p, &b) in s.betti.iter().enumerate() {
                if b > 0 {
                    *degrees
                        .entry(BigRational::from_integer(p.into()) + &offset)
                        .or_default() += b;
                }
            }
        }
        Ok(CrCohomology { sectors, degrees })
    }
}

fn mod_one_vec(v: &[BigRational]) -> RatVector {
    v.iter().map(mod_one).collect()
}

/// Trace of `Λ^p a`: the sum of the principal `p x p` minors.
fn exterior_trace(a: &RatMatrix, p: usize) -> BigRational {
    let f = a.rows();
    if p == 0 {
        return BigRational::one();
    }
    combinations(f, p)
        .iter()
        .map(|idx| {
            let rows = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| a[(i, j)].clone()).collect())
                .collect();
            RatMatrix::from_rows(rows)
                .and_then(|m| m.determinant())
                .expect("square minor")
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeShift {
    #[serde(serialize_with = "crate::io::ser_rat")]
    pub shift: BigRational,
    /// Snapped eigenvalue angles as fractions of a full turn, sorted.
    #[serde(serialize_with = "crate::io::ser_rat_vec")]
    pub angles: Vec<BigRational>,
    /// `arg(det) / 2π` with the principal branch.
    pub det_value: f64,
}

impl DegreeShift {
    /// Eigenvalues different from 1.
    pub fn non_unit_eigenvalues(&self) -> usize {
        self.angles.iter().filter(|a| !a.is_zero()).count()
    }
}

/// Fixed set of `x ↦ ρ x` on `R^n / Z^n`: solutions of `(ρ - I) x ∈ Z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedLocus {
    pub fixed_dim: usize,
    pub components: usize,
    pub torsion: Vec<BigInt>,
    /// One point of each component, coordinates in `[0, 1)`.
    pub component_reps: Vec<RatVector>,
    /// Rational basis of the tangent space of each component.
    pub tangent_basis: Vec<RatVector>,
    snf: SmithDecomposition,
    v_inverse: IntMatrix,
}

impl FixedLocus {
    pub fn new(rho: &IntMatrix) -> Self {
        let n = rho.rows();
        let m = rho.sub(&IntMatrix::identity(n)).expect("square");
        let snf = smith_normal_form(&m);
        let factors = snf.invariant_factors();
        let fixed_dim = n - factors.len();
        let torsion: Vec<BigInt> = factors.iter().filter(|d| !d.is_one()).cloned().collect();
        let components = torsion
            .iter()
            .try_fold(1usize, |acc, d| d.to_usize().and_then(|d| acc.checked_mul(d)))
            .unwrap_or(usize::MAX);
        let v_inverse = snf
            .v
            .to_rat()
            .inverse()
            .and_then(|m| m.to_int_matrix())
            .expect("unimodular");
        let mut locus = Self {
            fixed_dim,
            components,
            torsion,
            component_reps: Vec::new(),
            tangent_basis: m.to_rat().kernel_basis(),
            snf,
            v_inverse,
        };
        if components <= MAX_ENUMERATED_COMPONENTS {
            locus.component_reps = (0..components).map(|k| locus.representative(k)).collect();
        }
        locus
    }

    /// Indices `i` with `d_i >= 2`, in diagonal order.
    fn torsion_positions(&self) -> Vec<(usize, BigInt)> {
        self.snf
            .d
            .diagonal_entries()
            .into_iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero() && !d.is_one())
            .collect()
    }

    fn representative(&self, mut index: usize) -> RatVector {
        let n = self.snf.v.rows();
        let mut y = vec![BigRational::zero(); n];
        for (i, d) in self.torsion_positions().into_iter().rev() {
            let du = d.to_usize().expect("small factor");
            y[i] = BigRational::new((index % du).into(), d);
            index /= du;
        }
        mod_one_vec(&self.snf.v.to_rat().mul_vec(&y).expect("shape"))
    }

    /// Index of the component containing a fixed point. The last torsion
    /// coordinate varies fastest, matching `component_reps`.
    pub fn component_of(&self, point: &[BigRational]) -> usize {
        let y = self.v_inverse.to_rat().mul_vec(point).expect("shape");
        let mut index = 0usize;
        for (i, d) in self.torsion_positions() {
            let scaled = &y[i] * BigRational::from_integer(d.clone());
            assert!(scaled.is_integer(), "point is not fixed");
            let k = scaled.to_integer().mod_floor(&d);
            index = index * d.to_usize().expect("small factor") + k.to_usize().expect("residue");
        }
        index
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorReport {
    pub class_rep: usize,
    pub class_label: String,
    pub fixed_dim: usize,
    pub components: usize,
    #[serde(serialize_with = "crate::io::ser_rat")]
    pub shift: BigRational,
    pub betti: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrCohomology {
    pub sectors: Vec<SectorReport>,
    /// Total degree to dimension, nonzero entries only.
    pub degrees: BTreeMap<BigRational, usize>,
}

impl CrCohomology {
    /// Degrees rendered as exact strings, in increasing order.
    pub fn table(&self) -> Vec<(String, usize)> {
        self.degrees
            .iter()
            .map(|(d, &b)| (format_rational(d), b))
            .collect()
    }

    pub fn total_dimension(&self) -> usize {
        self.degrees.values().sum()
    }
}
