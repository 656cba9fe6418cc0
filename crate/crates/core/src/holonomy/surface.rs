use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra_core::mod_one;
use crate::cech::{coboundary, AbelianCoefficients, Cochain, Nerve};
use crate::error::{Error, Result};

/// A closed surface: every edge lies on exactly two triangles, which
/// induce opposite orientations on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSurfaceTriangulation {
    nerve: Nerve,
    orientation: Vec<i8>,
}

/// Sign of `edge` in the boundary `[j,l] - [i,l] + [i,j]` of `triangle`.
fn incidence(triangle: &[usize], edge: &[usize]) -> i8 {
    match triangle.iter().position(|v| !edge.contains(v)) {
        Some(p) if p % 2 == 0 => 1,
        Some(_) => -1,
        None => 0,
    }
}

impl OrientedSurfaceTriangulation {
    pub fn new(nerve: Nerve, orientation: Vec<i8>) -> Result<Self> {
        if nerve.count(3) > 0 {
            return Err(Error::NotClosedSurface("complex has 3-simplices".into()));
        }
        if orientation.len() != nerve.count(2) || orientation.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::NotClosedSurface("need one sign ±1 per triangle".into()));
        }
        for e in nerve.simplices(1) {
            let around: Vec<(usize, &Vec<usize>)> = nerve
                .simplices(2)
                .iter()
                .enumerate()
                .filter(|(_, t)| e.iter().all(|v| t.contains(v)))
                .collect();
            if around.len() != 2 {
                return Err(Error::NotClosedSurface(format!(
                    "edge {e:?} lies on {} triangles",
                    around.len()
                )));
            }
            let total: i8 = around.iter().map(|&(i, t)| orientation[i] * incidence(t, e)).sum();
            if total != 0 {
                return Err(Error::NotClosedSurface(format!("orientations agree along edge {e:?}")));
            }
        }
        Ok(Self { nerve, orientation })
    }

    /// Propagates an orientation from the first triangle of each connected
    /// piece; fails on non-orientable or non-closed surfaces.
    pub fn orient(nerve: Nerve) -> Result<Self> {
        let triangles = nerve.simplices(2).to_vec();
        let mut orientation = vec![0i8; triangles.len()];
        for start in 0..triangles.len() {
            if orientation[start] != 0 {
                continue;
            }
            orientation[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                    let e = [triangles[t][a], triangles[t][b]];
                    for (u, other) in triangles.iter().enumerate() {
                        if u == t || !e.iter().all(|v| other.contains(v)) {
                            continue;
                        }
                        let want = -orientation[t] * incidence(&triangles[t], &e) * incidence(other, &e);
                        if orientation[u] == 0 {
                            orientation[u] = want;
                            queue.push_back(u);
                        } else if orientation[u] != want {
                            return Err(Error::NotClosedSurface("surface is not orientable".into()));
                        }
                    }
                }
            }
        }
        Self::new(nerve, orientation)
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    pub fn orientation(&self) -> &[i8] {
        &self.orientation
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyCocycle {
    pub d: Cochain,
    pub input_closed: bool,
    pub closed: bool,
}

fn require_mod_one(c: &Cochain, degree: usize, name: &str) -> Result<()> {
    if c.degree() != degree {
        return Err(Error::DimensionMismatch(format!("{name} must have degree {degree}, got {}", c.degree())));
    }
    if *c.coefficients() != AbelianCoefficients::RationalsModOne {
        return Err(Error::UnsupportedCoefficients(format!(
            "{name} must take values in Q/Z, got {}",
            c.coefficients()
        )));
    }
    Ok(())
}

/// `d(ijl) = -c(ijl) - a(jl) + a(il) - a(ij)` in `Q/Z`, that is `-c - δa`.
pub fn holonomy_cocycle(nerve: &Nerve, c: &Cochain, a: &Cochain) -> Result<HolonomyCocycle> {
    require_mod_one(c, 2, "c")?;
    require_mod_one(a, 1, "a")?;
    let values = nerve
        .simplices(2)
        .iter()
        .map(|t| {
            let (i, j, l) = (t[0], t[1], t[2]);
            Ok(-c.eval(nerve, t)? - a.eval(nerve, &[j, l])? + a.eval(nerve, &[i, l])? - a.eval(nerve, &[i, j])?)
        })
        .collect::<Result<Vec<_>>>()?;
    let d = Cochain::new(nerve, 2, AbelianCoefficients::RationalsModOne, values)?;
    let input_closed = coboundary(nerve, c)?.is_zero();
    let closed = coboundary(nerve, &d)?.is_zero();
    assert!(!input_closed || closed, "holonomy cocycle of a cocycle is not closed");
    Ok(HolonomyCocycle { d, input_closed, closed })
}

/// `Σ_t orientation(t) d(t)` mod 1.
pub fn surface_holonomy(surface: &OrientedSurfaceTriangulation, d: &Cochain) -> Result<BigRational> {
    require_mod_one(d, 2, "d")?;
    if d.values().len() != surface.nerve.count(2) {
        return Err(Error::MissingData("2-cochain does not cover the surface".into()));
    }
    let total = d
        .values()
        .iter()
        .zip(&surface.orientation)
        .fold(BigRational::zero(), |acc, (v, &s)| if s > 0 { acc + v } else { acc - v });
    Ok(mod_one(&total))
}

/// Holonomy of the cocycle built from `(c, a)`.
pub fn surface_holonomy_of(surface: &OrientedSurfaceTriangulation, c: &Cochain, a: &Cochain) -> Result<BigRational> {
    let h = holonomy_cocycle(surface.nerve(), c, a)?;
    surface_holonomy(surface, &h.d)
}
