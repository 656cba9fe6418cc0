//! Compatibility of chart embeddings on finite group data.
//!
//! Charts carry finite groups `Γ_x`; an embedding `Φ_xy : Γ_y → Γ_x` is a
//! homomorphism, and a twist `c_xyz ∈ Γ_x` measures the failure of strict
//! composition: `Φ_xy ∘ Φ_yz = Ad(c_xyz) ∘ Φ_xz`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};

#[derive(Clone, Debug, Default)]
pub struct ChartAtlas {
    charts: Vec<FiniteGroup>,
    homs: BTreeMap<(usize, usize), GroupHom>,
    twists: BTreeMap<(usize, usize, usize), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasViolation {
    pub triple: (usize, usize, usize),
    /// Element of `Γ_z` on which the two sides differ.
    pub gamma: usize,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasReport {
    pub triples_checked: usize,
    pub violations: Vec<AtlasViolation>,
}

impl AtlasReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ChartAtlas {
    pub fn new(charts: Vec<FiniteGroup>) -> Self {
        Self {
            charts,
            ..Self::default()
        }
    }

    pub fn charts(&self) -> &[FiniteGroup] {
        &self.charts
    }

    fn chart(&self, x: usize) -> Result<&FiniteGroup> {
        self.charts
            .get(x)
            .ok_or_else(|| Error::OutOfRange(format!("chart {x} of {}", self.charts.len())))
    }

    /// Stores `Φ_xy : Γ_y → Γ_x` after verifying it is a homomorphism.
    pub fn add_hom(&mut self, x: usize, y: usize, map: Vec<usize>) -> Result<()> {
        let hom = GroupHom::new(self.chart(y)?, self.chart(x)?, map)?;
        self.homs.insert((x, y), hom);
        Ok(())
    }

    /// Stores `c_xyz ∈ Γ_x`.
    pub fn add_twist(&mut self, x: usize, y: usize, z: usize, c: usize) -> Result<()> {
        let order = self.chart(x)?.order();
        if c >= order {
            return Err(Error::OutOfRange(format!("twist element {c} in chart {x} of order {order}")));
        }
        self.chart(y)?;
        self.chart(z)?;
        self.twists.insert((x, y, z), c);
        Ok(())
    }

    pub fn hom(&self, x: usize, y: usize) -> Option<&GroupHom> {
        self.homs.get(&(x, y))
    }

    pub fn twist(&self, x: usize, y: usize, z: usize) -> Option<usize> {
        self.twists.get(&(x, y, z)).copied()
    }

    /// Checks every triple that carries a twist.
    pub fn check(&self) -> Result<AtlasReport> {
        let triples: Vec<_> = self.twists.keys().copied().collect();
        self.check_triples(&triples)
    }

    pub fn check_triples(&self, triples: &[(usize, usize, usize)]) -> Result<AtlasReport> {
        let mut violations = Vec::new();
        for &(x, y, z) in triples {
            let missing = |what: String| Error::MissingData(format!("{what} for triple ({x}, {y}, {z})"));
            let gx = self.chart(x)?;
            let gz = self.chart(z)?;
            let phi_xy = self.hom(x, y).ok_or_else(|| missing(format!("hom ({x}, {y})")))?;
            let phi_yz = self.hom(y, z).ok_or_else(|| missing(format!("hom ({y}, {z})")))?;
            let phi_xz = self.hom(x, z).ok_or_else(|| missing(format!("hom ({x}, {z})")))?;
            let c = self.twist(x, y, z).ok_or_else(|| missing("twist".into()))?;
            for gamma in 0..gz.order() {
                let lhs = phi_xy.apply(phi_yz.apply(gamma));
                let rhs = gx.conjugate(phi_xz.apply(gamma), c);
                if lhs != rhs {
                    violations.push(AtlasViolation {
                        triple: (x, y, z),
                        gamma,
                        lhs,
                        rhs,
                    });
                }
            }
        }
        Ok(AtlasReport {
            triples_checked: triples.len(),
            violations,
        })
    }
}

pub fn atlas_check(atlas: &ChartAtlas) -> Result<AtlasReport> {
    atlas.check()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_atlas() -> (FiniteGroup, ChartAtlas) {
        let s3 = FiniteGroup::symmetric(3);
        (s3.clone(), ChartAtlas::new(vec![s3.clone(), s3.clone(), s3]))
    }

    #[test]
    fn trivial_charts_pass() {
        let mut atlas = ChartAtlas::new(vec![FiniteGroup::trivial(); 3]);
        for (x, y) in [(0, 1), (1, 2), (0, 2)] {
            atlas.add_hom(x, y, vec![0]).unwrap();
        }
        atlas.add_twist(0, 1, 2, 0).unwrap();
        let report = atlas_check(&atlas).unwrap();
        assert!(report.passed());
        assert_eq!(report.triples_checked, 1);
    }

    #[test]
    fn non_central_twist_fails() {
        let (s3, mut atlas) = s3_atlas();
        let id: Vec<usize> = (0..6).collect();
        for (x, y) in [(0, 1), (1, 2), (0, 2)] {
            atlas.add_hom(x, y, id.clone()).unwrap();
        }
        let t = s3.index_of("(0 1)").unwrap();
        atlas.add_twist(0, 1, 2, t).unwrap();
        let report = atlas.check().unwrap();
        // Oracle: violations are exactly the elements not commuting with t.
        let expected: Vec<usize> = (0..6).filter(|&g| s3.mul(g, t) != s3.mul(t, g)).collect();
        let got: Vec<usize> = report.violations.iter().map(|v| v.gamma).collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn conjugations_compose() {
        let (s3, mut atlas) = s3_atlas();
        let a = s3.index_of("(0 1)").unwrap();
        let b = s3.index_of("(0 1 2)").unwrap();
        atlas.add_hom(0, 1, GroupHom::conjugation(&s3, a).map().to_vec()).unwrap();
        atlas.add_hom(1, 2, GroupHom::conjugation(&s3, b).map().to_vec()).unwrap();
        atlas.add_hom(0, 2, (0..6).collect()).unwrap();
        atlas.add_twist(0, 1, 2, s3.mul(a, b)).unwrap();
        assert!(atlas.check().unwrap().passed());
    }

    #[test]
    fn all_inner_pairs_compose() {
        let (s3, _) = s3_atlas();
        for a in 0..6 {
            for b in 0..6 {
                let mut atlas = ChartAtlas::new(vec![s3.clone(); 3]);
                atlas.add_hom(0, 1, GroupHom::conjugation(&s3, a).map().to_vec()).unwrap();
                atlas.add_hom(1, 2, GroupHom::conjugation(&s3, b).map().to_vec()).unwrap();
                atlas.add_hom(0, 2, (0..6).collect()).unwrap();
                atlas.add_twist(0, 1, 2, s3.mul(a, b)).unwrap();
                assert!(atlas.check().unwrap().passed());
            }
        }
    }

    #[test]
    fn missing_and_bad_data() {
        let (_, mut atlas) = s3_atlas();
        atlas.add_twist(0, 1, 2, 0).unwrap();
        assert!(matches!(atlas.check(), Err(Error::MissingData(_))));
        assert!(matches!(atlas.add_hom(0, 1, vec![1; 6]), Err(Error::NotHomomorphism { .. })));
        assert!(atlas.add_twist(0, 1, 2, 6).is_err());
    }
}
