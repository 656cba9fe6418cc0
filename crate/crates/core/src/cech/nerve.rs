use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::algebra_core::{combinations, IntMatrix};
use crate::error::{Error, Result};

/// Downward-closed simplicial complex on vertices `0..vertex_count`.
/// Simplices of each degree are strictly increasing tuples in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    vertex_count: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Nerve {
    /// Downward closure of the facets. Every vertex below the largest one
    /// mentioned is included.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<Self> {
        let mut by_degree: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        let mut vertex_count = 0;
        for f in facets {
            if f.is_empty() {
                return Err(Error::InvalidInput("empty facet".into()));
            }
            let mut sorted = f.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("facet {f:?} repeats a vertex")));
            }
            vertex_count = vertex_count.max(sorted[sorted.len() - 1] + 1);
            if by_degree.len() < sorted.len() {
                by_degree.resize(sorted.len(), BTreeSet::new());
            }
            for size in 1..=sorted.len() {
                for pick in combinations(sorted.len(), size) {
                    by_degree[size - 1].insert(pick.iter().map(|&i| sorted[i]).collect());
                }
            }
        }
        if let Some(vertices) = by_degree.first_mut() {
            vertices.extend((0..vertex_count).map(|v| vec![v]));
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_degree.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Ok(Self {
            vertex_count,
            simplices,
            index,
        })
    }

    /// The full simplex on `vertices` vertices.
    pub fn full_simplex(vertices: usize) -> Self {
        Self::from_facets(&[(0..vertices).collect()]).expect("simplex")
    }

    /// Boundary of the simplex on `vertices` vertices.
    pub fn simplex_boundary(vertices: usize) -> Self {
        let facets: Vec<Vec<usize>> = combinations(vertices, vertices - 1);
        Self::from_facets(&facets).expect("boundary")
    }

    pub fn tetrahedron_boundary() -> Self {
        Self::simplex_boundary(4)
    }

    /// Six-vertex minimal triangulation of the real projective plane.
    pub fn projective_plane() -> Self {
        let facets = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ];
        Self::from_facets(&facets.map(|f| f.to_vec())).expect("projective plane")
    }

    /// Seven-vertex minimal triangulation of the torus.
    pub fn torus() -> Self {
        let mut facets = Vec::new();
        for i in 0..7 {
            facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        Self::from_facets(&facets).expect("torus")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top degree, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.index.get(k)?.get(simplex).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.simplices.len())
            .map(|k| if k % 2 == 0 { self.count(k) as i64 } else { -(self.count(k) as i64) })
            .sum()
    }

    /// Matrix of `δ : C^k → C^{k+1}`, shape `count(k+1) × count(k)`.
    pub fn coboundary_matrix(&self, k: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.count(k + 1), self.count(k));
        for (row, s) in self.simplices(k + 1).iter().enumerate() {
            for j in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(p, _)| p != j).map(|(_, &v)| v).collect();
                let col = self.index_of(&face).expect("faces are closed");
                m[(row, col)] = BigInt::from(if j % 2 == 0 { 1 } else { -1 });
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts() {
        let t = Nerve::from_facets(&[vec![0, 1, 2]]).unwrap();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (3, 3, 1));
        let b = Nerve::tetrahedron_boundary();
        assert_eq!((b.count(0), b.count(1), b.count(2), b.count(3)), (4, 6, 4, 0));
        let p = Nerve::projective_plane();
        assert_eq!((p.count(0), p.count(1), p.count(2)), (6, 15, 10));
        assert_eq!(p.euler_characteristic(), 1);
        let t7 = Nerve::torus();
        assert_eq!((t7.count(0), t7.count(1), t7.count(2)), (7, 21, 14));
        assert_eq!(t7.euler_characteristic(), 0);
    }

    #[test]
    fn closed_surfaces_have_two_triangles_per_edge() {
        for n in [Nerve::projective_plane(), Nerve::torus(), Nerve::tetrahedron_boundary()] {
            for e in n.simplices(1) {
                let around = n
                    .simplices(2)
                    .iter()
                    .filter(|t| e.iter().all(|v| t.contains(v)))
                    .count();
                assert_eq!(around, 2, "edge {e:?}");
            }
        }
    }

    #[test]
    fn repeated_vertex_rejected() {
        assert!(Nerve::from_facets(&[vec![0, 1, 1]]).is_err());
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let n = Nerve::full_simplex(5);
        for k in 0..4 {
            let d = n.coboundary_matrix(k + 1).mul(&n.coboundary_matrix(k)).unwrap();
            assert!(d.is_zero());
        }
    }
}
