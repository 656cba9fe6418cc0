//! Smith normal form over the integers.
//!
//! Reduction repeatedly moves the entry of least non-zero absolute value of
//! the trailing submatrix into the pivot position (ties: lowest row, then
//! lowest column), clears its row and column by Euclidean steps, and folds
//! in any row whose entries the pivot does not divide.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal,
/// `d[0] | d[1] | ...`, every diagonal entry non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Non-zero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal_entries()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Recomputes `u * m * v` and checks every structural property.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let Ok(umv) = self.u.mul(m).and_then(|x| x.mul(&self.v)) else {
            return false;
        };
        if umv != self.d || !self.d.is_diagonal() {
            return false;
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        let diag = self.d.diagonal_entries();
        if diag.iter().any(Signed::is_negative) {
            return false;
        }
        diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        })
    }
}

/// Free rank and torsion invariant factors (all `>= 2`) of `Z^rows / im(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = min_pivot(&a, t) else {
                break;
            };
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let out = SmithDecomposition { u, d: a, v };
    assert!(out.verify(m), "Smith normal form verification failed");
    out
}

/// Entry of least non-zero absolute value in the submatrix `[t.., t..]`.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _, _)| x < *b) {
                best = Some((x, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn cokernel_invariants(m: &IntMatrix) -> CokernelInvariants {
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    CokernelInvariants {
        free_rank: m.rows() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(s: &SmithDecomposition) -> Vec<i64> {
        s.d.diagonal_entries()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_two_three() {
        let s = smith_normal_form(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(diag(&s), vec![1, 6]);
    }

    #[test]
    fn identity_is_fixed() {
        let s = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(diag(&s), vec![2, 4]);
        let c = cokernel_invariants(&m);
        assert_eq!(c.free_rank, 0);
        assert_eq!(c.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_invariants(&IntMatrix::zeros(2, 2));
        assert_eq!((c.free_rank, c.torsion.len()), (2, 0));
        let c = cokernel_invariants(&IntMatrix::diagonal(&[-2, -2, -2, -2]));
        assert_eq!(c.free_rank, 0);
        assert_eq!(c.torsion, vec![BigInt::from(2); 4]);
    }

    #[test]
    fn rectangular_and_empty() {
        let m = IntMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        let s = smith_normal_form(&m);
        assert_eq!(diag(&s), vec![1, 3]);
        let e = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&e);
        assert_eq!(s.v, IntMatrix::identity(3));
        let c = cokernel_invariants(&IntMatrix::zeros(3, 0));
        assert_eq!(c.free_rank, 3);
    }

    #[test]
    fn needs_divisibility_fix() {
        // Diagonal, but not in divisibility order.
        let m = IntMatrix::from_i64_rows(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
        let s = smith_normal_form(&m);
        assert_eq!(diag(&s), vec![2, 2, 60]);
    }
}
