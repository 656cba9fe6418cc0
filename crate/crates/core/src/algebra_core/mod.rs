//! Exact linear algebra over the rationals and the integers.

mod int_matrix;
mod rat_matrix;
mod scalar;
mod snf;

pub use int_matrix::IntMatrix;
pub use rat_matrix::{RatMatrix, RatVector};
pub use scalar::{
    format_rational, frac, is_integer, lcm_of_denominators, mod_int, mod_one, parse_rational,
    rat, ExactScalar,
};
pub use snf::{cokernel_invariants, smith_normal_form, CokernelInvariants, SmithDecomposition};

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

/// Basis of the right kernel over the rationals.
pub fn kernel_basis(m: &RatMatrix) -> Vec<RatVector> {
    m.kernel_basis()
}

/// Binomial coefficient as `usize`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Position of a strictly increasing tuple in `combinations(n, tuple.len())`.
pub fn combination_rank(n: usize, tuple: &[usize]) -> usize {
    let k = tuple.len();
    let mut rank = 0;
    let mut start = 0;
    for (i, &t) in tuple.iter().enumerate() {
        for v in start..t {
            rank += binomial(n - v - 1, k - i - 1);
        }
        start = t + 1;
    }
    rank
}

/// Sorts `tuple` and returns the sign of the sorting permutation, or `None`
/// when two entries coincide.
pub fn sort_with_sign(tuple: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = tuple.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        for (i, t) in combinations(6, 3).iter().enumerate() {
            assert_eq!(combination_rank(6, t), i);
        }
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }

    fn small_int_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..7, r * c).prop_map(move |v| {
                IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_int_matrix()) {
            let q = m.to_rat();
            let k = q.kernel_basis();
            prop_assert_eq!(q.rank() + k.len(), q.cols());
            for v in &k {
                prop_assert!(q.mul_vec(v).unwrap().iter().all(num_traits::Zero::is_zero));
            }
        }

        #[test]
        fn snf_agrees_with_rational_rank(m in small_int_matrix()) {
            let s = smith_normal_form(&m);
            prop_assert!(s.verify(&m));
            prop_assert_eq!(s.rank(), m.to_rat().rank());
        }
    }
}
