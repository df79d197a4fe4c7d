use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use sftdim::linalg::{
    characteristic_polynomial, hermite_normal_form, integer_kernel, minimal_polynomial, rank,
    smith_normal_form, solve_integer_linear,
};
use sftdim::{IntMatrix, IntPoly};

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols).prop_map(move |v| {
        IntMatrix::from_vec(rows, cols, v.into_iter().map(BigInt::from).collect())
    })
}

fn any_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c, 6))
}

fn square(bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1usize..=4).prop_flat_map(move |k| matrix(k, k, bound))
}

/// Rank over Q by fraction-free elimination, written independently of the library.
fn oracle_rank(m: &IntMatrix) -> usize {
    let mut rows = m.to_rows();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let (a, b) = (rows[r][c].clone(), rows[i][c].clone());
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x = &a * &*x - &b * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Every `k x k` minor gcd: `d_1 ... d_k` equals the gcd of the `k x k` minors.
fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    use num_integer::Integer;
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut g = BigInt::zero();
    for rs in subsets(m.rows(), k) {
        for cs in subsets(m.cols(), k) {
            g = g.gcd(&m.select(&rs, &cs).determinant());
        }
    }
    g
}

fn mat_pow(a: &IntMatrix, e: usize) -> IntMatrix {
    (0..e).fold(IntMatrix::identity(a.rows()), |acc, _| &acc * a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_is_a_unimodular_diagonalization(m in any_matrix()) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.d.clone());
        prop_assert!(snf.u.determinant().abs().is_one());
        prop_assert!(snf.v.determinant().abs().is_one());
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    prop_assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let f = &snf.invariant_factors;
        prop_assert_eq!(f.len(), oracle_rank(&m));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for d in f {
            prop_assert!(d.is_positive());
        }
        // determinantal divisors
        let mut prod = BigInt::one();
        for (k, d) in f.iter().enumerate() {
            prod *= d;
            prop_assert_eq!(minor_gcd(&m, k + 1), prod.clone());
        }
    }

    #[test]
    fn kernel_is_saturated_and_complete(m in any_matrix()) {
        let ker = integer_kernel(&m);
        prop_assert_eq!(ker.len(), m.cols() - oracle_rank(&m));
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        if !ker.is_empty() {
            // saturated iff the basis matrix has all invariant factors 1
            let b = IntMatrix::from_fn(m.cols(), ker.len(), |r, c| ker[c][r].clone());
            let snf = smith_normal_form(&b);
            prop_assert_eq!(snf.rank(), ker.len());
            prop_assert!(snf.invariant_factors.iter().all(|d| d.is_one()));
        }
    }

    #[test]
    fn solve_finds_constructed_solutions(m in any_matrix(), seed in prop::collection::vec(-5i64..=5, 4)) {
        let x0: Vec<BigInt> = seed.into_iter().take(m.cols()).map(BigInt::from).chain(std::iter::repeat(BigInt::zero())).take(m.cols()).collect();
        let b = m.mul_vec(&x0);
        let x = solve_integer_linear(&m, &b).expect("a solution exists by construction");
        prop_assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn solve_none_means_no_small_solution(m in (1usize..=2, 1usize..=2).prop_flat_map(|(r, c)| matrix(r, c, 4)),
                                          b in prop::collection::vec(-6i64..=6, 2)) {
        let b: Vec<BigInt> = b.into_iter().take(m.rows()).map(BigInt::from).collect();
        if solve_integer_linear(&m, &b).is_none() {
            // exhaustive box search; any solution of a 2-variable system with these
            // entries has a representative in this box if one exists at all
            let range = -60i64..=60;
            let found = match m.cols() {
                1 => range.clone().any(|x| m.mul_vec(&[BigInt::from(x)]) == b),
                _ => range.clone().any(|x| range.clone().any(|y| m.mul_vec(&[BigInt::from(x), BigInt::from(y)]) == b)),
            };
            prop_assert!(!found);
        }
    }

    #[test]
    fn hermite_is_row_echelon_and_equivalent(m in any_matrix()) {
        let h = hermite_normal_form(&m);
        prop_assert_eq!(&h.t * &m, h.h.clone());
        prop_assert!(h.t.determinant().abs().is_one());
        prop_assert_eq!(h.rank, rank(&m));
        for (i, &p) in h.pivot_cols.iter().enumerate() {
            prop_assert!(h.h[(i, p)].is_positive());
            for r in 0..i {
                prop_assert!(!h.h[(r, p)].is_negative() && h.h[(r, p)] < h.h[(i, p)]);
            }
            for c in 0..p {
                prop_assert!(h.h[(i, c)].is_zero());
            }
        }
    }

    #[test]
    fn minimal_polynomial_is_minimal(a in square(3)) {
        let mp = minimal_polynomial(&a);
        let chi = characteristic_polynomial(&a);
        prop_assert!(mp.m.is_monic());
        prop_assert!(mp.m.eval_matrix(&a).is_zero());
        prop_assert!(chi.eval_matrix(&a).is_zero());
        prop_assert!(chi.exact_div_monic(&mp.m).is_some());
        prop_assert_eq!(mp.m.clone(), mp.p.shift(mp.l));
        prop_assert!(!mp.p.coeff(0).is_zero());
        prop_assert_eq!(mp.k, mp.p.degree().unwrap());
        // minimality: I, A, ..., A^(d-1) are linearly independent
        let d = mp.m.degree().unwrap();
        let k = a.rows();
        let powers = IntMatrix::from_fn(d, k * k, |r, c| mat_pow(&a, r).entries()[c].clone());
        prop_assert_eq!(oracle_rank(&powers), d);
    }

    #[test]
    fn char_poly_matches_determinant(a in square(4), x in -4i64..=4) {
        let k = a.rows();
        let xi = IntMatrix::identity(k).scale(&BigInt::from(x));
        let chi = characteristic_polynomial(&a);
        prop_assert_eq!(chi.eval(&BigInt::from(x)), (&xi - &a).determinant());
    }

    #[test]
    fn polynomial_division(p in prop::collection::vec(-9i64..=9, 0..7), q in prop::collection::vec(-9i64..=9, 0..4)) {
        let p = IntPoly::from_i64(&p);
        let mut q = q;
        q.push(1);
        let q = IntPoly::from_i64(&q);
        let (quot, rem) = p.div_rem_monic(&q);
        prop_assert_eq!(quot.mul(&q).add(&rem), p);
        prop_assert!(rem.degree().is_none_or(|d| d < q.degree().unwrap()));
    }
}

#[test]
fn spec_smith_examples() {
    let f = |rows: &[Vec<i64>]| smith_normal_form(&IntMatrix::from_rows(rows)).invariant_factors;
    assert_eq!(
        f(&[vec![2, 4], vec![6, 8]]),
        vec![BigInt::from(2), BigInt::from(4)]
    );
    assert_eq!(
        f(&[vec![2, 0], vec![0, 3]]),
        vec![BigInt::from(1), BigInt::from(6)]
    );
    assert!(f(&[vec![0, 0], vec![0, 0]]).is_empty());
}
