//! Smith and Hermite normal forms over the integers, and the lattice
//! operations built on them (kernels, images, integer solvability).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal in Smith form.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `d`, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Number of zero diagonal entries, `min(rows, cols) - rank`.
    pub fn zero_count(&self) -> usize {
        self.d.rows().min(self.d.cols()) - self.rank()
    }
}

fn min_abs_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some(b) if a[b].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
            if x.abs().is_one() {
                return best;
            }
        }
    }
    best
}

/// Smith normal form by elementary row/column operations with minimal-magnitude pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut factors = Vec::new();

    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = min_abs_nonzero(&a, t) {
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &pivot);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility of the remaining block.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_zero() {
            break;
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        factors.push(a[(t, t)].clone());
    }

    SmithDecomposition {
        u,
        d: a,
        v,
        invariant_factors: factors,
    }
}

/// Row-style Hermite normal form: `h = t * m` with `t` unimodular, `h` in echelon
/// form with positive pivots and entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub t: IntMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

pub fn hermite_normal_form(m: &IntMatrix) -> HermiteDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut t = IntMatrix::identity(rows);
    let mut r = 0;
    let mut pivot_cols = Vec::new();

    for j in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[(i, j)].is_zero() {
                continue;
            }
            let (a, b) = (h[(r, j)].clone(), h[(i, j)].clone());
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let c = -(&b / &g);
            let d = &a / &g;
            h.combine_rows(r, i, [&x, &y, &c, &d]);
            t.combine_rows(r, i, [&x, &y, &c, &d]);
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        let p = h[(r, j)].clone();
        for i in 0..r {
            let q = -h[(i, j)].div_floor(&p);
            h.add_row_multiple(i, r, &q);
            t.add_row_multiple(i, r, &q);
        }
        pivot_cols.push(j);
        r += 1;
    }

    HermiteDecomposition {
        h,
        t,
        rank: r,
        pivot_cols,
    }
}

/// Hermite-reduced basis of the lattice spanned by the given vectors.
pub fn lattice_basis(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_vec(vectors.len(), dim, vectors.concat());
    let hnf = hermite_normal_form(&m);
    (0..hnf.rank).map(|i| hnf.h.row(i).to_vec()).collect()
}

/// Saturated basis of `{x in Z^n : m x = 0}` in Hermite-reduced order.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    kernel_from_smith(&snf)
}

pub(crate) fn kernel_from_smith(snf: &SmithDecomposition) -> Vec<Vec<BigInt>> {
    let n = snf.v.cols();
    let raw: Vec<Vec<BigInt>> = (snf.rank()..n).map(|j| snf.v.col(j)).collect();
    lattice_basis(&raw, n)
}

/// Solves `m x = b` over the integers. Returns `None` when no integer solution exists.
///
/// Panics if `b.len() != m.rows()`.
pub fn solve_integer_linear(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    solve_with_smith(&smith_normal_form(m), b)
}

/// Integer solve reusing a precomputed decomposition of the system matrix.
pub fn solve_with_smith(snf: &SmithDecomposition, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let c = snf.u.mul_vec(b);
    let r = snf.rank();
    if c[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); snf.v.cols()];
    for (i, d) in snf.invariant_factors.iter().enumerate() {
        let (q, rem) = c[i].div_rem(d);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(snf.v.mul_vec(&y))
}

/// True iff `m x = b` has a rational solution.
pub fn solvable_over_rationals(snf: &SmithDecomposition, b: &[BigInt]) -> bool {
    let c = snf.u.mul_vec(b);
    c[snf.rank()..].iter().all(Zero::is_zero)
}

pub fn rank(m: &IntMatrix) -> usize {
    hermite_normal_form(m).rank
}
