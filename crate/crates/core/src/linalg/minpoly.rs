use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::poly::IntPoly;
use super::smith::integer_kernel;

/// Minimal polynomial `m_A(x) = x^l p_A(x)` with `p_A` monic and `p_A(0) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPolyData {
    /// Multiplicity of 0 as a root of `m_A`.
    pub l: usize,
    /// Degree of `p_A`.
    pub k: usize,
    pub p: IntPoly,
    pub m: IntPoly,
}

impl MinPolyData {
    /// Coefficient `a_i` of `p_A`, for `i <= k` (`a_k = 1`).
    pub fn a(&self, i: usize) -> BigInt {
        self.p.coeff(i)
    }
}

/// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier recurrence.
/// All divisions are exact over the integers.
pub fn characteristic_polynomial(a: &IntMatrix) -> IntPoly {
    assert!(
        a.is_square(),
        "characteristic polynomial of non-square matrix"
    );
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for step in 1..=n {
        m = a * &m;
        for i in 0..n {
            m[(i, i)] += &coeffs[n - step + 1];
        }
        let t = (a * &m).trace();
        let c = -t / BigInt::from(step);
        coeffs[n - step] = c;
    }
    IntPoly::new(coeffs)
}

/// Minimal polynomial from the first integer linear dependency among `I, A, A^2, ...`.
///
/// The saturated kernel vector of the Krylov system is the coefficient vector of
/// the (primitive, monic) minimal polynomial up to sign.
pub fn minimal_polynomial(a: &IntMatrix) -> MinPolyData {
    assert!(a.is_square(), "minimal polynomial of non-square matrix");
    let n = a.rows();
    let mut powers = vec![IntMatrix::identity(n)];
    let m = loop {
        let d = powers.len();
        let next = &powers[d - 1] * a;
        powers.push(next);
        let krylov = IntMatrix::from_fn(n * n, d + 1, |r, c| powers[c].entries()[r].clone());
        let kernel = integer_kernel(&krylov);
        if let Some(c) = kernel.into_iter().next() {
            let lead = c[d].clone();
            assert!(
                lead.abs().is_one(),
                "minimal polynomial leading coefficient {lead} is not a unit"
            );
            let p = IntPoly::new(c.into_iter().map(|x| x * &lead).collect());
            break p;
        }
        assert!(d <= n, "no dependency among the first n+1 powers");
    };
    let l = m.zero_root_multiplicity();
    let p = IntPoly::new(m.coeffs()[l..].to_vec());
    MinPolyData {
        l,
        k: p.degree().expect("nonzero"),
        p,
        m,
    }
}
