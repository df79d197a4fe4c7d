//! `Hom_{R_A}(K0(S), R_A)` and its identification with `K0(U)`.
//!
//! Every `R_A`-module map is `phi_(z,N)` for a column vector `z` and a level
//! `N`; with `p_A(x) = x^k + a_(k-1) x^(k-1) + ... + a_0`,
//!
//! ```text
//! phi_(z,N)[v,n] = [ sum_i (v A^n P_i(A) z) A^(k-1-i), N+n ],
//! P_0 = 1,  P_i = x P_(i-1) + a_(k-i).
//! ```
//!
//! The pairs `(z,N)` form the inductive limit of `Z^K` under `z -> A^2 z`,
//! which is `K0(U)` read at even levels.
//!
//! The formula is only `R_A`-linear when `p_A(A) z = 0`. That fails for
//! singular `A` (`l > 0`), so evaluation goes through the equivalent
//! representative `(A^(2l) z, N + l)`, for which it always holds.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cylinder::RAElement;
use crate::dimension::{StableElement, UnstableElement};
use crate::linalg::{dot, int_vec, IntPoly};
use crate::Sft;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StableHom {
    #[serde(with = "crate::serde_int::vec")]
    pub z: Vec<BigInt>,
    pub level: usize,
}

impl StableHom {
    pub fn new(z: Vec<BigInt>, level: usize) -> Self {
        StableHom { z, level }
    }

    pub fn from_i64(z: &[i64], level: usize) -> Self {
        StableHom::new(int_vec(z), level)
    }
}

impl Sft {
    /// Evaluates `phi_(z,N)` on a stable class.
    pub fn hom_eval(&self, phi: &StableHom, a: &StableElement) -> RAElement {
        let mp = self.minpoly();
        let (k, l) = (mp.k, mp.l);
        // v A^n A^(2l): the A^(2l) belongs to z but commutes past P_i(A)
        let row = self.power(a.level + 2 * l).left_mul_vec(&a.v);
        let mut coeffs = vec![BigInt::default(); k];
        // y_i = P_i(A) z by Horner: y_0 = z, y_i = A y_(i-1) + a_(k-i) z
        let mut y = phi.z.clone();
        for i in 0..k {
            if i > 0 {
                let ay = self.a().mul_vec(&y);
                let c = mp.a(k - i);
                y = ay.iter().zip(&phi.z).map(|(p, q)| p + &c * q).collect();
            }
            coeffs[k - 1 - i] = dot(&row, &y);
        }
        RAElement {
            poly: IntPoly::new(coeffs),
            level: phi.level + a.level + l,
        }
    }

    /// `phi_(z,N) = phi_(w,M)` (`N <= M`) iff `A^(2(l+M-N)) z = A^(2l) w`.
    pub fn hom_equal(&self, a: &StableHom, b: &StableHom) -> bool {
        let (a, b) = if a.level <= b.level { (a, b) } else { (b, a) };
        let l = self.l();
        self.power(2 * (l + b.level - a.level)).mul_vec(&a.z) == self.power(2 * l).mul_vec(&b.z)
    }

    pub fn hom_add(&self, a: &StableHom, b: &StableHom) -> StableHom {
        let n = a.level.max(b.level);
        let lift = |h: &StableHom| self.power(2 * (n - h.level)).mul_vec(&h.z);
        let z = lift(a).iter().zip(lift(b)).map(|(x, y)| x + y).collect();
        StableHom::new(z, n)
    }

    pub fn hom_neg(&self, a: &StableHom) -> StableHom {
        StableHom::new(a.z.iter().map(|x| -x).collect(), a.level)
    }

    /// `r . phi_(z,N) = phi_(q(A) z, N+M)` for `r = [q(A), M]`.
    pub fn hom_scale(&self, r: &RAElement, phi: &StableHom) -> StableHom {
        StableHom::new(
            r.poly.eval_matrix(self.a()).mul_vec(&phi.z),
            phi.level + r.level,
        )
    }

    /// `(z,N)` in the `A^2` system is `[z, 2N]` in `K0(U)`.
    pub fn hom_to_unstable(&self, phi: &StableHom) -> UnstableElement {
        UnstableElement::new(phi.z.clone(), 2 * phi.level)
    }

    /// `[w,M]` goes to `(w, M/2)` for even `M` and to `(Aw, (M+1)/2)` for odd `M`.
    pub fn unstable_to_hom(&self, b: &UnstableElement) -> StableHom {
        if b.level.is_multiple_of(2) {
            StableHom::new(b.w.clone(), b.level / 2)
        } else {
            StableHom::new(self.a().mul_vec(&b.w), b.level.div_ceil(2))
        }
    }
}
