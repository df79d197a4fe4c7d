//! The three dimension groups of a shift of finite type as inductive limits:
//!
//! * stable `K0(S)`: row vectors under `v -> vA`,
//! * unstable `K0(U)`: column vectors under `w -> Aw`,
//! * homoclinic `K0(H)`: `K x K` matrices under `X -> AXA`.
//!
//! An element `[payload, N]` is the class of `payload` placed in the `N`th
//! group of the system. Equality is decided by a single comparison at the
//! stabilization exponent `l`: for `j >= 0`, `A^(l+j) x = A^(l+j) y` iff
//! `A^l x = A^l y`, because `l` is the multiplicity of 0 in the minimal
//! polynomial.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{int_vec, solve_integer_linear, to_f64, IntMatrix};
use crate::Sft;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "flavor", rename = "s")]
pub struct StableElement {
    #[serde(rename = "payload", with = "crate::serde_int::vec")]
    pub v: Vec<BigInt>,
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "flavor", rename = "u")]
pub struct UnstableElement {
    #[serde(rename = "payload", with = "crate::serde_int::vec")]
    pub w: Vec<BigInt>,
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "flavor", rename = "h")]
pub struct HomoclinicElement {
    #[serde(rename = "payload")]
    pub x: IntMatrix,
    pub level: usize,
}

impl StableElement {
    pub fn new(v: Vec<BigInt>, level: usize) -> Self {
        StableElement { v, level }
    }

    pub fn from_i64(v: &[i64], level: usize) -> Self {
        StableElement::new(int_vec(v), level)
    }
}

impl UnstableElement {
    pub fn new(w: Vec<BigInt>, level: usize) -> Self {
        UnstableElement { w, level }
    }

    pub fn from_i64(w: &[i64], level: usize) -> Self {
        UnstableElement::new(int_vec(w), level)
    }
}

impl HomoclinicElement {
    pub fn new(x: IntMatrix, level: usize) -> Self {
        HomoclinicElement { x, level }
    }
}

/// Outcome of the positivity decision for a stable class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Positivity {
    Positive,
    Zero,
    NegativeOrMixed,
    /// Neither sign was settled after `bound` iterations.
    Undecided {
        bound: usize,
    },
}

/// Hard cap on iterations once the Perron pairing has settled the sign.
const POSITIVE_ITERATION_CAP: usize = 100_000;

fn vec_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl Sft {
    fn check_len(&self, len: usize) {
        assert_eq!(
            len,
            self.size(),
            "vector length does not match the ambient matrix"
        );
    }

    /// Representative of `a` at a level `target >= a.level`.
    pub fn lift_s(&self, a: &StableElement, target: usize) -> Vec<BigInt> {
        assert!(target >= a.level);
        self.power(target - a.level).left_mul_vec(&a.v)
    }

    pub fn lift_u(&self, b: &UnstableElement, target: usize) -> Vec<BigInt> {
        assert!(target >= b.level);
        self.power(target - b.level).mul_vec(&b.w)
    }

    pub fn lift_h(&self, x: &HomoclinicElement, target: usize) -> IntMatrix {
        assert!(target >= x.level);
        let p = self.power(target - x.level);
        &(&p * &x.x) * &p
    }

    pub fn zero_s(&self) -> StableElement {
        StableElement::new(vec![BigInt::zero(); self.size()], 0)
    }

    pub fn zero_u(&self) -> UnstableElement {
        UnstableElement::new(vec![BigInt::zero(); self.size()], 0)
    }

    pub fn zero_h(&self) -> HomoclinicElement {
        HomoclinicElement::new(IntMatrix::zeros(self.size(), self.size()), 0)
    }

    /// `(v,n) ~ (w,m)`, `n <= m`, iff `v A^(l+m-n) = w A^l`.
    pub fn equal_s(&self, a: &StableElement, b: &StableElement) -> bool {
        self.check_len(a.v.len());
        self.check_len(b.v.len());
        let (a, b) = if a.level <= b.level { (a, b) } else { (b, a) };
        let l = self.l();
        self.power(l + b.level - a.level).left_mul_vec(&a.v) == self.power(l).left_mul_vec(&b.v)
    }

    pub fn equal_u(&self, a: &UnstableElement, b: &UnstableElement) -> bool {
        self.check_len(a.w.len());
        self.check_len(b.w.len());
        let (a, b) = if a.level <= b.level { (a, b) } else { (b, a) };
        let l = self.l();
        self.power(l + b.level - a.level).mul_vec(&a.w) == self.power(l).mul_vec(&b.w)
    }

    /// `(X,n) ~ (Y,k)`, `n <= k`, iff `A^(k-n+l) X A^(k-n+l) = A^l Y A^l`.
    pub fn equal_h(&self, a: &HomoclinicElement, b: &HomoclinicElement) -> bool {
        let (a, b) = if a.level <= b.level { (a, b) } else { (b, a) };
        let l = self.l();
        let p = self.power(l + b.level - a.level);
        let q = self.power(l);
        &(&p * &a.x) * &p == &(&q * &b.x) * &q
    }

    pub fn add_s(&self, a: &StableElement, b: &StableElement) -> StableElement {
        let n = a.level.max(b.level);
        StableElement::new(vec_add(&self.lift_s(a, n), &self.lift_s(b, n)), n)
    }

    pub fn neg_s(&self, a: &StableElement) -> StableElement {
        StableElement::new(a.v.iter().map(|x| -x).collect(), a.level)
    }

    pub fn add_u(&self, a: &UnstableElement, b: &UnstableElement) -> UnstableElement {
        let n = a.level.max(b.level);
        UnstableElement::new(vec_add(&self.lift_u(a, n), &self.lift_u(b, n)), n)
    }

    pub fn neg_u(&self, a: &UnstableElement) -> UnstableElement {
        UnstableElement::new(a.w.iter().map(|x| -x).collect(), a.level)
    }

    pub fn add_h(&self, a: &HomoclinicElement, b: &HomoclinicElement) -> HomoclinicElement {
        let n = a.level.max(b.level);
        HomoclinicElement::new(&self.lift_h(a, n) + &self.lift_h(b, n), n)
    }

    pub fn neg_h(&self, a: &HomoclinicElement) -> HomoclinicElement {
        HomoclinicElement::new(-&a.x, a.level)
    }

    /// `[v,N] -> [vA,N]`
    pub fn alpha_s(&self, a: &StableElement) -> StableElement {
        StableElement::new(self.a().left_mul_vec(&a.v), a.level)
    }

    /// `[v,N] -> [v,N+1]`
    pub fn alpha_s_inv(&self, a: &StableElement) -> StableElement {
        StableElement::new(a.v.clone(), a.level + 1)
    }

    /// Dual convention: `[w,N] -> [w,N+1]`, so that on `[N]` this is division by `N`.
    pub fn alpha_u(&self, b: &UnstableElement) -> UnstableElement {
        UnstableElement::new(b.w.clone(), b.level + 1)
    }

    /// `[w,N] -> [Aw,N]`
    pub fn alpha_u_inv(&self, b: &UnstableElement) -> UnstableElement {
        UnstableElement::new(self.a().mul_vec(&b.w), b.level)
    }

    /// `[X,N] -> [XA^2,N+1]`
    pub fn alpha_h(&self, x: &HomoclinicElement) -> HomoclinicElement {
        HomoclinicElement::new(&x.x * &self.power(2), x.level + 1)
    }

    /// `[X,N] -> [A^2X,N+1]`
    pub fn alpha_h_inv(&self, x: &HomoclinicElement) -> HomoclinicElement {
        HomoclinicElement::new(&self.power(2) * &x.x, x.level + 1)
    }

    /// Display aid: pushes to level `N+l`, then walks the level down while an
    /// exact integer preimage under `v -> vA` exists. Not a canonical form.
    pub fn normalize_s(&self, a: &StableElement) -> StableElement {
        let l = self.l();
        let mut v = self.power(l).left_mul_vec(&a.v);
        let mut level = a.level + l;
        let at = self.a().transpose();
        while level > 0 {
            match solve_integer_linear(&at, &v) {
                Some(u) => {
                    v = u;
                    level -= 1;
                }
                None => break,
            }
        }
        StableElement::new(v, level)
    }

    pub fn normalize_u(&self, b: &UnstableElement) -> UnstableElement {
        let l = self.l();
        let mut w = self.power(l).mul_vec(&b.w);
        let mut level = b.level + l;
        while level > 0 {
            match solve_integer_linear(self.a(), &w) {
                Some(u) => {
                    w = u;
                    level -= 1;
                }
                None => break,
            }
        }
        UnstableElement::new(w, level)
    }

    pub fn normalize_h(&self, x: &HomoclinicElement) -> HomoclinicElement {
        let l = self.l();
        let mut m = self.lift_h(x, x.level + l);
        let mut level = x.level + l;
        // X -> AXA is linear in vec(X) with matrix A (x) A^T in row-major order.
        let k = self.size();
        let a = self.a();
        let op = IntMatrix::from_fn(k * k, k * k, |r, c| {
            let (i, j) = (r / k, r % k);
            let (s, t) = (c / k, c % k);
            &a[(i, s)] * &a[(t, j)]
        });
        while level > 0 {
            match solve_integer_linear(&op, &m.vectorize()) {
                Some(y) => {
                    m = IntMatrix::unvectorize(k, &y);
                    level -= 1;
                }
                None => break,
            }
        }
        HomoclinicElement::new(m, level)
    }

    /// Decides membership of a stable class in the positive cone (primitive `A` only).
    ///
    /// The sign of `v . u_r` settles the question except in a band of width
    /// `positivity_tol` (relative to `|v| . u_r`); inside the band the
    /// representatives `vA^j`, `j <= j_max`, are inspected directly.
    pub fn is_positive_s(&self, a: &StableElement) -> Result<Positivity> {
        let perron = self.perron()?;
        self.check_len(a.v.len());
        if self.equal_s(a, &self.zero_s()) {
            return Ok(Positivity::Zero);
        }
        let pairing: f64 =
            a.v.iter()
                .zip(&perron.u_r)
                .map(|(x, u)| to_f64(x) * u)
                .sum();
        let scale: f64 =
            a.v.iter()
                .zip(&perron.u_r)
                .map(|(x, u)| to_f64(x).abs() * u)
                .sum();
        let band = self.config().positivity_tol * scale.max(1.0);
        if pairing < -band {
            return Ok(Positivity::NegativeOrMixed);
        }
        let cap = if pairing > band {
            POSITIVE_ITERATION_CAP
        } else {
            self.config().j_max
        };
        let mut v = a.v.clone();
        for _ in 0..=cap {
            if v.iter().all(|x| !x.is_negative()) {
                return Ok(Positivity::Positive);
            }
            if v.iter().all(|x| !x.is_positive()) {
                return Ok(Positivity::NegativeOrMixed);
            }
            v = self.a().left_mul_vec(&v);
        }
        Ok(Positivity::Undecided { bound: cap })
    }
}
