#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sftdim::linalg::integer_kernel;
use sftdim::{
    AdjacencyMatrix, CylinderK0Element, HomoclinicElement, IntMatrix, Sft, StableElement,
    UnstableElement,
};

pub const ORACLE_DEPTH: usize = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sft(rows: &[Vec<i64>]) -> Sft {
    Sft::new(AdjacencyMatrix::from_i64(rows).unwrap())
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(lo..=hi)))
}

pub fn random_vec(rng: &mut impl Rng, len: usize, bound: i64) -> Vec<BigInt> {
    (0..len)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect()
}

/// Valid adjacency matrix of size `1..=k_max`; singular matrices show up regularly.
pub fn random_adjacency(rng: &mut impl Rng, k_max: usize, entry_max: i64) -> AdjacencyMatrix {
    loop {
        let k = rng.gen_range(1..=k_max);
        // sparse-ish so that l > 0 and nontrivial kernels occur
        let m = IntMatrix::from_fn(k, k, |_, _| {
            if rng.gen_bool(0.45) {
                BigInt::zero()
            } else {
                BigInt::from(rng.gen_range(1..=entry_max))
            }
        });
        if let Ok(a) = AdjacencyMatrix::new(m) {
            return a;
        }
    }
}

pub fn random_primitive(rng: &mut impl Rng, k_max: usize, entry_max: i64) -> AdjacencyMatrix {
    loop {
        let a = random_adjacency(rng, k_max, entry_max);
        if a.is_primitive() {
            return a;
        }
    }
}

pub fn random_stable(rng: &mut impl Rng, s: &Sft, bound: i64, max_level: usize) -> StableElement {
    StableElement::new(
        random_vec(rng, s.size(), bound),
        rng.gen_range(0..=max_level),
    )
}

pub fn random_unstable(
    rng: &mut impl Rng,
    s: &Sft,
    bound: i64,
    max_level: usize,
) -> UnstableElement {
    UnstableElement::new(
        random_vec(rng, s.size(), bound),
        rng.gen_range(0..=max_level),
    )
}

pub fn random_homoclinic(
    rng: &mut impl Rng,
    s: &Sft,
    bound: i64,
    max_level: usize,
) -> HomoclinicElement {
    let k = s.size();
    HomoclinicElement::new(
        random_matrix(rng, k, k, -bound, bound),
        rng.gen_range(0..=max_level),
    )
}

/// Random integral combination of the centralizer basis.
pub fn random_centralizer(rng: &mut impl Rng, s: &Sft, bound: i64) -> IntMatrix {
    let k = s.size();
    let mut x = IntMatrix::zeros(k, k);
    for b in &s.centralizer_basis().basis {
        let c = BigInt::from(rng.gen_range(-bound..=bound));
        x = &x + &b.scale(&c);
    }
    x
}

pub fn random_k0(rng: &mut impl Rng, s: &Sft, bound: i64, max_level: usize) -> CylinderK0Element {
    s.k0(
        random_centralizer(rng, s, bound),
        rng.gen_range(0..=max_level),
    )
    .unwrap()
}

/// A second representative of the same stable class, or a random one.
pub fn perturbed_stable(
    rng: &mut impl Rng,
    s: &Sft,
    a: &StableElement,
    bound: i64,
) -> StableElement {
    if rng.gen_bool(0.5) {
        let up = rng.gen_range(0..=3);
        let mut v = s.lift_s(a, a.level + up);
        // add a vector killed by A^l, which leaves the class unchanged
        for kv in integer_kernel(&s.power(s.l()).transpose()) {
            let c = BigInt::from(rng.gen_range(-2..=2));
            v = v.iter().zip(&kv).map(|(x, y)| x + &c * y).collect();
        }
        StableElement::new(v, a.level + up)
    } else {
        random_stable(rng, s, bound, 4)
    }
}

// Brute-force oracles: search for a witnessing exponent up to `ORACLE_DEPTH`.

pub fn oracle_equal_s(a_mat: &IntMatrix, v: &[BigInt], n: usize, w: &[BigInt], m: usize) -> bool {
    let (v, n, w, m) = if n <= m { (v, n, w, m) } else { (w, m, v, n) };
    let mut left = v.to_vec();
    for _ in 0..(m - n) {
        left = a_mat.left_mul_vec(&left);
    }
    let mut right = w.to_vec();
    for _ in 0..=ORACLE_DEPTH {
        if left == right {
            return true;
        }
        left = a_mat.left_mul_vec(&left);
        right = a_mat.left_mul_vec(&right);
    }
    false
}

pub fn oracle_equal_u(a_mat: &IntMatrix, v: &[BigInt], n: usize, w: &[BigInt], m: usize) -> bool {
    oracle_equal_s(&a_mat.transpose(), v, n, w, m)
}

pub fn oracle_equal_h(a_mat: &IntMatrix, x: &IntMatrix, n: usize, y: &IntMatrix, m: usize) -> bool {
    let (x, n, y, m) = if n <= m { (x, n, y, m) } else { (y, m, x, n) };
    let sandwich = |z: &IntMatrix| &(a_mat * z) * a_mat;
    let mut left = x.clone();
    for _ in 0..(m - n) {
        left = sandwich(&left);
    }
    let mut right = y.clone();
    for _ in 0..=ORACLE_DEPTH {
        if left == right {
            return true;
        }
        left = sandwich(&left);
        right = sandwich(&right);
    }
    false
}

/// `(z,N) ~ (w,M)` under `z -> A^2 z`.
pub fn oracle_hom_equal(a_mat: &IntMatrix, z: &[BigInt], n: usize, w: &[BigInt], m: usize) -> bool {
    let a2 = a_mat * a_mat;
    oracle_equal_s(&a2.transpose(), z, n, w, m)
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() < tol
}
