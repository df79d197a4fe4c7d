//! Shift equivalence `(R, S, k)` between adjacency matrices `A` (n x n) and
//! `B` (m x m):
//!
//! ```text
//! RS = A^k    SR = B^k    AR = RB    SA = BS
//! ```
//!
//! with `R`, `S` non-negative. A verified witness induces isomorphisms of
//! all the invariants:
//!
//! * `phi_S[v,n] = [vR, n]`, inverse `[u,n] -> [uS, n+k]`
//! * `phi_U[w,n] = [Sw, n]`, inverse `[u,n] -> [Ru, n+k]`
//! * `phi_H[X,M] = [SXR, M + k/2]` for even `k`, `[SXRB, M + (k+1)/2]` for odd `k`

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cylinder::CylinderK0Element;
use crate::dimension::{HomoclinicElement, StableElement, UnstableElement};
use crate::error::{Result, SftError};
use crate::linalg::{
    characteristic_polynomial, integer_kernel, smith_normal_form, solve_with_smith, IntMatrix,
    IntPoly,
};
use crate::sft::AdjacencyMatrix;
use crate::Sft;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftEquivalenceWitness {
    #[serde(rename = "R")]
    pub r: IntMatrix,
    #[serde(rename = "S")]
    pub s: IntMatrix,
    pub k: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationCheck {
    pub equation: &'static str,
    pub holds: bool,
    /// Left side minus right side.
    pub residual: IntMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub r_nonnegative: bool,
    pub s_nonnegative: bool,
    pub lag_positive: bool,
    pub equations: Vec<EquationCheck>,
}

impl VerificationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.lag_positive {
            out.push("lag k must be positive".to_string());
        }
        if !self.r_nonnegative {
            out.push("R has a negative entry".to_string());
        }
        if !self.s_nonnegative {
            out.push("S has a negative entry".to_string());
        }
        out.extend(
            self.equations
                .iter()
                .filter(|e| !e.holds)
                .map(|e| format!("{} fails", e.equation)),
        );
        out
    }
}

fn shape(m: &IntMatrix) -> String {
    format!("{}x{}", m.rows(), m.cols())
}

/// Checks non-negativity and the four defining equations, each reported separately.
pub fn verify(
    a: &AdjacencyMatrix,
    b: &AdjacencyMatrix,
    w: &ShiftEquivalenceWitness,
) -> Result<VerificationReport> {
    let (n, m) = (a.size(), b.size());
    if w.r.rows() != n || w.r.cols() != m {
        return Err(SftError::DimensionMismatch {
            expected: format!("R of shape {n}x{m}"),
            found: shape(&w.r),
        });
    }
    if w.s.rows() != m || w.s.cols() != n {
        return Err(SftError::DimensionMismatch {
            expected: format!("S of shape {m}x{n}"),
            found: shape(&w.s),
        });
    }
    let (am, bm) = (a.matrix(), b.matrix());
    let k = w.k as u32;
    let check = |equation, lhs: IntMatrix, rhs: IntMatrix| {
        let residual = &lhs - &rhs;
        EquationCheck {
            equation,
            holds: residual.is_zero(),
            residual,
        }
    };
    let equations = vec![
        check("RS = A^k", &w.r * &w.s, am.pow(k)),
        check("SR = B^k", &w.s * &w.r, bm.pow(k)),
        check("AR = RB", am * &w.r, &w.r * bm),
        check("SA = BS", &w.s * am, bm * &w.s),
    ];
    let r_nonnegative = w.r.is_nonnegative();
    let s_nonnegative = w.s.is_nonnegative();
    let lag_positive = w.k > 0;
    Ok(VerificationReport {
        valid: r_nonnegative && s_nonnegative && lag_positive && equations.iter().all(|e| e.holds),
        r_nonnegative,
        s_nonnegative,
        lag_positive,
        equations,
    })
}

/// Result of a bounded witness search. `witness: None` is not a proof of
/// inequivalence unless `obstructions` is nonempty.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub witness: Option<ShiftEquivalenceWitness>,
    pub k_max: usize,
    pub entry_bound: u64,
    pub candidates: u64,
    /// Invariants of shift equivalence that differ between the two matrices.
    pub obstructions: Vec<String>,
}

/// `det(xI - A)` with all factors of `x` removed.
fn nonzero_spectrum_poly(a: &IntMatrix) -> IntPoly {
    let chi = characteristic_polynomial(a);
    let z = chi.zero_root_multiplicity();
    IntPoly::new(chi.coeffs()[z..].to_vec())
}

/// Spectral invariants that any shift equivalence must preserve.
pub fn spectral_obstructions(a: &AdjacencyMatrix, b: &AdjacencyMatrix) -> Vec<String> {
    let mut out = Vec::new();
    let pa = nonzero_spectrum_poly(a.matrix());
    let pb = nonzero_spectrum_poly(b.matrix());
    if pa != pb {
        out.push(format!(
            "nonzero spectra differ: characteristic polynomials away from 0 are {pa} and {pb}"
        ));
    }
    let sa = Sft::new(a.clone());
    let sb = Sft::new(b.clone());
    if let (Ok(x), Ok(y)) = (sa.perron(), sb.perron()) {
        if (x.lambda - y.lambda).abs() > 1e-9 * x.lambda.max(y.lambda) {
            out.push(format!(
                "Perron eigenvalues differ: {} vs {}",
                x.lambda, y.lambda
            ));
        }
    }
    out
}

/// Solves the linear equations for `S` given `R` and lag `k`, then looks for a
/// non-negative point in the solution coset among small kernel combinations.
fn solve_for_s(
    am: &IntMatrix,
    bm: &IntMatrix,
    r: &IntMatrix,
    ak: &IntMatrix,
    bk: &IntMatrix,
    entry_bound: i64,
) -> Option<IntMatrix> {
    let (n, m) = (am.rows(), bm.rows());
    // unknown vec(S), S is m x n, index s*n + t
    let unknowns = m * n;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut rhs: Vec<BigInt> = Vec::new();
    // (RS)_ij = sum_t R_it S_tj = A^k_ij
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![BigInt::zero(); unknowns];
            for t in 0..m {
                row[t * n + j] += &r[(i, t)];
            }
            rows.push(row);
            rhs.push(ak[(i, j)].clone());
        }
    }
    // (SR)_ij = sum_t S_it R_tj = B^k_ij
    for i in 0..m {
        for j in 0..m {
            let mut row = vec![BigInt::zero(); unknowns];
            for t in 0..n {
                row[i * n + t] += &r[(t, j)];
            }
            rows.push(row);
            rhs.push(bk[(i, j)].clone());
        }
    }
    // (SA - BS)_ij = sum_t S_it A_tj - sum_t B_it S_tj = 0
    for i in 0..m {
        for j in 0..n {
            let mut row = vec![BigInt::zero(); unknowns];
            for t in 0..n {
                row[i * n + t] += &am[(t, j)];
            }
            for t in 0..m {
                row[t * n + j] -= &bm[(i, t)];
            }
            rows.push(row);
            rhs.push(BigInt::zero());
        }
    }
    let system = IntMatrix::from_vec(rows.len(), unknowns, rows.concat());
    let snf = smith_normal_form(&system);
    let base = solve_with_smith(&snf, &rhs)?;
    let to_s = |v: &[BigInt]| IntMatrix::from_vec(m, n, v.to_vec());
    let s0 = to_s(&base);
    if s0.is_nonnegative() {
        return Some(s0);
    }
    let kernel = integer_kernel(&system);
    if kernel.is_empty() || kernel.len() > 3 {
        return None;
    }
    let range: Vec<i64> = (-entry_bound..=entry_bound).collect();
    let mut coeffs = vec![0usize; kernel.len()];
    loop {
        let mut v = base.clone();
        for (ci, kv) in coeffs.iter().zip(&kernel) {
            let c = BigInt::from(range[*ci]);
            for (x, y) in v.iter_mut().zip(kv) {
                *x += &c * y;
            }
        }
        let s = to_s(&v);
        if s.is_nonnegative() {
            return Some(s);
        }
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                return None;
            }
            coeffs[pos] += 1;
            if coeffs[pos] < range.len() {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}

/// Exhaustive search over `R` with entries in `[0, entry_bound]` satisfying
/// `AR = RB`, solving for `S` at each lag `1..=k_max`. Candidates are checked
/// in parallel; the lowest lag, then lowest candidate index, wins.
pub fn search(
    a: &AdjacencyMatrix,
    b: &AdjacencyMatrix,
    k_max: usize,
    entry_bound: u64,
    cap: u64,
) -> Result<SearchOutcome> {
    let (n, m) = (a.size(), b.size());
    let cells = (n * m) as u32;
    let base = BigInt::from(entry_bound + 1);
    let size = num_traits::pow(base.clone(), cells as usize);
    let candidates = match size.to_u64() {
        Some(c) if c <= cap => c,
        _ => {
            return Err(SftError::SearchSpaceTooLarge {
                size: size.to_string(),
                cap,
            })
        }
    };
    let obstructions = spectral_obstructions(a, b);
    let (am, bm) = (a.matrix(), b.matrix());
    let digits = entry_bound + 1;
    let decode = |mut idx: u64| {
        let mut entries = Vec::with_capacity(n * m);
        for _ in 0..n * m {
            entries.push(BigInt::from(idx % digits));
            idx /= digits;
        }
        IntMatrix::from_vec(n, m, entries)
    };

    let mut witness = None;
    if obstructions.is_empty() {
        for k in 1..=k_max {
            let ak = am.pow(k as u32);
            let bk = bm.pow(k as u32);
            let found = (0..candidates).into_par_iter().find_map_first(|idx| {
                let r = decode(idx);
                if r.is_zero() || (am * &r) != (&r * bm) {
                    return None;
                }
                solve_for_s(am, bm, &r, &ak, &bk, entry_bound as i64)
                    .map(|s| ShiftEquivalenceWitness { r, s, k })
            });
            if found.is_some() {
                witness = found;
                break;
            }
        }
    }
    Ok(SearchOutcome {
        witness,
        k_max,
        entry_bound,
        candidates,
        obstructions,
    })
}

/// Isomorphisms of invariants induced by a verified witness from `A` to `B`.
pub struct ShiftEquivalence<'a> {
    pub from: &'a Sft,
    pub to: &'a Sft,
    pub witness: ShiftEquivalenceWitness,
}

impl<'a> ShiftEquivalence<'a> {
    /// Refuses witnesses that fail verification.
    pub fn new(from: &'a Sft, to: &'a Sft, witness: ShiftEquivalenceWitness) -> Result<Self> {
        let report = verify(from.adjacency(), to.adjacency(), &witness)?;
        if !report.valid {
            return Err(SftError::InvalidWitness(report.failures().join("; ")));
        }
        Ok(ShiftEquivalence { from, to, witness })
    }

    fn lag(&self) -> usize {
        self.witness.k
    }

    pub fn phi_s(&self, a: &StableElement) -> StableElement {
        StableElement::new(self.witness.r.left_mul_vec(&a.v), a.level)
    }

    pub fn phi_s_inv(&self, b: &StableElement) -> StableElement {
        StableElement::new(self.witness.s.left_mul_vec(&b.v), b.level + self.lag())
    }

    pub fn phi_u(&self, a: &UnstableElement) -> UnstableElement {
        UnstableElement::new(self.witness.s.mul_vec(&a.w), a.level)
    }

    pub fn phi_u_inv(&self, b: &UnstableElement) -> UnstableElement {
        UnstableElement::new(self.witness.r.mul_vec(&b.w), b.level + self.lag())
    }

    fn phi_matrix(&self, x: &IntMatrix, level: usize) -> (IntMatrix, usize) {
        let w = &self.witness;
        let sxr = &(&w.s * x) * &w.r;
        if w.k.is_multiple_of(2) {
            (sxr, level + w.k / 2)
        } else {
            (&sxr * self.to.a(), level + w.k.div_ceil(2))
        }
    }

    pub fn phi_h(&self, x: &HomoclinicElement) -> HomoclinicElement {
        let (m, level) = self.phi_matrix(&x.x, x.level);
        HomoclinicElement::new(m, level)
    }

    /// Restriction of `phi_H` to the cylinder ring; lands in `C(B)`.
    pub fn phi_ch(&self, x: &CylinderK0Element) -> CylinderK0Element {
        let (m, level) = self.phi_matrix(x.x(), x.level());
        self.to
            .k0(m, level)
            .expect("S X R B commutes with B whenever X commutes with A")
    }
}
