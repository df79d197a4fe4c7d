//! Perron-Frobenius data and the traces it induces on the K-groups:
//!
//! * `tau_s[v,N] = lambda^-N v u_r`
//! * `tau_u[w,M] = lambda^-M u_l w`
//! * `tau_CH[X,N] = lambda^-2N u_l X u_r`
//!
//! `u_l` is scaled to sum to 1 and `u_r` so that `u_l u_r = 1`. Only the
//! second condition matters for `tau_CH`; the first pins down the scale of
//! `tau_s` and `tau_u`, which is otherwise a free choice.

use serde::Serialize;

use crate::cylinder::CylinderK0Element;
use crate::dimension::{StableElement, UnstableElement};
use crate::error::{Result, SftError};
use crate::linalg::to_f64;
use crate::sft::AdjacencyMatrix;
use crate::Sft;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronData {
    pub lambda: f64,
    /// Left eigenvector (row), entries summing to 1.
    pub u_l: Vec<f64>,
    /// Right eigenvector (column) with `u_l . u_r = 1`.
    pub u_r: Vec<f64>,
    /// Max-norm eigen-equation residual over both eigenvectors.
    pub residual: f64,
    pub iterations: usize,
}

fn normalized(x: Vec<f64>) -> Vec<f64> {
    let s: f64 = x.iter().sum();
    x.into_iter().map(|v| v / s).collect()
}

/// Power iteration from the all-ones vector; returns the eigenvector with 1-norm 1.
fn power_iteration(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    k: usize,
    tol: f64,
    max_iters: usize,
) -> Result<(Vec<f64>, usize)> {
    let mut x = vec![1.0 / k as f64; k];
    for it in 1..=max_iters {
        let next = normalized(apply(&x));
        let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change < tol {
            return Ok((x, it));
        }
    }
    Err(SftError::NoConvergence { max_iters })
}

pub fn perron(adj: &AdjacencyMatrix, tol: f64, max_iters: usize) -> Result<PerronData> {
    adj.require_primitive()?;
    let k = adj.size();
    let a: Vec<Vec<f64>> = (0..k)
        .map(|i| adj.matrix().row(i).iter().map(to_f64).collect())
        .collect();
    let right = |x: &[f64]| -> Vec<f64> {
        (0..k)
            .map(|i| (0..k).map(|j| a[i][j] * x[j]).sum())
            .collect()
    };
    let left = |x: &[f64]| -> Vec<f64> {
        (0..k)
            .map(|j| (0..k).map(|i| x[i] * a[i][j]).sum())
            .collect()
    };

    let (u_r, it_r) = power_iteration(right, k, tol, max_iters)?;
    let (u_l, it_l) = power_iteration(left, k, tol, max_iters)?;
    let lambda: f64 = right(&u_r).iter().sum::<f64>() / u_r.iter().sum::<f64>();

    let pairing: f64 = u_l.iter().zip(&u_r).map(|(a, b)| a * b).sum();
    let u_r: Vec<f64> = u_r.into_iter().map(|x| x / pairing).collect();

    let res_r = right(&u_r)
        .iter()
        .zip(&u_r)
        .map(|(ax, x)| (ax - lambda * x).abs())
        .fold(0.0, f64::max);
    let res_l = left(&u_l)
        .iter()
        .zip(&u_l)
        .map(|(xa, x)| (xa - lambda * x).abs())
        .fold(0.0, f64::max);

    Ok(PerronData {
        lambda,
        u_l,
        u_r,
        residual: res_r.max(res_l),
        iterations: it_r.max(it_l),
    })
}

impl PerronData {
    fn lambda_pow(&self, e: usize) -> f64 {
        self.lambda.powf(-(e as f64))
    }
}

impl Sft {
    /// `lambda^-2N u_l X u_r`
    pub fn trace_ch(&self, a: &CylinderK0Element) -> Result<f64> {
        let p = self.perron()?;
        let x = a.x();
        let k = self.size();
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += p.u_l[i] * to_f64(&x[(i, j)]) * p.u_r[j];
            }
        }
        Ok(p.lambda_pow(2 * a.level()) * s)
    }

    /// `lambda^-N v u_r`
    pub fn trace_s(&self, a: &StableElement) -> Result<f64> {
        let p = self.perron()?;
        let s: f64 = a.v.iter().zip(&p.u_r).map(|(x, u)| to_f64(x) * u).sum();
        Ok(p.lambda_pow(a.level) * s)
    }

    /// `lambda^-M u_l w`
    pub fn trace_u(&self, b: &UnstableElement) -> Result<f64> {
        let p = self.perron()?;
        let s: f64 = b.w.iter().zip(&p.u_l).map(|(x, u)| to_f64(x) * u).sum();
        Ok(p.lambda_pow(b.level) * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntMatrix;

    fn sft(rows: &[Vec<i64>]) -> Sft {
        Sft::new(AdjacencyMatrix::from_i64(rows).unwrap())
    }

    #[test]
    fn scalar_shift() {
        let s = sft(&[vec![2]]);
        let p = s.perron().unwrap();
        assert_eq!(p.lambda, 2.0);
        assert_eq!(p.u_l, vec![1.0]);
        assert_eq!(p.u_r, vec![1.0]);
    }

    #[test]
    fn constant_row_sums() {
        let s = sft(&[vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
        let p = s.perron().unwrap();
        assert!((p.lambda - 4.0).abs() < 1e-12);
        for (l, r) in p.u_l.iter().zip(&p.u_r) {
            assert!((l - 1.0 / 3.0).abs() < 1e-12);
            assert!((r - 1.0).abs() < 1e-12);
        }
        assert!(p.residual < 1e-12);
    }

    #[test]
    fn golden_ratio() {
        let s = sft(&[vec![1, 1], vec![1, 0]]);
        let p = s.perron().unwrap();
        assert!((p.lambda - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        let pairing: f64 = p.u_l.iter().zip(&p.u_r).map(|(a, b)| a * b).sum();
        assert!((pairing - 1.0).abs() < 1e-15);
    }

    #[test]
    fn not_primitive() {
        let s = sft(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.perron().unwrap_err(), SftError::NotPrimitive);
        let r = sft(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(r.perron().unwrap_err(), SftError::Reducible);
    }

    #[test]
    fn trace_examples() {
        let s = sft(&[vec![2]]);
        let x = s.k0(IntMatrix::from_rows(&[vec![3]]), 1).unwrap();
        // lambda^-2 * 3
        assert!((s.trace_ch(&x).unwrap() - 0.75).abs() < 1e-15);
        assert!((s.trace_s(&StableElement::from_i64(&[1], 1)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(s.trace_s(&s.zero_s()).unwrap(), 0.0);
        assert!((s.trace_ch(&s.k0_identity()).unwrap() - 1.0).abs() < 1e-15);

        let t = sft(&[vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
        let x1 = t
            .k0(
                IntMatrix::from_rows(&[vec![1, -1, 0], vec![-1, 1, 0], vec![0, 0, 0]]),
                0,
            )
            .unwrap();
        assert!(t.trace_ch(&x1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn traces_respect_representatives() {
        let g = sft(&[vec![1, 1], vec![1, 0]]);
        let v = StableElement::from_i64(&[3, -2], 1);
        let va = StableElement::new(g.a().left_mul_vec(&v.v), 2);
        assert!((g.trace_s(&v).unwrap() - g.trace_s(&va).unwrap()).abs() < 1e-9);
        let w = UnstableElement::from_i64(&[1, 4], 0);
        let aw = UnstableElement::new(g.a().mul_vec(&w.w), 1);
        assert!((g.trace_u(&w).unwrap() - g.trace_u(&aw).unwrap()).abs() < 1e-9);
    }
}
