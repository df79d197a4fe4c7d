//! K-theory of the mapping cylinder of the homoclinic automorphism.
//!
//! `K0` is the limit of the centralizer `C(A) = {X : AX = XA}` under
//! `X -> AXA`; `K1` is the limit of `M_K(Z)/B(A)` with
//! `B(A) = {AY - YA}` under the same map. The graded product is
//!
//! * `[X,N] * [Y,M] = [XY, N+M]` on `K0 x K0`,
//! * `[X,N] * [Y + B(A), M] = [XY + B(A), N+M]` (and the mirror) on `K0 x K1`,
//! * zero on `K1 x K1`,
//!
//! and `K0(S)`, `K0(U)` are right and left modules via
//! `[v,N] * [X,M] = [vX, N+2M]` and `[X,M] * [w,N] = [Xw, N+2M]`.
//!
//! `R_A` is the subring generated by `[A,0]` and its inverse `[A,1]`; its
//! elements are stored as `[q(A), N]` with `deg q < k = deg p_A`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dimension::{StableElement, UnstableElement};
use crate::error::{Result, SftError};
use crate::linalg::{
    integer_kernel, lattice_basis, smith_normal_form, solvable_over_rationals, solve_with_smith,
    IntMatrix, IntPoly, SmithDecomposition,
};
use crate::Sft;

/// Matrix of `X -> AX - XA` acting on row-major `vec(X)`.
pub fn commutator_map(a: &IntMatrix) -> IntMatrix {
    let k = a.rows();
    let mut m = IntMatrix::zeros(k * k, k * k);
    for i in 0..k {
        for j in 0..k {
            let row = i * k + j;
            for t in 0..k {
                // (AX)_ij = sum_t A_it X_tj
                m[(row, t * k + j)] += &a[(i, t)];
                // (XA)_ij = sum_t X_it A_tj
                m[(row, i * k + t)] -= &a[(t, j)];
            }
        }
    }
    m
}

/// Saturated lattice basis of `C(A)`, Hermite-reduced in `vec` coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct CentralizerLattice {
    pub basis: Vec<IntMatrix>,
    pub rank: usize,
}

impl CentralizerLattice {
    pub fn compute(a: &IntMatrix) -> Self {
        let k = a.rows();
        let basis: Vec<IntMatrix> = integer_kernel(&commutator_map(a))
            .iter()
            .map(|v| IntMatrix::unvectorize(k, v))
            .collect();
        CentralizerLattice {
            rank: basis.len(),
            basis,
        }
    }

    /// `K^2 x rank` matrix whose columns are the basis vectors.
    pub fn coordinate_matrix(&self) -> IntMatrix {
        let k2 = self.basis.first().map_or(0, |b| b.rows() * b.rows());
        IntMatrix::from_fn(k2, self.rank, |r, c| self.basis[c].entries()[r].clone())
    }

    /// Integer coordinates of `x` in the basis, if `x` lies in the lattice.
    pub fn coordinates(&self, x: &IntMatrix) -> Option<Vec<BigInt>> {
        crate::linalg::solve_integer_linear(&self.coordinate_matrix(), &x.vectorize())
    }
}

/// Basis of `B(A)` with a witness `Y` for each basis element `AY - YA`.
#[derive(Clone, Debug, Serialize)]
pub struct CommutatorLattice {
    pub basis: Vec<IntMatrix>,
    pub witnesses: Vec<IntMatrix>,
    pub rank: usize,
}

/// `M_K(Z)/B(A)` as a free part plus torsion invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K1GroupStructure {
    pub free_rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
    /// All invariant factors of the commutator map, zeros included.
    #[serde(with = "crate::serde_int::vec")]
    pub smith_diagonal: Vec<BigInt>,
}

#[derive(Debug)]
pub(crate) struct CommutatorData {
    snf: SmithDecomposition,
    lattice: CommutatorLattice,
    structure: K1GroupStructure,
}

impl CommutatorData {
    pub(crate) fn compute(a: &IntMatrix) -> Self {
        let k = a.rows();
        let map = commutator_map(a);
        let snf = smith_normal_form(&map);

        // Row HNF of the transpose spans the image; the transform rows give witnesses.
        let hnf = crate::linalg::hermite_normal_form(&map.transpose());
        let basis = (0..hnf.rank)
            .map(|i| IntMatrix::unvectorize(k, hnf.h.row(i)))
            .collect();
        let witnesses = (0..hnf.rank)
            .map(|i| IntMatrix::unvectorize(k, hnf.t.row(i)))
            .collect();
        let lattice = CommutatorLattice {
            basis,
            witnesses,
            rank: hnf.rank,
        };

        let mut diagonal = snf.invariant_factors.clone();
        diagonal.resize(k * k, BigInt::zero());
        let structure = K1GroupStructure {
            free_rank: k * k - snf.rank(),
            torsion: snf
                .invariant_factors
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect(),
            smith_diagonal: diagonal,
        };
        CommutatorData {
            snf,
            lattice,
            structure,
        }
    }

    fn contains(&self, d: &IntMatrix) -> bool {
        solve_with_smith(&self.snf, &d.vectorize()).is_some()
    }

    fn contains_rationally(&self, d: &IntMatrix) -> bool {
        solvable_over_rationals(&self.snf, &d.vectorize())
    }

    /// Exponent beyond which `A^j D A^j in B(A)` can no longer change truth value:
    /// the rational kernel chain on the free quotient stabilizes within `free_rank`
    /// steps, and the chain on the torsion subgroup within `log2 |torsion|` steps.
    fn stabilization_index(&self) -> usize {
        let torsion_bits: u64 = self.structure.torsion.iter().map(|t| t.bits()).sum();
        self.structure.free_rank + torsion_bits as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "flavor", rename = "k0")]
pub struct CylinderK0Element {
    #[serde(rename = "payload")]
    x: IntMatrix,
    level: usize,
}

impl CylinderK0Element {
    pub fn x(&self) -> &IntMatrix {
        &self.x
    }

    pub fn level(&self) -> usize {
        self.level
    }
}

/// Class of `Y + B(A)` at a level. Any matrix is a valid representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "flavor", rename = "k1")]
pub struct CylinderK1Element {
    #[serde(rename = "payload")]
    pub y: IntMatrix,
    pub level: usize,
}

impl CylinderK1Element {
    pub fn new(y: IntMatrix, level: usize) -> Self {
        CylinderK1Element { y, level }
    }
}

/// Result of the bounded K1 equality procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum K1Equality {
    /// `A^j (X - Y) A^j` lies in `B(A)` for this `j`.
    Equal {
        exponent: usize,
    },
    /// Ruled out: `exponent` is past the stabilization index (`torsion_checked`)
    /// or the difference is not even rationally in `B(A)` there.
    NotEqual {
        exponent: usize,
        torsion_checked: bool,
    },
    Undecided {
        bound: usize,
    },
}

/// Element of `K_*(C(H,alpha))`, graded by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CylinderElement {
    K0(CylinderK0Element),
    K1(CylinderK1Element),
}

/// `[q(A), N]` with `deg q < k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RAElement {
    pub poly: IntPoly,
    pub level: usize,
}

/// Center of `C(A)` at matrix level, compared with the level-0 lattice of `R_A`.
#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub basis: Vec<IntMatrix>,
    pub rank: usize,
    /// Rank of `span{I, A, ..., A^(k-1)}`.
    pub ra_rank: usize,
    /// Index of that span inside the center when the ranks agree.
    #[serde(with = "option_int")]
    pub ra_index: Option<BigInt>,
}

mod option_int {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => crate::serde_int::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

impl Sft {
    pub fn commutator_lattice(&self) -> &CommutatorLattice {
        &self.commutator_data().lattice
    }

    pub fn k1_group_structure(&self) -> &K1GroupStructure {
        &self.commutator_data().structure
    }

    pub fn in_centralizer(&self, x: &IntMatrix) -> bool {
        x.rows() == self.size() && x.cols() == self.size() && self.a().commutator(x).is_zero()
    }

    /// Builds `[X,N]`, rejecting `X` outside `C(A)`.
    pub fn k0(&self, x: IntMatrix, level: usize) -> Result<CylinderK0Element> {
        if x.rows() != self.size() || x.cols() != self.size() {
            return Err(SftError::DimensionMismatch {
                expected: format!("{0}x{0}", self.size()),
                found: format!("{}x{}", x.rows(), x.cols()),
            });
        }
        if !self.in_centralizer(&x) {
            return Err(SftError::NotInCentralizer);
        }
        Ok(CylinderK0Element { x, level })
    }

    /// Re-checks the centralizer invariant on an element obtained by deserialization.
    pub fn check_k0(&self, e: CylinderK0Element) -> Result<CylinderK0Element> {
        self.k0(e.x, e.level)
    }

    pub fn k0_identity(&self) -> CylinderK0Element {
        CylinderK0Element {
            x: IntMatrix::identity(self.size()),
            level: 0,
        }
    }

    pub fn k0_zero(&self) -> CylinderK0Element {
        CylinderK0Element {
            x: IntMatrix::zeros(self.size(), self.size()),
            level: 0,
        }
    }

    /// `[A^i, N]`
    pub fn k0_power(&self, i: usize, level: usize) -> CylinderK0Element {
        CylinderK0Element {
            x: self.power(i),
            level,
        }
    }

    pub fn k1_zero(&self) -> CylinderK1Element {
        CylinderK1Element::new(IntMatrix::zeros(self.size(), self.size()), 0)
    }

    fn lift_sandwich(&self, x: &IntMatrix, from: usize, to: usize) -> IntMatrix {
        let p = self.power(to - from);
        &(&p * x) * &p
    }

    /// Same test as homoclinic equality: `K0(CH)` embeds in `K0(H)`.
    pub fn k0_equal(&self, a: &CylinderK0Element, b: &CylinderK0Element) -> bool {
        let (a, b) = if a.level <= b.level { (a, b) } else { (b, a) };
        let l = self.l();
        let p = self.power(l + b.level - a.level);
        let q = self.power(l);
        &(&p * &a.x) * &p == &(&q * &b.x) * &q
    }

    pub fn k0_add(&self, a: &CylinderK0Element, b: &CylinderK0Element) -> CylinderK0Element {
        let n = a.level.max(b.level);
        CylinderK0Element {
            x: &self.lift_sandwich(&a.x, a.level, n) + &self.lift_sandwich(&b.x, b.level, n),
            level: n,
        }
    }

    pub fn k0_neg(&self, a: &CylinderK0Element) -> CylinderK0Element {
        CylinderK0Element {
            x: -&a.x,
            level: a.level,
        }
    }

    pub fn k1_add(&self, a: &CylinderK1Element, b: &CylinderK1Element) -> CylinderK1Element {
        let n = a.level.max(b.level);
        CylinderK1Element::new(
            &self.lift_sandwich(&a.y, a.level, n) + &self.lift_sandwich(&b.y, b.level, n),
            n,
        )
    }

    pub fn k1_neg(&self, a: &CylinderK1Element) -> CylinderK1Element {
        CylinderK1Element::new(-&a.y, a.level)
    }

    pub fn in_commutator_lattice(&self, d: &IntMatrix) -> bool {
        self.commutator_data().contains(d)
    }

    /// Decides `[X + B(A), N] = [Y + B(A), M]`.
    ///
    /// Membership of `A^j D A^j` in `B(A)` is monotone in `j` and stabilizes at
    /// a computable index, so the answer is exact whenever that index is within
    /// `j_max`. Otherwise a rational-rank certificate may still rule equality out.
    pub fn k1_equal(&self, a: &CylinderK1Element, b: &CylinderK1Element) -> K1Equality {
        let n = a.level.max(b.level);
        let d = &self.lift_sandwich(&a.y, a.level, n) - &self.lift_sandwich(&b.y, b.level, n);
        let data = self.commutator_data();
        let stable = data.stabilization_index();
        let j_max = self.config().j_max;
        let last = stable.min(j_max);
        for j in 0..=last {
            let dj = self.lift_sandwich(&d, 0, j);
            if data.contains(&dj) {
                return K1Equality::Equal { exponent: j };
            }
        }
        if stable <= j_max {
            return K1Equality::NotEqual {
                exponent: stable,
                torsion_checked: true,
            };
        }
        let free = data.structure.free_rank;
        if !data.contains_rationally(&self.lift_sandwich(&d, 0, free)) {
            return K1Equality::NotEqual {
                exponent: free,
                torsion_checked: false,
            };
        }
        K1Equality::Undecided { bound: j_max }
    }

    /// `[X,N] * [Y,M] = [XY, N+M]`
    pub fn mul_00(&self, a: &CylinderK0Element, b: &CylinderK0Element) -> CylinderK0Element {
        CylinderK0Element {
            x: &a.x * &b.x,
            level: a.level + b.level,
        }
    }

    /// `[X,N] * [Y + B(A), M] = [XY + B(A), N+M]`
    pub fn mul_01(&self, a: &CylinderK0Element, b: &CylinderK1Element) -> CylinderK1Element {
        CylinderK1Element::new(&a.x * &b.y, a.level + b.level)
    }

    /// `[Y + B(A), M] * [X,N] = [YX + B(A), N+M]`
    pub fn mul_10(&self, a: &CylinderK1Element, b: &CylinderK0Element) -> CylinderK1Element {
        CylinderK1Element::new(&a.y * &b.x, a.level + b.level)
    }

    /// The product of two odd classes always vanishes.
    pub fn mul_11(&self, _a: &CylinderK1Element, _b: &CylinderK1Element) -> CylinderK0Element {
        self.k0_zero()
    }

    pub fn mul_graded(&self, a: &CylinderElement, b: &CylinderElement) -> CylinderElement {
        use CylinderElement::*;
        match (a, b) {
            (K0(x), K0(y)) => K0(self.mul_00(x, y)),
            (K0(x), K1(y)) => K1(self.mul_01(x, y)),
            (K1(x), K0(y)) => K1(self.mul_10(x, y)),
            (K1(x), K1(y)) => K0(self.mul_11(x, y)),
        }
    }

    /// Graded equality; mismatched degrees are equal only when both sides are zero.
    pub fn graded_equal(&self, a: &CylinderElement, b: &CylinderElement) -> K1Equality {
        use CylinderElement::*;
        let yes = K1Equality::Equal { exponent: 0 };
        let no = K1Equality::NotEqual {
            exponent: 0,
            torsion_checked: true,
        };
        let k0_zero = |x: &CylinderK0Element| self.k0_equal(x, &self.k0_zero());
        match (a, b) {
            (K0(x), K0(y)) => {
                if self.k0_equal(x, y) {
                    yes
                } else {
                    no
                }
            }
            (K1(x), K1(y)) => self.k1_equal(x, y),
            (K0(x), K1(y)) | (K1(y), K0(x)) => {
                if !k0_zero(x) {
                    return no;
                }
                self.k1_equal(y, &self.k1_zero())
            }
        }
    }

    /// Right action on the stable group: `[v,N] * [X,M] = [vX, N+2M]`.
    pub fn act_s(&self, a: &StableElement, h: &CylinderK0Element) -> StableElement {
        StableElement::new(h.x.left_mul_vec(&a.v), a.level + 2 * h.level)
    }

    /// Left action on the unstable group: `[X,M] * [w,N] = [Xw, N+2M]`.
    pub fn act_u(&self, h: &CylinderK0Element, b: &UnstableElement) -> UnstableElement {
        UnstableElement::new(h.x.mul_vec(&b.w), b.level + 2 * h.level)
    }

    /// `[p(A), N]` reduced to `deg < k` by division with remainder by `p_A`.
    pub fn ra_reduce(&self, p: &IntPoly, level: usize) -> RAElement {
        RAElement {
            poly: p.rem_monic(&self.minpoly().p),
            level,
        }
    }

    pub fn ra_to_k0(&self, r: &RAElement) -> CylinderK0Element {
        CylinderK0Element {
            x: r.poly.eval_matrix(self.a()),
            level: r.level,
        }
    }

    /// `[A,0]`
    pub fn ra_generator(&self) -> RAElement {
        self.ra_reduce(&IntPoly::monomial(1), 0)
    }

    /// `[A,1]`, the inverse of `[A,0]`.
    pub fn ra_generator_inv(&self) -> RAElement {
        self.ra_reduce(&IntPoly::monomial(1), 1)
    }

    pub fn ra_mul(&self, a: &RAElement, b: &RAElement) -> RAElement {
        self.ra_reduce(&a.poly.mul(&b.poly), a.level + b.level)
    }

    pub fn ra_add(&self, a: &RAElement, b: &RAElement) -> RAElement {
        let n = a.level.max(b.level);
        let lift = |r: &RAElement| r.poly.shift(2 * (n - r.level));
        self.ra_reduce(&lift(a).add(&lift(b)), n)
    }

    /// `[p,N] = [q,M]` (`N <= M`) iff `x^(2(M-N)) p = q` modulo `p_A`.
    pub fn ra_equal(&self, a: &RAElement, b: &RAElement) -> bool {
        let (a, b) = if a.level <= b.level { (a, b) } else { (b, a) };
        let lifted = self.ra_reduce(&a.poly.shift(2 * (b.level - a.level)), b.level);
        lifted.poly == self.ra_reduce(&b.poly, b.level).poly
    }

    /// Finds `q` with `deg q < k` and `d >= 0` such that `[X,N] = [q(A), N+d]`.
    ///
    /// `A^(2l) X` must lie in the rational span `W` of `A^(2l), ..., A^(2l+k-1)`;
    /// on `W` left multiplication by `A` is the companion matrix of `p_A`, so
    /// the question reduces to whether `C^(2d) r` becomes integral for the
    /// rational coordinates `r`. The denominators form a finite group on which
    /// the chain of kernels of `C^2` stabilizes within `k * bits(denominator)`
    /// steps.
    pub fn ra_membership(&self, a: &CylinderK0Element) -> Option<RAElement> {
        let mp = self.minpoly();
        let (l, k) = (mp.l, mp.k);
        let kk = self.size();
        let span = IntMatrix::from_fn(kk * kk, k, |r, c| {
            self.power(2 * l + c).entries()[r].clone()
        });
        let target = (&self.power(2 * l) * &a.x).vectorize();

        let snf = smith_normal_form(&span);
        let c = snf.u.mul_vec(&target);
        if c[snf.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        // Rational coordinates r = V y with y_i = c_i / d_i, over a common denominator.
        let denom = snf
            .invariant_factors
            .iter()
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        let y: Vec<BigInt> = c
            .iter()
            .zip(&snf.invariant_factors)
            .map(|(ci, di)| ci * (&denom / di))
            .collect();
        let mut numer = snf.v.mul_vec(&y);

        let steps = k * denom.bits() as usize;
        for d in 0..=steps {
            if numer.iter().all(|x| x.is_multiple_of(&denom)) {
                let coeffs = numer.iter().map(|x| x / &denom).collect();
                return Some(RAElement {
                    poly: IntPoly::new(coeffs),
                    level: a.level + d,
                });
            }
            numer = companion_apply(&mp.p, &companion_apply(&mp.p, &numer));
        }
        None
    }

    /// Matrices in `C(A)` commuting with all of `C(A)`.
    pub fn center_basis(&self) -> CenterReport {
        let cent = self.centralizer_basis();
        let kk = self.size();
        let r = cent.rank;
        let mut rows = Vec::new();
        for b in &cent.basis {
            // column j: vec(B_j B - B B_j)
            let cols: Vec<Vec<BigInt>> = cent
                .basis
                .iter()
                .map(|bj| bj.commutator(b).vectorize())
                .collect();
            for e in 0..kk * kk {
                rows.push(cols.iter().map(|c| c[e].clone()).collect::<Vec<_>>());
            }
        }
        let system = if rows.is_empty() {
            IntMatrix::zeros(0, r)
        } else {
            IntMatrix::from_vec(rows.len(), r, rows.concat())
        };
        let coords = integer_kernel(&system);
        let vecs: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|c| {
                let mut m = IntMatrix::zeros(kk, kk);
                for (cj, bj) in c.iter().zip(&cent.basis) {
                    m = &m + &bj.scale(cj);
                }
                m.vectorize()
            })
            .collect();
        let basis: Vec<IntMatrix> = lattice_basis(&vecs, kk * kk)
            .iter()
            .map(|v| IntMatrix::unvectorize(kk, v))
            .collect();

        let k = self.minpoly().k;
        let ra_index = (basis.len() == k).then(|| {
            let center_cols =
                IntMatrix::from_fn(kk * kk, k, |row, c| basis[c].entries()[row].clone());
            let snf_c = smith_normal_form(&center_cols);
            // Coordinates of A^i in the center basis, then the index is |det|.
            let coords: Vec<Vec<BigInt>> = (0..k)
                .map(|i| {
                    solve_with_smith(&snf_c, &self.power(i).vectorize())
                        .expect("powers of A lie in the center")
                })
                .collect();
            IntMatrix::from_vec(k, k, coords.concat())
                .determinant()
                .abs()
        });
        CenterReport {
            rank: basis.len(),
            basis,
            ra_rank: k,
            ra_index,
        }
    }
}

/// Multiplication by `x` on coefficient vectors modulo the monic `p`.
fn companion_apply(p: &IntPoly, v: &[BigInt]) -> Vec<BigInt> {
    let k = v.len();
    let top = v[k - 1].clone();
    let mut out = vec![BigInt::zero(); k];
    for i in 0..k {
        if i > 0 {
            out[i] += &v[i - 1];
        }
        out[i] -= &top * p.coeff(i);
    }
    out
}
