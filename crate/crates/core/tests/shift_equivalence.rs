mod common;

use common::*;
use rand::Rng;

use sftdim::shift_equiv::{search, verify, ShiftEquivalence};
use sftdim::{AdjacencyMatrix, IntMatrix, Positivity, Sft, SftError, ShiftEquivalenceWitness};

/// Elementary splitting `A = RS`, `B = SR`: a lag-1 witness between `A` and `B`.
fn elementary(r: &mut impl Rng) -> (AdjacencyMatrix, AdjacencyMatrix, ShiftEquivalenceWitness) {
    loop {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=3);
        let rm = random_matrix(r, n, m, 0, 2);
        let sm = random_matrix(r, m, n, 0, 2);
        let (Ok(a), Ok(b)) = (
            AdjacencyMatrix::new(&rm * &sm),
            AdjacencyMatrix::new(&sm * &rm),
        ) else {
            continue;
        };
        if a.is_primitive() {
            return (a, b, ShiftEquivalenceWitness { r: rm, s: sm, k: 1 });
        }
    }
}

/// Two elementary steps composed: lag 2.
fn composed(r: &mut impl Rng) -> (AdjacencyMatrix, AdjacencyMatrix, ShiftEquivalenceWitness) {
    loop {
        let (a, b, w1) = elementary(r);
        // split B again
        let m = b.size();
        let p = r.gen_range(1..=3);
        let r2 = random_matrix(r, m, p, 0, 2);
        let Some(s2) = sftdim::linalg::solve_integer_linear(
            &IntMatrix::from_fn(m * m, m * p, |row, col| {
                // (r2 s2)_(i,j) = sum_t r2_(i,t) s2_(t,j), unknown index t*m + j
                let (i, j) = (row / m, row % m);
                let (t, jj) = (col / m, col % m);
                if jj == j {
                    r2[(i, t)].clone()
                } else {
                    0.into()
                }
            }),
            &b.matrix().vectorize(),
        ) else {
            continue;
        };
        let s2 = IntMatrix::from_vec(p, m, s2);
        if !s2.is_nonnegative() || &r2 * &s2 != *b.matrix() {
            continue;
        }
        let Ok(c) = AdjacencyMatrix::new(&s2 * &r2) else {
            continue;
        };
        let w = ShiftEquivalenceWitness {
            r: &w1.r * &r2,
            s: &s2 * &w1.s,
            k: 2,
        };
        return (a, c, w);
    }
}

fn check_induced(a: &Sft, b: &Sft, w: ShiftEquivalenceWitness, r: &mut impl Rng) {
    let phi = ShiftEquivalence::new(a, b, w).unwrap();
    // unital
    assert!(b.k0_equal(&phi.phi_ch(&a.k0_identity()), &b.k0_identity()));
    for _ in 0..100 {
        let v = random_stable(r, a, 3, 2);
        let u = random_unstable(r, a, 3, 2);
        let x = random_k0(r, a, 2, 2);
        let y = random_k0(r, a, 2, 2);
        // intertwining with the shift
        assert!(b.equal_s(&phi.phi_s(&a.alpha_s(&v)), &b.alpha_s(&phi.phi_s(&v))));
        assert!(b.equal_u(&phi.phi_u(&a.alpha_u(&u)), &b.alpha_u(&phi.phi_u(&u))));
        // inverses
        assert!(a.equal_s(&phi.phi_s_inv(&phi.phi_s(&v)), &v));
        assert!(a.equal_u(&phi.phi_u_inv(&phi.phi_u(&u)), &u));
        // ring homomorphism
        assert!(b.k0_equal(
            &phi.phi_ch(&a.mul_00(&x, &y)),
            &b.mul_00(&phi.phi_ch(&x), &phi.phi_ch(&y))
        ));
        assert!(b.k0_equal(
            &phi.phi_ch(&a.k0_add(&x, &y)),
            &b.k0_add(&phi.phi_ch(&x), &phi.phi_ch(&y))
        ));
        // module compatibility on both sides
        assert!(b.equal_s(
            &phi.phi_s(&a.act_s(&v, &x)),
            &b.act_s(&phi.phi_s(&v), &phi.phi_ch(&x))
        ));
        assert!(b.equal_u(
            &phi.phi_u(&a.act_u(&x, &u)),
            &b.act_u(&phi.phi_ch(&x), &phi.phi_u(&u))
        ));
        // homoclinic version agrees with the cylinder one
        let hx = sftdim::HomoclinicElement::new(x.x().clone(), x.level());
        let img = phi.phi_h(&hx);
        let img_ch = phi.phi_ch(&x);
        assert!(b.equal_h(
            &img,
            &sftdim::HomoclinicElement::new(img_ch.x().clone(), img_ch.level())
        ));
        // traces are preserved up to the scaling of the eigenvectors on the ring
        if let (Ok(_), Ok(_)) = (a.perron(), b.perron()) {
            assert!(approx(
                a.trace_ch(&x).unwrap(),
                b.trace_ch(&phi.phi_ch(&x)).unwrap(),
                1e-9
            ));
            if a.is_positive_s(&v).unwrap() == Positivity::Positive {
                assert_eq!(
                    b.is_positive_s(&phi.phi_s(&v)).unwrap(),
                    Positivity::Positive
                );
            }
        }
    }
}

#[test]
fn trivial_witnesses_induce_identities() {
    let mut r = rng(41);
    for _ in 0..10 {
        let a = random_primitive(&mut r, 3, 3);
        let s = Sft::new(a.clone());
        let w = ShiftEquivalenceWitness {
            r: IntMatrix::identity(s.size()),
            s: s.a().clone(),
            k: 1,
        };
        assert!(verify(&a, &a, &w).unwrap().valid);
        let phi = ShiftEquivalence::new(&s, &s, w.clone()).unwrap();
        let v = random_stable(&mut r, &s, 3, 2);
        assert!(s.equal_s(&phi.phi_s(&v), &v));
        let x = random_k0(&mut r, &s, 2, 2);
        assert!(s.k0_equal(&phi.phi_ch(&x), &x));
        check_induced(&s, &s, w, &mut r);
        let w2 = ShiftEquivalenceWitness {
            r: s.a().clone(),
            s: s.a().clone(),
            k: 2,
        };
        assert!(verify(&a, &a, &w2).unwrap().valid);
        check_induced(&s, &s, w2, &mut r);
    }
}

#[test]
fn elementary_witnesses() {
    let mut r = rng(42);
    for _ in 0..10 {
        let (a, b, w) = elementary(&mut r);
        assert!(verify(&a, &b, &w).unwrap().valid);
        check_induced(&Sft::new(a), &Sft::new(b), w, &mut r);
    }
}

#[test]
fn lag_two_witnesses() {
    let mut r = rng(43);
    for _ in 0..5 {
        let (a, c, w) = composed(&mut r);
        assert!(verify(&a, &c, &w).unwrap().valid);
        check_induced(&Sft::new(a), &Sft::new(c), w, &mut r);
    }
}

#[test]
fn search_finds_elementary_pairs() {
    let mut r = rng(44);
    let mut found = 0;
    for _ in 0..6 {
        let (a, b, _) = elementary(&mut r);
        if a.size() * b.size() > 4 {
            continue;
        }
        let out = search(&a, &b, 1, 2, 1 << 16).unwrap();
        let w = out
            .witness
            .expect("a lag-1 witness with entries <= 2 exists");
        assert!(verify(&a, &b, &w).unwrap().valid);
        found += 1;
    }
    assert!(found > 0);
}

#[test]
fn swap_conjugate_witness() {
    let a = AdjacencyMatrix::from_i64(&[vec![1, 1], vec![1, 0]]).unwrap();
    let b = AdjacencyMatrix::from_i64(&[vec![0, 1], vec![1, 1]]).unwrap();
    let p = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    // R = P, S = PA
    let good = ShiftEquivalenceWitness {
        r: p.clone(),
        s: &p * a.matrix(),
        k: 1,
    };
    assert!(verify(&a, &b, &good).unwrap().valid);
    // S = AP fails SR = B and SA = BS
    let bad = ShiftEquivalenceWitness {
        r: p.clone(),
        s: a.matrix() * &p,
        k: 1,
    };
    let rep = verify(&a, &b, &bad).unwrap();
    assert!(!rep.valid);
    let sa = Sft::new(a);
    let sb = Sft::new(b);
    assert!(matches!(
        ShiftEquivalence::new(&sa, &sb, bad),
        Err(SftError::InvalidWitness(_))
    ));
    check_induced(&sa, &sb, good, &mut rng(45));
}

#[test]
fn witness_json_shape() {
    let w = ShiftEquivalenceWitness {
        r: IntMatrix::from_rows(&[vec![1, 0]]),
        s: IntMatrix::from_rows(&[vec![2], vec![0]]),
        k: 3,
    };
    let json = serde_json::to_string(&w).unwrap();
    assert_eq!(json, r#"{"R":[[1,0]],"S":[[2],[0]],"k":3}"#);
    let back: ShiftEquivalenceWitness = serde_json::from_str(&json).unwrap();
    assert_eq!(back, w);
}
