use num_rational::BigRational;

use super::*;
use crate::formal_group::fgl_multiplicative;

fn n() -> Q {
    Q::from_integer(30)
}

fn all_pass(certs: &[Certificate]) {
    for c in certs {
        assert!(c.passed(), "{c:?}");
    }
}

/// `b_k` recomputed over the rationals.
fn b_rational(p: i64, q: i64, k: u32) -> BigRational {
    let mut b = BigRational::from_integer(1.into());
    let mut qi = BigInt::from(1);
    for _ in 0..k {
        qi *= q;
        let e = qi.to_u32().unwrap() - 1;
        let unit = BigInt::from(1) - BigInt::from(p).pow(e);
        b = b / BigRational::from_integer(unit) / BigRational::from_integer(p.into());
    }
    b
}

#[test]
fn hazewinkel_coefficients_match_rationals() {
    let qp = FieldCtx::qp(3, 60);
    let cs = hazewinkel_coefficients(&qp, 1, 30).unwrap();
    assert_eq!(cs.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 3, 9, 27]);
    // b_1 = 1/((1 - 9)·3) = -1/24
    let want = Elem::from_ratio(&qp, &BigInt::from(-1), &BigInt::from(24)).unwrap();
    assert!(cs[1].1.eq_mod(&want, 30).unwrap());
    for (k, (_, b)) in cs.iter().enumerate() {
        let r = b_rational(3, 3, k as u32);
        let w = Elem::from_ratio(&qp, r.numer(), r.denom()).unwrap();
        assert!(b.eq_mod(&w, 20).unwrap(), "b_{k}");
    }
    assert!(hazewinkel_valuations(&qp, 1, 30).unwrap().passed());
    assert!(hazewinkel_valuations(&FieldCtx::qp(2, 60), 2, 20).unwrap().passed());
}

#[test]
fn log_is_homogeneous() {
    let qp = FieldCtx::qp(5, 40);
    let g = hazewinkel_log(&qp, 1, 26).unwrap();
    assert_eq!(g.homogeneous_degree(), Some(-2));
    assert_eq!(g.underlying.coeff(5).exponent_range(), Some((4, 4)));
    assert!(hazewinkel_log(&qp, 0, 5).is_err());
}

#[test]
fn kn_laws_are_integral_and_graded() {
    for (p, h, d) in [(2u64, 1u32, 8usize), (3, 1, 10), (5, 1, 8), (3, 2, 12), (2, 2, 8)] {
        let qp = FieldCtx::qp(p, 60);
        let (f, certs) = kn_group_law(&qp, h, d, n()).unwrap();
        all_pass(&certs);
        let q = (p as usize).pow(h);
        let s = kn_p_series(&f, p, q, n()).unwrap();
        assert_eq!(s.integral.homogeneous_degree(), Some(-2));
        for c in &s.certificates {
            assert!(c.passed(), "p={p} n={h}: {c:?}");
        }
    }
}

#[test]
fn height_one_law_is_rescaled_multiplicative_mod_p() {
    // k(1) at p = 2: log(uT) = uT + (uT)²/(-2) + …, so F ≡ X + Y + u XY mod 2
    let qp = FieldCtx::qp(2, 60);
    let (f, _) = kn_group_law(&qp, 1, 6, n()).unwrap();
    let c = f.law.get(1, 1);
    assert_eq!(c.exponent_range(), Some((1, 1)));
    assert_eq!(c.coeff(1).residue().unwrap()[0], 1);
    let _ = fgl_multiplicative(&qp, 4).unwrap();
}

#[test]
fn first_nonlinear_term_at_height_two() {
    let qp = FieldCtx::qp(3, 60);
    let (f, _) = kn_group_law(&qp, 2, 10, n()).unwrap();
    let s = kn_p_series(&f, 3, 9, n()).unwrap();
    let lead = s.mod_p.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    assert_eq!(lead, 9);
    assert_eq!(s.mod_p.coeff(9).terms().map(|(a, c)| (a, c.v)).collect::<Vec<_>>(), vec![(8, 1)]);
}

#[test]
fn fp_arithmetic() {
    let a = Fp::new(5, 7);
    let b = Fp::new(4, 7);
    assert_eq!(a.add(&b).v, 2);
    assert_eq!(a.sub(&b).v, 1);
    assert_eq!(b.sub(&a).v, 6);
    assert_eq!(a.mul(&b).v, 6);
    assert_eq!(a.neg().v, 2);
    assert_eq!(a.from_i64_like(-1).v, 6);
}

#[test]
fn graded_lift_of_multiplicative() {
    let qp = FieldCtx::qp(3, 40);
    let g = fgl_multiplicative(&qp, 6).unwrap();
    let k = graded_lift(&g);
    assert_eq!(GradedSeries::new(k.log.clone()).homogeneous_degree(), Some(-2));
    assert_eq!(k.law.get(1, 1).exponent_range(), Some((1, 1)));
    assert!(araki_shape_note()["bp"].is_string());
}

#[test]
fn exact_p_series_identity_holds() {
    for (p, h, d) in [(2u64, 1u32, 24usize), (3, 1, 20), (3, 2, 20), (2, 2, 20)] {
        let qp = FieldCtx::qp(p, 60);
        let (f, _) = kn_group_law(&qp, h, d, n()).unwrap();
        let s = kn_p_series(&f, p, (p as usize).pow(h), n()).unwrap();
        let c = s.certificates.iter().find(|c| c.name.contains("pT +k")).unwrap();
        assert!(c.passed(), "p={p} n={h}: {c:?}");
    }
}
