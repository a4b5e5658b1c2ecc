use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::padic::FieldCtx;

const N: i64 = 30;

fn n() -> Q {
    Q::from_integer(N)
}

fn quad_ram(cap: i64) -> Arc<FieldCtx> {
    let e = vec![vec![BigInt::from(3)], vec![BigInt::from(0)], vec![BigInt::from(1)]];
    FieldCtx::new(3, vec![BigInt::from(0), BigInt::from(1)], e, cap, "Q_3(sqrt-3)").unwrap()
}

fn qp_p0(p: u64, cap: i64) -> Arc<FieldCtx> {
    let mut e = vec![vec![BigInt::from(0)]; p as usize - 1];
    e[0] = vec![BigInt::from(p)];
    e.push(vec![BigInt::from(1)]);
    FieldCtx::new(p, vec![BigInt::from(0), BigInt::from(1)], e, cap, format!("Q_{p}(p0)")).unwrap()
}

fn all_pass(certs: &[Certificate]) {
    for c in certs {
        assert!(c.passed(), "{c:?}");
    }
}

#[test]
fn p0_in_several_fields() {
    for k in [FieldCtx::qp(2, 40), qp_p0(5, 40), qp_p0(3, 40), quad_ram(40)] {
        let p0 = find_p0(&k).unwrap();
        let p = k.p as i64;
        assert!(p0.pow(k.p - 1).eq_mod(&Elem::from_i64(&k, -p), 30).unwrap(), "{}", k.label);
        assert_eq!(p0.ord(), Some(Q::new(1, p - 1)));
    }
    // Q_3 and Q_5 do not contain p₀
    assert!(matches!(find_p0(&FieldCtx::qp(3, 20)), Err(Error::Unsupported(_))));
    assert!(matches!(find_p0(&FieldCtx::qp(5, 20)), Err(Error::Unsupported(_))));
}

#[test]
fn tower_over_q9_contains_p0() {
    let k = FieldCtx::unramified(3, 2, 60).unwrap();
    let t = LtTower::new(&k, 10).unwrap();
    assert_eq!((t.top().e, t.top().f), (8, 2));
    assert_eq!(t.pi0.ord(), Some(Q::new(1, 8)));
    // p₀ = ±π₀^4
    let a = t.pi0.pow(4);
    assert!(t.p0.eq_mod(&a, 30).unwrap() || t.p0.eq_mod(&a.neg(), 30).unwrap());
    let (_, c) = t.primitive_torsion(n()).unwrap();
    assert!(c.passed(), "{c:?}");
}

#[test]
fn primitive_torsion_over_qp_is_p0() {
    for p in [3u64, 5] {
        let k = FieldCtx::qp(p, 60);
        let t = LtTower::new(&k, 12).unwrap();
        let (h, c) = t.primitive_torsion(n()).unwrap();
        assert!(c.passed());
        assert_eq!(h.ord(), Some(Q::new(1, p as i64 - 1)));
        // π₀^{p-1} = -p
        assert!(h.pow(p - 1).eq_mod(&Elem::from_i64(t.top(), -(p as i64)), 30).unwrap());
    }
}

#[test]
fn epsilon0_over_q3() {
    let k = FieldCtx::qp(3, 80);
    let t = LtTower::new(&k, 12).unwrap();
    let eps = epsilon0_series(&t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    all_pass(&epsilon0_certificates(&t, &eps, n(), &mut rng));
    // the Ω₀² coefficient of T² is e₂·[T²]λ² = p₀/2
    let c = eps.coeff(2).coeff(2);
    let want = t.p0.div(&Elem::from_i64(t.top(), 2)).unwrap();
    assert!(c.eq_mod(&want, N).unwrap());
}

#[test]
fn epsilon0_over_ramified_quadratic() {
    let k = quad_ram(80);
    let t = LtTower::new(&k, 10).unwrap();
    let eps = epsilon0_series(&t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    all_pass(&epsilon0_certificates(&t, &eps, n(), &mut rng));
}

#[test]
fn corrupted_epsilon0_is_caught() {
    let k = FieldCtx::qp(3, 80);
    let t = LtTower::new(&k, 8).unwrap();
    let mut eps = epsilon0_series(&t).unwrap();
    let sym = omega0_symbol();
    let bump = SymPoly::monomial(&sym, Elem::from_i64(t.top(), 3), 3);
    eps.set(5, eps.coeff(5).add(&bump));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let certs = epsilon0_certificates(&t, &eps, n(), &mut rng);
    assert!(certs.iter().any(|c| c.name.contains("log-expanded") && !c.passed()));
    assert!(certs.iter().any(|c| c.name.contains("transported") && !c.passed()));
}

#[test]
fn equivariance_identity_and_random() {
    let k = FieldCtx::qp(5, 60);
    let t = LtTower::new(&k, 10).unwrap();
    let eps = epsilon0_series(&t).unwrap();
    let id = GaloisUnit::new(Elem::one(&k), &t.qp).unwrap();
    assert!(equivariance_check(&t, &eps, &id, n()).passed());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..3 {
        let s = GaloisUnit::random(&k, &t.qp, &mut rng).unwrap();
        // over Q_p the norm is the unit itself and the multiplier is 1
        assert!(s.multiplier(&k).unwrap().eq_mod(&Elem::one(&k), N).unwrap());
        assert!(equivariance_check(&t, &eps, &s, n()).passed());
    }
}

#[test]
fn equivariance_ramified_one_plus_pi() {
    let k = quad_ram(60);
    let t = LtTower::new(&k, 10).unwrap();
    let eps = epsilon0_series(&t).unwrap();
    let s = GaloisUnit::new(Elem::one(&k).add(&t.pi), &t.qp).unwrap();
    // N(1 + √-3) = 4
    assert!(s.kappa_qp.eq_mod(&Elem::from_i64(&t.qp, 4), N).unwrap());
    let c = equivariance_check(&t, &eps, &s, n());
    assert!(c.passed(), "{c:?}");
    // the inverse multiplier κ_Qp/κ_L does not work
    let inv = s.multiplier(&k).unwrap().inv().unwrap();
    assert!(!equivariance_against(&t, &eps, &s, &inv, n()).passed());
}

#[test]
fn norm_compatibility_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = quad_ram(40);
    let qp = FieldCtx::qp(3, 40);
    assert!(norm_compatibility(&k, &qp, 20, n(), &mut rng).passed());
    assert!(GaloisUnit::new(Elem::uniformizer(&k), &qp).is_err());
}

/// `[T^n](1+T)^c = c(c-1)…(c-n+1)/n!` as a polynomial in `c`, over the rationals.
fn binomial_poly(n: usize) -> Vec<num_rational::BigRational> {
    use num_rational::BigRational;
    let mut poly = vec![BigRational::from_integer(1.into())];
    for j in 0..n {
        let mut next = vec![BigRational::from_integer(0.into()); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i + 1] += a.clone();
            next[i] -= a.clone() * BigRational::from_integer((j as i64).into());
        }
        poly = next;
    }
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    poly.into_iter().map(|x| x / BigRational::from_integer(fact.clone())).collect()
}

#[test]
fn dual_character_of_gm_is_binomial() {
    let k = FieldCtx::qp(5, 60);
    let g = fgl_multiplicative(&k, 9).unwrap();
    let (beta, certs) = dual_character(&g, n()).unwrap();
    all_pass(&certs);
    for m in 1..=9 {
        let want = binomial_poly(m);
        for (j, w) in want.iter().enumerate() {
            let we = Elem::from_ratio(&k, w.numer(), w.denom()).unwrap();
            assert!(beta.coeff(m).coeff(j as i64).eq_mod(&we, N).unwrap(), "T^{m} c^{j}");
        }
    }
}

#[test]
fn dual_character_of_additive_and_lt() {
    let k = FieldCtx::qp(3, 60);
    let a = crate::formal_group::fgl_additive(&Elem::zero(&k), 8);
    let (beta, certs) = dual_character(&a, n()).unwrap();
    all_pass(&certs);
    // c^m/m! on the diagonal only
    let want = Elem::from_ratio(&k, &BigInt::from(1), &BigInt::from(720)).unwrap();
    assert!(beta.coeff(6).coeff(6).eq_mod(&want, N).unwrap());
    assert!(beta.coeff(6).coeff(5).is_zero());
    let lt = special_lubin_tate(&quad_ram(60), 10).unwrap();
    all_pass(&dual_character(&lt, n()).unwrap().1);
}

#[test]
fn period_valuation_examples() {
    let (r, c) = period_valuations(&FieldCtx::qp(5, 30)).unwrap();
    all_pass(&c);
    assert_eq!(r.ord_omega, Q::from_integer(0));
    assert_eq!(r.tate_twist, Q::new(-1, 4));
    let (r, c) = period_valuations(&qp_p0(5, 30)).unwrap();
    all_pass(&c);
    assert_eq!(r.ord_omega, Q::new(1, 4) - Q::new(1, 16));
    assert_eq!(r.ord_different, Q::new(3, 4));
    assert_eq!(r.tate_twist, -(Q::new(1, 16) + Q::new(3, 4)));
    assert_eq!(r.ord_omega0, Q::from_integer(0));
    let (r, c) = period_valuations(&FieldCtx::unramified(3, 2, 30).unwrap()).unwrap();
    all_pass(&c);
    assert_eq!(r.ord_omega, Q::new(1, 2) - Q::new(1, 8));
    assert_eq!(r.torsion[1].ord_p, Q::new(1, 72));
}

#[test]
fn genus_values() {
    let k = FieldCtx::qp(5, 40);
    let t = LtTower::new(&k, 8).unwrap();
    let (v0, _) = hirzebruch_genus(&t, 0).unwrap();
    assert!(v0.eq_mod(&Elem::one(&k), N).unwrap());
    // i = p - 1: p λ_p = 1/(1 - p^{p-1})
    let (v, rec) = hirzebruch_genus(&t, 4).unwrap();
    let want = Elem::from_ratio(&k, &BigInt::from(1), &BigInt::from(1 - 625)).unwrap();
    assert!(v.eq_mod(&want, N).unwrap());
    assert_eq!(rec.ord_p, Some(Q::from_integer(0)));
    assert_eq!(rec.graded_ord_p, Some(Q::from_integer(1)));
    assert!(hirzebruch_genus(&t, 8).is_err());
}
