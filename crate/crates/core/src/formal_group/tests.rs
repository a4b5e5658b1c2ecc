use std::sync::Arc;

use num_bigint::BigInt;

use super::*;
use crate::padic::{adjoin_root, hensel_root, FieldCtx};

fn digits(n: i64) -> Q {
    Q::from_integer(n)
}

fn digit_sum(mut n: usize, p: usize) -> i64 {
    let mut s = 0;
    while n > 0 {
        s += (n % p) as i64;
        n /= p;
    }
    s
}

/// `Q_p(p₀)` with `p₀^{p-1} = -p`.
fn qp_p0(p: u64, cap: i64) -> Arc<FieldCtx> {
    let mut e = vec![vec![BigInt::from(0)]; p as usize - 1];
    e[0] = vec![BigInt::from(p)];
    e.push(vec![BigInt::from(1)]);
    FieldCtx::new(p, vec![BigInt::from(0), BigInt::from(1)], e, cap, format!("Q_{p}(p0)")).unwrap()
}

fn quad_ram(cap: i64) -> Arc<FieldCtx> {
    let e = vec![vec![BigInt::from(3)], vec![BigInt::from(0)], vec![BigInt::from(1)]];
    FieldCtx::new(3, vec![BigInt::from(0), BigInt::from(1)], e, cap, "Q_3(sqrt-3)").unwrap()
}

#[test]
fn multiplicative_three_series() {
    let k = FieldCtx::qp(3, 40);
    let g = fgl_multiplicative(&k, 12).unwrap();
    let s = g.p_series(3).unwrap();
    let want = [0i64, 3, 3, 1];
    for n in 0..=12 {
        let w = Elem::from_i64(&k, *want.get(n).unwrap_or(&0));
        assert!(s.coeff(n).eq_mod(&w, 30).unwrap(), "n = {n}");
    }
    assert!(g.log_exp_inverse(digits(30)).passed());
}

#[test]
fn special_law_reproduces_its_p_series() {
    for p in [3u64, 5] {
        let k = FieldCtx::qp(p, 80);
        let f = special_lubin_tate(&k, 24).unwrap();
        let s = f.p_series(p).unwrap();
        let mut want = Series::monomial(&Elem::from_i64(&k, p as i64), 1, 24);
        want.set(p as usize, Elem::one(&k));
        assert_eq!(s.first_mismatch(&want, digits(40)).unwrap(), None);
        // re-substitute into the functional equation
        let lhs = f.log.compose(&want).unwrap();
        let rhs = f.log.scale(&Elem::from_i64(&k, p as i64));
        assert_eq!(lhs.first_mismatch(&rhs, digits(40)).unwrap(), None);
        for c in f.axioms(12, digits(40)) {
            assert!(c.passed(), "{c:?}");
        }
    }
}

#[test]
fn degenerate_p_series_rejected() {
    let k = FieldCtx::qp(3, 40);
    let s = Series::monomial(&Elem::from_i64(&k, 3), 1, 10);
    assert!(fgl_from_p_series(&k, &Elem::from_i64(&k, 3), &s).is_err());
}

#[test]
fn honda_pi_series_is_frobenius_mod_p() {
    let k = FieldCtx::qp(3, 80);
    let f = fgl_honda(&k, 30).unwrap();
    let s = f.p_series(3).unwrap();
    let t3 = Series::monomial(&Elem::one(&k), 3, 30);
    assert_eq!(s.first_mismatch(&t3, digits(1)).unwrap(), None);
    assert!(f.integrality().passed());
}

#[test]
fn rescaled_exp_valuations_follow_digit_sums() {
    for p in [3u64, 5, 7] {
        let d = 40;
        let k = qp_p0(p, 120);
        let p0 = Elem::uniformizer(&k);
        let g = fgl_multiplicative(&k, d).unwrap().rescale(&p0, "p0").unwrap();
        for n in 1..=d {
            let want = Q::new(digit_sum(n, p as usize) - 1, p as i64 - 1);
            assert_eq!(g.exp.coeff(n).ord(), Some(want), "p = {p}, n = {n}");
            assert!(g.log.coeff(n).ord().unwrap() >= Q::from_integer(0));
        }
        assert!(g.integrality().passed());
    }
}

#[test]
fn half_of_e_to_2x_is_sum_of_2_powers_mod_2() {
    let k = FieldCtx::qp(2, 80);
    for s in [2i64, -2] {
        let g = fgl_multiplicative(&k, 33).unwrap().rescale(&Elem::from_i64(&k, s), "s").unwrap();
        for n in 1..=33usize {
            let bit = if n.is_power_of_two() { 1 } else { 0 };
            assert!(g.exp.coeff(n).eq_mod(&Elem::from_i64(&k, bit), 1).unwrap(), "n = {n}");
        }
    }
}

#[test]
fn rescale_by_inverse_is_identity() {
    let k = qp_p0(3, 60);
    let p0 = Elem::uniformizer(&k);
    let g = fgl_multiplicative(&k, 10).unwrap();
    let back = g.rescale(&p0, "s").unwrap().rescale(&p0.inv().unwrap(), "1/s").unwrap();
    assert_eq!(back.law.first_mismatch(&g.law, digits(40)).unwrap(), None);
    assert_eq!(back.log.first_mismatch(&g.log, digits(40)).unwrap(), None);
}

#[test]
fn eisenstein_relation_holds() {
    let d = 20;
    let k = quad_ram(80);
    let f = special_lubin_tate(&k, d).unwrap();
    assert!(fgl_eisenstein_relation_check(&f, digits(30)).passed());
    let k = qp_p0(5, 80);
    let f = special_lubin_tate(&k, d).unwrap();
    assert!(fgl_eisenstein_relation_check(&f, digits(30)).passed());
    let k = FieldCtx::qp(3, 80);
    let f = special_lubin_tate(&k, d).unwrap();
    assert!(fgl_eisenstein_relation_check(&f, digits(30)).passed());
}

#[test]
fn additive_type_of_rescaled_laws() {
    let p = 5;
    let k = qp_p0(p, 100);
    let p0 = Elem::uniformizer(&k);
    let gm = fgl_multiplicative(&k, 30).unwrap();
    let gt = gm.rescale(&p0, "p0").unwrap();
    assert!(additive_type_check(&gt, &p0, p).passed());
    let c = additive_type_check(&gm, &p0, p);
    assert!(!c.passed());
    assert_eq!(c.first_failure.unwrap().location, format!("T^{p}"));
}

#[test]
fn iso_from_gm_to_special_law_sends_torsion_to_p0() {
    let d = 30;
    let k = FieldCtx::qp(3, 90);
    let gm = fgl_multiplicative(&k, d).unwrap();
    let lt = special_lubin_tate(&k, d).unwrap();
    let (phi, certs) = fgl_iso(&gm, &lt, digits(40)).unwrap();
    for c in &certs {
        assert!(c.passed(), "{c:?}");
    }
    // z = ζ_3 - 1 solves z² + 3z + 3 = 0 in Q_3(p₀)
    let kk = qp_p0(3, 90);
    let poly: Vec<Elem> = [3i64, 3, 1].iter().map(|&c| Elem::from_i64(&kk, c)).collect();
    let z = hensel_root(&poly, &Elem::uniformizer(&kk)).unwrap();
    let image = phi.map(|c| c.map_into(&kk, &Elem::zero(&kk))).eval(&z);
    // image is a nonzero root of 3T + T³
    let sq = image.mul(&image);
    assert!(sq.eq_mod(&Elem::from_i64(&kk, -3), 14).unwrap());
}

#[test]
fn iso_of_a_law_with_itself_is_identity() {
    let k = FieldCtx::qp(5, 60);
    let f = special_lubin_tate(&k, 12).unwrap();
    let (phi, _) = fgl_iso(&f, &f, digits(30)).unwrap();
    assert_eq!(phi.first_mismatch(&Series::var(&Elem::zero(&k), 12), digits(30)).unwrap(), None);
}

#[test]
fn teichmuller_endomorphism_is_linear() {
    let k = FieldCtx::unramified(3, 2, 80).unwrap();
    let f = special_lubin_tate(&k, 20).unwrap();
    let w = crate::padic::teichmuller_lift(&k, &[0, 1]).unwrap();
    let s = f.endomorphism(&w).unwrap().series;
    let want = Series::monomial(&w, 1, 20);
    assert_eq!(s.first_mismatch(&want, digits(40)).unwrap(), None);
}

#[test]
fn endomorphism_ring_laws_on_random_scalars() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let k = quad_ram(100);
    let f = special_lubin_tate(&k, 14).unwrap();
    let pi = Elem::uniformizer(&k);
    for _ in 0..20 {
        let a = Elem::from_i64(&k, rng.gen_range(-50..50)).add(&pi.mul(&Elem::from_i64(&k, rng.gen_range(-9..9))));
        let b = Elem::from_i64(&k, rng.gen_range(-50..50));
        let c = f.endomorphism_laws(&a, &b, digits(40));
        assert!(c.passed(), "{c:?}");
    }
    let _ = adjoin_root;
}
