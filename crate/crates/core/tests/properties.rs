use fgl_core::chromatic::{kn_group_law, GradedSeries};
use fgl_core::formal_group::{fgl_eisenstein_relation_check, special_lubin_tate};
use fgl_core::lubin_tate::random_integer;
use fgl_core::padic::descriptor::{Coeff, FieldDescriptor, PrecisionProfile};
use fgl_core::padic::{Elem, FieldCtx};
use fgl_core::ring::{Field, Ring, Valued, Q};
use fgl_core::series::render::Render;
use fgl_core::suites::run_suite;
use proptest::prelude::*;
use rand::SeedableRng;

/// `x² + p·u` over `Q_p`.
fn quad_ram(p: u64, u: i64) -> FieldDescriptor {
    FieldDescriptor {
        p,
        f: 1,
        e: 2,
        eisenstein: vec![Coeff::Int(p as i64 * u), Coeff::Int(0), Coeff::Int(1)],
        label: format!("Q_{p}(sqrt(-{}))", p as i64 * u),
        unramified: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn valuation_is_additive_in_ramified_fields(a in -500i64..500, b in -500i64..500, k in 0u32..3) {
        prop_assume!(a != 0 && b != 0);
        let l = quad_ram(3, 1).build(40).unwrap();
        let pi = Elem::uniformizer(&l);
        let x = Elem::from_i64(&l, a).mul(&pi.pow(k as u64));
        let y = Elem::from_i64(&l, b);
        let prod = x.mul(&y);
        prop_assert_eq!(prod.ord().unwrap(), x.ord().unwrap() + y.ord().unwrap());
        prop_assert!(prod.div(&y).unwrap().eq_mod(&x, 30).unwrap());
    }

    #[test]
    fn random_eisenstein_fields_give_integral_laws(u in 1i64..20, p in prop::sample::select(vec![3u64, 5, 7])) {
        prop_assume!(u % p as i64 != 0);
        let l = quad_ram(p, u).build(40).unwrap();
        let f = special_lubin_tate(&l, 12).unwrap();
        prop_assert!(f.integrality().passed());
        prop_assert!(fgl_eisenstein_relation_check(&f, Q::from_integer(20)).passed());
    }

    #[test]
    fn endomorphisms_form_a_ring(seed in 0u64..1000) {
        let l = quad_ram(3, 1).build(40).unwrap();
        let f = special_lubin_tate(&l, 10).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_integer(&l, &mut rng), random_integer(&l, &mut rng));
        prop_assert!(f.endomorphism_laws(&a, &b, Q::from_integer(20)).passed());
    }

    #[test]
    fn kn_laws_are_homogeneous(p in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..3) {
        let q = (p as usize).pow(n);
        prop_assume!(q <= 9);
        let qp = FieldCtx::qp(p, 50);
        let (f, certs) = kn_group_law(&qp, n, q + 3, Q::from_integer(20)).unwrap();
        prop_assert!(certs.iter().all(|c| c.passed()));
        prop_assert_eq!(GradedSeries::new(f.log.clone()).homogeneous_degree(), Some(-2));
    }
}

/// Raising the working precision by 16 digits leaves every coefficient
/// unchanged modulo `p^n_digits`.
#[test]
fn results_are_stable_under_extra_precision() {
    for d in [FieldDescriptor::qp(5), quad_ram(3, 1)] {
        let pr = PrecisionProfile::new(d.p, 24, 20).unwrap();
        let lo = d.build(pr.working_cap()).unwrap();
        let hi = d.build(pr.working_cap() + 16).unwrap();
        let (a, b) = (special_lubin_tate(&lo, 20).unwrap(), special_lubin_tate(&hi, 20).unwrap());
        for m in 1..=20 {
            for (x, y) in [(a.log.coeff(m), b.log.coeff(m)), (a.exp.coeff(m), b.exp.coeff(m))] {
                let (x, y) = (x.truncate_prec(pr.n_digits), y.truncate_prec(pr.n_digits));
                assert_eq!(x.to_json(), y.to_json(), "{} T^{m}", d.label);
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let d = FieldDescriptor::qp(3);
    let pr = PrecisionProfile::new(3, 32, 16).unwrap();
    let a = serde_json::to_string(&run_suite("kappa-coproduct", &d, &pr, false).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite("kappa-coproduct", &d, &pr, false).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn field_inverse_round_trip() {
    let l = FieldCtx::unramified(3, 2, 40).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let x = random_integer(&l, &mut rng);
        if x.is_zero() {
            continue;
        }
        assert!(x.mul(&x.inv().unwrap()).eq_mod(&Elem::one(&l), 30).unwrap());
    }
}
