use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::padic::{Elem, FieldCtx};
use crate::ring::Q;

fn k(p: u64) -> Arc<FieldCtx> {
    FieldCtx::qp(p, 40)
}

fn rat(ctx: &Arc<FieldCtx>, r: &BigRational) -> Elem {
    Elem::from_ratio(ctx, r.numer(), r.denom()).unwrap()
}

fn ints(ctx: &Arc<FieldCtx>, v: &[i64]) -> Series<Elem> {
    Series::new(v.iter().map(|&x| Elem::from_i64(ctx, x)).collect())
}

fn assert_series_eq(a: &Series<Elem>, b: &Series<Elem>, digits: i64) {
    assert_eq!(a.first_mismatch(b, Q::from_integer(digits)).unwrap(), None, "{a:?} vs {b:?}");
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

#[test]
fn basic_products() {
    let c = k(5);
    let a = ints(&c, &[1, 1, 0, 0]);
    let b = ints(&c, &[1, -1, 0, 0]);
    assert_series_eq(&a.mul(&b), &ints(&c, &[1, 0, -1, 0]), 30);
    let t = Series::var(&Elem::zero(&c), 4);
    let t4 = Series::monomial(&Elem::one(&c), 4, 4);
    assert!(t.mul(&t4).coeffs().iter().all(|x| x.is_zero()));
}

#[test]
fn exp_of_log_is_identity() {
    let c = k(7);
    let d = 20;
    // log(1+T) and e^T - 1 from rational oracles
    let log = Series::from_fn(&Elem::zero(&c), d, |n| {
        if n == 0 {
            Elem::zero(&c)
        } else {
            let s = if n % 2 == 1 { 1 } else { -1 };
            rat(&c, &BigRational::new(BigInt::from(s), BigInt::from(n)))
        }
    });
    let exp = Series::from_fn(&Elem::zero(&c), d, |n| {
        if n == 0 {
            Elem::zero(&c)
        } else {
            rat(&c, &BigRational::new(BigInt::one(), factorial(n)))
        }
    });
    let id = Series::var(&Elem::zero(&c), d);
    assert_series_eq(&exp.compose(&log).unwrap(), &id, 25);
    assert_series_eq(&log.reverse().unwrap(), &exp, 25);
}

#[test]
fn reverse_of_t_plus_t2_is_signed_catalan() {
    let c = k(3);
    let d = 12;
    let a = ints(&c, &{
        let mut v = vec![0i64; d + 1];
        v[1] = 1;
        v[2] = 1;
        v
    });
    let b = a.reverse().unwrap();
    // oracle: (-1)^{n-1} C_{n-1}, C_m = binom(2m, m)/(m+1)
    for n in 1..=d {
        let m = n - 1;
        let cat = factorial(2 * m) / (factorial(m) * factorial(m) * BigInt::from(m + 1));
        let v = if m % 2 == 0 { cat } else { -cat };
        assert!(b.coeff(n).eq_mod(&Elem::from_int(&c, &v), 30).unwrap(), "n = {n}");
    }
    let id = Series::var(&Elem::zero(&c), d);
    assert_series_eq(&a.compose(&b).unwrap(), &id, 30);
    assert_series_eq(&b.compose(&a).unwrap(), &id, 30);
}

#[test]
fn compose_rejects_constant_term() {
    let c = k(3);
    let a = ints(&c, &[0, 1, 1]);
    assert!(matches!(a.compose(&ints(&c, &[1, 1, 0])), Err(crate::Error::NonzeroConstant)));
    assert!(ints(&c, &[0, 0, 1]).reverse().is_err());
}

#[test]
fn dlog_of_one_plus_t_is_geometric() {
    let c = k(5);
    let a = ints(&c, &[1, 1, 0, 0, 0, 0]);
    let g = a.dlog().unwrap();
    assert_series_eq(&g, &ints(&c, &[1, -1, 1, -1, 1]), 30);
}

#[test]
fn bilinear_substitution_matches_direct_expansion() {
    // F = X + Y + XY, X -> sX, Y -> sY with s = 3
    let c = k(5);
    let d = 5;
    let z = Elem::zero(&c);
    let mut f = BiSeries::zero(&z, d);
    f.set(1, 0, Elem::one(&c));
    f.set(0, 1, Elem::one(&c));
    f.set(1, 1, Elem::one(&c));
    let s = Series::monomial(&Elem::from_i64(&c, 3), 1, d);
    let g = f.bilinear(&s, &s);
    for (i, j) in g.indices() {
        let expect = match (i, j) {
            (1, 0) | (0, 1) => 3,
            (1, 1) => 9,
            _ => 0,
        };
        assert!(g.get(i, j).eq_mod(&Elem::from_i64(&c, expect), 30).unwrap());
    }
}

#[test]
fn subst_sum_agrees_with_horner_composition() {
    let c = k(7);
    let h = ints(&c, &[0, 1, 2, -1, 3, 0, 1, 5, 2]);
    let a = ints(&c, &[0, 1, 4, 0, 1, 0, 0, 2, 1]);
    let b = ints(&c, &[0, 2, 0, 1, 0, 3, 0, 0, 1]);
    let fast = BiSeries::subst_sum(&h, &a, &b);
    let inner = BiSeries::from_x(&a).add(&BiSeries::from_y(&b));
    let slow = BiSeries::compose_outer(&h, &inner);
    assert_eq!(fast.first_mismatch(&slow, Q::from_integer(30)).unwrap(), None);
}

#[test]
fn multiplicative_law_is_associative() {
    let c = k(3);
    let z = Elem::zero(&c);
    let mut f = BiSeries::zero(&z, 10);
    f.set(1, 0, Elem::one(&c));
    f.set(0, 1, Elem::one(&c));
    f.set(1, 1, Elem::one(&c));
    assert_eq!(bivariate::associativity_defect(&f, 10, Q::from_integer(30)).unwrap(), None);
    // X + Y + XY^2 is not associative
    f.set(1, 1, Elem::zero(&c));
    f.set(1, 2, Elem::one(&c));
    assert!(bivariate::associativity_defect(&f, 10, Q::from_integer(30)).unwrap().is_some());
}

#[test]
fn valuation_profile_reports_exact_orders() {
    let c = k(3);
    let a = ints(&c, &[0, 3, 0, 18, 1]);
    let v = a.valuation_profile();
    assert_eq!(v[0], None);
    assert_eq!(v[1], Some(Q::from_integer(1)));
    assert_eq!(v[3], Some(Q::from_integer(2)));
    assert_eq!(v[4], Some(Q::from_integer(0)));
}

#[test]
fn symbolic_coefficients() {
    let c = k(5);
    let om: Arc<str> = Arc::from("Ω₀");
    let x = SymPoly::symbol_var(&om, &Elem::zero(&c));
    let one = x.one_like();
    let a = x.add(&one).mul(&x.sub(&one));
    assert_eq!(a.coeff(2).to_small_int(), Some(BigInt::from(1)));
    assert_eq!(a.coeff(0).to_small_int(), Some(BigInt::from(-1)));
    assert!(a.coeff(1).is_zero());
    let inv = x.inv().unwrap();
    assert_eq!(inv.low(), -1);
    assert!(a.inv().is_err());
    let tw = a.twist(&Elem::from_i64(&c, 2)).unwrap();
    assert_eq!(tw.coeff(2).to_small_int(), Some(BigInt::from(4)));
}

fn small_series(c: &Arc<FieldCtx>, v: Vec<i64>) -> Series<Elem> {
    ints(c, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms(a in prop::collection::vec(-50i64..50, 9),
                   b in prop::collection::vec(-50i64..50, 9),
                   d in prop::collection::vec(-50i64..50, 9)) {
        let c = k(5);
        let (a, b, d) = (small_series(&c, a), small_series(&c, b), small_series(&c, d));
        let n = Q::from_integer(35);
        prop_assert_eq!(a.mul(&b).mul(&d).first_mismatch(&a.mul(&b.mul(&d)), n).unwrap(), None);
        prop_assert_eq!(a.mul(&b).first_mismatch(&b.mul(&a), n).unwrap(), None);
        prop_assert_eq!(a.mul(&b.add(&d)).first_mismatch(&a.mul(&b).add(&a.mul(&d)), n).unwrap(), None);
    }

    #[test]
    fn convolution_oracle(a in prop::collection::vec(-1000i64..1000, 10),
                          b in prop::collection::vec(-1000i64..1000, 10)) {
        let c = k(7);
        let prod = small_series(&c, a.clone()).mul(&small_series(&c, b.clone()));
        for n in 0..10 {
            let s: i64 = (0..=n).map(|i| a[i] * b[n - i]).sum();
            prop_assert!(prod.coeff(n).eq_mod(&Elem::from_i64(&c, s), 35).unwrap());
        }
    }

    #[test]
    fn reverse_two_sided_and_compose_associative(
        a in prop::collection::vec(-20i64..20, 8),
        g in prop::collection::vec(-20i64..20, 8),
        h in prop::collection::vec(-20i64..20, 8),
        unit in 1i64..6)
    {
        let c = k(7);
        let mut av = a.clone();
        av[0] = 0;
        av[1] = unit;
        let a = small_series(&c, av);
        let b = a.reverse().unwrap();
        let id = Series::var(&Elem::zero(&c), 7);
        let n = Q::from_integer(25);
        prop_assert_eq!(a.compose(&b).unwrap().first_mismatch(&id, n).unwrap(), None);
        prop_assert_eq!(b.compose(&a).unwrap().first_mismatch(&id, n).unwrap(), None);
        let mut gv = g.clone();
        gv[0] = 0;
        let mut hv = h.clone();
        hv[0] = 0;
        let (g, h) = (small_series(&c, gv), small_series(&c, hv));
        let l = a.compose(&g).unwrap().compose(&h).unwrap();
        let r = a.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(l.first_mismatch(&r, n).unwrap(), None);
    }

    #[test]
    fn product_profile_dominates_min_convolution(
        a in prop::collection::vec(-200i64..200, 8),
        b in prop::collection::vec(-200i64..200, 8))
    {
        let c = k(3);
        let (sa, sb) = (small_series(&c, a), small_series(&c, b));
        let (pa, pb) = (sa.valuation_profile(), sb.valuation_profile());
        let pr = sa.mul(&sb).valuation_profile();
        for n in 0..8 {
            let bound = (0..=n)
                .filter_map(|i| match (pa[i], pb[n - i]) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                })
                .min();
            if let (Some(v), Some(bd)) = (pr[n], bound) {
                prop_assert!(v >= bd);
            }
        }
    }
}

#[test]
fn exact_zero_is_recognised() {
    let c = k(3);
    let z: Series<Elem> = Series::zero(&Elem::zero(&c), 3);
    assert!(z.coeffs().iter().all(|x| x.is_exact_zero()));
    let _ = BigRational::zero();
}

