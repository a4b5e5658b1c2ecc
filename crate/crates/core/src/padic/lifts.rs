//! Teichmuller representatives, Newton lifting and the different.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring, Valued, Q};

use super::field::{Elem, FieldCtx};

/// The root of unity of order dividing `q - 1` reducing to `residue`,
/// found as the fixed point of `x ↦ x^q`.
pub fn teichmuller_lift(ctx: &Arc<FieldCtx>, residue: &[u64]) -> Result<Elem> {
    if ctx.residue.is_zero(residue) {
        return Err(Error::ZeroResidue);
    }
    let r = ctx.residue.normalize(residue);
    if r == ctx.residue.one() {
        return Ok(Elem::one(ctx));
    }
    let q = ctx.q();
    let mut x = Elem::lift_residue(ctx, &r);
    for _ in 0..ctx.cap + 2 {
        let y = x.pow(q);
        let settled = y.sub(&x).is_zero();
        x = y;
        if settled {
            return Ok(x);
        }
    }
    Ok(x)
}

/// Evaluate a polynomial (low to high) by Horner's rule.
pub fn poly_eval<R: Ring>(poly: &[R], x: &R) -> R {
    let mut acc = poly.last().expect("nonempty polynomial").clone();
    for c in poly.iter().rev().skip(1) {
        acc = acc.mul(x).add(c);
    }
    acc
}

pub fn poly_derivative<R: Ring>(poly: &[R]) -> Vec<R> {
    if poly.len() <= 1 {
        return vec![poly[0].zero_like()];
    }
    poly.iter().enumerate().skip(1).map(|(i, c)| c.from_i64_like(i as i64).mul(c)).collect()
}

/// Newton iteration from `seed`; requires `ord P(seed) > 2 ord P'(seed)`.
pub fn hensel_root(poly: &[Elem], seed: &Elem) -> Result<Elem> {
    let dp = poly_derivative(poly);
    let f0 = poly_eval(poly, seed);
    if f0.is_zero() {
        return Ok(seed.clone());
    }
    let d0 = poly_eval(&dp, seed);
    let dv = d0.ord().ok_or(Error::HenselFailure)?;
    if f0.ord().unwrap() <= dv * Q::from_integer(2) {
        return Err(Error::HenselFailure);
    }
    let mut x = seed.clone();
    for _ in 0..80 {
        let fx = poly_eval(poly, &x);
        if fx.is_zero() {
            return Ok(x);
        }
        let step = fx.div(&poly_eval(&dp, &x))?;
        x = x.sub(&step);
    }
    Ok(x)
}

/// A fractional ideal recorded by the valuation of a generator.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FractionalIdealValuation {
    pub generator_label: String,
    #[serde(serialize_with = "crate::padic::scalar::ser_q")]
    pub ord_p: Q,
}

impl FractionalIdealValuation {
    pub fn new(label: impl Into<String>, ord_p: Q) -> Self {
        FractionalIdealValuation { generator_label: label.into(), ord_p }
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::new(format!("{}·{}", self.generator_label, other.generator_label), self.ord_p + other.ord_p)
    }

    pub fn inverse(&self) -> Self {
        Self::new(format!("({})^-1", self.generator_label), -self.ord_p)
    }
}

/// `ord_p(E'(ϖ))` for the Eisenstein polynomial `E` of the field.
pub fn different_valuation(ctx: &Arc<FieldCtx>) -> FractionalIdealValuation {
    let label = format!("D_{}", ctx.label);
    if ctx.e == 1 {
        return FractionalIdealValuation::new(label, Q::from_integer(0));
    }
    let coeffs: Vec<Elem> = ctx.eisenstein.iter().map(|w| Elem::from_w(ctx, w)).collect();
    let d = poly_eval(&poly_derivative(&coeffs), &Elem::uniformizer(ctx));
    FractionalIdealValuation::new(label, d.ord().expect("separable Eisenstein polynomial"))
}
