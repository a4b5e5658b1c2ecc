//! User-facing p-adic scalars: a valuation, a unit approximant and a precision.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::field::{Elem, FieldCtx};
use crate::error::{Error, Result};
use crate::ring::{Field, Ring, Valued, Q};

pub fn fmt_q(q: &Q) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn ser_q<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(q))
}

/// Base-`p` digits of `0 ≤ n < p^len`, most significant first.
pub fn digit_string(n: &BigInt, p: u64, len: usize) -> String {
    let pb = BigInt::from(p);
    let mut n = n.mod_floor(&pb.pow(len as u32));
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        let (q, r) = n.div_rem(&pb);
        digits.push(r.to_u64().unwrap());
        n = q;
    }
    digits.reverse();
    if p <= 36 {
        digits.iter().map(|&d| std::char::from_digit(d as u32, 36).unwrap()).collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// A scalar in a local field with exact valuation bookkeeping.
#[derive(Debug, Clone)]
pub struct PadicScalar {
    pub elem: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl PadicScalar {
    pub fn new(elem: Elem) -> Self {
        PadicScalar { elem }
    }

    /// `p^val · unit` in `Q_p` with `n_digits` digits of precision.
    pub fn from_parts(p: u64, val: i64, unit: i64, n_digits: i64) -> Result<Self> {
        let ctx = FieldCtx::qp(p, n_digits);
        let u = BigInt::from(unit);
        if u.is_multiple_of(&BigInt::from(p)) {
            return Err(Error::NotUnit(format!("{unit} is divisible by {p}")));
        }
        let e = Elem::from_coords(&ctx, val, val + n_digits, vec![u]);
        Ok(PadicScalar { elem: e })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.elem.ctx()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.elem.is_exact_zero()
    }

    pub fn valuation(&self) -> Option<Q> {
        self.elem.ord()
    }

    pub fn precision(&self) -> i64 {
        self.elem.rel_prec()
    }

    pub fn lost_digits(&self) -> i64 {
        self.elem.lost_digits()
    }

    /// Base-`p` digits of the unit part (per `Q_p`-coordinate in extensions).
    pub fn unit_digits(&self) -> Vec<String> {
        let len = self.precision().max(0) as usize;
        self.elem
            .raw_coords()
            .iter()
            .map(|c| digit_string(c, self.ctx().p, len))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        if self.is_exact_zero() {
            return json!({"val": "inf", "unit": "0", "prec": "inf"});
        }
        if self.elem.is_zero() {
            return json!({"val": "inf", "unit": "0", "prec": self.elem.prec()});
        }
        let val = self.valuation().unwrap();
        let digits = self.unit_digits();
        let unit = if self.ctx().degree() == 1 {
            Value::String(digits[0].clone())
        } else {
            json!(digits)
        };
        let mut v = json!({"val": fmt_q(&val), "unit": unit, "prec": self.elem.prec()});
        if self.ctx().degree() > 1 {
            v["shift"] = json!(self.elem.shift());
        }
        v
    }
}

impl Serialize for PadicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Arithmetic with cancellation tracking; a result with no significant digit
/// left is reported as exhausted precision rather than returned as zero.
pub fn scalar_arith(a: &PadicScalar, b: &PadicScalar, op: ScalarOp) -> Result<PadicScalar> {
    let r = match op {
        ScalarOp::Add => a.elem.add(&b.elem),
        ScalarOp::Sub => a.elem.sub(&b.elem),
        ScalarOp::Mul => a.elem.mul(&b.elem),
        ScalarOp::Div => a.elem.div(&b.elem)?,
    };
    if r.is_zero() && !r.is_exact_zero() {
        return Err(Error::precision(format!("result known only modulo p^{}", r.prec())));
    }
    Ok(PadicScalar::new(r))
}

/// An exact integer as a scalar.
pub fn int_scalar(ctx: &Arc<FieldCtx>, n: i64) -> PadicScalar {
    if n == 0 {
        return PadicScalar::new(Elem::zero(ctx));
    }
    PadicScalar::new(Elem::from_int(ctx, &BigInt::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carry_example() {
        let a = PadicScalar::from_parts(3, 0, 1, 10).unwrap();
        let b = PadicScalar::from_parts(3, 0, 2, 10).unwrap();
        let c = scalar_arith(&a, &b, ScalarOp::Add).unwrap();
        assert_eq!(c.valuation(), Some(Q::from_integer(1)));
        assert!(c.unit_digits()[0].ends_with('1'));
    }

    #[test]
    fn cancellation_example() {
        let a = PadicScalar::from_parts(3, 0, 82, 5).unwrap();
        let b = PadicScalar::from_parts(3, 0, 1, 5).unwrap();
        let c = scalar_arith(&a, &b, ScalarOp::Sub).unwrap();
        assert_eq!(c.valuation(), Some(Q::from_integer(4)));
        assert_eq!(c.lost_digits(), 4);
        assert_eq!(c.precision(), 1);
        assert_eq!(c.to_json()["unit"], "1");
        // total cancellation
        let d = scalar_arith(&b, &b, ScalarOp::Sub);
        assert!(matches!(d, Err(Error::PrecisionExhausted(_))));
        let z = PadicScalar::new(Elem::zero(b.ctx()));
        assert_eq!(scalar_arith(&b, &z, ScalarOp::Div).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn json_shape() {
        let a = PadicScalar::from_parts(5, 2, 3, 4).unwrap();
        let v = a.to_json();
        assert_eq!(v["val"], "2");
        assert_eq!(v["unit"], "0003");
        assert_eq!(v["prec"], 6);
    }
}
