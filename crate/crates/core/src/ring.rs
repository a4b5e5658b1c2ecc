//! Coefficient-ring abstraction shared by the series and formal-group code.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::error::Result;

/// Exact rational used for valuations (`ord_p(p) = 1`).
pub type Q = Ratio<i64>;

/// A commutative ring whose elements know how to build their own zero and one.
///
/// Elements carry their ambient context (field, symbol), so constants are
/// produced from an existing element rather than from a global.
pub trait Ring: Clone + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// True for zeros, including zeros known only to finite precision.
    fn is_zero(&self) -> bool;
    /// True only for zeros known exactly; these may be skipped in products.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn from_bigint_like(&self, n: &BigInt) -> Self;

    fn from_i64_like(&self, n: i64) -> Self {
        self.from_bigint_like(&BigInt::from(n))
    }

    fn scale_int(&self, n: &BigInt) -> Self {
        self.mul(&self.from_bigint_like(n))
    }

    fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A ring in which nonzero elements can be inverted (possibly failing when
/// an element is a zero known only to finite precision).
pub trait Field: Ring {
    fn inv(&self) -> Result<Self>;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }
}

/// Rings whose elements have a p-adic valuation and a notion of absolute
/// precision. Used by every integrality certificate.
pub trait Valued: Ring {
    /// Exact `ord_p`, or `None` when the element is a zero (exact or not).
    fn ord(&self) -> Option<Q>;
    /// The element is known modulo `p^abs_prec()`; `i64::MAX` style for exact values.
    fn abs_prec(&self) -> Q;
    /// Lower bound on `ord_p`, valid for zeros as well.
    fn ord_lower(&self) -> Q {
        self.ord().unwrap_or_else(|| self.abs_prec())
    }

    /// `self ≡ other` modulo `p^n`, or an error when the operands are too
    /// imprecise to decide.
    fn eq_mod_p(&self, other: &Self, n: Q) -> Result<bool> {
        let d = self.sub(other);
        match d.ord() {
            Some(v) => Ok(v >= n),
            None if d.abs_prec() >= n => Ok(true),
            None => Err(crate::error::Error::precision(format!(
                "difference known only modulo p^{}",
                d.abs_prec()
            ))),
        }
    }
}
