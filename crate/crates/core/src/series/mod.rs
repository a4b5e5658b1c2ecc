//! Dense truncated power series in one and two variables over any [`Ring`].

pub mod bivariate;
pub mod render;
pub mod sympoly;

pub use bivariate::BiSeries;
pub use sympoly::SymPoly;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring, Valued, Q};

/// `Σ_{n ≤ D} c_n T^n`, exact through degree `D`.
#[derive(Clone, Debug)]
pub struct Series<R> {
    c: Vec<R>,
}

pub(crate) fn mul_acc<R: Ring>(acc: &mut R, a: &R, b: &R) {
    if a.is_exact_zero() || b.is_exact_zero() {
        return;
    }
    *acc = acc.add(&a.mul(b));
}

impl<R: Ring> Series<R> {
    pub fn new(c: Vec<R>) -> Self {
        assert!(!c.is_empty(), "a series needs at least a constant term");
        Series { c }
    }

    pub fn zero(proto: &R, d: usize) -> Self {
        Series { c: vec![proto.zero_like(); d + 1] }
    }

    pub fn one(proto: &R, d: usize) -> Self {
        let mut s = Self::zero(proto, d);
        s.c[0] = proto.one_like();
        s
    }

    /// The variable `T`.
    pub fn var(proto: &R, d: usize) -> Self {
        Self::monomial(&proto.one_like(), 1, d)
    }

    pub fn monomial(c: &R, n: usize, d: usize) -> Self {
        let mut s = Self::zero(c, d);
        if n <= d {
            s.c[n] = c.clone();
        }
        s
    }

    pub fn from_fn(proto: &R, d: usize, f: impl FnMut(usize) -> R) -> Self {
        let _ = proto;
        Series { c: (0..=d).map(f).collect() }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.c[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn set(&mut self, n: usize, v: R) {
        self.c[n] = v;
    }

    pub fn proto(&self) -> R {
        self.c[0].zero_like()
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> Series<S> {
        Series { c: self.c.iter().map(f).collect() }
    }

    /// Keep terms of degree `≤ d`.
    pub fn truncate(&self, d: usize) -> Self {
        let mut c: Vec<R> = self.c.iter().take(d + 1).cloned().collect();
        while c.len() < d + 1 {
            c.push(self.proto());
        }
        Series { c }
    }

    /// Lowest index with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.degree().min(o.degree());
        Series { c: (0..=d).map(|n| self.c[n].add(&o.c[n])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let d = self.degree().min(o.degree());
        Series { c: (0..=d).map(|n| self.c[n].sub(&o.c[n])).collect() }
    }

    pub fn neg(&self) -> Self {
        Series { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, s: &R) -> Self {
        Series { c: self.c.iter().map(|x| if x.is_exact_zero() { x.clone() } else { x.mul(s) }).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let s = self.proto().from_i64_like(n);
        self.scale(&s)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.degree().min(o.degree());
        self.mul_trunc(o, d)
    }

    /// Product keeping degrees `≤ d`.
    pub fn mul_trunc(&self, o: &Self, d: usize) -> Self {
        let proto = self.proto();
        let mut c = vec![proto; d + 1];
        let la = self.degree().min(d);
        for i in 0..=la {
            let a = &self.c[i];
            if a.is_exact_zero() {
                continue;
            }
            for j in 0..=(d - i).min(o.degree()) {
                mul_acc(&mut c[i + j], a, &o.c[j]);
            }
        }
        Series { c }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let d = self.degree();
        let mut base = self.clone();
        let mut acc = Self::one(&self.proto(), d);
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

    /// `[self^0, self^1, …, self^k]`.
    pub fn powers(&self, k: usize) -> Vec<Self> {
        let d = self.degree();
        let mut out = Vec::with_capacity(k + 1);
        out.push(Self::one(&self.proto(), d));
        for i in 1..=k {
            let next = out[i - 1].mul(self);
            out.push(next);
        }
        out
    }

    /// `self(inner(T))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.c[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let d = self.degree().min(inner.degree());
        // Horner from the top; the partial sum at depth n is later multiplied
        // by inner^n, so only degrees ≤ d - n matter there.
        let mut acc = Series::monomial(&self.c[d], 0, 0);
        for n in (0..d).rev() {
            let keep = d - n;
            let mut next = acc.mul_trunc(inner, keep);
            next.c[0] = next.c[0].add(&self.c[n]);
            acc = next;
        }
        Ok(acc.truncate(d))
    }

    /// `self(s·T)`.
    pub fn scale_var(&self, s: &R) -> Self {
        let mut pw = s.one_like();
        let mut c = Vec::with_capacity(self.c.len());
        for x in &self.c {
            c.push(if x.is_exact_zero() { x.clone() } else { x.mul(&pw) });
            pw = pw.mul(s);
        }
        Series { c }
    }

    /// Formal derivative, through degree `D - 1`.
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(&self.proto(), 0);
        }
        Series {
            c: (1..=self.degree())
                .map(|n| {
                    let x = &self.c[n];
                    if x.is_exact_zero() {
                        x.clone()
                    } else {
                        x.scale_int(&BigInt::from(n))
                    }
                })
                .collect(),
        }
    }

    /// Evaluate the truncated polynomial at `x`.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.c[self.degree()].clone();
        for n in (0..self.degree()).rev() {
            acc = acc.mul(x).add(&self.c[n]);
        }
        acc
    }

    /// Whether every coefficient of `self - other` vanishes exactly (in the
    /// sense of [`Ring::is_zero`]).
    pub fn same_as(&self, other: &Self) -> bool {
        self.sub(other).c.iter().all(|x| x.is_zero())
    }
}

impl<R: Field> Series<R> {
    /// `1/self`; the constant term must be invertible.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.degree();
        let a0inv = self.c[0].inv().map_err(|_| Error::NotUnit("constant term".into()))?;
        let mut b = vec![self.proto(); d + 1];
        b[0] = a0inv.clone();
        for n in 1..=d {
            let mut s = self.proto();
            for k in 1..=n {
                mul_acc(&mut s, &self.c[k], &b[n - k]);
            }
            b[n] = s.mul(&a0inv).neg();
        }
        Ok(Series { c: b })
    }

    /// `∫ self`, zero constant term, through degree `D + 1`.
    pub fn integral(&self) -> Result<Self> {
        let proto = self.proto();
        let mut c = vec![proto.clone()];
        for (n, x) in self.c.iter().enumerate() {
            c.push(if x.is_exact_zero() { x.clone() } else { x.div(&proto.from_i64_like(n as i64 + 1))? });
        }
        Ok(Series { c })
    }

    /// Logarithmic derivative `a'/a` (through degree `D - 1`).
    pub fn dlog(&self) -> Result<Self> {
        let inv = self.inverse()?;
        let d = self.derivative();
        Ok(d.mul(&inv.truncate(d.degree())))
    }

    /// Compositional inverse by Lagrange inversion:
    /// `b_n = (1/n) [T^{n-1}] (T/a)^n`.
    pub fn reverse(&self) -> Result<Self> {
        if !self.c[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let d = self.degree();
        if d < 1 {
            return Ok(self.clone());
        }
        if self.c[1].inv().is_err() {
            return Err(Error::NotUnit("linear coefficient".into()));
        }
        let shifted = Series { c: self.c[1..].to_vec() };
        let h = shifted.inverse()?;
        let proto = self.proto();
        let mut out = vec![proto.clone(); d + 1];
        let mut hp = Series::one(&proto, d - 1);
        for n in 1..=d {
            hp = hp.mul(&h);
            let c = &hp.c[n - 1];
            out[n] = if c.is_exact_zero() { c.clone() } else { c.div(&proto.from_i64_like(n as i64))? };
        }
        Ok(Series { c: out })
    }
}

impl<R: Valued> Series<R> {
    /// `ord_p` of each coefficient; `None` marks zeros.
    pub fn valuation_profile(&self) -> Vec<Option<Q>> {
        self.c.iter().map(|x| x.ord()).collect()
    }

    /// First index (from `from`) whose coefficient has `ord_p < bound`.
    pub fn first_below(&self, bound: Q, from: usize) -> Option<usize> {
        (from..=self.degree()).find(|&n| self.c[n].ord_lower() < bound)
    }

    /// Coefficientwise congruence modulo `p^n`; returns the first offending
    /// index, or a precision error if a coefficient cannot be decided.
    pub fn first_mismatch(&self, other: &Self, n: Q) -> Result<Option<usize>> {
        let d = self.degree().min(other.degree());
        for k in 0..=d {
            if !self.c[k].eq_mod_p(&other.c[k], n)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// Binomial coefficients `C(n, k)` for `n ≤ d`.
pub fn binomials(d: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut row = vec![BigInt::from(1); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests;
