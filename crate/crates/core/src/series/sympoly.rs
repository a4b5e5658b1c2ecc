//! Laurent polynomials in one named symbol (`Ω₀`, `γ`, `u`, …) over a ring.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring, Valued, Q};

/// `Σ_k c_k s^{low + k}`.
#[derive(Clone)]
pub struct SymPoly<R> {
    symbol: Arc<str>,
    low: i64,
    c: Vec<R>,
    proto: R,
}

impl<R: Ring> fmt::Debug for SymPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymPoly[{}; low={}] {:?}", self.symbol, self.low, self.c)
    }
}

impl<R: Ring> SymPoly<R> {
    pub fn constant(symbol: &Arc<str>, c: R) -> Self {
        let proto = c.zero_like();
        let mut s = SymPoly { symbol: symbol.clone(), low: 0, c: vec![c], proto };
        s.trim();
        s
    }

    /// `c · s^k`.
    pub fn monomial(symbol: &Arc<str>, c: R, k: i64) -> Self {
        let proto = c.zero_like();
        let mut s = SymPoly { symbol: symbol.clone(), low: k, c: vec![c], proto };
        s.trim();
        s
    }

    /// The symbol itself.
    pub fn symbol_var(symbol: &Arc<str>, proto: &R) -> Self {
        Self::monomial(symbol, proto.one_like(), 1)
    }

    pub fn from_coeffs(symbol: &Arc<str>, proto: &R, low: i64, c: Vec<R>) -> Self {
        let mut s = SymPoly { symbol: symbol.clone(), low, c, proto: proto.zero_like() };
        s.trim();
        s
    }

    pub fn symbol(&self) -> &Arc<str> {
        &self.symbol
    }

    /// Lowest stored exponent.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Coefficient of `s^k`.
    pub fn coeff(&self, k: i64) -> R {
        let i = k - self.low;
        if i < 0 || i as usize >= self.c.len() {
            self.proto.clone()
        } else {
            self.c[i as usize].clone()
        }
    }

    /// `(exponent, coefficient)` pairs, exact zeros omitted.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_exact_zero())
            .map(move |(i, x)| (self.low + i as i64, x))
    }

    /// Exponent range `[min, max]` of stored terms.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms().map(|(k, _)| k);
        let first = it.next()?;
        let last = it.last().unwrap_or(first);
        Some((first, last))
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_exact_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| x.is_exact_zero()).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i64;
        }
        if self.c.is_empty() {
            self.low = 0;
        }
    }

    pub fn map_coeffs<S: Ring>(&self, proto: &S, mut f: impl FnMut(&R) -> S) -> SymPoly<S> {
        let c = self.c.iter().map(&mut f).collect();
        SymPoly::from_coeffs(&self.symbol, proto, self.low, c)
    }

    /// Replace `s` by `m·s` (coefficient of `s^k` gets multiplied by `m^k`).
    pub fn twist(&self, m: &R) -> Result<Self>
    where
        R: Field,
    {
        let mut c = Vec::with_capacity(self.c.len());
        for (i, x) in self.c.iter().enumerate() {
            let k = self.low + i as i64;
            let f = if k >= 0 { m.pow(k as u64) } else { m.inv()?.pow((-k) as u64) };
            c.push(if x.is_exact_zero() { x.clone() } else { x.mul(&f) });
        }
        Ok(SymPoly::from_coeffs(&self.symbol, &self.proto, self.low, c))
    }

    /// Evaluate at `s = v` (non-negative exponents only unless `v` is invertible).
    pub fn eval(&self, v: &R) -> Result<R>
    where
        R: Field,
    {
        let mut acc = self.proto.clone();
        for (k, x) in self.terms() {
            let f = if k >= 0 { v.pow(k as u64) } else { v.inv()?.pow((-k) as u64) };
            acc = acc.add(&x.mul(&f));
        }
        Ok(acc)
    }

    /// True if some stored term has a negative exponent.
    pub fn has_negative_powers(&self) -> bool {
        self.terms().any(|(k, _)| k < 0)
    }
}

impl<R: Ring> Ring for SymPoly<R> {
    fn zero_like(&self) -> Self {
        SymPoly { symbol: self.symbol.clone(), low: 0, c: Vec::new(), proto: self.proto.clone() }
    }

    fn one_like(&self) -> Self {
        SymPoly::constant(&self.symbol, self.proto.one_like())
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    fn is_exact_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        if rhs.c.is_empty() {
            return self.clone();
        }
        if self.c.is_empty() {
            return rhs.clone();
        }
        let low = self.low.min(rhs.low);
        let high = (self.low + self.c.len() as i64).max(rhs.low + rhs.c.len() as i64);
        let c = (low..high)
            .map(|k| {
                let a = self.get(k);
                let b = rhs.get(k);
                match (a, b) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => self.proto.clone(),
                }
            })
            .collect();
        SymPoly::from_coeffs(&self.symbol, &self.proto, low, c)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn neg(&self) -> Self {
        SymPoly {
            symbol: self.symbol.clone(),
            low: self.low,
            c: self.c.iter().map(|x| x.neg()).collect(),
            proto: self.proto.clone(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.c.is_empty() || rhs.c.is_empty() {
            return self.zero_like();
        }
        let mut c = vec![self.proto.clone(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                super::mul_acc(&mut c[i + j], a, b);
            }
        }
        SymPoly::from_coeffs(&self.symbol, &self.proto, self.low + rhs.low, c)
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        SymPoly::constant(&self.symbol, self.proto.from_bigint_like(n))
    }

    fn scale_int(&self, n: &BigInt) -> Self {
        let s = self.proto.from_bigint_like(n);
        SymPoly {
            symbol: self.symbol.clone(),
            low: self.low,
            c: self.c.iter().map(|x| if x.is_exact_zero() { x.clone() } else { x.mul(&s) }).collect(),
            proto: self.proto.clone(),
        }
    }
}

impl<R: Ring> SymPoly<R> {
    fn get(&self, k: i64) -> Option<&R> {
        let i = k - self.low;
        if i < 0 {
            None
        } else {
            self.c.get(i as usize)
        }
    }
}

impl<R: Field> Field for SymPoly<R> {
    /// Only monomials `c·s^k` with `c` invertible are units.
    fn inv(&self) -> Result<Self> {
        let terms: Vec<(i64, &R)> = self.terms().collect();
        match terms.as_slice() {
            [] => Err(Error::DivisionByZero),
            [(k, c)] => Ok(SymPoly::monomial(&self.symbol, c.inv()?, -k)),
            _ => Err(Error::NotUnit(format!("polynomial in {} with several terms", self.symbol))),
        }
    }
}

impl<R: Valued> Valued for SymPoly<R> {
    /// Gauss valuation: the least `ord_p` among the coefficients.
    fn ord(&self) -> Option<Q> {
        self.c.iter().filter_map(|x| x.ord()).min()
    }

    fn abs_prec(&self) -> Q {
        self.c
            .iter()
            .map(|x| x.abs_prec())
            .min()
            .unwrap_or_else(|| self.proto.abs_prec())
    }

    fn ord_lower(&self) -> Q {
        self.c
            .iter()
            .map(|x| x.ord_lower())
            .min()
            .unwrap_or_else(|| self.proto.abs_prec())
    }

    fn eq_mod_p(&self, other: &Self, n: Q) -> Result<bool> {
        let d = self.sub(other);
        for x in &d.c {
            if !x.eq_mod_p(&x.zero_like(), n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
