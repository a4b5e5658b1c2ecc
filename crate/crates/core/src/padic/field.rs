//! Finite extensions `K = W(F_q)[ϖ]/(E(ϖ))` of `Q_p` with `E` Eisenstein over
//! `W(F_q)`, and their elements at capped relative precision.
//!
//! An element is stored as `p^shift · Σ c_{i,j} t^j ϖ^i` where the integers
//! `c_{i,j}` are reduced modulo `p^(prec - shift)`; `t` is the class of the
//! unramified generator and `ϖ` the uniformizer. The absolute precision `prec`
//! means the element is known modulo `p^prec · O_K`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Zero};
use rug::integer::Order;
use rug::ops::RemRoundingAssign;
use rug::Integer;

use super::residue::{default_modulus, ResidueField};
use crate::error::{Error, Result};
use crate::ring::{Field, Ring, Valued, Q};

/// Sentinel absolute precision of exact values.
pub const EXACT: i64 = 1 << 40;

/// `ord_p(n)` of a nonzero integer.
pub fn int_ord(n: &BigInt, p: &BigInt) -> i64 {
    assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub(crate) fn to_z(b: &BigInt) -> Integer {
    let z = Integer::from_digits(&b.magnitude().to_u64_digits(), Order::Lsf);
    if b.sign() == Sign::Minus {
        -z
    } else {
        z
    }
}

pub(crate) fn to_big(z: &Integer) -> BigInt {
    let mag = BigUint::new(z.to_digits::<u32>(Order::Lsf));
    match z.cmp0() {
        Ordering::Less => BigInt::from_biguint(Sign::Minus, mag),
        _ => BigInt::from_biguint(Sign::Plus, mag),
    }
}

fn z_ord(n: &Integer, p: u32) -> i64 {
    debug_assert!(*n != 0);
    if !n.is_divisible_u(p) {
        return 0;
    }
    let mut n = n.clone();
    let mut v = 0;
    while n.is_divisible_u(p) {
        n.div_exact_u_mut(p);
        v += 1;
    }
    v
}

thread_local! {
    static SCRATCH: RefCell<Vec<Integer>> = const { RefCell::new(Vec::new()) };
}

/// Multiplication context for a local field.
pub struct FieldCtx {
    pub p: u64,
    pub pb: BigInt,
    p32: u32,
    /// Residue degree.
    pub f: usize,
    /// Ramification index over `Q_p`.
    pub e: usize,
    /// Monic lift of the residue-field modulus, low to high, length `f + 1`.
    pub unramified: Vec<BigInt>,
    unr: Vec<Integer>,
    /// Eisenstein polynomial over `W`, low to high; each coefficient has `f` integer coordinates.
    pub eisenstein: Vec<Vec<BigInt>>,
    /// `ϖ^e = Σ_{i<e} reduce[i] ϖ^i`.
    reduce: Vec<Vec<Integer>>,
    /// Working relative precision in p-adic digits.
    pub cap: i64,
    pub label: String,
    pub residue: ResidueField,
    pow_cache: Vec<Integer>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({}, p={}, f={}, e={}, cap={})", self.label, self.p, self.f, self.e, self.cap)
    }
}

impl FieldCtx {
    /// Build a field from the residue modulus (monic over `Z`, degree `f`) and
    /// an Eisenstein polynomial with coefficients in `W`.
    pub fn new(
        p: u64,
        unramified: Vec<BigInt>,
        eisenstein: Vec<Vec<BigInt>>,
        cap: i64,
        label: impl Into<String>,
    ) -> Result<Arc<Self>> {
        if p >= 1 << 31 {
            return Err(Error::Unsupported("primes above 2^31".into()));
        }
        let f = unramified.len() - 1;
        let e = eisenstein.len() - 1;
        if f == 0 || e == 0 {
            return Err(Error::Invalid("degrees must be positive".into()));
        }
        if !unramified[f].is_one() {
            return Err(Error::Invalid("unramified modulus must be monic".into()));
        }
        let pb = BigInt::from(p);
        let res_mod: Vec<u64> = unramified
            .iter()
            .map(|c| c.mod_floor(&pb).try_into().unwrap())
            .collect();
        if f > 1 && !super::residue::is_irreducible(&res_mod, p) {
            return Err(Error::Invalid("unramified modulus is reducible mod p".into()));
        }
        let residue = ResidueField::new(p, res_mod);
        let mut eis: Vec<Vec<BigInt>> = eisenstein
            .into_iter()
            .map(|mut c| {
                c.resize(f, BigInt::zero());
                c
            })
            .collect();
        // leading coefficient must be exactly 1
        let lead_ok = eis[e][0].is_one() && eis[e][1..].iter().all(|c| c.is_zero());
        if !lead_ok {
            return Err(Error::NotEisenstein("polynomial must be monic".into()));
        }
        for (i, c) in eis.iter().enumerate().take(e) {
            if c.iter().any(|x| !x.mod_floor(&pb).is_zero()) {
                return Err(Error::NotEisenstein(format!("coefficient {i} is not divisible by p")));
            }
        }
        // constant term must be p times a unit of W
        let c0_over_p: Vec<u64> = eis[0]
            .iter()
            .map(|x| (x / &pb).mod_floor(&pb).try_into().unwrap())
            .collect();
        if residue.is_zero(&c0_over_p) {
            return Err(Error::NotEisenstein("constant term has valuation > 1".into()));
        }
        let reduce = eis.iter().take(e).map(|c| c.iter().map(|x| -to_z(x)).collect()).collect();
        for c in eis.iter_mut() {
            c.truncate(f);
        }
        let unr = unramified.iter().map(to_z).collect();
        let n = (4 * cap + 64) as usize;
        let mut pow_cache = Vec::with_capacity(n);
        let mut acc = Integer::from(1);
        for _ in 0..n {
            pow_cache.push(acc.clone());
            acc *= p as u32;
        }
        Ok(Arc::new(FieldCtx {
            p,
            pb,
            p32: p as u32,
            f,
            e,
            unramified,
            unr,
            eisenstein: eis,
            reduce,
            cap,
            label: label.into(),
            residue,
            pow_cache,
        }))
    }

    /// `Q_p` itself.
    pub fn qp(p: u64, cap: i64) -> Arc<Self> {
        Self::unramified(p, 1, cap).expect("Q_p is always constructible")
    }

    /// Unramified extension of degree `f` with uniformizer `p`.
    pub fn unramified(p: u64, f: usize, cap: i64) -> Result<Arc<Self>> {
        let m: Vec<BigInt> = default_modulus(p, f).into_iter().map(BigInt::from).collect();
        let mut c0 = vec![BigInt::zero(); f];
        c0[0] = -BigInt::from(p);
        let mut one = vec![BigInt::zero(); f];
        one[0] = BigInt::one();
        let label = if f == 1 { format!("Q_{p}") } else { format!("Q_{p}^(ur,{f})") };
        Self::new(p, m, vec![c0, one], cap, label)
    }

    /// Same field with a different working precision.
    pub fn with_cap(&self, cap: i64) -> Arc<Self> {
        Self::new(self.p, self.unramified.clone(), self.eisenstein.clone(), cap, self.label.clone())
            .expect("already validated")
    }

    pub fn degree(&self) -> usize {
        self.e * self.f
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn ppow(&self, k: i64) -> BigInt {
        to_big(&self.zpow(k))
    }

    fn zpow(&self, k: i64) -> std::borrow::Cow<'_, Integer> {
        assert!(k >= 0);
        let ku = k as usize;
        if ku < self.pow_cache.len() {
            std::borrow::Cow::Borrowed(&self.pow_cache[ku])
        } else {
            std::borrow::Cow::Owned(Integer::from(Integer::u_pow_u(self.p32, k as u32)))
        }
    }

    /// Reduce a raw `t`-polynomial of length `2f - 1` to length `f`, in place.
    fn reduce_t(&self, row: &mut [Integer]) {
        let f = self.f;
        for k in (f..row.len()).rev() {
            if row[k] == 0 {
                continue;
            }
            let c = std::mem::take(&mut row[k]);
            for i in 0..f {
                let m = &self.unr[i];
                if *m != 0 {
                    row[k - f + i] -= &c * m;
                }
            }
        }
    }

    /// `out += a · b` for `W`-elements of length `f`.
    fn wmul_add(&self, a: &[Integer], b: &[Integer], out: &mut [Integer]) {
        let f = self.f;
        if f == 1 {
            if a[0] != 0 && b[0] != 0 {
                out[0] += &a[0] * &b[0];
            }
            return;
        }
        let mut tmp: Vec<Integer> = vec![Integer::new(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if *y != 0 {
                    tmp[i + j] += x * y;
                }
            }
        }
        self.reduce_t(&mut tmp);
        for (o, t) in out.iter_mut().zip(tmp.iter().take(f)) {
            *o += t;
        }
    }

    /// Same field and working precision (pointer equality or identical data).
    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b)
            || (a.p == b.p && a.cap == b.cap && a.unramified == b.unramified && a.eisenstein == b.eisenstein)
    }
}

/// An element of a [`FieldCtx`].
#[derive(Clone)]
pub struct Elem {
    ctx: Arc<FieldCtx>,
    shift: i64,
    prec: i64,
    coords: Vec<Integer>,
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            if self.prec >= EXACT {
                return write!(f, "0");
            }
            return write!(f, "O(p^{})", self.prec);
        }
        write!(f, "p^{}*{:?} + O(p^{})", self.shift, self.coords, self.prec)
    }
}

impl Elem {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        Elem { ctx: ctx.clone(), shift: EXACT, prec: EXACT, coords: vec![Integer::new(); ctx.degree()] }
    }

    /// Zero known only modulo `p^prec`.
    pub fn zero_prec(ctx: &Arc<FieldCtx>, prec: i64) -> Self {
        let prec = prec.min(EXACT);
        Elem { ctx: ctx.clone(), shift: prec, prec, coords: vec![Integer::new(); ctx.degree()] }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::from_i64(ctx, 1)
    }

    pub fn from_int(ctx: &Arc<FieldCtx>, n: &BigInt) -> Self {
        let mut coords = vec![Integer::new(); ctx.degree()];
        coords[0] = to_z(n);
        Self::from_exact_z(ctx, coords)
    }

    pub fn from_i64(ctx: &Arc<FieldCtx>, n: i64) -> Self {
        let mut coords = vec![Integer::new(); ctx.degree()];
        coords[0] = Integer::from(n);
        Self::from_exact_z(ctx, coords)
    }

    /// Exact rational `num/den`.
    pub fn from_ratio(ctx: &Arc<FieldCtx>, num: &BigInt, den: &BigInt) -> Result<Self> {
        Self::from_int(ctx, num).div(&Self::from_int(ctx, den))
    }

    /// Exact element of `W` given by its `t`-coordinates.
    pub fn from_w(ctx: &Arc<FieldCtx>, w: &[BigInt]) -> Self {
        let mut coords = vec![Integer::new(); ctx.degree()];
        for (c, x) in coords.iter_mut().zip(w.iter()) {
            *c = to_z(x);
        }
        Self::from_exact_z(ctx, coords)
    }

    /// Exact element from integer coordinates `c[i*f + j]` of `t^j ϖ^i`.
    pub fn from_int_coords(ctx: &Arc<FieldCtx>, coords: Vec<BigInt>) -> Self {
        Self::from_exact_z(ctx, coords.iter().map(to_z).collect())
    }

    fn from_exact_z(ctx: &Arc<FieldCtx>, coords: Vec<Integer>) -> Self {
        let hint = coords.iter().filter(|c| **c != 0).map(|c| z_ord(c, ctx.p32)).min().unwrap_or(0);
        Self::from_z(ctx, 0, ctx.cap + hint, coords)
    }

    /// `p^shift · coords`, known modulo `p^prec`.
    pub fn from_coords(ctx: &Arc<FieldCtx>, shift: i64, prec: i64, coords: Vec<BigInt>) -> Self {
        assert_eq!(coords.len(), ctx.degree());
        Self::from_z(ctx, shift, prec, coords.iter().map(to_z).collect())
    }

    fn from_z(ctx: &Arc<FieldCtx>, shift: i64, prec: i64, coords: Vec<Integer>) -> Self {
        let mut e = Elem { ctx: ctx.clone(), shift, prec, coords };
        e.normalize();
        e
    }

    /// The uniformizer `ϖ`.
    pub fn uniformizer(ctx: &Arc<FieldCtx>) -> Self {
        if ctx.e == 1 {
            let mut coords = vec![Integer::new(); ctx.degree()];
            for (c, r) in coords.iter_mut().zip(ctx.reduce[0].iter()) {
                *c = r.clone();
            }
            return Self::from_exact_z(ctx, coords);
        }
        let mut coords = vec![Integer::new(); ctx.degree()];
        coords[ctx.f] = Integer::from(1);
        Self::from_exact_z(ctx, coords)
    }

    /// The unramified generator `t`.
    pub fn unramified_generator(ctx: &Arc<FieldCtx>) -> Self {
        let mut coords = vec![Integer::new(); ctx.degree()];
        if ctx.f > 1 {
            coords[1] = Integer::from(1);
        } else {
            coords[0] = -ctx.unr[0].clone();
        }
        Self::from_exact_z(ctx, coords)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec >= EXACT && self.shift >= EXACT
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Relative precision in digits (0 for zeros).
    pub fn rel_prec(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.prec - self.shift
        }
    }

    /// Digits lost relative to the working cap.
    pub fn lost_digits(&self) -> i64 {
        (self.ctx.cap - self.rel_prec()).max(0)
    }

    /// Raw integer coordinates (to be scaled by `p^shift`).
    pub fn raw_coords(&self) -> Vec<BigInt> {
        self.coords.iter().map(to_big).collect()
    }

    fn normalize(&mut self) {
        let ctx = self.ctx.clone();
        if self.prec >= EXACT && self.coords.iter().all(|c| *c == 0) {
            self.shift = EXACT;
            self.prec = EXACT;
            return;
        }
        if self.prec - self.shift > ctx.cap {
            if self.coords.iter().any(|c| *c != 0) {
                // precision stays relative to the true valuation, so strip p's first
                self.strip();
                if self.prec - self.shift > ctx.cap {
                    self.prec = self.shift + ctx.cap;
                }
            } else {
                self.prec = self.prec.min(self.shift + ctx.cap);
            }
        }
        let rel = self.prec - self.shift;
        if rel <= 0 {
            self.make_zero();
            return;
        }
        let m = ctx.zpow(rel);
        for c in self.coords.iter_mut() {
            if c.cmp0() == Ordering::Less || *c >= *m {
                c.rem_euc_assign(&*m);
            }
        }
        self.strip();
    }

    fn make_zero(&mut self) {
        self.shift = self.prec;
        for c in self.coords.iter_mut() {
            *c = Integer::new();
        }
    }

    /// Divide out common powers of p from the coordinates.
    fn strip(&mut self) {
        let p = self.ctx.p32;
        loop {
            if self.shift >= self.prec || self.coords.iter().all(|c| *c == 0) {
                self.make_zero();
                return;
            }
            if self.coords.iter().all(|c| c.is_divisible_u(p)) {
                for c in self.coords.iter_mut() {
                    if *c != 0 {
                        c.div_exact_u_mut(p);
                    }
                }
                self.shift += 1;
            } else {
                return;
            }
        }
    }

    /// `ϖ`-adic valuation of the coordinate vector (integer, in units of `1/e`).
    fn pi_val_of_coords(&self) -> i64 {
        let ctx = &self.ctx;
        let mut best = i64::MAX;
        for i in 0..ctx.e {
            if i as i64 >= best {
                break;
            }
            for j in 0..ctx.f {
                let c = &self.coords[i * ctx.f + j];
                if *c != 0 {
                    best = best.min(z_ord(c, ctx.p32) * ctx.e as i64 + i as i64);
                }
            }
        }
        best
    }

    fn w_slice(&self, i: usize) -> &[Integer] {
        let f = self.ctx.f;
        &self.coords[i * f..(i + 1) * f]
    }

    /// The coefficient of `ϖ^i` (an element of `W[1/p]`) as a field element.
    pub fn w_coeff(&self, i: usize) -> Elem {
        let ctx = &self.ctx;
        if self.is_zero() {
            return Elem::zero_prec(ctx, self.prec);
        }
        let mut coords = vec![Integer::new(); ctx.degree()];
        for (j, c) in self.w_slice(i).iter().enumerate() {
            coords[j] = c.clone();
        }
        Elem::from_z(ctx, self.shift, self.prec, coords)
    }

    /// Coordinates over `Q_p` in the basis `t^j ϖ^i`, as elements of this field.
    pub fn qp_coords(&self) -> Vec<Elem> {
        let ctx = &self.ctx;
        (0..ctx.degree())
            .map(|k| {
                if self.is_zero() {
                    return Elem::zero_prec(ctx, self.prec);
                }
                let mut coords = vec![Integer::new(); ctx.degree()];
                coords[0] = self.coords[k].clone();
                Elem::from_z(ctx, self.shift, self.prec, coords)
            })
            .collect()
    }

    /// If the element lies in `Q_p`, its value as a rational integer multiple
    /// of `p^shift` (returns `(shift, unit_integer, prec)`).
    pub fn as_qp(&self) -> Option<(i64, BigInt, i64)> {
        if self.coords.iter().skip(1).any(|c| *c != 0) {
            return None;
        }
        Some((self.shift, to_big(&self.coords[0]), self.prec))
    }

    /// Residue class in `F_q` of an integral element (coordinates of `ϖ^0` mod p).
    pub fn residue(&self) -> Result<Vec<u64>> {
        if self.ord_lower() < Q::from_integer(0) {
            return Err(Error::Invalid("residue of a non-integral element".into()));
        }
        if self.is_zero() || self.shift > 0 {
            return Ok(vec![0; self.ctx.f]);
        }
        let p = self.ctx.p32;
        Ok((0..self.ctx.f).map(|j| self.coords[j].mod_u(p) as u64).collect())
    }

    /// Exact integer image of a residue-field element in `W` (digit lift).
    pub fn lift_residue(ctx: &Arc<FieldCtx>, r: &[u64]) -> Self {
        let w: Vec<BigInt> = r.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_w(ctx, &w)
    }

    /// Drop to absolute precision `prec` (no-op if already coarser).
    pub fn truncate_prec(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let s = self.shift.min(prec);
        Elem::from_z(&self.ctx, s, prec, self.rescaled_coords(s))
    }

    fn rescaled_coords(&self, to_shift: i64) -> Vec<Integer> {
        if self.is_zero() {
            return vec![Integer::new(); self.coords.len()];
        }
        let d = self.shift - to_shift;
        assert!(d >= 0);
        if d == 0 {
            return self.coords.clone();
        }
        let m = self.ctx.zpow(d);
        self.coords.iter().map(|c| Integer::from(c * &*m)).collect()
    }

    /// `self ≡ other (mod p^n)`; errors if the data is too imprecise to decide.
    pub fn eq_mod(&self, other: &Elem, n: i64) -> Result<bool> {
        let d = self.sub(other);
        if d.is_zero() {
            if d.prec >= n {
                Ok(true)
            } else {
                Err(Error::precision(format!("difference known only mod p^{} < p^{}", d.prec, n)))
            }
        } else {
            Ok(d.ord().unwrap() >= Q::from_integer(n))
        }
    }

    /// Multiply by `p^k` exactly.
    pub fn mul_ppow(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        let mut r = self.clone();
        r.shift = r.shift.saturating_add(k);
        r.prec = r.prec.saturating_add(k).min(EXACT);
        r
    }

    /// Inverse of a unit of `W` modulo `p^digits`, by Newton iteration.
    fn inv_unit_w(ctx: &Arc<FieldCtx>, w: &[Integer], digits: i64) -> Vec<Integer> {
        let p = ctx.p32;
        let res: Vec<u64> = w.iter().map(|x| x.mod_u(p) as u64).collect();
        let inv0 = ctx.residue.inv(&res);
        let mut y: Vec<Integer> = inv0.into_iter().map(Integer::from).collect();
        let mut good = 1;
        while good < digits {
            good *= 2;
            let m = ctx.zpow(good.min(digits));
            let mut wy = vec![Integer::new(); ctx.f];
            ctx.wmul_add(w, &y, &mut wy);
            for c in wy.iter_mut() {
                c.rem_euc_assign(&*m);
                *c = -std::mem::take(c);
            }
            wy[0] += 2;
            let mut ny = vec![Integer::new(); ctx.f];
            ctx.wmul_add(&y, &wy, &mut ny);
            for c in ny.iter_mut() {
                c.rem_euc_assign(&*m);
            }
            y = ny;
        }
        let m_full = ctx.zpow(digits.max(1));
        for c in y.iter_mut() {
            c.rem_euc_assign(&*m_full);
        }
        y
    }

    /// Divide the coordinate vector (assumed to have `ϖ`-valuation ≥ 1 and
    /// shift 0) by `ϖ`, returning coordinates and the new relative precision.
    fn div_by_pi(&self, coords: &[Integer], rel: i64) -> (Vec<Integer>, i64) {
        let ctx = &self.ctx;
        let (e, f, p) = (ctx.e, ctx.f, ctx.p32);
        let over_p = |x: &Integer| {
            let mut y = x.clone();
            y.div_exact_u_mut(p);
            y
        };
        let u: Vec<Integer> = ctx.reduce[0].iter().map(over_p).collect();
        let uinv = Self::inv_unit_w(ctx, &u, rel);
        if e == 1 {
            // ϖ = r0 = p·u; divide by p then by u
            let w: Vec<Integer> = coords.iter().map(over_p).collect();
            let mut out = vec![Integer::new(); f];
            ctx.wmul_add(&w, &uinv, &mut out);
            return (out, rel - 1);
        }
        // X/ϖ = Σ_{i≥1} X_i ϖ^{i-1} + X_0 ϖ^{-1},
        // ϖ^{-1} = (ϖ^{e-1} - r_{e-1} ϖ^{e-2} - ... - r_1) / r_0
        let x0: Vec<Integer> = coords[0..f].iter().map(over_p).collect();
        let mut x0u = vec![Integer::new(); f];
        ctx.wmul_add(&x0, &uinv, &mut x0u);
        let mut out = vec![Integer::new(); e * f];
        for i in 1..e {
            for j in 0..f {
                out[(i - 1) * f + j] = coords[i * f + j].clone();
            }
        }
        for j in 0..f {
            out[(e - 1) * f + j] += &x0u[j];
        }
        for k in 1..e {
            if ctx.reduce[k].iter().all(|c| *c == 0) {
                continue;
            }
            let mut t = vec![Integer::new(); f];
            ctx.wmul_add(&x0u, &ctx.reduce[k], &mut t);
            for j in 0..f {
                out[(k - 1) * f + j] -= &t[j];
            }
        }
        (out, rel - 1)
    }

    /// Exact `ord_p` as a rational with denominator dividing `e`.
    pub fn valuation(&self) -> Option<Q> {
        if self.is_zero() {
            return None;
        }
        let v = self.pi_val_of_coords();
        Some(Q::from_integer(self.shift) + Q::new(v, self.ctx.e as i64))
    }

    /// Map the element into another field sharing `W`, given the image of `ϖ`.
    pub fn map_into(&self, target: &Arc<FieldCtx>, pi_image: &Elem) -> Elem {
        if self.is_exact_zero() {
            return Elem::zero(target);
        }
        if self.is_zero() {
            return Elem::zero_prec(target, self.prec);
        }
        let ctx = &self.ctx;
        let mut acc = Elem::zero(target);
        let mut pw = Elem::one(target);
        for i in 0..ctx.e {
            let w = self.w_slice(i);
            if w.iter().any(|c| *c != 0) {
                let mut coords = vec![Integer::new(); target.degree()];
                for (j, c) in w.iter().enumerate() {
                    coords[j] = c.clone();
                }
                let we = Elem::from_exact_z(target, coords);
                acc = acc.add(&we.mul(&pw));
            }
            if i + 1 < ctx.e {
                pw = pw.mul(pi_image);
            }
        }
        acc.mul_ppow(self.shift).truncate_prec(self.prec)
    }

    /// `W`-coefficients of `ϖ^0, …, ϖ^{e-1}`, each as an element of the
    /// unramified field `k0` (which must share this field's `W`).
    pub fn w_parts(&self, k0: &Arc<FieldCtx>) -> Vec<Elem> {
        let e = self.ctx.e;
        assert_eq!(k0.f, self.ctx.f);
        (0..e)
            .map(|i| {
                if self.is_exact_zero() {
                    return Elem::zero(k0);
                }
                if self.is_zero() {
                    return Elem::zero_prec(k0, self.prec);
                }
                Elem::from_z(k0, self.shift, self.prec, self.w_slice(i).to_vec())
            })
            .collect()
    }

    /// Coordinates over `Q_p` in the basis `t^j ϖ^i` (index `i*f + j`).
    pub fn qp_parts(&self, qp: &Arc<FieldCtx>) -> Vec<Elem> {
        (0..self.ctx.degree())
            .map(|k| {
                if self.is_exact_zero() {
                    return Elem::zero(qp);
                }
                if self.is_zero() {
                    return Elem::zero_prec(qp, self.prec);
                }
                Elem::from_z(qp, self.shift, self.prec, vec![self.coords[k].clone()])
            })
            .collect()
    }

    /// Embed an element of `W[1/p]` (given in the unramified field `k0`).
    pub fn from_unramified(ctx: &Arc<FieldCtx>, w: &Elem) -> Elem {
        if w.is_exact_zero() {
            return Elem::zero(ctx);
        }
        if w.is_zero() {
            return Elem::zero_prec(ctx, w.prec);
        }
        let mut coords = vec![Integer::new(); ctx.degree()];
        for j in 0..ctx.f {
            coords[j] = w.coords[j].clone();
        }
        Elem::from_z(ctx, w.shift, w.prec, coords)
    }

    /// Symmetric integer representative of an element of `Z_p` known to its
    /// precision (`None` if not integral or not in `Q_p`).
    pub fn to_small_int(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.shift < 0 || self.coords.iter().skip(1).any(|c| *c != 0) {
            return None;
        }
        let m = self.ctx.zpow(self.prec - self.shift);
        let mut c = self.coords[0].clone();
        if Integer::from(&c * 2) > *m {
            c -= &*m;
        }
        c *= &*self.ctx.zpow(self.shift);
        Some(to_big(&c))
    }

    /// `p · ϖ^{-1}` (an integral element of valuation `1 - 1/e`).
    fn pi_inverse_times_p(ctx: &Arc<FieldCtx>) -> Elem {
        let one = Elem::one(ctx);
        let mut c = vec![Integer::new(); ctx.degree()];
        c[0] = Integer::from(ctx.p32);
        let (coords, _) = one.div_by_pi(&c, ctx.cap + 2);
        Elem::from_z(ctx, 0, ctx.cap + 1, coords)
    }
}

impl Ring for Elem {
    fn zero_like(&self) -> Self {
        Elem::zero(&self.ctx)
    }

    fn one_like(&self) -> Self {
        Elem::one(&self.ctx)
    }

    fn is_zero(&self) -> bool {
        self.shift >= self.prec
    }

    fn is_exact_zero(&self) -> bool {
        Elem::is_exact_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert!(FieldCtx::same(&self.ctx, &rhs.ctx), "field mismatch");
        if self.is_exact_zero() {
            return rhs.clone();
        }
        if rhs.is_exact_zero() {
            return self.clone();
        }
        let prec = self.prec.min(rhs.prec);
        if self.is_zero() {
            return rhs.truncate_prec(prec);
        }
        if rhs.is_zero() {
            return self.truncate_prec(prec);
        }
        let s = self.shift.min(rhs.shift);
        if prec <= s {
            return Elem::zero_prec(&self.ctx, prec);
        }
        let (lo, hi) = if self.shift <= rhs.shift { (self, rhs) } else { (rhs, self) };
        let mut coords = lo.coords.clone();
        let d = hi.shift - s;
        if d == 0 {
            for (c, x) in coords.iter_mut().zip(hi.coords.iter()) {
                *c += x;
            }
        } else {
            let m = self.ctx.zpow(d);
            for (c, x) in coords.iter_mut().zip(hi.coords.iter()) {
                if *x != 0 {
                    *c += x * &*m;
                }
            }
        }
        Elem::from_z(&self.ctx, s, prec, coords)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coords = self.coords.iter().map(|c| Integer::from(-c)).collect();
        Elem::from_z(&self.ctx, self.shift, self.prec, coords)
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(FieldCtx::same(&self.ctx, &rhs.ctx), "field mismatch");
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Elem::zero(&self.ctx);
        }
        if self.is_zero() || rhs.is_zero() {
            let pa = if self.is_zero() { self.prec } else { self.shift };
            let pb = if rhs.is_zero() { rhs.prec } else { rhs.shift };
            return Elem::zero_prec(&self.ctx, pa.saturating_add(pb).min(EXACT - 1));
        }
        let ctx = &self.ctx;
        let (e, f) = (ctx.e, ctx.f);
        let w = 2 * f - 1;
        let coords = SCRATCH.with(|cell| {
            let mut grid = cell.borrow_mut();
            let need = (2 * e - 1) * w;
            if grid.len() < need {
                grid.resize(need, Integer::new());
            }
            for g in grid.iter_mut().take(need) {
                *g = Integer::ZERO;
            }
            // raw bivariate product in (ϖ, t)
            for i in 0..e {
                for (j, a) in self.w_slice(i).iter().enumerate() {
                    if *a == 0 {
                        continue;
                    }
                    for k in 0..e {
                        for (l, b) in rhs.w_slice(k).iter().enumerate() {
                            if *b != 0 {
                                grid[(i + k) * w + j + l] += a * b;
                            }
                        }
                    }
                }
            }
            // fold ϖ^d for d ≥ e back, top down
            for d in (e..2 * e - 1).rev() {
                ctx.reduce_t(&mut grid[d * w..(d + 1) * w]);
                for jj in 0..e {
                    let r = &ctx.reduce[jj];
                    if r.iter().all(|c| *c == 0) {
                        continue;
                    }
                    for a in 0..f {
                        if grid[d * w + a] == 0 {
                            continue;
                        }
                        for (b, rb) in r.iter().enumerate() {
                            if *rb != 0 {
                                let v = Integer::from(&grid[d * w + a] * rb);
                                grid[(d - e + jj) * w + a + b] += v;
                            }
                        }
                    }
                }
            }
            let mut out = Vec::with_capacity(e * f);
            for i in 0..e {
                ctx.reduce_t(&mut grid[i * w..(i + 1) * w]);
                for j in 0..f {
                    out.push(std::mem::take(&mut grid[i * w + j]));
                }
            }
            out
        });
        let rel = (self.prec - self.shift).min(rhs.prec - rhs.shift);
        let shift = self.shift + rhs.shift;
        Elem::from_z(ctx, shift, shift + rel, coords)
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        Elem::from_int(&self.ctx, n)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        Elem::from_i64(&self.ctx, n)
    }
}

impl Field for Elem {
    fn inv(&self) -> Result<Self> {
        if self.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Err(Error::precision("inverse of an inexact zero"));
        }
        let ctx = self.ctx.clone();
        let v = self.pi_val_of_coords();
        debug_assert!(v < ctx.e as i64);
        let mut rel = self.prec - self.shift;
        let mut u = self.coords.clone();
        for _ in 0..v {
            let (nu, nrel) = self.div_by_pi(&u, rel);
            u = nu;
            rel = nrel;
        }
        if rel <= 0 {
            return Err(Error::precision("inverse lost all digits"));
        }
        // u is a unit of O_K known mod p^rel; Newton y <- y(2 - u y)
        let unit = Elem::from_z(&ctx, 0, rel, u);
        let w0 = Self::inv_unit_w(&ctx, &unit.coords[0..ctx.f], 1);
        let mut c = vec![Integer::new(); ctx.degree()];
        for (j, x) in w0.into_iter().enumerate() {
            c[j] = x;
        }
        let mut y = Elem::from_z(&ctx, 0, rel, c);
        let two = Elem::from_i64(&ctx, 2);
        let mut good = 1i64; // in units of ϖ
        let target = rel * ctx.e as i64 + ctx.e as i64;
        while good < target {
            y = y.mul(&two.sub(&unit.mul(&y)));
            good *= 2;
        }
        let mut res = y.truncate_prec(rel);
        if v > 0 {
            let pinv = Elem::pi_inverse_times_p(&ctx);
            for _ in 0..v {
                res = res.mul(&pinv).mul_ppow(-1);
            }
        }
        Ok(res.mul_ppow(-self.shift))
    }
}

impl Valued for Elem {
    fn ord(&self) -> Option<Q> {
        self.valuation()
    }

    fn abs_prec(&self) -> Q {
        Q::from_integer(self.prec)
    }
}

impl PartialEq for Elem {
    /// Equality at the common precision of both operands.
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(p: u64) -> Arc<FieldCtx> {
        FieldCtx::qp(p, 20)
    }

    fn ext(p: u64, eis: &[i64], cap: i64) -> Arc<FieldCtx> {
        let e: Vec<Vec<BigInt>> = eis.iter().map(|&c| vec![BigInt::from(c)]).collect();
        FieldCtx::new(p, vec![BigInt::zero(), BigInt::one()], e, cap, "test").unwrap()
    }

    #[test]
    fn carry_on_addition() {
        let k = qp(3);
        let s = Elem::from_i64(&k, 1).add(&Elem::from_i64(&k, 2));
        assert_eq!(s.valuation(), Some(Q::from_integer(1)));
        assert_eq!(s.raw_coords()[0], BigInt::from(1));
    }

    #[test]
    fn cancellation_is_recorded() {
        let k = FieldCtx::qp(3, 5);
        let a = Elem::from_i64(&k, 1 + 81);
        let b = Elem::one(&k);
        let d = a.sub(&b);
        assert_eq!(d.valuation(), Some(Q::from_integer(4)));
        assert_eq!(d.rel_prec(), 1);
        assert_eq!(d.lost_digits(), 4);
    }

    #[test]
    fn inverse_in_qp() {
        let k = qp(5);
        for n in [1i64, 2, 7, 10, 25, -13, 3125] {
            let x = Elem::from_i64(&k, n);
            let y = x.inv().unwrap();
            assert!(x.mul(&y).eq_mod(&Elem::one(&k), 15).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn ramified_uniformizer_valuation() {
        // x^4 + 5 over Q_5
        let k = ext(5, &[5, 0, 0, 0, 1], 20);
        let pi = Elem::uniformizer(&k);
        assert_eq!(pi.valuation(), Some(Q::new(1, 4)));
        let pi4 = pi.pow(4);
        assert!(pi4.eq_mod(&Elem::from_i64(&k, -5), 19).unwrap());
        let inv = pi.inv().unwrap();
        assert_eq!(inv.valuation(), Some(Q::new(-1, 4)));
        assert!(inv.mul(&pi).eq_mod(&Elem::one(&k), 15).unwrap());
        let a = pi.add(&Elem::from_i64(&k, 3)).mul(&pi.pow(3));
        let ai = a.inv().unwrap();
        assert!(a.mul(&ai).eq_mod(&Elem::one(&k), 14).unwrap());
    }

    #[test]
    fn valuation_additive_with_half_valuations() {
        let k = ext(5, &[5, 0, 0, 0, 1], 20);
        let pi = Elem::uniformizer(&k);
        let x = pi.mul(&Elem::from_i64(&k, 2));
        assert_eq!(x.mul(&x).valuation(), Some(Q::new(1, 2)));
    }

    #[test]
    fn unramified_quadratic_inverse() {
        let k = FieldCtx::unramified(3, 2, 20).unwrap();
        let t = Elem::unramified_generator(&k);
        let x = t.add(&Elem::from_i64(&k, 6)).mul(&t);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).eq_mod(&Elem::one(&k), 18).unwrap());
        let z = x.mul_ppow(2).inv().unwrap();
        assert_eq!(z.valuation(), Some(Q::from_integer(-2)));
    }

    #[test]
    fn rejects_non_eisenstein() {
        let e: Vec<Vec<BigInt>> = [9i64, 0, 1].iter().map(|&c| vec![BigInt::from(c)]).collect();
        assert!(FieldCtx::new(3, vec![BigInt::zero(), BigInt::one()], e, 10, "bad").is_err());
    }
}
