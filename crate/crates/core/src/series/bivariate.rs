//! Bivariate series stored triangularly: `rows[i][j]` is the coefficient of
//! `X^i Y^j`, `i + j ≤ D`.

use crate::error::Result;
use crate::ring::{Ring, Valued, Q};

use super::{binomials, mul_acc, Series};

#[derive(Clone, Debug)]
pub struct BiSeries<R> {
    rows: Vec<Vec<R>>,
}

impl<R: Ring> BiSeries<R> {
    pub fn zero(proto: &R, d: usize) -> Self {
        BiSeries { rows: (0..=d).map(|i| vec![proto.zero_like(); d + 1 - i]).collect() }
    }

    pub fn from_fn(proto: &R, d: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let _ = proto;
        BiSeries { rows: (0..=d).map(|i| (0..=d - i).map(|j| f(i, j)).collect()).collect() }
    }

    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.rows[i][j] = v;
    }

    pub fn proto(&self) -> R {
        self.rows[0][0].zero_like()
    }

    /// All `(i, j)` with `i + j ≤ D`, by total degree then `i`.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> {
        let d = self.degree();
        (0..=d).flat_map(move |n| (0..=n).map(move |i| (i, n - i)))
    }

    /// `a(X)`.
    pub fn from_x(a: &Series<R>) -> Self {
        let d = a.degree();
        let mut b = Self::zero(&a.proto(), d);
        for i in 0..=d {
            b.rows[i][0] = a.coeff(i).clone();
        }
        b
    }

    /// `a(Y)`.
    pub fn from_y(a: &Series<R>) -> Self {
        let d = a.degree();
        let mut b = Self::zero(&a.proto(), d);
        b.rows[0] = a.coeffs().to_vec();
        b
    }

    /// `a(X) · b(Y)`.
    pub fn outer(a: &Series<R>, b: &Series<R>) -> Self {
        let d = a.degree().min(b.degree());
        let proto = a.proto();
        BiSeries {
            rows: (0..=d)
                .map(|i| {
                    (0..=d - i)
                        .map(|j| {
                            let (x, y) = (a.coeff(i), b.coeff(j));
                            if x.is_exact_zero() || y.is_exact_zero() {
                                proto.clone()
                            } else {
                                x.mul(y)
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    fn zip(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        let d = self.degree().min(o.degree());
        BiSeries {
            rows: (0..=d).map(|i| (0..=d - i).map(|j| f(&self.rows[i][j], &o.rows[i][j])).collect()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        BiSeries { rows: self.rows.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect() }
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map(|x| if x.is_exact_zero() { x.clone() } else { x.mul(s) })
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> BiSeries<S> {
        BiSeries { rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    /// Swap `X` and `Y`.
    pub fn transpose(&self) -> Self {
        let d = self.degree();
        BiSeries { rows: (0..=d).map(|i| (0..=d - i).map(|j| self.rows[j][i].clone()).collect()).collect() }
    }

    pub fn truncate(&self, d: usize) -> Self {
        let d = d.min(self.degree());
        BiSeries { rows: (0..=d).map(|i| self.rows[i][..=d - i].to_vec()).collect() }
    }

    /// Product, truncated at total degree `D`.
    pub fn mul(&self, o: &Self) -> Self {
        let d = self.degree().min(o.degree());
        let mut out = Self::zero(&self.proto(), d);
        let rhs: Vec<(usize, usize, &R)> = o
            .indices()
            .filter(|&(i, j)| i + j <= d && !o.rows[i][j].is_exact_zero())
            .map(|(i, j)| (i, j, &o.rows[i][j]))
            .collect();
        for i1 in 0..=d {
            for j1 in 0..=d - i1 {
                let a = &self.rows[i1][j1];
                if a.is_exact_zero() {
                    continue;
                }
                let room = d - i1 - j1;
                for &(i2, j2, b) in rhs.iter().take_while(|(i, j, _)| i + j <= room) {
                    mul_acc(&mut out.rows[i1 + i2][j1 + j2], a, b);
                }
            }
        }
        out
    }

    /// `F(X, 0)` and `F(0, Y)` as univariate series.
    pub fn restrict_y0(&self) -> Series<R> {
        Series::new((0..=self.degree()).map(|i| self.rows[i][0].clone()).collect())
    }

    pub fn restrict_x0(&self) -> Series<R> {
        Series::new(self.rows[0].clone())
    }

    /// `F(T, T)`.
    pub fn diagonal(&self) -> Series<R> {
        let d = self.degree();
        Series::new(
            (0..=d)
                .map(|n| {
                    let mut acc = self.proto();
                    for i in 0..=n {
                        acc = acc.add(&self.rows[i][n - i]);
                    }
                    acc
                })
                .collect(),
        )
    }

    /// `h(A(X) + B(Y))` for univariate `h`, `A`, `B` with `A(0) = B(0) = 0`,
    /// via `(A + B)^n = Σ C(n, i) A^i B^{n-i}`.
    pub fn subst_sum(h: &Series<R>, a: &Series<R>, b: &Series<R>) -> Self {
        let d = h.degree().min(a.degree()).min(b.degree());
        let proto = h.proto();
        let pa = a.truncate(d).powers(d);
        let pb = if std::ptr::eq(a, b) { pa.clone() } else { b.truncate(d).powers(d) };
        let binom = binomials(d);
        // r[j][x] = Σ_i h_{i+j} C(i+j, i) A^i[x]
        let mut r: Vec<Vec<R>> = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let mut row = vec![proto.clone(); d + 1 - j];
            for i in 0..=d - j {
                let hc = h.coeff(i + j);
                if hc.is_exact_zero() {
                    continue;
                }
                let w = hc.scale_int(&binom[i + j][i]);
                for x in i..=d - j {
                    mul_acc(&mut row[x], &w, pa[i].coeff(x));
                }
            }
            r.push(row);
        }
        let mut out = Self::zero(&proto, d);
        for x in 0..=d {
            for y in 0..=d - x {
                let mut acc = proto.clone();
                for j in 0..=y {
                    mul_acc(&mut acc, &r[j][x], pb[j].coeff(y));
                }
                out.rows[x][y] = acc;
            }
        }
        out
    }

    /// `F(A(X), B(Y))` with `A(0) = B(0) = 0`.
    pub fn bilinear(&self, a: &Series<R>, b: &Series<R>) -> Self {
        let d = self.degree().min(a.degree()).min(b.degree());
        let proto = self.proto();
        // sparse laws (X + Y + cXY) only need the first few powers
        let live = |i: usize, j: usize| i + j <= d && !self.rows[i][j].is_exact_zero();
        let mi = (0..=d).filter(|&i| (0..=d - i).any(|j| live(i, j))).max().unwrap_or(0);
        let mj = (0..=d).filter(|&j| (0..=d - j).any(|i| live(i, j))).max().unwrap_or(0);
        let pa = a.truncate(d).powers(mi);
        let pb = b.truncate(d).powers(mj);
        // q_i(Y) = Σ_j F_ij B(Y)^j
        let q: Vec<Vec<R>> = (0..=mi)
            .map(|i| {
                let mut row = vec![proto.clone(); d + 1 - i];
                for j in 0..=(d - i).min(mj) {
                    let f = &self.rows[i][j];
                    if f.is_exact_zero() {
                        continue;
                    }
                    for y in j..=d - i {
                        mul_acc(&mut row[y], f, pb[j].coeff(y));
                    }
                }
                row
            })
            .collect();
        let mut out = Self::zero(&proto, d);
        for x in 0..=d {
            for y in 0..=d - x {
                let mut acc = proto.clone();
                for i in 0..=x.min(d - y).min(mi) {
                    mul_acc(&mut acc, pa[i].coeff(x), &q[i][y]);
                }
                out.rows[x][y] = acc;
            }
        }
        out
    }

    /// `F(A(T), B(T))` as a univariate series.
    pub fn eval_series(&self, a: &Series<R>, b: &Series<R>) -> Series<R> {
        let d = self.degree().min(a.degree()).min(b.degree());
        let proto = self.proto();
        let pa = a.truncate(d).powers(d);
        let pb = b.truncate(d).powers(d);
        let mut out = Series::zero(&proto, d);
        for i in 0..=d {
            let mut qi = Series::zero(&proto, d - i);
            for j in 0..=d - i {
                let f = &self.rows[i][j];
                if f.is_exact_zero() {
                    continue;
                }
                qi = qi.add(&pb[j].truncate(d - i).scale(f));
            }
            out = out.add(&pa[i].mul(&qi.truncate(d)));
        }
        out
    }

    /// `h(F(X, Y))` by truncated Horner evaluation in the bivariate ring.
    pub fn compose_outer(h: &Series<R>, f: &Self) -> Self {
        let d = h.degree().min(f.degree());
        let proto = h.proto();
        let mut acc = Self::zero(&proto, 0);
        acc.rows[0][0] = h.coeff(d).clone();
        for n in (0..d).rev() {
            let keep = d - n;
            let mut next = acc.widen(keep).mul(&f.truncate(keep));
            next.rows[0][0] = next.rows[0][0].add(h.coeff(n));
            acc = next;
        }
        acc.widen(d)
    }

    /// Pad with zeros to degree `d` (no-op when already at least `d`).
    fn widen(&self, d: usize) -> Self {
        if d <= self.degree() {
            return self.truncate(d);
        }
        let mut out = Self::zero(&self.proto(), d);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                out.rows[i][j] = x.clone();
            }
        }
        out
    }

    /// Powers `F^0, …, F^k`.
    pub fn powers(&self, k: usize) -> Vec<Self> {
        let d = self.degree();
        let mut one = Self::zero(&self.proto(), d);
        one.rows[0][0] = self.proto().one_like();
        let mut out = vec![one];
        for i in 1..=k {
            let next = out[i - 1].mul(self);
            out.push(next);
        }
        out
    }
}

impl<R: Valued> BiSeries<R> {
    /// First monomial (by total degree) where `self ≢ other (mod p^n)`.
    pub fn first_mismatch(&self, other: &Self, n: Q) -> Result<Option<(usize, usize)>> {
        let d = self.degree().min(other.degree());
        for t in 0..=d {
            for i in 0..=t {
                let j = t - i;
                if !self.rows[i][j].eq_mod_p(&other.rows[i][j], n)? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// First monomial with `ord_p < bound`.
    pub fn first_below(&self, bound: Q) -> Option<(usize, usize)> {
        self.indices().find(|&(i, j)| self.rows[i][j].ord_lower() < bound)
    }
}

/// Associativity of a bivariate law through total degree `d`:
/// compares `F(F(X,Y),Z)` and `F(X,F(Y,Z))` coefficientwise modulo `p^n`,
/// returning the first offending exponent triple.
pub fn associativity_defect<R: Valued>(f: &BiSeries<R>, d: usize, n: Q) -> Result<Option<(usize, usize, usize)>> {
    let f = f.truncate(d);
    let pw = f.powers(d);
    let proto = f.proto();
    for t in 0..=d {
        for a in 0..=t {
            for b in 0..=t - a {
                let c = t - a - b;
                let mut lhs = proto.clone();
                for i in 0..=a + b {
                    if i <= d - c {
                        mul_acc(&mut lhs, pw[i].get(a, b), f.get(i, c));
                    }
                }
                let mut rhs = proto.clone();
                for i in 0..=b + c {
                    if i <= d - a {
                        mul_acc(&mut rhs, f.get(a, i), pw[i].get(b, c));
                    }
                }
                if !lhs.eq_mod_p(&rhs, n)? {
                    return Ok(Some((a, b, c)));
                }
            }
        }
    }
    Ok(None)
}
