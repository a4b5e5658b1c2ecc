//! Totally ramified tower steps `M = K[x]/(g)` with `g` Eisenstein over `K`.
//!
//! The top field is stored flat, as `W[π₀]/(E_M)` where `E_M` is the
//! characteristic polynomial of the new root over `W`; the node keeps enough
//! data to move between the flat form and coordinates over the base.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::{Elem, FieldCtx};
use super::linalg::{charpoly, determinant, solve, trace};
use crate::error::{Error, Result};
use crate::ring::{Ring, Valued, Q};

/// The unramified field `W[1/p]` underlying `ctx`, at precision `cap`.
pub fn unramified_of(ctx: &FieldCtx, cap: i64) -> Arc<FieldCtx> {
    let f = ctx.f;
    let mut c0 = vec![BigInt::zero(); f];
    c0[0] = -ctx.pb.clone();
    let mut one = vec![BigInt::zero(); f];
    one[0] = BigInt::from(1);
    FieldCtx::new(ctx.p, ctx.unramified.clone(), vec![c0, one], cap, format!("W({})", ctx.label))
        .expect("unramified field of a valid context")
}

/// Symmetric integer coordinates of an integral element of `W`.
fn w_ints(w: &Elem) -> Result<Vec<BigInt>> {
    let f = w.ctx().f;
    if w.is_zero() {
        return Ok(vec![BigInt::zero(); f]);
    }
    if w.shift() < 0 {
        return Err(Error::NotEisenstein("non-integral coefficient".into()));
    }
    let m = w.ctx().ppow(w.prec() - w.shift());
    let s = w.ctx().ppow(w.shift());
    Ok(w.raw_coords()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if &c * 2 > m {
                c -= &m;
            }
            c * &s
        })
        .collect())
}

/// A tower step over `base`.
#[derive(Debug, Clone)]
pub struct TowerNode {
    pub base: Arc<FieldCtx>,
    pub top: Arc<FieldCtx>,
    k0: Arc<FieldCtx>,
    /// Defining polynomial over the base, low to high, monic.
    pub poly: Vec<Elem>,
    /// The distinguished root, a uniformizer of the top field.
    pub root: Elem,
    /// Image of the base uniformizer in the top field.
    pub base_uniformizer: Elem,
    reps: Vec<Vec<Elem>>,
}

/// Check the Eisenstein condition over `base` for a monic polynomial.
pub fn check_eisenstein(base: &Arc<FieldCtx>, poly: &[Elem]) -> Result<()> {
    let m = poly.len().checked_sub(1).filter(|&m| m >= 1).ok_or_else(|| {
        Error::NotEisenstein("degree must be at least one".into())
    })?;
    if !poly[m].eq_mod(&Elem::one(base), base.cap.min(poly[m].prec())).unwrap_or(false) {
        return Err(Error::NotEisenstein("polynomial must be monic".into()));
    }
    let zero = Q::from_integer(0);
    for (i, c) in poly.iter().enumerate().take(m) {
        if c.ord_lower() <= zero {
            return Err(Error::NotEisenstein(format!("coefficient of x^{i} is not in the maximal ideal")));
        }
    }
    if poly[0].ord() != Some(Q::new(1, base.e as i64)) {
        return Err(Error::NotEisenstein("constant term is not a uniformizer".into()));
    }
    Ok(())
}

/// Adjoin a root of the Eisenstein polynomial `poly` (coefficients in `base`,
/// low to high) and return the tower step.
pub fn adjoin_root(base: &Arc<FieldCtx>, poly: &[Elem], label: &str) -> Result<TowerNode> {
    check_eisenstein(base, poly)?;
    let m = poly.len() - 1;
    let eb = base.e;
    let big = eb * m;
    let k0 = unramified_of(base, base.cap + 2 * big as i64 + 8);
    let idx = |a: usize, b: usize| b * eb + a;
    let zero = Elem::zero(&k0);
    let mut mat = vec![vec![zero.clone(); big]; big];
    let pis: Vec<Elem> = {
        let u = Elem::uniformizer(base);
        let mut v = vec![Elem::one(base)];
        for _ in 1..eb {
            let last = v.last().unwrap().mul(&u);
            v.push(last);
        }
        v
    };
    for b in 0..m {
        for a in 0..eb {
            let col = idx(a, b);
            if b + 1 < m {
                mat[idx(a, b + 1)][col] = Elem::one(&k0);
            } else {
                for (i, g) in poly.iter().enumerate().take(m) {
                    let h = pis[a].mul(g);
                    for (c, part) in h.w_parts(&k0).into_iter().enumerate() {
                        let r = idx(c, i);
                        mat[r][col] = mat[r][col].sub(&part);
                    }
                }
            }
        }
    }
    let cp = charpoly(&mat);
    let mut flat = Vec::with_capacity(big + 1);
    for k in 0..=big {
        flat.push(w_ints(&cp[big - k])?);
    }
    let top = FieldCtx::new(base.p, base.unramified.clone(), flat, base.cap, label)?;
    let root = Elem::uniformizer(&top);

    let base_uniformizer = if eb == 1 {
        Elem::uniformizer(base).map_into(&top, &Elem::zero(&top))
    } else {
        // coordinates of π₀^k in the basis ϖ^a π₀^b
        let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(big);
        let mut v = vec![zero.clone(); big];
        v[0] = Elem::one(&k0);
        for _ in 0..big {
            let next: Vec<Elem> = (0..big)
                .map(|r| {
                    let mut acc = zero.clone();
                    for (c, x) in v.iter().enumerate() {
                        if !x.is_zero() && !mat[r][c].is_zero() {
                            acc = acc.add(&mat[r][c].mul(x));
                        }
                    }
                    acc
                })
                .collect();
            cols.push(std::mem::replace(&mut v, next));
        }
        let rows: Vec<Vec<Elem>> = (0..big).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let mut rhs = vec![zero.clone(); big];
        rhs[idx(1, 0)] = Elem::one(&k0);
        let x = solve(&rows, &rhs)?;
        let mut acc = Elem::zero(&top);
        let mut pw = Elem::one(&top);
        for xk in &x {
            acc = acc.add(&Elem::from_unramified(&top, xk).mul(&pw));
            pw = pw.mul(&root);
        }
        acc
    };

    let mut reps = Vec::with_capacity(big);
    let mut cur = vec![Elem::zero(base); m];
    cur[0] = Elem::one(base);
    for _ in 0..big {
        let over = cur[m - 1].clone();
        let mut next = vec![Elem::zero(base); m];
        for b in (1..m).rev() {
            next[b] = cur[b - 1].clone();
        }
        if !over.is_zero() {
            for i in 0..m {
                next[i] = next[i].sub(&over.mul(&poly[i]));
            }
        }
        reps.push(std::mem::replace(&mut cur, next));
    }
    Ok(TowerNode { base: base.clone(), top, k0, poly: poly.to_vec(), root, base_uniformizer, reps })
}

impl TowerNode {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Embed an element of the base.
    pub fn embed(&self, x: &Elem) -> Elem {
        x.map_into(&self.top, &self.base_uniformizer)
    }

    /// Coordinates over the base in the basis `1, π₀, …, π₀^{m-1}`.
    pub fn to_tower(&self, x: &Elem) -> Vec<Elem> {
        let m = self.degree();
        let mut acc = vec![Elem::zero(&self.base); m];
        for (i, w) in x.w_parts(&self.k0).into_iter().enumerate() {
            if w.is_exact_zero() {
                continue;
            }
            let wb = Elem::from_unramified(&self.base, &w);
            for b in 0..m {
                acc[b] = acc[b].add(&wb.mul(&self.reps[i][b]));
            }
        }
        acc
    }

    pub fn to_flat(&self, v: &[Elem]) -> Elem {
        let mut acc = Elem::zero(&self.top);
        let mut pw = Elem::one(&self.top);
        for c in v {
            acc = acc.add(&self.embed(c).mul(&pw));
            pw = pw.mul(&self.root);
        }
        acc
    }

    fn mult_matrix(&self, x: &Elem) -> Vec<Vec<Elem>> {
        let m = self.degree();
        let mut cols = Vec::with_capacity(m);
        let mut y = x.clone();
        for _ in 0..m {
            cols.push(self.to_tower(&y));
            y = y.mul(&self.root);
        }
        (0..m).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
    }

    /// Relative norm and trace down to the base.
    pub fn norm_trace(&self, x: &Elem) -> (Elem, Elem) {
        let a = self.mult_matrix(x);
        (determinant(&a), trace(&a))
    }
}

/// Norm and trace of a flat element down to `Q_p`, as elements of `qp`.
pub fn norm_trace_to_qp(x: &Elem, qp: &Arc<FieldCtx>) -> (Elem, Elem) {
    let ctx = x.ctx();
    let n = ctx.degree();
    let u = Elem::uniformizer(ctx);
    let t = Elem::unramified_generator(ctx);
    let mut basis = Vec::with_capacity(n);
    let mut pi_pow = Elem::one(ctx);
    for _ in 0..ctx.e {
        let mut tp = pi_pow.clone();
        for _ in 0..ctx.f {
            basis.push(tp.clone());
            tp = tp.mul(&t);
        }
        pi_pow = pi_pow.mul(&u);
    }
    let cols: Vec<Vec<Elem>> = basis.iter().map(|b| x.mul(b).qp_parts(qp)).collect();
    let a: Vec<Vec<Elem>> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    (determinant(&a), trace(&a))
}

/// Norm and trace of a flat element down to the unramified subfield.
pub fn norm_trace_to_unramified(x: &Elem, k0: &Arc<FieldCtx>) -> (Elem, Elem) {
    let ctx = x.ctx();
    let u = Elem::uniformizer(ctx);
    let mut cols = Vec::with_capacity(ctx.e);
    let mut y = x.clone();
    for _ in 0..ctx.e {
        cols.push(y.w_parts(k0));
        y = y.mul(&u);
    }
    let a: Vec<Vec<Elem>> = (0..ctx.e).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    (determinant(&a), trace(&a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(k: &Arc<FieldCtx>, c: &[i64]) -> Vec<Elem> {
        c.iter().map(|&x| Elem::from_i64(k, x)).collect()
    }

    #[test]
    fn cyclotomic_step_over_q5() {
        let k = FieldCtx::qp(5, 30);
        let node = adjoin_root(&k, &poly(&k, &[5, 0, 0, 0, 1]), "Q_5(p0)").unwrap();
        assert_eq!(node.top.e, 4);
        assert_eq!(node.root.ord(), Some(Q::new(1, 4)));
        // norm of p0 is (-1)^4 * 5
        let (n, t) = node.norm_trace(&node.root);
        assert!(n.eq_mod(&Elem::from_i64(&k, 5), 25).unwrap());
        assert!(t.is_zero());
    }

    #[test]
    fn two_step_tower_flattens() {
        // Q_3(√-3) then x^2 + π
        let k = FieldCtx::qp(3, 30);
        let l = adjoin_root(&k, &poly(&k, &[3, 0, 1]), "Q_3(√-3)").unwrap();
        let pi = Elem::uniformizer(&l.top);
        let mut g = vec![pi.clone(), Elem::zero(&l.top), Elem::one(&l.top)];
        let lt = adjoin_root(&l.top, &g, "L~").unwrap();
        assert_eq!(lt.top.e, 4);
        assert_eq!(lt.root.ord(), Some(Q::new(1, 4)));
        // ϖ_L image satisfies π^2 = -3
        let img = &lt.base_uniformizer;
        assert!(img.mul(img).eq_mod(&Elem::from_i64(&lt.top, -3), 25).unwrap());
        // round trip through tower coordinates
        let x = lt.root.add(&Elem::from_i64(&lt.top, 7)).mul(&lt.root);
        let back = lt.to_flat(&lt.to_tower(&x));
        assert!(back.eq_mod(&x, 25).unwrap());
        g.clear();
        // multiplicativity of the norm
        let y = lt.root.pow(3).add(&Elem::from_i64(&lt.top, 2));
        let (nx, _) = lt.norm_trace(&x);
        let (ny, _) = lt.norm_trace(&y);
        let (nxy, _) = lt.norm_trace(&x.mul(&y));
        assert!(nx.mul(&ny).eq_mod(&nxy, 20).unwrap());
    }

    #[test]
    fn flat_norm_to_qp() {
        let k = FieldCtx::qp(3, 30);
        let l = adjoin_root(&k, &poly(&k, &[3, 0, 1]), "Q_3(√-3)").unwrap();
        let (n, t) = norm_trace_to_qp(&Elem::uniformizer(&l.top), &k);
        assert!(n.eq_mod(&Elem::from_i64(&k, 3), 25).unwrap());
        assert!(t.is_zero());
    }

    #[test]
    fn rejects_non_eisenstein_step() {
        let k = FieldCtx::qp(3, 30);
        assert!(adjoin_root(&k, &poly(&k, &[9, 0, 1]), "bad").is_err());
        assert!(adjoin_root(&k, &poly(&k, &[3, 1, 1]), "bad").is_err());
    }
}
