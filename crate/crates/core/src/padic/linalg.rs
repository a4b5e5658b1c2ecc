//! Division-free characteristic polynomials and pivoted elimination.

use crate::error::{Error, Result};
use crate::ring::{Field, Ring, Valued};

/// Characteristic polynomial `det(xI - A)` of a square matrix, returned
/// from the leading coefficient down: `[1, c_1, …, c_n]`.
///
/// Berkowitz's algorithm; uses only ring operations, so precision loss is
/// limited to what the entries themselves carry.
pub fn charpoly<R: Ring>(a: &[Vec<R>]) -> Vec<R> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n));
    let one = a[0][0].one_like();
    let mut c = vec![one.clone(), a[0][0].neg()];
    for k in 1..n {
        // leading principal block is 0..k, new index k
        let r: Vec<R> = (0..k).map(|j| a[k][j].clone()).collect();
        let mut s: Vec<R> = (0..k).map(|i| a[i][k].clone()).collect();
        let mut t = Vec::with_capacity(k + 2);
        t.push(one.clone());
        t.push(a[k][k].neg());
        for _ in 0..k {
            let rs = dot(&r, &s);
            t.push(rs.neg());
            s = (0..k)
                .map(|i| dot(&a[i][..k], &s))
                .collect();
        }
        let mut nc = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut acc = one.zero_like();
            for j in 0..c.len().min(i + 1) {
                let tt = &t[i - j];
                if !tt.is_zero() && !c[j].is_zero() {
                    acc = acc.add(&tt.mul(&c[j]));
                }
            }
            nc.push(acc);
        }
        c = nc;
    }
    c
}

fn dot<R: Ring>(a: &[R], b: &[R]) -> R {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

pub fn determinant<R: Ring>(a: &[Vec<R>]) -> R {
    let c = charpoly(a);
    let n = a.len();
    let last = c[n].clone();
    if n % 2 == 1 {
        last.neg()
    } else {
        last
    }
}

pub fn trace<R: Ring>(a: &[Vec<R>]) -> R {
    let mut acc = a[0][0].zero_like();
    for (i, row) in a.iter().enumerate() {
        acc = acc.add(&row[i]);
    }
    acc
}

/// Solve `M x = b` by Gaussian elimination, pivoting on the entry of least
/// valuation in each column.
pub fn solve<R: Field + Valued>(m: &[Vec<R>], b: &[R]) -> Result<Vec<R>> {
    let n = m.len();
    let mut a: Vec<Vec<R>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by(|&x, &y| a[x][col].ord().unwrap().cmp(&a[y][col].ord().unwrap()))
            .ok_or_else(|| Error::precision("singular matrix in elimination"))?;
        a.swap(col, piv);
        let inv = a[col][col].inv()?;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].mul(&inv);
            for k in col..=n {
                if !a[col][k].is_zero() {
                    let t = factor.mul(&a[col][k]);
                    a[r][k] = a[r][k].sub(&t);
                }
            }
        }
    }
    (0..n).map(|i| a[i][n].div(&a[i][i])).collect()
}
