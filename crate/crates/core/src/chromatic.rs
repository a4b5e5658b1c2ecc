//! The connective Morava law `k(n)` over `Z_p[u]` from Hazewinkel's
//! logarithm, its grading, and the reduction mod `p` to `K(n)`.
//!
//! Degrees: `|u| = 2`, `|T| = -2`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::formal_group::{ord_text, FormalGroupLaw, Provenance, DIRECT_LIMIT};
use crate::padic::scalar::fmt_q;
use crate::padic::{Elem, FieldCtx};
use crate::ring::{Field, Ring, Valued, Q};
use crate::series::{BiSeries, Series, SymPoly};

pub type USeries = Series<SymPoly<Elem>>;

pub fn u_symbol() -> Arc<str> {
    Arc::from("u")
}

/// Prime-field scalars, used for the mod-`p` reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }
}

impl Ring for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }

    fn one_like(&self) -> Self {
        Fp::new(1, self.p)
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        Fp::new(self.v + rhs.v, self.p)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Fp::new(self.v + self.p - rhs.v, self.p)
    }

    fn neg(&self) -> Self {
        Fp::new(self.p - self.v, self.p)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Fp::new(((self.v as u128 * rhs.v as u128) % self.p as u128) as u64, self.p)
    }

    fn from_bigint_like(&self, n: &BigInt) -> Self {
        let p = BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        Fp::new(r.to_u64().unwrap(), self.p)
    }
}

/// A series in `T` over `Q_p[u^±1]` with its grading.
#[derive(Debug, Clone)]
pub struct GradedSeries {
    pub underlying: USeries,
    pub variable_degree: i64,
    pub symbol_degree: i64,
}

impl GradedSeries {
    pub fn new(underlying: USeries) -> Self {
        GradedSeries { underlying, variable_degree: -2, symbol_degree: 2 }
    }

    /// The common degree `|u|·a + |T|·b` of all monomials `u^a T^b`, or
    /// `None` if they differ.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for (b, c) in self.underlying.coeffs().iter().enumerate() {
            for (a, _) in c.terms() {
                let d = self.symbol_degree * a + self.variable_degree * b as i64;
                match deg {
                    None => deg = Some(d),
                    Some(x) if x != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn to_json(&self) -> Value {
        json!({
            "series": self.underlying.to_json(),
            "variable_degree": self.variable_degree,
            "symbol_degree": self.symbol_degree,
            "homogeneous_degree": match self.homogeneous_degree() {
                Some(d) => json!(d),
                None => json!("mixed"),
            },
        })
    }
}

/// Coefficients `b_k` of `(uT)^{q^k}` in `log_{k(n)}(uT)`, for `q^k ≤ d`:
/// `b_k = Π_{i≤k} (1 - p^{q^i - 1})^{-1} · p^{-k}`.
pub fn hazewinkel_coefficients(qp: &Arc<FieldCtx>, n: u32, d: usize) -> Result<Vec<(usize, Elem)>> {
    if n == 0 {
        return Err(Error::Invalid("height must be positive".into()));
    }
    let p = qp.p;
    let q = (p as usize).checked_pow(n).ok_or_else(|| Error::Invalid("q overflows".into()))?;
    let pb = BigInt::from(p);
    let mut out = vec![(1usize, Elem::one(qp))];
    let mut b = Elem::one(qp);
    let mut qk = q;
    while qk <= d {
        let unit = Elem::from_int(qp, &(BigInt::from(1) - pb.pow(qk as u32 - 1)));
        b = b.div(&unit)?.div(&Elem::from_int(qp, &pb))?;
        out.push((qk, b.clone()));
        qk = match qk.checked_mul(q) {
            Some(x) => x,
            None => break,
        };
    }
    Ok(out)
}

/// `u^{-1} log_{k(n)}(uT)`: the coefficient of `T^{q^k}` is `b_k u^{q^k - 1}`.
pub fn hazewinkel_log(qp: &Arc<FieldCtx>, n: u32, d: usize) -> Result<GradedSeries> {
    let sym = u_symbol();
    let zero = SymPoly::constant(&sym, Elem::zero(qp));
    let mut s = Series::zero(&zero, d);
    for (m, b) in hazewinkel_coefficients(qp, n, d)? {
        s.set(m, SymPoly::monomial(&sym, b, m as i64 - 1));
    }
    Ok(GradedSeries::new(s))
}

/// Every coefficient a polynomial in `u` with `p`-integral coefficients.
fn first_nonintegral_bi(law: &BiSeries<SymPoly<Elem>>) -> Option<(usize, usize)> {
    let zero = Q::from_integer(0);
    law.indices().find(|&(i, j)| {
        let c = law.get(i, j);
        c.has_negative_powers() || c.terms().any(|(_, x)| x.ord_lower() < zero)
    })
}

/// The `k(n)` law `u^{-1} exp(log(uT₀) + log(uT₁))` with integrality,
/// homogeneity, axiom and `u = 0` certificates.
pub fn kn_group_law(qp: &Arc<FieldCtx>, n: u32, d: usize, prec: Q) -> Result<(FormalGroupLaw<SymPoly<Elem>>, Vec<Certificate>)> {
    let log = hazewinkel_log(qp, n, d)?.underlying;
    let f = FormalGroupLaw::from_log(log, Provenance::KnChromatic, format!("k({n}) at p={}", qp.p))?;
    let mut certs = Vec::new();

    let name = format!("{}: integral over Z_p[u]", f.label);
    certs.push(match first_nonintegral_bi(&f.law) {
        None => Certificate::pass(&name),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), "polynomial in u over Z_p", "denominator"),
    });

    let name = format!("{}: homogeneous of degree -2", f.label);
    let bad = f.law.indices().find(|&(i, j)| {
        f.law.get(i, j).terms().any(|(a, _)| 2 * a - 2 * (i + j) as i64 != -2)
    });
    certs.push(match bad {
        None => Certificate::pass(&name),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), "2a - 2(i+j) = -2", "other degree"),
    });

    certs.extend(f.axioms(DIRECT_LIMIT, prec));
    certs.push(f.log_exp_inverse(prec));

    let name = format!("{}: u = 0 gives X + Y", f.label);
    let bad = f.law.indices().find(|&(i, j)| {
        let c0 = f.law.get(i, j).coeff(0);
        let want = if i + j == 1 { Elem::one(qp) } else { Elem::zero(qp) };
        !c0.eq_mod_p(&want, prec).unwrap_or(false)
    });
    certs.push(match bad {
        None => Certificate::pass(&name),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}·u^0"), "additive law", ord_text(&f.law.get(i, j).coeff(0))),
    });
    Ok((f, certs))
}

fn reduce_sym(x: &SymPoly<Elem>, p: u64) -> Result<SymPoly<Fp>> {
    let proto = Fp::new(0, p);
    let mut out = SymPoly::constant(x.symbol(), proto);
    for (a, c) in x.terms() {
        let r = c.residue()?;
        out = out.add(&SymPoly::monomial(x.symbol(), Fp::new(r[0], p), a));
    }
    Ok(out)
}

/// `[p]_{k(n)}` and its reduction mod `p`, with the `K(n)` certificates.
pub struct KnPSeries {
    pub integral: GradedSeries,
    pub mod_p: Series<SymPoly<Fp>>,
    pub certificates: Vec<Certificate>,
}

pub fn kn_p_series(f: &FormalGroupLaw<SymPoly<Elem>>, p: u64, q: usize, prec: Q) -> Result<KnPSeries> {
    let sym = u_symbol();
    let s = f.p_series(p)?;
    let d = s.degree();
    let qp = s.coeff(0).coeff(0).ctx().clone();
    let mut certs = Vec::new();
    let label = &f.label;

    let name = format!("{label}: [p] has linear coefficient p");
    let want = SymPoly::constant(&sym, Elem::from_i64(&qp, p as i64));
    certs.push(Certificate::from_result(
        &name,
        s.coeff(1).eq_mod_p(&want, prec).map(|ok| {
            if ok {
                Certificate::pass(&name)
            } else {
                Certificate::fail(&name, "T^1", "p", "other")
            }
        }),
    ));

    let name = format!("{label}: [p](T) - pT starts at T^{q}");
    let bad = (2..q.min(d + 1)).find(|&m| !s.coeff(m).is_zero());
    certs.push(match bad {
        None => Certificate::pass(&name),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), "0", "nonzero"),
    });

    let name = format!("{label}: integral over Z_p[u]");
    let zero = Q::from_integer(0);
    let bad = (0..=d).find(|&m| {
        let c = s.coeff(m);
        c.has_negative_powers() || c.terms().any(|(_, x)| x.ord_lower() < zero)
    });
    certs.push(match bad {
        None => Certificate::pass(&name),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), "polynomial in u over Z_p", "denominator"),
    });

    let mod_p = Series::new(s.coeffs().iter().map(|c| reduce_sym(c, p)).collect::<Result<Vec<_>>>()?);

    let name = format!("{label}: [p] ≡ u^{}T^{q} mod p in lowest degree", q - 1);
    let lead = mod_p.coeffs().iter().position(|c| !c.is_zero());
    let want = SymPoly::monomial(&sym, Fp::new(1, p), q as i64 - 1);
    certs.push(match lead {
        _ if q > d => Certificate::fail(&name, format!("T^{q}"), "within truncation", format!("D = {d}")),
        Some(m) if m == q && mod_p.coeff(m).sub(&want).is_zero() => Certificate::pass(&name),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), format!("u^{}T^{q}", q - 1), format!("{:?}", mod_p.coeff(m))),
        None => Certificate::fail(&name, "all", format!("u^{}T^{q}", q - 1), "zero"),
    });

    // the K(n) law mod p, iterated p times
    let fbar = f.law.map(|c| reduce_sym(c, p).expect("integral law"));
    let t = Series::var(&SymPoly::constant(&sym, Fp::new(0, p)), d);
    let mut it = t.clone();
    for _ in 1..p {
        it = fbar.eval_series(&it, &t);
    }
    let name = format!("{label}: [p] mod p = iterated K(n) sum");
    let bad = (0..=d).find(|&m| !mod_p.coeff(m).sub(it.coeff(m)).is_zero());
    certs.push(match bad {
        None => Certificate::pass(&name).with_detail(format!("through degree {d}")),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), "T +K T +K … (p times)", "differs"),
    });

    let name = format!("{label}: [p](T) = pT +k u^{}T^{q}", q - 1);
    let mut a = Series::zero(&s.proto(), d);
    a.set(1, want_p(&sym, &qp, p));
    let mut b = Series::zero(&s.proto(), d);
    if q <= d {
        b.set(q, SymPoly::monomial(&sym, Elem::one(&qp), q as i64 - 1));
    }
    let rhs = f.sum(&a, &b);
    certs.push(Certificate::from_result(
        &name,
        s.first_mismatch(&rhs, prec).map(|m| match m {
            None => Certificate::pass(&name).with_detail(format!("through degree {d}")),
            Some(m) => Certificate::fail(&name, format!("T^{m}"), "pT +k u^{q-1}T^q", "differs"),
        }),
    ));

    Ok(KnPSeries { integral: GradedSeries::new(s), mod_p, certificates: certs })
}

fn want_p(sym: &Arc<str>, qp: &Arc<FieldCtx>, p: u64) -> SymPoly<Elem> {
    SymPoly::constant(sym, Elem::from_i64(qp, p as i64))
}

/// Valuation certificates for Hazewinkel's coefficients: `ord_p b_k = -k`.
pub fn hazewinkel_valuations(qp: &Arc<FieldCtx>, n: u32, d: usize) -> Result<Certificate> {
    let name = format!("Hazewinkel log p={} n={n}: ord b_k = -k", qp.p);
    for (k, (m, b)) in hazewinkel_coefficients(qp, n, d)?.iter().enumerate() {
        let want = Q::from_integer(-(k as i64));
        if b.ord() != Some(want) {
            return Ok(Certificate::fail(&name, format!("(uT)^{m}"), fmt_q(&want), ord_text(b)));
        }
    }
    Ok(Certificate::pass(&name))
}

/// `k(L)`: a law over `O_L` moved to `O_L[u]` by `T ↦ uT` conjugation,
/// `a_{ij} ↦ a_{ij} u^{i+j-1}`.
pub fn graded_lift(f: &FormalGroupLaw) -> FormalGroupLaw<SymPoly<Elem>> {
    let sym = u_symbol();
    let law = BiSeries::from_fn(&SymPoly::constant(&sym, f.proto()), f.degree(), |i, j| {
        let c = f.law.get(i, j);
        if i + j == 0 {
            SymPoly::constant(&sym, c.clone())
        } else {
            SymPoly::monomial(&sym, c.clone(), i as i64 + j as i64 - 1)
        }
    });
    let lift = |s: &Series<Elem>| {
        Series::from_fn(&SymPoly::constant(&sym, f.proto()), s.degree(), |m| {
            if m == 0 {
                SymPoly::constant(&sym, s.coeff(0).clone())
            } else {
                SymPoly::monomial(&sym, s.coeff(m).clone(), m as i64 - 1)
            }
        })
    };
    FormalGroupLaw {
        law,
        log: lift(&f.log),
        exp: lift(&f.exp),
        uniformizer: f.uniformizer.as_ref().map(|x| SymPoly::constant(&sym, x.clone())),
        provenance: Provenance::BaseChange(Box::new(f.provenance.clone())),
        label: format!("k({})", f.proto().ctx().label),
    }
}

/// How the `k(n)` law sits relative to `BP` and its unramified twist.
pub fn araki_shape_note() -> Value {
    json!({
        "bp": "[p]_BP(z) = Σ^BP v_i z^{p^i} in Araki's generators; the Baas–Sullivan quotient sets v_i = 0 for i ≠ 0, n and v_n = u^{q-1}, with v_0 = p, so that [p]_{k(n)}(T) = pT +_{k(n)} u^{q-1}T^q",
        "unramified": "tensoring with W(F_q) gives k(L₀) for the unramified extension of degree n; the law is unchanged, only coefficients are extended",
        "reduction": "mod p the law is the K(n) law and [p]_{K(n)}(T) = u^{q-1}T^q",
        "naming": "the logarithm implemented is Hazewinkel's, log(uT) = uT + Σ_k Π_{i≤k}(1 - p^{q^i-1})^{-1} p^{-k} (uT)^{q^k}",
    })
}

#[cfg(test)]
mod tests;
