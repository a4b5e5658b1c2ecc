//! Lubin–Tate towers: primitive torsion, the `π₀`-rescaled law, the character
//! series `ε⁰` with a symbolic period, Galois equivariance and the valuation
//! bookkeeping of periods, differents and Tate twists.
//!
//! Series over `L̃ = L(π₀)` are assembled from data over `L` and `Q_p`: if
//! `A(T) = u^{-1} B(uT)` then `[T^n] A^k = u^{n-k} [T^n] B^k`, so every heavy
//! composition happens in the small field.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::formal_group::{fgl_multiplicative, ord_text, special_lubin_tate, FormalGroupLaw};
use crate::padic::lifts::{hensel_root, poly_derivative, poly_eval};
use crate::padic::scalar::{fmt_q, ser_q};
use crate::padic::tower::norm_trace_to_qp;
use crate::padic::{adjoin_root, different_valuation, Elem, FieldCtx, TowerNode};
use crate::ring::{Field, Ring, Valued, Q};
use crate::series::{BiSeries, Series, SymPoly};

/// Series whose coefficients are Laurent polynomials in one symbol.
pub type SymSeries = Series<SymPoly<Elem>>;

/// Degree through which symbolic identities are also checked by Horner
/// substitution into the source law.
pub const HORNER_LIMIT: usize = 12;

/// Field degree up to which log-expanded symbolic checks run at full `D`.
const SMALL_FIELD: usize = 4;

/// `[1, x, …, x^d]`.
pub fn pow_list<R: Ring>(x: &R, d: usize) -> Vec<R> {
    let mut v = Vec::with_capacity(d + 1);
    v.push(x.one_like());
    for i in 1..=d {
        let next = v[i - 1].mul(x);
        v.push(next);
    }
    v
}

/// `Σ_{n≥1} Σ_{1≤k≤n} f(n, k) s^{sign·k} T^n`.
pub fn sym_series(sym: &Arc<str>, proto: &Elem, d: usize, sign: i64, mut f: impl FnMut(usize, usize) -> Elem) -> SymSeries {
    let zero = SymPoly::constant(sym, proto.zero_like());
    let mut c = vec![zero];
    for n in 1..=d {
        let mut row: Vec<Elem> = (1..=n).map(|k| f(n, k)).collect();
        c.push(if sign > 0 {
            SymPoly::from_coeffs(sym, proto, 1, row)
        } else {
            row.reverse();
            SymPoly::from_coeffs(sym, proto, -(n as i64), row)
        });
    }
    Series::new(c)
}

/// Numeric series as symbolic constants.
pub fn lift_sym(s: &Series<Elem>, sym: &Arc<str>) -> SymSeries {
    s.map(|x| SymPoly::constant(sym, x.clone()))
}

pub fn lift_sym_bi(s: &BiSeries<Elem>, sym: &Arc<str>) -> BiSeries<SymPoly<Elem>> {
    s.map(|x| SymPoly::constant(sym, x.clone()))
}

/// `h(s) = Σ_k h_k s^k T^k` for scalars `h_k`.
pub fn sym_diagonal(sym: &Arc<str>, h: &[Elem]) -> SymSeries {
    Series::new(
        h.iter()
            .enumerate()
            .map(|(k, c)| SymPoly::monomial(sym, c.clone(), k as i64))
            .collect(),
    )
}

fn first_power(a: &SymPoly<Elem>, b: &SymPoly<Elem>, n: Q) -> Result<i64> {
    let d = a.sub(b);
    for (k, c) in d.terms() {
        if !c.eq_mod_p(&c.zero_like(), n)? {
            return Ok(k);
        }
    }
    Ok(0)
}

/// First `(degree, symbol power)` where two symbolic series differ mod `p^n`.
pub fn sym_mismatch(a: &SymSeries, b: &SymSeries, n: Q) -> Result<Option<(usize, i64)>> {
    match a.first_mismatch(b, n)? {
        None => Ok(None),
        Some(k) => Ok(Some((k, first_power(a.coeff(k), b.coeff(k), n)?))),
    }
}

pub fn sym_mismatch_bi(
    a: &BiSeries<SymPoly<Elem>>,
    b: &BiSeries<SymPoly<Elem>>,
    n: Q,
) -> Result<Option<(usize, usize, i64)>> {
    match a.first_mismatch(b, n)? {
        None => Ok(None),
        Some((i, j)) => Ok(Some((i, j, first_power(a.get(i, j), b.get(i, j), n)?))),
    }
}

/// First `(degree, symbol power)` with a coefficient of negative `ord_p`.
pub fn sym_first_nonintegral(s: &SymSeries) -> Option<(usize, i64)> {
    let zero = Q::from_integer(0);
    for n in 0..=s.degree() {
        for (k, c) in s.coeff(n).terms() {
            if c.ord_lower() < zero {
                return Some((n, k));
            }
        }
    }
    None
}

fn bi_check(
    name: &str,
    sym: &str,
    lhs: &BiSeries<SymPoly<Elem>>,
    rhs: &BiSeries<SymPoly<Elem>>,
    n: Q,
    detail: String,
) -> Certificate {
    Certificate::from_result(
        name,
        sym_mismatch_bi(lhs, rhs, n).map(|m| match m {
            None => Certificate::pass(name).with_detail(detail),
            Some((i, j, k)) => {
                Certificate::fail(name, format!("X^{i}Y^{j}·{sym}^{k}"), "both sides agree", "coefficients differ")
            }
        }),
    )
}

/// `p₀` with `p₀^{p-1} = -p`, found in `ctx` when `p - 1` divides the
/// ramification index and the residue field holds the needed root.
pub fn find_p0(ctx: &Arc<FieldCtx>) -> Result<Elem> {
    let p = ctx.p;
    let m = (p - 1) as usize;
    if ctx.e % m != 0 {
        return Err(Error::Unsupported(format!("{}: p - 1 does not divide e, so p₀ is not in the field", ctx.label)));
    }
    let k = ctx.e / m;
    let u = Elem::uniformizer(ctx);
    let v = Elem::from_i64(ctx, -(p as i64)).div(&u.pow((k * m) as u64))?;
    let res = ctx.residue.normalize(&v.residue()?);
    let seed = ctx
        .residue
        .elements()
        .find(|r| !ctx.residue.is_zero(r) && ctx.residue.normalize(&ctx.residue.pow(r, m as u128)) == res)
        .ok_or_else(|| Error::Unsupported(format!("{}: -p/π^{} has no (p-1)-th root", ctx.label, k * m)))?;
    let mut poly = vec![v.neg()];
    poly.extend((1..m).map(|_| Elem::zero(ctx)));
    poly.push(Elem::one(ctx));
    let root = if m == 1 { v.clone() } else { hensel_root(&poly, &Elem::lift_residue(ctx, &seed))? };
    Ok(u.pow(k as u64).mul(&root))
}

/// `L`, its special Lubin–Tate law and the step `L̃ = L(π₀)`, `π₀^{q-1} = -π`.
pub struct LtTower {
    pub base: Arc<FieldCtx>,
    pub qp: Arc<FieldCtx>,
    pub node: TowerNode,
    pub pi: Elem,
    pub pi0: Elem,
    pub p0: Elem,
    pub q: u64,
    /// Special law over `L`: `[π](T) = πT + T^q`.
    pub lt: FormalGroupLaw,
    /// `E'(π)`, a generator of the different of `L` (1 when unramified).
    pub different: Elem,
    log_pows: OnceLock<Vec<Series<Elem>>>,
}

impl LtTower {
    pub fn new(base: &Arc<FieldCtx>, d: usize) -> Result<Self> {
        let pi = Elem::uniformizer(base);
        let q = base.q();
        let mut poly = vec![pi.clone()];
        poly.extend((1..q - 1).map(|_| Elem::zero(base)));
        poly.push(Elem::one(base));
        let node = adjoin_root(base, &poly, &format!("{}(π₀)", base.label))?;
        let pi0 = node.root.clone();
        let p0 = find_p0(&node.top)?;
        let lt = special_lubin_tate(base, d)?;
        let different = if base.e == 1 {
            Elem::one(base)
        } else {
            let e: Vec<Elem> = base.eisenstein.iter().map(|w| Elem::from_w(base, w)).collect();
            poly_eval(&poly_derivative(&e), &pi)
        };
        let qp = FieldCtx::qp(base.p, base.cap);
        Ok(LtTower { base: base.clone(), qp, node, pi, pi0, p0, q, lt, different, log_pows: OnceLock::new() })
    }

    pub fn top(&self) -> &Arc<FieldCtx> {
        &self.node.top
    }

    pub fn degree(&self) -> usize {
        self.lt.degree()
    }

    pub fn embed(&self, x: &Elem) -> Elem {
        self.node.embed(x)
    }

    pub fn from_qp(&self, x: &Elem) -> Elem {
        x.map_into(self.top(), &Elem::zero(self.top()))
    }

    /// `Q_p → L`.
    pub fn qp_to_base(&self, x: &Elem) -> Elem {
        x.map_into(&self.base, &Elem::zero(&self.base))
    }

    /// Powers `λ^0, …, λ^D` of the logarithm over `L`.
    pub fn log_powers(&self) -> &[Series<Elem>] {
        self.log_pows.get_or_init(|| self.lt.log.powers(self.degree()))
    }

    /// `F_{L̃}(X, Y) = π₀^{-1} F_L(π₀X, π₀Y)` over `L̃`.
    pub fn rescaled_law(&self) -> Result<FormalGroupLaw> {
        self.lt
            .base_change(|x| self.embed(x), &format!("LT({})", self.top().label))
            .rescale(&self.pi0, "π₀")
    }

    /// `G̃_m(X, Y) = X + Y + p₀XY` over `L̃`.
    pub fn gm_tilde(&self) -> Result<FormalGroupLaw> {
        let g = fgl_multiplicative(self.top(), self.degree())?;
        let mut g = g.rescale(&self.p0, "p₀")?;
        g.label = format!("G̃m({})", self.top().label);
        Ok(g)
    }

    /// `p₀^{k-1}/k!`, the coefficients of `exp_{G̃m}`, for `k ≤ D`.
    pub fn gm_tilde_exp(&self) -> Result<Vec<Elem>> {
        let top = self.top();
        let mut out = vec![Elem::zero(top)];
        let mut fact = BigInt::from(1);
        let mut p0k = Elem::one(top);
        for k in 1..=self.degree() {
            fact *= k;
            out.push(p0k.div(&Elem::from_int(top, &fact))?);
            p0k = p0k.mul(&self.p0);
        }
        Ok(out)
    }

    /// `π₀` with a certificate that `[π](π₀) = 0` when the computed
    /// `[π]`-series is evaluated at `π₀`.
    pub fn primitive_torsion(&self, n: Q) -> Result<(Elem, Certificate)> {
        let name = format!("{}: [π](π₀) = 0", self.lt.label);
        let s = self.lt.endomorphism(&self.pi)?.series;
        let mut acc = Elem::zero(self.top());
        let mut pw = Elem::one(self.top());
        for k in 1..=s.degree() {
            pw = pw.mul(&self.pi0);
            let c = s.coeff(k);
            if !c.is_exact_zero() {
                acc = acc.add(&self.embed(c).mul(&pw));
            }
        }
        // the untruncated tail has ord ≥ (D + 1)·ord π₀
        let tail = Q::from_integer(s.degree() as i64 + 1) * self.pi0.ord().unwrap_or(Q::from_integer(0));
        let bound = n.min(tail);
        let cert = if acc.ord_lower() >= bound {
            Certificate::pass(&name).with_detail(format!("residual {} ≥ {}", ord_text(&acc), fmt_q(&bound)))
        } else {
            Certificate::fail(&name, "[π](π₀)", format!("ord_p >= {}", fmt_q(&bound)), ord_text(&acc))
        };
        Ok((self.pi0.clone(), cert))
    }
}

/// A Galois element seen through its images `κ_L(σ) ∈ O_L^×` and
/// `κ_{Q_p}(σ) = N(κ_L(σ))`.
#[derive(Debug, Clone)]
pub struct GaloisUnit {
    pub kappa_l: Elem,
    pub kappa_qp: Elem,
}

impl GaloisUnit {
    pub fn new(kappa_l: Elem, qp: &Arc<FieldCtx>) -> Result<Self> {
        if kappa_l.ord() != Some(Q::from_integer(0)) {
            return Err(Error::NotUnit(format!("κ_L with {}", ord_text(&kappa_l))));
        }
        let (norm, _) = norm_trace_to_qp(&kappa_l, qp);
        if norm.ord() != Some(Q::from_integer(0)) {
            return Err(Error::NotUnit("norm of κ_L".into()));
        }
        Ok(GaloisUnit { kappa_l, kappa_qp: norm })
    }

    pub fn random(l: &Arc<FieldCtx>, qp: &Arc<FieldCtx>, rng: &mut impl Rng) -> Result<Self> {
        Self::new(random_unit(l, rng), qp)
    }

    /// `κ_L/κ_{Q_p}`, the factor picked up by `Ω₀`, computed in `L`.
    pub fn multiplier(&self, l: &Arc<FieldCtx>) -> Result<Elem> {
        let n = self.kappa_qp.map_into(l, &Elem::zero(l));
        self.kappa_l.div(&n)
    }
}

/// A random unit of the ring of integers (exact, coordinates below `2^64`).
pub fn random_unit(ctx: &Arc<FieldCtx>, rng: &mut impl Rng) -> Elem {
    loop {
        let c: Vec<BigInt> = (0..ctx.degree()).map(|_| BigInt::from(rng.gen::<u64>())).collect();
        let x = Elem::from_int_coords(ctx, c);
        if x.ord() == Some(Q::from_integer(0)) {
            return x;
        }
    }
}

/// A random element of `Z_p` (as an element of `ctx`).
pub fn random_integer(ctx: &Arc<FieldCtx>, rng: &mut impl Rng) -> Elem {
    Elem::from_int(ctx, &BigInt::from(rng.gen::<u64>()))
}

/// Symbol used for the unit period.
pub fn omega0_symbol() -> Arc<str> {
    Arc::from("Ω₀")
}

/// `ε⁰(T) = exp_{G̃m}(Ω₀ · log_{L̃}(T))` with `Ω₀` symbolic, assembled as
/// `[T^n Ω₀^k] = e_k π₀^{n-k} [T^n] λ^k`, `e_k = p₀^{k-1}/k!`.
pub fn epsilon0_series(t: &LtTower) -> Result<SymSeries> {
    let d = t.degree();
    let e = t.gm_tilde_exp()?;
    let pi0 = pow_list(&t.pi0, d);
    let pows = t.log_powers();
    let proto = Elem::zero(t.top());
    Ok(sym_series(&omega0_symbol(), &proto, d, 1, |n, k| {
        let c = pows[k].coeff(n);
        if c.is_exact_zero() {
            proto.clone()
        } else {
            t.embed(c).mul(&e[k]).mul(&pi0[n - k])
        }
    }))
}

/// Integrality, normalization and homomorphism certificates for `ε⁰`.
pub fn epsilon0_certificates(t: &LtTower, eps: &SymSeries, n: Q, rng: &mut impl Rng) -> Vec<Certificate> {
    let sym = omega0_symbol();
    let mut out = Vec::new();
    let label = &t.base.label;

    let name = format!("ε⁰({label}): integral in Ω₀");
    out.push(match sym_first_nonintegral(eps) {
        None => Certificate::pass(&name),
        Some((k, j)) => Certificate::fail(&name, format!("T^{k}·Ω₀^{j}"), "ord_p >= 0", ord_text(&eps.coeff(k).coeff(j))),
    });

    let name = format!("ε⁰({label}): linear term Ω₀");
    let want = SymPoly::monomial(&sym, Elem::one(t.top()), 1);
    out.push(Certificate::from_result(
        &name,
        eps.coeff(1).eq_mod_p(&want, n).map(|ok| {
            if ok {
                Certificate::pass(&name)
            } else {
                Certificate::fail(&name, "T^1", "Ω₀", "other")
            }
        }),
    ));

    out.push(Certificate::from_result(
        &format!("ε⁰({label}): transported homomorphism over L[Ω]"),
        epsilon_transport(t, eps, n),
    ));
    out.push(Certificate::from_result(
        &format!("ε⁰({label}): homomorphism F_L̃ → G̃m (log-expanded)"),
        epsilon_log_expanded(t, eps, n),
    ));
    out.push(Certificate::from_result(
        &format!("ε⁰({label}): homomorphism F_L̃ → G̃m (Horner)"),
        epsilon_horner(t, eps, n),
    ));
    let omega = random_unit(t.top(), rng);
    out.push(Certificate::from_result(
        &format!("ε⁰({label}): homomorphism at a random unit Ω₀"),
        epsilon_specialized(t, eps, &omega, n),
    ));
    out
}

/// `ε_L = exp_{Ĝm}(Ω log_L)` over `L[Ω]` is a homomorphism `F_L → Ĝm`
/// through `D`, and `ε⁰(T) = p₀^{-1} ε_L(π₀T)` under `Ω = p₀π₀^{-1}Ω₀`.
fn epsilon_transport(t: &LtTower, eps: &SymSeries, n: Q) -> Result<Certificate> {
    let name = format!("ε⁰({}): transported homomorphism over L[Ω]", t.base.label);
    let d = t.degree();
    let sym: Arc<str> = Arc::from("Ω");
    let base = &t.base;
    let pows = t.log_powers();
    let zero = Elem::zero(base);
    let mut inv_fact = vec![Elem::one(base)];
    let mut fact = BigInt::from(1);
    for k in 1..=d {
        fact *= k;
        inv_fact.push(Elem::from_ratio(base, &BigInt::from(1), &fact)?);
    }
    let psi = sym_series(&sym, &zero, d, 1, |n, k| {
        let c = pows[k].coeff(n);
        if c.is_exact_zero() {
            zero.clone()
        } else {
            c.mul(&inv_fact[k])
        }
    });
    let mut h0 = inv_fact.clone();
    h0[0] = zero.clone();
    let h = sym_diagonal(&sym, &h0);
    let lam = lift_sym(&t.lt.log, &sym);
    let lhs = BiSeries::subst_sum(&h, &lam, &lam);
    let gm = fgl_multiplicative(base, d)?;
    let rhs = lift_sym_bi(&gm.law, &sym).bilinear(&psi, &psi);
    if let Some((i, j, k)) = sym_mismatch_bi(&lhs, &rhs, n)? {
        return Ok(Certificate::fail(&name, format!("X^{i}Y^{j}·Ω^{k}"), "ε_L(X +_L Y) = ε_L(X) +_Gm ε_L(Y)", "differs"));
    }
    // transport: [T^n Ω₀^k] ε⁰ = p₀^{k-1} π₀^{n-k} [T^n Ω^k] ε_L
    let p0 = pow_list(&t.p0, d);
    let pi0 = pow_list(&t.pi0, d);
    for m in 1..=d {
        for k in 1..=m {
            let want = t.embed(&psi.coeff(m).coeff(k as i64)).mul(&p0[k - 1]).mul(&pi0[m - k]);
            if !eps.coeff(m).coeff(k as i64).eq_mod_p(&want, n)? {
                return Ok(Certificate::fail(&name, format!("T^{m}·Ω₀^{k}"), "p₀^{k-1}π₀^{n-k}·[ε_L]", "differs"));
            }
        }
    }
    Ok(Certificate::pass(&name).with_detail(format!("through degree {d}")))
}

/// `ε⁰(X +_{L̃} Y)` expanded as `exp_{G̃m}(Ω₀(ℓX + ℓY))` against the
/// three-term law applied to `ε⁰`.
fn epsilon_log_expanded(t: &LtTower, eps: &SymSeries, n: Q) -> Result<Certificate> {
    let name = format!("ε⁰({}): homomorphism F_L̃ → G̃m (log-expanded)", t.base.label);
    let d = if t.top().degree() <= SMALL_FIELD { t.degree() } else { t.degree().min(crate::formal_group::DIRECT_LIMIT) };
    let sym = omega0_symbol();
    let e = t.gm_tilde_exp()?;
    let h = sym_diagonal(&sym, &e[..=d]);
    let f = t.rescaled_law()?;
    let ell = lift_sym(&f.log.truncate(d), &sym);
    let lhs = BiSeries::subst_sum(&h, &ell, &ell);
    let g = t.gm_tilde()?;
    let rhs = lift_sym_bi(&g.law.truncate(d), &sym).bilinear(&eps.truncate(d), &eps.truncate(d));
    Ok(bi_check(&name, "Ω₀", &lhs, &rhs, n, format!("through degree {d}")))
}

/// `ε⁰(F_{L̃}(X, Y))` by Horner substitution into the law.
fn epsilon_horner(t: &LtTower, eps: &SymSeries, n: Q) -> Result<Certificate> {
    let name = format!("ε⁰({}): homomorphism F_L̃ → G̃m (Horner)", t.base.label);
    let d = t.degree().min(HORNER_LIMIT);
    let sym = omega0_symbol();
    let f = t.rescaled_law()?;
    let lhs = BiSeries::compose_outer(&eps.truncate(d), &lift_sym_bi(&f.law.truncate(d), &sym));
    let g = t.gm_tilde()?;
    let rhs = lift_sym_bi(&g.law.truncate(d), &sym).bilinear(&eps.truncate(d), &eps.truncate(d));
    Ok(bi_check(&name, "Ω₀", &lhs, &rhs, n, format!("through degree {d}")))
}

/// Numeric check at `Ω₀ = ω` with `ε⁰∘exp_{L̃}` composed natively.
fn epsilon_specialized(t: &LtTower, eps: &SymSeries, omega: &Elem, n: Q) -> Result<Certificate> {
    let name = format!("ε⁰({}): homomorphism at a random unit Ω₀", t.base.label);
    let d = t.degree().min(40);
    let phi = Series::new(eps.truncate(d).coeffs().iter().map(|c| c.eval(omega)).collect::<Result<Vec<_>>>()?);
    let f = t.rescaled_law()?;
    let g = t.gm_tilde()?;
    let trunc = |x: &FormalGroupLaw| FormalGroupLaw {
        law: x.law.truncate(d),
        log: x.log.truncate(d),
        exp: x.exp.truncate(d),
        ..x.clone()
    };
    Ok(match trunc(&f).hom_defect(&phi, &trunc(&g), n, false)? {
        None => Certificate::pass(&name).with_detail(format!("through degree {d}")),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), "ε⁰(X +F Y) = ε⁰X +G ε⁰Y", "differs"),
    })
}

/// `[κ_{Q_p}]^{-1}_{G̃m} ∘ ε⁰ ∘ [κ_L]_{L̃}` against `ε⁰` with
/// `Ω₀ ↦ (κ_L/κ_{Q_p}) Ω₀`, both expanded in `L̃[Ω₀^{±1}]` through `D`.
pub fn equivariance_check(t: &LtTower, eps: &SymSeries, sigma: &GaloisUnit, n: Q) -> Certificate {
    let name = format!("ε⁰({}): equivariance", t.base.label);
    match sigma.multiplier(&t.base) {
        Ok(m) => equivariance_against(t, eps, sigma, &m, n),
        Err(e) => Certificate::from_result(&name, Err(e)),
    }
}

/// The equivariance identity with an explicit multiplier for `Ω₀` (an element of `L`).
pub fn equivariance_against(t: &LtTower, eps: &SymSeries, sigma: &GaloisUnit, multiplier: &Elem, n: Q) -> Certificate {
    let name = format!("ε⁰({}): equivariance", t.base.label);
    let run = || -> Result<Certificate> {
        let d = t.degree().min(eps.degree());
        let gm = fgl_multiplicative(&t.qp, d)?;
        let c = sigma.kappa_qp.inv()?;
        let ehat = gm.endomorphism(&c)?.series.compose(&gm.exp)?;
        let p0 = pow_list(&t.p0, d);
        let pi0 = pow_list(&t.pi0, d);
        let outer: Vec<Elem> = (0..=d)
            .map(|k| if k == 0 { Elem::zero(t.top()) } else { t.from_qp(ehat.coeff(k)).mul(&p0[k - 1]) })
            .collect();
        let g = t.lt.log.compose(&t.lt.endomorphism(&sigma.kappa_l)?.series)?;
        let gp = g.powers(d);
        let proto = Elem::zero(t.top());
        let lhs = sym_series(&omega0_symbol(), &proto, d, 1, |m, k| {
            let x = gp[k].coeff(m);
            if x.is_exact_zero() {
                proto.clone()
            } else {
                t.embed(x).mul(&outer[k]).mul(&pi0[m - k])
            }
        });
        let mult = t.embed(multiplier);
        let rhs = eps.truncate(d).map(|c| c.twist(&mult).expect("unit multiplier"));
        Ok(match sym_mismatch(&lhs, &rhs, n)? {
            None => Certificate::pass(&name).with_detail(format!("through degree {d}")),
            Some((m, k)) => Certificate::fail(&name, format!("T^{m}·Ω₀^{k}"), "σ(ε⁰)", "differs"),
        })
    };
    Certificate::from_result(&name, run())
}

/// For random pairs of units: `κ_{Q_p}` is the norm of `κ_L`, and the
/// multiplier `κ_L/κ_{Q_p}` is multiplicative.
pub fn norm_compatibility(l: &Arc<FieldCtx>, qp: &Arc<FieldCtx>, pairs: usize, n: Q, rng: &mut impl Rng) -> Certificate {
    let name = format!("{}: norm compatibility of κ", l.label);
    let mut run = || -> Result<Certificate> {
        let nn = n.to_integer();
        for i in 0..pairs {
            let x = random_unit(l, rng);
            let y = random_unit(l, rng);
            let (sx, sy) = (GaloisUnit::new(x.clone(), qp)?, GaloisUnit::new(y.clone(), qp)?);
            let sxy = GaloisUnit::new(x.mul(&y), qp)?;
            if !sxy.kappa_qp.eq_mod(&sx.kappa_qp.mul(&sy.kappa_qp), nn)? {
                return Ok(Certificate::fail(&name, format!("pair {i}"), "N(xy) = N(x)N(y)", "differs"));
            }
            let m = sx.multiplier(l)?.mul(&sy.multiplier(l)?);
            if !sxy.multiplier(l)?.eq_mod(&m, nn)? {
                return Ok(Certificate::fail(&name, format!("pair {i}"), "multiplier(xy) = multiplier(x)·multiplier(y)", "differs"));
            }
        }
        Ok(Certificate::pass(&name).with_detail(format!("{pairs} random pairs")))
    };
    Certificate::from_result(&name, run())
}

/// `β(T) = exp(c · log_F(T)) = 1 + cT + …` with `c` symbolic, certified to
/// satisfy `β(X +_F Y) = β(X)β(Y)`.
pub fn dual_character(f: &FormalGroupLaw, n: Q) -> Result<(SymSeries, Vec<Certificate>)> {
    let d = f.degree();
    let sym: Arc<str> = Arc::from("c");
    let ctx = f.proto().ctx().clone();
    let zero = Elem::zero(&ctx);
    let mut inv_fact = vec![Elem::one(&ctx)];
    let mut fact = BigInt::from(1);
    for k in 1..=d {
        fact *= k;
        inv_fact.push(Elem::from_ratio(&ctx, &BigInt::from(1), &fact)?);
    }
    let pows = f.log.powers(d);
    let mut beta = sym_series(&sym, &zero, d, 1, |m, k| {
        let c = pows[k].coeff(m);
        if c.is_exact_zero() {
            zero.clone()
        } else {
            c.mul(&inv_fact[k])
        }
    });
    beta.set(0, SymPoly::constant(&sym, Elem::one(&ctx)));

    let name = format!("β({}): β(X +F Y) = β(X)β(Y) (log-expanded)", f.label);
    let h = sym_diagonal(&sym, &inv_fact);
    let lg = lift_sym(&f.log, &sym);
    let lhs = BiSeries::subst_sum(&h, &lg, &lg);
    let rhs = BiSeries::outer(&beta, &beta);
    let a = bi_check(&name, "c", &lhs, &rhs, n, format!("through degree {d}"));

    let name = format!("β({}): β(X +F Y) = β(X)β(Y) (Horner)", f.label);
    let dh = d.min(HORNER_LIMIT);
    let lhs = BiSeries::compose_outer(&beta.truncate(dh), &lift_sym_bi(&f.law.truncate(dh), &sym));
    let rhs = BiSeries::outer(&beta.truncate(dh), &beta.truncate(dh));
    let b = bi_check(&name, "c", &lhs, &rhs, n, format!("through degree {dh}"));
    Ok((beta, vec![a, b]))
}

/// `ord_p` of the primitive `π^n`-torsion point `h_n`.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionValuation {
    pub level: u32,
    #[serde(serialize_with = "ser_q")]
    pub ord_p: Q,
}

/// Valuations of the period, its unit normalization, the different and the
/// Tate twist for a field `L`.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodValuationRecord {
    pub field: String,
    pub p: u64,
    pub e: usize,
    pub f: usize,
    pub q: u64,
    #[serde(serialize_with = "ser_q")]
    pub ord_pi0: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_p0: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_omega: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_omega0: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_different: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_omega_partial: Q,
    #[serde(serialize_with = "ser_q")]
    pub tate_twist: Q,
    pub torsion: Vec<TorsionValuation>,
}

fn q_of(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// `ord_p(Ω) = 1/(p-1) - 1/(e(q-1))`.
pub fn ord_omega(p: u64, e: usize, q: u64) -> Q {
    q_of(1, p as i64 - 1) - q_of(1, e as i64 * (q as i64 - 1))
}

/// `ord_p((π₀ D_L)^{-1}) = -(1/(e(q-1)) + ord_p D_L)`.
pub fn tate_twist_valuation(l: &Arc<FieldCtx>) -> crate::padic::FractionalIdealValuation {
    let q = l.q() as i64;
    let d = different_valuation(l);
    crate::padic::FractionalIdealValuation::new(
        format!("(π₀·{})^-1", d.generator_label),
        -(q_of(1, l.e as i64 * (q - 1)) + d.ord_p),
    )
}

/// The valuation record, with `ord π₀` and `ord p₀` measured on adjoined
/// roots, and certificates for the identities tying them together.
pub fn period_valuations(l: &Arc<FieldCtx>) -> Result<(PeriodValuationRecord, Vec<Certificate>)> {
    let (p, e, f, q) = (l.p, l.e, l.f, l.q());
    let pi = Elem::uniformizer(l);
    let mut poly = vec![pi];
    poly.extend((1..q - 1).map(|_| Elem::zero(l)));
    poly.push(Elem::one(l));
    let ord_pi0 = adjoin_root(l, &poly, "π₀")?.root.ord().ok_or(Error::DivisionByZero)?;
    let qp = FieldCtx::qp(p, l.cap);
    let mut cyc = vec![Elem::from_i64(&qp, p as i64)];
    cyc.extend((1..p - 1).map(|_| Elem::zero(&qp)));
    cyc.push(Elem::one(&qp));
    let qp0 = adjoin_root(&qp, &cyc, &format!("Q_{p}(p₀)"))?;
    let ord_p0 = qp0.root.ord().ok_or(Error::DivisionByZero)?;
    let ord_d = different_valuation(l).ord_p;
    let om = ord_omega(p, e, q);
    let ord_omega0 = ord_pi0 - ord_p0 + om;
    let ord_omega_partial = om - ord_d;
    let twist = tate_twist_valuation(l).ord_p;
    let torsion = (1..=4u32)
        .map(|k| TorsionValuation {
            level: k,
            ord_p: q_of(1, e as i64 * (q as i64).pow(k - 1) * (q as i64 - 1)),
        })
        .collect::<Vec<_>>();
    let rec = PeriodValuationRecord {
        field: l.label.clone(),
        p,
        e,
        f,
        q,
        ord_pi0,
        ord_p0,
        ord_omega: om,
        ord_omega0,
        ord_different: ord_d,
        ord_omega_partial,
        tate_twist: twist,
        torsion,
    };

    let lab = &l.label;
    let eq = |name: String, got: Q, want: Q, what: &str| {
        if got == want {
            Certificate::pass(name).with_detail(format!("{what} = {}", fmt_q(&got)))
        } else {
            Certificate::fail(name, what, fmt_q(&want), fmt_q(&got))
        }
    };
    let mut certs = vec![
        eq(format!("{lab}: ord π₀ = 1/(e(q-1))"), ord_pi0, q_of(1, e as i64 * (q as i64 - 1)), "ord_p(π₀)"),
        eq(format!("{lab}: ord p₀ = 1/(p-1)"), ord_p0, q_of(1, p as i64 - 1), "ord_p(p₀)"),
        eq(format!("{lab}: Ω₀ = π₀p₀^-1·Ω is a unit"), ord_omega0, Q::from_integer(0), "ord_p(Ω₀)"),
        eq(
            format!("{lab}: twist identity"),
            twist + ord_p0,
            ord_omega_partial,
            "ord((π₀D_L)^-1) - ord(p₀^-1)",
        ),
        eq(
            format!("{lab}: ord D of Q_p(p₀) = (p-2)/(p-1)"),
            different_valuation(&qp0.top).ord_p,
            q_of(p as i64 - 2, p as i64 - 1),
            "ord_p(D)",
        ),
        eq(format!("{lab}: torsion level 1 is π₀"), rec.torsion[0].ord_p, ord_pi0, "ord_p(h_1)"),
    ];
    if e as u64 % p != 0 {
        certs.push(eq(format!("{lab}: tame different"), ord_d, q_of(e as i64 - 1, e as i64), "ord_p(D_L)"));
    }
    Ok((rec, certs))
}

/// `χ_L[CP^i] = (i+1)·[T^{i+1}] log_L`, with its valuation before and after
/// the grading `u ↦ π₀ D_L γ`.
#[derive(Debug, Clone, Serialize)]
pub struct GenusValue {
    pub i: usize,
    pub value: Value,
    #[serde(serialize_with = "ser_opt_q")]
    pub ord_p: Option<Q>,
    #[serde(serialize_with = "ser_opt_q")]
    pub graded_ord_p: Option<Q>,
}

fn ser_opt_q<S: serde::Serializer>(q: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser_q(q, s),
        None => s.serialize_str("inf"),
    }
}

pub fn hirzebruch_genus(t: &LtTower, i: usize) -> Result<(Elem, GenusValue)> {
    use crate::series::render::Render;
    if i + 1 > t.degree() {
        return Err(Error::Invalid(format!("CP^{i} needs degree {} > {}", i + 1, t.degree())));
    }
    let v = t.lt.log.coeff(i + 1).mul(&Elem::from_i64(&t.base, i as i64 + 1));
    let shift = Q::from_integer(i as i64) * (t.pi0.ord().unwrap_or(Q::from_integer(0)) + t.different.ord().unwrap_or(Q::from_integer(0)));
    let gv = GenusValue { i, value: v.to_json(), ord_p: v.ord(), graded_ord_p: v.ord().map(|o| o + shift) };
    Ok((v, gv))
}

#[cfg(test)]
mod tests;
