//! One-dimensional formal group laws with their logarithm and exponential.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::padic::scalar::fmt_q;
use crate::padic::{Elem, FieldCtx};
use crate::ring::{Field, Ring, Valued, Q};
use crate::series::bivariate::associativity_defect;
use crate::series::render::Render;
use crate::series::{BiSeries, Series};

/// Where a law came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Multiplicative,
    Additive,
    LubinTateSpecial,
    Honda,
    Rescaled { parent: Box<Provenance>, scale: String },
    KnChromatic,
    BaseChange(Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Multiplicative => write!(f, "multiplicative"),
            Provenance::Additive => write!(f, "additive"),
            Provenance::LubinTateSpecial => write!(f, "lubin_tate_special"),
            Provenance::Honda => write!(f, "honda"),
            Provenance::Rescaled { parent, scale } => write!(f, "rescaled({parent}, {scale})"),
            Provenance::KnChromatic => write!(f, "kn_chromatic"),
            Provenance::BaseChange(p) => write!(f, "{p}"),
        }
    }
}

/// `ord_p` as text, `inf` for zeros.
pub fn ord_text<R: Valued>(x: &R) -> String {
    match x.ord() {
        Some(v) => format!("ord_p {}", fmt_q(&v)),
        None => format!("zero mod p^{}", fmt_q(&x.abs_prec())),
    }
}

/// A formal group law `F(X, Y)` with `log_F` and `exp_F` over the fraction ring.
#[derive(Debug, Clone)]
pub struct FormalGroupLaw<R = Elem> {
    pub law: BiSeries<R>,
    pub log: Series<R>,
    pub exp: Series<R>,
    pub uniformizer: Option<R>,
    pub provenance: Provenance,
    pub label: String,
}

/// `[a](T)` together with its multiplier.
#[derive(Debug, Clone)]
pub struct EndomorphismSeries<R = Elem> {
    pub series: Series<R>,
    pub scalar: R,
}

impl<R: Field + Valued> FormalGroupLaw<R> {
    /// The law `exp(log X + log Y)` of a logarithm `T + O(T²)`.
    pub fn from_log(log: Series<R>, provenance: Provenance, label: impl Into<String>) -> Result<Self> {
        let exp = log.reverse()?;
        let law = BiSeries::subst_sum(&exp, &log, &log);
        Ok(FormalGroupLaw { law, log, exp, uniformizer: None, provenance, label: label.into() })
    }

    pub fn degree(&self) -> usize {
        self.law.degree()
    }

    pub fn proto(&self) -> R {
        self.log.proto()
    }

    pub fn with_uniformizer(mut self, pi: R) -> Self {
        self.uniformizer = Some(pi);
        self
    }

    /// `[a](T) = exp(a · log T)`.
    pub fn endomorphism(&self, a: &R) -> Result<EndomorphismSeries<R>> {
        let series = self.exp.compose(&self.log.scale(a))?;
        Ok(EndomorphismSeries { series, scalar: a.clone() })
    }

    pub fn p_series(&self, p: u64) -> Result<Series<R>> {
        Ok(self.endomorphism(&self.proto().from_i64_like(p as i64))?.series)
    }

    /// `F(a(T), b(T))`.
    pub fn sum(&self, a: &Series<R>, b: &Series<R>) -> Series<R> {
        self.law.eval_series(a, b)
    }

    /// `s^{-1} F(sX, sY)`, with log and exp conjugated the same way.
    pub fn rescale(&self, s: &R, scale_label: &str) -> Result<Self> {
        let sinv = s.inv()?;
        let d = self.degree();
        let mut pw = vec![sinv.clone(), s.one_like()];
        for n in 2..=d + 1 {
            let next = pw[n - 1].mul(s);
            pw.push(next);
        }
        // pw[n] = s^{n-1}
        let mut law = self.law.clone();
        for (i, j) in self.law.indices() {
            let c = self.law.get(i, j);
            if !c.is_exact_zero() && i + j > 0 {
                law.set(i, j, c.mul(&pw[i + j]));
            }
        }
        let conj = |f: &Series<R>| {
            Series::from_fn(&f.proto(), f.degree(), |n| {
                let c = f.coeff(n);
                if c.is_exact_zero() || n == 0 {
                    c.clone()
                } else {
                    c.mul(&pw[n])
                }
            })
        };
        Ok(FormalGroupLaw {
            law,
            log: conj(&self.log),
            exp: conj(&self.exp),
            uniformizer: self.uniformizer.clone(),
            provenance: Provenance::Rescaled { parent: Box::new(self.provenance.clone()), scale: scale_label.into() },
            label: format!("{}[{}]", self.label, scale_label),
        })
    }

    /// Push every coefficient through a ring map.
    pub fn base_change<S: Field + Valued>(&self, f: impl Fn(&R) -> S, label: &str) -> FormalGroupLaw<S> {
        FormalGroupLaw {
            law: self.law.map(&f),
            log: self.log.map(&f),
            exp: self.exp.map(&f),
            uniformizer: self.uniformizer.as_ref().map(&f),
            provenance: match &self.provenance {
                p @ Provenance::BaseChange(_) => p.clone(),
                p => Provenance::BaseChange(Box::new(p.clone())),
            },
            label: label.into(),
        }
    }

    /// Every coefficient of the law has `ord_p ≥ 0`.
    pub fn integrality(&self) -> Certificate {
        let name = format!("{}: integral law", self.label);
        match self.law.first_below(Q::from_integer(0)) {
            None => Certificate::pass(name),
            Some((i, j)) => Certificate::fail(name, format!("X^{i}Y^{j}"), "ord_p >= 0", ord_text(self.law.get(i, j))),
        }
    }

    /// Unit, commutativity and associativity (the last through `assoc_degree`).
    pub fn axioms(&self, assoc_degree: usize, n: Q) -> Vec<Certificate> {
        let d = self.degree();
        let one = self.proto().one_like();
        let zero = self.proto();
        let unit = {
            let name = format!("{}: unit axiom", self.label);
            let bad = (0..=d).find_map(|i| {
                let want = if i == 1 { &one } else { &zero };
                for (a, b, at) in [(self.law.get(i, 0), want, (i, 0)), (self.law.get(0, i), want, (0, i))] {
                    match a.eq_mod_p(b, n) {
                        Ok(true) => {}
                        Ok(false) => return Some(Err(at)),
                        Err(e) => return Some(Ok(e)),
                    }
                }
                None
            });
            match bad {
                None => Certificate::pass(name),
                Some(Err((i, j))) => Certificate::fail(name, format!("X^{i}Y^{j}"), "F(X,0)=X, F(0,Y)=Y", "nonzero"),
                Some(Ok(e)) => Certificate::from_result(&name, Err(e)),
            }
        };
        let comm_name = format!("{}: commutativity", self.label);
        let comm = Certificate::from_result(
            &comm_name,
            self.law.first_mismatch(&self.law.transpose(), n).map(|m| match m {
                None => Certificate::pass(&comm_name),
                Some((i, j)) => Certificate::fail(&comm_name, format!("X^{i}Y^{j}"), "F(X,Y)=F(Y,X)", "asymmetric"),
            }),
        );
        let k = assoc_degree.min(d);
        let assoc_name = format!("{}: associativity", self.label);
        let assoc = Certificate::from_result(
            &assoc_name,
            associativity_defect(&self.law, k, n).map(|m| match m {
                None => Certificate::pass(&assoc_name).with_detail(format!("through total degree {k}")),
                Some((a, b, c)) => {
                    Certificate::fail(&assoc_name, format!("X^{a}Y^{b}Z^{c}"), "F(F(X,Y),Z)=F(X,F(Y,Z))", "differs")
                }
            }),
        );
        vec![unit, comm, assoc]
    }

    /// `exp∘log = log∘exp = T`.
    pub fn log_exp_inverse(&self, n: Q) -> Certificate {
        let name = format!("{}: log/exp inverse", self.label);
        let run = || -> Result<Certificate> {
            let id = Series::var(&self.proto(), self.log.degree().min(self.exp.degree()));
            for (which, s) in [("exp∘log", self.exp.compose(&self.log)?), ("log∘exp", self.log.compose(&self.exp)?)] {
                if let Some(k) = s.first_mismatch(&id, n)? {
                    return Ok(Certificate::fail(&name, format!("{which}, T^{k}"), "identity", ord_text(s.coeff(k))));
                }
            }
            Ok(Certificate::pass(&name))
        };
        Certificate::from_result(&name, run())
    }

    /// `[a + b] = F([a], [b])` and `[ab] = [a]∘[b]`.
    pub fn endomorphism_laws(&self, a: &R, b: &R, n: Q) -> Certificate {
        let name = format!("{}: endomorphism ring laws", self.label);
        let run = || -> Result<Certificate> {
            let ea = self.endomorphism(a)?.series;
            let eb = self.endomorphism(b)?.series;
            let sum = self.endomorphism(&a.add(b))?.series;
            let prod = self.endomorphism(&a.mul(b))?.series;
            if let Some(k) = self.sum(&ea, &eb).first_mismatch(&sum, n)? {
                return Ok(Certificate::fail(&name, format!("[a+b], T^{k}"), "F([a],[b])", "differs"));
            }
            if let Some(k) = ea.compose(&eb)?.first_mismatch(&prod, n)? {
                return Ok(Certificate::fail(&name, format!("[ab], T^{k}"), "[a]∘[b]", "differs"));
            }
            Ok(Certificate::pass(&name))
        };
        Certificate::from_result(&name, run())
    }

    /// Whether `phi: self → target` is a homomorphism through degree `D`:
    /// `phi(F(X,Y))` against `G(phi X, phi Y)`. The left side is expanded as
    /// `(phi∘exp_F)(log_F X + log_F Y)`, or by direct Horner substitution into
    /// the law when `direct` is set.
    pub fn hom_defect(&self, phi: &Series<R>, target: &FormalGroupLaw<R>, n: Q, direct: bool) -> Result<Option<(usize, usize)>> {
        let lhs = if direct {
            BiSeries::compose_outer(phi, &self.law)
        } else {
            let h = phi.compose(&self.exp)?;
            BiSeries::subst_sum(&h, &self.log, &self.log)
        };
        let rhs = target.law.bilinear(phi, phi);
        lhs.first_mismatch(&rhs, n)
    }
}

impl<R: Field + Valued + Render> FormalGroupLaw<R> {
    pub fn to_json(&self, certificates: &[Certificate]) -> Value {
        json!({
            "provenance": self.provenance.to_string(),
            "base": self.log.coeff(0).ring_label(),
            "label": self.label,
            "law": self.law.to_json(),
            "log": self.log.to_json(),
            "exp": self.exp.to_json(),
            "certificates": certificates,
        })
    }
}

/// `X + Y + XY` over `ctx`, truncated at `d`.
pub fn fgl_multiplicative(ctx: &Arc<FieldCtx>, d: usize) -> Result<FormalGroupLaw> {
    let z = Elem::zero(ctx);
    let mut law = BiSeries::zero(&z, d);
    law.set(1, 0, Elem::one(ctx));
    law.set(0, 1, Elem::one(ctx));
    if d >= 2 {
        law.set(1, 1, Elem::one(ctx));
    }
    let mut log = Series::zero(&z, d);
    let mut exp = Series::zero(&z, d);
    let mut fact = BigInt::from(1);
    for n in 1..=d {
        fact *= n;
        let sign = if n % 2 == 1 { 1 } else { -1 };
        log.set(n, Elem::from_ratio(ctx, &BigInt::from(sign), &BigInt::from(n))?);
        exp.set(n, Elem::from_ratio(ctx, &BigInt::from(1), &fact)?);
    }
    Ok(FormalGroupLaw {
        law,
        log,
        exp,
        uniformizer: None,
        provenance: Provenance::Multiplicative,
        label: "Gm".into(),
    })
}

/// `X + Y`.
pub fn fgl_additive<R: Field + Valued>(proto: &R, d: usize) -> FormalGroupLaw<R> {
    let mut law = BiSeries::zero(proto, d);
    law.set(1, 0, proto.one_like());
    law.set(0, 1, proto.one_like());
    let t = Series::var(proto, d);
    FormalGroupLaw { law, log: t.clone(), exp: t, uniformizer: None, provenance: Provenance::Additive, label: "Ga".into() }
}

/// Lubin–Tate law from its `[π]`-series. The logarithm solves
/// `λ([π](T)) = π λ(T)` degree by degree:
/// `λ_n (π^n - π) = -Σ_{k<n} λ_k [T^n]([π]^k)`.
pub fn fgl_from_p_series(ctx: &Arc<FieldCtx>, pi: &Elem, pi_series: &Series<Elem>) -> Result<FormalGroupLaw> {
    let d = pi_series.degree();
    let q = ctx.q() as usize;
    let zero = Q::from_integer(0);
    if !pi_series.coeff(0).is_zero() {
        return Err(Error::NonzeroConstant);
    }
    if !pi_series.coeff(1).eq_mod_p(pi, Q::from_integer(ctx.cap / 2))? {
        return Err(Error::Invalid("[π](T) must start with πT".into()));
    }
    if q > d {
        return Err(Error::Invalid(format!("truncation degree {d} does not reach T^{q}")));
    }
    for n in 2..=d {
        let c = pi_series.coeff(n);
        if n == q {
            if !c.sub(&Elem::one(ctx)).ord_lower().gt(&zero) {
                return Err(Error::Invalid(format!("coefficient of T^{q} must be ≡ 1 mod the maximal ideal")));
            }
        } else if c.ord_lower() <= zero {
            return Err(Error::Invalid(format!("coefficient of T^{n} must lie in the maximal ideal")));
        }
    }
    let pows = pi_series.powers(d);
    let mut lam = Series::zero(&Elem::zero(ctx), d);
    lam.set(1, Elem::one(ctx));
    let mut pin = pi.clone();
    for n in 2..=d {
        pin = pin.mul(pi);
        let mut s = Elem::zero(ctx);
        for k in 1..n {
            let c = pows[k].coeff(n);
            if !c.is_exact_zero() {
                s = s.add(&lam.coeff(k).mul(c));
            }
        }
        lam.set(n, s.neg().div(&pin.sub(pi))?);
    }
    let f = FormalGroupLaw::from_log(lam, Provenance::LubinTateSpecial, format!("LT({})", ctx.label))?;
    let f = f.with_uniformizer(pi.clone());
    f.integrality().into_result()?;
    Ok(f)
}

/// The special law with `[π](T) = πT + T^q`, `π` the field's uniformizer.
pub fn special_lubin_tate(ctx: &Arc<FieldCtx>, d: usize) -> Result<FormalGroupLaw> {
    let pi = Elem::uniformizer(ctx);
    let q = ctx.q() as usize;
    let mut s = Series::monomial(&pi, 1, d);
    if q <= d {
        s.set(q, Elem::one(ctx));
    }
    fgl_from_p_series(ctx, &pi, &s)
}

/// Honda's logarithm `Σ π^{-n} T^{q^n}`.
pub fn honda_log(ctx: &Arc<FieldCtx>, d: usize) -> Result<Series<Elem>> {
    let pi = Elem::uniformizer(ctx);
    let pinv = pi.inv()?;
    let q = ctx.q() as usize;
    let mut log = Series::zero(&Elem::zero(ctx), d);
    let (mut qn, mut c) = (1usize, Elem::one(ctx));
    while qn <= d {
        log.set(qn, c.clone());
        qn *= q;
        c = c.mul(&pinv);
    }
    Ok(log)
}

/// The law of Honda's logarithm; certifies integrality of `F` and `[π]`.
pub fn fgl_honda(ctx: &Arc<FieldCtx>, d: usize) -> Result<FormalGroupLaw> {
    let pi = Elem::uniformizer(ctx);
    let f = FormalGroupLaw::from_log(honda_log(ctx, d)?, Provenance::Honda, format!("Honda({})", ctx.label))?
        .with_uniformizer(pi.clone());
    f.integrality().into_result()?;
    let ps = f.endomorphism(&pi)?.series;
    if let Some(k) = ps.first_below(Q::from_integer(0), 0) {
        return Err(Error::CertificateFailure {
            name: "Honda [π] integral".into(),
            location: format!("T^{k}"),
            expected: "ord_p >= 0".into(),
            got: ord_text(ps.coeff(k)),
        });
    }
    Ok(f)
}

/// Evaluate the Eisenstein polynomial `E` of the law's field on `[π]`: the
/// `F`-sum of `[c_i]∘[π]^{∘i}` must vanish through degree `D`.
pub fn fgl_eisenstein_relation_check(f: &FormalGroupLaw, n: Q) -> Certificate {
    let name = format!("{}: Eisenstein relation E([π]) = 0", f.label);
    let run = || -> Result<Certificate> {
        let pi = f.uniformizer.clone().ok_or_else(|| Error::Invalid("law has no uniformizer".into()))?;
        let ctx = pi.ctx().clone();
        let coeffs: Vec<Elem> = ctx.eisenstein.iter().map(|w| Elem::from_w(&ctx, w)).collect();
        let pis = f.endomorphism(&pi)?.series;
        let d = f.degree();
        let mut iter = Series::var(&pi, d);
        let mut total = Series::zero(&pi, d);
        for c in &coeffs {
            if !c.is_exact_zero() {
                let term = f.endomorphism(c)?.series.compose(&iter)?;
                total = f.sum(&total, &term);
            }
            iter = pis.compose(&iter)?;
        }
        let zero = Series::zero(&pi, d);
        Ok(match total.first_mismatch(&zero, n)? {
            None => Certificate::pass(&name).with_detail(format!("{} terms through degree {d}", coeffs.len())),
            Some(k) => Certificate::fail(&name, format!("T^{k}"), "0", ord_text(total.coeff(k))),
        })
    };
    Certificate::from_result(&name, run())
}

/// `[p]_F ≡ 0` modulo `modulus`, coefficientwise through degree `D`.
pub fn additive_type_check(f: &FormalGroupLaw, modulus: &Elem, p: u64) -> Certificate {
    let name = format!("{}: [p] ≡ 0 mod {}", f.label, ord_text(modulus));
    let run = || -> Result<Certificate> {
        let bound = modulus.ord().ok_or(Error::DivisionByZero)?;
        let ps = f.p_series(p)?;
        Ok(match ps.first_below(bound, 0) {
            None => Certificate::pass(&name),
            Some(k) => Certificate::fail(&name, format!("T^{k}"), format!("ord_p >= {}", fmt_q(&bound)), ord_text(ps.coeff(k))),
        })
    };
    Certificate::from_result(&name, run())
}

/// For `G = π₀^{-1} F(π₀ X, π₀ Y)` with `π₀^{q-1} = -π`:
/// `[π]_G(T) = π(T - T^q)` exactly.
pub fn rescaled_pi_series_check(g: &FormalGroupLaw, pi: &Elem, q: usize, n: Q) -> Certificate {
    let name = format!("{}: [π] = π(T - T^q)", g.label);
    let run = || -> Result<Certificate> {
        let s = g.endomorphism(pi)?.series;
        let mut want = Series::monomial(pi, 1, s.degree());
        if q <= s.degree() {
            want.set(q, pi.neg());
        }
        Ok(match s.first_mismatch(&want, n)? {
            None => Certificate::pass(&name),
            Some(k) => Certificate::fail(&name, format!("T^{k}"), ord_text(want.coeff(k)), ord_text(s.coeff(k))),
        })
    };
    Certificate::from_result(&name, run())
}

/// `φ = exp_G ∘ log_F` with integrality and intertwining certificates.
pub fn fgl_iso(f: &FormalGroupLaw, g: &FormalGroupLaw, n: Q) -> Result<(Series<Elem>, Vec<Certificate>)> {
    let phi = g.exp.compose(&f.log)?;
    let int_name = format!("iso {} -> {}: integral", f.label, g.label);
    let integral = match phi.first_below(Q::from_integer(0), 0) {
        None => Certificate::pass(&int_name),
        Some(k) => Certificate::fail(&int_name, format!("T^{k}"), "ord_p >= 0", ord_text(phi.coeff(k))),
    };
    let hom_name = format!("iso {} -> {}: intertwines", f.label, g.label);
    let direct = f.degree() <= DIRECT_LIMIT;
    let hom = Certificate::from_result(
        &hom_name,
        f.hom_defect(&phi, g, n, direct).map(|m| match m {
            None => Certificate::pass(&hom_name),
            Some((i, j)) => Certificate::fail(&hom_name, format!("X^{i}Y^{j}"), "φ(X +F Y) = φX +G φY", "differs"),
        }),
    );
    Ok((phi, vec![integral, hom]))
}

/// Degrees up to which bivariate identities are also expanded by direct
/// substitution into the law.
pub const DIRECT_LIMIT: usize = 20;

#[cfg(test)]
mod tests;
