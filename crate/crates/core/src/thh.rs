//! The graded model `O[γ]`, `|γ| = 2`, with `β ↦ p₀γ`: the κ-coordinate and
//! its coproduct, the Chern-class series, the cyclotomic action and the
//! orientation composite into a Lubin–Tate law.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::formal_group::{fgl_multiplicative, ord_text, FormalGroupLaw, DIRECT_LIMIT};
use crate::lubin_tate::{
    find_p0, hirzebruch_genus, lift_sym, lift_sym_bi, pow_list, random_integer, random_unit, sym_first_nonintegral,
    sym_mismatch, sym_mismatch_bi, sym_series, GenusValue, LtTower, SymSeries, HORNER_LIMIT,
};
use crate::padic::lifts::different_valuation;
use crate::padic::scalar::{fmt_q, ser_q};
use crate::padic::{adjoin_root, Elem, FieldCtx};
use crate::ring::{Field, Ring, Valued, Q};
use crate::series::render::Render;
use crate::series::{BiSeries, Series, SymPoly};

pub fn gamma_symbol() -> Arc<str> {
    Arc::from("γ")
}

pub fn omega_partial_symbol() -> Arc<str> {
    Arc::from("Ω∂")
}

/// `Q_p(p₀)` with `p₀^{p-1} = -p`, and `p₀`.
pub fn p0_field(p: u64, cap: i64) -> Result<(Arc<FieldCtx>, Elem)> {
    let qp = FieldCtx::qp(p, cap);
    if p == 2 {
        let p0 = find_p0(&qp)?;
        return Ok((qp, p0));
    }
    let mut poly = vec![Elem::from_i64(&qp, p as i64)];
    poly.extend((1..p - 1).map(|_| Elem::zero(&qp)));
    poly.push(Elem::one(&qp));
    let node = adjoin_root(&qp, &poly, &format!("Q_{p}(p₀)"))?;
    Ok((node.top.clone(), node.root))
}

/// Polynomials in `γ` over `O = Z_p[p₀]`.
#[derive(Debug, Clone)]
pub struct GradedRingModel {
    pub base: Arc<FieldCtx>,
    pub p0: Elem,
    pub generators: Vec<(String, i64)>,
    /// Truncation degree for series in the κ- and η-coordinates.
    pub degree: usize,
}

impl GradedRingModel {
    pub fn new(p: u64, cap: i64, degree: usize) -> Result<Self> {
        let (base, p0) = p0_field(p, cap)?;
        Ok(GradedRingModel { base, p0, generators: vec![("γ".into(), 2)], degree })
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    pub fn constant(&self, c: Elem) -> SymPoly<Elem> {
        SymPoly::constant(&gamma_symbol(), c)
    }

    pub fn zero(&self) -> SymPoly<Elem> {
        self.constant(Elem::zero(&self.base))
    }

    /// The image `p₀γ` of `β`.
    pub fn beta(&self) -> SymPoly<Elem> {
        SymPoly::monomial(&gamma_symbol(), self.p0.clone(), 1)
    }

    /// Degree of a homogeneous element, `None` if mixed or zero.
    pub fn element_degree(&self, x: &SymPoly<Elem>) -> Option<i64> {
        let mut it = x.terms().map(|(a, _)| 2 * a);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn trace_record(&self) -> (TraceRecord, Certificate) {
        let ord = self.p0.ord().unwrap_or(Q::from_integer(0));
        let rec = TraceRecord { beta_image: "p₀·γ".into(), normalization: "variant".into(), ord_scalar: ord };
        let want = Q::new(1, self.p() as i64 - 1);
        let name = format!("trace normalization over {}: ord p₀ = 1/(p-1)", self.base.label);
        let c = if ord == want {
            Certificate::pass(name)
        } else {
            Certificate::fail(name, "β ↦ p₀γ", fmt_q(&want), fmt_q(&ord))
        };
        (rec, c)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub beta_image: String,
    pub normalization: String,
    #[serde(serialize_with = "ser_q")]
    pub ord_scalar: Q,
}

/// `κ` with `Δκ = κ⊗1 + 1⊗κ + p₀γ κ⊗κ`.
#[derive(Debug, Clone)]
pub struct HopfCoordinate {
    pub name: String,
    pub coproduct: FormalGroupLaw<SymPoly<Elem>>,
    pub scale: SymPoly<Elem>,
}

impl HopfCoordinate {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "scale": self.scale.to_json(),
            "coproduct": self.coproduct.law.to_json(),
        })
    }
}

/// Polynomials in three variables, keyed by exponent triples.
type Poly3 = BTreeMap<[u32; 3], SymPoly<Elem>>;

fn p3_add(a: &Poly3, b: &Poly3) -> Poly3 {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(|| v.zero_like());
        *e = e.add(v);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn p3_mul(a: &Poly3, b: &Poly3) -> Poly3 {
    let mut out = Poly3::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
            let e = out.entry(k).or_insert_with(|| va.zero_like());
            *e = e.add(&va.mul(vb));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn p3_var(i: usize, one: &SymPoly<Elem>) -> Poly3 {
    let mut k = [0u32; 3];
    k[i] = 1;
    Poly3::from([(k, one.clone())])
}

/// `F(A, B)` for a law with finitely many nonzero coefficients.
fn p3_apply(terms: &[(usize, usize, SymPoly<Elem>)], a: &Poly3, b: &Poly3, one: &SymPoly<Elem>) -> Poly3 {
    let unit = Poly3::from([([0u32; 3], one.clone())]);
    let mut out = Poly3::new();
    for (i, j, c) in terms {
        let mut m = unit.clone();
        for _ in 0..*i {
            m = p3_mul(&m, a);
        }
        for _ in 0..*j {
            m = p3_mul(&m, b);
        }
        let scaled: Poly3 = m.into_iter().map(|(k, v)| (k, v.mul(c))).collect();
        out = p3_add(&out, &scaled);
    }
    out
}

/// `Δκ` as `Ĝm` rescaled by `p₀γ`, with the three-term, co-associativity,
/// co-commutativity and `γ = 0` certificates.
pub fn kappa_coproduct(m: &GradedRingModel, n: Q) -> Result<(HopfCoordinate, Vec<Certificate>)> {
    let sym = gamma_symbol();
    let gm = fgl_multiplicative(&m.base, m.degree)?;
    let gm = gm.base_change(|x| SymPoly::constant(&sym, x.clone()), &format!("Ĝm({})", m.base.label));
    let mut law = gm.rescale(&m.beta(), "p₀γ")?;
    law.label = format!("Δκ({})", m.base.label);
    let beta = m.beta();
    let one = m.constant(Elem::one(&m.base));
    let mut certs = Vec::new();

    let name = format!("{}: exactly κ⊗1 + 1⊗κ + p₀γ κ⊗κ", law.label);
    let mut bad = None;
    for (i, j) in law.law.indices() {
        let want = match (i, j) {
            (1, 0) | (0, 1) => one.clone(),
            (1, 1) => beta.clone(),
            _ => m.zero(),
        };
        if !law.law.get(i, j).eq_mod_p(&want, n)? {
            bad = Some((i, j));
            break;
        }
    }
    certs.push(match bad {
        None => Certificate::pass(&name).with_detail(format!("all coefficients through degree {}", m.degree)),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), "three terms", "extra term"),
    });

    // the law is now known to be the polynomial X + Y + βXY
    let terms: Vec<(usize, usize, SymPoly<Elem>)> =
        law.law.indices().filter(|&(i, j)| !law.law.get(i, j).is_zero()).map(|(i, j)| (i, j, law.law.get(i, j).clone())).collect();
    let (x, y, z) = (p3_var(0, &one), p3_var(1, &one), p3_var(2, &one));
    let left = p3_apply(&terms, &p3_apply(&terms, &x, &y, &one), &z, &one);
    let right = p3_apply(&terms, &x, &p3_apply(&terms, &y, &z, &one), &one);
    let name = format!("{}: co-associativity (polynomial identity)", law.label);
    let diff = p3_add(&left, &right.iter().map(|(k, v)| (*k, v.neg())).collect());
    certs.push(match diff.keys().next() {
        None => Certificate::pass(&name).with_detail(format!("{} monomials", left.len())),
        Some(k) => Certificate::fail(&name, format!("X^{}Y^{}Z^{}", k[0], k[1], k[2]), "(Δ⊗1)Δ = (1⊗Δ)Δ", "differs"),
    });

    let name = format!("{}: co-commutativity", law.label);
    let swapped = p3_apply(&terms, &y, &x, &one);
    let direct = p3_apply(&terms, &x, &y, &one);
    certs.push(if p3_add(&swapped, &direct.iter().map(|(k, v)| (*k, v.neg())).collect()).is_empty() {
        Certificate::pass(&name)
    } else {
        Certificate::fail(&name, "Δκ", "symmetric", "asymmetric")
    });

    let name = format!("{}: γ = 0 gives the additive law", law.label);
    let bad = law.law.indices().find(|&(i, j)| {
        let c = law.law.get(i, j).coeff(0);
        let want = if i + j == 1 { 1 } else { 0 };
        !c.eq_mod_p(&Elem::from_i64(&m.base, want), n).unwrap_or(false)
    });
    certs.push(match bad {
        None => Certificate::pass(&name),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), "X + Y", "other"),
    });

    let hc = HopfCoordinate { name: "κ".into(), scale: beta, coproduct: law };
    Ok((hc, certs))
}

/// The closed form `Σ (-1)^{n+1} (p₀γ)^{n-1} η^n / n`.
pub fn chern_class_closed_form(m: &GradedRingModel) -> Result<SymSeries> {
    let sym = gamma_symbol();
    let p0 = pow_list(&m.p0, m.degree);
    let mut c = vec![m.zero()];
    for k in 1..=m.degree {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let v = p0[k - 1].div(&Elem::from_i64(&m.base, sign * k as i64))?;
        c.push(SymPoly::monomial(&sym, v, k as i64 - 1));
    }
    Ok(Series::new(c))
}

fn homogeneity_defect(s: &SymSeries, shift: i64) -> Option<(usize, i64)> {
    for k in 0..=s.degree() {
        for (a, _) in s.coeff(k).terms() {
            if a != k as i64 + shift {
                return Some((k, a));
            }
        }
    }
    None
}

fn series_check(name: &str, got: &SymSeries, want: &SymSeries, n: Q, detail: String) -> Certificate {
    Certificate::from_result(
        name,
        sym_mismatch(got, want, n).map(|m| match m {
            None => Certificate::pass(name).with_detail(detail),
            Some((k, a)) => Certificate::fail(name, format!("η^{k}·γ^{a}"), "both sides agree", "differs"),
        }),
    )
}

/// `c(η) = (p₀γ)^{-1} log_{Ĝm}(p₀γ η)` with integrality, normalization,
/// homogeneity and round-trip certificates.
pub fn chern_class_series(m: &GradedRingModel, hopf: &HopfCoordinate, n: Q) -> Result<(SymSeries, Vec<Certificate>)> {
    let sym = gamma_symbol();
    let c = hopf.coproduct.log.clone();
    let kappa_exp = &hopf.coproduct.exp;
    let label = format!("c({})", m.base.label);
    let d = m.degree;
    let mut certs = Vec::new();

    certs.push(series_check(&format!("{label}: matches Σ(-1)^(n+1)(p₀γ)^(n-1)η^n/n"), &c, &chern_class_closed_form(m)?, n, format!("through degree {d}")));

    for (what, s) in [("c", &c), ("κ = exp side", kappa_exp)] {
        let name = format!("{label}: {what} integral over O[γ]");
        certs.push(match sym_first_nonintegral(s) {
            None => Certificate::pass(&name),
            Some((k, a)) => Certificate::fail(&name, format!("η^{k}·γ^{a}"), "ord_p >= 0", ord_text(&s.coeff(k).coeff(a))),
        });
    }

    let name = format!("{label}: linear coefficient 1");
    certs.push(Certificate::from_result(
        &name,
        c.coeff(1).eq_mod_p(&m.constant(Elem::one(&m.base)), n).map(|ok| {
            if ok {
                Certificate::pass(&name)
            } else {
                Certificate::fail(&name, "η^1", "1", "other")
            }
        }),
    ));

    if d >= 2 {
        let name = format!("{label}: η² coefficient -p₀γ/2");
        let want = SymPoly::monomial(&sym, m.p0.div(&Elem::from_i64(&m.base, -2))?, 1);
        certs.push(Certificate::from_result(
            &name,
            c.coeff(2).eq_mod_p(&want, n).map(|ok| {
                if ok {
                    Certificate::pass(&name)
                } else {
                    Certificate::fail(&name, "η^2", "-p₀γ/2", "other")
                }
            }),
        ));
    }

    let name = format!("{label}: homogeneous (γ^(n-1) η^n)");
    certs.push(match homogeneity_defect(&c, -1) {
        None => Certificate::pass(&name),
        Some((k, a)) => Certificate::fail(&name, format!("η^{k}·γ^{a}"), format!("γ^{}", k as i64 - 1), format!("γ^{a}")),
    });

    // τ(η) = 1 + exp_Ĝm(p₀γ c) = 1 + p₀γη
    let gm = fgl_multiplicative(&m.base, d)?;
    let e = lift_sym(&gm.exp, &sym);
    let mut tau = e.compose(&c.scale(&m.beta()))?;
    tau.set(0, m.constant(Elem::one(&m.base)));
    let mut want = Series::zero(&m.zero(), d);
    want.set(0, m.constant(Elem::one(&m.base)));
    want.set(1, m.beta());
    certs.push(series_check(&format!("{label}: τ(η) = 1 + exp_Ĝm(p₀γc) = 1 + p₀γη"), &tau, &want, n, format!("through degree {d}")));

    let id = Series::var(&m.zero(), d);
    certs.push(series_check(&format!("{label}: round trip κ(c(η)) = η"), &kappa_exp.compose(&c)?, &id, n, format!("through degree {d}")));
    Ok((c, certs))
}

/// The coordinate change `η = η̄ + Σ a_i (p₀γ)^i η̄^{i+1}`.
pub fn coordinate_change(m: &GradedRingModel, a: &[Elem]) -> SymSeries {
    let sym = gamma_symbol();
    let p0 = pow_list(&m.p0, m.degree);
    let mut s = Series::var(&m.zero(), m.degree);
    for (i, ai) in a.iter().enumerate().map(|(i, x)| (i + 1, x)) {
        if i + 1 > m.degree {
            break;
        }
        s.set(i + 1, SymPoly::monomial(&sym, ai.mul(&p0[i]), i as i64));
    }
    s
}

/// With `η` in terms of `η̄`: the law in `η̄` is integral and graded, the
/// κ-coordinate built from `c∘φ` is `φ` again, and its coproduct is the
/// three-term law.
pub fn coordinate_independence(m: &GradedRingModel, hopf: &HopfCoordinate, a: &[Elem], n: Q) -> Result<Vec<Certificate>> {
    let d = m.degree;
    let phi = coordinate_change(m, a);
    let c = &hopf.coproduct.log;
    let k = &hopf.coproduct;
    let cbar = c.compose(&phi)?;
    let label = format!("η̄-coordinate({}, {} a_i)", m.base.label, a.iter().filter(|x| !x.is_zero()).count());
    let mut certs = Vec::new();

    let g = BiSeries::subst_sum(&cbar.reverse()?, &cbar, &cbar);
    let name = format!("{label}: law integral over O[γ]");
    let zero = Q::from_integer(0);
    let bad = g.indices().find(|&(i, j)| g.get(i, j).has_negative_powers() || g.get(i, j).ord_lower() < zero);
    certs.push(match bad {
        None => Certificate::pass(&name),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), "integral", ord_text(g.get(i, j))),
    });
    let name = format!("{label}: law homogeneous");
    let bad = g.indices().find(|&(i, j)| g.get(i, j).terms().any(|(e, _)| e != i as i64 + j as i64 - 1));
    certs.push(match bad {
        None => Certificate::pass(&name),
        Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), format!("γ^{}", i + j - 1), "other"),
    });

    let kbar = k.exp.compose(&cbar)?;
    certs.push(series_check(&format!("{label}: κ from c∘φ equals φ"), &kbar, &phi, n, format!("through degree {d}")));

    let name = format!("{label}: Δκ three-term in η̄ (log-expanded)");
    let lhs = BiSeries::subst_sum(&k.exp, &cbar, &cbar);
    let rhs = k.law.bilinear(&kbar, &kbar);
    certs.push(bi_cert(&name, &lhs, &rhs, n, format!("through degree {d}")));

    let dh = d.min(HORNER_LIMIT);
    let name = format!("{label}: Δκ three-term in η̄ (Horner)");
    let lhs = BiSeries::compose_outer(&kbar.truncate(dh), &g.truncate(dh));
    let rhs = k.law.truncate(dh).bilinear(&kbar.truncate(dh), &kbar.truncate(dh));
    certs.push(bi_cert(&name, &lhs, &rhs, n, format!("through degree {dh}")));
    Ok(certs)
}

fn bi_cert(name: &str, lhs: &BiSeries<SymPoly<Elem>>, rhs: &BiSeries<SymPoly<Elem>>, n: Q, detail: String) -> Certificate {
    Certificate::from_result(
        name,
        sym_mismatch_bi(lhs, rhs, n).map(|m| match m {
            None => Certificate::pass(name).with_detail(detail),
            Some((i, j, a)) => Certificate::fail(name, format!("X^{i}Y^{j}·γ^{a}"), "both sides agree", "differs"),
        }),
    )
}

/// The action of a cyclotomic unit `χ`: `γ ↦ χγ` on the ring and `[χ]` on κ.
#[derive(Debug, Clone)]
pub struct GaloisAction {
    pub chi: Elem,
    pub gamma_image: SymPoly<Elem>,
    pub kappa_series: SymSeries,
}

impl GaloisAction {
    pub fn to_json(&self) -> Value {
        json!({
            "chi": self.chi.to_json(),
            "gamma_image": self.gamma_image.to_json(),
            "kappa_series": self.kappa_series.to_json(),
        })
    }
}

/// `[χ]_{Δκ}(κ) = (p₀γ)^{-1}((1 + p₀γκ)^χ - 1)` for a unit `χ ∈ Z_p`.
pub fn galois_act(m: &GradedRingModel, hopf: &HopfCoordinate, chi: &Elem, n: Q) -> Result<(GaloisAction, Vec<Certificate>)> {
    if chi.ord() != Some(Q::from_integer(0)) {
        return Err(Error::NotUnit(format!("χ with {}", ord_text(chi))));
    }
    if chi.as_qp().is_none() {
        return Err(Error::Invalid("χ must lie in Z_p".into()));
    }
    let sym = gamma_symbol();
    let k = &hopf.coproduct;
    let chis = m.constant(chi.clone());
    let series = k.endomorphism(&chis)?.series;
    let label = format!("[χ]({})", m.base.label);
    let d = m.degree;
    let mut certs = Vec::new();

    let name = format!("{label}: integral over O[γ]");
    certs.push(match sym_first_nonintegral(&series) {
        None => Certificate::pass(&name),
        Some((j, a)) => Certificate::fail(&name, format!("κ^{j}·γ^{a}"), "ord_p >= 0", ord_text(&series.coeff(j).coeff(a))),
    });
    let name = format!("{label}: linear term χ");
    certs.push(Certificate::from_result(
        &name,
        series.coeff(1).eq_mod_p(&chis, n).map(|ok| {
            if ok {
                Certificate::pass(&name)
            } else {
                Certificate::fail(&name, "κ^1", "χ", "other")
            }
        }),
    ));
    let name = format!("{label}: homogeneous");
    certs.push(match homogeneity_defect(&series, -1) {
        None => Certificate::pass(&name),
        Some((j, a)) => Certificate::fail(&name, format!("κ^{j}·γ^{a}"), format!("γ^{}", j as i64 - 1), "other"),
    });
    // [χ](Δ(X, Y)) = exp(χ(log X + log Y)) against Δ([χ]X, [χ]Y)
    let lhs = BiSeries::subst_sum(&k.exp.scale_var(&chis), &k.log, &k.log);
    let rhs = k.law.bilinear(&series, &series);
    certs.push(bi_cert(&format!("{label}: intertwines Δκ"), &lhs, &rhs, n, format!("through degree {d}")));

    let act = GaloisAction { chi: chi.clone(), gamma_image: SymPoly::monomial(&sym, chi.clone(), 1), kappa_series: series };
    Ok((act, certs))
}

/// `act(χχ') = act(χ)∘act(χ')` for random unit pairs, on γ and on κ.
pub fn galois_multiplicativity(m: &GradedRingModel, hopf: &HopfCoordinate, pairs: usize, n: Q, rng: &mut impl Rng) -> Certificate {
    let name = format!("[χ]({}): multiplicative in χ", m.base.label);
    let qp = FieldCtx::qp(m.p(), m.base.cap);
    let mut units = Vec::with_capacity(2 * pairs);
    while units.len() < 2 * pairs {
        let x = random_integer(&qp, rng);
        if x.ord() == Some(Q::from_integer(0)) {
            units.push(x.map_into(&m.base, &Elem::zero(&m.base)));
        }
    }
    let run = || -> Result<Certificate> {
        for i in 0..pairs {
            let (a, b) = (units[2 * i].clone(), units[2 * i + 1].clone());
            let (sa, _) = galois_act(m, hopf, &a, n)?;
            let (sb, _) = galois_act(m, hopf, &b, n)?;
            let (sab, _) = galois_act(m, hopf, &a.mul(&b), n)?;
            let comp = sa.kappa_series.compose(&sb.kappa_series)?;
            if let Some((j, e)) = sym_mismatch(&comp, &sab.kappa_series, n)? {
                return Ok(Certificate::fail(&name, format!("pair {i}, κ^{j}·γ^{e}"), "[χχ'] = [χ]∘[χ']", "differs"));
            }
            let g = sa.gamma_image.eval(&Elem::one(&m.base))?.mul(&sb.gamma_image.eval(&Elem::one(&m.base))?);
            if !g.eq_mod_p(&sab.gamma_image.eval(&Elem::one(&m.base))?, n)? {
                return Ok(Certificate::fail(&name, format!("pair {i}, γ"), "χχ'γ", "differs"));
            }
        }
        Ok(Certificate::pass(&name).with_detail(format!("{pairs} random pairs through degree {}", m.degree)))
    };
    Certificate::from_result(&name, run())
}

/// Valuation data attached to the orientation.
#[derive(Debug, Clone, Serialize)]
pub struct OrientationValuations {
    #[serde(serialize_with = "ser_q")]
    pub ord_pi0: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_p0: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_different: Q,
    #[serde(serialize_with = "ser_q")]
    pub ord_omega_partial: Q,
}

/// The chain `κ-law --(T ↦ D_L T)--> G̃m --(ε^∂)^{-1}--> F_L̃ --(T ↦ π₀T)--> LT_L`
/// collapsed into one series `Φ(T) = exp_L(π₀ d Ω∂^{-1} log_{K_d}(T))`, with
/// `K_d(X, Y) = X + Y + p₀dXY` and `d` a generator of the different.
#[derive(Debug, Clone)]
pub struct OrientationChain {
    pub field: String,
    pub different_generator: Elem,
    pub source: FormalGroupLaw,
    pub composite: SymSeries,
    pub valuations: OrientationValuations,
    /// Every coefficient has Gauss valuation `≥ 0` given `ord Ω∂`.
    pub integral: bool,
    pub genus: Vec<GenusValue>,
}

impl OrientationChain {
    pub fn to_json(&self, certificates: &[Certificate]) -> Value {
        json!({
            "field": self.field,
            "stages": [
                {"map": "T ↦ d·T", "d": self.different_generator.to_json()},
                {"map": "(ε^∂)^-1", "symbol": "Ω∂"},
                {"map": "T ↦ π₀·T"},
            ],
            "source_law": self.source.law.to_json(),
            "composite": self.composite.to_json(),
            "valuations": self.valuations,
            "integral": self.integral,
            "hirzebruch_genus": self.genus,
            "certificates": certificates,
        })
    }
}

/// `Ψ = exp_L(ω log_Ĝm)` over `L[ω]`: `[T^n ω^k] = μ_k [T^n] ℓ^k`.
fn psi_series(t: &LtTower, ell_pows: &[Series<Elem>], sym: &Arc<str>) -> SymSeries {
    let zero = Elem::zero(&t.base);
    let mu = &t.lt.exp;
    sym_series(sym, &zero, t.degree(), 1, |n, k| {
        let c = ell_pows[k].coeff(n);
        if c.is_exact_zero() || mu.coeff(k).is_exact_zero() {
            zero.clone()
        } else {
            t.qp_to_base(c).mul(mu.coeff(k))
        }
    })
}

pub fn orientation_composite(t: &LtTower, n: Q, rng: &mut impl Rng) -> Result<(OrientationChain, Vec<Certificate>)> {
    let d = t.degree();
    let top = t.top();
    let label = format!("orientation({})", t.base.label);
    let sym = omega_partial_symbol();
    let dgen = t.embed(&t.different);
    let scale = t.p0.mul(&dgen);
    let mut source = fgl_multiplicative(top, d)?.rescale(&scale, "p₀d")?;
    source.label = format!("κ-law({}, γ = d)", top.label);

    // [T^n Ω∂^{-k}] Φ = μ_k (π₀d)^k [T^n] log_{K_d}^k
    let lk_pows = source.log.powers(d);
    let c0 = pow_list(&t.pi0.mul(&dgen), d);
    let proto = Elem::zero(top);
    let mu: Vec<Elem> = (0..=d).map(|k| t.embed(t.lt.exp.coeff(k))).collect();
    let phi = sym_series(&sym, &proto, d, -1, |m, k| {
        let c = lk_pows[k].coeff(m);
        if c.is_exact_zero() || mu[k].is_exact_zero() {
            proto.clone()
        } else {
            c.mul(&mu[k]).mul(&c0[k])
        }
    });

    let mut certs = Vec::new();

    // transport from Ψ over L[ω], ω = π₀p₀^{-1}Ω∂^{-1}
    let qp = &t.qp;
    let ell = fgl_multiplicative(qp, d)?.log;
    let ell_pows = ell.powers(d);
    let omega: Arc<str> = Arc::from("ω");
    let psi = psi_series(t, &ell_pows, &omega);
    let name = format!("{label}: Φ(T) = Ψ(p₀dT) with ω = π₀p₀^-1Ω∂^-1");
    let run = || -> Result<Certificate> {
        let sd = pow_list(&scale, d);
        let w = pow_list(&t.pi0.div(&t.p0)?, d);
        for m in 1..=d {
            for k in 1..=m {
                let want = t.embed(&psi.coeff(m).coeff(k as i64)).mul(&sd[m]).mul(&w[k]);
                if !phi.coeff(m).coeff(-(k as i64)).eq_mod_p(&want, n)? {
                    return Ok(Certificate::fail(&name, format!("T^{m}·Ω∂^-{k}"), "transported Ψ", "differs"));
                }
            }
        }
        Ok(Certificate::pass(&name).with_detail(format!("through degree {d}")))
    };
    certs.push(Certificate::from_result(&name, run()));

    // Ψ: Ĝm → LT_L over L[ω], by log_L∘Ψ = ω log_Ĝm
    let name = format!("{label}: Ψ is a homomorphism Ĝm → LT over L[ω] (log criterion)");
    let run = || -> Result<Certificate> {
        let lhs = lift_sym(&t.lt.log, &omega).compose(&psi)?;
        let zero = Elem::zero(&t.base);
        let rhs = sym_series(&omega, &zero, d, 1, |m, k| if k == 1 { t.qp_to_base(ell.coeff(m)) } else { zero.clone() });
        Ok(match sym_mismatch(&lhs, &rhs, n)? {
            None => Certificate::pass(&name).with_detail(format!("through degree {d}")),
            Some((m, k)) => Certificate::fail(&name, format!("T^{m}·ω^{k}"), "ω·log_Ĝm", "differs"),
        })
    };
    certs.push(Certificate::from_result(&name, run()));

    // direct: Φ(K_d(X, Y)) = LT(ΦX, ΦY) in L̃[Ω∂^{-1}]
    let dd = if top.degree() <= 4 { d.min(DIRECT_LIMIT) } else { d.min(HORNER_LIMIT) };
    let name = format!("{label}: Φ(K_d(X,Y)) = LT_L(ΦX, ΦY) symbolic in Ω∂");
    let run = || -> Result<Certificate> {
        let h: Vec<Elem> = (0..=dd).map(|k| mu[k].mul(&c0[k])).collect();
        let hs = Series::new(h.iter().enumerate().map(|(k, c)| SymPoly::monomial(&sym, c.clone(), -(k as i64))).collect());
        let lk = lift_sym(&source.log.truncate(dd), &sym);
        let lhs = BiSeries::subst_sum(&hs, &lk, &lk);
        let law = lift_sym_bi(&t.lt.law.truncate(dd).map(|x| t.embed(x)), &sym);
        let rhs = law.bilinear(&phi.truncate(dd), &phi.truncate(dd));
        Ok(bi_cert_sym(&name, "Ω∂", &lhs, &rhs, n, format!("through degree {dd}")))
    };
    certs.push(Certificate::from_result(&name, run()));

    // numeric: Ω∂ at a random unit of L̃, full degree
    let name = format!("{label}: homomorphism at a random unit Ω∂");
    let u = random_unit(top, rng);
    let run = || -> Result<Certificate> {
        let dn = d.min(40);
        let num = Series::new(phi.truncate(dn).coeffs().iter().map(|c| c.eval(&u)).collect::<Result<Vec<_>>>()?);
        let lt = t.lt.base_change(|x| t.embed(x), "LT");
        let trunc = |x: &FormalGroupLaw| FormalGroupLaw { law: x.law.truncate(dn), log: x.log.truncate(dn), exp: x.exp.truncate(dn), ..x.clone() };
        Ok(match trunc(&source).hom_defect(&num, &trunc(&lt), n, false)? {
            None => Certificate::pass(&name).with_detail(format!("through degree {dn}")),
            Some((i, j)) => Certificate::fail(&name, format!("X^{i}Y^{j}"), "Φ(X +K Y) = ΦX +LT ΦY", "differs"),
        })
    };
    certs.push(Certificate::from_result(&name, run()));

    // linear term and valuation-aware integrality
    let name = format!("{label}: linear term π₀·d·Ω∂^-1");
    let want = SymPoly::monomial(&sym, c0[1].clone(), -1);
    certs.push(Certificate::from_result(
        &name,
        phi.coeff(1).eq_mod_p(&want, n).map(|ok| {
            if ok {
                Certificate::pass(&name)
            } else {
                Certificate::fail(&name, "T^1", "π₀dΩ∂^-1", "other")
            }
        }),
    ));

    let (rec, _) = crate::lubin_tate::period_valuations(&t.base)?;
    let ord_d = different_valuation(&t.base).ord_p;
    let vals = OrientationValuations {
        ord_pi0: rec.ord_pi0,
        ord_p0: rec.ord_p0,
        ord_different: ord_d,
        ord_omega_partial: rec.ord_omega_partial,
    };
    // Gauss valuation of [T^m] with ord Ω∂ substituted; integrality is
    // predicted exactly when the linear term π₀dΩ∂^{-1} is integral
    let gauss = |m: usize| {
        phi.coeff(m).terms().map(|(k, c)| c.ord_lower() + Q::from_integer(k) * vals.ord_omega_partial).min()
    };
    let zero = Q::from_integer(0);
    let linear = gauss(1).unwrap_or(zero);
    let predicted = linear >= zero;
    let first_bad = (1..=d).find_map(|m| gauss(m).filter(|v| *v < zero).map(|v| (m, v)));
    let integral = first_bad.is_none();
    let name = format!("{label}: integrality as predicted by ord Ω∂ = {}", fmt_q(&vals.ord_omega_partial));
    certs.push(match (predicted, first_bad) {
        (true, None) => Certificate::pass(&name).with_detail(format!("integral through degree {d}")),
        (false, Some((m, v))) => Certificate::pass(&name)
            .with_detail(format!("not integral: linear term ord {}, first negative at T^{m} ({})", fmt_q(&linear), fmt_q(&v))),
        (true, Some((m, v))) => Certificate::fail(&name, format!("T^{m}"), "ord_p >= 0", fmt_q(&v)),
        (false, None) => Certificate::fail(&name, "T^1", format!("ord {} < 0", fmt_q(&linear)), "integral series"),
    });

    let genus = (0..d.min(9)).map(|i| hirzebruch_genus(t, i).map(|x| x.1)).collect::<Result<Vec<_>>>()?;
    let chain = OrientationChain {
        field: t.base.label.clone(),
        different_generator: t.different.clone(),
        source,
        composite: phi,
        valuations: vals,
        integral,
        genus,
    };
    Ok((chain, certs))
}

fn bi_cert_sym(name: &str, sym: &str, lhs: &BiSeries<SymPoly<Elem>>, rhs: &BiSeries<SymPoly<Elem>>, n: Q, detail: String) -> Certificate {
    Certificate::from_result(
        name,
        sym_mismatch_bi(lhs, rhs, n).map(|m| match m {
            None => Certificate::pass(name).with_detail(detail),
            Some((i, j, a)) => Certificate::fail(name, format!("X^{i}Y^{j}·{sym}^{a}"), "both sides agree", "differs"),
        }),
    )
}

/// How γ is inverted and rationalized; there is no further computation here.
pub fn localization_note() -> Value {
    json!({
        "inversion": "inverting γ makes the κ-law a rescaled multiplicative law over O[γ^±1]",
        "rationalization": "after tensoring with Q the Chern class c is an isomorphism onto the additive law",
    })
}

#[cfg(test)]
mod tests;
