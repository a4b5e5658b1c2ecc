//! Named certificate suites and the report they produce.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::{Certificate, Status};
use crate::chromatic::{hazewinkel_valuations, kn_group_law, kn_p_series};
use crate::error::{Error, Result};
use crate::formal_group::{
    additive_type_check, fgl_eisenstein_relation_check, fgl_honda, fgl_multiplicative, ord_text, rescaled_pi_series_check,
    special_lubin_tate, FormalGroupLaw, DIRECT_LIMIT,
};
use crate::lubin_tate::{
    dual_character, epsilon0_certificates, epsilon0_series, equivariance_check, norm_compatibility, period_valuations,
    pow_list, random_integer, tate_twist_valuation, random_unit, GaloisUnit, LtTower,
};
use crate::padic::descriptor::{FieldDescriptor, PrecisionProfile};
use crate::padic::scalar::fmt_q;
use crate::padic::{adjoin_root, Elem, FieldCtx};
use crate::ring::{Ring, Valued, Q};
use crate::series::Series;
use crate::thh::{
    chern_class_series, coordinate_independence, galois_act, galois_multiplicativity, kappa_coproduct, orientation_composite,
    p0_field, GradedRingModel,
};

/// Canonical suite names, in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "gm-rescaled",
    "additive-type",
    "honda-valuations",
    "eisenstein-relation",
    "formal-laws",
    "epsilon-equivariance",
    "fontaine",
    "kappa-coproduct",
    "orientation-composite",
    "chromatic-kn",
];

/// Resolve a suite name or alias.
pub fn canonical_suite(name: &str) -> Option<&'static str> {
    let n = match name {
        "lemma-2-1-3" => "gm-rescaled",
        "prop-3-1-2" => "additive-type",
        "fontaine-valuations" => "fontaine",
        "all" => return Some("all"),
        other => other,
    };
    SUITES.iter().copied().find(|s| *s == n)
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub suite: String,
    pub field: FieldDescriptor,
    pub profile: PrecisionProfile,
    pub results: Vec<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|c| c.passed())
    }

    /// 0 all pass, 1 a certificate failed, 3 precision ran out (and nothing failed).
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.results.iter().any(|c| c.status == Status::PrecisionExhausted) {
            3
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "suite {} on {} (p = {}, n_digits = {}, D = {})\n",
            self.suite,
            if self.field.label.is_empty() { "field" } else { &self.field.label },
            self.profile.p,
            self.profile.n_digits,
            self.profile.trunc_degree
        );
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        for c in &self.results {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::PrecisionExhausted => "PREC",
            };
            s.push_str(&format!("{tag}  {}", c.name));
            if let Some(f) = &c.first_failure {
                s.push_str(&format!("  [at {}: expected {}, got {}]", f.location, f.expected, f.got));
            }
            if let Some(d) = &c.detail {
                s.push_str(&format!("  ({d})"));
            }
            s.push('\n');
        }
        let fails = self.results.iter().filter(|c| !c.passed()).count();
        s.push_str(&format!("{} certificates, {} not passed\n", self.results.len(), fails));
        if let Some(t) = self.wall_time_ms {
            s.push_str(&format!("wall time {t} ms\n"));
        }
        s
    }
}

/// Everything a suite needs: the field at working precision and the target precision.
pub struct SuiteInput {
    pub field: Arc<FieldCtx>,
    pub profile: PrecisionProfile,
    pub n: Q,
}

impl SuiteInput {
    pub fn new(desc: &FieldDescriptor, profile: &PrecisionProfile) -> Result<Self> {
        let mut pr = *profile;
        pr.p = desc.p;
        pr.validate()?;
        let field = desc.build(pr.working_cap())?;
        Ok(SuiteInput { field, profile: pr, n: Q::from_integer(pr.n_digits) })
    }

    fn d(&self) -> usize {
        self.profile.trunc_degree
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ (self.field.p << 8) ^ salt)
    }
}

/// Output of one suite: certificates, notes, and named data records.
#[derive(Default)]
struct Part {
    certs: Vec<Certificate>,
    notes: Vec<String>,
    data: Vec<(String, Value)>,
}

type SuiteOut = Part;

impl From<(Vec<Certificate>, Vec<String>)> for Part {
    fn from((certs, notes): (Vec<Certificate>, Vec<String>)) -> Self {
        Part { certs, notes, data: vec![] }
    }
}

pub fn run_suite(name: &str, desc: &FieldDescriptor, profile: &PrecisionProfile, timing: bool) -> Result<CertificateReport> {
    let suite = canonical_suite(name).ok_or_else(|| Error::Invalid(format!("unknown suite `{name}`")))?;
    let start = Instant::now();
    let input = SuiteInput::new(desc, profile)?;
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    // independent suites run on their own threads; order is fixed afterwards
    let parts: Vec<Part> = std::thread::scope(|sc| {
        let handles: Vec<_> = names.iter().map(|&s| (s, sc.spawn(|| run_one(s, &input)))).collect();
        handles
            .into_iter()
            .map(|(s, h)| match h.join() {
                Ok(Ok(part)) => part,
                Ok(Err(e)) => Part { certs: vec![Certificate::from_result(&format!("{s}: setup"), Err(e))], ..Part::default() },
                Err(_) => Part {
                    certs: vec![Certificate::fail(&format!("{s}: setup"), "suite", "completion", "panic")],
                    ..Part::default()
                },
            })
            .collect()
    });
    let mut results = Vec::new();
    let mut notes = Vec::new();
    let mut data = BTreeMap::new();
    for part in parts {
        results.extend(part.certs);
        notes.extend(part.notes);
        data.extend(part.data);
    }
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(CertificateReport {
        suite: suite.to_string(),
        field: desc.clone(),
        profile: input.profile,
        results,
        notes,
        data,
        wall_time_ms: timing.then(|| start.elapsed().as_millis() as u64),
    })
}

fn run_one(name: &str, x: &SuiteInput) -> Result<SuiteOut> {
    match name {
        "gm-rescaled" => gm_rescaled(x),
        "additive-type" => additive_type(x),
        "honda-valuations" => honda_valuations(x),
        "eisenstein-relation" => eisenstein(x),
        "formal-laws" => formal_laws(x),
        "epsilon-equivariance" => epsilon(x),
        "fontaine" => fontaine(x),
        "kappa-coproduct" => kappa(x),
        "orientation-composite" => orientation(x),
        "chromatic-kn" => chromatic(x),
        _ => Err(Error::Invalid(format!("unknown suite `{name}`"))),
    }
}

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(mut n: usize, p: usize) -> i64 {
    let mut s = 0;
    while n > 0 {
        s += (n % p) as i64;
        n /= p;
    }
    s
}

/// The `p₀`-rescaled multiplicative law: `ord exp_n = (α_p(n) - 1)/(p - 1)`
/// exactly and `ord log_n ≥ 0`.
pub fn gm_rescaled_certificates(p: u64, cap: i64, d: usize, n: Q) -> Result<Vec<Certificate>> {
    let (k, p0) = p0_field(p, cap)?;
    let g = fgl_multiplicative(&k, d)?.rescale(&p0, "p₀")?;
    let mut out = Vec::new();
    let name = format!("{}: ord exp_n = (α_p(n) - 1)/(p - 1)", g.label);
    let bad = (1..=d).find_map(|m| {
        let want = Q::new(digit_sum(m, p as usize) - 1, p as i64 - 1);
        (g.exp.coeff(m).ord() != Some(want)).then(|| (m, want))
    });
    out.push(match bad {
        None => Certificate::pass(&name).with_detail(format!("exact through degree {d}")),
        Some((m, w)) => Certificate::fail(&name, format!("T^{m}"), fmt_q(&w), ord_text(g.exp.coeff(m))),
    });
    let name = format!("{}: log integral", g.label);
    out.push(match g.log.first_below(Q::from_integer(0), 0) {
        None => Certificate::pass(&name),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), "ord_p >= 0", ord_text(g.log.coeff(m))),
    });
    out.push(g.integrality());
    out.push(g.log_exp_inverse(n));
    out.push(additive_type_check(&g, &p0, p));
    Ok(out)
}

/// `½(e^{2x} - 1) ≡ Σ x^{2^k}` modulo 2 through degree `d`.
pub fn mod2_certificate(cap: i64, d: usize) -> Result<Certificate> {
    let k = FieldCtx::qp(2, cap);
    let g = fgl_multiplicative(&k, d)?.rescale(&Elem::from_i64(&k, 2), "2")?;
    let name = format!("½(e^(2x) - 1) ≡ Σ x^(2^k) mod 2 through degree {d}");
    for m in 1..=d {
        let bit = if m.is_power_of_two() { 1 } else { 0 };
        if !g.exp.coeff(m).eq_mod(&Elem::from_i64(&k, bit), 1)? {
            return Ok(Certificate::fail(&name, format!("x^{m}"), bit.to_string(), ord_text(g.exp.coeff(m))));
        }
    }
    Ok(Certificate::pass(&name))
}

fn gm_rescaled(x: &SuiteInput) -> Result<SuiteOut> {
    let p = x.field.p;
    let mut c = gm_rescaled_certificates(p, x.field.cap, x.d(), x.n)?;
    if p == 2 {
        c.push(Certificate::from_result("mod-2 example", mod2_certificate(x.field.cap, x.d())));
    }
    Ok((c, vec![]).into())
}

fn raised_degree(x: &SuiteInput, suite: &str) -> (usize, Vec<String>) {
    let q = x.field.q() as usize;
    let want = q * q + 1;
    if x.d() < want {
        (want, vec![format!("{suite}: D raised from {} to q²+1 = {want}", x.d())])
    } else {
        (x.d(), vec![])
    }
}

/// `[p] ≡ 0 mod π₀` for the rescaled law, computed as `π₀^{n-1}·[T^n][p]_L`.
pub fn rescaled_additive_type(t: &LtTower, n: Q) -> Result<Vec<Certificate>> {
    let p = t.base.p;
    let q = t.q as usize;
    let d = t.degree();
    let ps = t.lt.p_series(p)?;
    let pi0 = pow_list(&t.pi0, d);
    let rescaled = Series::from_fn(&Elem::zero(t.top()), d, |m| {
        if m == 0 || ps.coeff(m).is_exact_zero() {
            Elem::zero(t.top())
        } else {
            t.embed(ps.coeff(m)).mul(&pi0[m - 1])
        }
    });
    let label = format!("LT({})[π₀]", t.base.label);
    let bound = t.pi0.ord().ok_or(Error::DivisionByZero)?;
    let name = format!("{label}: [p] ≡ 0 mod π₀");
    let a = match rescaled.first_below(bound, 0) {
        None => Certificate::pass(&name).with_detail(format!("ord_p >= {} through degree {d}", fmt_q(&bound))),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), format!("ord_p >= {}", fmt_q(&bound)), ord_text(rescaled.coeff(m))),
    };
    // [π] of the rescaled law: π₀^{-1}(π·π₀T + π₀^q T^q) = π(T - T^q)
    let pis = t.lt.endomorphism(&t.pi)?.series;
    let pi_top = t.embed(&t.pi);
    let name = format!("{label}: [π] = π(T - T^q)");
    let mut bad = None;
    for m in 1..=d {
        let got = t.embed(pis.coeff(m)).mul(&pi0[m - 1]);
        let want = if m == 1 {
            pi_top.clone()
        } else if m == q {
            pi_top.neg()
        } else {
            Elem::zero(t.top())
        };
        if !got.eq_mod_p(&want, n)? {
            bad = Some(m);
            break;
        }
    }
    let b = match bad {
        None => Certificate::pass(&name).with_detail(format!("through degree {d}")),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), "π(T - T^q)", "differs"),
    };
    Ok(vec![a, b])
}

fn additive_type(x: &SuiteInput) -> Result<SuiteOut> {
    let (d, notes) = raised_degree(x, "additive-type");
    let t = LtTower::new(&x.field, d)?;
    let mut c = rescaled_additive_type(&t, x.n)?;
    // the same statement through the rescaled law itself, where that is cheap
    let dl = x.d().min(DIRECT_LIMIT);
    let small = LtTower::new(&x.field, dl)?;
    let g = small.rescaled_law()?;
    let mut a = additive_type_check(&g, &small.pi0, x.field.p);
    a.name = format!("{} (rescaled law)", a.name);
    c.push(a);
    c.push(rescaled_pi_series_check(&g, &small.embed(&small.pi), small.q as usize, x.n));
    Ok((c, notes).into())
}

/// `ord_p(π₀^{q^k-1} π^{-k}) = ((q^k - 1)/(q - 1) - k)/e` for `q^k ≤ D`,
/// read off the `π₀`-rescaled Honda logarithm.
pub fn honda_valuation_certificates(l: &Arc<FieldCtx>, d: usize, n: Q) -> Result<Vec<Certificate>> {
    let f = fgl_honda(l, d)?;
    let pi = Elem::uniformizer(l);
    let q = l.q() as usize;
    let mut poly = vec![pi.clone()];
    poly.extend((1..q - 1).map(|_| Elem::zero(l)));
    poly.push(Elem::one(l));
    let node = adjoin_root(l, &poly, &format!("{}(π₀)", l.label))?;
    let label = &f.label;
    let mut out = vec![f.integrality()];

    let name = format!("{label}: rescaled log valuations ((q^k-1)/(q-1) - k)/e");
    let mut bad = None;
    let (mut qk, mut k) = (1usize, 0i64);
    while qk <= d {
        let c = node.embed(f.log.coeff(qk)).mul(&node.root.pow(qk as u64 - 1));
        let want = Q::new((qk as i64 - 1) / (q as i64 - 1) - k, l.e as i64);
        if c.ord() != Some(want) {
            bad = Some((qk, want, c));
            break;
        }
        qk *= q;
        k += 1;
    }
    out.push(match bad {
        None => Certificate::pass(&name).with_detail(format!("{k} coefficients through degree {d}")),
        Some((m, w, c)) => Certificate::fail(&name, format!("T^{m}"), fmt_q(&w), ord_text(&c)),
    });

    let name = format!("{label}: [π](T) ≡ T^q mod π");
    let ps = f.endomorphism(&pi)?.series;
    let mut want = Series::zero(&Elem::zero(l), ps.degree());
    if q <= ps.degree() {
        want.set(q, Elem::one(l));
    }
    let diff = ps.sub(&want);
    let bound = Q::new(1, l.e as i64);
    out.push(match diff.first_below(bound, 0) {
        None => Certificate::pass(&name),
        Some(m) => Certificate::fail(&name, format!("T^{m}"), format!("ord_p >= {}", fmt_q(&bound)), ord_text(diff.coeff(m))),
    });
    let _ = n;
    Ok(out)
}

fn honda_valuations(x: &SuiteInput) -> Result<SuiteOut> {
    Ok((honda_valuation_certificates(&x.field, x.d(), x.n)?, vec![]).into())
}

fn eisenstein(x: &SuiteInput) -> Result<SuiteOut> {
    let f = special_lubin_tate(&x.field, x.d())?;
    Ok((vec![fgl_eisenstein_relation_check(&f, x.n)], vec![]).into())
}

/// Axioms, log/exp inversion and `[a+b]`, `[ab]` on random scalars.
pub fn law_certificates(f: &FormalGroupLaw, n: Q, samples: usize, rng: &mut ChaCha8Rng) -> Vec<Certificate> {
    let mut out = f.axioms(DIRECT_LIMIT, n);
    out.push(f.log_exp_inverse(n));
    let ctx = f.proto().ctx().clone();
    let name = format!("{}: endomorphism ring laws", f.label);
    let mut res = Certificate::pass(&name).with_detail(format!("{samples} random pairs"));
    for i in 0..samples {
        let (a, b) = (random_integer(&ctx, rng), random_integer(&ctx, rng));
        let c = f.endomorphism_laws(&a, &b, n);
        if !c.passed() {
            res = c;
            res.name = name.clone();
            if let Some(ff) = res.first_failure.as_mut() {
                ff.location = format!("pair {i}, {}", ff.location);
            }
            break;
        }
    }
    out.push(res);
    out
}

fn formal_laws(x: &SuiteInput) -> Result<SuiteOut> {
    let d = x.d();
    let mut rng = x.rng(1);
    let mut out = Vec::new();
    let lt = special_lubin_tate(&x.field, d)?;
    out.push(lt.integrality());
    out.extend(law_certificates(&lt, x.n, 20, &mut rng));
    let gm = fgl_multiplicative(&x.field, d)?;
    out.extend(law_certificates(&gm, x.n, 20, &mut rng));
    let honda = fgl_honda(&x.field, d)?;
    out.extend(law_certificates(&honda, x.n, 20, &mut rng));
    Ok((out, vec![]).into())
}

fn epsilon(x: &SuiteInput) -> Result<SuiteOut> {
    let t = LtTower::new(&x.field, x.d())?;
    let eps = epsilon0_series(&t)?;
    let mut rng = x.rng(2);
    let mut out = epsilon0_certificates(&t, &eps, x.n, &mut rng);
    for i in 0..10 {
        let s = GaloisUnit::random(&x.field, &t.qp, &mut rng)?;
        let mut c = equivariance_check(&t, &eps, &s, x.n);
        c.name = format!("{} (random σ {:02})", c.name, i + 1);
        out.push(c);
    }
    out.push(norm_compatibility(&x.field, &t.qp, 20, x.n, &mut rng));
    let (_, dc) = dual_character(&t.lt, x.n)?;
    out.extend(dc);
    Ok((out, vec![]).into())
}

fn fontaine(x: &SuiteInput) -> Result<SuiteOut> {
    let (record, mut out) = period_valuations(&x.field)?;
    let t = LtTower::new(&x.field, x.d().min(DIRECT_LIMIT))?;
    out.push(t.primitive_torsion(x.n)?.1);
    let twist = tate_twist_valuation(&x.field);
    Ok(Part {
        certs: out,
        notes: vec![],
        data: vec![
            ("period_valuations".into(), serde_json::to_value(&record).unwrap_or(Value::Null)),
            ("tate_twist".into(), serde_json::to_value(&twist).unwrap_or(Value::Null)),
        ],
    })
}

fn kappa(x: &SuiteInput) -> Result<SuiteOut> {
    let d = x.d();
    let m = GradedRingModel::new(x.field.p, x.field.cap, d)?;
    let mut rng = x.rng(3);
    let mut out = vec![m.trace_record().1];
    let (h, c) = kappa_coproduct(&m, x.n)?;
    out.extend(c);
    out.extend(chern_class_series(&m, &h, x.n)?.1);
    out.extend(coordinate_independence(&m, &h, &[], x.n)?);
    let qp = FieldCtx::qp(m.p(), m.base.cap);
    for draw in 0..2 {
        let a: Vec<Elem> = (1..d).map(|_| random_integer(&qp, &mut rng).map_into(&m.base, &Elem::zero(&m.base))).collect();
        for mut c in coordinate_independence(&m, &h, &a, x.n)? {
            c.name = format!("{} (draw {})", c.name, draw + 1);
            out.push(c);
        }
    }
    let one = Elem::one(&m.base);
    let (id, _) = galois_act(&m, &h, &one, x.n)?;
    let name = format!("[χ]({}): χ = 1 is the identity", m.base.label);
    let var = Series::var(&m.zero(), d);
    out.push(Certificate::from_result(
        &name,
        crate::lubin_tate::sym_mismatch(&id.kappa_series, &var, x.n).map(|r| match r {
            None => Certificate::pass(&name),
            Some((k, a)) => Certificate::fail(&name, format!("κ^{k}·γ^{a}"), "κ", "differs"),
        }),
    ));
    let chi = loop {
        let c = random_integer(&qp, &mut rng);
        if c.ord() == Some(Q::from_integer(0)) {
            break c.map_into(&m.base, &Elem::zero(&m.base));
        }
    };
    out.extend(galois_act(&m, &h, &chi, x.n)?.1);
    out.push(galois_multiplicativity(&m, &h, 20, x.n, &mut rng));
    Ok((out, vec![]).into())
}

fn orientation(x: &SuiteInput) -> Result<SuiteOut> {
    let t = LtTower::new(&x.field, x.d())?;
    let mut rng = x.rng(4);
    let (chain, mut out) = orientation_composite(&t, x.n, &mut rng)?;
    let eps = epsilon0_series(&t)?;
    for i in 0..5 {
        let s = GaloisUnit::new(random_unit(&x.field, &mut rng), &t.qp)?;
        let mut c = equivariance_check(&t, &eps, &s, x.n);
        c.name = format!("orientation({}): intertwines O_L^× with χ via ε (unit {})", x.field.label, i + 1);
        out.push(c);
    }
    let notes = vec![format!(
        "orientation-composite: composite {} over {}",
        if chain.integral { "integral" } else { "not integral (as predicted by valuations)" },
        x.field.label
    )];
    let summary = json!({"valuations": chain.valuations, "integral": chain.integral});
    Ok(Part { certs: out, notes, data: vec![("orientation".into(), summary)] })
}

/// `(p, n)` pairs run by the chromatic suite.
pub const KN_CASES: &[(u64, u32)] = &[(2, 1), (3, 1), (5, 1), (3, 2)];

pub fn chromatic_certificates(p: u64, h: u32, d: usize, digits: i64) -> Result<Vec<Certificate>> {
    let q = (p as usize).pow(h);
    let d = d.max(q + 3);
    let pr = PrecisionProfile::new(p, digits, d)?;
    let qp = FieldCtx::qp(p, pr.working_cap());
    let n = Q::from_integer(digits);
    let (f, mut out) = kn_group_law(&qp, h, d, n)?;
    out.extend(kn_p_series(&f, p, q, n)?.certificates);
    out.push(hazewinkel_valuations(&qp, h, d)?);
    Ok(out)
}

fn chromatic(x: &SuiteInput) -> Result<SuiteOut> {
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for &(p, h) in KN_CASES {
        let q = (p as usize).pow(h);
        let d = x.d().max(q + 3);
        if d > x.d() {
            notes.push(format!("chromatic-kn: D raised to q+3 = {d} for p = {p}, n = {h}"));
        }
        out.extend(chromatic_certificates(p, h, d, x.profile.n_digits)?);
    }
    Ok((out, notes).into())
}

#[cfg(test)]
mod tests;
