use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use fgl_core::chromatic::{kn_group_law, kn_p_series, Fp};
use fgl_core::formal_group::{FormalGroupLaw, fgl_honda, fgl_multiplicative, special_lubin_tate};
use fgl_core::lubin_tate::{epsilon0_series, LtTower};
use fgl_core::padic::descriptor::{FieldDescriptor, PrecisionProfile};
use fgl_core::padic::scalar::fmt_q;
use fgl_core::padic::{Elem, FieldCtx};
use fgl_core::ring::{Valued, Q};
use fgl_core::series::render::Render;
use fgl_core::series::{BiSeries, Series, SymPoly};
use fgl_core::suites::{canonical_suite, run_suite};
use fgl_core::thh::{chern_class_series, kappa_coproduct, orientation_composite, p0_field, GradedRingModel};
use fgl_core::Error;

#[derive(Parser)]
#[command(name = "fglcert", about = "Certify p-adic formal group law identities", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a certificate suite (or `all`).
    Certify {
        suite: String,
        #[command(flatten)]
        common: Common,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Print a series with its valuation profile.
    Show {
        object: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build the orientation composite over a field.
    Orient {
        #[command(flatten)]
        common: Common,
    },
    /// Chromatic laws.
    Chromatic {
        #[command(subcommand)]
        what: ChromaticCmd,
    },
}

#[derive(Subcommand)]
enum ChromaticCmd {
    /// The k(n) law, its [p]-series and certificates.
    Kn {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Prime (used when no field is given).
    #[arg(long)]
    p: Option<u64>,
    /// Height for chromatic objects.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Field descriptor JSON file.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Truncation degree D.
    #[arg(long)]
    degree: Option<usize>,
    /// Target precision in p-digits.
    #[arg(long)]
    digits: Option<i64>,
    #[arg(long)]
    json: bool,
    /// Also write the output to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Overrides read from the file named by `FGL_PROFILE`.
#[derive(Deserialize, Default)]
struct ProfileFile {
    n_digits: Option<i64>,
    trunc_degree: Option<usize>,
}

enum Fail {
    Usage(String),
    Run(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(m) => Fail::Usage(m),
            other => Fail::Run(other),
        }
    }
}

impl Common {
    fn descriptor(&self) -> Result<FieldDescriptor, Fail> {
        match &self.field {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
                let d = FieldDescriptor::parse(&text)?;
                if let Some(p) = self.p {
                    if p != d.p {
                        return Err(Fail::Usage(format!("--p {p} disagrees with the field (p = {})", d.p)));
                    }
                }
                Ok(d)
            }
            None => Ok(FieldDescriptor::qp(self.p.unwrap_or(3))),
        }
    }

    fn profile(&self, p: u64) -> Result<PrecisionProfile, Fail> {
        let mut pr = PrecisionProfile::default_for(p);
        if let Ok(path) = std::env::var("FGL_PROFILE") {
            let text = std::fs::read_to_string(&path).map_err(|e| Fail::Usage(format!("FGL_PROFILE {path}: {e}")))?;
            let f: ProfileFile = serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("FGL_PROFILE: {e}")))?;
            pr.n_digits = f.n_digits.unwrap_or(pr.n_digits);
            pr.trunc_degree = f.trunc_degree.unwrap_or(pr.trunc_degree);
        }
        pr.n_digits = self.digits.unwrap_or(pr.n_digits);
        pr.trunc_degree = self.degree.unwrap_or(pr.trunc_degree);
        pr.validate()?;
        Ok(pr)
    }

    fn emit(&self, text: String, value: Value) -> Result<(), Fail> {
        let body = if self.json { format!("{}\n", serde_json::to_string_pretty(&value).unwrap()) } else { text };
        print!("{body}");
        if let Some(path) = &self.out {
            std::fs::write(path, &body).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

/// Coefficients are printed at the requested precision, not the working one.
trait Clamp: Sized {
    fn clamp(&self, digits: i64) -> Self;
}

impl Clamp for Elem {
    fn clamp(&self, digits: i64) -> Self {
        self.truncate_prec(digits)
    }
}

impl Clamp for SymPoly<Elem> {
    fn clamp(&self, digits: i64) -> Self {
        self.map_coeffs(&self.coeff(0).clamp(digits), |c| c.truncate_prec(digits))
    }
}

fn cs<R: Clamp + fgl_core::ring::Ring>(s: &Series<R>, digits: i64) -> Series<R> {
    s.map(|c| c.clamp(digits))
}

fn cb<R: Clamp + fgl_core::ring::Ring>(s: &BiSeries<R>, digits: i64) -> BiSeries<R> {
    s.map(|c| c.clamp(digits))
}

fn cl<R: Clamp + fgl_core::ring::Field + Valued>(f: &FormalGroupLaw<R>, digits: i64) -> FormalGroupLaw<R> {
    let mut g = f.clone();
    g.law = cb(&f.law, digits);
    g.log = cs(&f.log, digits);
    g.exp = cs(&f.exp, digits);
    g
}

fn ord_str<R: Valued>(x: &R) -> String {
    match x.ord() {
        Some(v) => fmt_q(&v),
        None => "inf".into(),
    }
}

/// One row per nonzero coefficient: degree, ord_p, coefficient.
fn series_table<R: Render + Valued>(title: &str, s: &Series<R>) -> String {
    let mut out = format!("{title}\n{:>5}  {:>8}  coefficient\n", "n", "ord_p");
    for (n, c) in s.coeffs().iter().enumerate() {
        if !c.is_exact_zero() {
            out.push_str(&format!("{n:>5}  {:>8}  {}\n", ord_str(c), c.to_text()));
        }
    }
    out
}

fn bi_table<R: Render + Valued>(title: &str, s: &BiSeries<R>) -> String {
    let mut out = format!("{title}\n{:>9}  {:>8}  coefficient\n", "(i, j)", "ord_p");
    for (i, j) in s.indices() {
        let c = s.get(i, j);
        if !c.is_exact_zero() {
            out.push_str(&format!("{:>9}  {:>8}  {}\n", format!("({i}, {j})"), ord_str(c), c.to_text()));
        }
    }
    out
}

fn fp_text(s: &Series<SymPoly<Fp>>, var: &str) -> String {
    let mut parts = vec![];
    for (n, c) in s.coeffs().iter().enumerate() {
        for (a, x) in c.terms() {
            if x.v != 0 {
                let u = match a {
                    0 => String::new(),
                    1 => "u·".into(),
                    _ => format!("u^{a}·"),
                };
                let coef = if x.v == 1 { String::new() } else { format!("{}·", x.v) };
                parts.push(format!("{coef}{u}{var}^{n}"));
            }
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn fp_json(s: &Series<SymPoly<Fp>>) -> Value {
    let terms: Vec<Value> = s
        .coeffs()
        .iter()
        .enumerate()
        .flat_map(|(n, c)| c.terms().filter(|(_, x)| x.v != 0).map(move |(a, x)| json!({"T": n, "u": a, "coeff": x.v})).collect::<Vec<_>>())
        .collect();
    json!({"ring": "F_p[u]", "terms": terms})
}

const OBJECTS: &[&str] = &[
    "gm-log",
    "rescaled-gm-log",
    "honda-log",
    "lt-law",
    "lt-log",
    "p-series",
    "epsilon0",
    "kn-law",
    "kn-p-series",
    "chern-class",
];

fn show(object: &str, c: &Common) -> Result<(), Fail> {
    if !OBJECTS.contains(&object) {
        return Err(Fail::Usage(format!("unknown object `{object}`; expected one of {}", OBJECTS.join(", "))));
    }
    let desc = c.descriptor()?;
    let pr = c.profile(desc.p)?;
    let cap = pr.working_cap();
    let d = pr.trunc_degree;
    let dg = pr.n_digits;
    let head = json!({"object": object, "profile": pr});
    let (text, value) = match object {
        "gm-log" | "honda-log" | "lt-log" | "p-series" => {
            let l = desc.build(cap)?;
            let s = match object {
                "gm-log" => fgl_multiplicative(&l, d)?.log,
                "honda-log" => fgl_honda(&l, d)?.log,
                "lt-log" => special_lubin_tate(&l, d)?.log,
                _ => special_lubin_tate(&l, d)?.p_series(l.p)?,
            };
            let s = cs(&s, dg);
            (series_table(&format!("{object} over {}", l.label), &s), json!({"field": desc, "series": s.to_json()}))
        }
        "rescaled-gm-log" => {
            let (k, p0) = p0_field(pr.p, cap)?;
            let g = cl(&fgl_multiplicative(&k, d)?.rescale(&p0, "p₀")?, dg);
            let text = format!("{}\n{}", series_table(&format!("{} log", g.label), &g.log), series_table(&format!("{} exp", g.label), &g.exp));
            (text, json!({"label": g.label, "log": g.log.to_json(), "exp": g.exp.to_json()}))
        }
        "lt-law" => {
            let l = desc.build(cap)?;
            let f = cl(&special_lubin_tate(&l, d)?, dg);
            (bi_table(&f.label, &f.law), f.to_json(&[]))
        }
        "epsilon0" => {
            let l = desc.build(cap)?;
            let t = LtTower::new(&l, d)?;
            let e = cs(&epsilon0_series(&t)?, dg);
            (series_table(&format!("ε⁰ over {}", t.top().label), &e), json!({"field": desc, "series": e.to_json()}))
        }
        "kn-law" | "kn-p-series" => {
            let q = (pr.p as usize).pow(c.n);
            let d = if c.degree.is_some() { d } else { d.min(q * q + 1).max(q + 3) };
            let qp = FieldCtx::qp(pr.p, cap);
            let n = Q::from_integer(pr.n_digits);
            let (f, certs) = kn_group_law(&qp, c.n, d, n)?;
            if object == "kn-law" {
                let f = cl(&f, dg);
                (bi_table(&format!("{} law", f.label), &f.law), f.to_json(&certs))
            } else {
                let mut s = kn_p_series(&f, pr.p, q, n)?;
                s.integral.underlying = cs(&s.integral.underlying, dg);
                let text = format!(
                    "{}\nmod {}: {}\n",
                    series_table(&format!("[{}] of {}", pr.p, f.label), &s.integral.underlying),
                    pr.p,
                    fp_text(&s.mod_p, "T")
                );
                (text, json!({"integral": s.integral.to_json(), "mod_p": fp_json(&s.mod_p), "certificates": s.certificates}))
            }
        }
        _ => {
            let m = GradedRingModel::new(pr.p, cap, d)?;
            let n = Q::from_integer(pr.n_digits);
            let (h, _) = kappa_coproduct(&m, n)?;
            let (s, certs) = chern_class_series(&m, &h, n)?;
            let s = cs(&s, dg);
            (series_table(&format!("c(η) over {}", m.base.label), &s), json!({"series": s.to_json(), "certificates": certs}))
        }
    };
    let mut value = value;
    if let (Value::Object(v), Value::Object(h)) = (&mut value, head) {
        for (k, x) in h {
            v.entry(k).or_insert(x);
        }
    }
    c.emit(text, value)
}

fn certify(suite: &str, c: &Common, timing: bool) -> Result<i32, Fail> {
    if canonical_suite(suite).is_none() {
        return Err(Fail::Usage(format!("unknown suite `{suite}`")));
    }
    let desc = c.descriptor()?;
    let pr = c.profile(desc.p)?;
    let report = run_suite(suite, &desc, &pr, timing)?;
    c.emit(report.to_text(), serde_json::to_value(&report).unwrap())?;
    Ok(report.exit_code())
}

fn certs_exit(certs: &[fgl_core::certificate::Certificate]) -> i32 {
    use fgl_core::certificate::Status;
    if certs.iter().any(|c| c.status == Status::Fail) {
        1
    } else if certs.iter().any(|c| c.status == Status::PrecisionExhausted) {
        3
    } else {
        0
    }
}

fn cert_lines(certs: &[fgl_core::certificate::Certificate]) -> String {
    certs
        .iter()
        .map(|c| format!("{}  {}\n", if c.passed() { "PASS" } else { "FAIL" }, c.name))
        .collect()
}

fn orient(c: &Common) -> Result<i32, Fail> {
    use rand::SeedableRng;
    let desc = c.descriptor()?;
    let pr = c.profile(desc.p)?;
    let l = desc.build(pr.working_cap())?;
    let t = LtTower::new(&l, pr.trunc_degree)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0e1e);
    let (mut chain, certs) = orientation_composite(&t, Q::from_integer(pr.n_digits), &mut rng)?;
    chain.composite = cs(&chain.composite, pr.n_digits);
    chain.source = cl(&chain.source, pr.n_digits);
    let text = format!(
        "{}\nintegral: {}\n{}",
        series_table(&format!("orientation composite over {}", l.label), &chain.composite),
        chain.integral,
        cert_lines(&certs)
    );
    let mut v = chain.to_json(&certs);
    v["profile"] = json!(pr);
    c.emit(text, v)?;
    Ok(certs_exit(&certs))
}

fn chromatic(c: &Common) -> Result<i32, Fail> {
    let desc = c.descriptor()?;
    let mut pr = c.profile(desc.p)?;
    let q = (pr.p as usize).checked_pow(c.n).ok_or_else(|| Fail::Usage("q = p^n overflows".into()))?;
    if c.degree.is_none() {
        pr.trunc_degree = pr.trunc_degree.max(q + 3);
    }
    let qp = FieldCtx::qp(pr.p, pr.working_cap());
    let n = Q::from_integer(pr.n_digits);
    let (f, mut certs) = kn_group_law(&qp, c.n, pr.trunc_degree, n)?;
    let mut s = kn_p_series(&f, pr.p, q, n)?;
    certs.extend(s.certificates.iter().cloned());
    s.integral.underlying = cs(&s.integral.underlying, pr.n_digits);
    let f = cl(&f, pr.n_digits);
    let text = format!(
        "{}{}\nmod {}: {}\n{}",
        bi_table(&format!("{} law", f.label), &f.law),
        series_table(&format!("[{}]", pr.p), &s.integral.underlying),
        pr.p,
        fp_text(&s.mod_p, "T"),
        cert_lines(&certs)
    );
    let v = json!({
        "profile": pr,
        "law": f.to_json(&[]),
        "p_series": s.integral.to_json(),
        "p_series_mod_p": fp_json(&s.mod_p),
        "certificates": certs,
    });
    c.emit(text, v)?;
    Ok(certs_exit(&certs))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.cmd {
        Cmd::Certify { suite, common, timing } => certify(suite, common, *timing),
        Cmd::Show { object, common } => show(object, common).map(|_| 0),
        Cmd::Orient { common } => orient(common),
        Cmd::Chromatic { what: ChromaticCmd::Kn { common } } => chromatic(common),
    };
    match r {
        Ok(code) => ExitCode::from(code as u8),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_precision() { 3 } else { 1 })
        }
    }
}
