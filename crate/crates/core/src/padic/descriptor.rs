//! JSON field descriptors and precision profiles.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::field::FieldCtx;
use super::residue::default_modulus;
use crate::error::{Error, Result};

/// One coefficient of the Eisenstein polynomial: an integer (decimal string,
/// number, or the tokens `"p"`/`"-p"`) or a list of `f` such integers giving
/// its coordinates in `W`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Str(String),
    W(Vec<Coeff>),
}

impl Coeff {
    fn scalar(&self, p: u64) -> Result<BigInt> {
        match self {
            Coeff::Int(n) => Ok(BigInt::from(*n)),
            Coeff::Str(s) => match s.trim() {
                "p" => Ok(BigInt::from(p)),
                "-p" => Ok(-BigInt::from(p)),
                t => BigInt::from_str(t).map_err(|_| Error::Invalid(format!("bad coefficient `{t}`"))),
            },
            Coeff::W(_) => Err(Error::Invalid("nested coefficient list".into())),
        }
    }

    fn coords(&self, p: u64, f: usize) -> Result<Vec<BigInt>> {
        let mut v = match self {
            Coeff::W(items) => items.iter().map(|c| c.scalar(p)).collect::<Result<Vec<_>>>()?,
            other => vec![other.scalar(p)?],
        };
        if v.len() > f {
            return Err(Error::Invalid("coefficient has more than f coordinates".into()));
        }
        v.resize(f, BigInt::from(0));
        Ok(v)
    }
}

/// `{p, f, e, eisenstein: [low → high], label}`; `unramified` optionally
/// overrides the default residue modulus (low → high, monic, length `f + 1`).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldDescriptor {
    pub p: u64,
    #[serde(default = "one")]
    pub f: usize,
    pub e: usize,
    pub eisenstein: Vec<Coeff>,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unramified: Option<Vec<Coeff>>,
}

fn one() -> usize {
    1
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl FieldDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("field descriptor: {e}")))
    }

    pub fn qp(p: u64) -> Self {
        FieldDescriptor {
            p,
            f: 1,
            e: 1,
            eisenstein: vec![Coeff::Str("-p".into()), Coeff::Int(1)],
            label: format!("Q_{p}"),
            unramified: None,
        }
    }

    pub fn build(&self, cap: i64) -> Result<Arc<FieldCtx>> {
        if !is_prime(self.p) {
            return Err(Error::Invalid(format!("{} is not prime", self.p)));
        }
        if self.f == 0 || self.e == 0 {
            return Err(Error::Invalid("f and e must be positive".into()));
        }
        if self.eisenstein.len() != self.e + 1 {
            return Err(Error::Invalid(format!(
                "eisenstein has {} coefficients, expected e + 1 = {}",
                self.eisenstein.len(),
                self.e + 1
            )));
        }
        let unram: Vec<BigInt> = match &self.unramified {
            Some(c) => c.iter().map(|x| x.scalar(self.p)).collect::<Result<_>>()?,
            None => default_modulus(self.p, self.f).into_iter().map(BigInt::from).collect(),
        };
        if unram.len() != self.f + 1 {
            return Err(Error::Invalid("unramified modulus must have degree f".into()));
        }
        let eis = self
            .eisenstein
            .iter()
            .map(|c| c.coords(self.p, self.f))
            .collect::<Result<Vec<_>>>()?;
        let label = if self.label.is_empty() { format!("field(p={})", self.p) } else { self.label.clone() };
        FieldCtx::new(self.p, unram, eis, cap, label)
    }

    pub fn from_ctx(ctx: &FieldCtx) -> Self {
        let eisenstein = ctx
            .eisenstein
            .iter()
            .map(|w| {
                if ctx.f == 1 {
                    Coeff::Str(w[0].to_string())
                } else {
                    Coeff::W(w.iter().map(|c| Coeff::Str(c.to_string())).collect())
                }
            })
            .collect();
        FieldDescriptor {
            p: ctx.p,
            f: ctx.f,
            e: ctx.e,
            eisenstein,
            label: ctx.label.clone(),
            unramified: if ctx.f > 1 {
                Some(ctx.unramified.iter().map(|c| Coeff::Str(c.to_string())).collect())
            } else {
                None
            },
        }
    }
}

/// Working precision: results are asserted modulo `p^n_digits`, series are
/// kept through degree `trunc_degree`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrecisionProfile {
    pub p: u64,
    pub n_digits: i64,
    pub trunc_degree: usize,
}

impl PrecisionProfile {
    pub const DEFAULT_DIGITS: i64 = 64;
    pub const DEFAULT_DEGREE: usize = 40;

    pub fn new(p: u64, n_digits: i64, trunc_degree: usize) -> Result<Self> {
        let pr = PrecisionProfile { p, n_digits, trunc_degree };
        pr.validate()?;
        Ok(pr)
    }

    pub fn default_for(p: u64) -> Self {
        PrecisionProfile { p, n_digits: Self::DEFAULT_DIGITS, trunc_degree: Self::DEFAULT_DEGREE }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Invalid(format!("{} is not prime", self.p)));
        }
        if self.n_digits < 1 {
            return Err(Error::Invalid("n_digits must be at least 1".into()));
        }
        if self.trunc_degree < 2 {
            return Err(Error::Invalid("trunc_degree must be at least 2".into()));
        }
        Ok(())
    }

    /// Working cap used internally: headroom over `n_digits` for the losses of
    /// divisions by `n` and by `π^n - π` in log/exp construction.
    pub fn working_cap(&self) -> i64 {
        let d = self.trunc_degree as f64;
        let log_loss = (d.ln() / (self.p as f64).ln()).ceil() as i64;
        self.n_digits + 16 + (self.trunc_degree as i64) / 2 + 4 * log_loss
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_roundtrip() {
        let d = FieldDescriptor::parse(r#"{"p":3,"e":2,"eisenstein":["3","0","1"],"label":"Q_3(√-3)"}"#).unwrap();
        let k = d.build(20).unwrap();
        assert_eq!((k.e, k.f), (2, 1));
        let back = FieldDescriptor::from_ctx(&k);
        assert_eq!(back.build(20).unwrap().eisenstein, k.eisenstein);
        let u = FieldDescriptor::parse(r#"{"p":3,"f":2,"e":1,"eisenstein":["-p",["1","0"]]}"#).unwrap();
        assert_eq!(u.build(10).unwrap().q(), 9);
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(FieldDescriptor::parse(r#"{"p":4,"e":1,"eisenstein":["-4","1"]}"#).unwrap().build(5).is_err());
        assert!(FieldDescriptor::parse(r#"{"p":3,"e":2,"eisenstein":["9","0","1"]}"#).unwrap().build(5).is_err());
        assert!(FieldDescriptor::parse(r#"{"p":3,"e":2,"eisenstein":["3","1"]}"#).unwrap().build(5).is_err());
        assert!(FieldDescriptor::parse("not json").is_err());
        assert!(PrecisionProfile::new(3, 0, 10).is_err());
        assert!(PrecisionProfile::new(3, 5, 1).is_err());
    }
}
