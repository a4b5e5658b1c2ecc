//! Text and JSON forms of coefficients and series.

use serde_json::{json, Value};

use super::{BiSeries, Series, SymPoly};
use crate::padic::scalar::{fmt_q, PadicScalar};
use crate::padic::Elem;
use crate::ring::{Ring, Valued};

/// Coefficients that can be printed.
pub trait Render {
    fn to_json(&self) -> Value;
    fn to_text(&self) -> String;
    fn ring_label(&self) -> String;
}

impl Render for Elem {
    fn to_json(&self) -> Value {
        PadicScalar::new(self.clone()).to_json()
    }

    fn to_text(&self) -> String {
        let v = self.to_json();
        let unit = match &v["unit"] {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        match v["val"].as_str() {
            Some("inf") => "0".to_string(),
            _ => format!("{{val:{},unit:{},prec:{}}}", v["val"].as_str().unwrap_or("?"), unit, v["prec"]),
        }
    }

    fn ring_label(&self) -> String {
        self.ctx().label.clone()
    }
}

impl<R: Render + Ring> Render for SymPoly<R> {
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms().map(|(k, c)| json!([k, c.to_json()])).collect();
        json!({"symbol": self.symbol().as_ref(), "terms": terms})
    }

    fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_text(),
                1 => format!("{}·{}", c.to_text(), self.symbol()),
                _ => format!("{}·{}^{}", c.to_text(), self.symbol(), k),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            format!("({})", parts.join(" + "))
        }
    }

    fn ring_label(&self) -> String {
        format!("{}[{}^±1]", self.zero_like().one_like().coeff(0).ring_label(), self.symbol())
    }
}

fn ord_json<R: Valued>(x: &R) -> Value {
    match x.ord() {
        Some(q) => Value::String(fmt_q(&q)),
        None => Value::String("inf".into()),
    }
}

impl<R: Render + Valued> Series<R> {
    /// `{ring, D, coeffs, valuations}`.
    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.coeff(0).ring_label(),
            "D": self.degree(),
            "coeffs": self.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "valuations": self.coeffs().iter().map(ord_json).collect::<Vec<_>>(),
        })
    }

    /// `c₀ + c₁·T + …` with exact zeros omitted.
    pub fn to_text(&self, var: &str) -> String {
        let parts: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(n, c)| match n {
                0 => c.to_text(),
                1 => format!("{}·{}", c.to_text(), var),
                _ => format!("{}·{}^{}", c.to_text(), var, n),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<R: Render + Valued> BiSeries<R> {
    /// `{ring, D, terms: [[i, j, coeff], …]}` with exact zeros omitted.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .indices()
            .filter(|&(i, j)| !self.get(i, j).is_exact_zero())
            .map(|(i, j)| json!([i, j, self.get(i, j).to_json()]))
            .collect();
        json!({"ring": self.get(0, 0).ring_label(), "D": self.degree(), "terms": terms})
    }
}
