//! Machine-checked assertions with first-failure reporting.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    PrecisionExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub location: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Certificate {
    pub fn pass(name: impl Into<String>) -> Self {
        Certificate { name: name.into(), status: Status::Pass, first_failure: None, detail: None }
    }

    pub fn fail(
        name: impl Into<String>,
        location: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        Certificate {
            name: name.into(),
            status: Status::Fail,
            first_failure: Some(Failure { location: location.into(), expected: expected.into(), got: got.into() }),
            detail: None,
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Turn an evaluation result into a certificate: errors become failures,
    /// precision errors get their own status.
    pub fn from_result(name: &str, r: Result<Certificate>) -> Certificate {
        match r {
            Ok(c) => c,
            Err(Error::PrecisionExhausted(m)) => Certificate {
                name: name.into(),
                status: Status::PrecisionExhausted,
                first_failure: None,
                detail: Some(m),
            },
            Err(Error::CertificateFailure { location, expected, got, .. }) => {
                Certificate::fail(name, location, expected, got)
            }
            Err(e) => Certificate::fail(name, "evaluation", "no error", e.to_string()),
        }
    }

    /// Error form of a failed certificate, for hard assertions.
    pub fn into_result(self) -> Result<Certificate> {
        match (&self.status, &self.first_failure) {
            (Status::Pass, _) => Ok(self),
            (Status::PrecisionExhausted, _) => {
                Err(Error::precision(self.detail.clone().unwrap_or_else(|| self.name.clone())))
            }
            (Status::Fail, f) => {
                let f = f.clone().unwrap_or(Failure {
                    location: "?".into(),
                    expected: "?".into(),
                    got: "?".into(),
                });
                Err(Error::CertificateFailure { name: self.name, location: f.location, expected: f.expected, got: f.got })
            }
        }
    }
}
