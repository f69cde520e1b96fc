//! JSON output records and CSV rendering.
//!
//! Every number written is finite; unbounded capacities are the string token
//! `"inf"` and doubly degenerate sweep points are `"indeterminate"`.

use cogcap::{Capacity, RawParams, SweepValue};
use serde::{Deserialize, Serialize};

use crate::config::UnitTag;
use crate::error::CliError;

pub const TOOL: &str = "cogcap";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Token {
    Inf,
    Indeterminate,
}

/// A finite number or one of the two tokens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Finite(f64),
    Token(Token),
}

impl Quantity {
    pub fn finite(self) -> Option<f64> {
        match self {
            Quantity::Finite(v) => Some(v),
            Quantity::Token(_) => None,
        }
    }

    pub fn csv_field(self) -> String {
        match self {
            Quantity::Finite(v) => format_number(v),
            Quantity::Token(Token::Inf) => "inf".into(),
            Quantity::Token(Token::Indeterminate) => "indeterminate".into(),
        }
    }
}

impl From<Capacity<f64>> for Quantity {
    fn from(c: Capacity<f64>) -> Self {
        match c {
            Capacity::Finite(v) => Quantity::Finite(v),
            Capacity::Infinite => Quantity::Token(Token::Inf),
        }
    }
}

impl From<SweepValue<f64>> for Quantity {
    fn from(v: SweepValue<f64>) -> Self {
        match v {
            SweepValue::Finite(v) => Quantity::Finite(v),
            SweepValue::Infinite => Quantity::Token(Token::Inf),
            SweepValue::Indeterminate => Quantity::Token(Token::Indeterminate),
        }
    }
}

/// Shortest round-trip decimal representation.
pub fn format_number(v: f64) -> String {
    debug_assert!(v.is_finite());
    format!("{v}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
    pub n: f64,
    pub rho_xs1: f64,
    pub rho_s2z: f64,
}

impl From<RawParams<f64>> for ParamsRecord {
    fn from(r: RawParams<f64>) -> Self {
        Self {
            p: r.p,
            q1: r.q1,
            q2: r.q2,
            n: r.n,
            rho_xs1: r.rho_xs1,
            rho_s2z: r.rho_s2z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResults {
    pub capacity: Quantity,
    pub achievability: Quantity,
    pub converse: Quantity,
    /// Absent for degenerate channels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_star: Option<f64>,
    pub costa_reference: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub alpha: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurveResults {
    pub alpha_star: f64,
    pub capacity: f64,
    pub rows: Vec<RateRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<f64>,
    pub capacity: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResults {
    pub parameter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_parameter: Option<String>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub closed_form: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyResults {
    pub alpha: f64,
    pub alpha_star: f64,
    pub samples: usize,
    pub seed: u64,
    pub all_passed: bool,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "results", rename_all = "kebab-case")]
pub enum Body {
    Capacity(CapacityResults),
    RateCurve(RateCurveResults),
    Sweep(SweepResults),
    Verify(VerifyResults),
}

/// One JSON document per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub unit: UnitTag,
    pub params: ParamsRecord,
    #[serde(flatten)]
    pub body: Body,
}

impl OutputRecord {
    pub fn new(params: RawParams<f64>, unit: UnitTag, label: Option<String>, body: Body) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL.into(),
            version: VERSION.into(),
            label,
            unit,
            params: params.into(),
            body,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output record serializes");
        s.push('\n');
        s
    }

    /// CSV with a header row, `,` separators and LF line endings. The last
    /// column is always `unit`.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let unit = match self.unit {
            UnitTag::Bits => "bits",
            UnitTag::Nats => "nats",
        };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        let res = match &self.body {
            Body::Capacity(c) => w
                .write_record([
                    "capacity",
                    "achievability",
                    "converse",
                    "alpha_star",
                    "costa_reference",
                    "unit",
                ])
                .and_then(|_| {
                    w.write_record([
                        c.capacity.csv_field(),
                        c.achievability.csv_field(),
                        c.converse.csv_field(),
                        opt(c.alpha_star),
                        format_number(c.costa_reference),
                        unit.into(),
                    ])
                }),
            Body::RateCurve(r) => w.write_record(["alpha", "rate", "unit"]).and_then(|_| {
                r.rows.iter().try_for_each(|row| {
                    w.write_record([
                        format_number(row.alpha),
                        format_number(row.rate),
                        unit.into(),
                    ])
                })
            }),
            Body::Sweep(s) => {
                let mut header = vec![s.parameter.clone()];
                header.extend(s.curve_parameter.clone());
                header.extend(["capacity".to_string(), "unit".to_string()]);
                w.write_record(&header).and_then(|_| {
                    s.rows.iter().try_for_each(|row| {
                        let mut rec = vec![format_number(row.x)];
                        if s.curve_parameter.is_some() {
                            rec.push(opt(row.curve));
                        }
                        rec.extend([row.capacity.csv_field(), unit.into()]);
                        w.write_record(&rec)
                    })
                })
            }
            Body::Verify(v) => w
                .write_record([
                    "name",
                    "closed_form",
                    "estimate",
                    "std_error",
                    "z_score",
                    "pass",
                    "unit",
                ])
                .and_then(|_| {
                    v.checks.iter().try_for_each(|c| {
                        w.write_record([
                            c.name.clone(),
                            format_number(c.closed_form),
                            opt(c.estimate),
                            opt(c.std_error),
                            opt(c.z_score),
                            c.pass.to_string(),
                            unit.into(),
                        ])
                    })
                }),
        };
        res.map_err(|e| CliError::invalid(format!("csv: {e}")))?;
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::invalid(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantity_tokens_serialize_as_strings() {
        assert_eq!(
            serde_json::to_string(&Quantity::Finite(0.5)).unwrap(),
            "0.5"
        );
        assert_eq!(
            serde_json::to_string(&Quantity::Token(Token::Inf)).unwrap(),
            "\"inf\""
        );
        let q: Quantity = serde_json::from_str("\"indeterminate\"").unwrap();
        assert_eq!(q, Quantity::Token(Token::Indeterminate));
        let q: Quantity = serde_json::from_str("1.25").unwrap();
        assert_eq!(q, Quantity::Finite(1.25));
        assert!(serde_json::from_str::<Quantity>("\"nan\"").is_err());
    }

    #[test]
    fn csv_uses_lf_and_header() {
        let rec = OutputRecord::new(
            cogcap::ChannelParams::<f64>::unit().raw(),
            UnitTag::Nats,
            None,
            Body::RateCurve(RateCurveResults {
                alpha_star: 0.5,
                capacity: 0.3,
                rows: vec![
                    RateRow {
                        alpha: 0.0,
                        rate: 0.1,
                    },
                    RateRow {
                        alpha: 1.0,
                        rate: 0.2,
                    },
                ],
            }),
        );
        assert_eq!(
            rec.to_csv().unwrap(),
            "alpha,rate,unit\n0,0.1,nats\n1,0.2,nats\n"
        );
    }
}
