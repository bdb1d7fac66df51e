//! Output records, one JSON object per line.

use adlv_core::{AffineElement, AffineWeyl, NodeSet};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub input: Value,
    pub payload: Value,
    pub status: Status,
}

impl ResultRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_line(line: &str) -> serde_json::Result<ResultRecord> {
        serde_json::from_str(line)
    }
}

pub fn omega_label(k: usize) -> String {
    format!("tau^{k}")
}

/// Parses `"tau^k"`.
pub fn parse_omega_label(s: &str) -> Option<usize> {
    s.strip_prefix("tau^")?.parse().ok()
}

pub fn element(g: &AffineWeyl, x: &AffineElement) -> Value {
    let (word, k) = g.reduced_word(x);
    json!({ "word": word, "omega": omega_label(k), "length": word.len() })
}

pub fn nodes(s: NodeSet) -> Value {
    json!(s.to_vec())
}

pub fn rational(r: Rational64) -> Value {
    json!([r.numer(), r.denom()])
}
