use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::condest::{projection_ratio, Witness};
use crate::error::{Error, Result};
use crate::normer::Normer;

use super::config::{ExperimentConfig, Format};

pub const SCHEMA_VERSION: u32 = 1;
/// Relative tolerance for re-evaluated witnesses.
pub const RECHECK_RTOL: f64 = 1e-9;

/// Which normer a witness is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum On {
    /// The seed basis.
    Basis,
    /// The configured target: the DKK space if there is a partition, else the basis.
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `||S_A f|| / ||f||`.
    Projection,
    /// `||f||`.
    Norm,
    /// `||f - S_F f|| / min_{|A| <= |F|} ||f - S_A f||`.
    AlmostGreedy,
    /// `||f|| / ||g||`.
    NormRatio,
}

/// Self-contained description of how to recompute a reported value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDigest {
    pub on: On,
    pub kind: WitnessKind,
    pub f: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub set: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g: Vec<f64>,
}

impl WitnessDigest {
    pub fn projection(on: On, w: &Witness) -> Self {
        WitnessDigest { on, kind: WitnessKind::Projection, f: w.f.clone(), set: w.set.clone(), g: Vec::new() }
    }

    pub fn norm(on: On, f: &[f64]) -> Self {
        WitnessDigest { on, kind: WitnessKind::Norm, f: f.to_vec(), set: Vec::new(), g: Vec::new() }
    }

    pub fn norm_ratio(on: On, f: &[f64], g: &[f64]) -> Self {
        WitnessDigest { on, kind: WitnessKind::NormRatio, f: f.to_vec(), set: Vec::new(), g: g.to_vec() }
    }

    pub fn evaluate(&self, normer: &dyn Normer) -> f64 {
        match self.kind {
            WitnessKind::Projection => projection_ratio(normer, &self.f, &self.set),
            WitnessKind::Norm => normer.norm(&self.f),
            WitnessKind::AlmostGreedy => crate::greedy::almost_greedy_ratio_for(normer, &self.f, &self.set),
            WitnessKind::NormRatio => normer.norm(&self.f) / normer.norm(&self.g),
        }
    }

    pub fn encode(&self) -> String {
        serde_json::to_string(self).expect("digest serializes")
    }

    pub fn decode(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("witness digest: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub key: String,
    pub value: f64,
    pub exact: bool,
    /// Encoded [`WitnessDigest`].
    pub witness: Option<String>,
    pub runtime_ms: u64,
}

impl Row {
    pub fn exact(key: impl Into<String>, value: f64) -> Self {
        Row { key: key.into(), value, exact: true, witness: None, runtime_ms: 0 }
    }

    pub fn with_witness(key: impl Into<String>, value: f64, exact: bool, digest: Option<WitnessDigest>) -> Self {
        Row { key: key.into(), value, exact, witness: digest.map(|d| d.encode()), runtime_ms: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: ExperimentConfig,
    /// Seconds since the Unix epoch; the only field that differs between identical runs
    /// apart from `runtime_ms`.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub rows: Vec<Row>,
    /// Number of failed assertions (only `verify` produces any).
    pub violations: u64,
}

impl ConstantsReport {
    /// Zero the timing fields, leaving only seed-determined content.
    pub fn strip_timing(&mut self) {
        self.metadata.timestamp = 0;
        for r in &mut self.rows {
            r.runtime_ms = 0;
        }
    }

    pub fn write<W: Write>(&self, out: W, format: Format) -> Result<()> {
        match format {
            Format::Json => {
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, self).map_err(|e| Error::Io(e.into()))?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["key", "value", "exact", "witness", "runtime_ms"]).map_err(csv_err)?;
                for r in &self.rows {
                    w.write_record([
                        r.key.clone(),
                        format_value(r.value),
                        r.exact.to_string(),
                        r.witness.clone().unwrap_or_default(),
                        r.runtime_ms.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }

    pub fn to_string(&self, format: Format) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf, format)?;
        Ok(String::from_utf8(buf).expect("reports are UTF-8"))
    }
}

/// Shortest representation that parses back to the same `f64`.
fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:?}")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Rows of a CSV report.
pub fn read_csv_rows(text: &str) -> Result<Vec<Row>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(format!("csv: {e}")))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let parse_err = |what: &str| Error::Parse(format!("csv line {}: bad {what}", rec.position().map_or(0, |p| p.line())));
        rows.push(Row {
            key: field(0).to_string(),
            value: field(1).parse().map_err(|_| parse_err("value"))?,
            exact: field(2).parse().map_err(|_| parse_err("exact flag"))?,
            witness: Some(field(3).to_string()).filter(|s| !s.is_empty()),
            runtime_ms: field(4).parse().map_err(|_| parse_err("runtime_ms"))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_round_trip() {
        let d = WitnessDigest::projection(On::Basis, &Witness { f: vec![1.0, -0.1], set: vec![0] });
        assert_eq!(WitnessDigest::decode(&d.encode()).unwrap(), d);
        assert!(WitnessDigest::decode("{").is_err());
    }

    #[test]
    fn values_round_trip_through_text() {
        for v in [0.1 + 0.2, 1.0 / 3.0, 2.0, 1e-300] {
            assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        }
    }
}
