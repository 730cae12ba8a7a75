//! Report schema. See `docs/report-schema.md`.

use serde::{Deserialize, Serialize};
use weightraise_core::eig::{CheckItem, Eigensystem};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: &str = "weightraise-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, witnesses: &[(&str, i64)], detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            witnesses: witnesses.iter().map(|(n, v)| Witness { name: n.to_string(), value: *v }).collect(),
            detail: detail.into(),
        }
    }

    pub fn witness(&self, name: &str) -> Option<i64> {
        self.witnesses.iter().find(|w| w.name == name).map(|w| w.value)
    }
}

impl From<&CheckItem> for Check {
    fn from(c: &CheckItem) -> Self {
        Check {
            name: c.name.clone(),
            pass: c.pass,
            witnesses: c.witnesses.iter().map(|(n, v)| Witness { name: n.clone(), value: *v }).collect(),
            detail: c.detail.clone(),
        }
    }
}

/// Field an eigensystem lives in: `F_p[x]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u64,
    pub degree: u32,
    pub modulus: Vec<u32>,
}

/// One table row: `a_prime`, as a coefficient vector in the field generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenRow {
    pub prime: u64,
    pub value: Vec<u32>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenTable {
    pub id: usize,
    pub source: String,
    pub orbit: usize,
    pub multiplicity: usize,
    pub field: FieldInfo,
    /// Set when the table was checked against another space.
    pub occurs: Option<bool>,
    pub rows: Vec<EigenRow>,
}

impl EigenTable {
    pub fn new(id: usize, e: &Eigensystem, occurs: Option<bool>) -> Self {
        let f = &e.field;
        EigenTable {
            id,
            source: e.source.clone(),
            orbit: e.orbit,
            multiplicity: e.multiplicity,
            field: FieldInfo { p: f.p(), degree: f.degree(), modulus: f.modulus().to_vec() },
            occurs,
            rows: e.values.iter().map(|&(r, a)| EigenRow { prime: r, value: f.coeffs(a), degree: f.degree() }).collect(),
        }
    }
}

/// Wall-clock and cache counters; the only fields allowed to differ between
/// two runs of the same config.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub config: RunConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub eigensystems: Vec<EigenTable>,
    pub notes: Vec<String>,
    pub timing: Timing,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report {
            schema: SCHEMA_VERSION.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            pass: true,
            checks: Vec::new(),
            eigensystems: Vec::new(),
            notes: Vec::new(),
            timing: Timing::default(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Eigensystem tables, one row per (system, prime). Values are the
    /// coefficient vector joined by spaces.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["system", "source", "orbit", "multiplicity", "occurs", "prime", "value", "degree"])?;
        for t in &self.eigensystems {
            for r in &t.rows {
                let value = r.value.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                let occurs = t.occurs.map(|b| b.to_string()).unwrap_or_default();
                w.write_record([
                    t.id.to_string(),
                    t.source.clone(),
                    t.orbit.to_string(),
                    t.multiplicity.to_string(),
                    occurs,
                    r.prime.to_string(),
                    value,
                    r.degree.to_string(),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
