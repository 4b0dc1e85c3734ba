use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

/// Rows for the CSV and text renderings.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: vec![] }
    }

    pub fn push<I: IntoIterator<Item = S>, S: ToString>(&mut self, row: I) {
        self.rows.push(row.into_iter().map(|s| s.to_string()).collect());
    }
}

/// Everything a run prints on stdout. Wall time is reported on stderr so that
/// reruns with the same inputs and seed are byte-identical.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: BTreeMap<String, String>,
    pub outputs: Value,
    pub certificates: Vec<Check>,
    #[serde(skip)]
    pub table: Table,
}

impl RunReport {
    pub fn new(command: &[String], seed: u64) -> Self {
        Self {
            command: command.to_vec(),
            seed,
            inputs: BTreeMap::new(),
            outputs: Value::Null,
            certificates: vec![],
            table: Table::default(),
        }
    }

    pub fn digest(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.insert(name.to_string(), format!("sha256:{:x}", Sha256::digest(bytes)));
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.certificates.push(Check::new(name, pass, detail));
    }

    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(vec![]);
                if self.table.header.is_empty() {
                    // a pure check run: one row per check
                    w.write_record(["check", "value", "detail"]).expect("in-memory write");
                    for c in &self.certificates {
                        w.write_record([c.name.as_str(), if c.pass { "PASS" } else { "FAIL" }, c.detail.as_str()])
                            .expect("in-memory write");
                    }
                } else {
                    w.write_record(&self.table.header).expect("in-memory write");
                }
                for r in &self.table.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("flush")).expect("utf8 in, utf8 out")
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let t = &self.table;
        let mut width: Vec<usize> = t.header.iter().map(|h| h.len()).collect();
        for r in &t.rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.lines().map(str::len).max().unwrap_or(0));
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                let last = i + 1 == cells.len();
                if last {
                    s.push_str(c);
                } else {
                    s.push_str(&format!("{c:<w$}  ", w = width[i]));
                }
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = String::new();
        if !t.header.is_empty() {
            out += &line(&t.header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
            for r in &t.rows {
                out += &line(r);
            }
        }
        for c in &self.certificates {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                out += &format!("{verdict} {}\n", c.name);
            } else {
                out += &format!("{verdict} {}: {}\n", c.name, c.detail);
            }
        }
        out
    }
}
