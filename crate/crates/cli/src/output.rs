//! Rendering of results as JSON, CSV or a fixed-width table.

use clap::ValueEnum;
use diffspec::formulas::{CodeWeightCounts, KloostermanMethod, KloostermanValue, ScanFinding};
use diffspec::verify::VerificationReport;
use diffspec::{DifferentialSpectrum, KernelProfile};
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Serialize)]
pub struct Kloosterman {
    pub method: KloostermanMethod,
    #[serde(flatten)]
    pub value: KloostermanValue,
}

/// A result with a row-oriented view.
pub trait Tabular {
    fn header(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<String>>;
}

fn strings<const N: usize>(items: [&str; N]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Tabular for DifferentialSpectrum {
    // one column per nonzero omega_i
    fn header(&self) -> Vec<String> {
        let mut h = strings(["n", "d", "modulus", "delta_max", "delta0", "delta1", "locally_apn"]);
        h.extend(self.omega.keys().map(|i| format!("omega_{i}")));
        h
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut row = vec![
            self.n.to_string(),
            self.d.to_string(),
            self.modulus.clone().unwrap_or_default(),
            self.delta_max.to_string(),
            self.delta0.to_string(),
            self.delta1.to_string(),
            self.locally_apn.to_string(),
        ];
        row.extend(self.omega.values().map(|c| c.to_string()));
        vec![row]
    }
}

impl Tabular for VerificationReport {
    fn header(&self) -> Vec<String> {
        strings(["check", "n", "t", "result", "counterexample"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.checks
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    c.n.to_string(),
                    c.t.map(|t| t.to_string()).unwrap_or_default(),
                    if c.passed { "pass" } else { "FAIL" }.to_string(),
                    c.counterexample.clone().unwrap_or_default(),
                ]
            })
            .collect()
    }
}

impl Tabular for Vec<ScanFinding> {
    fn header(&self) -> Vec<String> {
        strings(["n", "t", "delta", "apn"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.iter()
            .map(|f| vec![f.n.to_string(), f.t.to_string(), f.delta.to_string(), f.apn.to_string()])
            .collect()
    }
}

impl Tabular for Kloosterman {
    fn header(&self) -> Vec<String> {
        strings(["n", "method", "value"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let method = match self.method {
            KloostermanMethod::Direct => "direct",
            KloostermanMethod::Carlitz => "carlitz",
        };
        vec![vec![self.value.n.to_string(), method.to_string(), self.value.value.to_string()]]
    }
}

impl Tabular for CodeWeightCounts {
    fn header(&self) -> Vec<String> {
        strings(["n", "b3", "b4"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.n.to_string(), self.b3.to_string(), self.b4.to_string()]]
    }
}

impl Tabular for KernelProfile {
    fn header(&self) -> Vec<String> {
        strings(["n", "t", "dim", "count"])
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.counts
            .iter()
            .map(|(dim, count)| {
                vec![self.n.to_string(), self.t.to_string(), dim.to_string(), count.to_string()]
            })
            .collect()
    }
}

pub fn emit<T: Serialize + Tabular>(value: &T, format: Format) -> String {
    match format {
        // going through Value sorts the keys
        Format::Json => {
            let v = serde_json::to_value(value).expect("results serialize");
            serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(value.header()).expect("in-memory write");
            for row in value.rows() {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
        Format::Table => table(&value.header(), &value.rows()),
    }
}

fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out += &line(&rule);
    for row in rows {
        out += &line(row);
    }
    out
}
