use std::fmt::Write as _;

use respcheck_core::measures::DegreeReport;
use respcheck_core::num::{format_significant, ratio_to_f64, Exact};
use respcheck_core::Rational;
use serde::{Deserialize, Serialize};

use crate::args::{Format, Measure};

/// Columns of degree tables, in order.
pub const DEGREE_COLUMNS: [&str; 12] = [
    "t",
    "count_degree",
    "prob_degree",
    "entropy_degree",
    "reference_entropy",
    "reference_prob",
    "responsible_entropy",
    "responsible_prob",
    "count_degree_exact",
    "prob_degree_exact",
    "reference_prob_exact",
    "responsible_prob_exact",
];

/// One degree query flattened to scalars. Probabilities appear both as the
/// nearest float and as an exact `p/q` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeRow {
    /// The sweep parameter, or the query length for a single query.
    pub t: usize,
    pub kind: String,
    pub length: usize,
    pub kappa: bool,
    pub count_degree: f64,
    pub prob_degree: f64,
    pub entropy_degree: f64,
    pub reference_count: u128,
    pub reference_entropy: f64,
    pub reference_prob: f64,
    pub responsible_count: u128,
    pub responsible_entropy: f64,
    pub responsible_prob: f64,
    pub count_degree_exact: String,
    pub prob_degree_exact: String,
    pub reference_prob_exact: String,
    pub responsible_prob_exact: String,
    pub note: Option<String>,
}

fn exact(r: &Rational) -> String {
    Exact(r).to_string()
}

impl DegreeRow {
    pub fn new(t: usize, report: &DegreeReport<Rational>) -> Self {
        DegreeRow {
            t,
            kind: report.kind.to_string(),
            length: report.length,
            kappa: report.kappa,
            count_degree: ratio_to_f64(&report.count_degree),
            prob_degree: ratio_to_f64(&report.prob_degree),
            entropy_degree: report.entropy_degree,
            reference_count: report.reference.cardinality,
            reference_entropy: report.reference.entropy_fh(),
            reference_prob: ratio_to_f64(&report.reference.probability),
            responsible_count: report.responsible.cardinality,
            responsible_entropy: report.responsible.entropy_fh(),
            responsible_prob: ratio_to_f64(&report.responsible.probability),
            count_degree_exact: exact(&report.count_degree),
            prob_degree_exact: exact(&report.prob_degree),
            reference_prob_exact: exact(&report.reference.probability),
            responsible_prob_exact: exact(&report.responsible.probability),
            note: report.note.clone(),
        }
    }

    fn csv_fields(&self) -> [String; 12] {
        let f = format_significant;
        [
            self.t.to_string(),
            f(self.count_degree),
            f(self.prob_degree),
            f(self.entropy_degree),
            f(self.reference_entropy),
            f(self.reference_prob),
            f(self.responsible_entropy),
            f(self.responsible_prob),
            self.count_degree_exact.clone(),
            self.prob_degree_exact.clone(),
            self.reference_prob_exact.clone(),
            self.responsible_prob_exact.clone(),
        ]
    }

    fn measures(&self, measure: Measure) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if measure.count() {
            out.push(("count_degree", self.count_degree_exact.clone()));
        }
        if measure.prob() {
            out.push(("prob_degree", self.prob_degree_exact.clone()));
        }
        if measure.entropy() {
            out.push(("entropy_degree", format_significant(self.entropy_degree)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub verdict: bool,
    /// The witness coalition of a contributive check, as `{A1,A2}`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub nodes: usize,
    pub edges: u64,
    pub spectral_radius: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Verdict(VerdictRow),
    Degree { row: DegreeRow, measure: Measure },
    Sweep { rows: Vec<DegreeRow>, measure: Measure },
    Entropy(EntropyRow),
}

fn jsonl<T: Serialize>(out: &mut String, rows: &[T]) {
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("rows serialize"));
        out.push('\n');
    }
}

fn csv_line(out: &mut String, fields: &[impl AsRef<str>]) {
    let fields: Vec<&str> = fields.iter().map(AsRef::as_ref).collect();
    out.push_str(&fields.join(","));
    out.push('\n');
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Jsonl => self.jsonl(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Verdict(v) => {
                writeln!(out, "verdict = {}", v.verdict).unwrap();
                if let Some(w) = &v.witness {
                    writeln!(out, "witness = {w}").unwrap();
                }
            }
            Report::Degree { row, measure } => {
                writeln!(out, "kind = {}", row.kind).unwrap();
                writeln!(out, "length = {}", row.length).unwrap();
                writeln!(out, "kappa = {}", u8::from(row.kappa)).unwrap();
                for (k, v) in row.measures(*measure) {
                    writeln!(out, "{k} = {v}").unwrap();
                }
                writeln!(out, "reference_count = {}", row.reference_count).unwrap();
                writeln!(out, "reference_prob = {}", row.reference_prob_exact).unwrap();
                writeln!(out, "reference_entropy = {}", format_significant(row.reference_entropy)).unwrap();
                writeln!(out, "responsible_count = {}", row.responsible_count).unwrap();
                writeln!(out, "responsible_prob = {}", row.responsible_prob_exact).unwrap();
                writeln!(out, "responsible_entropy = {}", format_significant(row.responsible_entropy)).unwrap();
                if let Some(note) = &row.note {
                    writeln!(out, "note = {note}").unwrap();
                }
            }
            Report::Sweep { rows, measure } => {
                for row in rows {
                    let cells: Vec<String> = row
                        .measures(*measure)
                        .into_iter()
                        .map(|(k, v)| format!("{k} = {v}"))
                        .collect();
                    writeln!(out, "t = {}: {}", row.t, cells.join(", ")).unwrap();
                }
            }
            Report::Entropy(e) => {
                writeln!(out, "nodes = {}", e.nodes).unwrap();
                writeln!(out, "edges = {}", e.edges).unwrap();
                writeln!(out, "spectral_radius = {}", format_significant(e.spectral_radius)).unwrap();
                writeln!(out, "entropy = {}", format_significant(e.entropy)).unwrap();
            }
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Verdict(v) => {
                csv_line(&mut out, &["verdict", "witness"]);
                let witness = v.witness.as_deref().map(|w| format!("\"{w}\"")).unwrap_or_default();
                csv_line(&mut out, &[v.verdict.to_string(), witness]);
            }
            Report::Degree { row, .. } => {
                csv_line(&mut out, &DEGREE_COLUMNS);
                csv_line(&mut out, &row.csv_fields());
            }
            Report::Sweep { rows, .. } => {
                csv_line(&mut out, &DEGREE_COLUMNS);
                for row in rows {
                    csv_line(&mut out, &row.csv_fields());
                }
            }
            Report::Entropy(e) => {
                csv_line(&mut out, &["nodes", "edges", "spectral_radius", "entropy"]);
                csv_line(
                    &mut out,
                    &[
                        e.nodes.to_string(),
                        e.edges.to_string(),
                        format_significant(e.spectral_radius),
                        format_significant(e.entropy),
                    ],
                );
            }
        }
        out
    }

    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Verdict(v) => jsonl(&mut out, std::slice::from_ref(v)),
            Report::Degree { row, .. } => jsonl(&mut out, std::slice::from_ref(row)),
            Report::Sweep { rows, .. } => jsonl(&mut out, rows),
            Report::Entropy(e) => jsonl(&mut out, std::slice::from_ref(e)),
        }
        out
    }
}
