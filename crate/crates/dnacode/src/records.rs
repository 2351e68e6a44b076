//! Serializable result rows and their text, CSV and JSON renderings.

use serde::Serialize;

use dnacode_core::{Bound, VerifyReport};

use crate::error::Result;
use crate::tables::EntryOutcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub constraint: String,
    pub lower: u64,
    pub upper: u64,
    pub method_lower: String,
    pub method_upper: String,
    pub exact: bool,
}

impl BoundRecord {
    pub fn new(n: usize, d: usize, w: usize, constraint: &str, lower: &Bound, upper: &Bound) -> Self {
        BoundRecord {
            n,
            d,
            w,
            constraint: constraint.to_string(),
            lower: lower.value,
            upper: upper.value,
            method_lower: lower.method(),
            method_upper: upper.method(),
            exact: lower.value == upper.value,
        }
    }

    fn text(&self) -> String {
        format!(
            "n={} d={} w={} constraint={}: lower {} upper {}{}\n  lower: {}\n  upper: {}\n",
            self.n,
            self.d,
            self.w,
            self.constraint,
            self.lower,
            self.upper,
            if self.exact { " (exact)" } else { "" },
            self.method_lower,
            self.method_upper
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRecord {
    pub file: String,
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub constraint: String,
    pub size: usize,
    pub min_distance: String,
    pub min_cross_distance: String,
    pub gc_contents: String,
    pub duplicates: usize,
    pub wrong_length: usize,
    pub pass: bool,
}

impl VerifyRecord {
    pub fn new(file: &str, r: &VerifyReport) -> Self {
        let opt = |m: Option<dnacode_core::MinDistance>| m.map_or(String::new(), |v| v.to_string());
        VerifyRecord {
            file: file.to_string(),
            n: r.params.n,
            d: r.params.d,
            w: r.params.w,
            constraint: r.params.kind.to_string(),
            size: r.size,
            min_distance: opt(r.min_pairwise_distance),
            min_cross_distance: opt(r.min_cross_distance),
            gc_contents: r.gc_contents.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" "),
            duplicates: r.duplicate_count,
            wrong_length: r.wrong_length,
            pass: r.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRecord {
    pub table: u8,
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub constraint: String,
    pub offset: String,
    pub expected: u64,
    pub got: Option<u64>,
    pub status: String,
    pub graded: bool,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub marked_optimal: bool,
    pub closed: Option<bool>,
    pub starred: Option<u64>,
    pub seconds: f64,
    pub note: String,
}

impl TableRecord {
    pub fn new(o: &EntryOutcome) -> Self {
        let e = &o.spec;
        TableRecord {
            table: e.table,
            n: e.n,
            d: e.d,
            w: e.w,
            constraint: e.kind.to_string(),
            offset: e.offset.map_or_else(|| format!("formula {}", e.formula.unwrap_or('?')), str::to_string),
            expected: e.expected,
            got: o.got,
            status: o.status.label(),
            graded: e.graded(),
            lower: o.lower,
            upper: o.upper,
            marked_optimal: e.optimal,
            closed: o.closed(),
            starred: e.starred,
            seconds: o.elapsed.as_secs_f64(),
            note: o.note.clone(),
        }
    }

    fn text(&self) -> String {
        let show = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        let mut s = format!(
            "T{} n={:<2} d={:<2} {:<10} expected {:>8}{} got {:>8}  {:<24}",
            self.table,
            self.n,
            self.d,
            self.offset,
            self.expected,
            if self.marked_optimal { "." } else { " " },
            show(self.got),
            if self.graded { self.status.clone() } else { format!("{} [info]", self.status) },
        );
        s.push_str(&format!(" bounds [{}, {}]", show(self.lower), show(self.upper)));
        if self.marked_optimal && self.closed != Some(true) {
            s.push_str(" NOT CLOSED");
        }
        if let Some(st) = self.starred {
            s.push_str(&format!(" (*{st} elsewhere)"));
        }
        if !self.note.is_empty() {
            s.push_str(&format!(" -- {}", self.note));
        }
        s.push('\n');
        s
    }
}

/// Text rendering shared by the record types.
pub trait TextRecord: Serialize {
    fn render_text(&self) -> String;
}

impl TextRecord for BoundRecord {
    fn render_text(&self) -> String {
        self.text()
    }
}

impl TextRecord for TableRecord {
    fn render_text(&self) -> String {
        self.text()
    }
}

impl TextRecord for VerifyRecord {
    fn render_text(&self) -> String {
        format!(
            "{}: {} words, n={} d={} w={} constraint={}, min distance {}{}, gc-contents [{}]{}{}: {}\n",
            self.file,
            self.size,
            self.n,
            self.d,
            self.w,
            self.constraint,
            if self.min_distance.is_empty() { "-" } else { &self.min_distance },
            if self.min_cross_distance.is_empty() {
                String::new()
            } else {
                format!(", min cross distance {}", self.min_cross_distance)
            },
            self.gc_contents,
            if self.duplicates > 0 { format!(", {} duplicates", self.duplicates) } else { String::new() },
            if self.wrong_length > 0 { format!(", {} of wrong length", self.wrong_length) } else { String::new() },
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub fn render<T: TextRecord>(records: &[T], format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => records.iter().map(TextRecord::render_text).collect(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8")
        }
    })
}
