//! Reports: an ordered list of records, rendered as an aligned text listing or
//! as tab-separated values.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

/// Column names of the machine format, in order.
pub const COLUMNS: [&str; 9] = ["record", "key", "value", "mu1", "mu2", "class", "subgroup", "shift1", "shift2"];

/// Placeholder for an empty optional field in the machine format.
pub const EMPTY: &str = "-";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            other => Err(format!("unknown format `{other}`, expected human or machine")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Record {
    /// `meta`, `hypothesis`, `check`, `count`, `pair` or `status`.
    pub record: String,
    pub key: String,
    pub value: String,
    pub mu1: Option<String>,
    pub mu2: Option<String>,
    pub class: Option<String>,
    pub subgroup: Option<String>,
    pub shift1: Option<String>,
    pub shift2: Option<String>,
}

impl Record {
    pub fn new(record: &str, key: impl Into<String>, value: impl ToString) -> Self {
        Self { record: record.into(), key: key.into(), value: value.to_string(), ..Self::default() }
    }

    fn fields(&self) -> [Option<&str>; 9] {
        [
            Some(self.record.as_str()),
            Some(self.key.as_str()),
            Some(self.value.as_str()),
            self.mu1.as_deref(),
            self.mu2.as_deref(),
            self.class.as_deref(),
            self.subgroup.as_deref(),
            self.shift1.as_deref(),
            self.shift2.as_deref(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub records: Vec<Record>,
}

#[derive(Debug, Error)]
pub enum ReportParseError {
    #[error("header does not match the expected columns")]
    Header,
    #[error("row {row}: expected {} fields, found {found}", COLUMNS.len())]
    Width { row: usize, found: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Report {
    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn find(&self, record: &str, key: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.record == record && r.key == key)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.to_human(),
            Format::Machine => self.to_machine(),
        }
    }

    /// Header line then one tab-separated row per record.
    pub fn to_machine(&self) -> String {
        let mut w =
            csv::WriterBuilder::new().delimiter(b'\t').terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        w.write_record(COLUMNS).expect("writing to memory");
        for r in &self.records {
            w.write_record(r.fields().map(|f| f.unwrap_or(EMPTY))).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("input was UTF-8")
    }

    pub fn from_machine(text: &str) -> Result<Self, ReportParseError> {
        let mut rd =
            csv::ReaderBuilder::new().delimiter(b'\t').has_headers(true).flexible(true).from_reader(text.as_bytes());
        if rd.headers()?.iter().ne(COLUMNS) {
            return Err(ReportParseError::Header);
        }
        let mut records = Vec::new();
        for (row, rec) in rd.records().enumerate() {
            let rec = rec?;
            if rec.len() != COLUMNS.len() {
                return Err(ReportParseError::Width { row: row + 1, found: rec.len() });
            }
            let opt = |i: usize| (rec[i] != *EMPTY).then(|| rec[i].to_string());
            records.push(Record {
                record: rec[0].into(),
                key: rec[1].into(),
                value: rec[2].into(),
                mu1: opt(3),
                mu2: opt(4),
                class: opt(5),
                subgroup: opt(6),
                shift1: opt(7),
                shift2: opt(8),
            });
        }
        Ok(Self { records })
    }

    /// Scalar records as an aligned listing, then pair records as a table.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let (pairs, rest): (Vec<&Record>, Vec<&Record>) = self.records.iter().partition(|r| r.record == "pair");
        let width = rest.iter().map(|r| r.key.len()).max().unwrap_or(0);
        for r in &rest {
            let _ = write!(out, "{:<10} {:<width$}  {}", r.record, r.key, r.value);
            let extras: Vec<String> = [
                ("class", &r.class),
                ("K", &r.subgroup),
                ("x1", &r.shift1),
                ("x2", &r.shift2),
                ("mu1", &r.mu1),
                ("mu2", &r.mu2),
            ]
            .iter()
            .filter(|(name, v)| !(*name == "class" && v.as_deref() == Some(r.value.as_str())))
            .filter_map(|(name, v)| v.as_ref().map(|v| format!("{name} = {v}")))
            .collect();
            if !extras.is_empty() {
                let _ = write!(out, "  [{}]", extras.join(", "));
            }
            out.push('\n');
        }
        if !pairs.is_empty() {
            let rows: Vec<[&str; 5]> = pairs
                .iter()
                .map(|r| {
                    fn f(v: &Option<String>) -> &str {
                        v.as_deref().unwrap_or(EMPTY)
                    }
                    [r.key.as_str(), f(&r.class), f(&r.subgroup), f(&r.shift1), f(&r.shift2)]
                })
                .collect();
            let head = ["pair", "class", "K", "x1", "x2", "mu1 | mu2"];
            let widths: Vec<usize> =
                (0..5).map(|i| rows.iter().map(|r| r[i].len()).chain([head[i].len()]).max().unwrap_or(0)).collect();
            let line = |cells: [&str; 5], tail: &str| {
                let mut s = String::new();
                for (c, w) in cells.iter().zip(&widths) {
                    let _ = write!(s, "{c:<w$}  ");
                }
                s.push_str(tail);
                s.trim_end().to_string()
            };
            let _ = writeln!(out, "\n{}", line([head[0], head[1], head[2], head[3], head[4]], head[5]));
            for (row, r) in rows.iter().zip(&pairs) {
                let tail = format!("{} | {}", r.mu1.as_deref().unwrap_or(EMPTY), r.mu2.as_deref().unwrap_or(EMPTY));
                let _ = writeln!(out, "{}", line(*row, &tail));
            }
        }
        out
    }
}
