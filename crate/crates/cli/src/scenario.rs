//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! group = 3 5
//! alpha = 2 0 / 0 2
//! mu1 = (0,0):1/2 (1,0):1/2
//! mu2 = (0,0):1
//! denominator = 4
//! tolerance = 1e-8
//! workers = 4
//! out = report.tsv
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use condsym_core::{Distribution, Endomorphism, FiniteAbelianGroup, GroupElement, Rational, Subgroup};

/// A diagnostic pointing at a line of the input (1-based; 0 for the file as a whole).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub group: FiniteAbelianGroup,
    pub alpha: Endomorphism,
    pub mu1: Option<Distribution>,
    pub mu2: Option<Distribution>,
    pub denominator: Option<u32>,
    pub tolerance: Option<f64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

const KEYS: [&str; 8] = ["group", "alpha", "mu1", "mu2", "denominator", "tolerance", "workers", "out"];

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) =
                content.split_once('=').ok_or_else(|| ParseError::new(line, "expected `key = value`"))?;
            let key = key.trim();
            let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
                return Err(ParseError::new(line, format!("unknown key `{key}`")));
            };
            if let Some((first, _)) = entries.insert(key, (line, value.trim())) {
                return Err(ParseError::new(line, format!("`{key}` already set on line {first}")));
            }
        }

        let required =
            |key: &str| entries.get(key).copied().ok_or_else(|| ParseError::new(0, format!("missing `{key}`")));
        let (line, value) = required("group")?;
        let group = parse_group(value).map_err(|m| ParseError::new(line, m))?;
        let (line, value) = required("alpha")?;
        let alpha = parse_matrix(&group, value).map_err(|m| ParseError::new(line, m))?;
        if !alpha.is_automorphism() {
            return Err(ParseError::new(line, "alpha is not an automorphism"));
        }

        let dist = |key: &str| -> Result<Option<Distribution>, ParseError> {
            entries
                .get(key)
                .map(|&(line, v)| {
                    parse_distribution(&group, v).map_err(|m| ParseError::new(line, format!("{key}: {m}")))
                })
                .transpose()
        };
        let mu1 = dist("mu1")?;
        let mu2 = dist("mu2")?;

        let denominator = entries
            .get("denominator")
            .map(|&(line, v)| match v.parse::<u32>() {
                Ok(d) if d >= 1 => Ok(d),
                _ => Err(ParseError::new(line, format!("denominator must be a positive integer, got `{v}`"))),
            })
            .transpose()?;
        let tolerance = entries
            .get("tolerance")
            .map(|&(line, v)| match v.parse::<f64>() {
                Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
                _ => Err(ParseError::new(line, format!("tolerance must be a nonnegative number, got `{v}`"))),
            })
            .transpose()?;
        let workers = entries
            .get("workers")
            .map(|&(line, v)| {
                v.parse::<usize>()
                    .map_err(|_| ParseError::new(line, format!("workers must be a nonnegative integer, got `{v}`")))
            })
            .transpose()?;
        let out = entries.get("out").map(|&(_, v)| PathBuf::from(v));

        Ok(Self { group, alpha, mu1, mu2, denominator, tolerance, workers, out })
    }
}

pub fn parse_group(text: &str) -> Result<FiniteAbelianGroup, String> {
    let moduli = text
        .split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|_| format!("modulus `{t}` is not a positive integer")))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteAbelianGroup::new(moduli).map_err(|e| e.to_string())
}

/// Rows separated by `/`, entries by whitespace.
pub fn parse_matrix(group: &FiniteAbelianGroup, text: &str) -> Result<Endomorphism, String> {
    let rows = text
        .split('/')
        .map(|row| {
            row.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| format!("matrix entry `{t}` is not an integer")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = if group.rank() == 0 && rows.iter().all(Vec::is_empty) { Vec::new() } else { rows };
    Endomorphism::new(group, &rows).map_err(|e| e.to_string())
}

/// Inverse of [`parse_matrix`].
pub fn format_matrix(e: &Endomorphism) -> String {
    let rows: Vec<String> =
        e.matrix().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect();
    rows.join(" / ")
}

/// `(1,0)`; `()` on the trivial group.
pub fn parse_element(group: &FiniteAbelianGroup, text: &str) -> Result<GroupElement, String> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| format!("element `{text}` must be written as (c1,c2,...)"))?;
    let coords = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|c| {
                c.trim().parse::<u64>().map_err(|_| format!("coordinate `{}` is not a nonnegative integer", c.trim()))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    group.element(&coords).map_err(|e| e.to_string())
}

/// `p/q` or an integer.
pub fn parse_mass(text: &str) -> Result<Rational, String> {
    let (p, q) = text.split_once('/').unwrap_or((text, "1"));
    let p: i128 = p.trim().parse().map_err(|_| format!("mass `{text}` is not a fraction p/q"))?;
    let q: i128 = q.trim().parse().map_err(|_| format!("mass `{text}` is not a fraction p/q"))?;
    if q == 0 {
        return Err(format!("mass `{text}` has a zero denominator"));
    }
    let r = Rational::new(p, q);
    if r < Rational::from_integer(0) {
        return Err(format!("mass `{text}` is negative"));
    }
    Ok(r)
}

/// Space-separated `element:mass` entries. Whitespace inside an element is allowed.
pub fn parse_distribution(group: &FiniteAbelianGroup, text: &str) -> Result<Distribution, String> {
    let mut entries = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let close = rest.find(')').ok_or_else(|| format!("unterminated element in `{rest}`"))?;
        let element = parse_element(group, &rest[..=close])?;
        let after = rest[close + 1..].trim_start();
        let after = after.strip_prefix(':').ok_or_else(|| format!("expected `:` after {element}"))?.trim_start();
        let end = after.find(char::is_whitespace).unwrap_or(after.len());
        entries.push((element, parse_mass(&after[..end])?));
        rest = after[end..].trim_start();
    }
    if entries.is_empty() {
        return Err("empty distribution".into());
    }
    Distribution::new(group, entries).map_err(|e| e.to_string())
}

/// `<(1,0) (0,2)>`, the generators of a subgroup.
pub fn format_subgroup(k: &Subgroup) -> String {
    let gens: Vec<String> = k.generators().iter().map(ToString::to_string).collect();
    format!("<{}>", gens.join(" "))
}

pub fn parse_subgroup(group: &FiniteAbelianGroup, text: &str) -> Result<Subgroup, String> {
    let inner = text
        .trim()
        .strip_prefix('<')
        .and_then(|t| t.strip_suffix('>'))
        .ok_or_else(|| format!("subgroup `{text}` must be written as <g1 g2 ...>"))?;
    let gens = inner.split_whitespace().map(|t| parse_element(group, t)).collect::<Result<Vec<_>, _>>()?;
    Subgroup::generated(group, &gens).map_err(|e| e.to_string())
}
