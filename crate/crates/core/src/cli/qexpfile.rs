//! Reader for the `# qexp v1` text format.
//!
//! ```text
//! # qexp v1
//! N=72 weight=2 label=f0 prec=40
//! 5 1
//! 11 -2
//! 17 1/2
//! ```
//!
//! A header line starts a new series; the body lines that follow are
//! `exponent coefficient` pairs. `#` starts a comment anywhere on a line.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::qexp::{QExpError, QExpansion};

pub const MAGIC: &str = "# qexp v1";

#[derive(Debug, Error)]
pub enum QExpFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("first line must be `{MAGIC}`")]
    MissingMagic,
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: exponent {exponent} listed twice")]
    DuplicateExponent { line: usize, exponent: i64 },
    #[error("line {line}: exponent {exponent} beyond declared precision {prec}")]
    BeyondPrecision {
        line: usize,
        exponent: i64,
        prec: i64,
    },
    #[error("line {line}: {source}")]
    Series { line: usize, source: QExpError },
}

/// A parsed series together with its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSeries {
    pub label: String,
    pub series: QExpansion,
}

struct Block {
    header_line: usize,
    label: String,
    level: u64,
    weight: i64,
    prec: i64,
    terms: Vec<(i64, BigRational)>,
}

impl Block {
    fn finish(self) -> Result<LabeledSeries, QExpFileError> {
        let series =
            QExpansion::new(self.level, self.weight, self.prec, self.terms).map_err(|source| {
                QExpFileError::Series {
                    line: self.header_line,
                    source,
                }
            })?;
        Ok(LabeledSeries {
            label: self.label,
            series,
        })
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> QExpFileError {
    QExpFileError::Malformed {
        line,
        msg: msg.into(),
    }
}

fn parse_coefficient(s: &str, line: usize) -> Result<BigRational, QExpFileError> {
    let bad = || malformed(line, format!("bad coefficient `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_header(text: &str, line: usize) -> Result<Block, QExpFileError> {
    let mut level = None;
    let mut weight = None;
    let mut label = None;
    let mut prec = None;
    for field in text.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| malformed(line, format!("expected key=value, got `{field}`")))?;
        let int = |v: &str| -> Result<i64, QExpFileError> {
            v.parse()
                .map_err(|_| malformed(line, format!("`{k}` must be an integer, got `{v}`")))
        };
        match k {
            "N" => level = Some(int(v)?),
            "weight" => weight = Some(int(v)?),
            "prec" => prec = Some(int(v)?),
            "label" => label = Some(v.to_string()),
            _ => return Err(malformed(line, format!("unknown key `{k}`"))),
        }
    }
    let missing = |k: &str| malformed(line, format!("header is missing `{k}`"));
    let level = level.ok_or_else(|| missing("N"))?;
    if level <= 0 {
        return Err(malformed(line, "N must be positive"));
    }
    let weight = weight.ok_or_else(|| missing("weight"))?;
    if weight < 0 {
        return Err(malformed(line, "weight must be nonnegative"));
    }
    let prec = prec.ok_or_else(|| missing("prec"))?;
    if prec < 0 {
        return Err(malformed(line, "prec must be nonnegative"));
    }
    Ok(Block {
        header_line: line,
        label: label.ok_or_else(|| missing("label"))?,
        level: level as u64,
        weight,
        prec,
        terms: Vec::new(),
    })
}

/// Parses every series in `text`.
pub fn parse_qexp_str(text: &str) -> Result<Vec<LabeledSeries>, QExpFileError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end() == MAGIC => {}
        _ => return Err(QExpFileError::MissingMagic),
    }
    let mut out = Vec::new();
    let mut current: Option<Block> = None;
    let mut seen = std::collections::BTreeSet::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        if body.contains('=') {
            if let Some(b) = current.take() {
                out.push(b.finish()?);
            }
            current = Some(parse_header(body, line)?);
            seen.clear();
            continue;
        }
        let block = current
            .as_mut()
            .ok_or_else(|| malformed(line, "coefficient line before any header"))?;
        let mut parts = body.split_whitespace();
        let (Some(e), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(malformed(line, "expected `exponent coefficient`"));
        };
        let exponent: i64 = e
            .parse()
            .map_err(|_| malformed(line, format!("bad exponent `{e}`")))?;
        if exponent > block.prec {
            return Err(QExpFileError::BeyondPrecision {
                line,
                exponent,
                prec: block.prec,
            });
        }
        if !seen.insert(exponent) {
            return Err(QExpFileError::DuplicateExponent { line, exponent });
        }
        block.terms.push((exponent, parse_coefficient(c, line)?));
    }
    if let Some(b) = current {
        out.push(b.finish()?);
    }
    Ok(out)
}

pub fn parse_qexp_file(path: &Path) -> Result<Vec<LabeledSeries>, QExpFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| QExpFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_qexp_str(&text)
}

/// Writes series in the same format.
pub fn format_qexp(series: &[LabeledSeries]) -> String {
    let mut out = format!("{MAGIC}\n");
    for s in series {
        out.push_str(&format!(
            "N={} weight={} label={} prec={}\n",
            s.series.level(),
            s.series.weight(),
            s.label,
            s.series.prec()
        ));
        for (e, c) in s.series.terms() {
            out.push_str(&format!("{e} {c}\n"));
        }
    }
    out
}
