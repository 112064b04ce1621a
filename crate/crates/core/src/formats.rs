//! Line-oriented text formats for anchors, pretokenized halves, alignments,
//! POS tags and word/tag pair lists.
//!
//! Parsers return records tagged with their 1-based line number so callers
//! can map validation errors back to the offending line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::TokenizedHalf;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// Records paired with their 1-based line numbers.
pub type Numbered<T> = Vec<(usize, T)>;

fn numbered(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

fn parse_uint(field: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    field.trim().parse::<usize>().map_err(|_| {
        ParseError::new(
            line,
            format!("{what} {field:?} is not a nonnegative integer"),
        )
    })
}

/// `x<TAB>y` anchors; blank and `#` lines are skipped.
pub fn parse_anchors(text: &str) -> Result<Numbered<(f64, f64)>, ParseError> {
    let mut out = Vec::new();
    for (line, raw) in numbered(text) {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 2 {
            return Err(ParseError::new(
                line,
                format!("expected 'x<TAB>y', found {} fields", fields.len()),
            ));
        }
        let x = parse_uint(fields[0], line, "x")?;
        let y = parse_uint(fields[1], line, "y")?;
        out.push((line, (x as f64, y as f64)));
    }
    Ok(out)
}

pub type PretokenizedRecord = (String, usize, usize, Option<usize>);

/// `token<TAB>start<TAB>end[<TAB>segment]`; blank lines are skipped.
pub fn parse_pretokenized(text: &str) -> Result<Numbered<PretokenizedRecord>, ParseError> {
    let mut out = Vec::new();
    for (line, raw) in numbered(text) {
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(ParseError::new(
                line,
                format!(
                    "expected 'token<TAB>start<TAB>end[<TAB>segment]', found {} fields",
                    fields.len()
                ),
            ));
        }
        if fields[0].is_empty() {
            return Err(ParseError::new(line, "empty token"));
        }
        let start = parse_uint(fields[1], line, "start")?;
        let end = parse_uint(fields[2], line, "end")?;
        let segment = fields
            .get(3)
            .map(|f| parse_uint(f, line, "segment"))
            .transpose()?;
        out.push((line, (fields[0].to_owned(), start, end, segment)));
    }
    Ok(out)
}

pub fn write_pretokenized(half: &TokenizedHalf) -> String {
    let mut out = String::new();
    for (token, start, end, segment) in half.to_pretokenized() {
        let segment = segment.expect("halves always carry segments");
        writeln!(out, "{token}\t{start}\t{end}\t{segment}").unwrap();
    }
    out
}

pub type AlignmentRecord = (Vec<usize>, Vec<usize>);

/// `i,j,...<TAB>k,l,...` blocks; blank lines are skipped. A side written
/// as `-` is empty, which alignment validation then rejects.
pub fn parse_alignment(text: &str) -> Result<Numbered<AlignmentRecord>, ParseError> {
    let side = |field: &str, line: usize| -> Result<Vec<usize>, ParseError> {
        let field = field.trim();
        if field == "-" {
            return Ok(Vec::new());
        }
        field
            .split(',')
            .map(|s| parse_uint(s, line, "segment index"))
            .collect()
    };
    let mut out = Vec::new();
    for (line, raw) in numbered(text) {
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 2 {
            return Err(ParseError::new(
                line,
                format!("expected 'side1<TAB>side2', found {} fields", fields.len()),
            ));
        }
        out.push((line, (side(fields[0], line)?, side(fields[1], line)?)));
    }
    Ok(out)
}

/// Whitespace-separated tags, one line per segment. Every line is kept,
/// blank ones included.
pub fn parse_pos(text: &str) -> Vec<Vec<String>> {
    numbered(text)
        .map(|(_, l)| l.split_whitespace().map(str::to_owned).collect())
        .collect()
}

/// `a<TAB>b` pairs (dictionary entries, compatible tag pairs); blank lines
/// are skipped.
pub fn parse_pairs(text: &str) -> Result<Numbered<(String, String)>, ParseError> {
    let mut out = Vec::new();
    for (line, raw) in numbered(text) {
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 2 || fields.iter().any(|f| f.trim().is_empty()) {
            return Err(ParseError::new(
                line,
                "expected two nonempty tab-separated fields",
            ));
        }
        out.push((
            line,
            (fields[0].trim().to_owned(), fields[1].trim().to_owned()),
        ));
    }
    Ok(out)
}
