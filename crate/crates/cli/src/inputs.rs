//! File loading. Every failure names the file and, where one exists, the
//! offending line.

use std::fs;
use std::path::Path;

use cooc_core::corpus::{CorpusError, SegmentAlignment, TokenizedHalf};
use cooc_core::formats::{self, Numbered};
use cooc_core::geometry::{BitextMap, BitextSpace, GeometryError, Units};
use cooc_core::{Mrbd, PosCompat};

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::in_file(path, e))?;
    String::from_utf8(bytes).map_err(|e| {
        // Report the line holding the first invalid byte.
        let valid = e.utf8_error().valid_up_to();
        let line = e.as_bytes()[..valid]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        CliError::at_line(path, line, "invalid UTF-8")
    })
}

pub fn load_half(
    path: &Path,
    pretokenized: bool,
    fold_case: bool,
) -> Result<TokenizedHalf, CliError> {
    let text = read_text(path)?;
    if !pretokenized {
        return Ok(TokenizedHalf::tokenize(&text, fold_case));
    }
    let numbered = formats::parse_pretokenized(&text)
        .map_err(|e| CliError::at_line(path, e.line, e.message))?;
    let records: Vec<_> = numbered.iter().map(|(_, r)| r.clone()).collect();
    TokenizedHalf::from_pretokenized(&records, None, fold_case).map_err(|e| match token_index(&e) {
        Some(i) => CliError::at_line(path, numbered[i].0, &e),
        None => CliError::in_file(path, &e),
    })
}

fn token_index(e: &CorpusError) -> Option<usize> {
    match e {
        CorpusError::EmptySpan { index, .. }
        | CorpusError::NonMonotonicSpans { index, .. }
        | CorpusError::OverlappingSpans { index, .. }
        | CorpusError::NonMonotonicSegments { index, .. }
        | CorpusError::SpanBeyondText { index, .. } => Some(*index),
        _ => None,
    }
}

fn block_index(e: &CorpusError) -> Option<usize> {
    match e {
        CorpusError::EmptyBlockSide { block }
        | CorpusError::NonContiguousBlock { block, .. }
        | CorpusError::SegmentOutOfRange { block, .. }
        | CorpusError::OverlappingBlocks { block, .. }
        | CorpusError::NonMonotonicBlocks { block, .. } => Some(*block),
        _ => None,
    }
}

/// Attaches tags from a POS file with one line of tags per segment.
pub fn attach_pos(half: TokenizedHalf, path: &Path) -> Result<TokenizedHalf, CliError> {
    let lines = formats::parse_pos(&read_text(path)?);
    let per_segment = half.tokens_per_segment();
    for (segment, &expected) in per_segment.iter().enumerate() {
        let found = lines.get(segment).map_or(0, Vec::len);
        if found != expected {
            return Err(CliError::at_line(
                path,
                segment + 1,
                format!("expected {expected} tags for segment {segment}, found {found}"),
            ));
        }
    }
    if let Some(extra) = (per_segment.len()..lines.len()).find(|&i| !lines[i].is_empty()) {
        return Err(CliError::at_line(
            path,
            extra + 1,
            format!("tags given beyond the last segment ({})", per_segment.len()),
        ));
    }
    let tags: Vec<&String> = lines.iter().flatten().collect();
    half.with_pos(&tags).map_err(|e| CliError::in_file(path, e))
}

/// An anchor file validated against the bitext space.
pub struct MapInput {
    pub anchor_count: usize,
    pub max_gap: f64,
    /// Absent when one half is empty: no token pair can co-occur, and the
    /// degenerate space admits no map.
    pub map: Option<BitextMap>,
}

pub fn load_map(
    path: &Path,
    width: usize,
    height: usize,
    units: Units,
) -> Result<MapInput, CliError> {
    let numbered = formats::parse_anchors(&read_text(path)?)
        .map_err(|e| CliError::at_line(path, e.line, e.message))?;
    let records: Vec<(f64, f64)> = numbered.iter().map(|(_, r)| *r).collect();
    let (w, h) = (width as f64, height as f64);
    let line_of = |e: &GeometryError| match e {
        GeometryError::NonFinite { index }
        | GeometryError::OutOfBounds { index, .. }
        | GeometryError::NonMonotonicMap { index, .. } => Some(numbered[*index].0),
        _ => None,
    };
    let fail = |e: GeometryError| match line_of(&e) {
        Some(line) => CliError::at_line(path, line, &e),
        None => CliError::in_file(path, &e),
    };

    if width > 0 && height > 0 {
        let space = BitextSpace::new(w, h, units).map_err(fail)?;
        let map = BitextMap::load(&records, space).map_err(fail)?;
        return Ok(MapInput {
            anchor_count: records.len(),
            max_gap: map.max_gap(),
            map: Some(map),
        });
    }

    degenerate_map(&numbered, w, h, units).map_err(fail)
}

/// Validation for a zero-width or zero-height space, where the map would
/// collapse onto one axis.
fn degenerate_map(
    numbered: &Numbered<(f64, f64)>,
    w: f64,
    h: f64,
    units: Units,
) -> Result<MapInput, GeometryError> {
    for (index, &(_, (x, y))) in numbered.iter().enumerate() {
        if x > w || y > h {
            return Err(GeometryError::OutOfBounds {
                index,
                x,
                y,
                width: w,
                height: h,
            });
        }
    }
    // Validate ordering on a padded space; every anchor is already in bounds.
    let records: Vec<(f64, f64)> = numbered.iter().map(|(_, r)| *r).collect();
    let padded = BitextSpace::new(w.max(1.0), h.max(1.0), units)?;
    BitextMap::load(&records, padded)?;
    let mut points: Vec<(f64, f64)> = records;
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    points.insert(0, (0.0, 0.0));
    points.push((w, h));
    let max_gap = points
        .windows(2)
        .map(|p| (p[1].0 - p[0].0).hypot(p[1].1 - p[0].1))
        .fold(0.0, f64::max);
    Ok(MapInput {
        anchor_count: numbered.len(),
        max_gap,
        map: None,
    })
}

pub fn load_alignment(
    path: &Path,
    segment_counts: (usize, usize),
) -> Result<SegmentAlignment, CliError> {
    let numbered = formats::parse_alignment(&read_text(path)?)
        .map_err(|e| CliError::at_line(path, e.line, e.message))?;
    let records: Vec<_> = numbered.iter().map(|(_, r)| r.clone()).collect();
    SegmentAlignment::load(&records, segment_counts).map_err(|e| match block_index(&e) {
        Some(b) => CliError::at_line(path, numbered[b].0, &e),
        None => CliError::in_file(path, &e),
    })
}

fn load_pairs(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let numbered = formats::parse_pairs(&read_text(path)?)
        .map_err(|e| CliError::at_line(path, e.line, e.message))?;
    Ok(numbered.into_iter().map(|(_, p)| p).collect())
}

pub fn load_mrbd(path: &Path, fold_case: bool) -> Result<Mrbd, CliError> {
    Ok(Mrbd::new(load_pairs(path)?, fold_case))
}

pub fn load_pos_compat(path: Option<&Path>) -> Result<PosCompat, CliError> {
    match path {
        None => Ok(PosCompat::identity()),
        Some(p) => Ok(PosCompat::from_pairs(load_pairs(p)?)),
    }
}
