//! Tokenized bitext halves and segment alignments.
//!
//! Offsets are Unicode code-point offsets into the raw text. Segments are
//! lines; a trailing newline does not open an extra segment.

use std::collections::HashMap;
use std::ops::Range;

use thiserror::Error;

use crate::geometry::Units;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("token {index} has an empty or inverted span ({start}, {end})")]
    EmptySpan {
        index: usize,
        start: usize,
        end: usize,
    },
    #[error("token {index} starts at {start}, before the previous token's start {prev_start}")]
    NonMonotonicSpans {
        index: usize,
        start: usize,
        prev_start: usize,
    },
    #[error("token {index} starts at {start}, inside the previous token which ends at {prev_end}")]
    OverlappingSpans {
        index: usize,
        start: usize,
        prev_end: usize,
    },
    #[error(
        "token {index} has segment {segment}, before the previous token's segment {prev_segment}"
    )]
    NonMonotonicSegments {
        index: usize,
        segment: usize,
        prev_segment: usize,
    },
    #[error("token {index} ends at {end}, beyond the declared text length {length}")]
    SpanBeyondText {
        index: usize,
        end: usize,
        length: usize,
    },
    #[error("expected {expected} tags, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("alignment block {block} has an empty side")]
    EmptyBlockSide { block: usize },
    #[error("alignment block {block} lists non-contiguous segments on side {side}")]
    NonContiguousBlock { block: usize, side: u8 },
    #[error("alignment block {block} references segment {segment} on side {side}, but that half has {segment_count} segments")]
    SegmentOutOfRange {
        block: usize,
        side: u8,
        segment: usize,
        segment_count: usize,
    },
    #[error("alignment block {block} reuses segment {segment} on side {side}")]
    OverlappingBlocks {
        block: usize,
        side: u8,
        segment: usize,
    },
    #[error("alignment block {block} precedes an earlier block on side {side}")]
    NonMonotonicBlocks { block: usize, side: u8 },
}

/// Index of a word type within one half's vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub type_id: TypeId,
    /// Code-point span `[start, end)`.
    pub span: (usize, usize),
    pub token_index: usize,
    pub segment_index: usize,
    pub pos_tag: Option<String>,
}

impl Token {
    /// Coordinate of the token along its axis: midpoint of its span in
    /// characters, or of `[index, index + 1]` in tokens.
    pub fn coordinate(&self, units: Units) -> f64 {
        match units {
            Units::Characters => (self.span.0 + self.span.1) as f64 / 2.0,
            Units::Tokens => self.token_index as f64 + 0.5,
        }
    }
}

/// One side of a bitext.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenizedHalf {
    tokens: Vec<Token>,
    types: Vec<String>,
    segment_count: usize,
    char_length: usize,
    fold_case: bool,
}

#[derive(Default)]
struct Interner {
    ids: HashMap<String, TypeId>,
    names: Vec<String>,
}

impl Interner {
    fn intern(&mut self, name: String) -> TypeId {
        if let Some(&id) = self.ids.get(&name) {
            return id;
        }
        let id = TypeId(self.names.len() as u32);
        self.names.push(name.clone());
        self.ids.insert(name, id);
        id
    }
}

fn type_name(surface: &str, fold_case: bool) -> String {
    if fold_case {
        surface.to_lowercase()
    } else {
        surface.to_owned()
    }
}

impl TokenizedHalf {
    /// Splits raw text into maximal runs of non-whitespace code points.
    pub fn tokenize(raw_text: &str, fold_case: bool) -> Self {
        let mut interner = Interner::default();
        let mut tokens = Vec::new();
        let mut segment = 0;
        let mut current: Option<(usize, String)> = None;
        let mut char_length = 0;

        let mut flush = |current: &mut Option<(usize, String)>, end: usize, segment: usize| {
            if let Some((start, surface)) = current.take() {
                let type_id = interner.intern(type_name(&surface, fold_case));
                let token_index = tokens.len();
                tokens.push(Token {
                    surface,
                    type_id,
                    span: (start, end),
                    token_index,
                    segment_index: segment,
                    pos_tag: None,
                });
            }
        };

        for (offset, ch) in raw_text.chars().enumerate() {
            char_length = offset + 1;
            if ch.is_whitespace() {
                flush(&mut current, offset, segment);
                if ch == '\n' {
                    segment += 1;
                }
            } else {
                current
                    .get_or_insert_with(|| (offset, String::new()))
                    .1
                    .push(ch);
            }
        }
        flush(&mut current, char_length, segment);

        let segment_count = if raw_text.is_empty() {
            0
        } else if raw_text.ends_with('\n') {
            segment
        } else {
            segment + 1
        };

        Self {
            tokens,
            types: interner.names,
            segment_count,
            char_length,
            fold_case,
        }
    }

    /// Builds a half from caller-supplied token boundaries.
    ///
    /// A record without a segment inherits the previous record's segment
    /// (0 for the first). `text_length` defaults to the last token's end.
    pub fn from_pretokenized(
        records: &[(String, usize, usize, Option<usize>)],
        text_length: Option<usize>,
        fold_case: bool,
    ) -> Result<Self, CorpusError> {
        let mut interner = Interner::default();
        let mut tokens: Vec<Token> = Vec::with_capacity(records.len());

        for (index, (surface, start, end, segment)) in records.iter().enumerate() {
            let (start, end) = (*start, *end);
            if start >= end {
                return Err(CorpusError::EmptySpan { index, start, end });
            }
            let prev_segment = tokens.last().map_or(0, |t| t.segment_index);
            let segment = segment.unwrap_or(prev_segment);
            if let Some(prev) = tokens.last() {
                if start < prev.span.0 {
                    return Err(CorpusError::NonMonotonicSpans {
                        index,
                        start,
                        prev_start: prev.span.0,
                    });
                }
                if start < prev.span.1 {
                    return Err(CorpusError::OverlappingSpans {
                        index,
                        start,
                        prev_end: prev.span.1,
                    });
                }
                if segment < prev_segment {
                    return Err(CorpusError::NonMonotonicSegments {
                        index,
                        segment,
                        prev_segment,
                    });
                }
            }
            if let Some(length) = text_length {
                if end > length {
                    return Err(CorpusError::SpanBeyondText { index, end, length });
                }
            }
            tokens.push(Token {
                surface: surface.clone(),
                type_id: interner.intern(type_name(surface, fold_case)),
                span: (start, end),
                token_index: index,
                segment_index: segment,
                pos_tag: None,
            });
        }

        let segment_count = tokens.last().map_or(0, |t| t.segment_index + 1);
        let char_length = text_length.unwrap_or_else(|| tokens.last().map_or(0, |t| t.span.1));
        Ok(Self {
            tokens,
            types: interner.names,
            segment_count,
            char_length,
            fold_case,
        })
    }

    /// Pretokenized records describing this half, segments included.
    pub fn to_pretokenized(&self) -> Vec<(String, usize, usize, Option<usize>)> {
        self.tokens
            .iter()
            .map(|t| (t.surface.clone(), t.span.0, t.span.1, Some(t.segment_index)))
            .collect()
    }

    /// Attaches one POS tag per token.
    pub fn with_pos<S: AsRef<str>>(mut self, tags: &[S]) -> Result<Self, CorpusError> {
        if tags.len() != self.tokens.len() {
            return Err(CorpusError::LengthMismatch {
                expected: self.tokens.len(),
                actual: tags.len(),
            });
        }
        for (token, tag) in self.tokens.iter_mut().zip(tags) {
            token.pos_tag = Some(tag.as_ref().to_owned());
        }
        Ok(self)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.segment_count
    }

    pub fn fold_case(&self) -> bool {
        self.fold_case
    }

    /// Length of the half along its axis.
    pub fn length(&self, units: Units) -> usize {
        match units {
            Units::Characters => self.char_length,
            Units::Tokens => self.tokens.len(),
        }
    }

    /// Word type string for a type id of this half.
    pub fn type_name(&self, id: TypeId) -> &str {
        &self.types[id.0 as usize]
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn is_tagged(&self) -> bool {
        self.tokens.iter().all(|t| t.pos_tag.is_some())
    }

    /// Number of tokens in each segment.
    pub fn tokens_per_segment(&self) -> Vec<usize> {
        let mut counts = vec![0; self.segment_count];
        for t in &self.tokens {
            counts[t.segment_index] += 1;
        }
        counts
    }

    /// Token index range covering the segments in `segments`.
    pub fn token_range(&self, segments: Range<usize>) -> Range<usize> {
        let lo = self
            .tokens
            .partition_point(|t| t.segment_index < segments.start);
        let hi = self
            .tokens
            .partition_point(|t| t.segment_index < segments.end);
        lo..hi
    }
}

/// Occurrence counts of a type pair within one aligned block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SegmentPairStats {
    pub e_u: u64,
    pub f_v: u64,
}

/// Monotonic, non-overlapping blocks of aligned segment runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentAlignment {
    blocks: Vec<(Range<usize>, Range<usize>)>,
    block_of_side1: Vec<Option<usize>>,
    block_of_side2: Vec<Option<usize>>,
}

impl SegmentAlignment {
    /// Validates alignment blocks against the segment counts of both halves.
    ///
    /// Each side of a block is a set of segment indices; duplicates and
    /// ordering within a side do not matter, but the set must be a
    /// contiguous nonempty run.
    pub fn load(
        records: &[(Vec<usize>, Vec<usize>)],
        segment_counts: (usize, usize),
    ) -> Result<Self, CorpusError> {
        let mut blocks = Vec::with_capacity(records.len());
        for (block, (side1, side2)) in records.iter().enumerate() {
            let r1 = contiguous_run(side1, block, 1, segment_counts.0)?;
            let r2 = contiguous_run(side2, block, 2, segment_counts.1)?;
            blocks.push((r1, r2));
        }

        let mut block_of_side1 = vec![None; segment_counts.0];
        let mut block_of_side2 = vec![None; segment_counts.1];
        for (block, (r1, r2)) in blocks.iter().enumerate() {
            for (side, range, owner) in [
                (1u8, r1, &mut block_of_side1),
                (2u8, r2, &mut block_of_side2),
            ] {
                for segment in range.clone() {
                    if owner[segment].is_some() {
                        return Err(CorpusError::OverlappingBlocks {
                            block,
                            side,
                            segment,
                        });
                    }
                    owner[segment] = Some(block);
                }
            }
        }

        for (block, pair) in blocks.windows(2).enumerate() {
            if pair[1].0.start < pair[0].0.end {
                return Err(CorpusError::NonMonotonicBlocks {
                    block: block + 1,
                    side: 1,
                });
            }
            if pair[1].1.start < pair[0].1.end {
                return Err(CorpusError::NonMonotonicBlocks {
                    block: block + 1,
                    side: 2,
                });
            }
        }

        Ok(Self {
            blocks,
            block_of_side1,
            block_of_side2,
        })
    }

    /// A single block aligning every segment of both halves.
    pub fn whole(segment_counts: (usize, usize)) -> Result<Self, CorpusError> {
        if segment_counts.0 == 0 || segment_counts.1 == 0 {
            return Self::load(&[], segment_counts);
        }
        Self::load(
            &[(
                (0..segment_counts.0).collect(),
                (0..segment_counts.1).collect(),
            )],
            segment_counts,
        )
    }

    pub fn blocks(&self) -> &[(Range<usize>, Range<usize>)] {
        &self.blocks
    }

    pub fn block_of_side1(&self, segment: usize) -> Option<usize> {
        self.block_of_side1.get(segment).copied().flatten()
    }

    pub fn block_of_side2(&self, segment: usize) -> Option<usize> {
        self.block_of_side2.get(segment).copied().flatten()
    }

    pub fn segment_counts(&self) -> (usize, usize) {
        (self.block_of_side1.len(), self.block_of_side2.len())
    }
}

fn contiguous_run(
    segments: &[usize],
    block: usize,
    side: u8,
    segment_count: usize,
) -> Result<Range<usize>, CorpusError> {
    let mut sorted = segments.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let (Some(&first), Some(&last)) = (sorted.first(), sorted.last()) else {
        return Err(CorpusError::EmptyBlockSide { block });
    };
    if last >= segment_count {
        return Err(CorpusError::SegmentOutOfRange {
            block,
            side,
            segment: last,
            segment_count,
        });
    }
    if last - first + 1 != sorted.len() {
        return Err(CorpusError::NonContiguousBlock { block, side });
    }
    Ok(first..last + 1)
}
