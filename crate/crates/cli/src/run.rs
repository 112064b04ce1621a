use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use cooc_core::counting::{count_with_report, CountReport};
use cooc_core::filters::FilterKind;
use cooc_core::oracle::{brute_count_all_filtered, OracleError, MAX_HALF_TOKENS};
use cooc_core::{
    BoundaryModel, CognateRule, CombinedModel, CoocModel, CoocTable, CountingAssumption,
    DistanceModel, Filter, FilterSet, TokenizedHalf, Units,
};

use crate::error::CliError;
use crate::inputs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Distance,
    Boundary,
    Combined,
}

/// Options as given on the command line, before validation.
#[derive(Debug, Clone, Default)]
pub struct RawOptions {
    pub text1: PathBuf,
    pub text2: PathBuf,
    pub pretokenized: bool,
    pub fold_case: bool,
    pub mode: Option<Mode>,
    pub map: Option<PathBuf>,
    pub delta: Option<f64>,
    pub units: Units,
    pub alignment: Option<PathBuf>,
    pub assumption: CountingAssumption,
    pub mrbd: Option<PathBuf>,
    pub pos1: Option<PathBuf>,
    pub pos2: Option<PathBuf>,
    pub pos_compat: Option<PathBuf>,
    pub cognate: bool,
    pub cognate_threshold: Option<f64>,
    pub cognate_min_length: Option<usize>,
    pub filter_order: Option<String>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone)]
enum FilterSpec {
    Pos {
        pos1: PathBuf,
        pos2: PathBuf,
        compat: Option<PathBuf>,
    },
    Mrbd(PathBuf),
    Cognate(CognateRule),
}

/// A validated run: every mode-mandatory input is present and no option
/// contradicts another.
#[derive(Debug, Clone)]
pub struct RunConfig {
    text1: PathBuf,
    text2: PathBuf,
    pretokenized: bool,
    fold_case: bool,
    mode: Mode,
    map: Option<PathBuf>,
    delta: Option<f64>,
    units: Units,
    alignment: Option<PathBuf>,
    assumption: CountingAssumption,
    filters: Vec<FilterSpec>,
    output: Option<PathBuf>,
}

fn contradiction(message: impl Into<String>) -> CliError {
    CliError::Config(message.into())
}

impl RunConfig {
    pub fn validate(raw: RawOptions) -> Result<Self, CliError> {
        let mode = raw
            .mode
            .ok_or_else(|| contradiction("--mode is required"))?;
        let uses_map = mode != Mode::Boundary;
        let uses_alignment = mode != Mode::Distance;
        let name = match mode {
            Mode::Distance => "distance",
            Mode::Boundary => "boundary",
            Mode::Combined => "combined",
        };
        if uses_map {
            if raw.map.is_none() {
                return Err(contradiction(format!("--mode {name} requires --map")));
            }
            match raw.delta {
                None => return Err(contradiction(format!("--mode {name} requires --delta"))),
                Some(d) if !(d.is_finite() && d >= 0.0) => {
                    return Err(contradiction(format!(
                        "--delta must be a finite nonnegative number, got {d}"
                    )))
                }
                Some(_) => {}
            }
        } else if raw.map.is_some() || raw.delta.is_some() {
            return Err(contradiction(format!(
                "--mode {name} takes no --map or --delta"
            )));
        }
        if uses_alignment && raw.alignment.is_none() {
            return Err(contradiction(format!("--mode {name} requires --alignment")));
        }
        if !uses_alignment && raw.alignment.is_some() {
            return Err(contradiction(format!("--mode {name} takes no --alignment")));
        }

        let filters = Self::filters(&raw)?;
        Ok(Self {
            text1: raw.text1,
            text2: raw.text2,
            pretokenized: raw.pretokenized,
            fold_case: raw.fold_case,
            mode,
            map: raw.map,
            delta: raw.delta,
            units: raw.units,
            alignment: raw.alignment,
            assumption: raw.assumption,
            filters,
            output: raw.output,
        })
    }

    fn filters(raw: &RawOptions) -> Result<Vec<FilterSpec>, CliError> {
        let pos = match (&raw.pos1, &raw.pos2) {
            (Some(p1), Some(p2)) => Some(FilterSpec::Pos {
                pos1: p1.clone(),
                pos2: p2.clone(),
                compat: raw.pos_compat.clone(),
            }),
            (None, None) if raw.pos_compat.is_some() => {
                return Err(contradiction("--pos-compat requires --pos1 and --pos2"))
            }
            (None, None) => None,
            _ => return Err(contradiction("the POS filter needs both --pos1 and --pos2")),
        };
        let mrbd = raw.mrbd.clone().map(FilterSpec::Mrbd);
        let cognate = if raw.cognate {
            let defaults = CognateRule::default();
            let rule = CognateRule::new(
                raw.cognate_threshold.unwrap_or(defaults.threshold()),
                raw.cognate_min_length.unwrap_or(defaults.min_length()),
            )
            .map_err(|e| contradiction(e.to_string()))?;
            Some(FilterSpec::Cognate(rule))
        } else if raw.cognate_threshold.is_some() || raw.cognate_min_length.is_some() {
            return Err(contradiction(
                "--cognate-threshold and --cognate-min-length require --cognate",
            ));
        } else {
            None
        };

        let order = match &raw.filter_order {
            None => FilterSet::DEFAULT_ORDER.to_vec(),
            Some(spec) => {
                let mut order = Vec::new();
                for name in spec.split(',').map(str::trim) {
                    let kind: FilterKind = name
                        .parse()
                        .map_err(|e: String| contradiction(format!("--filter-order: {e}")))?;
                    if order.contains(&kind) {
                        return Err(contradiction(format!("--filter-order lists {kind} twice")));
                    }
                    order.push(kind);
                }
                order
            }
        };

        let mut slots = [pos, mrbd, cognate];
        let mut out = Vec::new();
        for kind in order {
            let slot = match kind {
                FilterKind::Pos => &mut slots[0],
                FilterKind::Mrbd => &mut slots[1],
                FilterKind::Cognate => &mut slots[2],
            };
            out.extend(slot.take());
        }
        if let Some(left) = slots.iter().flatten().next() {
            let kind = match left {
                FilterSpec::Pos { .. } => FilterKind::Pos,
                FilterSpec::Mrbd(_) => FilterKind::Mrbd,
                FilterSpec::Cognate(_) => FilterKind::Cognate,
            };
            return Err(contradiction(format!(
                "the {kind} filter is enabled but missing from --filter-order"
            )));
        }
        Ok(out)
    }

    pub fn output(&self) -> Option<&Path> {
        self.output.as_deref()
    }
}

/// Inputs read from disk, ready for counting.
pub struct Loaded {
    pub half1: TokenizedHalf,
    pub half2: TokenizedHalf,
    /// Absent when the map cannot exist because a half is empty.
    pub model: Option<CoocModel>,
    pub filters: Option<FilterSet>,
    pub assumption: CountingAssumption,
}

pub fn load(config: &RunConfig) -> Result<Loaded, CliError> {
    let mut half1 = inputs::load_half(&config.text1, config.pretokenized, config.fold_case)?;
    let mut half2 = inputs::load_half(&config.text2, config.pretokenized, config.fold_case)?;

    let mut filters = Vec::new();
    for spec in &config.filters {
        filters.push(match spec {
            FilterSpec::Pos { pos1, pos2, compat } => {
                half1 = inputs::attach_pos(half1, pos1)?;
                half2 = inputs::attach_pos(half2, pos2)?;
                Filter::Pos(inputs::load_pos_compat(compat.as_deref())?)
            }
            FilterSpec::Mrbd(path) => Filter::Mrbd(inputs::load_mrbd(path, config.fold_case)?),
            FilterSpec::Cognate(rule) => Filter::Cognate(*rule),
        });
    }
    let filters = if filters.is_empty() {
        None
    } else {
        Some(FilterSet::new(filters).map_err(|e| CliError::Internal(e.to_string()))?)
    };

    let distance = match (&config.map, config.delta) {
        (Some(path), Some(delta)) => {
            let units = config.units;
            let input = inputs::load_map(path, half1.length(units), half2.length(units), units)?;
            match input.map {
                Some(map) => Some(Some(
                    DistanceModel::new(map, delta).map_err(|e| CliError::Config(e.to_string()))?,
                )),
                None => Some(None),
            }
        }
        _ => None,
    };
    let boundary = match &config.alignment {
        Some(path) => Some(BoundaryModel::new(inputs::load_alignment(
            path,
            (half1.segment_count(), half2.segment_count()),
        )?)),
        None => None,
    };

    let model = match (config.mode, distance, boundary) {
        (Mode::Distance, Some(d), _) => d.map(CoocModel::from),
        (Mode::Boundary, _, Some(b)) => Some(b.into()),
        (Mode::Combined, Some(d), Some(b)) => d.map(|d| CombinedModel::new(d, b).into()),
        _ => {
            return Err(CliError::Internal(
                "validated configuration lost a model input".into(),
            ))
        }
    };

    Ok(Loaded {
        half1,
        half2,
        model,
        filters,
        assumption: config.assumption,
    })
}

fn production(loaded: &Loaded) -> Result<CountReport, CliError> {
    match &loaded.model {
        None => Ok(CountReport {
            table: CoocTable::new(),
            candidate_edges: 0,
            residual_edges: 0,
            consumed_links: 0,
        }),
        Some(model) => count_with_report(
            model,
            &loaded.half1,
            &loaded.half2,
            loaded.assumption,
            loaded.filters.as_ref(),
        )
        .map_err(|e| CliError::Internal(e.to_string())),
    }
}

pub fn cmd_count(config: &RunConfig) -> Result<(), CliError> {
    let loaded = load(config)?;
    let report = production(&loaded)?;
    write_table(&report.table, config.output())?;
    eprintln!(
        "cooc: tokens {} x {}, candidate edges {}, residual edges {}, consumed links {}, type pairs {}",
        loaded.half1.len(),
        loaded.half2.len(),
        report.candidate_edges,
        report.residual_edges,
        report.consumed_links,
        report.table.len()
    );
    Ok(())
}

pub fn cmd_verify(
    config: &RunConfig,
    max_tokens: usize,
    corrupt_production: bool,
) -> Result<(), CliError> {
    if max_tokens > MAX_HALF_TOKENS {
        return Err(contradiction(format!(
            "--max-tokens {max_tokens} exceeds the oracle limit of {MAX_HALF_TOKENS}"
        )));
    }
    let loaded = load(config)?;
    for (path, half) in [
        (&config.text1, &loaded.half1),
        (&config.text2, &loaded.half2),
    ] {
        if half.len() > max_tokens {
            return Err(CliError::in_file(
                path,
                format!(
                    "{} tokens, above the verification cap of {max_tokens}",
                    half.len()
                ),
            ));
        }
    }

    let mut produced = production(&loaded)?.table;
    if corrupt_production {
        // Negative control: perturb one count so verification must fail.
        let first: Option<(String, String)> = produced
            .rows()
            .first()
            .map(|(u, v, _)| (u.to_string(), v.to_string()));
        let (u, v) = first.unwrap_or_else(|| ("<corrupt>".into(), "<corrupt>".into()));
        produced.add(&u, &v, 1);
    }

    let expected = match &loaded.model {
        None => CoocTable::new(),
        Some(model) => brute_count_all_filtered(
            model,
            &loaded.half1,
            &loaded.half2,
            loaded.assumption,
            loaded.filters.as_ref(),
        )
        .map_err(|e| match e {
            OracleError::TooLarge { .. } => {
                CliError::Input(format!("verification input too large: {e}"))
            }
            other => CliError::Internal(other.to_string()),
        })?,
    };

    match produced.first_difference(&expected) {
        None => {
            eprintln!(
                "cooc: verified {} type pairs, production equals oracle",
                expected.len()
            );
            Ok(())
        }
        Some((u, v, p, o)) => Err(CliError::Mismatch(format!(
            "mismatch at {u}\t{v}: production {p}, oracle {o}"
        ))),
    }
}

pub fn cmd_check_map(
    map: &Path,
    text1: &Path,
    text2: &Path,
    units: Units,
    pretokenized: bool,
) -> Result<(), CliError> {
    let half1 = inputs::load_half(text1, pretokenized, false)?;
    let half2 = inputs::load_half(text2, pretokenized, false)?;
    let input = inputs::load_map(map, half1.length(units), half2.length(units), units)?;
    println!(
        "{}: {} anchors, max gap {:.3} {units}",
        map.display(),
        input.anchor_count,
        input.max_gap
    );
    Ok(())
}

/// Writes the table to `output` via a temporary file in the same directory,
/// renamed into place only on success; to stdout when no path is given.
fn write_table(table: &CoocTable, output: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = output else {
        let stdout = io::stdout();
        let mut out = BufWriter::new(stdout.lock());
        return table
            .write_tsv(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Input(format!("<stdout>: {e}")));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: io::Error| CliError::in_file(path, e);
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    {
        let mut out = BufWriter::new(tmp.as_file());
        table
            .write_tsv(&mut out)
            .and_then(|_| out.flush())
            .map_err(fail)?;
    }
    tmp.as_file().sync_all().map_err(fail)?;
    let _: File = tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
