//! `cooc`: word-type co-occurrence counts for a bitext.

mod error;
mod inputs;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cooc_core::{CountingAssumption, Units};

use crate::error::CliError;
use crate::run::{Mode, RawOptions, RunConfig};

#[derive(Parser)]
#[command(
    name = "cooc",
    version,
    about = "Word-type co-occurrence counts for a bitext"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count co-occurrences and write the table as TSV.
    Count(CountArgs),
    /// Validate an anchor file against two texts.
    CheckMap(CheckMapArgs),
    /// Compare production counts with the exhaustive oracle on small inputs.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Distance,
    Boundary,
    Combined,
}

#[derive(Args)]
struct TextArgs {
    /// First half of the bitext (x axis).
    text1: PathBuf,
    /// Second half of the bitext (y axis).
    text2: PathBuf,
    /// Read `token<TAB>start<TAB>end[<TAB>segment]` files instead of raw text.
    #[arg(long)]
    pretokenized: bool,
    /// Axis units for the map and token coordinates: characters or tokens.
    #[arg(long, default_value_t = Units::Characters)]
    units: Units,
}

#[derive(Args)]
struct ModelArgs {
    #[command(flatten)]
    texts: TextArgs,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Anchor file, `x<TAB>y` per line.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Tokens co-occur when their point lies closer than this to the map.
    #[arg(long)]
    delta: Option<f64>,
    /// Alignment file, `i,j,...<TAB>k,l,...` per block.
    #[arg(long)]
    alignment: Option<PathBuf>,
    /// naive, at-most-one or at-least-one.
    #[arg(long, default_value_t = CountingAssumption::AtMostOne)]
    assumption: CountingAssumption,
    /// Bilingual dictionary, `word1<TAB>word2` per line.
    #[arg(long)]
    mrbd: Option<PathBuf>,
    /// POS tags for text1, one line per segment.
    #[arg(long)]
    pos1: Option<PathBuf>,
    /// POS tags for text2, one line per segment.
    #[arg(long)]
    pos2: Option<PathBuf>,
    /// Compatible tag pairs, `tag1<TAB>tag2` per line; identity when absent.
    #[arg(long)]
    pos_compat: Option<PathBuf>,
    /// Enable the cognate filter.
    #[arg(long)]
    cognate: bool,
    /// Minimum LCSR for cognates [default: 0.58].
    #[arg(long)]
    cognate_threshold: Option<f64>,
    /// Minimum length of both words for cognates [default: 4].
    #[arg(long)]
    cognate_min_length: Option<usize>,
    /// Comma-separated filter order [default: pos,mrbd,cognate].
    #[arg(long)]
    filter_order: Option<String>,
    /// Case-fold word types (spans are unaffected).
    #[arg(long)]
    fold_case: bool,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckMapArgs {
    #[command(flatten)]
    texts: TextArgs,
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Largest half, in tokens, to verify.
    #[arg(long, default_value_t = 200)]
    max_tokens: usize,
    /// Perturb the production table so verification fails.
    #[arg(long, hide = true)]
    corrupt_production: bool,
}

impl ModelArgs {
    fn into_config(self, output: Option<PathBuf>) -> Result<RunConfig, CliError> {
        RunConfig::validate(RawOptions {
            text1: self.texts.text1,
            text2: self.texts.text2,
            pretokenized: self.texts.pretokenized,
            fold_case: self.fold_case,
            mode: Some(match self.mode {
                ModeArg::Distance => Mode::Distance,
                ModeArg::Boundary => Mode::Boundary,
                ModeArg::Combined => Mode::Combined,
            }),
            map: self.map,
            delta: self.delta,
            units: self.texts.units,
            alignment: self.alignment,
            assumption: self.assumption,
            mrbd: self.mrbd,
            pos1: self.pos1,
            pos2: self.pos2,
            pos_compat: self.pos_compat,
            cognate: self.cognate,
            cognate_threshold: self.cognate_threshold,
            cognate_min_length: self.cognate_min_length,
            filter_order: self.filter_order,
            output,
        })
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Count(args) => run::cmd_count(&args.model.into_config(args.output)?),
        Command::CheckMap(args) => run::cmd_check_map(
            &args.map,
            &args.texts.text1,
            &args.texts.text2,
            args.texts.units,
            args.texts.pretokenized,
        ),
        Command::Verify(args) => {
            let config = args.model.into_config(None)?;
            run::cmd_verify(&config, args.max_tokens, args.corrupt_production)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit with clap's status 2, the same as contradictions.
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cooc: {e}");
            e.exit_code()
        }
    }
}
