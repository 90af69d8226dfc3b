//! The `rascal` binary: refine datasets with propositional rules, score
//! and flatten rulesets, and run original-vs-refined learning comparisons.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or rule errors.
//! Output files are written atomically — a failing run never leaves a
//! partial file behind.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use rascal::io::{load_csv, load_uci_molbio, parse_sidecar, save_csv, DataError, DomainOverrides};
use rascal::report::{render_curve_tsv, render_report, render_rules, render_scores_tsv};
use rascal_core::data::Dataset;
use rascal_core::error::Error;
use rascal_core::eval::{run_comparison, ExperimentSpec};
use rascal_core::pipeline::{refine, RefineConfig, Stage, StageError};
use rascal_core::rules::{operationalize, parse_ruleset, validate};
use rascal_core::schema::{Feature, Schema};

#[derive(Parser)]
#[command(
    name = "rascal",
    version,
    about = "Refine nominal-feature datasets with propositional domain rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate rule-guided virtual instances and prune contradicted ones
    Refine(RefineArgs),
    /// Score each operational rule against the dataset and emit the table
    Score(ScoreArgs),
    /// Flatten a ruleset and emit the operational rules in rule syntax
    Operationalize(OperationalizeArgs),
    /// Compare k-NN accuracy on original versus refined training splits
    Eval(EvalArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Header row; nominal columns; one designated class column
    Csv,
    /// UCI molecular-biology lines: label,identifier,sequence
    Uci,
}

#[derive(Args)]
struct DataArgs {
    /// Ruleset file in the rule DSL
    #[arg(long, value_name = "PATH")]
    rules: PathBuf,
    /// Dataset file
    #[arg(long, value_name = "PATH")]
    data: PathBuf,
    /// Dataset format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Class column name (csv format)
    #[arg(long, value_name = "NAME", default_value = "class")]
    class_column: String,
    /// Sidecar schema file overriding inferred domains
    #[arg(long, value_name = "PATH")]
    schema: Option<PathBuf>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Virtual samples to generate, as a fraction of the dataset size
    #[arg(short = 'I', long = "virtual-fraction", value_name = "RATIO", default_value_t = 0.43)]
    virtual_fraction: f64,
    /// Inherent keep-vote of every original instance, in [0,1]
    #[arg(short = 'D', long = "prune-threshold", value_name = "RATIO", default_value_t = 0.6)]
    prune_threshold: f64,
    /// RNG seed
    #[arg(long, value_name = "U64", env = "RASCAL_SEED", default_value_t = 0)]
    seed: u64,
    /// Cap on operational rules produced by DNF expansion
    #[arg(long, value_name = "N", default_value_t = 10_000)]
    max_rules: usize,
    /// Skip the pruning stage
    #[arg(long)]
    no_prune: bool,
    /// Skip virtual-sample generation
    #[arg(long)]
    no_generate: bool,
}

impl ConfigArgs {
    fn to_config(&self) -> RefineConfig {
        RefineConfig {
            virtual_fraction: self.virtual_fraction,
            prune_threshold: self.prune_threshold,
            seed: self.seed,
            max_rules: self.max_rules,
            prune_enabled: !self.no_prune,
            generate_enabled: !self.no_generate,
        }
    }
}

#[derive(Args)]
struct RefineArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Refined dataset output path
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Report path (default: <out>.report.txt)
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Cap on operational rules produced by DNF expansion
    #[arg(long, value_name = "N", default_value_t = 10_000)]
    max_rules: usize,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("schema_source").required(true).multiple(true).args(["data", "schema"])))]
struct OperationalizeArgs {
    /// Ruleset file in the rule DSL
    #[arg(long, value_name = "PATH")]
    rules: PathBuf,
    /// Dataset to infer the schema from
    #[arg(long, value_name = "PATH")]
    data: Option<PathBuf>,
    /// Dataset format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Class column name
    #[arg(long, value_name = "NAME", default_value = "class")]
    class_column: String,
    /// Schema file: domain overrides with --data, the full schema without
    #[arg(long, value_name = "PATH")]
    schema: Option<PathBuf>,
    /// Cap on operational rules produced by DNF expansion
    #[arg(long, value_name = "N", default_value_t = 10_000)]
    max_rules: usize,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Training fractions to sweep, comma-separated, each in (0,1]
    #[arg(long, value_name = "LIST", value_delimiter = ',', default_value = "1.0")]
    fractions: Vec<f64>,
    /// Virtual-fraction values to sweep instead of training fractions
    #[arg(long = "I-sweep", value_name = "LIST", value_delimiter = ',')]
    i_sweep: Vec<f64>,
    /// Trials per sweep point
    #[arg(long, value_name = "N", default_value_t = 20)]
    trials: usize,
    /// Neighbours consulted by the k-NN learner
    #[arg(long, value_name = "N", default_value_t = 3)]
    k: usize,
    /// Train the refined classifier on virtual samples only
    #[arg(long)]
    virtual_only: bool,
    /// Curve output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out_tsv: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum AppError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Data(#[from] DataError),
    #[error("{0}")]
    Stage(#[from] StageError),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Refine(args) => run_refine(args),
        Command::Score(args) => run_score(args),
        Command::Operationalize(args) => run_operationalize(args),
        Command::Eval(args) => run_eval(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(2);
    }
}

fn read_file(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|source| AppError::File { path: path.to_path_buf(), source })
}

fn load_overrides(path: Option<&Path>) -> Result<DomainOverrides, AppError> {
    match path {
        Some(path) => Ok(parse_sidecar(&read_file(path)?)?),
        None => Ok(Vec::new()),
    }
}

fn load_dataset(args: &DataArgs) -> Result<Dataset, AppError> {
    let overrides = load_overrides(args.schema.as_deref())?;
    read_data(&args.data, args.format, &args.class_column, &overrides)
}

fn read_data(
    path: &Path,
    format: Format,
    class_column: &str,
    overrides: &DomainOverrides,
) -> Result<Dataset, AppError> {
    let file = fs::File::open(path)
        .map_err(|source| AppError::File { path: path.to_path_buf(), source })?;
    let reader = BufReader::new(file);
    let dataset = match format {
        Format::Csv => load_csv(reader, class_column, overrides)?,
        Format::Uci => load_uci_molbio(reader, overrides)?,
    };
    Ok(dataset)
}

/// Writes via a temporary file in the same directory, so the destination
/// either keeps its old content or receives the complete new content.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), AppError> {
    let io_err = |source| AppError::File { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), AppError> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_refine(args: RefineArgs) -> Result<(), AppError> {
    let rules_text = read_file(&args.data.rules)?;
    let dataset = load_dataset(&args.data)?;
    let config = args.config.to_config();

    let started = Instant::now();
    let (refined, mut report) = refine(&rules_text, &dataset, &config)?;
    report.elapsed = Some(started.elapsed());

    let mut csv_bytes = Vec::new();
    save_csv(&refined, &mut csv_bytes, true)?;
    let report_text = render_report(&report);

    let report_path = args
        .report
        .unwrap_or_else(|| PathBuf::from(format!("{}.report.txt", args.out.display())));
    write_atomic(&args.out, &csv_bytes)?;
    write_atomic(&report_path, report_text.as_bytes())?;

    println!(
        "{} rules -> {} operational ({} unsatisfiable dropped)",
        report.input_rules, report.operational_rules, report.dropped_unsatisfiable
    );
    println!(
        "{} instances -> {} ({} pruned, {} generated)",
        report.original_instances,
        refined.len(),
        report.pruned,
        report.generated
    );
    println!("wrote {} and {}", args.out.display(), report_path.display());
    Ok(())
}

fn run_score(args: ScoreArgs) -> Result<(), AppError> {
    let rules_text = read_file(&args.data.rules)?;
    let dataset = load_dataset(&args.data)?;
    let config = RefineConfig {
        virtual_fraction: 0.0,
        generate_enabled: false,
        prune_enabled: false,
        max_rules: args.max_rules,
        ..RefineConfig::default()
    };
    let (_, report) = refine(&rules_text, &dataset, &config)?;
    emit(args.out.as_deref(), &render_scores_tsv(&report.scores))
}

/// Reads the sidecar as a complete schema: every line declares a feature in
/// order, except the line naming the class column.
fn schema_from_sidecar(
    overrides: DomainOverrides,
    class_column: &str,
) -> Result<Schema, AppError> {
    let mut features = Vec::new();
    let mut class = None;
    for (name, domain) in overrides {
        if name == class_column {
            class = Some(Feature::new(name, domain));
        } else {
            features.push(Feature::new(name, domain));
        }
    }
    let class = class.ok_or(DataError::ClassColumnMissing(class_column.to_string()))?;
    Ok(Schema::new(features, class).map_err(DataError::Core)?)
}

fn run_operationalize(args: OperationalizeArgs) -> Result<(), AppError> {
    let rules_text = read_file(&args.rules)?;
    let overrides = load_overrides(args.schema.as_deref())?;
    let schema = match &args.data {
        Some(data) => read_data(data, args.format, &args.class_column, &overrides)?
            .schema()
            .clone(),
        None => schema_from_sidecar(overrides, &args.class_column)?,
    };

    let staged = |stage: Stage| move |error: Error| StageError::new(stage, error);
    let ruleset = parse_ruleset(&rules_text, &schema)
        .map_err(|e| staged(Stage::Parse)(Error::Parse(e)))?;
    let diagnostics = validate(&ruleset);
    if !diagnostics.is_empty() {
        return Err(staged(Stage::Validate)(Error::Validation(diagnostics)).into());
    }
    let operational =
        operationalize(&ruleset, args.max_rules).map_err(staged(Stage::Operationalize))?;

    if operational.dropped_unsatisfiable > 0 {
        eprintln!(
            "note: dropped {} unsatisfiable disjunct(s)",
            operational.dropped_unsatisfiable
        );
    }
    emit(args.out.as_deref(), &render_rules(&operational.rules, &schema))
}

fn run_eval(args: EvalArgs) -> Result<(), AppError> {
    let rules_text = read_file(&args.data.rules)?;
    let dataset = load_dataset(&args.data)?;
    let config = args.config.to_config();
    let spec = ExperimentSpec {
        fractions: args.fractions,
        budget_sweep: args.i_sweep,
        trials: args.trials,
        k: args.k,
        seed: args.config.seed,
        virtual_only: args.virtual_only,
    };
    let comparison = run_comparison(&dataset, &rules_text, &config, &spec)?;
    emit(args.out_tsv.as_deref(), &render_curve_tsv(&comparison))
}
