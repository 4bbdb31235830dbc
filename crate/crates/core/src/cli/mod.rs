//! Batch command-line interface.
//!
//! Stages exchange JSONL files. Every command that writes a file also writes
//! `<file>.manifest.json` describing the run. Exit status is 0 on success,
//! 1 for data or validation failures and 2 for usage errors.

mod manifest;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use manifest::{manifest_path, read_manifest, ManifestBuilder, RunManifest};

use crate::baseline::{self, BaselineModel, FeatureConfig, HyperParams};
use crate::config::{ConfigFile, CONFIG_ENV};
use crate::dataset::{
    self, ColumnSchema, LabeledDataset, Task, TextField, DEFAULT_RATIO, DEFAULT_SEED,
};
use crate::metrics::{self, EvalReport, ReportFormat};
use crate::normalizer::{self, NormalizationConfig};
use crate::segmenter::{CliticRules, Lexicon, Segmenter};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "arsarc",
    version,
    about = "Arabic sarcasm/sentiment corpus toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize tweets from CSV or JSONL into JSONL with raw and normalized text.
    Normalize(NormalizeArgs),
    /// Add a clitic-segmented field to each record.
    Segment(SegmentArgs),
    /// Stratified train/dev split.
    Split(SplitArgs),
    /// Train the baseline classifier for one task.
    Train(TrainArgs),
    /// Write per-record predictions.
    Predict(PredictArgs),
    /// Score a model or a predictions file against gold labels.
    Evaluate(EvaluateArgs),
    /// Label distribution of a dataset.
    Stats(StatsArgs),
    /// Render a saved evaluation report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TaskArg {
    Sarcasm,
    Sentiment,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Task {
        match t {
            TaskArg::Sarcasm => Task::Sarcasm,
            TaskArg::Sentiment => Task::Sentiment,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FieldArg {
    Raw,
    Normalized,
    Segmented,
    Best,
}

impl From<FieldArg> for TextField {
    fn from(f: FieldArg) -> TextField {
        match f {
            FieldArg::Raw => TextField::Raw,
            FieldArg::Normalized => TextField::Normalized,
            FieldArg::Segmented => TextField::Segmented,
            FieldArg::Best => TextField::Best,
        }
    }
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// key=value configuration file.
    #[arg(long, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Stem list, one per line. Defaults to the built-in lexicon.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Training-portion output.
    #[arg(long)]
    pub train: PathBuf,
    /// Dev-portion output.
    #[arg(long)]
    pub dev: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RATIO)]
    pub ratio: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    #[arg(long, default_value_t = HyperParams::default().learning_rate)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = HyperParams::default().adam_epsilon)]
    pub adam_epsilon: f64,
    #[arg(long, default_value_t = HyperParams::default().batch_size)]
    pub batch_size: usize,
    #[arg(long, default_value_t = HyperParams::default().max_seq_len)]
    pub max_seq_len: usize,
    #[arg(long, default_value_t = HyperParams::default().epochs)]
    pub epochs: usize,
    #[arg(long, default_value_t = HyperParams::default().l2_lambda)]
    pub l2_lambda: f64,
    #[arg(long, default_value_t = HyperParams::default().seed)]
    pub seed: u64,
    /// Hashed feature space size (power of two).
    #[arg(long, default_value_t = FeatureConfig::default().hash_dim)]
    pub hash_dim: usize,
}

impl HyperArgs {
    fn hyper(&self) -> HyperParams {
        HyperParams {
            learning_rate: self.learning_rate,
            adam_epsilon: self.adam_epsilon,
            batch_size: self.batch_size,
            max_seq_len: self.max_seq_len,
            epochs: self.epochs,
            l2_lambda: self.l2_lambda,
            seed: self.seed,
        }
    }

    fn features(&self) -> FeatureConfig {
        FeatureConfig {
            hash_dim: self.hash_dim,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the model.
    #[arg(long, alias = "output")]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub task: TaskArg,
    #[arg(long, value_enum, default_value = "best")]
    pub field: FieldArg,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "best")]
    pub field: FieldArg,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Gold-labelled dataset.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub task: TaskArg,
    /// Score this model on the input.
    #[arg(
        long,
        conflicts_with = "predictions",
        required_unless_present = "predictions"
    )]
    pub model: Option<PathBuf>,
    /// Score a predictions file (as written by `predict`), matched by position.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "best")]
    pub field: FieldArg,
    /// Report JSON destination.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Format printed to stdout.
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Restrict to one task; both are shown otherwise.
    #[arg(long, value_enum)]
    pub task: Option<TaskArg>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report JSON written by `evaluate`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
}

/// One line of `predict` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub id: u64,
    pub label: String,
    pub probabilities: BTreeMap<String, f64>,
}

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_)
            | Error::MissingColumn(_)
            | Error::InvalidRatio(_)
            | Error::LengthMismatch { .. }
            | Error::EmptyLexicon(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `std::env::args` and runs the command; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("arsarc: {}", f.message);
            f.code
        }
    }
}

pub fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Normalize(a) => cmd_normalize(&a),
        Command::Segment(a) => cmd_segment(&a),
        Command::Split(a) => cmd_split(&a),
        Command::Train(a) => cmd_train(&a),
        Command::Predict(a) => cmd_predict(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Stats(a) => cmd_stats(&a),
        Command::Report(a) => cmd_report(&a),
    }
}

fn known_keys() -> Vec<&'static str> {
    normalizer::CONFIG_KEYS
        .iter()
        .chain(dataset::SCHEMA_KEYS)
        .copied()
        .collect()
}

fn load_config(arg: &ConfigArg) -> Result<(ConfigFile, Option<PathBuf>)> {
    let Some(path) = &arg.config else {
        return Ok((ConfigFile::default(), None));
    };
    let cfg = ConfigFile::load(path).map_err(|e| match e {
        Error::Io { .. } => Error::Config(e.to_string()),
        other => other,
    })?;
    cfg.check_known(&known_keys())?;
    Ok((cfg, Some(path.clone())))
}

fn normalization_config(cfg: &ConfigFile, path: Option<&Path>) -> Result<NormalizationConfig> {
    let base = path.and_then(Path::parent);
    NormalizationConfig::from_config(cfg, base)
}

fn load_dataset(path: &Path, cfg: &ConfigFile) -> Result<LabeledDataset> {
    dataset::load(path, &ColumnSchema::from_config(cfg))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn record_config_source(m: &mut ManifestBuilder, path: &Option<PathBuf>, cfg: &ConfigFile) {
    m.config(
        "config_file",
        path.as_ref().map(|p| p.display().to_string()),
    );
    let entries: BTreeMap<&str, &str> = cfg.keys().map(|k| (k, cfg.get(k).unwrap_or(""))).collect();
    m.config("config_entries", entries);
}

fn cmd_normalize(a: &NormalizeArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("normalize");
    let (cfg, cfg_path) = load_config(&a.config)?;
    let ncfg = normalization_config(&cfg, cfg_path.as_deref())?;
    let mut ds = load_dataset(&a.input, &cfg)?;
    let texts: Vec<&str> = ds.records.iter().map(|r| r.text.as_str()).collect();
    let out = normalizer::normalize_batch(&texts, &ncfg);
    for (rec, n) in ds.records.iter_mut().zip(out) {
        rec.normalized = Some(n.normalized);
        rec.segmented = None;
    }
    dataset::export_jsonl(&ds, &a.output, true)?;

    record_config_source(&mut m, &cfg_path, &cfg);
    m.config("normalization", &ncfg)
        .config("schema", ColumnSchema::from_config(&cfg))
        .config("records", ds.len())
        .input(&a.input)
        .output(&a.output);
    m.finish(&a.output)?;
    Ok(())
}

fn cmd_segment(a: &SegmentArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("segment");
    let (cfg, cfg_path) = load_config(&a.config)?;
    let ncfg = normalization_config(&cfg, cfg_path.as_deref())?;
    let lexicon = match &a.lexicon {
        Some(p) => Lexicon::load(p).map_err(|e| match e {
            Error::Io { .. } | Error::Utf8 { .. } => Failure::usage(format!("lexicon: {e}")),
            other => other.into(),
        })?,
        None => Lexicon::builtin(),
    };
    let rules = CliticRules::default();
    let placeholders: Vec<&str> = ncfg.placeholders().iter().map(|(_, p)| *p).collect();
    let segmenter = Segmenter::new(&rules, &lexicon).with_protected(&placeholders);

    let mut ds = load_dataset(&a.input, &cfg)?;
    {
        use rayon::prelude::*;
        ds.records.par_iter_mut().for_each(|r| {
            let source = r.normalized.as_deref().unwrap_or(&r.text);
            r.segmented = Some(segmenter.segment_text(source));
        });
    }
    dataset::export_jsonl(&ds, &a.output, true)?;

    record_config_source(&mut m, &cfg_path, &cfg);
    m.config("lexicon", lexicon.source())
        .config("lexicon_size", lexicon.len())
        .config("rules", &rules)
        .config("records", ds.len())
        .input(&a.input)
        .output(&a.output);
    if let Some(p) = &a.lexicon {
        m.input(p);
    }
    m.finish(&a.output)?;
    Ok(())
}

fn cmd_split(a: &SplitArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("split");
    if !(a.ratio > 0.0 && a.ratio < 1.0) {
        return Err(Error::InvalidRatio(a.ratio).into());
    }
    let (cfg, cfg_path) = load_config(&a.config)?;
    let ds = load_dataset(&a.input, &cfg)?;
    let split = dataset::stratified_split(&ds, a.ratio, a.seed)?;
    dataset::export_jsonl(&split.train, &a.train, true)?;
    dataset::export_jsonl(&split.dev, &a.dev, true)?;

    record_config_source(&mut m, &cfg_path, &cfg);
    m.config("ratio", a.ratio)
        .config("train_records", split.train.len())
        .config("dev_records", split.dev.len())
        .seed(a.seed)
        .input(&a.input)
        .output(&a.train)
        .output(&a.dev);
    m.finish(&a.train)?;
    m.finish(&a.dev)?;
    Ok(())
}

fn cmd_train(a: &TrainArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("train");
    let (cfg, cfg_path) = load_config(&a.config)?;
    let hyper = a.hyper.hyper();
    let features = a.hyper.features();
    hyper.validate()?;
    features.validate()?;
    let ds = load_dataset(&a.input, &cfg)?;
    let task: Task = a.task.into();
    let model = baseline::train_task(&ds, task, a.field.into(), &hyper, &features)?;
    model.save(&a.model)?;

    record_config_source(&mut m, &cfg_path, &cfg);
    m.config("task", task)
        .config("field", TextField::from(a.field))
        .config("hyper", &hyper)
        .config("features", &features)
        .config("final_loss", model.meta.as_ref().map(|x| x.final_loss))
        .seed(hyper.seed)
        .input(&a.input)
        .output(&a.model);
    m.finish(&a.model)?;
    Ok(())
}

fn cmd_predict(a: &PredictArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("predict");
    let (cfg, cfg_path) = load_config(&a.config)?;
    let model = BaselineModel::load(&a.model)?;
    let ds = load_dataset(&a.input, &cfg)?;
    let field: TextField = a.field.into();
    let texts = ds
        .records
        .iter()
        .map(|r| {
            r.field(field)
                .ok_or_else(|| Error::Invalid(format!("record {} has no {field:?} text", r.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<PredictionRow> = {
        use rayon::prelude::*;
        texts
            .par_iter()
            .map(|t| model.predict(t))
            .collect::<Vec<_>>()
            .into_iter()
            .zip(&ds.records)
            .map(|(p, r)| PredictionRow {
                id: r.id,
                label: p.label,
                probabilities: model.labels.iter().cloned().zip(p.probabilities).collect(),
            })
            .collect()
    };
    write_jsonl(&a.output, &rows)?;

    record_config_source(&mut m, &cfg_path, &cfg);
    m.config("field", field)
        .config("labels", &model.labels)
        .config("records", rows.len())
        .input(&a.model)
        .input(&a.input)
        .output(&a.output);
    m.finish(&a.output)?;
    Ok(())
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line)
            .map_err(|e| Error::Invalid(format!("{}:{}: {e}", path.display(), idx + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

fn cmd_evaluate(a: &EvaluateArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("evaluate");
    let (cfg, cfg_path) = load_config(&a.config)?;
    let ds = load_dataset(&a.input, &cfg)?;
    let task: Task = a.task.into();
    m.input(&a.input);
    let report = if let Some(model_path) = &a.model {
        let model = BaselineModel::load(model_path)?;
        m.input(model_path);
        baseline::evaluate(&model, &ds, task, a.field.into())?
    } else {
        let path = a
            .predictions
            .as_ref()
            .expect("clap enforces model or predictions");
        let preds = read_predictions(path)?;
        m.input(path);
        if preds.len() != ds.len() {
            return Err(Error::LengthMismatch {
                gold: ds.len(),
                pred: preds.len(),
            }
            .into());
        }
        if let Some((r, p)) = ds.records.iter().zip(&preds).find(|(r, p)| r.id != p.id) {
            return Err(Error::Invalid(format!(
                "prediction id {} does not match gold id {}",
                p.id, r.id
            ))
            .into());
        }
        let gold: Vec<&str> = ds.records.iter().map(|r| r.label(task)).collect();
        let pred: Vec<&str> = preds.iter().map(|p| p.label.as_str()).collect();
        let cm = metrics::confusion_matrix(&gold, &pred, task.labels())?;
        EvalReport::from_matrix(&cm, task)?
    };
    print!("{}", metrics::report(&report, a.format.into()));
    if let Some(out) = &a.output {
        write_text(out, &metrics::report(&report, ReportFormat::Json))?;
        record_config_source(&mut m, &cfg_path, &cfg);
        m.config("task", task)
            .config("field", TextField::from(a.field))
            .output(out);
        m.finish(out)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Stats {
    records: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sarcasm: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sentiment: Option<BTreeMap<String, usize>>,
}

fn render_stats(stats: &Stats, format: ReportFormat) -> Result<String> {
    if format == ReportFormat::Json {
        let mut s = serde_json::to_string_pretty(stats)?;
        s.push('\n');
        return Ok(s);
    }
    let mut out = format!("records {}\n", stats.records);
    for (task, dist) in [
        (Task::Sarcasm, &stats.sarcasm),
        (Task::Sentiment, &stats.sentiment),
    ] {
        let Some(dist) = dist else { continue };
        out.push_str(&format!("\n{task}\n"));
        for &label in task.labels() {
            out.push_str(&format!(
                "{label} {}\n",
                dist.get(label).copied().unwrap_or(0)
            ));
        }
    }
    Ok(out)
}

fn cmd_stats(a: &StatsArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("stats");
    let (cfg, cfg_path) = load_config(&a.config)?;
    let ds = load_dataset(&a.input, &cfg)?;
    let wants = |t: Task| a.task.is_none_or(|x| Task::from(x) == t);
    let stats = Stats {
        records: ds.len(),
        sarcasm: wants(Task::Sarcasm).then(|| dataset::class_distribution(&ds, Task::Sarcasm)),
        sentiment: wants(Task::Sentiment)
            .then(|| dataset::class_distribution(&ds, Task::Sentiment)),
    };
    print!("{}", render_stats(&stats, a.format.into())?);
    if let Some(out) = &a.output {
        write_text(out, &render_stats(&stats, ReportFormat::Json)?)?;
        record_config_source(&mut m, &cfg_path, &cfg);
        m.config("task", a.task.map(Task::from))
            .input(&a.input)
            .output(out);
        m.finish(out)?;
    }
    Ok(())
}

fn cmd_report(a: &ReportArgs) -> CmdResult {
    let mut m = ManifestBuilder::start("report");
    let text = std::fs::read_to_string(&a.input).map_err(|e| Error::io(&a.input, e))?;
    let report = EvalReport::from_json(&text)?;
    let rendered = metrics::report(&report, a.format.into());
    print!("{rendered}");
    if let Some(out) = &a.output {
        write_text(out, &rendered)?;
        m.config(
            "format",
            match a.format {
                FormatArg::Table => "table",
                FormatArg::Json => "json",
            },
        )
        .input(&a.input)
        .output(out);
        m.finish(out)?;
    }
    Ok(())
}
