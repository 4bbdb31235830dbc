//! Labelled tweet datasets: CSV/JSONL loading, stratified splitting, class
//! distributions and JSONL export.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ConfigFile;
use crate::error::RowError;
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RATIO: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sarcasm {
    #[serde(rename = "TRUE")]
    True,
    #[serde(rename = "FALSE")]
    False,
}

impl Sarcasm {
    pub fn as_str(self) -> &'static str {
        match self {
            Sarcasm::True => "TRUE",
            Sarcasm::False => "FALSE",
        }
    }
}

impl FromStr for Sarcasm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "TRUE" => Ok(Sarcasm::True),
            "FALSE" => Ok(Sarcasm::False),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sentiment {
    #[serde(rename = "POS")]
    Pos,
    #[serde(rename = "NEG")]
    Neg,
    #[serde(rename = "NEU")]
    Neu,
}

impl Sentiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Pos => "POS",
            Sentiment::Neg => "NEG",
            Sentiment::Neu => "NEU",
        }
    }
}

impl FromStr for Sentiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "POS" => Ok(Sentiment::Pos),
            "NEG" => Ok(Sentiment::Neg),
            "NEU" => Ok(Sentiment::Neu),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

/// The two shared-task subtasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Sarcasm,
    Sentiment,
}

impl Task {
    /// Label order used by models and confusion matrices.
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Task::Sarcasm => &["TRUE", "FALSE"],
            Task::Sentiment => &["POS", "NEG", "NEU"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Task::Sarcasm => "sarcasm",
            Task::Sentiment => "sentiment",
        }
    }

    /// Row tag in results tables.
    pub fn tag(self) -> &'static str {
        match self {
            Task::Sarcasm => "T_S1",
            Task::Sentiment => "T_S2",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sarcasm" => Ok(Task::Sarcasm),
            "sentiment" => Ok(Task::Sentiment),
            other => Err(Error::Invalid(format!(
                "unknown task `{other}` (expected sarcasm or sentiment)"
            ))),
        }
    }
}

/// One tweet. Field order is the JSONL key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub id: u64,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segmented: Option<String>,
    pub sarcasm: Sarcasm,
    pub sentiment: Sentiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dialect: Option<String>,
}

impl Record {
    pub fn label(&self, task: Task) -> &'static str {
        match task {
            Task::Sarcasm => self.sarcasm.as_str(),
            Task::Sentiment => self.sentiment.as_str(),
        }
    }

    /// The most processed text available: segmented, then normalized, then raw.
    pub fn best_text(&self) -> &str {
        self.segmented
            .as_deref()
            .or(self.normalized.as_deref())
            .unwrap_or(&self.text)
    }

    pub fn field(&self, field: TextField) -> Option<&str> {
        match field {
            TextField::Raw => Some(&self.text),
            TextField::Normalized => self.normalized.as_deref(),
            TextField::Segmented => self.segmented.as_deref(),
            TextField::Best => Some(self.best_text()),
        }
    }
}

/// Which text variant a downstream stage consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextField {
    Raw,
    Normalized,
    Segmented,
    Best,
}

impl FromStr for TextField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" | "text" => Ok(TextField::Raw),
            "normalized" => Ok(TextField::Normalized),
            "segmented" => Ok(TextField::Segmented),
            "best" | "auto" => Ok(TextField::Best),
            other => Err(Error::Invalid(format!("unknown text field `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Seconds since the Unix epoch.
    pub loaded_at: u64,
}

impl Provenance {
    pub fn now(source: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            loaded_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDataset {
    pub records: Vec<Record>,
    pub provenance: Provenance,
}

impl LabeledDataset {
    /// Wraps records, reassigning ids `0..n` in order.
    pub fn from_records(records: Vec<Record>, source: impl Into<String>) -> Self {
        let records = records
            .into_iter()
            .enumerate()
            .map(|(i, r)| Record { id: i as u64, ..r })
            .collect();
        Self {
            records,
            provenance: Provenance::now(source),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.id).collect()
    }
}

/// Column names and sarcasm label spellings for CSV input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub text: String,
    pub sarcasm: String,
    pub sentiment: String,
    pub dialect: Option<String>,
    pub sarcasm_true: String,
    pub sarcasm_false: String,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        Self {
            text: "tweet".into(),
            sarcasm: "sarcasm".into(),
            sentiment: "sentiment".into(),
            dialect: Some("dialect".into()),
            sarcasm_true: "TRUE".into(),
            sarcasm_false: "FALSE".into(),
        }
    }
}

pub const SCHEMA_KEYS: &[&str] = &[
    "column_text",
    "column_sarcasm",
    "column_sentiment",
    "column_dialect",
    "sarcasm_true_value",
    "sarcasm_false_value",
];

impl ColumnSchema {
    pub fn from_config(cfg: &ConfigFile) -> Self {
        let mut s = Self::default();
        let set = |slot: &mut String, key: &str| {
            if let Some(v) = cfg.get(key) {
                *slot = v.to_string();
            }
        };
        set(&mut s.text, "column_text");
        set(&mut s.sarcasm, "column_sarcasm");
        set(&mut s.sentiment, "column_sentiment");
        set(&mut s.sarcasm_true, "sarcasm_true_value");
        set(&mut s.sarcasm_false, "sarcasm_false_value");
        if let Some(v) = cfg.get("column_dialect") {
            s.dialect = (!v.is_empty()).then(|| v.to_string());
        }
        s
    }

    fn parse_sarcasm(&self, value: &str) -> Option<Sarcasm> {
        if value == self.sarcasm_true {
            Some(Sarcasm::True)
        } else if value == self.sarcasm_false {
            Some(Sarcasm::False)
        } else {
            None
        }
    }
}

/// Loads a CSV with a header row. All rows with unparseable labels or empty
/// text are reported together.
pub fn load_csv(path: &Path, schema: &ColumnSchema) -> Result<LabeledDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let headers = reader.headers()?.clone();
    if headers.is_empty() {
        // zero-byte file: nothing to load, and no header to check
        return Ok(LabeledDataset {
            records: Vec::new(),
            provenance: Provenance::now(path.display().to_string()),
        });
    }
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim_start_matches('\u{FEFF}') == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let text_col = column(&schema.text)?;
    let sarcasm_col = column(&schema.sarcasm)?;
    let sentiment_col = column(&schema.sentiment)?;
    let dialect_col = schema.dialect.as_deref().and_then(|d| column(d).ok());

    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let row_no = idx + 1;
        let row = row?;
        let get = |i: usize| row.get(i).unwrap_or("");
        let mut problems = Vec::new();
        let text = get(text_col);
        if text.trim().is_empty() {
            problems.push("empty text".to_string());
        }
        let sarcasm = schema.parse_sarcasm(get(sarcasm_col));
        if sarcasm.is_none() {
            problems.push(format!("bad sarcasm label `{}`", get(sarcasm_col)));
        }
        let sentiment = get(sentiment_col).parse::<Sentiment>().ok();
        if sentiment.is_none() {
            problems.push(format!("bad sentiment label `{}`", get(sentiment_col)));
        }
        match (sarcasm, sentiment) {
            (Some(sarcasm), Some(sentiment)) if problems.is_empty() => records.push(Record {
                id: records.len() as u64,
                text: text.to_string(),
                normalized: None,
                segmented: None,
                sarcasm,
                sentiment,
                dialect: dialect_col
                    .map(|c| get(c).to_string())
                    .filter(|d| !d.is_empty()),
            }),
            _ => errors.push(RowError {
                row: row_no,
                message: problems.join(", "),
            }),
        }
    }
    if !errors.is_empty() {
        return Err(Error::BadRows(errors));
    }
    Ok(LabeledDataset {
        records,
        provenance: Provenance::now(path.display().to_string()),
    })
}

/// Loads JSONL written by [`export_jsonl`]. Ids are kept as written and must
/// be unique.
pub fn load_jsonl(path: &Path) -> Result<LabeledDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Record>(&line) {
            Ok(rec) if !seen.insert(rec.id) => errors.push(RowError {
                row: idx + 1,
                message: format!("duplicate id {}", rec.id),
            }),
            Ok(rec) => records.push(rec),
            Err(e) => errors.push(RowError {
                row: idx + 1,
                message: e.to_string(),
            }),
        }
    }
    if !errors.is_empty() {
        return Err(Error::BadRows(errors));
    }
    Ok(LabeledDataset {
        records,
        provenance: Provenance::now(path.display().to_string()),
    })
}

/// Dispatches on extension: `.csv` goes through [`load_csv`], anything else
/// is read as JSONL.
pub fn load(path: &Path, schema: &ColumnSchema) -> Result<LabeledDataset> {
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        load_csv(path, schema)
    } else {
        load_jsonl(path)
    }
}

/// Writes one JSON object per line. Without `with_normalized` only the raw
/// text and labels are written.
pub fn export_jsonl(ds: &LabeledDataset, path: &Path, with_normalized: bool) -> Result<usize> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for rec in &ds.records {
        let line = if with_normalized {
            serde_json::to_string(rec)?
        } else {
            serde_json::to_string(&Record {
                normalized: None,
                segmented: None,
                ..rec.clone()
            })?
        };
        w.write_all(line.as_bytes())
            .and_then(|_| w.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(ds.records.len())
}

/// Label → count with every label of the task present.
pub fn class_distribution(ds: &LabeledDataset, task: Task) -> BTreeMap<String, usize> {
    let mut counts: BTreeMap<String, usize> =
        task.labels().iter().map(|l| (l.to_string(), 0)).collect();
    for rec in &ds.records {
        *counts.entry(rec.label(task).to_string()).or_default() += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub train: LabeledDataset,
    pub dev: LabeledDataset,
    pub seed: u64,
    pub ratio: f64,
}

/// Per-stratum train quotas: each stratum gets `floor(ratio * size)` plus at
/// most one extra, extras going to the largest fractional parts so the total
/// is exactly `round(ratio * n)`.
pub fn stratum_quotas(sizes: &[usize], ratio: f64) -> Vec<usize> {
    let n: usize = sizes.iter().sum();
    let target = (ratio * n as f64).round() as usize;
    let mut quotas = Vec::with_capacity(sizes.len());
    let mut fracs = Vec::with_capacity(sizes.len());
    for (i, &size) in sizes.iter().enumerate() {
        let exact = ratio * size as f64;
        // absorb representation error such as 0.9 * 10 = 9.000000000000002
        let floor = ((exact + 1e-9).floor() as usize).min(size);
        quotas.push(floor);
        fracs.push((i, (exact - floor as f64).max(0.0)));
    }
    // stable: equal fractions keep stratum order
    fracs.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut extra = target.saturating_sub(quotas.iter().sum());
    for (i, _) in fracs {
        if extra == 0 {
            break;
        }
        if quotas[i] < sizes[i] {
            quotas[i] += 1;
            extra -= 1;
        }
    }
    quotas
}

/// Deterministic split stratified on the joint (sarcasm, sentiment) label.
pub fn stratified_split(ds: &LabeledDataset, ratio: f64, seed: u64) -> Result<SplitResult> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut strata: BTreeMap<(Sarcasm, Sentiment), Vec<usize>> = BTreeMap::new();
    for (idx, rec) in ds.records.iter().enumerate() {
        strata
            .entry((rec.sarcasm, rec.sentiment))
            .or_default()
            .push(idx);
    }
    let sizes: Vec<usize> = strata.values().map(Vec::len).collect();
    let quotas = stratum_quotas(&sizes, ratio);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; ds.len()];
    for (members, quota) in strata.values_mut().zip(quotas) {
        members.shuffle(&mut rng);
        for &idx in &members[..quota] {
            in_train[idx] = true;
        }
    }

    let (train, dev): (Vec<_>, Vec<_>) = ds.records.iter().zip(&in_train).partition(|(_, &t)| t);
    let subset = |part: Vec<(&Record, &bool)>, name: &str| LabeledDataset {
        records: part.into_iter().map(|(r, _)| r.clone()).collect(),
        provenance: Provenance {
            source: format!(
                "{} [{name} seed={seed} ratio={ratio}]",
                ds.provenance.source
            ),
            loaded_at: ds.provenance.loaded_at,
        },
    };
    Ok(SplitResult {
        train: subset(train, "train"),
        dev: subset(dev, "dev"),
        seed,
        ratio,
    })
}
