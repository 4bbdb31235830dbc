use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single rejected CSV row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// 1-based data row number (the header is row 0).
    pub row: usize,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: invalid UTF-8", path.display())]
    Utf8 { path: PathBuf, line: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("empty lexicon: {}", .0.display())]
    EmptyLexicon(PathBuf),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("{} rejected row(s): {}", .0.len(), join_rows(.0))]
    BadRows(Vec<RowError>),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid split ratio {0}: must lie strictly between 0 and 1")]
    InvalidRatio(f64),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("length mismatch: {gold} gold labels vs {pred} predictions")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label set {found:?} does not match the {task} task")]
    LabelSet { task: String, found: Vec<String> },
    #[error("no class has non-zero support")]
    ZeroSupport,
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("training data needs at least two distinct labels")]
    SingleLabel,
    #[error("malformed segmentation: {0}")]
    Segmentation(String),
    #[error("unsupported model format version {0}")]
    ModelVersion(u32),
    #[error("{0}")]
    Invalid(String),
}

fn join_rows(rows: &[RowError]) -> String {
    rows.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
