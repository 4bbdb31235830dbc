use std::path::Path;

use serde::{Deserialize, Serialize};

use super::features::{featurize, truncate_chars, FeatureConfig, SparseVector};
use crate::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub epochs: usize,
    pub examples: usize,
    /// Mean objective over the full training set after each epoch.
    pub epoch_losses: Vec<f64>,
    pub final_loss: f64,
}

/// Softmax regression over hashed features.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineModel {
    pub labels: Vec<String>,
    pub features: FeatureConfig,
    /// Texts are cut to this many characters before featurizing.
    pub max_seq_len: usize,
    pub num_features: usize,
    /// Row-major `[labels.len() × num_features]`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub meta: Option<TrainingMeta>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Gradient {
    pub fn zeros_like(model: &BaselineModel) -> Self {
        Self {
            weights: vec![0.0; model.weights.len()],
            bias: vec![0.0; model.bias.len()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: String,
    pub probabilities: Vec<f64>,
}

pub fn softmax_in_place(logits: &mut [f64]) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for z in logits.iter_mut() {
        *z = (*z - max).exp();
        sum += *z;
    }
    for z in logits.iter_mut() {
        *z /= sum;
    }
}

/// Index of the first maximum.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl BaselineModel {
    pub fn zeros(labels: Vec<String>, features: FeatureConfig, max_seq_len: usize) -> Self {
        let dim = features.hash_dim;
        let mut m = Self::with_dim(labels, dim);
        m.features = features;
        m.max_seq_len = max_seq_len;
        m
    }

    /// A zero model over an arbitrary feature width, bypassing the hashing
    /// configuration. Useful for small numerical checks.
    pub fn with_dim(labels: Vec<String>, num_features: usize) -> Self {
        let k = labels.len();
        Self {
            labels,
            features: FeatureConfig {
                hash_dim: num_features,
                ..Default::default()
            },
            max_seq_len: usize::MAX,
            num_features,
            weights: vec![0.0; k * num_features],
            bias: vec![0.0; k],
            meta: None,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn logits(&self, x: &SparseVector) -> Vec<f64> {
        let d = self.num_features;
        (0..self.num_classes())
            .map(|k| {
                let row = &self.weights[k * d..(k + 1) * d];
                self.bias[k] + x.iter().map(|(j, v)| row[j] * v).sum::<f64>()
            })
            .collect()
    }

    pub fn probabilities(&self, x: &SparseVector) -> Vec<f64> {
        let mut z = self.logits(x);
        softmax_in_place(&mut z);
        z
    }

    pub fn featurize(&self, text: &str) -> SparseVector {
        featurize(truncate_chars(text, self.max_seq_len), &self.features)
    }

    pub fn predict(&self, text: &str) -> Prediction {
        let probabilities = self.probabilities(&self.featurize(text));
        Prediction {
            label: self.labels[argmax(&probabilities)].clone(),
            probabilities,
        }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// Writes the batch gradient into `grad` (overwriting it) and returns the
    /// objective: mean cross-entropy plus `l2 / 2 · ‖W‖²`. The bias is not
    /// regularized.
    pub fn gradient_into(
        &self,
        batch: &[(&SparseVector, usize)],
        l2: f64,
        grad: &mut Gradient,
    ) -> f64 {
        let d = self.num_features;
        let scale = 1.0 / batch.len().max(1) as f64;
        if l2 == 0.0 {
            grad.weights.fill(0.0);
        } else {
            for (g, w) in grad.weights.iter_mut().zip(&self.weights) {
                *g = l2 * w;
            }
        }
        grad.bias.fill(0.0);
        let mut ce = 0.0;
        for &(x, y) in batch {
            let p = self.probabilities(x);
            ce -= p[y].max(f64::MIN_POSITIVE).ln();
            for (k, &pk) in p.iter().enumerate() {
                let delta = (pk - if k == y { 1.0 } else { 0.0 }) * scale;
                grad.bias[k] += delta;
                let row = &mut grad.weights[k * d..(k + 1) * d];
                for (j, v) in x.iter() {
                    row[j] += delta * v;
                }
            }
        }
        ce * scale + 0.5 * l2 * self.l2_norm_sq()
    }

    pub fn loss_and_gradient(&self, batch: &[(&SparseVector, usize)], l2: f64) -> (f64, Gradient) {
        let mut grad = Gradient::zeros_like(self);
        let loss = self.gradient_into(batch, l2, &mut grad);
        (loss, grad)
    }

    /// Objective without the gradient.
    pub fn loss(&self, batch: &[(&SparseVector, usize)], l2: f64) -> f64 {
        let ce: f64 = batch
            .iter()
            .map(|&(x, y)| -self.probabilities(x)[y].max(f64::MIN_POSITIVE).ln())
            .sum();
        ce / batch.len().max(1) as f64 + 0.5 * l2 * self.l2_norm_sq()
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.bias).all(|v| v.is_finite())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = ModelFile::from(self);
        let text = serde_json::to_string(&file)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&ModelFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }
}

/// On-disk container. Weight rows are stored sparsely as
/// `[feature_index, value]` pairs; absent entries are zero.
#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    labels: Vec<String>,
    features: FeatureConfig,
    max_seq_len: usize,
    num_features: usize,
    bias: Vec<f64>,
    weights: Vec<Vec<(u32, f64)>>,
    meta: Option<TrainingMeta>,
}

impl From<&BaselineModel> for ModelFile {
    fn from(m: &BaselineModel) -> Self {
        let d = m.num_features;
        let weights = (0..m.num_classes())
            .map(|k| {
                m.weights[k * d..(k + 1) * d]
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(j, &w)| (j as u32, w))
                    .collect()
            })
            .collect();
        Self {
            format_version: MODEL_FORMAT_VERSION,
            labels: m.labels.clone(),
            features: m.features.clone(),
            max_seq_len: m.max_seq_len,
            num_features: d,
            bias: m.bias.clone(),
            weights,
            meta: m.meta.clone(),
        }
    }
}

impl ModelFile {
    fn into_model(self) -> Result<BaselineModel> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelVersion(self.format_version));
        }
        let k = self.labels.len();
        let d = self.num_features;
        if self.bias.len() != k || self.weights.len() != k {
            return Err(Error::Invalid(
                "model file: shape does not match label count".into(),
            ));
        }
        let mut weights = vec![0.0; k * d];
        for (row, entries) in self.weights.iter().enumerate() {
            for &(j, w) in entries {
                let j = j as usize;
                if j >= d {
                    return Err(Error::Invalid(format!(
                        "model file: feature index {j} out of range"
                    )));
                }
                weights[row * d + j] = w;
            }
        }
        let model = BaselineModel {
            labels: self.labels,
            features: self.features,
            max_seq_len: self.max_seq_len,
            num_features: d,
            weights,
            bias: self.bias,
            meta: self.meta,
        };
        if !model.is_finite() {
            return Err(Error::Invalid("model file: non-finite parameters".into()));
        }
        Ok(model)
    }
}
