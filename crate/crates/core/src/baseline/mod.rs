//! Hashed n-gram softmax regression, the reference classifier for both
//! tasks.

mod features;
mod model;
mod train;

pub use features::{featurize, truncate_chars, FeatureConfig, SparseVector};
pub use model::{
    argmax, softmax_in_place, BaselineModel, Gradient, Prediction, TrainingMeta,
    MODEL_FORMAT_VERSION,
};
pub use train::{
    evaluate, evaluate_constant, majority_label, predict_texts, task_examples, train, train_task,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub learning_rate: f64,
    pub adam_epsilon: f64,
    pub batch_size: usize,
    /// Characters kept per text.
    pub max_seq_len: usize,
    pub epochs: usize,
    pub l2_lambda: f64,
    pub seed: u64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            adam_epsilon: 1e-8,
            batch_size: 40,
            max_seq_len: 256,
            epochs: 10,
            l2_lambda: 1e-4,
            seed: 42,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("learning_rate", self.learning_rate)?;
        positive("adam_epsilon", self.adam_epsilon)?;
        if !(self.l2_lambda.is_finite() && self.l2_lambda >= 0.0) {
            return Err(Error::Config(format!(
                "l2_lambda must be >= 0, got {}",
                self.l2_lambda
            )));
        }
        for (name, v) in [
            ("batch_size", self.batch_size),
            ("max_seq_len", self.max_seq_len),
            ("epochs", self.epochs),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}
