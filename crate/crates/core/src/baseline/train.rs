use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::features::{featurize, truncate_chars, FeatureConfig, SparseVector};
use super::model::{BaselineModel, Gradient, TrainingMeta};
use super::HyperParams;
use crate::dataset::{LabeledDataset, Task, TextField};
use crate::metrics::{confusion_matrix, EvalReport};
use crate::{Error, Result};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;

struct Adam {
    m: Gradient,
    v: Gradient,
    t: i32,
}

impl Adam {
    fn new(model: &BaselineModel) -> Self {
        Self {
            m: Gradient::zeros_like(model),
            v: Gradient::zeros_like(model),
            t: 0,
        }
    }

    fn step(&mut self, model: &mut BaselineModel, g: &Gradient, lr: f64, eps: f64) {
        self.t += 1;
        let c1 = 1.0 - BETA1.powi(self.t);
        let c2 = 1.0 - BETA2.powi(self.t);
        let update = |params: &mut [f64], grad: &[f64], m: &mut [f64], v: &mut [f64]| {
            for (((w, &g), m), v) in params
                .iter_mut()
                .zip(grad)
                .zip(m.iter_mut())
                .zip(v.iter_mut())
            {
                *m = BETA1 * *m + (1.0 - BETA1) * g;
                *v = BETA2 * *v + (1.0 - BETA2) * g * g;
                *w -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
            }
        };
        update(
            &mut model.weights,
            &g.weights,
            &mut self.m.weights,
            &mut self.v.weights,
        );
        update(&mut model.bias, &g.bias, &mut self.m.bias, &mut self.v.bias);
    }
}

/// Fits a model on `(text, label)` pairs. `labels` fixes the class order;
/// every training label must belong to it.
pub fn train<S: AsRef<str> + Sync>(
    examples: &[(S, S)],
    labels: &[&str],
    hyper: &HyperParams,
    features: &FeatureConfig,
) -> Result<BaselineModel> {
    hyper.validate()?;
    features.validate()?;
    if examples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut ys = Vec::with_capacity(examples.len());
    for (_, label) in examples {
        let label = label.as_ref();
        let y = labels
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        ys.push(y);
    }
    if ys.iter().all(|&y| y == ys[0]) {
        return Err(Error::SingleLabel);
    }

    let xs: Vec<SparseVector> = examples
        .par_iter()
        .map(|(text, _)| featurize(truncate_chars(text.as_ref(), hyper.max_seq_len), features))
        .collect();
    let data: Vec<(&SparseVector, usize)> = xs.iter().zip(ys.iter().copied()).collect();

    let mut model = BaselineModel::zeros(
        labels.iter().map(|l| l.to_string()).collect(),
        features.clone(),
        hyper.max_seq_len,
    );
    let mut adam = Adam::new(&model);
    let mut grad = Gradient::zeros_like(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut epoch_losses = Vec::with_capacity(hyper.epochs);
    let mut batch = Vec::with_capacity(hyper.batch_size);

    // linear decay to zero over the whole run
    let total_steps = (hyper.epochs * data.len().div_ceil(hyper.batch_size)) as f64;
    let mut step = 0usize;
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(hyper.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| data[i]));
            model.gradient_into(&batch, hyper.l2_lambda, &mut grad);
            let lr = hyper.learning_rate * (1.0 - step as f64 / total_steps);
            adam.step(&mut model, &grad, lr, hyper.adam_epsilon);
            step += 1;
        }
        let loss = model.loss(&data, hyper.l2_lambda);
        if !loss.is_finite() || !model.is_finite() {
            return Err(Error::Invalid("training diverged: non-finite loss".into()));
        }
        epoch_losses.push(loss);
    }

    model.meta = Some(TrainingMeta {
        seed: hyper.seed,
        epochs: hyper.epochs,
        examples: data.len(),
        final_loss: *epoch_losses.last().unwrap_or(&f64::NAN),
        epoch_losses,
    });
    Ok(model)
}

/// `(text, label)` pairs for one task, reading the chosen text field.
pub fn task_examples(
    ds: &LabeledDataset,
    task: Task,
    field: TextField,
) -> Result<Vec<(&str, &str)>> {
    ds.records
        .iter()
        .map(|r| {
            let text = r
                .field(field)
                .ok_or_else(|| Error::Invalid(format!("record {} has no {field:?} text", r.id)))?;
            Ok((text, r.label(task)))
        })
        .collect()
}

pub fn train_task(
    ds: &LabeledDataset,
    task: Task,
    field: TextField,
    hyper: &HyperParams,
    features: &FeatureConfig,
) -> Result<BaselineModel> {
    let examples = task_examples(ds, task, field)?;
    train(&examples, task.labels(), hyper, features)
}

pub fn predict_texts<S: AsRef<str> + Sync>(model: &BaselineModel, texts: &[S]) -> Vec<String> {
    texts
        .par_iter()
        .map(|t| model.predict(t.as_ref()).label)
        .collect()
}

pub fn evaluate(
    model: &BaselineModel,
    dev: &LabeledDataset,
    task: Task,
    field: TextField,
) -> Result<EvalReport> {
    let examples = task_examples(dev, task, field)?;
    let texts: Vec<&str> = examples.iter().map(|e| e.0).collect();
    let gold: Vec<&str> = examples.iter().map(|e| e.1).collect();
    let pred = predict_texts(model, &texts);
    let m = confusion_matrix(&gold, &pred, task.labels())?;
    EvalReport::from_matrix(&m, task)
}

/// Most frequent training label; ties go to the earlier label in task order.
pub fn majority_label(ds: &LabeledDataset, task: Task) -> Result<&'static str> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &ds.records {
        *counts.entry(r.label(task)).or_default() += 1;
    }
    let mut best = task.labels()[0];
    for &l in task.labels() {
        if counts.get(l).copied().unwrap_or(0) > counts.get(best).copied().unwrap_or(0) {
            best = l;
        }
    }
    Ok(best)
}

/// Scores a predictor that always outputs `label`.
pub fn evaluate_constant(dev: &LabeledDataset, task: Task, label: &str) -> Result<EvalReport> {
    let gold: Vec<&str> = dev.records.iter().map(|r| r.label(task)).collect();
    let pred = vec![label; gold.len()];
    let m = confusion_matrix(&gold, &pred, task.labels())?;
    EvalReport::from_matrix(&m, task)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Vec<(String, String)> {
        let mut v = Vec::new();
        for i in 0..12 {
            v.push((format!("رائع جميل ممتاز {i}"), "POS".to_string()));
            v.push((format!("سيء مزعج فاشل {i}"), "NEG".to_string()));
        }
        v
    }

    #[test]
    fn fits_a_trivial_problem() {
        let data = toy();
        let hp = HyperParams {
            epochs: 5,
            ..Default::default()
        };
        let m = train(
            &data,
            &["POS", "NEG", "NEU"],
            &hp,
            &FeatureConfig::default(),
        )
        .unwrap();
        for (t, l) in &data {
            assert_eq!(&m.predict(t).label, l);
        }
        let losses = &m.meta.as_ref().unwrap().epoch_losses;
        assert_eq!(losses.len(), 5);
        assert!(losses[4] < losses[0]);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let hp = HyperParams::default();
        let cfg = FeatureConfig::default();
        let empty: Vec<(&str, &str)> = Vec::new();
        assert!(matches!(
            train(&empty, &["A", "B"], &hp, &cfg),
            Err(Error::EmptyDataset)
        ));
        let one = [("x", "A"), ("y", "A")];
        assert!(matches!(
            train(&one, &["A", "B"], &hp, &cfg),
            Err(Error::SingleLabel)
        ));
        let bad = [("x", "A"), ("y", "C")];
        assert!(matches!(
            train(&bad, &["A", "B"], &hp, &cfg),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn hyperparameter_validation() {
        assert!(HyperParams::default().validate().is_ok());
        assert!(HyperParams {
            learning_rate: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(HyperParams {
            batch_size: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(HyperParams {
            l2_lambda: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
