//! Classification metrics: confusion matrices, per-class and averaged
//! precision/recall/F1, accuracy and the official shared-task scores.
//!
//! Any 0/0 ratio is defined as 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::Task;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    /// `counts[gold][pred]`
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = labels.len();
        if counts.len() != k || counts.iter().any(|row| row.len() != k) {
            return Err(Error::Invalid(format!("confusion matrix must be {k}x{k}")));
        }
        Ok(Self { labels, counts })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn true_positives(&self, c: usize) -> u64 {
        self.counts[c][c]
    }

    pub fn false_positives(&self, c: usize) -> u64 {
        (0..self.labels.len())
            .filter(|&g| g != c)
            .map(|g| self.counts[g][c])
            .sum()
    }

    pub fn false_negatives(&self, c: usize) -> u64 {
        (0..self.labels.len())
            .filter(|&p| p != c)
            .map(|p| self.counts[c][p])
            .sum()
    }

    pub fn support(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }
}

/// Counts gold × predicted pairs over an ordered label set.
pub fn confusion_matrix<G, P>(gold: &[G], pred: &[P], labels: &[&str]) -> Result<ConfusionMatrix>
where
    G: AsRef<str>,
    P: AsRef<str>,
{
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let k = labels.len();
    let index = |l: &str| {
        labels
            .iter()
            .position(|x| *x == l)
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))
    };
    let mut counts = vec![vec![0u64; k]; k];
    for (g, p) in gold.iter().zip(pred) {
        counts[index(g.as_ref())?][index(p.as_ref())?] += 1;
    }
    Ok(ConfusionMatrix {
        labels: labels.iter().map(|l| l.to_string()).collect(),
        counts,
    })
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn harmonic_mean(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores(pub Vec<ClassScore>);

impl ClassScores {
    pub fn get(&self, label: &str) -> Option<&ClassScore> {
        self.0.iter().find(|s| s.label == label)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ClassScore> {
        self.0.iter()
    }
}

pub fn per_class_prf(m: &ConfusionMatrix) -> ClassScores {
    ClassScores(
        m.labels
            .iter()
            .enumerate()
            .map(|(c, label)| {
                let tp = m.true_positives(c);
                let precision = ratio(tp, tp + m.false_positives(c));
                let recall = ratio(tp, tp + m.false_negatives(c));
                ClassScore {
                    label: label.clone(),
                    precision,
                    recall,
                    f1: harmonic_mean(precision, recall),
                    support: m.support(c),
                }
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Averaging {
    Weighted,
    Macro,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub p: f64,
    pub r: f64,
    pub f1: f64,
}

pub fn aggregate(scores: &ClassScores, scheme: Averaging) -> Result<Prf> {
    let weights: Vec<f64> = match scheme {
        Averaging::Weighted => scores.iter().map(|s| s.support as f64).collect(),
        Averaging::Macro => vec![1.0; scores.0.len()],
    };
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroSupport);
    }
    let mean = |f: fn(&ClassScore) -> f64| {
        scores
            .iter()
            .zip(&weights)
            .map(|(s, w)| f(s) * w)
            .sum::<f64>()
            / total
    };
    Ok(Prf {
        p: mean(|s| s.precision),
        r: mean(|s| s.recall),
        f1: mean(|s| s.f1),
    })
}

pub fn accuracy(m: &ConfusionMatrix) -> Result<f64> {
    match m.total() {
        0 => Err(Error::EmptyMatrix),
        total => Ok(m.trace() as f64 / total as f64),
    }
}

fn check_label_set(m: &ConfusionMatrix, task: Task) -> Result<()> {
    let expected = task.labels();
    let ok = m.labels.len() == expected.len() && expected.iter().all(|l| m.index_of(l).is_some());
    if ok {
        Ok(())
    } else {
        Err(Error::LabelSet {
            task: task.name().to_string(),
            found: m.labels.clone(),
        })
    }
}

/// F1 of the sarcastic class for the sarcasm task; mean F1 of POS and NEG
/// (F-PN) for the sentiment task.
pub fn official_metric(m: &ConfusionMatrix, task: Task) -> Result<f64> {
    check_label_set(m, task)?;
    let scores = per_class_prf(m);
    let f1 = |label: &str| scores.get(label).map_or(0.0, |s| s.f1);
    Ok(match task {
        Task::Sarcasm => f1("TRUE"),
        Task::Sentiment => (f1("POS") + f1("NEG")) / 2.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub p: f64,
    pub r: f64,
    pub f1: f64,
    pub support: u64,
}

/// Everything reported for one task. `weighted` holds the validation-table
/// P/R/F1; the results table uses the macro P/R next to M-F1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: Task,
    pub official: f64,
    pub accuracy: f64,
    pub weighted: Prf,
    #[serde(rename = "macro")]
    pub macro_avg: Prf,
    pub macro_f1: f64,
    pub per_class: BTreeMap<String, ClassSummary>,
}

impl EvalReport {
    pub fn from_matrix(m: &ConfusionMatrix, task: Task) -> Result<Self> {
        let official = official_metric(m, task)?;
        let scores = per_class_prf(m);
        let macro_avg = aggregate(&scores, Averaging::Macro)?;
        Ok(Self {
            task,
            official,
            accuracy: accuracy(m)?,
            weighted: aggregate(&scores, Averaging::Weighted)?,
            macro_avg,
            macro_f1: macro_avg.f1,
            per_class: scores
                .iter()
                .map(|s| {
                    (
                        s.label.clone(),
                        ClassSummary {
                            p: s.precision,
                            r: s.recall,
                            f1: s.f1,
                            support: s.support,
                        },
                    )
                })
                .collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Values in results-table order: C_E, A, P, R, M-F1.
    pub fn table_values(&self) -> [f64; 5] {
        [
            self.official,
            self.accuracy,
            self.macro_avg.p,
            self.macro_avg.r,
            self.macro_f1,
        ]
    }

    /// The results-table row, percentages with two decimals.
    pub fn table_row(&self) -> String {
        self.table_values()
            .iter()
            .map(|v| format!("{:.2}", v * 100.0))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Invalid(format!("unknown report format `{other}`"))),
        }
    }
}

pub const TABLE_HEADER: &str = "C_E A P R M-F1";

pub fn report(rep: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(rep).expect("report serializes") + "\n",
        ReportFormat::Table => {
            let mut out = format!(
                "task: {} ({})\n{TABLE_HEADER}\n{}\n",
                rep.task,
                rep.task.tag(),
                rep.table_row()
            );
            out.push_str("\nclass P R F1 support\n");
            for (label, s) in &rep.per_class {
                out.push_str(&format!(
                    "{label} {:.2} {:.2} {:.2} {}\n",
                    s.p * 100.0,
                    s.r * 100.0,
                    s.f1 * 100.0,
                    s.support
                ));
            }
            out.push_str(&format!(
                "weighted {:.2} {:.2} {:.2}\n",
                rep.weighted.p * 100.0,
                rep.weighted.r * 100.0,
                rep.weighted.f1 * 100.0
            ));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn confusion_counts() {
        let m = confusion_matrix(&["T", "F"], &["T", "F"], &["T", "F"]).unwrap();
        assert_eq!(m.counts(), &[vec![1, 0], vec![0, 1]]);

        let m = confusion_matrix(&["T", "T", "F"], &["F", "T", "F"], &["T", "F"]).unwrap();
        assert_eq!(m.counts(), &[vec![1, 1], vec![0, 1]]);
        assert_eq!(m.total(), 3);
    }

    #[test]
    fn confusion_errors() {
        assert!(matches!(
            confusion_matrix(&["T"], &["X"], &["T", "F"]),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            confusion_matrix(&["T", "F"], &["T"], &["T", "F"]),
            Err(Error::LengthMismatch { gold: 2, pred: 1 })
        ));
        let none: [&str; 0] = [];
        assert!(confusion_matrix(&none, &none, &["T"]).is_err());
    }

    #[test]
    fn prf_hand_computed() {
        // class A: TP 2, FP 1, FN 1
        let m = ConfusionMatrix::from_counts(labels(&["A", "B"]), vec![vec![2, 1], vec![1, 0]])
            .unwrap();
        let s = per_class_prf(&m);
        let a = s.get("A").unwrap();
        assert!((a.precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((a.recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((a.f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_over_zero_is_zero() {
        let m = ConfusionMatrix::from_counts(
            labels(&["A", "B", "C"]),
            vec![vec![3, 0, 0], vec![0, 2, 0], vec![0, 0, 0]],
        )
        .unwrap();
        let c = per_class_prf(&m).get("C").cloned().unwrap();
        assert_eq!((c.precision, c.recall, c.f1, c.support), (0.0, 0.0, 0.0, 0));
        let perfect = per_class_prf(&m);
        assert_eq!(perfect.get("A").unwrap().f1, 1.0);
    }

    #[test]
    fn weighted_and_macro() {
        let mk = |f1: f64, support| ClassScore {
            label: String::new(),
            precision: f1,
            recall: f1,
            f1,
            support,
        };
        let s = ClassScores(vec![mk(0.8, 3), mk(0.6, 1)]);
        assert!((aggregate(&s, Averaging::Weighted).unwrap().f1 - 0.75).abs() < 1e-12);
        let s = ClassScores(vec![mk(1.0, 1), mk(0.0, 1)]);
        assert_eq!(aggregate(&s, Averaging::Macro).unwrap().f1, 0.5);
        let s = ClassScores(vec![mk(0.4, 0), mk(0.4, 0)]);
        assert!(matches!(
            aggregate(&s, Averaging::Weighted),
            Err(Error::ZeroSupport)
        ));
        assert!((aggregate(&s, Averaging::Macro).unwrap().f1 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn accuracy_cases() {
        let diag = ConfusionMatrix::from_counts(labels(&["A", "B"]), vec![vec![2, 0], vec![0, 2]])
            .unwrap();
        assert_eq!(accuracy(&diag).unwrap(), 1.0);
        let off = ConfusionMatrix::from_counts(labels(&["A", "B"]), vec![vec![0, 2], vec![2, 0]])
            .unwrap();
        assert_eq!(accuracy(&off).unwrap(), 0.0);
        let m = ConfusionMatrix::from_counts(labels(&["A", "B"]), vec![vec![2, 1], vec![0, 1]])
            .unwrap();
        assert_eq!(accuracy(&m).unwrap(), 0.75);
        let empty = ConfusionMatrix::from_counts(labels(&["A"]), vec![vec![0]]).unwrap();
        assert!(accuracy(&empty).is_err());
    }

    #[test]
    fn official_label_sets() {
        let m =
            confusion_matrix(&["TRUE", "FALSE"], &["TRUE", "FALSE"], &["TRUE", "FALSE"]).unwrap();
        assert_eq!(official_metric(&m, Task::Sarcasm).unwrap(), 1.0);
        assert!(official_metric(&m, Task::Sentiment).is_err());
        let no_neu = confusion_matrix(&["POS", "NEG"], &["POS", "NEG"], &["POS", "NEG"]).unwrap();
        assert!(matches!(
            official_metric(&no_neu, Task::Sentiment),
            Err(Error::LabelSet { .. })
        ));
    }

    #[test]
    fn injected_row_renders() {
        let rep = EvalReport {
            task: Task::Sarcasm,
            official: 0.5872,
            accuracy: 0.7830,
            weighted: Prf {
                p: 0.0,
                r: 0.0,
                f1: 0.0,
            },
            macro_avg: Prf {
                p: 0.7264,
                r: 0.7147,
                f1: 0.72,
            },
            macro_f1: 0.72,
            per_class: BTreeMap::new(),
        };
        assert_eq!(rep.table_row(), "58.72 78.30 72.64 71.47 72.00");
        let table = report(&rep, ReportFormat::Table);
        assert!(table.contains("C_E A P R M-F1\n58.72 78.30 72.64 71.47 72.00\n"));
    }
}
