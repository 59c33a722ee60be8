//! Lexical document-typology classification and corpus screening.
//!
//! Features are relative frequencies of the top-M lemmas and top-M
//! bi-lemmas, fitted on training charters only. Two linear model kinds are
//! provided: add-one-smoothed multinomial Bayes, and L2-regularized
//! multiclass logistic regression trained by deterministic full-batch
//! gradient descent from zero weights. Both are auditable and reproducible,
//! which is the point: screening runs rank every unlabeled charter by the
//! predicted probability of a target class.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;

pub const DEFAULT_TOP_LEMMAS: usize = 2_000;
pub const DEFAULT_TOP_BILEMMAS: usize = 2_000;

/// The fitted feature vocabulary: which lemmas and bi-lemmas a vector's
/// components refer to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpace {
    pub lemmas: Vec<String>,
    pub bilemmas: Vec<String>,
}

impl FeatureSpace {
    /// Top lemmas and bi-lemmas by frequency over the given charters,
    /// ties broken lexicographically.
    pub fn fit(index: &Index, charters: &[u32], top_lemmas: usize, top_bilemmas: usize) -> Self {
        let mut lemma_freq: HashMap<&str, u64> = HashMap::new();
        let mut bilemma_freq: HashMap<String, u64> = HashMap::new();
        for &ci in charters {
            let tokens = &index.charters[ci as usize].tokens;
            for t in tokens {
                *lemma_freq.entry(index.lemmas.string(t.lemma.0)).or_insert(0) += 1;
            }
            for pair in tokens.windows(2) {
                let label = format!(
                    "{} {}",
                    index.lemmas.string(pair[0].lemma.0),
                    index.lemmas.string(pair[1].lemma.0)
                );
                *bilemma_freq.entry(label).or_insert(0) += 1;
            }
        }
        let mut lemmas: Vec<(&str, u64)> = lemma_freq.into_iter().collect();
        lemmas.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        lemmas.truncate(top_lemmas);
        let mut bilemmas: Vec<(String, u64)> = bilemma_freq.into_iter().collect();
        bilemmas.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        bilemmas.truncate(top_bilemmas);
        FeatureSpace {
            lemmas: lemmas.into_iter().map(|(s, _)| s.to_string()).collect(),
            bilemmas: bilemmas.into_iter().map(|(s, _)| s).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lemmas.len() + self.bilemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lookups(&self) -> (HashMap<&str, usize>, HashMap<&str, usize>) {
        let lemma_of = self
            .lemmas
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let bilemma_of = self
            .bilemmas
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        (lemma_of, bilemma_of)
    }
}

/// Relative-frequency features of one charter. `coverage` is the fraction
/// of the charter's tokens that hit the lemma block; zero flags a charter
/// entirely outside the space.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub coverage: f64,
}

/// Counts divided by charter token count; out-of-space items ignored.
pub fn featurize(index: &Index, charter: u32, space: &FeatureSpace) -> Result<FeatureVector> {
    let tokens = &index.charters[charter as usize].tokens;
    if tokens.is_empty() {
        return Err(Error::EmptyCharter(
            index.charters[charter as usize].meta.id.clone(),
        ));
    }
    let (lemma_of, bilemma_of) = space.lookups();
    let mut values = vec![0.0f64; space.len()];
    let denom = tokens.len() as f64;
    let mut hits = 0u64;
    for t in tokens {
        if let Some(&i) = lemma_of.get(index.lemmas.string(t.lemma.0)) {
            values[i] += 1.0;
            hits += 1;
        }
    }
    for pair in tokens.windows(2) {
        let label = format!(
            "{} {}",
            index.lemmas.string(pair[0].lemma.0),
            index.lemmas.string(pair[1].lemma.0)
        );
        if let Some(&i) = bilemma_of.get(label.as_str()) {
            values[space.lemmas.len() + i] += 1.0;
        }
    }
    for v in &mut values {
        *v /= denom;
    }
    Ok(FeatureVector {
        values,
        coverage: hits as f64 / denom,
    })
}

/// Which classifier to train, with hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelKind {
    Bayes,
    Logistic { l2: f64, epochs: usize, rate: f64 },
}

pub const DEFAULT_LOGISTIC: ModelKind = ModelKind::Logistic {
    l2: 1e-4,
    epochs: 300,
    rate: 2.0,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ModelParams {
    Bayes {
        /// ln p(class)
        log_priors: Vec<f64>,
        /// classes x features, ln theta.
        feature_log_prob: Vec<Vec<f64>>,
    },
    Logistic {
        /// classes x (features + 1); last column is the bias.
        weights: Vec<Vec<f64>>,
    },
}

/// A trained classifier, serializable as a versioned JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Model {
    pub format_version: u32,
    pub kind: ModelKind,
    pub classes: Vec<String>,
    pub space: FeatureSpace,
    pub params: ModelParams,
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Training result: the model plus the per-epoch loss curve (logistic only).
#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub model: Model,
    pub loss_curve: Vec<f64>,
}

fn collect_classes(labeled: &[(u32, String)]) -> Result<Vec<String>> {
    let mut classes: Vec<String> = labeled.iter().map(|(_, c)| c.clone()).collect();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::SingleClass(classes.len()));
    }
    Ok(classes)
}

/// Train on labeled charters. The feature space is fitted on exactly these
/// charters. Training is deterministic; both kinds start from closed-form
/// or zero-initialized parameters.
pub fn train(
    index: &Index,
    labeled: &[(u32, String)],
    kind: ModelKind,
    top_lemmas: usize,
    top_bilemmas: usize,
) -> Result<TrainOutput> {
    let classes = collect_classes(labeled)?;
    let train_charters: Vec<u32> = labeled.iter().map(|&(c, _)| c).collect();
    let space = FeatureSpace::fit(index, &train_charters, top_lemmas, top_bilemmas);
    let features: Vec<Vec<f64>> = labeled
        .iter()
        .map(|&(ci, _)| featurize(index, ci, &space).map(|f| f.values))
        .collect::<Result<_>>()?;
    let class_ids: Vec<usize> = labeled
        .iter()
        .map(|(_, c)| classes.iter().position(|x| x == c).unwrap())
        .collect();

    let (params, loss_curve) = match kind {
        ModelKind::Bayes => (train_bayes(&features, &class_ids, classes.len()), vec![]),
        ModelKind::Logistic { l2, epochs, rate } => {
            train_logistic(&features, &class_ids, classes.len(), l2, epochs, rate)
        }
    };

    Ok(TrainOutput {
        model: Model {
            format_version: MODEL_FORMAT_VERSION,
            kind,
            classes,
            space,
            params,
        },
        loss_curve,
    })
}

fn train_bayes(features: &[Vec<f64>], class_ids: &[usize], n_classes: usize) -> ModelParams {
    let n_features = features.first().map(|f| f.len()).unwrap_or(0);
    let mut class_counts = vec![0usize; n_classes];
    let mut sums = vec![vec![0.0f64; n_features]; n_classes];
    for (x, &c) in features.iter().zip(class_ids) {
        class_counts[c] += 1;
        for (s, &v) in sums[c].iter_mut().zip(x) {
            *s += v;
        }
    }
    let total = features.len() as f64;
    let log_priors: Vec<f64> = class_counts
        .iter()
        .map(|&n| (n as f64 / total).ln())
        .collect();
    let feature_log_prob: Vec<Vec<f64>> = sums
        .iter()
        .map(|class_sums| {
            let mass: f64 = class_sums.iter().sum::<f64>() + n_features as f64;
            class_sums
                .iter()
                .map(|&s| ((s + 1.0) / mass).ln())
                .collect()
        })
        .collect();
    ModelParams::Bayes {
        log_priors,
        feature_log_prob,
    }
}

fn softmax_in_place(scores: &mut [f64]) {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for s in scores.iter_mut() {
        *s = (*s - max).exp();
        sum += *s;
    }
    for s in scores.iter_mut() {
        *s /= sum;
    }
}

fn train_logistic(
    features: &[Vec<f64>],
    class_ids: &[usize],
    n_classes: usize,
    l2: f64,
    epochs: usize,
    rate: f64,
) -> (ModelParams, Vec<f64>) {
    let n = features.len();
    let n_features = features.first().map(|f| f.len()).unwrap_or(0);
    let dim = n_features + 1; // bias last
    let mut weights = vec![vec![0.0f64; dim]; n_classes];
    let mut loss_curve = Vec::with_capacity(epochs);

    for _ in 0..epochs {
        let mut grad = vec![vec![0.0f64; dim]; n_classes];
        let mut loss = 0.0f64;
        for (x, &y) in features.iter().zip(class_ids) {
            let mut scores: Vec<f64> = weights
                .iter()
                .map(|w| {
                    w[..n_features]
                        .iter()
                        .zip(x)
                        .map(|(wi, xi)| wi * xi)
                        .sum::<f64>()
                        + w[n_features]
                })
                .collect();
            softmax_in_place(&mut scores);
            loss -= scores[y].max(1e-300).ln();
            for (c, &p) in scores.iter().enumerate() {
                let err = p - if c == y { 1.0 } else { 0.0 };
                for (g, &xi) in grad[c][..n_features].iter_mut().zip(x) {
                    *g += err * xi;
                }
                grad[c][n_features] += err;
            }
        }
        let nf = n as f64;
        loss /= nf;
        // L2 penalty on weights, not on the bias.
        for w in &weights {
            loss += 0.5 * l2 * w[..n_features].iter().map(|x| x * x).sum::<f64>();
        }
        loss_curve.push(loss);
        // Proximal step for the penalty: exact shrinkage keeps the update
        // stable for any l2, so the large-lambda limit really is uniform.
        let shrink = 1.0 / (1.0 + rate * l2);
        for (w, g) in weights.iter_mut().zip(&grad) {
            for f in 0..n_features {
                w[f] = (w[f] - rate * g[f] / nf) * shrink;
            }
            w[n_features] -= rate * g[n_features] / nf;
        }
    }

    (ModelParams::Logistic { weights }, loss_curve)
}

impl Model {
    /// Class probabilities for a feature vector; they sum to one.
    pub fn predict_proba(&self, features: &[f64]) -> Vec<f64> {
        let mut scores = match &self.params {
            ModelParams::Bayes {
                log_priors,
                feature_log_prob,
            } => log_priors
                .iter()
                .zip(feature_log_prob)
                .map(|(&prior, logp)| {
                    prior
                        + logp
                            .iter()
                            .zip(features)
                            .map(|(&lp, &x)| lp * x)
                            .sum::<f64>()
                })
                .collect::<Vec<f64>>(),
            ModelParams::Logistic { weights } => {
                let n_features = features.len();
                weights
                    .iter()
                    .map(|w| {
                        w[..n_features]
                            .iter()
                            .zip(features)
                            .map(|(wi, xi)| wi * xi)
                            .sum::<f64>()
                            + w[n_features]
                    })
                    .collect()
            }
        };
        softmax_in_place(&mut scores);
        scores
    }

    /// Argmax class index; ties go to the first (lowest) class.
    pub fn predict(&self, features: &[f64]) -> usize {
        let proba = self.predict_proba(features);
        let mut best = 0usize;
        for i in 1..proba.len() {
            if proba[i] > proba[best] {
                best = i;
            }
        }
        best
    }

    pub fn save_json(&self, path: &std::path::Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidInput(format!("model serialization: {e}")))?;
        std::fs::write(path, json).map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load_json(path: &std::path::Path) -> Result<Model> {
        let data =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        serde_json::from_str(&data)
            .map_err(|e| Error::InvalidInput(format!("model file {}: {e}", path.display())))
    }
}

/// Cross-validation report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub classes: Vec<String>,
    /// confusion[actual][predicted], summed over all folds.
    pub confusion: Vec<Vec<u64>>,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub macro_f1: f64,
    pub accuracy: f64,
    pub folds: usize,
    pub seed: u64,
    pub warnings: Vec<String>,
}

/// Stratified f-fold cross-validation. The feature space is refitted on
/// each fold's training part. Classes with fewer examples than folds cycle
/// with replacement (warned).
pub fn evaluate(
    index: &Index,
    labeled: &[(u32, String)],
    kind: ModelKind,
    top_lemmas: usize,
    top_bilemmas: usize,
    folds: usize,
    seed: u64,
) -> Result<EvalReport> {
    if folds < 2 {
        return Err(Error::BadFoldCount(folds));
    }
    let classes = collect_classes(labeled)?;
    let mut warnings = Vec::new();

    // fold_of[i]: fold in which example i is tested.
    let mut fold_of = vec![0usize; labeled.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for class in &classes {
        let mut members: Vec<usize> = labeled
            .iter()
            .enumerate()
            .filter(|(_, (_, c))| c == class)
            .map(|(i, _)| i)
            .collect();
        members.shuffle(&mut rng);
        if members.len() < folds {
            warnings.push(format!(
                "class {class} has {} examples for {folds} folds; folds reuse them",
                members.len()
            ));
        }
        for (slot, &i) in members.iter().enumerate() {
            fold_of[i] = slot % folds;
        }
    }

    let n_classes = classes.len();
    let mut confusion = vec![vec![0u64; n_classes]; n_classes];
    for fold in 0..folds {
        let train_set: Vec<(u32, String)> = labeled
            .iter()
            .enumerate()
            .filter(|&(i, _)| fold_of[i] != fold || labeled_class_too_small(labeled, &classes, folds, i))
            .map(|(_, pair)| pair.clone())
            .collect();
        let test_set: Vec<(usize, &(u32, String))> = labeled
            .iter()
            .enumerate()
            .filter(|&(i, _)| fold_of[i] == fold)
            .collect();
        if test_set.is_empty() {
            continue;
        }
        let output = train(index, &train_set, kind, top_lemmas, top_bilemmas)?;
        for (_, (ci, actual)) in test_set {
            let features = featurize(index, *ci, &output.model.space)?;
            let predicted = output.model.predict(&features.values);
            let actual_id = classes.iter().position(|c| c == actual).unwrap();
            let predicted_class = &output.model.classes[predicted];
            let predicted_id = classes.iter().position(|c| c == predicted_class).unwrap();
            confusion[actual_id][predicted_id] += 1;
        }
    }

    let mut precision = vec![0.0; n_classes];
    let mut recall = vec![0.0; n_classes];
    let mut f1 = vec![0.0; n_classes];
    let mut correct = 0u64;
    let mut total = 0u64;
    for c in 0..n_classes {
        let tp = confusion[c][c];
        let row: u64 = confusion[c].iter().sum();
        let col: u64 = (0..n_classes).map(|r| confusion[r][c]).sum();
        precision[c] = if col > 0 { tp as f64 / col as f64 } else { 0.0 };
        recall[c] = if row > 0 { tp as f64 / row as f64 } else { 0.0 };
        f1[c] = if precision[c] + recall[c] > 0.0 {
            2.0 * precision[c] * recall[c] / (precision[c] + recall[c])
        } else {
            0.0
        };
        correct += tp;
        total += row;
    }
    let macro_f1 = f1.iter().sum::<f64>() / n_classes as f64;

    Ok(EvalReport {
        classes,
        confusion,
        precision,
        recall,
        f1,
        macro_f1,
        accuracy: if total > 0 { correct as f64 / total as f64 } else { 0.0 },
        folds,
        seed,
        warnings,
    })
}

/// A class smaller than the fold count keeps all its members in every
/// training set (testing then reuses them).
fn labeled_class_too_small(
    labeled: &[(u32, String)],
    classes: &[String],
    folds: usize,
    i: usize,
) -> bool {
    let class = &labeled[i].1;
    let count = labeled.iter().filter(|(_, c)| c == class).count();
    let _ = classes;
    count < folds
}

/// One screening hit: an unlabeled charter with its target-class
/// probability.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScreenHit {
    pub charter_id: String,
    pub p_target: f64,
    pub predicted: String,
}

/// Rank unlabeled charters (no doc_type) by p(target), keeping those at or
/// above the threshold, sorted descending (ties by id).
pub fn screen(model: &Model, index: &Index, target: &str, threshold: f64) -> Result<Vec<ScreenHit>> {
    let target_id = model
        .classes
        .iter()
        .position(|c| c == target)
        .ok_or_else(|| Error::UnknownClass(target.to_string()))?;
    let mut hits = Vec::new();
    for ci in 0..index.charters.len() as u32 {
        let charter = &index.charters[ci as usize];
        if charter.meta.doc_type.is_some() || charter.tokens.is_empty() {
            continue;
        }
        let features = featurize(index, ci, &model.space)?;
        let proba = model.predict_proba(&features.values);
        if proba[target_id] >= threshold {
            hits.push(ScreenHit {
                charter_id: charter.meta.id.clone(),
                p_target: proba[target_id],
                predicted: model.classes[model.predict(&features.values)].clone(),
            });
        }
    }
    hits.sort_by(|a, b| {
        b.p_target
            .partial_cmp(&a.p_target)
            .unwrap()
            .then_with(|| a.charter_id.cmp(&b.charter_id))
    });
    Ok(hits)
}
