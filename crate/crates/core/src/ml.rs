//! Linear discriminant analysis and stratified k-fold cross-validation.
//!
//! The classifier is the Gaussian discriminant with one covariance matrix
//! shared by all classes. The pooled within-class covariance is shrunk
//! toward a scaled identity so it stays invertible when there are more
//! features than samples per class:
//!
//! `Σ_reg = (1 - γ) Σ + γ · mean(diag Σ) · I`

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Relative score gap below which two classes are considered tied.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdaConfig {
    /// Shrinkage coefficient γ in `[0, 1]`.
    pub shrinkage: f64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig { shrinkage: 1e-4 }
    }
}

/// A fitted shared-covariance discriminant.
#[derive(Debug, Clone)]
pub struct LdaModel {
    /// Distinct training labels, ascending; scores follow this order.
    pub classes: Vec<usize>,
    /// One row per class.
    pub means: DMatrix<f64>,
    /// Regularised pooled within-class covariance.
    pub covariance: DMatrix<f64>,
    pub priors: Vec<f64>,
    pub shrinkage: f64,
    /// `Σ⁻¹ μ_c`, one column per class.
    weights: DMatrix<f64>,
    biases: Vec<f64>,
}

/// Predicted label with the discriminant score of every class.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: usize,
    pub scores: Vec<f64>,
}

fn check_rows<R: AsRef<[f64]>>(features: &[R]) -> Result<usize> {
    let dim = features
        .first()
        .map(|r| r.as_ref().len())
        .ok_or_else(|| Error::Validation("no training samples".into()))?;
    if dim == 0 {
        return Err(Error::Validation("feature vectors are empty".into()));
    }
    for (i, row) in features.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != dim {
            return Err(Error::Validation(format!(
                "sample {i} has {} features, expected {dim}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("sample {i} feature {j} is not finite")));
        }
    }
    Ok(dim)
}

impl LdaModel {
    pub fn fit<R: AsRef<[f64]>>(features: &[R], labels: &[usize], config: &LdaConfig) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Validation(format!(
                "{} samples but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if !(0.0..=1.0).contains(&config.shrinkage) {
            return Err(Error::Validation(format!("shrinkage {} outside [0, 1]", config.shrinkage)));
        }
        let dim = check_rows(features)?;
        let mut classes = labels.to_vec();
        classes.sort_unstable();
        classes.dedup();
        if classes.len() < 2 {
            return Err(Error::Training(format!("need at least 2 classes, got {}", classes.len())));
        }
        let n = features.len();
        let k = classes.len();
        let slot = |label: usize| classes.binary_search(&label).expect("label was collected above");

        let mut counts = vec![0usize; k];
        let mut means = DMatrix::<f64>::zeros(k, dim);
        for (row, &label) in features.iter().zip(labels) {
            let c = slot(label);
            counts[c] += 1;
            for (j, v) in row.as_ref().iter().enumerate() {
                means[(c, j)] += v;
            }
        }
        if let Some(c) = counts.iter().position(|&m| m < 2) {
            return Err(Error::Training(format!(
                "class {} has {} training sample(s), need at least 2",
                classes[c], counts[c]
            )));
        }
        for (c, &m) in counts.iter().enumerate() {
            means.row_mut(c).scale_mut(1.0 / m as f64);
        }

        let mut scatter = DMatrix::<f64>::zeros(dim, dim);
        let mut centered = DVector::<f64>::zeros(dim);
        for (row, &label) in features.iter().zip(labels) {
            let c = slot(label);
            for (j, v) in row.as_ref().iter().enumerate() {
                centered[j] = v - means[(c, j)];
            }
            scatter.ger(1.0, &centered, &centered, 1.0);
        }
        scatter /= (n - k) as f64;

        let gamma = config.shrinkage;
        let mean_diag = scatter.diagonal().mean();
        // all-constant features leave nothing to scale by; fall back to γ·I
        let ridge = if mean_diag > 0.0 { gamma * mean_diag } else { gamma };
        let mut covariance = scatter * (1.0 - gamma);
        for j in 0..dim {
            covariance[(j, j)] += ridge;
        }

        let chol = covariance.clone().cholesky().ok_or_else(|| {
            Error::Training("pooled covariance is not positive definite; increase shrinkage".into())
        })?;
        let weights = chol.solve(&means.transpose());
        let priors: Vec<f64> = counts.iter().map(|&m| m as f64 / n as f64).collect();
        let biases = (0..k)
            .map(|c| -0.5 * means.row(c).transpose().dot(&weights.column(c)) + priors[c].ln())
            .collect();

        Ok(LdaModel {
            classes,
            means,
            covariance,
            priors,
            shrinkage: gamma,
            weights,
            biases,
        })
    }

    pub fn dim(&self) -> usize {
        self.means.ncols()
    }

    /// Fisher direction `Σ⁻¹ (μ_a - μ_b)` between two classes given by label.
    pub fn direction(&self, a: usize, b: usize) -> Result<DVector<f64>> {
        let find = |label| {
            self.classes
                .binary_search(&label)
                .map_err(|_| Error::Validation(format!("unknown class {label}")))
        };
        let (ia, ib) = (find(a)?, find(b)?);
        Ok(self.weights.column(ia) - self.weights.column(ib))
    }

    /// Discriminant score of every class, in `classes` order.
    pub fn scores(&self, feature: &[f64]) -> Result<Vec<f64>> {
        if feature.len() != self.dim() {
            return Err(Error::Validation(format!(
                "feature has {} values, model expects {}",
                feature.len(),
                self.dim()
            )));
        }
        let x = DVector::from_column_slice(feature);
        Ok(self
            .biases
            .iter()
            .enumerate()
            .map(|(c, b)| x.dot(&self.weights.column(c)) + b)
            .collect())
    }

    /// Highest-scoring class; ties go to the earlier class. Scores closer
    /// than [`SCORE_TIE_TOLERANCE`] (relative) count as ties.
    pub fn predict(&self, feature: &[f64]) -> Result<Prediction> {
        let scores = self.scores(feature)?;
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate().skip(1) {
            let top = scores[best];
            if s - top > SCORE_TIE_TOLERANCE * (1.0 + top.abs().max(s.abs())) {
                best = c;
            }
        }
        Ok(Prediction {
            label: self.classes[best],
            scores,
        })
    }
}

/// Convenience wrapper for [`LdaModel::fit`].
pub fn lda_fit<R: AsRef<[f64]>>(features: &[R], labels: &[usize], config: &LdaConfig) -> Result<LdaModel> {
    LdaModel::fit(features, labels, config)
}

pub fn lda_predict(model: &LdaModel, feature: &[f64]) -> Result<Prediction> {
    model.predict(feature)
}

/// Outcome of k-fold cross-validation.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldReport {
    /// Distinct labels; confusion rows and columns follow this order.
    pub classes: Vec<usize>,
    pub fold_accuracies: Vec<f64>,
    pub fold_correct: Vec<usize>,
    pub fold_total: Vec<usize>,
    /// Average of the fold accuracies.
    pub mean: f64,
    /// Bias-corrected standard deviation of the fold accuracies.
    pub std: f64,
    pub correct: usize,
    pub total: usize,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    /// Test fold of each sample.
    pub fold_of: Vec<usize>,
    /// Predicted label of each sample when it was held out.
    pub predictions: Vec<usize>,
    /// How many times each sample was scored.
    pub times_tested: Vec<usize>,
    pub warnings: Vec<String>,
}

impl FoldReport {
    pub fn folds(&self) -> usize {
        self.fold_accuracies.len()
    }

    /// Overall fraction of correctly classified samples.
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }

    pub fn confusion_trace(&self) -> usize {
        (0..self.confusion.len()).map(|c| self.confusion[c][c]).sum()
    }
}

/// Stratified fold index of every sample.
///
/// Each class is shuffled with the seeded generator and dealt round-robin
/// into the folds, continuing where the previous class stopped.
pub fn stratified_folds(labels: &[usize], folds: usize, seed: u64) -> Vec<usize> {
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    assignment
}

/// Stratified k-fold cross-validation of the LDA classifier.
///
/// When the smallest class has fewer than `folds` samples the fold count is
/// reduced to that size and a warning is recorded.
pub fn cross_validate<R: AsRef<[f64]> + Sync>(
    features: &[R],
    labels: &[usize],
    folds: usize,
    seed: u64,
    config: &LdaConfig,
) -> Result<FoldReport> {
    if features.len() != labels.len() {
        return Err(Error::Validation(format!(
            "{} samples but {} labels",
            features.len(),
            labels.len()
        )));
    }
    check_rows(features)?;
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::Validation(format!(
            "cross-validation needs at least 2 classes, got {}",
            classes.len()
        )));
    }
    if folds < 2 {
        return Err(Error::Validation(format!("need at least 2 folds, got {folds}")));
    }
    let smallest = classes
        .iter()
        .map(|&c| labels.iter().filter(|&&l| l == c).count())
        .min()
        .unwrap_or(0);
    let mut warnings = Vec::new();
    let k = folds.min(smallest);
    if k < 2 {
        return Err(Error::Validation(format!(
            "smallest class has {smallest} sample(s); at least 2 are needed"
        )));
    }
    if k < folds {
        let msg = format!("smallest class has {smallest} samples; using {k} folds instead of {folds}");
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let fold_of = stratified_folds(labels, k, seed);
    let outcomes = (0..k)
        .into_par_iter()
        .map(|fold| {
            let (train_x, train_y): (Vec<&[f64]>, Vec<usize>) = (0..labels.len())
                .filter(|&i| fold_of[i] != fold)
                .map(|i| (features[i].as_ref(), labels[i]))
                .unzip();
            let model = LdaModel::fit(&train_x, &train_y, config)?;
            (0..labels.len())
                .filter(|&i| fold_of[i] == fold)
                .map(|i| model.predict(features[i].as_ref()).map(|p| (i, p.label)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Vec<_>>();

    let slot = |label: usize| classes.binary_search(&label).expect("label was collected above");
    let mut confusion = vec![vec![0; classes.len()]; classes.len()];
    let mut predictions = vec![usize::MAX; labels.len()];
    let mut times_tested = vec![0; labels.len()];
    let mut fold_correct = Vec::with_capacity(k);
    let mut fold_total = Vec::with_capacity(k);
    for outcome in outcomes {
        let outcome = outcome?;
        let mut correct = 0;
        for &(i, predicted) in &outcome {
            predictions[i] = predicted;
            times_tested[i] += 1;
            confusion[slot(labels[i])][slot(predicted)] += 1;
            correct += usize::from(predicted == labels[i]);
        }
        fold_correct.push(correct);
        fold_total.push(outcome.len());
    }
    let fold_accuracies: Vec<f64> = fold_correct
        .iter()
        .zip(&fold_total)
        .map(|(&c, &t)| c as f64 / t as f64)
        .collect();
    let mean = fold_accuracies.iter().sum::<f64>() / k as f64;
    let var = fold_accuracies.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    Ok(FoldReport {
        classes,
        mean,
        std: var.sqrt(),
        correct: fold_correct.iter().sum(),
        total: fold_total.iter().sum(),
        fold_accuracies,
        fold_correct,
        fold_total,
        confusion,
        fold_of,
        predictions,
        times_tested,
        warnings,
    })
}
