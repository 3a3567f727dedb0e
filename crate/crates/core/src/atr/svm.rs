//! One-vs-rest linear SVM trained by stochastic subgradient descent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::mix2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainHyper {
    pub epochs: usize,
    /// Bias step scale: the bias moves by `learning_rate/√t` per violation.
    pub learning_rate: f64,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for TrainHyper {
    fn default() -> Self {
        TrainHyper {
            epochs: 200,
            learning_rate: 1.0,
            lambda: 1e-4,
            seed: 0,
        }
    }
}

impl TrainHyper {
    pub fn with_seed(seed: u64) -> Self {
        TrainHyper {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidParameter("epochs must be >= 1".into()));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {}", self.lambda)));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "learning rate must be >= 0, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub classes: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub hyper: TrainHyper,
}

impl ClassifierModel {
    pub fn feature_len(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn scores(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.feature_len() {
            return Err(Error::InvalidInput(format!(
                "feature length {} does not match model length {}",
                f.len(),
                self.feature_len()
            )));
        }
        Ok(self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| dot(w, f) + b)
            .collect())
    }

    /// Index of the highest score; ties go to the earliest class.
    pub fn predict_index(&self, f: &[f64]) -> Result<usize> {
        let s = self.scores(f)?;
        let mut best = 0;
        for (k, &v) in s.iter().enumerate().skip(1) {
            if v > s[best] {
                best = k;
            }
        }
        Ok(best)
    }

    pub fn predict(&self, f: &[f64]) -> Result<&str> {
        Ok(&self.classes[self.predict_index(f)?])
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Trains one binary hinge-loss classifier per class.
///
/// Each step `t` (1-based, counted over all epochs) visits one sample in a
/// seeded per-epoch permutation and applies
/// `w ← (1 − η_t·λ)·w + η_t·y·x` with `η_t = 1/(λt)` when `y(w·x + b) < 1`
/// (the shrink applies always). The bias is unregularized and steps by
/// `learning_rate/√t` on violations.
pub fn train_classifier(features: &[Vec<f64>], labels: &[String], hyper: &TrainHyper) -> Result<ClassifierModel> {
    hyper.validate()?;
    if features.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} feature vectors but {} labels",
            features.len(),
            labels.len()
        )));
    }
    let dim = features.first().map_or(0, Vec::len);
    if let Some(bad) = features.iter().find(|f| f.len() != dim) {
        return Err(Error::InvalidInput(format!(
            "feature lengths differ ({dim} vs {})",
            bad.len()
        )));
    }
    let mut classes: Vec<String> = Vec::new();
    for l in labels {
        if !classes.contains(l) {
            classes.push(l.clone());
        }
    }
    classes.sort();
    if classes.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "training needs at least 2 classes, got {}",
            classes.len()
        )));
    }
    let targets: Vec<usize> = labels
        .iter()
        .map(|l| classes.iter().position(|c| c == l).unwrap())
        .collect();

    let k = classes.len();
    let mut weights = vec![vec![0.0; dim]; k];
    let mut biases = vec![0.0; k];
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut t = 0u64;
    for epoch in 0..hyper.epochs {
        let mut rng = ChaCha8Rng::seed_from_u64(mix2(hyper.seed, epoch as u64));
        order.sort_unstable();
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (hyper.lambda * t as f64);
            let eta_b = hyper.learning_rate / (t as f64).sqrt();
            let shrink = 1.0 - eta * hyper.lambda;
            let x = &features[i];
            for c in 0..k {
                let y = if targets[i] == c { 1.0 } else { -1.0 };
                let w = &mut weights[c];
                let margin = y * (dot(w, x) + biases[c]);
                if margin < 1.0 {
                    for (wj, xj) in w.iter_mut().zip(x) {
                        *wj = shrink * *wj + eta * y * xj;
                    }
                    biases[c] += eta_b * y;
                } else {
                    w.iter_mut().for_each(|wj| *wj *= shrink);
                }
            }
        }
    }
    Ok(ClassifierModel {
        classes,
        weights,
        biases,
        hyper: *hyper,
    })
}
