//! Automatic target recognition harness: HOG features, a one-vs-rest linear
//! SVM, and confusion-matrix reporting over dataset manifests.

mod confusion;
mod hog;
mod svm;

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetManifest, Split};
use crate::error::{Error, Result};
use crate::image::ImageBuffer;
use crate::postproc::to_grayscale;

pub use confusion::{confusion_matrix, ConfusionMatrix};
pub use hog::{resize_bilinear, FeatureExtractor, FeatureVector, Hog, HogConfig, MIN_INPUT_SIZE};
pub use svm::{train_classifier, ClassifierModel, TrainHyper};

/// Loads an image as single-channel.
pub fn load_gray(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let img = ImageBuffer::load(path)?;
    match img.channels() {
        1 => Ok(img),
        _ => to_grayscale(&img),
    }
}

/// Features and labels of every record in `split`, in manifest order.
/// Image paths resolve against `root`.
pub fn labelled_features(
    manifest: &DatasetManifest,
    root: &Path,
    split: Split,
    extractor: &dyn FeatureExtractor,
) -> Result<(Vec<FeatureVector>, Vec<String>)> {
    let records: Vec<_> = manifest.records.iter().filter(|r| r.split == split).collect();
    let features = records
        .par_iter()
        .map(|r| extractor.extract(&load_gray(root.join(&r.image_path))?))
        .collect::<Result<Vec<_>>>()?;
    let labels = records.iter().map(|r| r.shape.label().to_string()).collect();
    Ok((features, labels))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtrModel {
    pub features: HogConfig,
    pub classifier: ClassifierModel,
}

impl AtrModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, serde_json::to_string_pretty(self)?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn predict(&self, img: &ImageBuffer) -> Result<&str> {
        let f = Hog::new(self.features)?.extract(img)?;
        self.classifier.predict(&f)
    }
}

pub fn train_on_manifest(
    manifest: &DatasetManifest,
    root: &Path,
    hog: HogConfig,
    hyper: &TrainHyper,
) -> Result<AtrModel> {
    let extractor = Hog::new(hog)?;
    let (features, labels) = labelled_features(manifest, root, Split::Train, &extractor)?;
    log::info!("training on {} images, {} features each", features.len(), extractor.len());
    Ok(AtrModel {
        features: hog,
        classifier: train_classifier(&features, &labels, hyper)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtrReport {
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    /// Same order as `confusion.classes`.
    pub per_class_accuracy: Vec<Option<f64>>,
    pub samples: u64,
}

impl AtrReport {
    pub fn from_confusion(confusion: ConfusionMatrix) -> Self {
        AtrReport {
            accuracy: confusion.accuracy(),
            per_class_accuracy: confusion.per_class_accuracy(),
            samples: confusion.total(),
            confusion,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, serde_json::to_string_pretty(self)?).map_err(|e| Error::io(path, e))
    }
}

pub fn evaluate_on_manifest(model: &AtrModel, manifest: &DatasetManifest, root: &Path, split: Split) -> Result<AtrReport> {
    let extractor = Hog::new(model.features)?;
    let (features, actuals) = labelled_features(manifest, root, split, &extractor)?;
    let preds = features
        .iter()
        .map(|f| model.classifier.predict(f).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let cm = confusion_matrix(&preds, &actuals, &model.classifier.classes)?;
    Ok(AtrReport::from_confusion(cm))
}
