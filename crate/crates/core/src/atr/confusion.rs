use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rows are actual classes, columns predicted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != classes.len() || counts.iter().any(|r| r.len() != classes.len()) {
            return Err(Error::InvalidInput("confusion counts must be K×K".into()));
        }
        Ok(ConfusionMatrix { classes, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.classes.len()).map(|k| self.counts[k][k]).sum()
    }

    /// Trace over total; 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.correct() as f64 / n as f64,
        }
    }

    /// Row-normalized diagonal; `None` for classes with no samples.
    pub fn per_class_accuracy(&self) -> Vec<Option<f64>> {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, row)| match row.iter().sum::<u64>() {
                0 => None,
                n => Some(row[k] as f64 / n as f64),
            })
            .collect()
    }
}

pub fn confusion_matrix(preds: &[String], actuals: &[String], classes: &[String]) -> Result<ConfusionMatrix> {
    if preds.len() != actuals.len() {
        return Err(Error::InvalidInput(format!(
            "{} predictions but {} actual labels",
            preds.len(),
            actuals.len()
        )));
    }
    let index = |l: &String| {
        classes
            .iter()
            .position(|c| c == l)
            .ok_or_else(|| Error::InvalidInput(format!("unknown label {l:?}")))
    };
    let k = classes.len();
    let mut counts = vec![vec![0u64; k]; k];
    for (p, a) in preds.iter().zip(actuals) {
        counts[index(a)?][index(p)?] += 1;
    }
    Ok(ConfusionMatrix {
        classes: classes.to_vec(),
        counts,
    })
}
