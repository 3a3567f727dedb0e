use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Mean and population standard deviation of a set of timings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub samples: usize,
    pub mean: f64,
    pub std_dev: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Stats {
            samples: values.len(),
            mean,
            std_dev: var.sqrt(),
        })
    }
}

/// Machine-readable summary printed to stdout by every subcommand.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub threads: usize,
    /// Wall-clock seconds per stage, in execution order.
    pub stages: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub render_seconds: Option<Stats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postproc_seconds: Option<Stats>,
    pub images_produced: usize,
    pub images_consumed: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl RunReport {
    pub fn new(command: &str, threads: usize) -> Self {
        RunReport {
            command: command.to_string(),
            threads,
            ..Default::default()
        }
    }

    pub fn stage(&mut self, name: &str, seconds: f64) {
        self.stages.push((name.to_string(), seconds));
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        );
    }

    pub fn stage_seconds(&self, name: &str) -> Option<f64> {
        self.stages.iter().find(|(n, _)| n == name).map(|(_, s)| *s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats() {
        assert_eq!(Stats::of(&[]), None);
        let s = Stats::of(&[1.0, 3.0]).unwrap();
        assert_eq!((s.samples, s.mean, s.std_dev), (2, 2.0, 1.0));
        assert_eq!(Stats::of(&[0.5]).unwrap().std_dev, 0.0);
    }
}
