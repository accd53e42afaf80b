//! Dataset-level extraction, parameter sweeps and method comparisons.

use rayon::prelude::*;

use crate::crawler::{self, CrawlerConfig, Kernel, LiveAgentCurve, Signature};
use crate::descriptors::{Descriptor, FeatureVector, Method};
use crate::error::{Error, Result};
use crate::export::{BenchmarkRow, SweepRow};
use crate::imgio::LabeledDataset;
use crate::ml::{cross_validate, FoldReport, LdaConfig};

/// Cross-validation settings shared by sweeps and benchmarks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvSettings {
    pub folds: usize,
    pub seed: u64,
    pub lda: LdaConfig,
}

impl Default for CvSettings {
    fn default() -> Self {
        CvSettings {
            folds: 10,
            seed: 0,
            lda: LdaConfig::default(),
        }
    }
}

/// Extracts one feature vector per sample, in sample order.
pub fn extract_features(dataset: &LabeledDataset, descriptor: &Descriptor) -> Result<Vec<FeatureVector>> {
    dataset
        .samples
        .par_iter()
        .map(|s| {
            descriptor
                .extract(&s.image)
                .map_err(|e| Error::Parameter(format!("{}: {e}", s.path.display())))
        })
        .collect()
}

pub fn evaluate(features: &[FeatureVector], dataset: &LabeledDataset, cv: &CvSettings) -> Result<FoldReport> {
    let rows: Vec<&[f64]> = features.iter().map(|f| f.values.as_slice()).collect();
    cross_validate(&rows, &dataset.label_indices(), cv.folds, cv.seed, &cv.lda)
}

/// Axis of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    TMax,
    Agents,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::TMax => "t_max",
            SweepAxis::Agents => "n_agents",
        }
    }
}

const VARIANTS: [Kernel; 3] = [Kernel::Max, Kernel::Min, Kernel::Both];

/// Cross-validates the `max`, `min` and `both` crawler signatures at every
/// axis value. Each image is evolved once per direction and value; the three
/// variants are assembled from those cached curves. Invalid values and
/// failed runs become error rows instead of aborting the sweep.
pub fn sweep(
    dataset: &LabeledDataset,
    axis: SweepAxis,
    values: &[usize],
    base: &CrawlerConfig,
    normalized: bool,
    cv: &CvSettings,
) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(values.len() * VARIANTS.len());
    for &value in values {
        let mut config = base.clone();
        match axis {
            SweepAxis::TMax => config.t_max = value,
            SweepAxis::Agents => config.n_agents = value,
        }
        config.kernel = Kernel::Both;
        let cached: Result<Vec<(usize, Vec<LiveAgentCurve>)>> = dataset
            .samples
            .par_iter()
            .map(|s| {
                let curves = crawler::curves(&s.image, &config)
                    .map_err(|e| Error::Config(format!("{}: {e}", s.path.display())))?;
                Ok((config.agent_count(&s.image), curves))
            })
            .collect();
        for kernel in VARIANTS {
            let outcome = cached.as_ref().map_err(|e| e.to_string()).and_then(|cached| {
                let variant = CrawlerConfig {
                    kernel,
                    ..config.clone()
                };
                let digest = Descriptor::Crawler {
                    config: variant,
                    normalized,
                }
                .digest();
                let features: Vec<FeatureVector> = cached
                    .iter()
                    .map(|(n, curves)| {
                        let picked: Vec<LiveAgentCurve> = curves
                            .iter()
                            .filter(|c| kernel.directions().contains(&c.direction))
                            .cloned()
                            .collect();
                        FeatureVector {
                            values: Signature::from_curves(&picked, kernel, *n, normalized).values,
                            method: Method::Acrawler,
                            digest: digest.clone(),
                        }
                    })
                    .collect();
                evaluate(&features, dataset, cv).map_err(|e| e.to_string())
            });
            rows.push(SweepRow {
                axis: axis.name().to_string(),
                value,
                variant: kernel.name().to_string(),
                outcome,
            });
        }
    }
    rows
}

/// A named descriptor in a benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkMethod {
    pub name: String,
    pub descriptor: Descriptor,
}

/// Cross-validates every method and sorts rows by mean accuracy, best
/// first; failed methods go last.
pub fn benchmark(dataset: &LabeledDataset, methods: &[BenchmarkMethod], cv: &CvSettings) -> Vec<BenchmarkRow> {
    let mut rows: Vec<BenchmarkRow> = methods
        .iter()
        .map(|m| {
            let outcome = extract_features(dataset, &m.descriptor)
                .and_then(|f| evaluate(&f, dataset, cv))
                .map_err(|e| e.to_string());
            if let Err(e) = &outcome {
                log::warn!("method {} failed: {e}", m.name);
            }
            BenchmarkRow {
                method: m.name.clone(),
                outcome,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        let key = |r: &BenchmarkRow| r.outcome.as_ref().map(|r| r.mean).unwrap_or(f64::NEG_INFINITY);
        key(b).total_cmp(&key(a))
    });
    rows
}

