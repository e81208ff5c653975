//! Classification orchestration, the classical reference classifier and the
//! evaluation sweep.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::csvio::FeatureFile;
use super::dataset::Dataset;
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::features::{load_rgb, FeatureExtractor, FeatureVector};
use crate::qknn::{
    build_sigma, durr_k_min, exact_distance, majority_vote, DistanceBackend, DistanceTable,
    SearchOptions,
};

/// Simulation backend for one classification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Statevector circuits end to end (desk-scale instance sizes only).
    Full,
    /// Exact distances in the register, search circuits simulated.
    Oracle,
    /// Infinite-precision distances and forced-success search: the limit used
    /// for oracle-equivalence checks.
    ExactForced,
}

impl Backend {
    fn distances(self) -> DistanceBackend {
        match self {
            Backend::Full => DistanceBackend::FullCircuit,
            Backend::Oracle => DistanceBackend::OracleLevel,
            Backend::ExactForced => DistanceBackend::ExactRank,
        }
    }

    fn forced(self) -> bool {
        matches!(self, Backend::ExactForced)
    }
}

/// Training features with the frozen texture bounds that produced them.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    /// Training vectors; 1-based index j maps to `vectors[j-1]`.
    pub vectors: Vec<FeatureVector>,
    /// Label per training index.
    pub labels: Vec<String>,
    pub extractor: FeatureExtractor,
}

/// Extract features of the training split (or the whole dataset when no
/// split is set), fitting texture bounds on those images only.
pub fn train_model(dataset: &Dataset) -> Result<TrainedModel> {
    let items = dataset.train_items();
    if items.is_empty() {
        return Err(Error::NoTrainingData);
    }
    let mut images = Vec::with_capacity(items.len());
    for item in &items {
        images.push(load_rgb(&item.path)?);
    }
    let extractor = FeatureExtractor::fit(images.iter())?;
    let mut vectors = Vec::with_capacity(items.len());
    let mut labels = Vec::with_capacity(items.len());
    for (item, img) in items.iter().zip(&images) {
        vectors.push(extractor.extract(
            img,
            item.path.display().to_string(),
            Some(item.label.clone()),
        )?);
        labels.push(item.label.clone());
    }
    Ok(TrainedModel {
        vectors,
        labels,
        extractor,
    })
}

impl TrainedModel {
    /// Rebuild a model from a feature CSV; requires the bounds comments and a
    /// label on every row.
    pub fn from_feature_file(file: FeatureFile, path: &Path) -> Result<TrainedModel> {
        let bounds = file.bounds.ok_or_else(|| Error::MissingBounds {
            path: path.to_path_buf(),
        })?;
        let mut labels = Vec::with_capacity(file.vectors.len());
        for v in &file.vectors {
            labels.push(v.label.clone().ok_or_else(|| Error::BadFeatureFile {
                path: path.to_path_buf(),
                reason: format!("row for {} has no label", v.source_id),
            })?);
        }
        Ok(TrainedModel {
            vectors: file.vectors,
            labels,
            extractor: FeatureExtractor::from_bounds(bounds),
        })
    }

    /// Featurize a test image with the frozen bounds.
    pub fn featurize(&self, path: &Path) -> Result<FeatureVector> {
        self.extractor.extract_path(path, None)
    }

    fn component_rows(&self) -> Vec<Vec<f64>> {
        self.vectors.iter().map(|v| v.components.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Exact-sort k-nearest-neighbor reference: same distance, same index
/// tie-break, same first-occurrence vote rule as the quantum path.
pub fn classical_knn(v0: &FeatureVector, model: &TrainedModel, k: usize) -> Result<String> {
    let m = model.len();
    if k == 0 || k > m {
        return Err(Error::KExceedsM { k, m });
    }
    let mut order: Vec<u64> = (1..=m as u64).collect();
    let distances: Vec<f64> = model
        .vectors
        .iter()
        .map(|vj| exact_distance(&v0.components, &vj.components))
        .collect();
    order.sort_by(|&a, &b| {
        distances[a as usize - 1]
            .partial_cmp(&distances[b as usize - 1])
            .unwrap()
            .then(a.cmp(&b))
    });
    Ok(majority_vote(&order[..k], &model.labels)?.to_string())
}

/// One classification run's outputs.
#[derive(Debug, Clone)]
pub struct ClassifyOutcome {
    pub label: String,
    /// Winning 1-based training indexes, ascending by distance.
    pub winners: Vec<u64>,
    pub grover_iterations: u64,
    pub budget: u64,
    /// Whether the winners equal the code-order k smallest.
    pub search_success: bool,
    /// Exact distance table (classical reference for reports and dumps).
    pub table: DistanceTable,
    pub trace: Vec<String>,
}

/// Classify a featurized test vector against a trained model.
pub fn classify_vector<R: Rng>(
    v0: &FeatureVector,
    model: &TrainedModel,
    k: usize,
    backend: Backend,
    cfg: &SimConfig,
    rng: &mut R,
    trace: bool,
) -> Result<ClassifyOutcome> {
    let m = model.len();
    if k == 0 || k > m {
        return Err(Error::KExceedsM { k, m });
    }
    let build = build_sigma(
        &v0.components,
        &model.component_rows(),
        backend.distances(),
        cfg,
        rng,
    )?;
    let opts = SearchOptions {
        budget_multiplier: cfg.budget_multiplier,
        forced: backend.forced(),
        trace,
    };
    let result = durr_k_min(&build.sigma, k, &opts, rng)?;
    let label = majority_vote(&result.indexes, &model.labels)?.to_string();
    Ok(ClassifyOutcome {
        label,
        winners: result.indexes,
        grover_iterations: result.grover_iterations,
        budget: result.budget,
        search_success: result.success,
        table: build.table,
        trace: result.trace,
    })
}

/// Featurize an image file and classify it with a seeded generator.
pub fn classify_image(
    path: &Path,
    model: &TrainedModel,
    k: usize,
    backend: Backend,
    cfg: &SimConfig,
    seed: u64,
    trace: bool,
) -> Result<ClassifyOutcome> {
    let v0 = model.featurize(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    classify_vector(&v0, model, k, backend, cfg, &mut rng, trace)
}

/// One test-image decision inside an evaluation sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub ratio: f64,
    pub k: usize,
    pub trial: u32,
    pub source_id: String,
    pub true_label: String,
    pub predicted: String,
    pub winners: Vec<u64>,
    pub grover_iterations: u64,
    pub budget: u64,
}

/// Aggregated accuracy of one (ratio, k) grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub ratio: f64,
    pub k: usize,
    pub trials: u32,
    pub mean_accuracy: f64,
    /// Pooled per-class accuracy within the cell.
    pub per_class: Vec<(String, f64)>,
}

/// Full sweep output: every decision plus per-cell aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub cells: Vec<CellSummary>,
    pub base_seed: u64,
    pub overall_accuracy: f64,
}

/// Sweep k and ratio grids, averaging accuracy over seeded trials. Trial i
/// splits with seed base_seed + i; each decision draws from its own stream
/// derived from (base_seed, ratio, k, trial, item).
pub fn evaluate(
    dataset: &Dataset,
    ks: &[usize],
    ratios: &[f64],
    trials: u32,
    backend: Backend,
    cfg: &SimConfig,
    base_seed: u64,
) -> Result<EvalReport> {
    assert!(!ks.is_empty() && !ratios.is_empty() && trials > 0);
    let mut rows = Vec::new();
    for &ratio in ratios {
        for trial in 0..trials {
            let split = dataset.split(ratio, base_seed.wrapping_add(trial as u64))?;
            let model = train_model(&split)?;
            let mut features = Vec::new();
            for item in split.test_items() {
                features.push((
                    item.path.display().to_string(),
                    item.label.clone(),
                    model.featurize(&item.path)?,
                ));
            }
            for &k in ks {
                for (idx, (source_id, true_label, v0)) in features.iter().enumerate() {
                    let seed = mix_seed(&[
                        base_seed,
                        ratio.to_bits(),
                        k as u64,
                        trial as u64,
                        idx as u64,
                    ]);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let outcome = classify_vector(v0, &model, k, backend, cfg, &mut rng, false)?;
                    rows.push(EvalRow {
                        ratio,
                        k,
                        trial,
                        source_id: source_id.clone(),
                        true_label: true_label.clone(),
                        predicted: outcome.label,
                        winners: outcome.winners,
                        grover_iterations: outcome.grover_iterations,
                        budget: outcome.budget,
                    });
                }
            }
        }
    }

    let mut cells = Vec::new();
    for &ratio in ratios {
        for &k in ks {
            let cell_rows: Vec<&EvalRow> = rows
                .iter()
                .filter(|r| r.ratio == ratio && r.k == k)
                .collect();
            let mut acc_sum = 0.0;
            for trial in 0..trials {
                let trial_rows: Vec<&&EvalRow> =
                    cell_rows.iter().filter(|r| r.trial == trial).collect();
                let correct = trial_rows
                    .iter()
                    .filter(|r| r.predicted == r.true_label)
                    .count();
                acc_sum += correct as f64 / trial_rows.len().max(1) as f64;
            }
            let mut class_labels: Vec<String> =
                cell_rows.iter().map(|r| r.true_label.clone()).collect();
            class_labels.sort();
            class_labels.dedup();
            let per_class = class_labels
                .into_iter()
                .map(|label| {
                    let of_class: Vec<&&EvalRow> = cell_rows
                        .iter()
                        .filter(|r| r.true_label == label)
                        .collect();
                    let correct = of_class
                        .iter()
                        .filter(|r| r.predicted == r.true_label)
                        .count();
                    (label, correct as f64 / of_class.len().max(1) as f64)
                })
                .collect();
            cells.push(CellSummary {
                ratio,
                k,
                trials,
                mean_accuracy: acc_sum / trials as f64,
                per_class,
            });
        }
    }

    let correct = rows.iter().filter(|r| r.predicted == r.true_label).count();
    let overall_accuracy = correct as f64 / rows.len().max(1) as f64;
    Ok(EvalReport {
        rows,
        cells,
        base_seed,
        overall_accuracy,
    })
}

fn mix_seed(values: &[u64]) -> u64 {
    // SplitMix64 over the concatenated inputs.
    let mut state = 0x9e3779b97f4a7c15u64;
    for &v in values {
        state = state.wrapping_add(v).wrapping_mul(0xbf58476d1ce4e5b9);
        state ^= state >> 30;
        state = state.wrapping_mul(0x94d049bb133111eb);
        state ^= state >> 31;
    }
    state
}

impl EvalReport {
    /// Per-decision rows as CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "ratio",
            "k",
            "trial",
            "source_id",
            "true_label",
            "predicted",
            "winners",
            "grover_iterations",
            "budget",
        ])?;
        for r in &self.rows {
            let winners = r
                .winners
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join("|");
            w.write_record([
                format!("{}", r.ratio),
                r.k.to_string(),
                r.trial.to_string(),
                r.source_id.clone(),
                r.true_label.clone(),
                r.predicted.clone(),
                winners,
                r.grover_iterations.to_string(),
                r.budget.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Human-readable accuracy table.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "evaluation over {} decisions (base seed {})\n",
            self.rows.len(),
            self.base_seed
        ));
        for cell in &self.cells {
            out.push_str(&format!(
                "ratio {:.2}  k {}  trials {}  mean accuracy {:.3}\n",
                cell.ratio, cell.k, cell.trials, cell.mean_accuracy
            ));
            for (label, acc) in &cell.per_class {
                out.push_str(&format!("    {label}: {acc:.3}\n"));
            }
        }
        out.push_str(&format!("overall accuracy {:.3}\n", self.overall_accuracy));
        out
    }
}
