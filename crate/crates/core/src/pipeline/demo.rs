//! The bundled ten-image walkthrough: rank the training distances, search for
//! the k nearest and vote.

use std::path::Path;

use super::dataset::load_dataset;
use super::eval::{classify_image, train_model, Backend};
use crate::config::SimConfig;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct DemoRow {
    /// 1-based training index.
    pub index: u64,
    pub name: String,
    pub label: String,
    /// 1-based rank by ascending distance.
    pub rank: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct DemoOutcome {
    /// One row per training image, in training-index order.
    pub rows: Vec<DemoRow>,
    pub winners: Vec<u64>,
    pub winner_names: Vec<String>,
    pub predicted: String,
    pub grover_iterations: u64,
    pub budget: u64,
    /// Every distance within the expected class is below every distance
    /// outside it.
    pub ordering_separates_classes: bool,
}

/// Run the walkthrough: features, oracle-level distances, k-minimum search,
/// vote.
pub fn run_demo(
    train_root: &Path,
    test_image: &Path,
    expected_class: &str,
    k: usize,
    cfg: &SimConfig,
    seed: u64,
) -> Result<DemoOutcome> {
    let dataset = load_dataset(train_root)?;
    let model = train_model(&dataset)?;
    let outcome = classify_image(test_image, &model, k, Backend::Oracle, cfg, seed, false)?;

    let names: Vec<String> = dataset
        .items
        .iter()
        .map(|item| {
            item.path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| item.path.display().to_string())
        })
        .collect();

    let mut order: Vec<usize> = (0..model.len()).collect();
    order.sort_by(|&a, &b| {
        outcome.table.exact[a]
            .partial_cmp(&outcome.table.exact[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut rank_of = vec![0usize; model.len()];
    for (rank, &idx) in order.iter().enumerate() {
        rank_of[idx] = rank + 1;
    }

    let rows: Vec<DemoRow> = (0..model.len())
        .map(|idx| DemoRow {
            index: idx as u64 + 1,
            name: names[idx].clone(),
            label: model.labels[idx].clone(),
            rank: rank_of[idx],
            distance: outcome.table.exact[idx],
        })
        .collect();

    let within: Vec<f64> = rows
        .iter()
        .filter(|r| r.label == expected_class)
        .map(|r| r.distance)
        .collect();
    let cross: Vec<f64> = rows
        .iter()
        .filter(|r| r.label != expected_class)
        .map(|r| r.distance)
        .collect();
    let ordering_separates_classes = match (
        within.iter().cloned().reduce(f64::max),
        cross.iter().cloned().reduce(f64::min),
    ) {
        (Some(max_within), Some(min_cross)) => max_within < min_cross,
        _ => false,
    };

    let winner_names = outcome
        .winners
        .iter()
        .map(|&j| names[j as usize - 1].clone())
        .collect();

    Ok(DemoOutcome {
        rows,
        winners: outcome.winners,
        winner_names,
        predicted: outcome.label,
        grover_iterations: outcome.grover_iterations,
        budget: outcome.budget,
        ordering_separates_classes,
    })
}

impl DemoOutcome {
    /// The ranking table plus the search result, ready to print.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("index  image                 rank  distance\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:>5}  {:<20}  {:>4}  {:.12}\n",
                row.index, row.name, row.rank, row.distance
            ));
        }
        out.push_str(&format!(
            "winners: {} ({})\n",
            self.winners
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            self.winner_names.join(", ")
        ));
        out.push_str(&format!(
            "predicted class: {} (grover iterations {} of budget {})\n",
            self.predicted, self.grover_iterations, self.budget
        ));
        out
    }
}
