//! Dataset ingestion, train/test orchestration, the classical reference
//! classifier, evaluation sweeps and reports.

mod csvio;
mod dataset;
mod demo;
mod eval;

pub use csvio::{read_features_csv, write_features_csv, FeatureFile};
pub use dataset::{load_dataset, Dataset, DatasetItem, Split};
pub use demo::{run_demo, DemoOutcome, DemoRow};
pub use eval::{
    classical_knn, classify_image, classify_vector, evaluate, train_model, Backend, CellSummary,
    ClassifyOutcome, EvalReport, EvalRow, TrainedModel,
};
