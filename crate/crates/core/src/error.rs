//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty image")]
    EmptyImage,
    #[error("image must be at least 2x2 for co-occurrence statistics, got {width}x{height}")]
    ImageTooSmall { width: u32, height: u32 },
    #[error("unsupported co-occurrence direction ({0}, {1})")]
    BadDirection(i32, i32),
    #[error("failed to decode image {path}: {source}")]
    ImageDecode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("feature component {index} = {value} outside [0, 1]")]
    ComponentOutOfRange { index: usize, value: f64 },
    #[error("feature vector has {0} components, expected {1}")]
    BadFeatureLength(usize, usize),

    #[error("qubit index {index} out of range for {total}-qubit state")]
    QubitOutOfRange { index: usize, total: usize },
    #[error("register layout would need {requested} qubits, cap is {cap}")]
    CapacityExceeded { requested: usize, cap: usize },
    #[error("duplicate register name {0:?}")]
    DuplicateRegister(String),
    #[error("register width must be at least 1")]
    EmptyRegister,
    #[error("constant {constant} does not fit in {width}-qubit register")]
    ConstantTooWide { constant: u64, width: usize },
    #[error("states have different register layouts")]
    LayoutMismatch,
    #[error("conditioning on an event of zero probability")]
    ZeroProbabilityBranch,
    #[error("rotation angle must be finite")]
    NonFiniteAngle,

    #[error("phase register needs at least 1 qubit")]
    NoPhaseQubits,
    #[error("k = {k} exceeds number of training vectors M = {m}")]
    KExceedsM { k: usize, m: usize },
    #[error("threshold {threshold} does not fit in {bits}-bit distance register")]
    ThresholdOutOfRange { threshold: u64, bits: u32 },
    #[error("need at least one training vector")]
    NoTrainingData,

    #[error("dataset root {0} has no class directories with images")]
    EmptyDataset(PathBuf),
    #[error("class directory {0} contains no images")]
    EmptyClass(PathBuf),
    #[error("class {label:?} has {count} items; need at least 2 to split")]
    ClassTooSmall { label: String, count: usize },
    #[error("training ratio {0} outside (0, 1)")]
    BadRatio(f64),
    #[error("feature file {path} is missing texture bounds comments; regenerate it with the `features` command")]
    MissingBounds { path: PathBuf },
    #[error("malformed feature file {path}: {reason}")]
    BadFeatureFile { path: PathBuf, reason: String },

    #[error("bad config line {line:?}: {reason}")]
    BadConfig { line: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
