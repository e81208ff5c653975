//! Command-line interface for the quantum KNN image classifier.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qknn_core::pipeline::{
    classify_image, evaluate, load_dataset, read_features_csv, run_demo, train_model,
    write_features_csv, Backend, TrainedModel,
};
use qknn_core::SimConfig;

#[derive(Parser)]
#[command(name = "qknn", about = "Quantum k-nearest-neighbor image classification", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Statevector circuits end to end (small training sets only).
    Full,
    /// Exact distances in the register; search circuits simulated.
    Oracle,
}

impl From<Mode> for Backend {
    fn from(mode: Mode) -> Backend {
        match mode {
            Mode::Full => Backend::Full,
            Mode::Oracle => Backend::Oracle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Extract feature vectors of every image under a class directory tree.
    Features {
        /// Directory with one subdirectory per class.
        dir: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify one image against a training set.
    Classify {
        /// Test image path.
        image: PathBuf,
        /// Training images directory or a feature CSV written by `features`.
        #[arg(long)]
        train: PathBuf,
        /// Number of nearest neighbors.
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        /// Simulation backend.
        #[arg(long, value_enum, default_value = "oracle")]
        mode: Mode,
        /// Seed for every random choice in the run.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Flat key-value config file (b, t, c, qubit_cap).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the distance table as CSV (index, exact, code).
        #[arg(long)]
        dump_distances: Option<PathBuf>,
        /// Print the candidate-set evolution of the search.
        #[arg(long)]
        trace: bool,
    },
    /// Sweep k and training-ratio grids, averaging accuracy over trials.
    Evaluate {
        /// Directory with one subdirectory per class.
        #[arg(long)]
        data: PathBuf,
        /// Comma-separated k grid.
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,9")]
        k: Vec<usize>,
        /// Comma-separated training ratios in (0, 1).
        #[arg(long, value_delimiter = ',', default_value = "0.9")]
        ratio: Vec<f64>,
        /// Seeded trials per grid cell.
        #[arg(long, default_value_t = 5)]
        trials: u32,
        /// Report CSV path; a text summary goes to stdout.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value = "oracle")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the bundled ten-image airplanes/Leopards walkthrough.
    DemoPaper {
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<SimConfig> {
    match path {
        Some(p) => SimConfig::from_file(p).with_context(|| format!("reading {}", p.display())),
        None => Ok(SimConfig::default()),
    }
}

fn load_model(train: &Path) -> Result<TrainedModel> {
    if train.is_dir() {
        let dataset = load_dataset(train)?;
        for warning in &dataset.warnings {
            eprintln!("warning: {warning}");
        }
        Ok(train_model(&dataset)?)
    } else {
        let file = read_features_csv(train)?;
        Ok(TrainedModel::from_feature_file(file, train)?)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Features { dir, out } => {
            let dataset = load_dataset(&dir)?;
            for warning in &dataset.warnings {
                eprintln!("warning: {warning}");
            }
            let model = train_model(&dataset)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_features_csv(file, &model.vectors, model.extractor.bounds())?;
            println!(
                "wrote {} feature vectors ({} classes) to {}",
                model.vectors.len(),
                dataset.labels.len(),
                out.display()
            );
        }
        Command::Classify {
            image,
            train,
            k,
            mode,
            seed,
            config,
            dump_distances,
            trace,
        } => {
            let cfg = load_config(&config)?;
            let model = load_model(&train)?;
            let outcome = classify_image(&image, &model, k, mode.into(), &cfg, seed, trace)?;
            if let Some(path) = dump_distances {
                let file =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                outcome.table.write_csv(file)?;
            }
            for line in &outcome.trace {
                eprintln!("trace: {line}");
            }
            println!(
                "winners: {}",
                outcome
                    .winners
                    .iter()
                    .map(|j| format!("{j} ({})", model.labels[*j as usize - 1]))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!(
                "grover iterations: {} of budget {}",
                outcome.grover_iterations, outcome.budget
            );
            println!("label: {}", outcome.label);
        }
        Command::Evaluate {
            data,
            k,
            ratio,
            trials,
            report,
            mode,
            seed,
            config,
        } => {
            let cfg = load_config(&config)?;
            if k.is_empty() || ratio.is_empty() || trials == 0 {
                bail!("k grid, ratio grid and trials must be nonempty");
            }
            let dataset = load_dataset(&data)?;
            for warning in &dataset.warnings {
                eprintln!("warning: {warning}");
            }
            let result = evaluate(&dataset, &k, &ratio, trials, mode.into(), &cfg, seed)?;
            let file =
                File::create(&report).with_context(|| format!("creating {}", report.display()))?;
            result.write_csv(file)?;
            print!("{}", result.summary_text());
            println!("rows written to {}", report.display());
        }
        Command::DemoPaper { k, seed, config } => {
            let cfg = load_config(&config)?;
            let dir = tempfile::tempdir()?;
            let (train_root, test_image) = unpack_demo_fixture(dir.path())?;
            let outcome = run_demo(&train_root, &test_image, "airplanes", k, &cfg, seed)?;
            print!("{}", outcome.render());
            println!(
                "within-class distances all below cross-class distances: {}",
                if outcome.ordering_separates_classes {
                    "yes"
                } else {
                    "no"
                }
            );
        }
    }
    Ok(())
}

/// The ten bundled training images plus the test image.
const DEMO_FILES: [(&str, &[u8]); 11] = [
    (
        "train/airplanes/airplanes_1.png",
        include_bytes!("../../../fixtures/demo/train/airplanes/airplanes_1.png"),
    ),
    (
        "train/airplanes/airplanes_2.png",
        include_bytes!("../../../fixtures/demo/train/airplanes/airplanes_2.png"),
    ),
    (
        "train/airplanes/airplanes_3.png",
        include_bytes!("../../../fixtures/demo/train/airplanes/airplanes_3.png"),
    ),
    (
        "train/airplanes/airplanes_4.png",
        include_bytes!("../../../fixtures/demo/train/airplanes/airplanes_4.png"),
    ),
    (
        "train/airplanes/airplanes_5.png",
        include_bytes!("../../../fixtures/demo/train/airplanes/airplanes_5.png"),
    ),
    (
        "train/Leopards/Leopards_1.png",
        include_bytes!("../../../fixtures/demo/train/Leopards/Leopards_1.png"),
    ),
    (
        "train/Leopards/Leopards_2.png",
        include_bytes!("../../../fixtures/demo/train/Leopards/Leopards_2.png"),
    ),
    (
        "train/Leopards/Leopards_3.png",
        include_bytes!("../../../fixtures/demo/train/Leopards/Leopards_3.png"),
    ),
    (
        "train/Leopards/Leopards_4.png",
        include_bytes!("../../../fixtures/demo/train/Leopards/Leopards_4.png"),
    ),
    (
        "train/Leopards/Leopards_5.png",
        include_bytes!("../../../fixtures/demo/train/Leopards/Leopards_5.png"),
    ),
    (
        "test/test_airplane.png",
        include_bytes!("../../../fixtures/demo/test/test_airplane.png"),
    ),
];

fn unpack_demo_fixture(dir: &Path) -> Result<(PathBuf, PathBuf)> {
    for (rel, bytes) in DEMO_FILES {
        let path = dir.join(rel);
        std::fs::create_dir_all(path.parent().expect("fixture paths have parents"))?;
        let mut file = File::create(&path)?;
        file.write_all(bytes)?;
    }
    Ok((dir.join("train"), dir.join("test/test_airplane.png")))
}
