//! Labeled image collections and stratified train/test splitting.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetItem {
    pub path: PathBuf,
    pub label: String,
}

/// Train/test assignment over dataset item indexes.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
    pub ratio: f64,
}

/// Image paths with class labels taken from subdirectory names.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub items: Vec<DatasetItem>,
    pub labels: Vec<String>,
    pub split: Option<Split>,
    /// Non-fatal loader notes (ignored files, etc).
    pub warnings: Vec<String>,
}

/// Enumerate one subdirectory per class, visiting paths in sorted order.
/// Non-image files are skipped with a warning; a class directory without any
/// image is an error.
pub fn load_dataset(root: &Path) -> Result<Dataset> {
    let mut class_dirs: Vec<PathBuf> = std::fs::read_dir(root)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    class_dirs.sort();

    let mut items = Vec::new();
    let mut labels = Vec::new();
    let mut warnings = Vec::new();
    for dir in &class_dirs {
        let label = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        let before = items.len();
        for file in files {
            let is_image = file
                .extension()
                .map(|e| {
                    let e = e.to_string_lossy().to_lowercase();
                    IMAGE_EXTENSIONS.contains(&e.as_str())
                })
                .unwrap_or(false);
            if is_image {
                items.push(DatasetItem {
                    path: file,
                    label: label.clone(),
                });
            } else {
                warnings.push(format!("ignored non-image file {}", file.display()));
            }
        }
        if items.len() == before {
            return Err(Error::EmptyClass(dir.clone()));
        }
        labels.push(label);
    }
    if items.is_empty() {
        return Err(Error::EmptyDataset(root.to_path_buf()));
    }
    Ok(Dataset {
        items,
        labels,
        split: None,
        warnings,
    })
}

impl Dataset {
    /// Per-class stratified random split at the given ratio, seeded.
    pub fn split(&self, ratio: f64, seed: u64) -> Result<Dataset> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::BadRatio(ratio));
        }
        let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (idx, item) in self.items.iter().enumerate() {
            by_class.entry(item.label.as_str()).or_default().push(idx);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (label, mut indexes) in by_class {
            let count = indexes.len();
            if count < 2 {
                return Err(Error::ClassTooSmall {
                    label: label.to_string(),
                    count,
                });
            }
            indexes.shuffle(&mut rng);
            let n_train = ((count as f64 * ratio).round() as usize).clamp(1, count - 1);
            train.extend_from_slice(&indexes[..n_train]);
            test.extend_from_slice(&indexes[n_train..]);
        }
        train.sort_unstable();
        test.sort_unstable();
        let mut out = self.clone();
        out.split = Some(Split {
            train,
            test,
            seed,
            ratio,
        });
        Ok(out)
    }

    pub fn train_items(&self) -> Vec<&DatasetItem> {
        match &self.split {
            Some(split) => split.train.iter().map(|&i| &self.items[i]).collect(),
            None => self.items.iter().collect(),
        }
    }

    pub fn test_items(&self) -> Vec<&DatasetItem> {
        match &self.split {
            Some(split) => split.test.iter().map(|&i| &self.items[i]).collect(),
            None => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::RgbImage;

    fn write_image(path: &Path, tone: u8) {
        RgbImage::from_pixel(4, 4, image::Rgb([tone, tone / 2, 255 - tone]))
            .save(path)
            .unwrap();
    }

    fn sample_root(per_class: &[(&str, usize)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (label, count) in per_class {
            let class_dir = dir.path().join(label);
            std::fs::create_dir(&class_dir).unwrap();
            for i in 0..*count {
                write_image(&class_dir.join(format!("{label}_{i}.png")), (i * 40) as u8);
            }
        }
        dir
    }

    #[test]
    fn loads_two_classes_of_five() {
        let root = sample_root(&[("airplanes", 5), ("leopards", 5)]);
        let ds = load_dataset(root.path()).unwrap();
        assert_eq!(ds.items.len(), 10);
        assert_eq!(ds.labels, vec!["airplanes", "leopards"]);
        assert!(ds.warnings.is_empty());
    }

    #[test]
    fn empty_root_is_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_dataset(dir.path()),
            Err(Error::EmptyDataset(_))
        ));
    }

    #[test]
    fn non_image_files_warned_and_ignored() {
        let root = sample_root(&[("a", 2)]);
        std::fs::write(root.path().join("a").join("notes.txt"), "hello").unwrap();
        let ds = load_dataset(root.path()).unwrap();
        assert_eq!(ds.items.len(), 2);
        assert_eq!(ds.warnings.len(), 1);
        assert!(ds.warnings[0].contains("notes.txt"));
    }

    #[test]
    fn class_without_images_is_error() {
        let root = sample_root(&[("a", 2)]);
        std::fs::create_dir(root.path().join("empty_class")).unwrap();
        std::fs::write(root.path().join("empty_class").join("x.txt"), "no").unwrap();
        assert!(matches!(
            load_dataset(root.path()),
            Err(Error::EmptyClass(_))
        ));
    }

    #[test]
    fn split_ratios() {
        let root = sample_root(&[("a", 10)]);
        let ds = load_dataset(root.path()).unwrap();
        let split = ds.split(0.9, 7).unwrap();
        let s = split.split.as_ref().unwrap();
        assert_eq!(s.train.len(), 9);
        assert_eq!(s.test.len(), 1);

        let root = sample_root(&[("a", 4)]);
        let ds = load_dataset(root.path()).unwrap();
        let split = ds.split(0.5, 7).unwrap();
        let s = split.split.as_ref().unwrap();
        assert_eq!(s.train.len(), 2);
        assert_eq!(s.test.len(), 2);
    }

    #[test]
    fn split_is_deterministic_disjoint_and_exhaustive() {
        let root = sample_root(&[("a", 7), ("b", 5)]);
        let ds = load_dataset(root.path()).unwrap();
        let s1 = ds.split(0.7, 99).unwrap();
        let s2 = ds.split(0.7, 99).unwrap();
        assert_eq!(s1.split, s2.split);
        let s = s1.split.unwrap();
        let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn split_rejects_bad_inputs() {
        let root = sample_root(&[("a", 3)]);
        let ds = load_dataset(root.path()).unwrap();
        assert!(matches!(ds.split(1.0, 0), Err(Error::BadRatio(_))));

        let root = sample_root(&[("a", 3), ("b", 1)]);
        // Class "b" has a single item.
        let mut items = load_dataset(root.path());
        // One-image class loads fine but cannot be split.
        let ds = items.as_mut().unwrap();
        assert!(matches!(
            ds.split(0.5, 0),
            Err(Error::ClassTooSmall { count: 1, .. })
        ));
    }
}
