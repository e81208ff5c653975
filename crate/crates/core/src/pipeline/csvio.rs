//! Feature-vector CSV files.
//!
//! One row per image: source_id, label, then the 80 components at full
//! precision. Two leading `#` comment lines carry the texture min/max bounds
//! frozen from the training set so test images can be featurized
//! consistently when classifying against a CSV.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{FeatureVector, TextureBounds, FEATURE_DIM, TEXTURE_COMPONENTS};

/// Parsed feature file: vectors plus the bounds comments when present.
#[derive(Debug, Clone)]
pub struct FeatureFile {
    pub vectors: Vec<FeatureVector>,
    pub bounds: Option<TextureBounds>,
}

pub fn write_features_csv<W: Write>(
    mut out: W,
    vectors: &[FeatureVector],
    bounds: &TextureBounds,
) -> Result<()> {
    let join = |vals: &[f64]| {
        vals.iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    writeln!(out, "#texture_min,{}", join(&bounds.min))?;
    writeln!(out, "#texture_max,{}", join(&bounds.max))?;
    let mut w = csv::Writer::from_writer(out);
    for v in vectors {
        let mut record = Vec::with_capacity(FEATURE_DIM + 2);
        record.push(v.source_id.clone());
        record.push(v.label.clone().unwrap_or_default());
        record.extend(v.components.iter().map(|c| format!("{c}")));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features_csv(path: &Path) -> Result<FeatureFile> {
    let text = std::fs::read_to_string(path)?;
    let bad = |reason: String| Error::BadFeatureFile {
        path: path.to_path_buf(),
        reason,
    };

    let mut min = None;
    let mut max = None;
    let mut body = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.split(',');
            let key = parts.next().unwrap_or_default();
            let values: std::result::Result<Vec<f64>, _> =
                parts.map(|p| p.trim().parse::<f64>()).collect();
            match (key, values) {
                ("texture_min", Ok(v)) if v.len() == TEXTURE_COMPONENTS => min = Some(v),
                ("texture_max", Ok(v)) if v.len() == TEXTURE_COMPONENTS => max = Some(v),
                _ => {} // unknown comments are ignored
            }
        } else if !line.trim().is_empty() {
            body.push_str(line);
            body.push('\n');
        }
    }
    let bounds = match (min, max) {
        (Some(mn), Some(mx)) => Some(TextureBounds {
            min: mn.try_into().expect("length checked"),
            max: mx.try_into().expect("length checked"),
        }),
        _ => None,
    };

    let mut vectors = Vec::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(body.as_bytes());
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != FEATURE_DIM + 2 {
            return Err(bad(format!(
                "row {} has {} fields, expected {}",
                row + 1,
                record.len(),
                FEATURE_DIM + 2
            )));
        }
        let source_id = record[0].to_string();
        let label = if record[1].is_empty() {
            None
        } else {
            Some(record[1].to_string())
        };
        let components: std::result::Result<Vec<f64>, _> = record
            .iter()
            .skip(2)
            .map(|field| field.parse::<f64>())
            .collect();
        let components =
            components.map_err(|e| bad(format!("row {}: bad component: {e}", row + 1)))?;
        vectors.push(FeatureVector::new(components, label, source_id)?);
    }
    if vectors.is_empty() {
        return Err(bad("no feature rows".into()));
    }
    Ok(FeatureFile { vectors, bounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_vectors() -> Vec<FeatureVector> {
        let mut comps = vec![0.0; FEATURE_DIM];
        comps[3] = 0.6;
        comps[40] = 0.8;
        let a = FeatureVector::new(comps, Some("cats".into()), "img/a.png".into()).unwrap();
        let mut comps = vec![0.0; FEATURE_DIM];
        comps[7] = 1.0;
        let b = FeatureVector::new(comps, None, "img/b.png".into()).unwrap();
        vec![a, b]
    }

    fn sample_bounds() -> TextureBounds {
        TextureBounds {
            min: [0.0, 0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 0.0],
            max: [1.0, 2.0, 3.0, 4.0, 0.5, 0.25, 0.125, 1.0],
        }
    }

    #[test]
    fn roundtrip_preserves_vectors_and_bounds() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        let vectors = sample_vectors();
        let bounds = sample_bounds();
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &vectors, &bounds).unwrap();
        std::fs::write(&path, &buf).unwrap();

        let file = read_features_csv(&path).unwrap();
        assert_eq!(file.vectors, vectors);
        assert_eq!(file.bounds, Some(bounds));
    }

    #[test]
    fn file_without_bounds_comments_reads_as_none() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        let mut buf = Vec::new();
        write_features_csv(&mut buf, &sample_vectors(), &sample_bounds()).unwrap();
        let body: String = String::from_utf8(buf)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        std::fs::write(&path, body).unwrap();
        let file = read_features_csv(&path).unwrap();
        assert!(file.bounds.is_none());
        assert_eq!(file.vectors.len(), 2);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.csv");
        std::fs::write(&path, "a,b,0.5,0.5\n").unwrap();
        assert!(matches!(
            read_features_csv(&path),
            Err(Error::BadFeatureFile { .. })
        ));
    }
}
