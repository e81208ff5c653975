//! Classical feature extraction: 72 color-histogram components plus 8
//! min-max-normalized texture components, L2-normalized as one 80-vector.

mod color;
mod texture;

use std::path::Path;

pub use color::{
    color_histogram, color_index, quantize_hsb, rgb_to_hsb, HsbPixel, QuantizedHsb, COLOR_BINS,
};
use image::RgbImage;
pub use texture::{
    glcm, glcm_stats, texture_raw, Glcm, GrayLevels, HaralickStats, TextureBounds, DIRECTIONS,
    GRAY_LEVELS, TEXTURE_COMPONENTS,
};

use crate::error::{Error, Result};

/// Total descriptor dimension.
pub const FEATURE_DIM: usize = COLOR_BINS + TEXTURE_COMPONENTS;

/// The 80-component descriptor of one image, unit Euclidean norm, all
/// components in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub components: Vec<f64>,
    pub label: Option<String>,
    pub source_id: String,
}

impl FeatureVector {
    /// Validate length, range and unit norm.
    pub fn new(components: Vec<f64>, label: Option<String>, source_id: String) -> Result<Self> {
        if components.len() != FEATURE_DIM {
            return Err(Error::BadFeatureLength(components.len(), FEATURE_DIM));
        }
        for (index, &value) in components.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(Error::ComponentOutOfRange { index, value });
            }
        }
        let norm: f64 = components.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::ComponentOutOfRange {
                index: FEATURE_DIM,
                value: norm,
            });
        }
        Ok(FeatureVector {
            components,
            label,
            source_id,
        })
    }

    pub fn inner_product(&self, other: &FeatureVector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// Extractor with texture bounds frozen from a training set.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureExtractor {
    bounds: TextureBounds,
}

impl FeatureExtractor {
    /// Fit the texture min-max bounds over the training images.
    pub fn fit<'a, I: IntoIterator<Item = &'a RgbImage>>(images: I) -> Result<Self> {
        let mut raws = Vec::new();
        for img in images {
            raws.push(texture_raw(img)?);
        }
        if raws.is_empty() {
            return Err(Error::NoTrainingData);
        }
        Ok(FeatureExtractor {
            bounds: TextureBounds::fit(raws.iter()),
        })
    }

    pub fn from_bounds(bounds: TextureBounds) -> Self {
        FeatureExtractor { bounds }
    }

    pub fn bounds(&self) -> &TextureBounds {
        &self.bounds
    }

    /// Histogram + normalized texture, concatenated and L2-normalized.
    pub fn extract(
        &self,
        img: &RgbImage,
        source_id: impl Into<String>,
        label: Option<String>,
    ) -> Result<FeatureVector> {
        let hist = color_histogram(img)?;
        let tex = self.bounds.normalize(&texture_raw(img)?);
        let mut components = Vec::with_capacity(FEATURE_DIM);
        components.extend_from_slice(&hist);
        components.extend_from_slice(&tex);
        let norm: f64 = components.iter().map(|v| v * v).sum::<f64>().sqrt();
        // The histogram always carries mass, so the norm is positive.
        for v in &mut components {
            *v /= norm;
        }
        FeatureVector::new(components, label, source_id.into())
    }

    /// Decode an image file and extract, attaching the path to decode errors.
    pub fn extract_path(&self, path: &Path, label: Option<String>) -> Result<FeatureVector> {
        let img = load_rgb(path)?;
        self.extract(&img, path.display().to_string(), label)
    }
}

/// Decode a PNG or JPEG file to 8-bit RGB.
pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(|source| Error::ImageDecode {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(img.to_rgb8())
}
