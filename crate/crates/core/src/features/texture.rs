//! Gray-level co-occurrence matrices and Haralick texture statistics.

use image::RgbImage;

use crate::error::{Error, Result};

/// Gray levels used for co-occurrence counting.
pub const GRAY_LEVELS: usize = 16;

/// The four unit offsets (row, col) along which pairs are counted.
pub const DIRECTIONS: [(i32, i32); 4] = [(0, 1), (-1, 1), (-1, 0), (-1, -1)];

/// Number of texture components (mean and variance of four statistics).
pub const TEXTURE_COMPONENTS: usize = 8;

/// Image quantized to `GRAY_LEVELS` gray levels.
#[derive(Debug, Clone)]
pub struct GrayLevels {
    pub width: usize,
    pub height: usize,
    data: Vec<u8>,
}

impl GrayLevels {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width * height);
        assert!(data.iter().all(|&v| (v as usize) < GRAY_LEVELS));
        GrayLevels {
            width,
            height,
            data,
        }
    }

    /// Integer-rounded Rec.601 luma, then 256 luma values folded onto 16 levels.
    pub fn from_rgb(img: &RgbImage) -> Self {
        let (w, h) = (img.width() as usize, img.height() as usize);
        let mut data = Vec::with_capacity(w * h);
        for px in img.pixels() {
            let [r, g, b] = px.0;
            let luma = (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64).round() as u32;
            data.push((luma.min(255) / GRAY_LEVELS as u32) as u8);
        }
        GrayLevels {
            width: w,
            height: h,
            data,
        }
    }

    fn at(&self, row: usize, col: usize) -> usize {
        self.data[row * self.width + col] as usize
    }
}

/// Normalized symmetric co-occurrence matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    p: Vec<f64>,
}

impl Glcm {
    /// Build directly from probabilities (row-major). Intended for tests and
    /// for statistics over matrices of any level count.
    pub fn from_probabilities(levels: usize, p: Vec<f64>) -> Self {
        assert_eq!(p.len(), levels * levels);
        Glcm { levels, p }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// Count ordered gray-level pairs at the given offset, add the transpose and
/// normalize so entries sum to 1.
pub fn glcm(gray: &GrayLevels, direction: (i32, i32)) -> Result<Glcm> {
    if !DIRECTIONS.contains(&direction) {
        return Err(Error::BadDirection(direction.0, direction.1));
    }
    if gray.width < 2 || gray.height < 2 {
        return Err(Error::ImageTooSmall {
            width: gray.width as u32,
            height: gray.height as u32,
        });
    }
    let (dr, dc) = direction;
    let mut counts = vec![0u64; GRAY_LEVELS * GRAY_LEVELS];
    let mut total = 0u64;
    for row in 0..gray.height as i32 {
        for col in 0..gray.width as i32 {
            let (nr, nc) = (row + dr, col + dc);
            if nr < 0 || nc < 0 || nr >= gray.height as i32 || nc >= gray.width as i32 {
                continue;
            }
            let a = gray.at(row as usize, col as usize);
            let b = gray.at(nr as usize, nc as usize);
            counts[a * GRAY_LEVELS + b] += 1;
            counts[b * GRAY_LEVELS + a] += 1;
            total += 2;
        }
    }
    let p = counts
        .into_iter()
        .map(|c| c as f64 / total as f64)
        .collect();
    Ok(Glcm {
        levels: GRAY_LEVELS,
        p,
    })
}

/// Contrast, correlation, energy and entropy of one co-occurrence matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaralickStats {
    pub contrast: f64,
    pub correlation: f64,
    pub energy: f64,
    pub entropy: f64,
}

impl HaralickStats {
    fn as_array(&self) -> [f64; 4] {
        [self.contrast, self.correlation, self.energy, self.entropy]
    }
}

/// Standard Haralick definitions over a normalized matrix:
/// contrast Σ p(i,j)(i−j)², correlation Σ p(i,j)(i−μᵢ)(j−μⱼ)/(σᵢσⱼ),
/// energy Σ p², entropy −Σ p log₂ p. A zero-variance marginal makes the
/// correlation 0.
pub fn glcm_stats(m: &Glcm) -> HaralickStats {
    let n = m.levels();
    let mut row_marginal = vec![0.0; n];
    let mut col_marginal = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            row_marginal[i] += m.at(i, j);
            col_marginal[j] += m.at(i, j);
        }
    }
    let mean = |marginal: &[f64]| -> f64 {
        marginal
            .iter()
            .enumerate()
            .map(|(i, p)| i as f64 * p)
            .sum()
    };
    let mu_i = mean(&row_marginal);
    let mu_j = mean(&col_marginal);
    let var = |marginal: &[f64], mu: f64| -> f64 {
        marginal
            .iter()
            .enumerate()
            .map(|(i, p)| (i as f64 - mu).powi(2) * p)
            .sum()
    };
    let sigma_i = var(&row_marginal, mu_i).sqrt();
    let sigma_j = var(&col_marginal, mu_j).sqrt();

    let mut contrast = 0.0;
    let mut covariance = 0.0;
    let mut energy = 0.0;
    let mut entropy = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = m.at(i, j);
            contrast += p * (i as f64 - j as f64).powi(2);
            covariance += p * (i as f64 - mu_i) * (j as f64 - mu_j);
            energy += p * p;
            if p > 0.0 {
                entropy -= p * p.log2();
            }
        }
    }
    let correlation = if sigma_i > 0.0 && sigma_j > 0.0 {
        covariance / (sigma_i * sigma_j)
    } else {
        0.0
    };
    HaralickStats {
        contrast,
        correlation,
        energy,
        entropy,
    }
}

/// Raw 8-component texture descriptor: for each of the four statistics, the
/// mean and then the population variance across the four directions.
pub fn texture_raw(img: &RgbImage) -> Result<[f64; TEXTURE_COMPONENTS]> {
    let gray = GrayLevels::from_rgb(img);
    let mut per_direction = Vec::with_capacity(DIRECTIONS.len());
    for &dir in &DIRECTIONS {
        per_direction.push(glcm_stats(&glcm(&gray, dir)?).as_array());
    }
    let mut out = [0.0; TEXTURE_COMPONENTS];
    let n = per_direction.len() as f64;
    for stat in 0..4 {
        let mean = per_direction.iter().map(|s| s[stat]).sum::<f64>() / n;
        let variance = per_direction
            .iter()
            .map(|s| (s[stat] - mean).powi(2))
            .sum::<f64>()
            / n;
        out[stat] = mean;
        out[stat + 4] = variance;
    }
    Ok(out)
}

/// Per-component min-max bounds frozen from a training set.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureBounds {
    pub min: [f64; TEXTURE_COMPONENTS],
    pub max: [f64; TEXTURE_COMPONENTS],
}

impl TextureBounds {
    /// Fit bounds over raw texture descriptors.
    pub fn fit<'a, I: IntoIterator<Item = &'a [f64; TEXTURE_COMPONENTS]>>(raws: I) -> Self {
        let mut min = [f64::INFINITY; TEXTURE_COMPONENTS];
        let mut max = [f64::NEG_INFINITY; TEXTURE_COMPONENTS];
        for raw in raws {
            for c in 0..TEXTURE_COMPONENTS {
                min[c] = min[c].min(raw[c]);
                max[c] = max[c].max(raw[c]);
            }
        }
        TextureBounds { min, max }
    }

    /// Min-max normalize into [0, 1], clamping out-of-range test values.
    /// Degenerate bounds (max = min) map to 0.
    pub fn normalize(&self, raw: &[f64; TEXTURE_COMPONENTS]) -> [f64; TEXTURE_COMPONENTS] {
        let mut out = [0.0; TEXTURE_COMPONENTS];
        for c in 0..TEXTURE_COMPONENTS {
            let span = self.max[c] - self.min[c];
            if span > 0.0 {
                out[c] = ((raw[c] - self.min[c]) / span).clamp(0.0, 1.0);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_image() -> RgbImage {
        RgbImage::from_pixel(4, 4, image::Rgb([200, 200, 200]))
    }

    #[test]
    fn constant_image_single_diagonal_entry() {
        let gray = GrayLevels::from_rgb(&constant_image());
        for &dir in &DIRECTIONS {
            let m = glcm(&gray, dir).unwrap();
            assert!((m.sum() - 1.0).abs() < 1e-12);
            let level = 200 / 16;
            assert_eq!(m.at(level, level), 1.0);
        }
    }

    #[test]
    fn checkerboard_horizontal_pairs_off_diagonal() {
        // 2x2 checkerboard of levels {0, 1}; direction (0,1) sees two
        // horizontal pairs, both mixed.
        let gray = GrayLevels::new(2, 2, vec![0, 1, 1, 0]);
        let m = glcm(&gray, (0, 1)).unwrap();
        assert_eq!(m.at(0, 0), 0.0);
        assert_eq!(m.at(1, 1), 0.0);
        assert_eq!(m.at(0, 1), 0.5);
        assert_eq!(m.at(1, 0), 0.5);
    }

    #[test]
    fn rejects_small_images_and_bad_directions() {
        let gray = GrayLevels::new(1, 3, vec![0, 1, 2]);
        assert!(matches!(
            glcm(&gray, (0, 1)),
            Err(Error::ImageTooSmall { .. })
        ));
        let gray = GrayLevels::new(2, 2, vec![0, 0, 0, 0]);
        assert!(matches!(glcm(&gray, (1, 1)), Err(Error::BadDirection(1, 1))));
    }

    #[test]
    fn glcm_symmetric_and_normalized_for_random_input() {
        let data: Vec<u8> = (0..35).map(|i| ((i * 7 + 3) % 16) as u8).collect();
        let gray = GrayLevels::new(7, 5, data);
        for &dir in &DIRECTIONS {
            let m = glcm(&gray, dir).unwrap();
            assert!((m.sum() - 1.0).abs() < 1e-9);
            for i in 0..GRAY_LEVELS {
                for j in 0..GRAY_LEVELS {
                    assert_eq!(m.at(i, j), m.at(j, i));
                }
            }
        }
    }

    #[test]
    fn stats_of_single_entry_matrix() {
        let mut p = vec![0.0; 4];
        p[0] = 1.0;
        let s = glcm_stats(&Glcm::from_probabilities(2, p));
        assert_eq!(s.contrast, 0.0);
        assert_eq!(s.energy, 1.0);
        assert_eq!(s.entropy, 0.0);
        assert_eq!(s.correlation, 0.0);
    }

    #[test]
    fn stats_of_uniform_two_level_matrix() {
        let s = glcm_stats(&Glcm::from_probabilities(2, vec![0.25; 4]));
        assert!((s.energy - 0.25).abs() < 1e-12);
        assert!((s.entropy - 2.0).abs() < 1e-12);
        assert!(s.correlation.abs() < 1e-12);
    }

    #[test]
    fn stats_of_checkerboard_matrix() {
        let s = glcm_stats(&Glcm::from_probabilities(2, vec![0.0, 0.5, 0.5, 0.0]));
        assert!((s.contrast - 1.0).abs() < 1e-12);
        assert!((s.entropy - 1.0).abs() < 1e-12);
        assert!((s.correlation + 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_image_raw_texture() {
        let raw = texture_raw(&constant_image()).unwrap();
        assert_eq!(raw, [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn variances_nonnegative_for_textured_image() {
        let mut img = RgbImage::new(8, 8);
        for (x, y, px) in img.enumerate_pixels_mut() {
            let v = ((x * 37 + y * 91) % 256) as u8;
            *px = image::Rgb([v, v / 2, 255 - v]);
        }
        let raw = texture_raw(&img).unwrap();
        for &v in &raw[4..] {
            assert!(v >= 0.0);
        }
    }

    #[test]
    fn bounds_normalize_and_clamp() {
        let a = [0.0, 1.0, 2.0, 3.0, 0.0, 0.0, 5.0, 5.0];
        let b = [2.0, 3.0, 2.0, 9.0, 1.0, 0.0, 6.0, 7.0];
        let bounds = TextureBounds::fit([&a, &b]);
        let normalized = bounds.normalize(&[1.0, 4.0, 2.0, 3.0, -1.0, 0.0, 5.5, 6.0]);
        assert_eq!(normalized[0], 0.5);
        assert_eq!(normalized[1], 1.0); // clamped above
        assert_eq!(normalized[2], 0.0); // degenerate span
        assert_eq!(normalized[3], 0.0);
        assert_eq!(normalized[4], 0.0); // clamped below
        assert_eq!(normalized[5], 0.0);
        assert_eq!(normalized[6], 0.5);
        assert_eq!(normalized[7], 0.5);
        for v in normalized {
            assert!((0.0..=1.0).contains(&v));
        }
    }
}
