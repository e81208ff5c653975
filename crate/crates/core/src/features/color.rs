//! HSB color conversion, quantization and the 72-bin color histogram.

use image::RgbImage;

use crate::error::{Error, Result};

/// Hue weight in the combined color index.
pub const HUE_WEIGHT: usize = 9;
/// Saturation weight in the combined color index.
pub const SAT_WEIGHT: usize = 3;
/// Number of combined color bins (8 hue x 3 saturation x 3 brightness).
pub const COLOR_BINS: usize = 72;

/// One pixel in hue/saturation/brightness form.
///
/// Hue is an integer degree in 0..=359; saturation and brightness are in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsbPixel {
    pub h: u16,
    pub s: f64,
    pub b: f64,
}

/// Quantized HSB levels: hue in 0..=7, saturation and brightness in 0..=2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizedHsb {
    pub h: u8,
    pub s: u8,
    pub b: u8,
}

/// Standard hexcone RGB -> HSB conversion with the hue rounded to the nearest
/// integer degree (360 wraps to 0).
pub fn rgb_to_hsb(rgb: [u8; 3]) -> HsbPixel {
    let r = rgb[0] as f64 / 255.0;
    let g = rgb[1] as f64 / 255.0;
    let b = rgb[2] as f64 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let brightness = max;
    let saturation = if max > 0.0 { delta / max } else { 0.0 };

    let hue_deg = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * (((g - b) / delta).rem_euclid(6.0))
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let mut h = hue_deg.round() as u16;
    if h == 360 {
        h = 0;
    }

    HsbPixel {
        h,
        s: saturation,
        b: brightness,
    }
}

/// Quantize hue into 8 levels and saturation/brightness into 3 levels each.
///
/// The hue intervals are listed in order and matched first to last, so the
/// shared boundary degree 75 lands in level 2.
pub fn quantize_hsb(p: HsbPixel) -> QuantizedHsb {
    let h = match p.h {
        0..=20 | 316..=359 => 0,
        21..=40 => 1,
        41..=75 => 2,
        76..=155 => 3,
        156..=190 => 4,
        191..=270 => 5,
        271..=295 => 6,
        296..=315 => 7,
        _ => unreachable!("hue is normalized to 0..=359"),
    };
    let level3 = |v: f64| {
        if v < 0.2 {
            0
        } else if v < 0.7 {
            1
        } else {
            2
        }
    };
    QuantizedHsb {
        h,
        s: level3(p.s),
        b: level3(p.b),
    }
}

/// Combined color index G = h*9 + s*3 + b, in 0..=71.
pub fn color_index(q: QuantizedHsb) -> usize {
    q.h as usize * HUE_WEIGHT + q.s as usize * SAT_WEIGHT + q.b as usize
}

/// L1-normalized histogram of the combined color index over all pixels.
pub fn color_histogram(img: &RgbImage) -> Result<[f64; COLOR_BINS]> {
    let pixels = img.pixels().len();
    if pixels == 0 {
        return Err(Error::EmptyImage);
    }
    let mut counts = [0u64; COLOR_BINS];
    for px in img.pixels() {
        counts[color_index(quantize_hsb(rgb_to_hsb(px.0)))] += 1;
    }
    let total = pixels as f64;
    let mut hist = [0.0; COLOR_BINS];
    for (bin, &count) in hist.iter_mut().zip(counts.iter()) {
        *bin = count as f64 / total;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_red_is_hue_zero() {
        let p = rgb_to_hsb([255, 0, 0]);
        assert_eq!(p.h, 0);
        assert_eq!(p.s, 1.0);
        assert_eq!(p.b, 1.0);
    }

    #[test]
    fn gray_has_zero_saturation() {
        let p = rgb_to_hsb([128, 128, 128]);
        assert_eq!(p.h, 0);
        assert_eq!(p.s, 0.0);
        assert!((p.b - 128.0 / 255.0).abs() < 1e-12);
        assert!((p.b - 0.502).abs() < 1e-3);
    }

    #[test]
    fn pure_blue_is_hue_240() {
        // Oracle: hexcone conversion puts the blue primary at 240 degrees.
        let p = rgb_to_hsb([0, 0, 255]);
        assert_eq!(p.h, 240);
        assert_eq!(p.s, 1.0);
        assert_eq!(p.b, 1.0);
    }

    #[test]
    fn quantization_examples() {
        let q = |h, s, b| quantize_hsb(HsbPixel { h, s, b });
        assert_eq!(q(10, 0.1, 0.1), QuantizedHsb { h: 0, s: 0, b: 0 });
        assert_eq!(q(200, 0.8, 0.5), QuantizedHsb { h: 5, s: 2, b: 1 });
        assert_eq!(q(359, 1.0, 1.0), QuantizedHsb { h: 0, s: 2, b: 2 });
        // Shared interval boundary goes to the earlier level.
        assert_eq!(q(75, 0.5, 0.5).h, 2);
        assert_eq!(q(76, 0.5, 0.5).h, 3);
    }

    #[test]
    fn hue_quantization_total_over_all_degrees() {
        for h in 0u16..360 {
            for (s, b) in [(0.0, 0.0), (0.2, 0.7), (0.69, 0.19), (1.0, 1.0)] {
                let q = quantize_hsb(HsbPixel { h, s, b });
                assert!(q.h <= 7, "hue {h} mapped to level {}", q.h);
                assert!(q.s <= 2 && q.b <= 2);
            }
        }
    }

    #[test]
    fn color_index_examples() {
        assert_eq!(color_index(QuantizedHsb { h: 0, s: 0, b: 0 }), 0);
        assert_eq!(color_index(QuantizedHsb { h: 7, s: 2, b: 2 }), 71);
        assert_eq!(color_index(QuantizedHsb { h: 5, s: 2, b: 1 }), 52);
    }

    #[test]
    fn color_index_matches_direct_arithmetic_for_all_combinations() {
        let mut seen = [false; COLOR_BINS];
        for h in 0u8..8 {
            for s in 0u8..3 {
                for b in 0u8..3 {
                    let g = color_index(QuantizedHsb { h, s, b });
                    assert_eq!(g, h as usize * 9 + s as usize * 3 + b as usize);
                    assert!(!seen[g]);
                    seen[g] = true;
                }
            }
        }
        assert!(seen.iter().all(|&v| v));
    }

    #[test]
    fn histogram_of_single_pure_red_pixel() {
        let img = RgbImage::from_pixel(1, 1, image::Rgb([255, 0, 0]));
        let hist = color_histogram(&img).unwrap();
        // The bin is whatever the quantization chain assigns to pure red.
        let bin = color_index(quantize_hsb(rgb_to_hsb([255, 0, 0])));
        assert_eq!(bin, 8);
        for (i, &v) in hist.iter().enumerate() {
            if i == bin {
                assert_eq!(v, 1.0);
            } else {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn histogram_uniform_gray_single_bin() {
        let img = RgbImage::from_pixel(4, 3, image::Rgb([77, 77, 77]));
        let hist = color_histogram(&img).unwrap();
        let nonzero: Vec<_> = hist.iter().filter(|&&v| v != 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(*nonzero[0], 1.0);
    }

    #[test]
    fn histogram_two_pixels_two_bins() {
        let mut img = RgbImage::new(2, 1);
        img.put_pixel(0, 0, image::Rgb([255, 0, 0]));
        img.put_pixel(1, 0, image::Rgb([0, 0, 255]));
        let hist = color_histogram(&img).unwrap();
        let nonzero: Vec<_> = hist.iter().filter(|&&v| v != 0.0).collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero.iter().all(|&&v| v == 0.5));
    }

    #[test]
    fn histogram_rejects_empty_image() {
        let img = RgbImage::new(0, 0);
        assert!(matches!(color_histogram(&img), Err(Error::EmptyImage)));
    }
}
