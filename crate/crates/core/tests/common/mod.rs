//! Shared test helpers: synthetic images and unit vectors.

use std::path::Path;

use image::RgbImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn unit(components: Vec<f64>) -> Vec<f64> {
    let norm: f64 = components.iter().map(|v| v * v).sum::<f64>().sqrt();
    components.into_iter().map(|v| v / norm).collect()
}

pub fn random_unit_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    unit((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

pub fn random_nonneg_unit_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    unit((0..n).map(|_| rng.gen_range(0.0..1.0)).collect())
}

fn clamp_u8(v: i32) -> u8 {
    v.clamp(0, 255) as u8
}

/// Smooth blue image with a light horizontal band.
pub fn sky_image(seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let band_row = rng.gen_range(8..22u32);
    let band_h = rng.gen_range(3..7u32);
    let mut img = RgbImage::new(32, 32);
    for (_, y, px) in img.enumerate_pixels_mut() {
        let j = rng.gen_range(-6..=6i32);
        *px = image::Rgb([
            clamp_u8(120 + (y / 2) as i32 + j),
            clamp_u8(196 + (y / 4) as i32 + j),
            clamp_u8(230 + j / 2),
        ]);
    }
    for y in band_row..(band_row + band_h).min(32) {
        for x in 3..29 {
            let j = rng.gen_range(-4..=4i32);
            let v = clamp_u8(228 + j);
            img.put_pixel(x, y, image::Rgb([v, v, clamp_u8(v as i32 + 4)]));
        }
    }
    img
}

/// Tan image speckled with dark spots.
pub fn spots_image(seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img = RgbImage::new(32, 32);
    for (_, _, px) in img.enumerate_pixels_mut() {
        let j = rng.gen_range(-10..=10i32);
        *px = image::Rgb([
            clamp_u8(205 + j),
            clamp_u8(133 + j),
            clamp_u8(63 + j / 2),
        ]);
    }
    let n_spots = rng.gen_range(28..46);
    for _ in 0..n_spots {
        let cx = rng.gen_range(1..31i32);
        let cy = rng.gen_range(1..31i32);
        let base: [i32; 3] = if rng.gen_bool(0.5) {
            [70, 45, 20]
        } else {
            [101, 67, 33]
        };
        for (dx, dy) in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (x, y) = (cx + dx, cy + dy);
            if (0..32).contains(&x) && (0..32).contains(&y) {
                let j = rng.gen_range(-8..=8i32);
                img.put_pixel(
                    x as u32,
                    y as u32,
                    image::Rgb([
                        clamp_u8(base[0] + j),
                        clamp_u8(base[1] + j),
                        clamp_u8(base[2] + j),
                    ]),
                );
            }
        }
    }
    img
}

/// Write a two-class synthetic dataset (sky vs spots) under `root`.
pub fn write_synthetic_dataset(root: &Path, per_class: usize, seed: u64) {
    let sky_dir = root.join("sky");
    let spots_dir = root.join("spots");
    std::fs::create_dir_all(&sky_dir).unwrap();
    std::fs::create_dir_all(&spots_dir).unwrap();
    for i in 0..per_class {
        sky_image(seed * 1000 + i as u64)
            .save(sky_dir.join(format!("sky_{i:03}.png")))
            .unwrap();
        spots_image(seed * 2000 + i as u64)
            .save(spots_dir.join(format!("spots_{i:03}.png")))
            .unwrap();
    }
}
