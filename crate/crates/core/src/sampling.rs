//! Seeded point sets in the closed unit disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform by area in the disk of the given radius.
pub fn uniform_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen::<f64>() * TAU)
}

/// `count` equally spaced points on `|z| = radius`, starting at angle `phase`.
pub fn circle_grid(count: usize, radius: f64, phase: f64) -> impl Iterator<Item = Complex64> {
    (0..count).map(move |j| Complex64::from_polar(radius, phase + TAU * j as f64 / count as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Interior,
    Circle,
    Landmark,
}

/// Points used by the disk checks.
pub const LANDMARKS: [(f64, f64); 6] = [
    (0.0, 0.0),
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (-0.5, 0.0),
];

/// Circle points forced into every closed-disk sample set.
pub const CIRCLE_POINTS: usize = 1024;

/// The landmarks, a circle grid, then `samples` area-uniform points, all
/// scaled to `radius`. Deterministic for a fixed seed.
pub fn disk_sample_set(samples: usize, seed: u64, radius: f64) -> Vec<(Complex64, SampleKind)> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(samples + CIRCLE_POINTS + LANDMARKS.len());
    out.extend(
        LANDMARKS
            .iter()
            .map(|&(re, im)| (Complex64::new(re, im) * radius, SampleKind::Landmark)),
    );
    out.extend(circle_grid(CIRCLE_POINTS, radius, 0.0).map(|z| (z, SampleKind::Circle)));
    out.extend((0..samples).map(|_| (uniform_disk(&mut rng, radius), SampleKind::Interior)));
    out
}
