//! Bundled synthetic benchmark generators: seeded imbalanced datasets used by
//! the acceptance runs and the `gen` command.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::informed::apportion;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::str::FromStr;

/// Generator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Two Gaussian blobs, imbalance ratio 10, 2 features.
    Blobs2,
    /// Three Gaussian blobs with counts 10 : 2.75 : 1, 2 features.
    Blobs3,
    /// Majority ring around a minority core; not linearly separable.
    Ring,
    /// Two 20-dimensional Gaussian blobs, imbalance ratio 10.
    Highdim,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::Blobs2,
        Generator::Blobs3,
        Generator::Ring,
        Generator::Highdim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Blobs2 => "blobs2",
            Generator::Blobs3 => "blobs3",
            Generator::Ring => "ring",
            Generator::Highdim => "highdim",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Generator> {
        match s {
            "blobs2" => Ok(Generator::Blobs2),
            "blobs3" => Ok(Generator::Blobs3),
            "ring" => Ok(Generator::Ring),
            "highdim" => Ok(Generator::Highdim),
            other => Err(Error::InvalidConfig(format!(
                "unknown generator `{other}` (expected blobs2, blobs3, ring or highdim)"
            ))),
        }
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Generates `m` rows with the given seed. Row order is deterministic: class
/// blocks in class order.
pub fn generate(generator: Generator, m: usize, seed: u64) -> Result<Dataset> {
    if m < 22 {
        return Err(Error::InvalidConfig(format!(
            "generators need m >= 22 so every class keeps at least 2 rows, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let provenance = format!("gen:{}(m={m},seed={seed})", generator.name());
    match generator {
        Generator::Blobs2 => {
            let counts = apportion(m, &[10.0, 1.0]);
            let centers = [(0.0, 0.0), (3.0, 3.0)];
            let mut rows = Vec::with_capacity(m);
            let mut labels = Vec::with_capacity(m);
            for (class, &count) in counts.iter().enumerate() {
                let (cx, cy) = centers[class];
                for _ in 0..count {
                    rows.push(vec![cx + normal(&mut rng), cy + normal(&mut rng)]);
                    labels.push(class);
                }
            }
            Dataset::from_rows(rows, labels, vec!["c0".into(), "c1".into()], &provenance)
        }
        Generator::Blobs3 => {
            let counts = apportion(m, &[10.0, 2.75, 1.0]);
            let centers = [(0.0, 0.0), (4.5, 4.5), (-4.5, 4.5)];
            let mut rows = Vec::with_capacity(m);
            let mut labels = Vec::with_capacity(m);
            for (class, &count) in counts.iter().enumerate() {
                let (cx, cy) = centers[class];
                for _ in 0..count {
                    rows.push(vec![cx + normal(&mut rng), cy + normal(&mut rng)]);
                    labels.push(class);
                }
            }
            Dataset::from_rows(
                rows,
                labels,
                vec!["c0".into(), "c1".into(), "c2".into()],
                &provenance,
            )
        }
        Generator::Ring => {
            let counts = apportion(m, &[10.0, 1.0]);
            let mut rows = Vec::with_capacity(m);
            let mut labels = Vec::with_capacity(m);
            // Majority: annulus of radius 3; minority: core blob at the origin.
            for _ in 0..counts[0] {
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                let radius = 3.0 + 0.3 * normal(&mut rng);
                rows.push(vec![radius * theta.cos(), radius * theta.sin()]);
                labels.push(0);
            }
            for _ in 0..counts[1] {
                rows.push(vec![0.5 * normal(&mut rng), 0.5 * normal(&mut rng)]);
                labels.push(1);
            }
            Dataset::from_rows(rows, labels, vec!["ring".into(), "core".into()], &provenance)
        }
        Generator::Highdim => {
            let n = 20;
            let counts = apportion(m, &[10.0, 1.0]);
            let mut rows = Vec::with_capacity(m);
            let mut labels = Vec::with_capacity(m);
            for (class, &count) in counts.iter().enumerate() {
                let shift = if class == 0 { 0.0 } else { 0.6 };
                for _ in 0..count {
                    rows.push((0..n).map(|_| shift + normal(&mut rng)).collect());
                    labels.push(class);
                }
            }
            Dataset::from_rows(rows, labels, vec!["c0".into(), "c1".into()], &provenance)
        }
    }
}
