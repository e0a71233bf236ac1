//! Informed nonlinear oversampling inside granular balls.
//!
//! Minority-labeled balls are ranked by a density entropy computed from
//! per-instance homogeneous/heterogeneous density ratios. Balls at or above
//! the mean entropy become seeds; the class deficit is split across seeds in
//! proportion to their high-dimensional sparsity (in log space), and samples
//! are drawn from isotropic Gaussians around informed pair centers, clipped to
//! the seed ball's support sphere.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{log_ball_volume, minkowski_unchecked, DistanceOrder};
use crate::granular::{build_balls, GranularBall, SplitConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Guard against zero distance sums from duplicate points.
pub const PHI_EPSILON: f64 = 1e-12;

/// Exponent applied to the member count in the sparsity statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SparsityExponent {
    /// `|GB|^n / V_n` as printed.
    DimN,
    /// `|GB| / V_n`, switchable for experimentation.
    One,
}

/// Which side of the mean entropy qualifies a ball as seed.
///
/// Pure balls have entropy close to `log₂(N)/N`, which falls as the ball
/// grows, so `LeMean` prefers the large safe balls and `GeMean` the small
/// boundary/noise ones. `LeMean` is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedThreshold {
    GeMean,
    LeMean,
}

/// Weighting of the sample pair when forming the synthesis center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairWeighting {
    /// Normalized instance statistics of the pair.
    Informed,
    /// Plain midpoint weights (0.5, 0.5).
    Uniform,
}

/// Gaussian synthesis controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub sigma_scale: f64,
    pub max_rejects: u32,
    pub seed: u64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            sigma_scale: 1.0,
            max_rejects: 10,
            seed: 42,
        }
    }
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_scale.is_finite() && self.sigma_scale > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sigma_scale must be > 0, got {}",
                self.sigma_scale
            )));
        }
        Ok(())
    }
}

/// Full configuration for one oversampling run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngbConfig {
    pub split: SplitConfig,
    pub synth: SynthesisConfig,
    pub sparsity_exponent: SparsityExponent,
    pub seed_threshold: SeedThreshold,
    pub pair_weighting: PairWeighting,
}

impl Default for IngbConfig {
    fn default() -> Self {
        IngbConfig {
            split: SplitConfig::default(),
            synth: SynthesisConfig::default(),
            sparsity_exponent: SparsityExponent::DimN,
            seed_threshold: SeedThreshold::LeMean,
            pair_weighting: PairWeighting::Informed,
        }
    }
}

/// Synthetic-sample quota per seed ball for one class round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPlan {
    pub quotas: Vec<QuotaEntry>,
    pub target_class: usize,
    pub deficit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotaEntry {
    pub ball: usize,
    pub quota: usize,
}

/// Density-based instance statistic φ for one member of a ball.
///
/// `homo` are same-class members of the ball excluding the instance, `hete`
/// the other-class members. The statistic is the ratio of the reciprocal
/// average intra-class distance to the reciprocal average inter-class
/// distance, with the defined degenerate values at empty sides.
pub fn instance_stat(gb: &GranularBall, i: usize, d: &Dataset, p: DistanceOrder) -> Result<f64> {
    if !gb.members.contains(&i) {
        return Err(Error::Contract(format!("row {i} is not a member of the ball")));
    }
    Ok(instance_stat_unchecked(gb, i, d, p))
}

fn instance_stat_unchecked(gb: &GranularBall, i: usize, d: &Dataset, p: DistanceOrder) -> f64 {
    let class = d.label(i);
    let row = d.row(i);
    let mut n_homo = 0usize;
    let mut sum_homo = 0.0;
    let mut n_hete = 0usize;
    let mut sum_hete = 0.0;
    for &j in &gb.members {
        if j == i {
            continue;
        }
        let dist = minkowski_unchecked(row, d.row(j), p);
        if d.label(j) == class {
            n_homo += 1;
            sum_homo += dist;
        } else {
            n_hete += 1;
            sum_hete += dist;
        }
    }
    if n_homo == 0 {
        return 0.0;
    }
    let homo_density = n_homo as f64 / (sum_homo + PHI_EPSILON);
    if n_hete == 0 {
        homo_density
    } else {
        let hete_density = n_hete as f64 / (sum_hete + PHI_EPSILON);
        homo_density / hete_density
    }
}

/// φ for every member of the ball, aligned with `gb.members`.
pub fn instance_stats(gb: &GranularBall, d: &Dataset, p: DistanceOrder) -> Vec<f64> {
    gb.members
        .iter()
        .map(|&i| instance_stat_unchecked(gb, i, d, p))
        .collect()
}

/// Entropy of a normalized statistic vector: `−(1/N) Σ ρ log₂ ρ` with
/// `ρ = φ/Σφ`; zero terms contribute nothing and an all-zero vector has
/// entropy zero.
pub fn entropy_from_stats(phis: &[f64]) -> f64 {
    if phis.is_empty() {
        return 0.0;
    }
    let total: f64 = phis.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let n = phis.len() as f64;
    let mut acc = 0.0;
    for &phi in phis {
        if phi > 0.0 {
            let rho = phi / total;
            acc += rho * rho.log2();
        }
    }
    -acc / n
}

/// Ball-informed statistic δ, computed over all members of the ball.
pub fn ball_entropy(gb: &GranularBall, d: &Dataset, p: DistanceOrder) -> f64 {
    entropy_from_stats(&instance_stats(gb, d, p))
}

/// Pure seed-selection rule on precomputed entropies; returns positions into
/// `deltas`. The mean always has members on both sides, so the result is
/// nonempty.
pub fn select_by_entropy(deltas: &[f64], threshold: SeedThreshold) -> Vec<usize> {
    if deltas.is_empty() {
        return Vec::new();
    }
    let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
    (0..deltas.len())
        .filter(|&j| match threshold {
            SeedThreshold::GeMean => deltas[j] >= mean,
            SeedThreshold::LeMean => deltas[j] <= mean,
        })
        .collect()
}

/// Selects seed balls among the candidate (target-labeled) ball ids.
///
/// Only proper balls — at least `n+1` members, enough to determine an
/// n-dimensional hypersphere — compete on entropy; degenerate singletons and
/// near-point balls would otherwise dominate the volume-based allocation.
/// When every candidate is degenerate the filter is dropped.
pub fn select_seeds(
    candidates: &[usize],
    balls: &[GranularBall],
    d: &Dataset,
    p: DistanceOrder,
    threshold: SeedThreshold,
) -> Result<Vec<usize>> {
    if candidates.is_empty() {
        return Err(Error::Contract("no candidate balls to select seeds from".into()));
    }
    let proper: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&id| balls[id].len() >= d.n_features() + 1)
        .collect();
    let pool: &[usize] = if proper.is_empty() { candidates } else { &proper };
    let deltas: Vec<f64> = pool
        .iter()
        .map(|&id| ball_entropy(&balls[id], d, p))
        .collect();
    Ok(select_by_entropy(&deltas, threshold)
        .into_iter()
        .map(|pos| pool[pos])
        .collect())
}

/// Splits `deficit` across seeds proportionally to their log-space sparsity
/// using largest-remainder apportionment. Zero-radius balls are treated as
/// maximally sparse and weighted like the densest finite ball.
pub fn allocate(
    seed_ids: &[usize],
    balls: &[GranularBall],
    deficit: usize,
    n_features: usize,
    exponent: SparsityExponent,
    target_class: usize,
) -> Result<SeedPlan> {
    if deficit == 0 {
        return Err(Error::Contract("allocation requires a positive deficit".into()));
    }
    if seed_ids.is_empty() {
        return Err(Error::Contract("allocation requires at least one seed".into()));
    }
    let log_sparsity: Vec<Option<f64>> = seed_ids
        .iter()
        .map(|&id| {
            let gb = &balls[id];
            if gb.radius > 0.0 {
                let e = match exponent {
                    SparsityExponent::DimN => n_features as f64,
                    SparsityExponent::One => 1.0,
                };
                let v = log_ball_volume(n_features, gb.radius).expect("radius > 0");
                Some(e * (gb.len() as f64).ln() - v)
            } else {
                None // zero radius: infinitely sparse in the Eq. sense
            }
        })
        .collect();
    let max_finite = log_sparsity
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let weights: Vec<f64> = log_sparsity
        .iter()
        .map(|ls| match ls {
            Some(v) => (v - max_finite).exp(),
            None => 1.0, // same weight as the max finite ball
        })
        .collect();
    let quotas = apportion(deficit, &weights);
    Ok(SeedPlan {
        quotas: seed_ids
            .iter()
            .zip(quotas)
            .map(|(&ball, quota)| QuotaEntry { ball, quota })
            .collect(),
        target_class,
        deficit,
    })
}

/// Largest-remainder apportionment of `total` into parts proportional to
/// `weights`; ties break toward the smaller index. Quotas always sum to
/// `total`.
pub fn apportion(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 || weights.is_empty() {
        // Degenerate weights: spread evenly.
        let mut out = vec![total / weights.len().max(1); weights.len()];
        for slot in out.iter_mut().take(total % weights.len().max(1)) {
            *slot += 1;
        }
        return out;
    }
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut quotas: Vec<usize> = exact.iter().map(|&q| q.floor() as usize).collect();
    let assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &idx in order.iter().take(total - assigned) {
        quotas[idx] += 1;
    }
    quotas
}

/// Draws `quota` synthetic feature vectors inside the ball's support sphere.
///
/// Base points cycle over the ball's target-class members; the partner is
/// drawn uniformly among the remaining target-class members. The pair's
/// weighted center and radius parameterize an isotropic Gaussian whose
/// per-axis deviation is `sigma_scale · r_p / √n`; rejected draws are retried
/// and finally projected radially onto the support sphere.
pub fn synthesize_in_ball<R: Rng>(
    gb: &GranularBall,
    quota: usize,
    d: &Dataset,
    cfg: &IngbConfig,
    target_class: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    cfg.synth.validate()?;
    let targets: Vec<usize> = gb
        .members
        .iter()
        .copied()
        .filter(|&i| d.label(i) == target_class)
        .collect();
    if targets.is_empty() {
        return Err(Error::Contract(format!(
            "ball has no members of class {target_class}"
        )));
    }
    let p = cfg.split.p;
    let n = d.n_features();
    let sqrt_n = (n as f64).sqrt();
    let phis = instance_stats(gb, d, p);
    let phi_of = |row: usize| -> f64 {
        let pos = gb.members.iter().position(|&m| m == row).expect("member");
        phis[pos]
    };
    let target_phis: Vec<f64> = targets.iter().map(|&i| phi_of(i)).collect();

    let mut samples = Vec::with_capacity(quota);
    for t in 0..quota {
        let base_pos = t % targets.len();
        let pair_pos = if targets.len() == 1 {
            base_pos
        } else {
            let offset = rng.random_range(0..targets.len() - 1);
            if offset >= base_pos {
                offset + 1
            } else {
                offset
            }
        };
        let xi = d.row(targets[base_pos]);
        let xj = d.row(targets[pair_pos]);
        let w = match cfg.pair_weighting {
            PairWeighting::Uniform => 0.5,
            PairWeighting::Informed => {
                let (pi, pj) = (target_phis[base_pos], target_phis[pair_pos]);
                if pi + pj > 0.0 {
                    pi / (pi + pj)
                } else {
                    0.5
                }
            }
        };
        let pair_center: Vec<f64> = xi
            .iter()
            .zip(xj)
            .map(|(a, b)| w * a + (1.0 - w) * b)
            .collect();
        let pair_radius = w * minkowski_unchecked(xi, &pair_center, p)
            + (1.0 - w) * minkowski_unchecked(xj, &pair_center, p);
        let sigma = if pair_radius > 0.0 {
            cfg.synth.sigma_scale * pair_radius / sqrt_n
        } else {
            gb.radius / (10.0 * sqrt_n)
        };

        let mut z = vec![0.0; n];
        let mut accepted = false;
        for _ in 0..=cfg.synth.max_rejects {
            for (zl, cl) in z.iter_mut().zip(&pair_center) {
                let g: f64 = rng.sample(StandardNormal);
                *zl = cl + sigma * g;
            }
            if minkowski_unchecked(&z, &gb.center, p) <= gb.support_radius {
                accepted = true;
                break;
            }
        }
        if !accepted {
            let dist = minkowski_unchecked(&z, &gb.center, p);
            if dist > 0.0 {
                let scale = gb.support_radius / dist;
                for (zl, cl) in z.iter_mut().zip(&gb.center) {
                    *zl = cl + (*zl - cl) * scale;
                }
            } else {
                z.copy_from_slice(&gb.center);
            }
        }
        samples.push(z);
    }
    Ok(samples)
}

/// Outcome details for one class round, for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundReport {
    pub target_class: usize,
    pub deficit: usize,
    pub candidate_balls: usize,
    pub seed_balls: usize,
    pub plan: Option<SeedPlan>,
    pub fallback: bool,
}

/// Summary of a full oversampling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OversampleReport {
    pub balls_built: usize,
    pub rounds: Vec<RoundReport>,
    pub synthesized: usize,
}

/// Oversamples every deficient class up to the largest class count.
///
/// Original rows are preserved verbatim; synthetic rows are appended, so
/// callers can recover a synthetic mask from the original row count.
pub fn ingb_oversample(d: &Dataset, cfg: &IngbConfig) -> Result<Dataset> {
    ingb_oversample_report(d, cfg).map(|(out, _)| out)
}

/// [`ingb_oversample`] plus a machine-readable run report.
pub fn ingb_oversample_report(d: &Dataset, cfg: &IngbConfig) -> Result<(Dataset, OversampleReport)> {
    cfg.split.validate()?;
    cfg.synth.validate()?;
    let counts = d.class_counts();
    let present = counts.iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(Error::Contract(
            "oversampling requires at least two classes present".into(),
        ));
    }
    let max_count = *counts.iter().max().expect("nonempty");
    let mut report = OversampleReport {
        balls_built: 0,
        rounds: Vec::new(),
        synthesized: 0,
    };
    if counts.iter().all(|&c| c == 0 || c == max_count) {
        // Already balanced; nothing to build.
        return Ok((d.clone(), report));
    }

    let balls = build_balls(d, &cfg.split)?;
    report.balls_built = balls.len();
    let mut new_rows: Vec<(Vec<f64>, usize)> = Vec::new();

    for target in 0..d.n_classes() {
        if counts[target] == 0 || counts[target] == max_count {
            continue;
        }
        let deficit = max_count - counts[target];
        let candidates: Vec<usize> = (0..balls.len())
            .filter(|&id| balls[id].label == target)
            .collect();
        if candidates.is_empty() {
            // No ball carries the label: jitter around real instances.
            let rows = fallback_jitter(d, target, deficit, cfg)?;
            report.rounds.push(RoundReport {
                target_class: target,
                deficit,
                candidate_balls: 0,
                seed_balls: 0,
                plan: None,
                fallback: true,
            });
            report.synthesized += rows.len();
            new_rows.extend(rows.into_iter().map(|r| (r, target)));
            continue;
        }
        let seeds = select_seeds(&candidates, &balls, d, cfg.split.p, cfg.seed_threshold)?;
        let plan = allocate(
            &seeds,
            &balls,
            deficit,
            d.n_features(),
            cfg.sparsity_exponent,
            target,
        )?;
        for entry in &plan.quotas {
            if entry.quota == 0 {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.synth.seed);
            rng.set_stream(entry.ball as u64);
            let rows =
                synthesize_in_ball(&balls[entry.ball], entry.quota, d, cfg, target, &mut rng)?;
            report.synthesized += rows.len();
            new_rows.extend(rows.into_iter().map(|r| (r, target)));
        }
        report.rounds.push(RoundReport {
            target_class: target,
            deficit,
            candidate_balls: candidates.len(),
            seed_balls: seeds.len(),
            plan: Some(plan),
            fallback: false,
        });
    }

    Ok((d.extended_with(&new_rows)?, report))
}

/// Last-resort generator when no ball carries the target label: isotropic
/// jitter around uniformly chosen real instances of the class, with per-axis
/// deviation 0.01 of the widest feature range.
fn fallback_jitter(
    d: &Dataset,
    target: usize,
    deficit: usize,
    cfg: &IngbConfig,
) -> Result<Vec<Vec<f64>>> {
    let instances: Vec<usize> = (0..d.n_rows()).filter(|&i| d.label(i) == target).collect();
    if instances.is_empty() {
        return Err(Error::Contract(format!(
            "class {target} has no instances to synthesize around"
        )));
    }
    let mut scale = 0.0f64;
    for j in 0..d.n_features() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for row in d.rows() {
            lo = lo.min(row[j]);
            hi = hi.max(row[j]);
        }
        scale = scale.max(hi - lo);
    }
    let sigma = 0.01 * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.synth.seed);
    rng.set_stream((1u64 << 32) + target as u64);
    let mut rows = Vec::with_capacity(deficit);
    for _ in 0..deficit {
        let &base = &instances[rng.random_range(0..instances.len())];
        let row: Vec<f64> = d
            .row(base)
            .iter()
            .map(|&v| {
                let g: f64 = rng.sample(StandardNormal);
                v + sigma * g
            })
            .collect();
        rows.push(row);
    }
    Ok(rows)
}
