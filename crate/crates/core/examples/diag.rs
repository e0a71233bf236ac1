//! Scratch diagnostic: inspect minority balls and seed plans on one noisy fold.

use ingb_core::baselines::enn_filter;
use ingb_core::dataset::{inject_label_noise, stratified_folds, NoiseSpec};
use ingb_core::generators::{generate, Generator};
use ingb_core::granular::build_balls;
use ingb_core::informed::{allocate, ball_entropy, select_seeds, IngbConfig, SparsityExponent};
use ingb_core::seeding;

fn main() {
    let root = 9_000u64;
    let d = generate(Generator::Blobs2, 1100, seeding::mix(root, 1)).unwrap();
    let folds = stratified_folds(&d, 10, seeding::mix(root, 3)).unwrap();
    let train = d.subset(&folds.train_indices(0)).unwrap();
    let spec = NoiseSpec::new(0.2, seeding::mix(seeding::mix(root, 13), 0)).unwrap();
    let (noisy, flips) = inject_label_noise(&train, &spec).unwrap();
    println!("train {} rows, {} flipped", noisy.n_rows(), flips.len());
    println!("counts noisy: {:?}", noisy.class_counts());

    for (tag, data) in [("raw-noisy", noisy.clone()), ("post-enn", {
        let (cleaned, removed) = enn_filter(&noisy).unwrap();
        println!("enn removed {}", removed.len());
        cleaned
    })] {
        println!("=== {tag}: counts {:?}", data.class_counts());
        let cfg = IngbConfig::default();
        let balls = build_balls(&data, &cfg.split).unwrap();
        let minority = 1usize;
        let candidates: Vec<usize> = (0..balls.len())
            .filter(|&i| balls[i].label == minority)
            .collect();
        println!(
            "balls total {}, minority-labeled {}",
            balls.len(),
            candidates.len()
        );
        let deltas: Vec<f64> = candidates
            .iter()
            .map(|&i| ball_entropy(&balls[i], &data, cfg.split.p))
            .collect();
        let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
        println!("mean delta {mean:.4}");
        let seeds = select_seeds(&candidates, &balls, &data, cfg.split.p, cfg.seed_threshold)
            .unwrap();
        let counts = data.class_counts();
        let deficit = counts[0] - counts[1];
        let plan = allocate(
            &seeds,
            &balls,
            deficit,
            data.n_features(),
            SparsityExponent::DimN,
            minority,
        )
        .unwrap();
        let mut rows: Vec<(usize, usize, f64, f64, f64, usize)> = plan
            .quotas
            .iter()
            .map(|q| {
                let b = &balls[q.ball];
                let delta = ball_entropy(b, &data, cfg.split.p);
                (
                    q.ball,
                    b.len(),
                    b.radius,
                    b.support_radius,
                    delta,
                    q.quota,
                )
            })
            .collect();
        rows.sort_by(|a, b| b.5.cmp(&a.5));
        println!("deficit {deficit}, seeds {}", seeds.len());
        println!("  ball |GB| radius support delta quota");
        for (id, len, radius, support, delta, quota) in rows.iter().take(15) {
            println!(
                "  {id:4} {len:4} {radius:7.4} {support:7.4} {delta:6.4} {quota:5}"
            );
        }
    }
}
