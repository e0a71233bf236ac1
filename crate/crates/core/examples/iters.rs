use ingb_core::dataset::Dataset;
use ingb_core::granular::{build_balls_with_stats, SplitConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn blobs(m: usize, sep: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maj = m * 10 / 11;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..m {
        let class = usize::from(i >= maj);
        let c = if class == 0 { 0.0 } else { sep };
        let g1: f64 = rng.sample(StandardNormal);
        let g2: f64 = rng.sample(StandardNormal);
        rows.push(vec![c + g1, c + g2]);
        labels.push(class);
    }
    Dataset::from_rows(rows, labels, vec!["a".into(), "b".into()], "t").unwrap()
}

fn main() {
    let cfg = SplitConfig::default();
    for sep in [3.0, 3.5, 4.0, 4.5] {
        let mut means = [0.0f64; 4];
        for seed in 0..8u64 {
            let base = blobs(8000, sep, seed);
            for (si, m) in [1000usize, 2000, 4000, 8000].iter().enumerate() {
                let stride = 8000 / m;
                let idx: Vec<usize> = (0..*m).map(|i| i * stride).collect();
                let d = base.subset(&idx).unwrap();
                let (_, stats) = build_balls_with_stats(&d, &cfg).unwrap();
                means[si] += stats.distance_evals as f64 / 8.0;
            }
        }
        println!(
            "sep {sep}: evals {:?} ratios [{:.2} {:.2} {:.2}]",
            means.map(|v| v as u64),
            means[1] / means[0],
            means[2] / means[1],
            means[3] / means[2]
        );
    }
}
