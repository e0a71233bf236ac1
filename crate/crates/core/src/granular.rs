//! Granular-ball construction and adaptive iterative splitting.
//!
//! A granular ball summarizes a subset of rows by its mean center, mean
//! member-to-center distance, majority label and purity. Impure balls are
//! split into one sub-ball per class present, by Lloyd iteration seeded at the
//! per-class means, until every ball is pure or too small to split.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{minkowski_unchecked, squared_euclidean, DistanceOrder};
use serde::Serialize;

/// Hypersphere summary of a set of dataset rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GranularBall {
    /// Row indices into the originating dataset.
    pub members: Vec<usize>,
    /// Arithmetic mean of the member feature rows.
    pub center: Vec<f64>,
    /// Mean member-to-center Minkowski distance.
    pub radius: f64,
    /// Maximum member-to-center distance; the containment boundary for synthesis.
    pub support_radius: f64,
    /// Majority class among members; ties break toward the smaller class index.
    pub label: usize,
    /// Majority fraction ω in (0, 1].
    pub state: f64,
    /// Per-class member counts.
    pub class_counts: Vec<usize>,
    /// Set once a split attempt failed to improve; never split again.
    pub terminal: bool,
}

impl GranularBall {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of distinct classes among members.
    pub fn distinct_classes(&self) -> usize {
        self.class_counts.iter().filter(|&&c| c > 0).count()
    }

    /// Fraction of members carrying `class`.
    pub fn class_fraction(&self, class: usize) -> f64 {
        self.class_counts[class] as f64 / self.members.len() as f64
    }
}

/// Controls for the splitting loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    /// State lower bound T in (0, 1]; balls with ω < T keep splitting.
    pub t: f64,
    pub p: DistanceOrder,
    pub max_lloyd_iters: usize,
    /// Minimum WCSS improvement to keep iterating.
    pub tol: f64,
    /// Reserved for seeded initializers; per-class-mean init is deterministic.
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            t: 1.0,
            p: DistanceOrder::EUCLIDEAN,
            max_lloyd_iters: 100,
            tol: 1e-6,
            seed: 42,
        }
    }
}

impl SplitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "state bound T must lie in (0, 1], got {}",
                self.t
            )));
        }
        if self.max_lloyd_iters == 0 {
            return Err(Error::InvalidConfig("max_lloyd_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// Counters for the splitting phase, used by complexity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Number of successful splits.
    pub splits: usize,
    /// Total Lloyd iterations across all splits.
    pub lloyd_iterations: usize,
    /// Total assignment-step distance evaluations.
    pub distance_evals: u64,
    /// Largest single-iteration distance-evaluation count (one "pass").
    pub max_pass_distance_evals: u64,
}

/// Computes all ball properties for the given member rows.
pub fn make_ball(d: &Dataset, members: Vec<usize>, p: DistanceOrder) -> Result<GranularBall> {
    if members.is_empty() {
        return Err(Error::Contract("cannot build a ball with no members".into()));
    }
    let n = d.n_features();
    let mut center = vec![0.0; n];
    for &i in &members {
        for (c, v) in center.iter_mut().zip(d.row(i)) {
            *c += v;
        }
    }
    let m = members.len() as f64;
    for c in &mut center {
        *c /= m;
    }
    let mut radius = 0.0;
    let mut support_radius: f64 = 0.0;
    let mut class_counts = vec![0usize; d.n_classes()];
    for &i in &members {
        let dist = minkowski_unchecked(d.row(i), &center, p);
        radius += dist;
        support_radius = support_radius.max(dist);
        class_counts[d.label(i)] += 1;
    }
    radius /= m;
    let mut label = 0;
    for (c, &count) in class_counts.iter().enumerate() {
        if count > class_counts[label] {
            label = c;
        }
    }
    let state = class_counts[label] as f64 / m;
    Ok(GranularBall {
        members,
        center,
        radius,
        support_radius,
        label,
        state,
        class_counts,
        terminal: false,
    })
}

/// Split eligibility: enough members for one sub-ball of `n+1` points per
/// class present, purity below the bound, and not already marked terminal.
pub fn can_split(gb: &GranularBall, d: &Dataset, cfg: &SplitConfig) -> bool {
    let k = gb.distinct_classes();
    gb.len() >= k * (d.n_features() + 1) && gb.state < cfg.t && !gb.terminal
}

/// Within-cluster sum of squared Euclidean distances for one candidate ball.
pub fn wcss_single(d: &Dataset, members: &[usize]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let n = d.n_features();
    let mut center = vec![0.0; n];
    for &i in members {
        for (c, v) in center.iter_mut().zip(d.row(i)) {
            *c += v;
        }
    }
    for c in &mut center {
        *c /= members.len() as f64;
    }
    members
        .iter()
        .map(|&i| squared_euclidean(d.row(i), &center))
        .sum()
}

/// Instrumentation from one Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitTrace {
    pub iterations: usize,
    /// Final within-cluster sum of squares.
    pub wcss: f64,
    /// WCSS after every iteration; non-increasing.
    pub wcss_trace: Vec<f64>,
    pub distance_evals: u64,
    pub max_pass_distance_evals: u64,
}

struct LloydOutcome {
    assignments: Vec<usize>,
    trace: SplitTrace,
}

/// Lloyd iteration in squared Euclidean space, seeded at per-class means.
/// Clusters never end empty: an emptied cluster is reseeded with the member
/// farthest from its currently assigned centroid.
fn lloyd(d: &Dataset, members: &[usize], classes: &[usize], cfg: &SplitConfig) -> LloydOutcome {
    let n = d.n_features();
    let k = classes.len();
    let m = members.len();

    // Initialize centroids at the per-class means.
    let mut centroids = vec![vec![0.0; n]; k];
    let mut sizes = vec![0usize; k];
    for &i in members {
        let cls = d.label(i);
        let cluster = classes.iter().position(|&c| c == cls).expect("class present");
        for (acc, v) in centroids[cluster].iter_mut().zip(d.row(i)) {
            *acc += v;
        }
        sizes[cluster] += 1;
    }
    for (centroid, &size) in centroids.iter_mut().zip(&sizes) {
        for c in centroid.iter_mut() {
            *c /= size as f64;
        }
    }

    let mut assignments = vec![0usize; m];
    let mut prev_wcss = f64::INFINITY;
    let mut iterations = 0;
    let mut distance_evals = 0u64;
    let mut max_pass = 0u64;
    let mut wcss_trace = Vec::new();

    loop {
        iterations += 1;
        // Assignment step; ties go to the smaller centroid index.
        let mut changed = false;
        for (pos, &i) in members.iter().enumerate() {
            let row = d.row(i);
            let mut best = 0;
            let mut best_dist = squared_euclidean(row, &centroids[0]);
            for (cluster, centroid) in centroids.iter().enumerate().skip(1) {
                let dist = squared_euclidean(row, centroid);
                if dist < best_dist {
                    best = cluster;
                    best_dist = dist;
                }
            }
            if assignments[pos] != best {
                changed = true;
                assignments[pos] = best;
            }
        }
        let pass_evals = (m * k) as u64;
        distance_evals += pass_evals;
        max_pass = max_pass.max(pass_evals);

        // Reseed any emptied cluster with the member farthest from its centroid,
        // drawn from a cluster that can spare a member.
        let mut counts = vec![0usize; k];
        for &a in &assignments {
            counts[a] += 1;
        }
        for empty in 0..k {
            while counts[empty] == 0 {
                let mut donor_pos = None;
                let mut farthest = -1.0;
                for (pos, &i) in members.iter().enumerate() {
                    let cluster = assignments[pos];
                    if counts[cluster] < 2 {
                        continue;
                    }
                    let dist = squared_euclidean(d.row(i), &centroids[cluster]);
                    if dist > farthest {
                        farthest = dist;
                        donor_pos = Some(pos);
                    }
                }
                match donor_pos {
                    Some(pos) => {
                        counts[assignments[pos]] -= 1;
                        assignments[pos] = empty;
                        counts[empty] += 1;
                        changed = true;
                    }
                    None => break,
                }
            }
        }

        // Update step: centroids become the means of their members.
        for centroid in &mut centroids {
            centroid.iter_mut().for_each(|c| *c = 0.0);
        }
        let mut sizes = vec![0usize; k];
        for (pos, &i) in members.iter().enumerate() {
            let cluster = assignments[pos];
            for (acc, v) in centroids[cluster].iter_mut().zip(d.row(i)) {
                *acc += v;
            }
            sizes[cluster] += 1;
        }
        for (centroid, &size) in centroids.iter_mut().zip(&sizes) {
            if size > 0 {
                for c in centroid.iter_mut() {
                    *c /= size as f64;
                }
            }
        }

        let wcss: f64 = members
            .iter()
            .enumerate()
            .map(|(pos, &i)| squared_euclidean(d.row(i), &centroids[assignments[pos]]))
            .sum();
        debug_assert!(
            wcss <= prev_wcss * (1.0 + 1e-9) + 1e-12,
            "WCSS increased: {prev_wcss} -> {wcss}"
        );
        wcss_trace.push(wcss);

        let improved = prev_wcss - wcss;
        let done = !changed || improved < cfg.tol || iterations >= cfg.max_lloyd_iters;
        prev_wcss = wcss;
        if done {
            return LloydOutcome {
                assignments,
                trace: SplitTrace {
                    iterations,
                    wcss,
                    wcss_trace,
                    distance_evals,
                    max_pass_distance_evals: max_pass,
                },
            };
        }
    }
}

/// Splits an eligible ball into one sub-ball per class present.
pub fn split_ball(gb: &GranularBall, d: &Dataset, cfg: &SplitConfig) -> Result<Vec<GranularBall>> {
    let (balls, _) = split_ball_traced(gb, d, cfg)?;
    Ok(balls)
}

/// [`split_ball`] plus the Lloyd trace, for invariant checks and profiling.
pub fn split_ball_traced(
    gb: &GranularBall,
    d: &Dataset,
    cfg: &SplitConfig,
) -> Result<(Vec<GranularBall>, SplitTrace)> {
    cfg.validate()?;
    if !can_split(gb, d, cfg) {
        return Err(Error::Contract(format!(
            "ball with {} members (state {:.3}) is not splittable",
            gb.len(),
            gb.state
        )));
    }
    let classes: Vec<usize> = (0..d.n_classes())
        .filter(|&c| gb.class_counts[c] > 0)
        .collect();
    let outcome = lloyd(d, &gb.members, &classes, cfg);
    let mut partitions: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    for (pos, &i) in gb.members.iter().enumerate() {
        partitions[outcome.assignments[pos]].push(i);
    }
    let balls = partitions
        .into_iter()
        .filter(|p| !p.is_empty())
        .map(|p| make_ball(d, p, cfg.p))
        .collect::<Result<Vec<_>>>()?;
    Ok((balls, outcome.trace))
}

/// Iteratively splits the whole dataset into granular balls.
pub fn build_balls(d: &Dataset, cfg: &SplitConfig) -> Result<Vec<GranularBall>> {
    build_balls_with_stats(d, cfg).map(|(balls, _)| balls)
}

/// [`build_balls`] plus instrumentation counters.
pub fn build_balls_with_stats(
    d: &Dataset,
    cfg: &SplitConfig,
) -> Result<(Vec<GranularBall>, BuildStats)> {
    cfg.validate()?;
    let root = make_ball(d, (0..d.n_rows()).collect(), cfg.p)?;
    let mut worklist = vec![root];
    let mut output = Vec::new();
    let mut stats = BuildStats::default();

    while let Some(mut gb) = worklist.pop() {
        if !can_split(&gb, d, cfg) {
            output.push(gb);
            continue;
        }
        let (subs, trace) = split_ball_traced(&gb, d, cfg)?;
        stats.lloyd_iterations += trace.iterations;
        stats.distance_evals += trace.distance_evals;
        stats.max_pass_distance_evals = stats
            .max_pass_distance_evals
            .max(trace.max_pass_distance_evals);

        let parent_wcss = wcss_single(d, &gb.members);
        let replicates = subs.iter().any(|s| s.len() == gb.len());
        if replicates || trace.wcss >= parent_wcss {
            gb.terminal = true;
            output.push(gb);
        } else {
            stats.splits += 1;
            worklist.extend(subs);
        }
    }
    Ok((output, stats))
}

#[derive(Serialize)]
struct BallRecord<'a> {
    center: &'a [f64],
    radius: f64,
    support_radius: f64,
    label: usize,
    state: f64,
    members: usize,
}

/// Diagnostic dump: one JSON object per ball, one per line.
pub fn dump_balls_jsonl<W: std::io::Write>(balls: &[GranularBall], mut out: W) -> Result<()> {
    for b in balls {
        let record = BallRecord {
            center: &b.center,
            radius: b.radius,
            support_radius: b.support_radius,
            label: b.label,
            state: b.state,
            members: b.len(),
        };
        serde_json::to_writer(&mut out, &record)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dataset_1d(points: &[(f64, usize)]) -> Dataset {
        let rows = points.iter().map(|&(x, _)| vec![x]).collect();
        let labels = points.iter().map(|&(_, l)| l).collect();
        Dataset::from_rows(rows, labels, vec!["a".into(), "b".into()], "t").unwrap()
    }

    #[test]
    fn make_ball_symmetric_pair() {
        let d = dataset_1d(&[(0.0, 0), (2.0, 0)]);
        let d2 = Dataset::from_rows(
            vec![vec![0.0, 0.0], vec![2.0, 0.0]],
            vec![0, 0],
            vec!["a".into(), "b".into()],
            "t",
        )
        .unwrap();
        let gb = make_ball(&d2, vec![0, 1], DistanceOrder::EUCLIDEAN).unwrap();
        assert_eq!(gb.center, vec![1.0, 0.0]);
        assert_relative_eq!(gb.radius, 1.0);
        assert_eq!(gb.label, 0);
        assert_eq!(gb.state, 1.0);
        drop(d);
    }

    #[test]
    fn make_ball_counts_majority() {
        let d = dataset_1d(&[(0.0, 0), (1.0, 0), (2.0, 0), (3.0, 1)]);
        let gb = make_ball(&d, vec![0, 1, 2, 3], DistanceOrder::EUCLIDEAN).unwrap();
        assert_eq!(gb.label, 0);
        assert_relative_eq!(gb.state, 0.75);
        assert_eq!(gb.class_counts, vec![3, 1]);
    }

    #[test]
    fn make_ball_singleton() {
        let d = dataset_1d(&[(5.0, 1), (0.0, 0)]);
        let gb = make_ball(&d, vec![0], DistanceOrder::EUCLIDEAN).unwrap();
        assert_eq!(gb.radius, 0.0);
        assert_eq!(gb.support_radius, 0.0);
        assert_eq!(gb.state, 1.0);
        assert_eq!(gb.label, 1);
    }

    #[test]
    fn make_ball_rejects_empty() {
        let d = dataset_1d(&[(0.0, 0), (1.0, 1)]);
        assert!(make_ball(&d, vec![], DistanceOrder::EUCLIDEAN).is_err());
    }

    #[test]
    fn can_split_size_and_state_bounds() {
        let cfg = SplitConfig::default();
        // n=1, two classes, 4 members, impure: eligible.
        let d = dataset_1d(&[(0.0, 0), (0.1, 0), (10.0, 1), (10.1, 1)]);
        let gb = make_ball(&d, vec![0, 1, 2, 3], cfg.p).unwrap();
        assert!(can_split(&gb, &d, &cfg));
        // Pure ball never splits at T=1.
        let pure = make_ball(&d, vec![0, 1], cfg.p).unwrap();
        assert!(!can_split(&pure, &d, &cfg));
        // Three members of two classes in 1-D need 4.
        let small = make_ball(&d, vec![0, 1, 2], cfg.p).unwrap();
        assert!(!can_split(&small, &d, &cfg));
    }

    #[test]
    fn split_separated_pairs() {
        let d = dataset_1d(&[(0.0, 0), (0.1, 0), (10.0, 1), (10.1, 1)]);
        let cfg = SplitConfig::default();
        let gb = make_ball(&d, vec![0, 1, 2, 3], cfg.p).unwrap();
        let subs = split_ball(&gb, &d, &cfg).unwrap();
        assert_eq!(subs.len(), 2);
        let mut memberships: Vec<Vec<usize>> = subs.iter().map(|s| s.members.clone()).collect();
        memberships.sort();
        assert_eq!(memberships, vec![vec![0, 1], vec![2, 3]]);
        assert!(subs.iter().all(|s| s.state == 1.0));
    }

    #[test]
    fn split_keeps_partition_on_identical_points() {
        let d = dataset_1d(&[(1.0, 0), (1.0, 1), (1.0, 0), (1.0, 1)]);
        let cfg = SplitConfig::default();
        let gb = make_ball(&d, vec![0, 1, 2, 3], cfg.p).unwrap();
        let subs = split_ball(&gb, &d, &cfg).unwrap();
        let mut all: Vec<usize> = subs.iter().flat_map(|s| s.members.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert!(subs.iter().all(|s| !s.is_empty()));
    }

    #[test]
    fn split_improves_wcss_over_parent() {
        let d = dataset_1d(&[(0.0, 0), (0.5, 0), (9.0, 1), (9.5, 1), (4.0, 0), (5.0, 1)]);
        let cfg = SplitConfig::default();
        let gb = make_ball(&d, (0..6).collect(), cfg.p).unwrap();
        let subs = split_ball(&gb, &d, &cfg).unwrap();
        let parent = wcss_single(&d, &gb.members);
        let child: f64 = subs.iter().map(|s| wcss_single(&d, &s.members)).sum();
        assert!(child <= parent);
    }

    #[test]
    fn build_single_class_returns_one_ball() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0]];
        let d = Dataset::from_rows(rows, vec![0, 0, 0], vec!["a".into(), "b".into()], "t").unwrap();
        let balls = build_balls(&d, &SplitConfig::default()).unwrap();
        assert_eq!(balls.len(), 1);
        assert_eq!(balls[0].state, 1.0);
    }

    fn two_blobs(seed: u64, per_class: usize, sep: f64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in 0..2usize {
            let cx = class as f64 * sep;
            for _ in 0..per_class {
                rows.push(vec![
                    cx + rng.random_range(-0.5..0.5),
                    rng.random_range(-0.5..0.5),
                ]);
                labels.push(class);
            }
        }
        Dataset::from_rows(rows, labels, vec!["a".into(), "b".into()], "blobs").unwrap()
    }

    #[test]
    fn build_separated_blobs_yields_pure_balls() {
        let d = two_blobs(11, 50, 50.0);
        let balls = build_balls(&d, &SplitConfig::default()).unwrap();
        assert!(balls.iter().all(|b| b.state == 1.0));
        let total: usize = balls.iter().map(|b| b.len()).sum();
        assert_eq!(total, 100);
    }

    #[test]
    fn build_is_deterministic() {
        let d = two_blobs(5, 40, 3.0);
        let cfg = SplitConfig::default();
        let a = build_balls(&d, &cfg).unwrap();
        let b = build_balls(&d, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dump_writes_one_line_per_ball() {
        let d = two_blobs(3, 10, 20.0);
        let balls = build_balls(&d, &SplitConfig::default()).unwrap();
        let mut buf = Vec::new();
        dump_balls_jsonl(&balls, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), balls.len());
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v["support_radius"].as_f64().unwrap() >= v["radius"].as_f64().unwrap() - 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn build_partitions_dataset(
            m in 5usize..80,
            n in 1usize..4,
            k in 2usize..4,
            seed in 0u64..500,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| rng.random_range(-5.0..5.0)).collect())
                .collect();
            let labels: Vec<usize> = (0..m).map(|_| rng.random_range(0..k)).collect();
            let names = (0..k).map(|c| format!("c{c}")).collect();
            let d = Dataset::from_rows(rows, labels, names, "prop").unwrap();
            let (balls, stats) = build_balls_with_stats(&d, &SplitConfig::default()).unwrap();

            // Partition invariant.
            let mut seen = vec![false; m];
            for b in &balls {
                for &i in &b.members {
                    prop_assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            prop_assert!(seen.iter().all(|&s| s));

            // Purity at T=1 for anything still size-eligible and not terminal.
            for b in &balls {
                let kb = b.distinct_classes();
                if !b.terminal && b.len() >= kb * (n + 1) {
                    prop_assert_eq!(b.state, 1.0);
                }
            }

            // One splitting pass costs at most k·N distance evaluations.
            prop_assert!(stats.max_pass_distance_evals <= (k * m) as u64);
        }
    }
}
