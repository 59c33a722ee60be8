//! Vocabulary growth curves and fixed-package lexical-richness comparison.
//!
//! The growth curve counts distinct lemmas seen among the first N tokens.
//! Corpora of different sizes become comparable by reading the curve at
//! fixed package sizes (500 / 1,000 / 10,000 tokens by default). Because
//! document order biases the curve, the order-free variant averages over
//! seeded shuffles of the *charter* ordering; tokens stay contiguous within
//! a charter so that within-document cohesion is preserved.

use std::collections::HashSet;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveMode {
    DocumentOrder,
    ShuffledMean { replicates: u32, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthPoint {
    /// N: tokens read.
    pub tokens: usize,
    /// Mean distinct-lemma count over replicates (exact count for
    /// document order).
    pub mean: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCurve {
    pub mode: CurveMode,
    pub points: Vec<GrowthPoint>,
}

fn check_checkpoints(checkpoints: &[usize], len: usize) -> Result<()> {
    let mut prev = 0usize;
    for &n in checkpoints {
        if n < prev {
            return Err(Error::InvalidInput(
                "checkpoints must be sorted ascending".into(),
            ));
        }
        if n > len {
            return Err(Error::CheckpointOutOfRange {
                checkpoint: n,
                len,
            });
        }
        prev = n;
    }
    Ok(())
}

fn distinct_at<T: Eq + Hash + Copy>(stream: &[T], checkpoints: &[usize]) -> Vec<u64> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = 0usize;
    for (i, tok) in stream.iter().enumerate() {
        while next < checkpoints.len() && checkpoints[next] == i {
            out.push(seen.len() as u64);
            next += 1;
        }
        seen.insert(*tok);
    }
    while next < checkpoints.len() {
        out.push(seen.len() as u64);
        next += 1;
    }
    out
}

/// V(N) = distinct lemmas among the first N tokens, in document order.
pub fn growth_curve<T: Eq + Hash + Copy>(
    stream: &[T],
    checkpoints: &[usize],
) -> Result<GrowthCurve> {
    check_checkpoints(checkpoints, stream.len())?;
    let vs = distinct_at(stream, checkpoints);
    Ok(GrowthCurve {
        mode: CurveMode::DocumentOrder,
        points: checkpoints
            .iter()
            .zip(vs)
            .map(|(&n, v)| GrowthPoint {
                tokens: n,
                mean: v as f64,
                min: v,
                max: v,
            })
            .collect(),
    })
}

fn replicate_seed(seed: u64, replicate: u32) -> u64 {
    // splitmix64 step keeps replicate streams decorrelated.
    let mut z = seed
        .wrapping_add((replicate as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mean growth curve over `replicates` seeded uniform shuffles of the
/// document ordering. Bit-for-bit reproducible for a given (replicates,
/// seed); the reduction order over replicates is fixed.
pub fn mean_growth_curve<T: Eq + Hash + Copy + Sync>(
    documents: &[Vec<T>],
    checkpoints: &[usize],
    replicates: u32,
    seed: u64,
) -> Result<GrowthCurve> {
    if replicates == 0 {
        return Err(Error::InvalidInput("need at least one replicate".into()));
    }
    let total: usize = documents.iter().map(|d| d.len()).sum();
    check_checkpoints(checkpoints, total)?;

    let per_replicate: Vec<Vec<u64>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(seed, r));
            let mut order: Vec<usize> = (0..documents.len()).collect();
            order.shuffle(&mut rng);
            let mut stream = Vec::with_capacity(total);
            for di in order {
                stream.extend_from_slice(&documents[di]);
            }
            distinct_at(&stream, checkpoints)
        })
        .collect();

    let points = checkpoints
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut sum = 0.0f64;
            let mut min = u64::MAX;
            let mut max = 0u64;
            for rep in &per_replicate {
                sum += rep[i] as f64;
                min = min.min(rep[i]);
                max = max.max(rep[i]);
            }
            GrowthPoint {
                tokens: n,
                mean: sum / replicates as f64,
                min,
                max,
            }
        })
        .collect();

    Ok(GrowthCurve {
        mode: CurveMode::ShuffledMean {
            replicates,
            seed,
        },
        points,
    })
}

/// One row of the fixed-package comparison table. Corpora smaller than a
/// package report it as absent rather than extrapolating.
#[derive(Debug, Clone, PartialEq)]
pub struct RichnessRow {
    pub corpus: String,
    pub package: usize,
    pub v_mean: Option<f64>,
    pub v_min: Option<u64>,
    pub v_max: Option<u64>,
}

pub const DEFAULT_PACKAGES: [usize; 3] = [500, 1_000, 10_000];

/// Mean growth values at the package sizes, one row per corpus x package.
pub fn richness_compare<T: Eq + Hash + Copy + Sync>(
    corpora: &[(String, Vec<Vec<T>>)],
    packages: &[usize],
    replicates: u32,
    seed: u64,
) -> Result<Vec<RichnessRow>> {
    let mut rows = Vec::new();
    for (name, documents) in corpora {
        let total: usize = documents.iter().map(|d| d.len()).sum();
        let reachable: Vec<usize> = packages.iter().copied().filter(|&p| p <= total).collect();
        let curve = if reachable.is_empty() {
            None
        } else {
            Some(mean_growth_curve(documents, &reachable, replicates, seed)?)
        };
        for &package in packages {
            let point = curve
                .as_ref()
                .and_then(|c| c.points.iter().find(|p| p.tokens == package));
            rows.push(RichnessRow {
                corpus: name.clone(),
                package,
                v_mean: point.map(|p| p.mean),
                v_min: point.map(|p| p.min),
                v_max: point.map(|p| p.max),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_counts_distinct_prefix_lemmas() {
        let stream = ['a', 'b', 'a', 'c'];
        let curve = growth_curve(&stream, &[1, 2, 3, 4]).unwrap();
        let vs: Vec<u64> = curve.points.iter().map(|p| p.min).collect();
        assert_eq!(vs, vec![1, 2, 2, 3]);
    }

    #[test]
    fn constant_stream_stays_at_one() {
        let stream = vec![7u32; 100];
        let curve = growth_curve(&stream, &[1, 50, 100]).unwrap();
        assert!(curve.points.iter().all(|p| p.min == 1));
    }

    #[test]
    fn checkpoint_beyond_stream_errors() {
        let stream = ['a', 'b'];
        assert!(matches!(
            growth_curve(&stream, &[3]),
            Err(Error::CheckpointOutOfRange { .. })
        ));
    }

    #[test]
    fn curve_matches_set_scan_oracle() {
        // Oracle: a fresh set-insertion scan, independent of distinct_at's
        // checkpoint walking.
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let stream: Vec<u32> = (0..10_000).map(|_| rng.gen_range(0..700)).collect();
        let checkpoints: Vec<usize> = vec![1, 10, 100, 999, 5_000, 10_000];
        let curve = growth_curve(&stream, &checkpoints).unwrap();
        for (point, &n) in curve.points.iter().zip(&checkpoints) {
            let oracle = stream[..n].iter().collect::<HashSet<_>>().len() as u64;
            assert_eq!(point.min, oracle, "V({n})");
        }
    }

    #[test]
    fn monotone_and_bounded() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let stream: Vec<u32> = (0..3_000).map(|_| rng.gen_range(0..80)).collect();
        let checkpoints: Vec<usize> = (0..=30).map(|i| i * 100).collect();
        let curve = growth_curve(&stream, &checkpoints).unwrap();
        let mut prev = 0u64;
        for p in &curve.points {
            assert!(p.min >= prev, "V must be non-decreasing");
            assert!(p.min as usize <= p.tokens, "V(N) <= N");
            assert!(p.min <= 80, "V(N) <= vocabulary size");
            prev = p.min;
        }
    }

    #[test]
    fn single_replicate_equals_curve_on_shuffled_order() {
        let documents: Vec<Vec<u32>> = vec![vec![1, 2], vec![2, 3], vec![4]];
        let mean = mean_growth_curve(&documents, &[1, 3, 5], 1, 99).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(99, 0));
        let mut order: Vec<usize> = (0..documents.len()).collect();
        order.shuffle(&mut rng);
        let stream: Vec<u32> = order.iter().flat_map(|&d| documents[d].clone()).collect();
        let direct = growth_curve(&stream, &[1, 3, 5]).unwrap();
        for (a, b) in mean.points.iter().zip(&direct.points) {
            assert_eq!(a.mean, b.mean);
        }
    }

    #[test]
    fn all_distinct_stream_means_identity() {
        let documents: Vec<Vec<u32>> = (0..6).map(|i| vec![2 * i, 2 * i + 1]).collect();
        let curve = mean_growth_curve(&documents, &[1, 4, 12], 7, 1).unwrap();
        for p in &curve.points {
            assert_eq!(p.mean, p.tokens as f64);
            assert_eq!(p.min, p.tokens as u64);
        }
    }

    #[test]
    fn mean_reproducible_given_seed() {
        let documents: Vec<Vec<u32>> = (0..20).map(|i| vec![i % 5, i % 7, i % 3]).collect();
        let a = mean_growth_curve(&documents, &[10, 30, 60], 25, 4242).unwrap();
        let b = mean_growth_curve(&documents, &[10, 30, 60], 25, 4242).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_matches_exhaustive_expectation_on_tiny_corpus() {
        // 8 one-token documents over two symbols. The exact expectation of
        // V(N) under uniform document shuffling comes from enumerating all
        // 8! orderings.
        let documents: Vec<Vec<u32>> = vec![
            vec![0],
            vec![0],
            vec![0],
            vec![0],
            vec![1],
            vec![1],
            vec![1],
            vec![1],
        ];
        let checkpoints = [1usize, 2, 4, 8];

        let mut perm: Vec<usize> = (0..8).collect();
        let mut sums = vec![0.0f64; checkpoints.len()];
        let mut sq_sums = vec![0.0f64; checkpoints.len()];
        let mut count = 0usize;
        // Heap's algorithm, iterative.
        let mut stack = vec![0usize; 8];
        let visit = |perm: &Vec<usize>, sums: &mut Vec<f64>, sq: &mut Vec<f64>| {
            let stream: Vec<u32> = perm.iter().map(|&d| documents[d][0]).collect();
            for (i, &n) in checkpoints.iter().enumerate() {
                let v = stream[..n].iter().collect::<HashSet<_>>().len() as f64;
                sums[i] += v;
                sq[i] += v * v;
            }
        };
        visit(&perm, &mut sums, &mut sq_sums);
        count += 1;
        let mut i = 1usize;
        while i < 8 {
            if stack[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(stack[i], i);
                }
                visit(&perm, &mut sums, &mut sq_sums);
                count += 1;
                stack[i] += 1;
                i = 1;
            } else {
                stack[i] = 0;
                i += 1;
            }
        }
        assert_eq!(count, 40_320);

        let replicates = 4_000u32;
        let curve = mean_growth_curve(&documents, &checkpoints, replicates, 17).unwrap();
        for (i, point) in curve.points.iter().enumerate() {
            let expectation = sums[i] / count as f64;
            let variance = sq_sums[i] / count as f64 - expectation * expectation;
            let tolerance = 3.0 * (variance / replicates as f64).sqrt();
            assert!(
                (point.mean - expectation).abs() <= tolerance.max(1e-12),
                "V({}): mean {} vs E {} (tol {})",
                point.tokens,
                point.mean,
                expectation,
                tolerance
            );
        }
        // Frozen from the enumeration: E[V(1)] = 1, E[V(8)] = 2,
        // E[V(2)] = 1 + 4/7.
        assert!((sums[0] / count as f64 - 1.0).abs() < 1e-12);
        assert!((sums[1] / count as f64 - (1.0 + 4.0 / 7.0)).abs() < 1e-12);
        assert!((sums[3] / count as f64 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn subadditivity() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let stream: Vec<u32> = (0..2_000).map(|_| rng.gen_range(0..300)).collect();
        let curve = growth_curve(&stream, &[400, 900, 1500, 2000]).unwrap();
        for pair in curve.points.windows(2) {
            let added = (pair[1].tokens - pair[0].tokens) as u64;
            assert!(pair[1].min <= pair[0].min + added);
        }
    }

    #[test]
    fn compare_reports_small_corpora_as_absent() {
        let big: Vec<Vec<u32>> = (0..300).map(|i| vec![i % 40, i % 17]).collect();
        let small: Vec<Vec<u32>> = vec![vec![1, 2, 3]];
        let rows = richness_compare(
            &[("big".into(), big), ("small".into(), small)],
            &[500, 1000],
            3,
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].v_mean.is_some()); // big @ 500
        assert!(rows[1].v_mean.is_none()); // big has 600 tokens, 1000 is absent
        let small_rows: Vec<_> = rows.iter().filter(|r| r.corpus == "small").collect();
        assert!(small_rows.iter().all(|r| r.v_mean.is_none()));
    }

    #[test]
    fn planted_richer_corpus_ranks_higher() {
        // Corpus B draws from a vocabulary twice as large as A, same size.
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a: Vec<Vec<u32>> = (0..200)
            .map(|_| (0..10).map(|_| rng.gen_range(0..100)).collect())
            .collect();
        let b: Vec<Vec<u32>> = (0..200)
            .map(|_| (0..10).map(|_| rng.gen_range(0..200)).collect())
            .collect();
        let rows = richness_compare(
            &[("a".into(), a), ("b".into(), b)],
            &[1000],
            5,
            33,
        )
        .unwrap();
        let v = |name: &str| {
            rows.iter()
                .find(|r| r.corpus == name)
                .unwrap()
                .v_mean
                .unwrap()
        };
        assert!(v("b") > v("a"), "b={} a={}", v("b"), v("a"));
    }

    #[test]
    fn identical_corpora_identical_rows() {
        let docs: Vec<Vec<u32>> = (0..100).map(|i| vec![i % 23, i % 11, i % 7]).collect();
        let rows = richness_compare(
            &[("x".into(), docs.clone()), ("y".into(), docs)],
            &[100, 250],
            4,
            9,
        )
        .unwrap();
        assert_eq!(rows[0].v_mean, rows[2].v_mean);
        assert_eq!(rows[1].v_mean, rows[3].v_mean);
    }

    #[test]
    fn ten_thousand_of_ten_lemmas_saturates() {
        let docs: Vec<Vec<u32>> = (0..1000).map(|i| vec![(i % 10) as u32; 10]).collect();
        let rows = richness_compare(&[("a".into(), docs)], &[10_000], 2, 5).unwrap();
        assert_eq!(rows[0].v_mean, Some(10.0));
    }
}
