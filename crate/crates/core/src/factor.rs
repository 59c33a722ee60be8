//! Correspondence analysis of contingency tables, with the clustering
//! companions (k-means, Ward) used to read the factorial maps.
//!
//! CA decomposes the standardized residuals S = D_r^{-1/2}(P - r c^T)D_c^{-1/2}
//! of the relative-frequency table P. Row and column principal coordinates
//! are F = D_r^{-1/2} U Sigma and G = D_c^{-1/2} V Sigma, and the total
//! inertia (sum of squared singular values) equals chi^2 / n.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::ContingencyTable;
use crate::svd::svd;

/// Correspondence-analysis output in principal coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CAResult {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// rows x d principal coordinates.
    pub row_coords: Vec<Vec<f64>>,
    /// cols x d principal coordinates.
    pub col_coords: Vec<Vec<f64>>,
    /// Kept singular values, non-increasing.
    pub singular_values: Vec<f64>,
    /// Inertia of each kept axis (sigma^2).
    pub axis_inertia: Vec<f64>,
    /// chi^2 / n over all non-trivial axes, kept or not.
    pub total_inertia: f64,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    /// Labels dropped for having a zero marginal.
    pub dropped_rows: Vec<String>,
    pub dropped_cols: Vec<String>,
}

impl CAResult {
    pub fn dims(&self) -> usize {
        self.singular_values.len()
    }

    /// Share of total inertia carried by each kept axis.
    pub fn axis_shares(&self) -> Vec<f64> {
        self.axis_inertia
            .iter()
            .map(|&i| if self.total_inertia > 0.0 { i / self.total_inertia } else { 0.0 })
            .collect()
    }

    /// Contribution of row `i` to axis `k`: r_i F_ik^2 / sigma_k^2.
    pub fn row_contribution(&self, i: usize, k: usize) -> f64 {
        let s2 = self.axis_inertia[k];
        if s2 > 0.0 {
            self.row_masses[i] * self.row_coords[i][k].powi(2) / s2
        } else {
            0.0
        }
    }

    pub fn col_contribution(&self, j: usize, k: usize) -> f64 {
        let s2 = self.axis_inertia[k];
        if s2 > 0.0 {
            self.col_masses[j] * self.col_coords[j][k].powi(2) / s2
        } else {
            0.0
        }
    }
}

/// Correspondence analysis keeping at most `d` axes.
///
/// Rows and columns with zero marginals are dropped and reported in the
/// result rather than failing: sparse lemma tables always contain some.
pub fn correspondence_analysis(table: &ContingencyTable, d: usize) -> Result<CAResult> {
    if d == 0 {
        return Err(Error::BadDimension { d, max: 0 });
    }
    let kept_rows: Vec<usize> = (0..table.rows()).filter(|&r| table.row_totals[r] > 0).collect();
    let kept_cols: Vec<usize> = (0..table.cols()).filter(|&c| table.col_totals[c] > 0).collect();
    let dropped_rows: Vec<String> = (0..table.rows())
        .filter(|&r| table.row_totals[r] == 0)
        .map(|r| table.row_labels[r].clone())
        .collect();
    let dropped_cols: Vec<String> = (0..table.cols())
        .filter(|&c| table.col_totals[c] == 0)
        .map(|c| table.col_labels[c].clone())
        .collect();
    let rows = kept_rows.len();
    let cols = kept_cols.len();
    if rows < 2 || cols < 2 {
        return Err(Error::DegenerateTable { rows, cols });
    }
    let n = table.n as f64;
    if table.n == 0 {
        return Err(Error::EmptyTable);
    }

    let row_masses: Vec<f64> = kept_rows.iter().map(|&r| table.row_totals[r] as f64 / n).collect();
    let col_masses: Vec<f64> = kept_cols.iter().map(|&c| table.col_totals[c] as f64 / n).collect();

    // Standardized residuals.
    let mut s = DMatrix::zeros(rows, cols);
    for (ri, &r) in kept_rows.iter().enumerate() {
        for (ci, &c) in kept_cols.iter().enumerate() {
            let p = table.get(r, c) as f64 / n;
            let expected = row_masses[ri] * col_masses[ci];
            s[(ri, ci)] = (p - expected) / expected.sqrt();
        }
    }

    let decomposition = svd(&s);
    let max_axes = rows.min(cols) - 1;
    let keep = d.min(max_axes);

    let total_inertia: f64 = decomposition
        .sigma
        .iter()
        .take(max_axes)
        .map(|&x| x * x)
        .sum();

    let singular_values: Vec<f64> = decomposition.sigma.iter().take(keep).copied().collect();
    let axis_inertia: Vec<f64> = singular_values.iter().map(|&x| x * x).collect();

    let row_coords: Vec<Vec<f64>> = (0..rows)
        .map(|i| {
            (0..keep)
                .map(|k| decomposition.u[(i, k)] * singular_values[k] / row_masses[i].sqrt())
                .collect()
        })
        .collect();
    let col_coords: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            (0..keep)
                .map(|k| decomposition.v[(j, k)] * singular_values[k] / col_masses[j].sqrt())
                .collect()
        })
        .collect();

    Ok(CAResult {
        row_labels: kept_rows.iter().map(|&r| table.row_labels[r].clone()).collect(),
        col_labels: kept_cols.iter().map(|&c| table.col_labels[c].clone()).collect(),
        row_coords,
        col_coords,
        singular_values,
        axis_inertia,
        total_inertia,
        row_masses,
        col_masses,
        dropped_rows,
        dropped_cols,
    })
}

// ---------------------------------------------------------------------------
// Clustering
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ClusterMethod {
    KMeans { k: usize, seed: u64 },
    Ward,
}

/// One agglomerative merge: the two cluster ids joined and the variance
/// increase at which they joined. Leaves are 0..n-1; merge t creates
/// cluster n+t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Clustering {
    pub method: ClusterMethod,
    pub assignments: Vec<usize>,
    /// Sum of squared distances to assigned centers (k-means only).
    pub objective: f64,
    pub iterations: usize,
    /// Merge sequence with non-decreasing heights (Ward only).
    pub dendrogram: Option<Vec<Merge>>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm with seeded farthest-point initialization. The first
/// center is drawn uniformly with the seed; each next center is the point
/// farthest from its nearest chosen center (ties to the lowest index), so
/// the whole run is deterministic given (points, k, seed).
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, max_iter: usize) -> Result<Clustering> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::BadClusterCount { k, n });
    }
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    centers.push(points[rng.gen_range(0..n)].clone());
    let mut nearest: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let mut best = 0usize;
        for i in 1..n {
            if nearest[i] > nearest[best] {
                best = i;
            }
        }
        centers.push(points[best].clone());
        let latest = centers.last().unwrap();
        for i in 0..n {
            let d = sq_dist(&points[i], latest);
            if d < nearest[i] {
                nearest[i] = d;
            }
        }
    }

    let assign = |centers: &[Vec<f64>]| -> Vec<usize> {
        points
            .iter()
            .map(|p| {
                let mut best = 0usize;
                let mut best_d = sq_dist(p, &centers[0]);
                for (c, center) in centers.iter().enumerate().skip(1) {
                    let d = sq_dist(p, center);
                    if d < best_d {
                        best_d = d;
                        best = c;
                    }
                }
                best
            })
            .collect()
    };

    let mut assignments = assign(&centers);
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        // Means of each cluster.
        let mut sums = vec![vec![0.0f64; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, &x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // Reseat an empty cluster on the point farthest from its
                // current center.
                let mut worst = 0usize;
                let mut worst_d = -1.0f64;
                for (i, p) in points.iter().enumerate() {
                    let d = sq_dist(p, &centers[assignments[i]]);
                    if d > worst_d {
                        worst_d = d;
                        worst = i;
                    }
                }
                centers[c] = points[worst].clone();
            } else {
                for d0 in 0..dim {
                    centers[c][d0] = sums[c][d0] / counts[c] as f64;
                }
            }
        }
        let next = assign(&centers);
        if next == assignments || iterations >= max_iter {
            assignments = next;
            break;
        }
        assignments = next;
    }

    let objective = points
        .iter()
        .zip(&assignments)
        .map(|(p, &a)| sq_dist(p, &centers[a]))
        .sum();
    Ok(Clustering {
        method: ClusterMethod::KMeans { k, seed },
        assignments,
        objective,
        iterations,
        dendrogram: None,
    })
}

/// Ward agglomeration by repeated global-minimum merges, dissimilarities
/// updated with the Lance-Williams recurrence on variance-increase costs.
/// Two singletons merge at half their squared distance.
pub fn ward_cluster(points: &[Vec<f64>]) -> Result<Clustering> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }

    // Dissimilarity rows indexed by active cluster slot.
    let mut dist: Vec<Vec<f64>> = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = sq_dist(&points[i], &points[j]) / 2.0;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut active: Vec<bool> = vec![true; n];
    let mut sizes: Vec<usize> = vec![1; n];
    let mut ids: Vec<usize> = (0..n).collect();
    let mut merges: Vec<Merge> = Vec::with_capacity(n - 1);

    for step in 0..(n - 1) {
        // Global minimum over active pairs; ties to lexicographically
        // smallest (i, j).
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in (i + 1)..n {
                if !active[j] {
                    continue;
                }
                let d = dist[i][j];
                if best.map(|(_, _, bd)| d < bd).unwrap_or(true) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, height) = best.expect("at least two active clusters");

        // Lance-Williams update for Ward: slot i becomes the merged cluster.
        let (ni, nj) = (sizes[i] as f64, sizes[j] as f64);
        for m in 0..n {
            if !active[m] || m == i || m == j {
                continue;
            }
            let nm = sizes[m] as f64;
            let total = ni + nj + nm;
            let d = ((ni + nm) * dist[i][m] + (nj + nm) * dist[j][m] - nm * height) / total;
            dist[i][m] = d;
            dist[m][i] = d;
        }
        active[j] = false;
        merges.push(Merge {
            left: ids[i].min(ids[j]),
            right: ids[i].max(ids[j]),
            height,
            size: sizes[i] + sizes[j],
        });
        sizes[i] += sizes[j];
        ids[i] = n + step;
    }

    Ok(Clustering {
        method: ClusterMethod::Ward,
        assignments: vec![0; n],
        objective: 0.0,
        iterations: n - 1,
        dendrogram: Some(merges),
    })
}

/// Cut a Ward dendrogram into `g` clusters; labels are 0..g-1 in order of
/// first member appearance.
pub fn cut_dendrogram(merges: &[Merge], n: usize, g: usize) -> Result<Vec<usize>> {
    if g == 0 || g > n {
        return Err(Error::BadClusterCount { k: g, n });
    }
    // Union-find over the first n - g merges.
    let mut parent: Vec<usize> = (0..(n + merges.len())).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for (t, merge) in merges.iter().take(n - g).enumerate() {
        let a = find(&mut parent, merge.left);
        let b = find(&mut parent, merge.right);
        let c = n + t;
        parent[a] = c;
        parent[b] = c;
    }
    let mut label_of_root: std::collections::HashMap<usize, usize> = Default::default();
    let mut assignments = Vec::with_capacity(n);
    for p in 0..n {
        let root = find(&mut parent, p);
        let next = label_of_root.len();
        assignments.push(*label_of_root.entry(root).or_insert(next));
    }
    Ok(assignments)
}

/// Mean silhouette coefficient of labeled points (squared-Euclidean space,
/// Euclidean distances). Points in singleton classes contribute 0.
pub fn mean_silhouette(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let n = points.len();
    assert_eq!(n, labels.len());
    if n == 0 {
        return 0.0;
    }
    let classes: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
    let mut total = 0.0f64;
    for i in 0..n {
        let mut sums: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
        for j in 0..n {
            if i == j {
                continue;
            }
            let e = sums.entry(labels[j]).or_insert((0.0, 0));
            e.0 += sq_dist(&points[i], &points[j]).sqrt();
            e.1 += 1;
        }
        let own = match sums.get(&labels[i]) {
            Some(&(sum, count)) if count > 0 => sum / count as f64,
            _ => {
                continue; // singleton class: silhouette 0 contribution
            }
        };
        let nearest_other = classes
            .iter()
            .filter(|&&c| c != labels[i])
            .filter_map(|c| sums.get(c).map(|&(sum, count)| sum / count as f64))
            .fold(f64::INFINITY, f64::min);
        if nearest_other.is_finite() {
            let denom = own.max(nearest_other);
            if denom > 0.0 {
                total += (nearest_other - own) / denom;
            }
        }
    }
    total / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::ContingencyTable;

    fn table(rows: usize, cols: usize, counts: &[u64]) -> ContingencyTable {
        ContingencyTable::from_counts(
            (0..rows).map(|r| format!("r{r}")).collect(),
            (0..cols).map(|c| format!("c{c}")).collect(),
            counts.to_vec(),
        )
    }

    /// Independent chi-square: sum (obs - exp)^2 / exp over non-zero
    /// marginal cells.
    fn chi_square(t: &ContingencyTable) -> f64 {
        let n = t.n as f64;
        let mut total = 0.0;
        for r in 0..t.rows() {
            for c in 0..t.cols() {
                if t.row_totals[r] == 0 || t.col_totals[c] == 0 {
                    continue;
                }
                let expected = t.row_totals[r] as f64 * t.col_totals[c] as f64 / n;
                let obs = t.get(r, c) as f64;
                total += (obs - expected).powi(2) / expected;
            }
        }
        total
    }

    #[test]
    fn independence_table_has_zero_inertia() {
        let ca = correspondence_analysis(&table(2, 2, &[1, 2, 2, 4]), 1).unwrap();
        assert!(ca.total_inertia.abs() < 1e-12);
        for coords in ca.row_coords.iter().chain(&ca.col_coords) {
            for &x in coords {
                assert!(x.abs() < 1e-7, "coordinate {x} should be 0");
            }
        }
    }

    #[test]
    fn two_by_two_inertia_matches_formula() {
        // n (ad - bc)^2 / (r1 r2 c1 c2) / n for [[3,1],[1,3]]:
        // 8 * 64 / 256 = 2, inertia = 2/8 = 0.25.
        let t = table(2, 2, &[3, 1, 1, 3]);
        let ca = correspondence_analysis(&t, 1).unwrap();
        assert!((ca.total_inertia - 0.25).abs() < 1e-12);
        assert!((chi_square(&t) / t.n as f64 - 0.25).abs() < 1e-12);
    }

    #[test]
    fn inertia_equals_chi_square_over_n_on_random_tables() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let rows = rng.gen_range(2..11usize);
            let cols = rng.gen_range(2..9usize);
            let counts: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..30)).collect();
            let t = table(rows, cols, &counts);
            if t.n == 0 {
                continue;
            }
            match correspondence_analysis(&t, rows.min(cols)) {
                Ok(ca) => {
                    let expected = chi_square(&t) / t.n as f64;
                    assert!(
                        (ca.total_inertia - expected).abs() < 1e-10,
                        "inertia {} vs chi2/n {}",
                        ca.total_inertia,
                        expected
                    );
                }
                Err(Error::DegenerateTable { .. }) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn weighted_mean_of_coordinates_is_zero() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let counts: Vec<u64> = (0..5 * 4).map(|_| rng.gen_range(1..20)).collect();
        let ca = correspondence_analysis(&table(5, 4, &counts), 3).unwrap();
        for k in 0..ca.dims() {
            let row_mean: f64 = ca
                .row_masses
                .iter()
                .zip(&ca.row_coords)
                .map(|(&m, coords)| m * coords[k])
                .sum();
            let col_mean: f64 = ca
                .col_masses
                .iter()
                .zip(&ca.col_coords)
                .map(|(&m, coords)| m * coords[k])
                .sum();
            assert!(row_mean.abs() < 1e-10, "axis {k} row mean {row_mean}");
            assert!(col_mean.abs() < 1e-10, "axis {k} col mean {col_mean}");
        }
    }

    #[test]
    fn transition_formula_holds() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rows = 6usize;
        let cols = 5usize;
        let counts: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(1..25)).collect();
        let t = table(rows, cols, &counts);
        let ca = correspondence_analysis(&t, 4).unwrap();
        let n = t.n as f64;
        for i in 0..rows {
            for k in 0..ca.dims() {
                if ca.singular_values[k] < 1e-9 {
                    continue;
                }
                // F_ik = (1 / r_i) * sum_j p_ij G_jk / sigma_k
                let mut acc = 0.0;
                for j in 0..cols {
                    acc += (t.get(i, j) as f64 / n) * ca.col_coords[j][k];
                }
                let expected = acc / ca.row_masses[i] / ca.singular_values[k];
                assert!(
                    (ca.row_coords[i][k] - expected).abs() < 1e-8,
                    "row {i} axis {k}: {} vs {}",
                    ca.row_coords[i][k],
                    expected
                );
            }
        }
    }

    #[test]
    fn invariant_under_table_scaling() {
        let t1 = table(3, 3, &[5, 1, 2, 1, 6, 1, 2, 2, 7]);
        let scaled: Vec<u64> = t1.counts.iter().map(|&x| x * 9).collect();
        let t2 = table(3, 3, &scaled);
        let ca1 = correspondence_analysis(&t1, 2).unwrap();
        let ca2 = correspondence_analysis(&t2, 2).unwrap();
        assert!((ca1.total_inertia - ca2.total_inertia).abs() < 1e-12);
        for (a, b) in ca1.row_coords.iter().zip(&ca2.row_coords) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_marginal_rows_dropped_with_report() {
        let t = table(3, 2, &[3, 1, 0, 0, 1, 3]);
        let ca = correspondence_analysis(&t, 1).unwrap();
        assert_eq!(ca.dropped_rows, vec!["r1"]);
        assert_eq!(ca.row_labels, vec!["r0", "r2"]);
    }

    #[test]
    fn degenerate_table_errors() {
        let t = table(1, 3, &[1, 2, 3]);
        assert!(matches!(
            correspondence_analysis(&t, 1),
            Err(Error::DegenerateTable { .. })
        ));
    }

    #[test]
    fn kmeans_each_point_own_cluster() {
        let points: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 0.0]).collect();
        let c = kmeans(&points, 5, 1, 50).unwrap();
        assert_eq!(c.objective, 0.0);
        let mut sorted = c.assignments.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
    }

    #[test]
    fn kmeans_recovers_separated_blobs() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut points = Vec::new();
        let mut truth = Vec::new();
        for (cx, cy, label) in [(0.0, 0.0, 0), (10.0, 10.0, 1)] {
            for _ in 0..25 {
                points.push(vec![cx + rng.gen_range(-0.5..0.5), cy + rng.gen_range(-0.5..0.5)]);
                truth.push(label);
            }
        }
        let c = kmeans(&points, 2, 7, 100).unwrap();
        // Partition agreement must be exact, up to label swap.
        let flip = c.assignments[0] != truth[0];
        for (a, t) in c.assignments.iter().zip(&truth) {
            let mapped = if flip { 1 - a } else { *a };
            assert_eq!(mapped, *t);
        }
    }

    #[test]
    fn kmeans_objective_no_worse_than_first_iteration() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let points: Vec<Vec<f64>> =
            (0..60).map(|_| vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]).collect();
        let one = kmeans(&points, 4, 3, 1).unwrap();
        let full = kmeans(&points, 4, 3, 200).unwrap();
        assert!(full.objective <= one.objective + 1e-9);
    }

    #[test]
    fn kmeans_deterministic_given_seed() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let points: Vec<Vec<f64>> =
            (0..40).map(|_| vec![rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0)]).collect();
        let a = kmeans(&points, 3, 11, 100).unwrap();
        let b = kmeans(&points, 3, 11, 100).unwrap();
        assert_eq!(a.assignments, b.assignments);
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn ward_two_points_merge_at_half_squared_distance() {
        // Variance increase of merging two singletons: (1*1)/(1+1) * d^2.
        let points = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        let c = ward_cluster(&points).unwrap();
        let merges = c.dendrogram.unwrap();
        assert_eq!(merges.len(), 1);
        assert!((merges[0].height - 12.5).abs() < 1e-12); // 25 / 2
    }

    #[test]
    fn ward_duplicates_merge_at_zero() {
        let points = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![5.0, 5.0]];
        let c = ward_cluster(&points).unwrap();
        let merges = c.dendrogram.unwrap();
        assert_eq!(merges[0].height, 0.0);
        assert_eq!((merges[0].left, merges[0].right), (0, 1));
    }

    #[test]
    fn ward_heights_non_decreasing_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..5 {
            let points: Vec<Vec<f64>> =
                (0..30).map(|_| vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]).collect();
            let c = ward_cluster(&points).unwrap();
            let merges = c.dendrogram.unwrap();
            for w in merges.windows(2) {
                assert!(w[1].height >= w[0].height - 1e-9);
            }
        }
    }

    #[test]
    fn ward_matches_exact_ess_on_three_points() {
        // 1-D points 0, 1, 10. First merge {0,1} at 0.5. Second merge cost:
        // ESS({0,1,10}) = (2*1/3)(10 - 0.5)^2 = 60.1666...
        let points = vec![vec![0.0], vec![1.0], vec![10.0]];
        let merges = ward_cluster(&points).unwrap().dendrogram.unwrap();
        assert!((merges[0].height - 0.5).abs() < 1e-12);
        assert!((merges[1].height - 180.5 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn dendrogram_cut_recovers_blobs() {
        let mut points = Vec::new();
        for (cx, label_count) in [(0.0, 4), (100.0, 4)] {
            for i in 0..label_count {
                points.push(vec![cx + i as f64 * 0.1]);
            }
        }
        let c = ward_cluster(&points).unwrap();
        let cut = cut_dendrogram(c.dendrogram.as_ref().unwrap(), points.len(), 2).unwrap();
        assert_eq!(cut[..4], [cut[0]; 4]);
        assert_eq!(cut[4..], [cut[4]; 4]);
        assert_ne!(cut[0], cut[4]);
    }

    #[test]
    fn silhouette_high_for_separated_blobs() {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (cx, label) in [(0.0, 0usize), (50.0, 1)] {
            for i in 0..10 {
                points.push(vec![cx + (i as f64) * 0.01, 0.0]);
                labels.push(label);
            }
        }
        assert!(mean_silhouette(&points, &labels) > 0.9);
    }
}
