//! Seeded k-means (k-means++ initialisation, Lloyd iterations) over planar points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PlanarPoint;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("k = {k} exceeds the number of points ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansParams {
    pub max_iter: usize,
    /// Stop once an iteration improves inertia by less than this, m².
    pub tol: f64,
}

impl Default for KMeansParams {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub centroids: Vec<PlanarPoint>,
    /// Sum of squared point-to-centroid distances, m².
    pub inertia: f64,
    /// Inertia after every assignment or update step, in order.
    pub inertia_history: Vec<f64>,
}

fn nearest(p: &PlanarPoint, centroids: &[PlanarPoint]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = p.distance_squared(centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn inertia(points: &[PlanarPoint], assignment: &[usize], centroids: &[PlanarPoint]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(p, &c)| p.distance_squared(&centroids[c]))
        .sum()
}

fn plus_plus_init(points: &[PlanarPoint], k: usize, rng: &mut ChaCha8Rng) -> Vec<PlanarPoint> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())]);
    let mut d2: Vec<f64> = points
        .iter()
        .map(|p| p.distance_squared(&centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (i, w) in d2.iter().enumerate() {
                acc += w;
                if *w > 0.0 && acc > target {
                    chosen = Some(i);
                    break;
                }
            }
            // Rounding can leave `target` at the very top of the range.
            chosen.unwrap_or_else(|| d2.iter().rposition(|w| *w > 0.0).expect("total > 0"))
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[pick];
        centroids.push(c);
        for (w, p) in d2.iter_mut().zip(points) {
            *w = w.min(p.distance_squared(&c));
        }
    }
    centroids
}

/// Assigns every point to its nearest centroid, lowest index on ties.
/// Returns whether any label changed.
fn assign(points: &[PlanarPoint], centroids: &[PlanarPoint], assignment: &mut [usize]) -> bool {
    let mut changed = false;
    for (p, a) in points.iter().zip(assignment.iter_mut()) {
        let (c, _) = nearest(p, centroids);
        if *a != c {
            *a = c;
            changed = true;
        }
    }
    changed
}

/// Gives every empty cluster the point farthest from its own centroid among
/// clusters that can spare one.
fn repair_empty(points: &[PlanarPoint], centroids: &mut [PlanarPoint], assignment: &mut [usize]) {
    let k = centroids.len();
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assignment.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            let c = assignment[i];
            if sizes[c] < 2 {
                continue;
            }
            let d = p.distance_squared(&centroids[c]);
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        let (i, _) = far.expect("k <= n leaves a cluster with two or more points");
        assignment[i] = empty;
        centroids[empty] = points[i];
    }
}

fn update_centroids(points: &[PlanarPoint], assignment: &[usize], centroids: &mut [PlanarPoint]) {
    let k = centroids.len();
    let mut sums = vec![(0.0, 0.0, 0usize); k];
    for (p, &a) in points.iter().zip(assignment) {
        sums[a].0 += p.x;
        sums[a].1 += p.y;
        sums[a].2 += 1;
    }
    for (c, (sx, sy, n)) in centroids.iter_mut().zip(sums) {
        if n > 0 {
            *c = PlanarPoint::new(sx / n as f64, sy / n as f64);
        }
    }
}

/// Partitions `points` into `k` non-empty clusters.
///
/// The returned assignment maps each point to its nearest returned centroid
/// (ties to the lowest cluster index), except where coincident points forced
/// an empty-cluster repair in the final step.
pub fn kmeans(
    points: &[PlanarPoint],
    k: usize,
    seed: u64,
    params: &KMeansParams,
) -> Result<Clustering, ClusterError> {
    if k == 0 {
        return Err(ClusterError::ZeroK);
    }
    if k > points.len() {
        return Err(ClusterError::KTooLarge { k, n: points.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(points, k, &mut rng);
    let mut assignment = vec![usize::MAX; points.len()];
    let mut history = Vec::new();

    let mut previous = f64::INFINITY;
    for _ in 0..params.max_iter {
        let changed = assign(points, &centroids, &mut assignment);
        repair_empty(points, &mut centroids, &mut assignment);
        if !changed && !history.is_empty() {
            break;
        }
        history.push(inertia(points, &assignment, &centroids));
        update_centroids(points, &assignment, &mut centroids);
        let current = inertia(points, &assignment, &centroids);
        history.push(current);
        if previous - current < params.tol {
            break;
        }
        previous = current;
    }

    // Final assignment against the last centroids.
    assign(points, &centroids, &mut assignment);
    repair_empty(points, &mut centroids, &mut assignment);
    let total = inertia(points, &assignment, &centroids);
    history.push(total);

    Ok(Clustering {
        k,
        assignment,
        centroids,
        inertia: total,
        inertia_history: history,
    })
}

/// Member indices of every cluster, ordered by cluster index.
pub fn cluster_subsets(clustering: &Clustering) -> Vec<Vec<usize>> {
    let mut subsets = vec![Vec::new(); clustering.k];
    for (i, &c) in clustering.assignment.iter().enumerate() {
        subsets[c].push(i);
    }
    subsets
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<PlanarPoint> {
        coords
            .iter()
            .map(|&(x, y)| PlanarPoint::new(x, y))
            .collect()
    }

    #[test]
    fn rejects_bad_k() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(
            kmeans(&p, 3, 0, &KMeansParams::default()),
            Err(ClusterError::KTooLarge { k: 3, n: 2 })
        );
        assert_eq!(
            kmeans(&p, 0, 0, &KMeansParams::default()),
            Err(ClusterError::ZeroK)
        );
    }

    #[test]
    fn saturated_k_gives_singletons() {
        let p = pts(&[(0.0, 0.0), (5.0, 1.0), (2.0, 9.0), (7.0, 7.0)]);
        for seed in 0..10 {
            let c = kmeans(&p, 4, seed, &KMeansParams::default()).unwrap();
            assert_eq!(c.inertia, 0.0);
            let subsets = cluster_subsets(&c);
            assert!(subsets.iter().all(|s| s.len() == 1));
        }
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let p = pts(&[(0.0, 0.0), (4.0, 0.0), (4.0, 2.0), (0.0, 2.0)]);
        let c = kmeans(&p, 1, 3, &KMeansParams::default()).unwrap();
        assert_eq!(c.centroids[0], PlanarPoint::new(2.0, 1.0));
        assert!((c.inertia - 4.0 * 5.0).abs() < 1e-12);
        assert_eq!(cluster_subsets(&c), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn separated_pairs_group_together() {
        let p = pts(&[(0.0, 0.0), (0.0, 1.0), (100.0, 0.0), (100.0, 1.0)]);
        for seed in 0..50 {
            let c = kmeans(&p, 2, seed, &KMeansParams::default()).unwrap();
            assert_eq!(c.assignment[0], c.assignment[1]);
            assert_eq!(c.assignment[2], c.assignment[3]);
            assert_ne!(c.assignment[0], c.assignment[2]);
            assert!((c.inertia - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn coincident_points_still_fill_every_cluster() {
        let p = pts(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0), (2.0, 2.0)]);
        let c = kmeans(&p, 3, 11, &KMeansParams::default()).unwrap();
        let subsets = cluster_subsets(&c);
        assert_eq!(subsets.len(), 3);
        assert!(subsets.iter().all(|s| !s.is_empty()));
    }

    #[test]
    fn deterministic_for_seed() {
        let p: Vec<PlanarPoint> = (0..50)
            .map(|i| PlanarPoint::new((i * 37 % 101) as f64, (i * 53 % 97) as f64))
            .collect();
        let a = kmeans(&p, 5, 42, &KMeansParams::default()).unwrap();
        let b = kmeans(&p, 5, 42, &KMeansParams::default()).unwrap();
        assert_eq!(a, b);
    }
}
