//! Cheapest insertion against brute-force optima and a naive full-scan
//! reference builder.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uavtour::geometry::PlanarPoint;
use uavtour::planner::{rip_with_growth, FleetParams, RipGrowth};
use uavtour::routing::{cia_tour, insertion_cost, tour_cost, DistanceMatrix, Tour};

fn random_points(rng: &mut ChaCha8Rng, n: usize, integer_grid: bool) -> Vec<PlanarPoint> {
    (0..n)
        .map(|_| {
            if integer_grid {
                // Small integer grid: lots of exact ties.
                PlanarPoint::new(rng.random_range(0..4) as f64, rng.random_range(0..4) as f64)
            } else {
                PlanarPoint::new(rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0))
            }
        })
        .collect()
}

/// Optimal closed-tour cost by enumerating every permutation with node 0 fixed.
fn brute_force_optimum(d: &DistanceMatrix) -> f64 {
    fn walk(
        d: &DistanceMatrix,
        path: &mut Vec<usize>,
        used: &mut [bool],
        acc: f64,
        best: &mut f64,
    ) {
        let n = used.len();
        let last = *path.last().unwrap();
        if path.len() == n {
            *best = best.min(acc + d.get(last, path[0]));
            return;
        }
        for k in 1..n {
            if !used[k] {
                used[k] = true;
                path.push(k);
                walk(d, path, used, acc + d.get(last, k), best);
                path.pop();
                used[k] = false;
            }
        }
    }
    let n = d.len();
    let mut used = vec![false; n];
    used[0] = true;
    let mut best = f64::INFINITY;
    walk(d, &mut vec![0], &mut used, 0.0, &mut best);
    best
}

/// Reference builder: every step rescans every (node, tour, edge) triple.
/// Ties go to the lowest node, then tour, then edge position. With
/// `round_robin` tours take turns and only the current tour is scanned.
fn naive_grow(
    d: &DistanceMatrix,
    mut tours: Vec<Tour>,
    pending: &[usize],
    round_robin: bool,
) -> Vec<Tour> {
    let mut pending: BTreeSet<usize> = pending.iter().copied().collect();
    let mut turn = 0;
    while !pending.is_empty() {
        let allowed: Vec<usize> = if round_robin {
            vec![turn % tours.len()]
        } else {
            (0..tours.len()).collect()
        };
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for &k in &pending {
            for &t in &allowed {
                let order = &tours[t].order;
                for p in 0..order.len() {
                    let (i, j) = (order[p], order[(p + 1) % order.len()]);
                    let c = insertion_cost(d, i, j, k);
                    if best.is_none_or(|(b, ..)| c < b) {
                        best = Some((c, k, t, p));
                    }
                }
            }
        }
        let (c, k, t, p) = best.unwrap();
        tours[t].order.insert(p + 1, k);
        tours[t].cost += c;
        pending.remove(&k);
        turn += 1;
    }
    tours
}

fn naive_cia(d: &DistanceMatrix, nodes: &[usize]) -> Tour {
    let mut best: Option<(f64, usize, usize)> = None;
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    for (a, &i) in sorted.iter().enumerate() {
        for &j in &sorted[a + 1..] {
            let c = 2.0 * d.get(i, j);
            if best.is_none_or(|(b, ..)| c < b) {
                best = Some((c, i, j));
            }
        }
    }
    let (cost, i, j) = best.unwrap();
    let pending: Vec<usize> = sorted.into_iter().filter(|&k| k != i && k != j).collect();
    naive_grow(
        d,
        vec![Tour {
            order: vec![i, j],
            cost,
        }],
        &pending,
        false,
    )
    .pop()
    .unwrap()
}

fn assert_close(a: f64, b: f64, rel: f64) {
    let scale = a.abs().max(b.abs()).max(1.0);
    assert!((a - b).abs() <= rel * scale, "{a} vs {b}");
}

#[test]
fn cia_within_twice_the_brute_force_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut checked = 0;
    for n in 4..=9 {
        for _ in 0..40 {
            let pts = random_points(&mut rng, n, false);
            let d = DistanceMatrix::from_points(&pts);
            let nodes: Vec<usize> = (0..n).collect();
            let tour = cia_tour(&d, &nodes).unwrap();
            let opt = brute_force_optimum(&d);
            let recomputed = tour_cost(&tour, &d);
            assert_close(tour.cost, recomputed, 1e-9);
            assert!(
                recomputed >= opt * (1.0 - 1e-12),
                "n={n}: {recomputed} < optimum {opt}"
            );
            assert!(
                recomputed <= 2.0 * opt * (1.0 + 1e-12),
                "n={n}: {recomputed} > 2 x {opt}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 240);
}

#[test]
fn cia_matches_full_scan_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..300 {
        let n = rng.random_range(2..40);
        let pts = random_points(&mut rng, n, case % 2 == 0);
        let d = DistanceMatrix::from_points(&pts);
        // A random subset, given in shuffled order.
        let mut nodes: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.8)).collect();
        if nodes.len() < 2 {
            nodes = vec![0, 1];
        }
        nodes.reverse();
        let fast = cia_tour(&d, &nodes).unwrap();
        let slow = naive_cia(&d, &nodes);
        assert_eq!(fast.order, slow.order, "case {case}");
        assert_close(fast.cost, slow.cost, 1e-9);
    }
}

#[test]
fn rip_matches_full_scan_reference() {
    let fleet = FleetParams::new(40.0, 30.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for case in 0..200 {
        let n = rng.random_range(1..50);
        let l = rng.random_range(1..=n);
        let seed: u64 = rng.random();
        let pts = random_points(&mut rng, n, case % 3 == 0);
        let d = DistanceMatrix::from_points(&pts);

        let mut start_rng = ChaCha8Rng::seed_from_u64(seed);
        let starts = rand::seq::index::sample(&mut start_rng, n, l).into_vec();
        let pending: Vec<usize> = (0..n).filter(|k| !starts.contains(k)).collect();
        let singletons: Vec<Tour> = starts.iter().map(|&s| Tour::singleton(s)).collect();

        for (growth, round_robin) in [
            (RipGrowth::RoundRobin, true),
            (RipGrowth::GlobalCheapest, false),
        ] {
            let plan = rip_with_growth(&pts, l, seed, &fleet, growth).unwrap();
            let reference = naive_grow(&d, singletons.clone(), &pending, round_robin);
            assert_eq!(plan.tours.len(), reference.len());
            for (a, b) in plan.tours.iter().zip(&reference) {
                assert_eq!(a.order, b.order, "case {case} {growth:?}");
                assert_close(a.cost, b.cost, 1e-9);
                assert_close(a.cost, tour_cost(a, &d), 1e-9);
            }
        }
    }
}

#[test]
fn degenerate_tour_sizes() {
    let pts = [PlanarPoint::new(0.0, 0.0), PlanarPoint::new(3.0, 4.0)];
    let d = DistanceMatrix::from_points(&pts);
    let one = cia_tour(&d, &[1]).unwrap();
    assert_eq!(
        (one.order.clone(), one.cost, one.edge_count()),
        (vec![1], 0.0, 0)
    );
    let two = cia_tour(&d, &[1, 0]).unwrap();
    assert_eq!(
        (two.order.clone(), two.cost, two.edge_count()),
        (vec![0, 1], 10.0, 2)
    );
    assert!(cia_tour(&d, &[]).is_err());
    assert!(cia_tour(&d, &[0, 0]).is_err());
    assert!(cia_tour(&d, &[0, 2]).is_err());
}

fn points_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<PlanarPoint>> {
    prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), min..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| PlanarPoint::new(x, y)).collect())
}

fn undirected_edges(order: &[usize]) -> BTreeSet<(usize, usize)> {
    (0..order.len())
        .map(|p| {
            let (a, b) = (order[p], order[(p + 1) % order.len()]);
            (a.min(b), a.max(b))
        })
        .collect()
}

proptest! {
    #[test]
    fn cia_visits_every_node_once(pts in points_strategy(1, 30)) {
        let d = DistanceMatrix::from_points(&pts);
        let nodes: Vec<usize> = (0..pts.len()).collect();
        let tour = cia_tour(&d, &nodes).unwrap();
        let mut seen = tour.order.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, nodes);
        let recomputed = tour_cost(&tour, &d);
        prop_assert!((tour.cost - recomputed).abs() <= 1e-9 * recomputed.max(1.0));
    }

    #[test]
    fn cia_scales_with_the_matrix(pts in points_strategy(2, 25), exp in -4i32..8) {
        // Powers of two scale exactly, so every comparison keeps its outcome.
        let factor = 2f64.powi(exp);
        let d = DistanceMatrix::from_points(&pts);
        let nodes: Vec<usize> = (0..pts.len()).collect();
        let base = cia_tour(&d, &nodes).unwrap();
        let scaled = cia_tour(&d.scaled(factor), &nodes).unwrap();
        prop_assert_eq!(&base.order, &scaled.order);
        prop_assert!((scaled.cost - factor * base.cost).abs() <= 1e-9 * scaled.cost.max(1.0));
    }

    #[test]
    fn cia_ignores_node_labels(pts in points_strategy(2, 20), seed in any::<u64>()) {
        // Continuous coordinates: exact ties have probability zero, so the
        // relabelled instance builds the same cycle.
        let n = pts.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = rand::seq::index::sample(&mut rng, n, n).into_vec();
        let relabelled: Vec<PlanarPoint> = perm.iter().map(|&i| pts[i]).collect();
        let nodes: Vec<usize> = (0..n).collect();
        let a = cia_tour(&DistanceMatrix::from_points(&pts), &nodes).unwrap();
        let b = cia_tour(&DistanceMatrix::from_points(&relabelled), &nodes).unwrap();
        let b_in_original: Vec<usize> = b.order.iter().map(|&k| perm[k]).collect();
        prop_assert_eq!(undirected_edges(&a.order), undirected_edges(&b_in_original));
        prop_assert!((a.cost - b.cost).abs() <= 1e-9 * a.cost.max(1.0));
    }
}
