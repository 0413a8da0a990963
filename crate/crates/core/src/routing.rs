//! Distance matrix, closed tours and the cheapest-insertion construction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PlanarPoint;

#[derive(Debug, Error, PartialEq)]
pub enum RoutingError {
    #[error("need at least {needed} node(s), got {got}")]
    TooFewNodes { needed: usize, got: usize },
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("node {0} appears more than once")]
    DuplicateNode(usize),
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
}

/// Symmetric matrix of travel costs in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Pairwise Euclidean distances.
    pub fn from_points(points: &[PlanarPoint]) -> Self {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = points[i].distance(&points[j]);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    /// Row-major `n x n` costs; must be symmetric, finite, non-negative with a
    /// zero diagonal.
    pub fn from_raw(n: usize, d: Vec<f64>) -> Result<Self, RoutingError> {
        if d.len() != n * n {
            return Err(RoutingError::InvalidMatrix(format!(
                "expected {} entries, got {}",
                n * n,
                d.len()
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(RoutingError::InvalidMatrix(format!("d[{i}][{i}] != 0")));
            }
            for j in (i + 1)..n {
                let (a, b) = (d[i * n + j], d[j * n + i]);
                if !a.is_finite() || a < 0.0 {
                    return Err(RoutingError::InvalidMatrix(format!("d[{i}][{j}] = {a}")));
                }
                if a != b {
                    return Err(RoutingError::InvalidMatrix(format!(
                        "d[{i}][{j}] != d[{j}][{i}]"
                    )));
                }
            }
        }
        Ok(Self { n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            d: self.d.iter().map(|v| v * factor).collect(),
        }
    }

    fn check_nodes(&self, nodes: &[usize]) -> Result<(), RoutingError> {
        let mut seen = vec![false; self.n];
        for &k in nodes {
            if k >= self.n {
                return Err(RoutingError::NodeOutOfRange(k));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(RoutingError::DuplicateNode(k));
            }
        }
        Ok(())
    }
}

/// Closed tour; the edge from the last node back to the first is implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<usize>,
    #[serde(rename = "cost_m")]
    pub cost: f64,
}

impl Tour {
    pub fn singleton(node: usize) -> Self {
        Self {
            order: vec![node],
            cost: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Number of legs flown: `n` for a closed tour of `n >= 2` nodes, 0 for a
    /// singleton.
    pub fn edge_count(&self) -> usize {
        if self.order.len() >= 2 {
            self.order.len()
        } else {
            0
        }
    }

    /// Edge starting at position `p`.
    fn edge(&self, p: usize) -> (usize, usize) {
        (self.order[p], self.order[(p + 1) % self.order.len()])
    }
}

/// Cost of the closed tour recomputed from scratch.
pub fn tour_cost(tour: &Tour, d: &DistanceMatrix) -> f64 {
    let n = tour.order.len();
    if n < 2 {
        return 0.0;
    }
    (0..n)
        .map(|p| {
            let (i, j) = tour.edge(p);
            d.get(i, j)
        })
        .sum()
}

/// Cost of placing `k` on the edge `(i, j)`.
#[inline]
pub fn insertion_cost(d: &DistanceMatrix, i: usize, j: usize, k: usize) -> f64 {
    d.get(i, k) + d.get(k, j) - d.get(i, j)
}

/// Initial two-node subtour: the pair minimising the round-trip cost, ties
/// broken lexicographically on node index.
pub fn cia_initial_pair(d: &DistanceMatrix, nodes: &[usize]) -> Result<Tour, RoutingError> {
    if nodes.len() < 2 {
        return Err(RoutingError::TooFewNodes {
            needed: 2,
            got: nodes.len(),
        });
    }
    d.check_nodes(nodes)?;
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    let mut best: Option<(f64, usize, usize)> = None;
    for (a, &i) in sorted.iter().enumerate() {
        for &j in &sorted[a + 1..] {
            let c = d.get(i, j) + d.get(j, i);
            if best.is_none_or(|(b, _, _)| c < b) {
                best = Some((c, i, j));
            }
        }
    }
    let (cost, i, j) = best.expect("at least one pair");
    Ok(Tour {
        order: vec![i, j],
        cost,
    })
}

/// Best insertion position of one pending node into one tour.
#[derive(Debug, Clone, Copy)]
struct Slot {
    cost: f64,
    pos: usize,
}

/// Cheapest-insertion growth of one or more tours.
///
/// Candidate ties are broken by lowest node index, then lowest tour index,
/// then lowest edge position. Per (node, tour) best slots are cached and patched after
/// each insertion; only slots that pointed at the split edge are rescanned.
pub(crate) struct InsertionBuilder<'a> {
    d: &'a DistanceMatrix,
    tours: Vec<Tour>,
    pending: Vec<usize>,
    slots: Vec<Vec<Slot>>,
}

impl<'a> InsertionBuilder<'a> {
    pub(crate) fn new(d: &'a DistanceMatrix, tours: Vec<Tour>, mut pending: Vec<usize>) -> Self {
        pending.sort_unstable();
        let slots = pending
            .iter()
            .map(|&k| tours.iter().map(|t| Self::scan(d, t, k)).collect())
            .collect();
        Self {
            d,
            tours,
            pending,
            slots,
        }
    }

    fn scan(d: &DistanceMatrix, tour: &Tour, k: usize) -> Slot {
        let mut best = Slot {
            cost: f64::INFINITY,
            pos: 0,
        };
        for p in 0..tour.order.len() {
            let (i, j) = tour.edge(p);
            let c = insertion_cost(d, i, j, k);
            if c < best.cost {
                best = Slot { cost: c, pos: p };
            }
        }
        best
    }

    /// Globally cheapest (node, tour, edge).
    fn cheapest_any(&self) -> (usize, usize, Slot) {
        let mut chosen: Option<(usize, usize, Slot)> = None;
        for (idx, row) in self.slots.iter().enumerate() {
            for (t, slot) in row.iter().enumerate() {
                if chosen.is_none_or(|(_, _, b)| slot.cost < b.cost) {
                    chosen = Some((idx, t, *slot));
                }
            }
        }
        chosen.expect("pending node")
    }

    /// Cheapest (node, edge) for one tour.
    fn cheapest_for(&self, t: usize) -> (usize, usize, Slot) {
        let mut chosen: Option<(usize, Slot)> = None;
        for (idx, row) in self.slots.iter().enumerate() {
            if chosen.is_none_or(|(_, b)| row[t].cost < b.cost) {
                chosen = Some((idx, row[t]));
            }
        }
        let (idx, slot) = chosen.expect("pending node");
        (idx, t, slot)
    }

    fn insert(&mut self, idx: usize, t: usize, slot: Slot) {
        let k = self.pending.remove(idx);
        self.slots.remove(idx);

        let tour = &mut self.tours[t];
        let (a, b) = tour.edge(slot.pos);
        let p = slot.pos;
        tour.order.insert(p + 1, k);
        tour.cost += slot.cost;
        let was_singleton = a == b;

        let tour = &self.tours[t];
        for (row, &m) in self.slots.iter_mut().zip(&self.pending) {
            let s = &mut row[t];
            if was_singleton || s.pos == p {
                *s = Self::scan(self.d, tour, m);
                continue;
            }
            if s.pos > p {
                s.pos += 1;
            }
            let c1 = insertion_cost(self.d, a, k, m);
            let c2 = insertion_cost(self.d, k, b, m);
            for (c, pos) in [(c1, p), (c2, p + 1)] {
                if c < s.cost || (c == s.cost && pos < s.pos) {
                    *s = Slot { cost: c, pos };
                }
            }
        }
    }

    /// Inserts every pending node, each step taking the globally cheapest
    /// insertion over all tours.
    pub(crate) fn finish(mut self) -> Vec<Tour> {
        while !self.pending.is_empty() {
            let (idx, t, slot) = self.cheapest_any();
            self.insert(idx, t, slot);
        }
        self.tours
    }

    /// Inserts every pending node with tours taking turns in index order; on
    /// its turn a tour takes its own cheapest pending node.
    pub(crate) fn finish_round_robin(mut self) -> Vec<Tour> {
        let mut turn = 0;
        while !self.pending.is_empty() {
            let (idx, t, slot) = self.cheapest_for(turn % self.tours.len());
            self.insert(idx, t, slot);
            turn += 1;
        }
        self.tours
    }
}

/// Cheapest Insertion Algorithm over `nodes`.
///
/// Starts from [`cia_initial_pair`] and inserts one node per step at its
/// cheapest edge; the tour cost is accumulated from the insertion costs.
pub fn cia_tour(d: &DistanceMatrix, nodes: &[usize]) -> Result<Tour, RoutingError> {
    match nodes.len() {
        0 => Err(RoutingError::TooFewNodes { needed: 1, got: 0 }),
        1 => {
            d.check_nodes(nodes)?;
            Ok(Tour::singleton(nodes[0]))
        }
        _ => {
            let start = cia_initial_pair(d, nodes)?;
            let pending = nodes
                .iter()
                .copied()
                .filter(|k| !start.order.contains(k))
                .collect();
            let mut tours = InsertionBuilder::new(d, vec![start], pending).finish();
            Ok(tours.pop().expect("one tour"))
        }
    }
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
    fn distance_matrix_basics() {
        let d = DistanceMatrix::from_points(&pts(&[(0.0, 0.0), (3.0, 4.0)]));
        assert_eq!(d.get(0, 1), 5.0);
        assert_eq!(d.get(1, 0), 5.0);
        let one = DistanceMatrix::from_points(&pts(&[(7.0, 7.0)]));
        assert_eq!(one.len(), 1);
        assert_eq!(one.get(0, 0), 0.0);
    }

    #[test]
    fn from_raw_validation() {
        assert!(DistanceMatrix::from_raw(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_raw(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_raw(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(DistanceMatrix::from_raw(2, vec![0.0, 1.0, 1.0]).is_err());
        assert!(DistanceMatrix::from_raw(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn initial_pair_examples() {
        let d = DistanceMatrix::from_points(&pts(&[(0.0, 0.0), (1.0, 0.0), (5.0, 0.0)]));
        let t = cia_initial_pair(&d, &[0, 1, 2]).unwrap();
        assert_eq!(t.order, vec![0, 1]);
        assert_eq!(t.cost, 2.0);

        let d = DistanceMatrix::from_points(&pts(&[(0.0, 0.0), (10.0, 0.0), (11.0, 0.0)]));
        let t = cia_initial_pair(&d, &[0, 1, 2]).unwrap();
        assert_eq!(t.order, vec![1, 2]);
        assert_eq!(t.cost, 2.0);
    }

    #[test]
    fn initial_pair_tie_break() {
        let eq =
            DistanceMatrix::from_raw(3, vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
        let t = cia_initial_pair(&eq, &[2, 1, 0]).unwrap();
        assert_eq!(t.order, vec![0, 1]);
        assert_eq!(t.cost, 2.0);
    }

    #[test]
    fn initial_pair_errors() {
        let d = DistanceMatrix::from_points(&pts(&[(0.0, 0.0), (1.0, 0.0)]));
        assert_eq!(
            cia_initial_pair(&d, &[0]),
            Err(RoutingError::TooFewNodes { needed: 2, got: 1 })
        );
        assert_eq!(
            cia_initial_pair(&d, &[0, 5]),
            Err(RoutingError::NodeOutOfRange(5))
        );
        assert_eq!(
            cia_initial_pair(&d, &[1, 1]),
            Err(RoutingError::DuplicateNode(1))
        );
    }

    #[test]
    fn cia_degenerate_sizes() {
        let d = DistanceMatrix::from_points(&pts(&[(7.0, 7.0), (10.0, 11.0)]));
        let t = cia_tour(&d, &[0]).unwrap();
        assert_eq!(t, Tour::singleton(0));
        let t = cia_tour(&d, &[1, 0]).unwrap();
        assert_eq!(t.order, vec![0, 1]);
        assert_eq!(t.cost, 10.0);
        assert!(cia_tour(&d, &[]).is_err());
    }

    #[test]
    fn cia_unit_square_and_collinear() {
        let d =
            DistanceMatrix::from_points(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
        let t = cia_tour(&d, &[0, 1, 2, 3]).unwrap();
        assert!((t.cost - 4.0).abs() < 1e-12);
        assert!((tour_cost(&t, &d) - 4.0).abs() < 1e-12);

        let d = DistanceMatrix::from_points(&pts(&[(0.0, 0.0), (10.0, 0.0), (20.0, 0.0)]));
        let t = cia_tour(&d, &[0, 1, 2]).unwrap();
        assert!((t.cost - 40.0).abs() < 1e-12);
    }

    #[test]
    fn cia_on_subset_uses_global_indices() {
        let d = DistanceMatrix::from_points(&pts(&[
            (0.0, 0.0),
            (100.0, 0.0),
            (1.0, 0.0),
            (100.0, 1.0),
            (1.0, 1.0),
        ]));
        let t = cia_tour(&d, &[4, 0, 2]).unwrap();
        let mut seen = t.order.clone();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 2, 4]);
        assert!((t.cost - tour_cost(&t, &d)).abs() < 1e-12);
    }

    #[test]
    fn tour_cost_examples() {
        let d = DistanceMatrix::from_points(&pts(&[(0.0, 0.0), (3.0, 4.0)]));
        let t = Tour {
            order: vec![0, 1],
            cost: 0.0,
        };
        assert_eq!(tour_cost(&t, &d), 10.0);
        assert_eq!(tour_cost(&Tour::singleton(1), &d), 0.0);
    }

    #[test]
    fn edge_counts() {
        assert_eq!(Tour::singleton(0).edge_count(), 0);
        assert_eq!(
            Tour {
                order: vec![0, 1],
                cost: 2.0
            }
            .edge_count(),
            2
        );
        assert_eq!(
            Tour {
                order: vec![0, 1, 2, 3],
                cost: 4.0
            }
            .edge_count(),
            4
        );
    }

    #[test]
    fn tour_json_shape() {
        let v = serde_json::to_value(Tour {
            order: vec![2, 0],
            cost: 10.5,
        })
        .unwrap();
        assert_eq!(v, serde_json::json!({"order": [2, 0], "cost_m": 10.5}));
    }
}
