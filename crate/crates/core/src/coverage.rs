//! Site-to-PoI coverage and the minimum-cardinality set-covering placement.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{CandidateSite, PoI};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("{count} PoI(s) cannot be covered by any site: {0:?}", count = .0.len())]
    UncoverablePoIs(Vec<usize>),
    #[error("branch-and-bound exceeded its node limit of {0}")]
    NodeLimitExceeded(u64),
    #[error("invalid coverage matrix: {0}")]
    InvalidMatrix(String),
}

/// Sparse boolean site-by-PoI incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageMatrix {
    n_sites: usize,
    n_pois: usize,
    rows: Vec<Vec<usize>>,
}

impl CoverageMatrix {
    /// Rows are sorted and deduplicated.
    pub fn from_rows(n_pois: usize, mut rows: Vec<Vec<usize>>) -> Result<Self, CoverError> {
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if let Some(&bad) = row.iter().find(|&&j| j >= n_pois) {
                return Err(CoverError::InvalidMatrix(format!(
                    "site {i} references PoI {bad} but there are only {n_pois}"
                )));
            }
        }
        Ok(Self {
            n_sites: rows.len(),
            n_pois,
            rows,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_pois(&self) -> usize {
        self.n_pois
    }

    pub fn row(&self, site: usize) -> &[usize] {
        &self.rows[site]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn covers(&self, site: usize, poi: usize) -> bool {
        self.rows[site].binary_search(&poi).is_ok()
    }

    /// For every PoI, the sorted list of sites covering it.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_pois];
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row {
                cols[j].push(i);
            }
        }
        cols
    }

    pub fn uncoverable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_pois];
        for row in &self.rows {
            for &j in row {
                seen[j] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(j, &s)| (!s).then_some(j))
            .collect()
    }

    /// True when the union of the given rows is every PoI.
    pub fn is_cover(&self, selected: &[usize]) -> bool {
        let mut seen = vec![false; self.n_pois];
        for &i in selected {
            for &j in &self.rows[i] {
                seen[j] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMethod {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSolution {
    pub method: CoverMethod,
    pub objective: usize,
    #[serde(rename = "selected_sites")]
    pub selected: Vec<usize>,
}

impl CoverSolution {
    fn new(method: CoverMethod, mut selected: Vec<usize>) -> Self {
        selected.sort_unstable();
        Self {
            method,
            objective: selected.len(),
            selected,
        }
    }
}

/// Coverage incidence with an inclusive `d <= R_j` test.
///
/// PoIs are bucketed on a uniform grid with cell size equal to the largest
/// radius, so each site only inspects its 3x3 neighbourhood.
pub fn build_coverage(sites: &[CandidateSite], pois: &[PoI]) -> CoverageMatrix {
    let cell = pois
        .iter()
        .map(|p| p.radius)
        .filter(|r| r.is_finite() && *r > 0.0)
        .fold(0.0_f64, f64::max);
    if pois.is_empty() || cell <= 0.0 {
        return CoverageMatrix {
            n_sites: sites.len(),
            n_pois: pois.len(),
            rows: vec![Vec::new(); sites.len()],
        };
    }
    let key = |x: f64, y: f64| ((x / cell).floor() as i64, (y / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (j, p) in pois.iter().enumerate() {
        buckets
            .entry(key(p.position.x, p.position.y))
            .or_default()
            .push(j);
    }
    let rows = sites
        .par_iter()
        .map(|site| {
            let (cx, cy) = key(site.position.x, site.position.y);
            let mut row = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(bucket) = buckets.get(&(cx + dx, cy + dy)) {
                        row.extend(bucket.iter().copied().filter(|&j| {
                            site.position.distance(&pois[j].position) <= pois[j].radius
                        }));
                    }
                }
            }
            row.sort_unstable();
            row
        })
        .collect();
    CoverageMatrix {
        n_sites: sites.len(),
        n_pois: pois.len(),
        rows,
    }
}

fn ensure_coverable(c: &CoverageMatrix) -> Result<(), CoverError> {
    let missing = c.uncoverable();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(CoverError::UncoverablePoIs(missing))
    }
}

/// Greedy set cover: repeatedly take the site covering the most still-uncovered
/// PoIs, lowest index on ties.
pub fn greedy_cover(c: &CoverageMatrix) -> Result<CoverSolution, CoverError> {
    ensure_coverable(c)?;
    let mut covered = vec![false; c.n_pois()];
    let mut remaining = c.n_pois();
    // Lazy evaluation: gains only shrink, so a popped entry whose recomputed
    // gain still equals its key is the true maximum.
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = c
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, r)| (r.len(), Reverse(i)))
        .collect();
    let mut selected = Vec::new();
    while remaining > 0 {
        let (gain, Reverse(site)) = heap.pop().expect("coverable instance ran out of sites");
        let actual = c.row(site).iter().filter(|&&j| !covered[j]).count();
        if actual == 0 {
            continue;
        }
        if actual < gain {
            heap.push((actual, Reverse(site)));
            continue;
        }
        for &j in c.row(site) {
            if !covered[j] {
                covered[j] = true;
                remaining -= 1;
            }
        }
        selected.push(site);
    }
    Ok(CoverSolution::new(CoverMethod::Greedy, selected))
}

#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut s = Self::new(n);
        for &i in idx {
            s.words[i / 64] |= 1 << (i % 64);
        }
        s
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn gain(&self, row: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&row.words)
            .map(|(c, r)| (r & !c).count_ones() as usize)
            .sum()
    }
}

struct BranchAndBound<'a> {
    n_pois: usize,
    rows: Vec<BitSet>,
    columns: &'a [Vec<usize>],
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
}

impl BranchAndBound<'_> {
    fn search(&mut self, covered: &BitSet, chosen: &mut Vec<usize>) -> Result<(), CoverError> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(CoverError::NodeLimitExceeded(self.node_limit));
        }
        let uncovered = self.n_pois - covered.count();
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        let max_gain = self.rows.iter().map(|r| covered.gain(r)).max().unwrap_or(0);
        if max_gain == 0 {
            return Ok(());
        }
        if chosen.len() + uncovered.div_ceil(max_gain) >= self.best.len() {
            return Ok(());
        }
        // Branch on the uncovered PoI with the fewest covering sites.
        let target = (0..self.n_pois)
            .filter(|&j| !covered.contains(j))
            .min_by_key(|&j| (self.columns[j].len(), j))
            .expect("uncovered > 0");
        let mut options: Vec<usize> = self.columns[target].clone();
        options.sort_by_key(|&i| (Reverse(covered.gain(&self.rows[i])), i));
        for site in options {
            let mut next = covered.clone();
            next.union_with(&self.rows[site]);
            chosen.push(site);
            self.search(&next, chosen)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Provably minimum cover by depth-first branch-and-bound, seeded with the
/// greedy solution as the incumbent. Fails once more than `node_limit` search
/// nodes have been expanded.
pub fn exact_cover(c: &CoverageMatrix, node_limit: u64) -> Result<CoverSolution, CoverError> {
    let incumbent = greedy_cover(c)?;
    let columns = c.columns();
    let mut bb = BranchAndBound {
        n_pois: c.n_pois(),
        rows: c
            .rows()
            .iter()
            .map(|r| BitSet::from_indices(c.n_pois(), r))
            .collect(),
        columns: &columns,
        best: incumbent.selected,
        nodes: 0,
        node_limit,
    };
    let mut chosen = Vec::new();
    bb.search(&BitSet::new(c.n_pois()), &mut chosen)?;
    Ok(CoverSolution::new(CoverMethod::Exact, bb.best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanarPoint;

    fn site(x: f64, y: f64) -> CandidateSite {
        CandidateSite {
            position: PlanarPoint::new(x, y),
            subarea_id: "s".into(),
        }
    }

    fn poi(x: f64, y: f64, r: f64) -> PoI {
        PoI {
            position: PlanarPoint::new(x, y),
            radius: r,
            source_segment: 0,
        }
    }

    fn identity(n: usize) -> CoverageMatrix {
        CoverageMatrix::from_rows(n, (0..n).map(|i| vec![i]).collect()).unwrap()
    }

    #[test]
    fn coverage_boundary_is_inclusive() {
        let c = build_coverage(&[site(0.0, 0.0)], &[poi(3.0, 4.0, 5.0)]);
        assert!(c.covers(0, 0));
        let c = build_coverage(&[site(0.0, 0.0)], &[poi(3.0, 4.0, 4.9)]);
        assert!(!c.covers(0, 0));
    }

    #[test]
    fn coverage_disjoint_identity() {
        let c = build_coverage(
            &[site(0.0, 0.0), site(100.0, 0.0)],
            &[poi(1.0, 0.0, 5.0), poi(99.0, 0.0, 5.0)],
        );
        assert_eq!(c, identity(2));
    }

    #[test]
    fn coverage_mixed_radii_across_buckets() {
        // A small-radius PoI next to a large-radius one: bucketing by the
        // largest radius must still find both.
        let sites = [site(0.0, 0.0), site(450.0, 0.0)];
        let pois = [poi(10.0, 0.0, 20.0), poi(900.0, 0.0, 500.0)];
        let c = build_coverage(&sites, &pois);
        assert_eq!(c.row(0), &[0]);
        assert_eq!(c.row(1), &[1]);
    }

    #[test]
    fn from_rows_rejects_out_of_range() {
        assert!(CoverageMatrix::from_rows(2, vec![vec![0, 2]]).is_err());
        let c = CoverageMatrix::from_rows(3, vec![vec![2, 0, 2]]).unwrap();
        assert_eq!(c.row(0), &[0, 2]);
    }

    #[test]
    fn greedy_identity_and_dominating_row() {
        assert_eq!(greedy_cover(&identity(3)).unwrap().selected, vec![0, 1, 2]);
        let c = CoverageMatrix::from_rows(3, vec![vec![0, 1, 2], vec![0], vec![1, 2]]).unwrap();
        let s = greedy_cover(&c).unwrap();
        assert_eq!(s.selected, vec![0]);
        assert_eq!(s.objective, 1);
        assert_eq!(s.method, CoverMethod::Greedy);
    }

    #[test]
    fn greedy_tie_breaks_on_lowest_index() {
        let c = CoverageMatrix::from_rows(2, vec![vec![0], vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(greedy_cover(&c).unwrap().selected, vec![1]);
    }

    #[test]
    fn uncoverable_pois_are_reported() {
        let c = CoverageMatrix::from_rows(4, vec![vec![0], vec![2]]).unwrap();
        assert_eq!(
            greedy_cover(&c),
            Err(CoverError::UncoverablePoIs(vec![1, 3]))
        );
        assert_eq!(
            exact_cover(&c, 1000),
            Err(CoverError::UncoverablePoIs(vec![1, 3]))
        );
    }

    #[test]
    fn exact_small_cases() {
        assert_eq!(exact_cover(&identity(3), 1000).unwrap().objective, 3);
        let pairs = CoverageMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let s = exact_cover(&pairs, 1000).unwrap();
        assert_eq!(s.objective, 2);
        assert!(pairs.is_cover(&s.selected));
        let all = CoverageMatrix::from_rows(3, vec![vec![0], vec![0, 1, 2]]).unwrap();
        assert_eq!(exact_cover(&all, 1000).unwrap().selected, vec![1]);
    }

    #[test]
    fn exact_beats_greedy_on_classic_instance() {
        // Greedy picks the 4-element row first and needs 3; optimum is 2.
        let c = CoverageMatrix::from_rows(6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![1, 2, 4, 5]])
            .unwrap();
        assert_eq!(greedy_cover(&c).unwrap().objective, 3);
        let s = exact_cover(&c, 10_000).unwrap();
        assert_eq!(s.selected, vec![0, 1]);
    }

    #[test]
    fn exact_node_limit() {
        let c = CoverageMatrix::from_rows(6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![1, 2, 4, 5]])
            .unwrap();
        assert_eq!(exact_cover(&c, 1), Err(CoverError::NodeLimitExceeded(1)));
    }

    #[test]
    fn solution_json_shape() {
        let s = greedy_cover(&identity(2)).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["method"], "greedy");
        assert_eq!(v["objective"], 2);
        assert_eq!(v["selected_sites"], serde_json::json!([0, 1]));
    }

    #[test]
    fn empty_poi_set() {
        let c = build_coverage(&[site(0.0, 0.0)], &[]);
        assert_eq!(greedy_cover(&c).unwrap().objective, 0);
        assert_eq!(exact_cover(&c, 10).unwrap().objective, 0);
    }
}
