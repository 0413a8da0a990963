//! Planar geometry for site placement: local projection, the line-of-sight
//! model that turns a building height into a detection radius, candidate-site
//! lattices and road sampling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Meters per degree of latitude used by the local equirectangular projection.
pub const METERS_PER_DEGREE: f64 = 111_320.0;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    OutOfRange { lat: f64, lon: f64 },
    #[error("invalid line-of-sight parameters: {0}")]
    InvalidLosParams(&'static str),
    #[error("height difference is zero or negative: {0}")]
    DegenerateHeights(&'static str),
    #[error("subarea {id}: {reason}")]
    InvalidSubarea { id: String, reason: String },
    #[error("road segment {id}: {reason}")]
    InvalidSegment { id: usize, reason: String },
    #[error("grid granularity must be at least 1")]
    ZeroGranularity,
    #[error("spacing must be positive and finite, got {0}")]
    InvalidSpacing(f64),
}

/// WGS84 position in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeometryError> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(GeometryError::NonFinite(0));
        }
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(GeometryError::OutOfRange { lat, lon });
        }
        Ok(Self { lat, lon })
    }
}

/// Position in meters east/north of a projection origin.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &PlanarPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_squared(&self, other: &PlanarPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Equirectangular projection about a fixed origin. Adequate at city scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    origin: GeoPoint,
    cos_lat0: f64,
}

impl Projection {
    pub fn new(origin: GeoPoint) -> Self {
        Self {
            origin,
            cos_lat0: origin.lat.to_radians().cos(),
        }
    }

    /// Projection centred on the middle of the bounding box of `points`.
    pub fn centered_on(points: &[GeoPoint]) -> Option<Self> {
        let first = points.first()?;
        let (mut min_lat, mut max_lat, mut min_lon, mut max_lon) =
            (first.lat, first.lat, first.lon, first.lon);
        for p in points {
            min_lat = min_lat.min(p.lat);
            max_lat = max_lat.max(p.lat);
            min_lon = min_lon.min(p.lon);
            max_lon = max_lon.max(p.lon);
        }
        Some(Self::new(GeoPoint {
            lat: 0.5 * (min_lat + max_lat),
            lon: 0.5 * (min_lon + max_lon),
        }))
    }

    pub fn origin(&self) -> GeoPoint {
        self.origin
    }

    pub fn forward(&self, p: GeoPoint) -> PlanarPoint {
        PlanarPoint {
            x: (p.lon - self.origin.lon) * self.cos_lat0 * METERS_PER_DEGREE,
            y: (p.lat - self.origin.lat) * METERS_PER_DEGREE,
        }
    }

    pub fn inverse(&self, p: PlanarPoint) -> GeoPoint {
        GeoPoint {
            lat: self.origin.lat + p.y / METERS_PER_DEGREE,
            lon: self.origin.lon + p.x / (self.cos_lat0 * METERS_PER_DEGREE),
        }
    }
}

/// Projects WGS84 points onto the local plane around `origin`.
pub fn project(points: &[GeoPoint], origin: GeoPoint) -> Result<Vec<PlanarPoint>, GeometryError> {
    if !origin.lat.is_finite() || !origin.lon.is_finite() {
        return Err(GeometryError::NonFinite(usize::MAX));
    }
    if let Some(i) = points
        .iter()
        .position(|p| !p.lat.is_finite() || !p.lon.is_finite())
    {
        return Err(GeometryError::NonFinite(i));
    }
    let projection = Projection::new(origin);
    Ok(points.iter().map(|p| projection.forward(*p)).collect())
}

/// Heights and widths of the drone/building/vehicle line-of-sight model, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LosParams {
    /// Vehicle height.
    pub h_v_m: f64,
    /// Drone altitude.
    pub h_u_m: f64,
    /// Horizontal distance from the obstructing building to the vehicle.
    pub w_bv_m: f64,
    /// Upper bound on any detection radius (camera-limited range).
    pub r_max_m: f64,
}

impl Default for LosParams {
    fn default() -> Self {
        Self {
            h_v_m: 2.0,
            h_u_m: 500.0,
            w_bv_m: 4.0,
            r_max_m: 1000.0,
        }
    }
}

impl LosParams {
    pub fn new(h_v_m: f64, h_u_m: f64, w_bv_m: f64, r_max_m: f64) -> Result<Self, GeometryError> {
        let params = Self {
            h_v_m,
            h_u_m,
            w_bv_m,
            r_max_m,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let all_finite = [self.h_v_m, self.h_u_m, self.w_bv_m, self.r_max_m]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(GeometryError::InvalidLosParams("values must be finite"));
        }
        if self.h_v_m < 0.0 {
            return Err(GeometryError::InvalidLosParams(
                "vehicle height must be >= 0",
            ));
        }
        if self.h_u_m <= self.h_v_m {
            return Err(GeometryError::InvalidLosParams(
                "drone altitude must exceed vehicle height",
            ));
        }
        if self.w_bv_m <= 0.0 {
            return Err(GeometryError::InvalidLosParams(
                "building-to-vehicle distance must be > 0",
            ));
        }
        if self.r_max_m <= 0.0 {
            return Err(GeometryError::InvalidLosParams("radius cap must be > 0"));
        }
        Ok(())
    }
}

/// Tangents of the drone viewing angle and the building obstruction angle,
/// both measured from the vertical at the vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosAngles {
    pub tan_theta: f64,
    pub tan_phi: f64,
}

impl LosAngles {
    /// The sight line clears the building when the drone's ray is no flatter
    /// than the ray grazing the roof edge. Equality is the radius limit.
    pub fn visible(&self) -> bool {
        self.tan_theta <= self.tan_phi * (1.0 + 1e-12)
    }
}

pub fn los_angles(
    w_ub_m: f64,
    w_bv_m: f64,
    h_u_m: f64,
    h_b_m: f64,
    h_v_m: f64,
) -> Result<LosAngles, GeometryError> {
    if h_u_m <= h_v_m {
        return Err(GeometryError::DegenerateHeights(
            "drone altitude <= vehicle height",
        ));
    }
    if h_b_m <= h_v_m {
        return Err(GeometryError::DegenerateHeights(
            "building height <= vehicle height",
        ));
    }
    Ok(LosAngles {
        tan_theta: (w_ub_m + w_bv_m) / (h_u_m - h_v_m),
        tan_phi: w_bv_m / (h_b_m - h_v_m),
    })
}

/// Largest horizontal drone-to-vehicle distance that keeps line of sight over
/// buildings no taller than `h_max_m`, capped at `r_max_m`.
///
/// Heights at or below the vehicle height obstruct nothing, so the cap applies.
pub fn los_radius(h_max_m: f64, params: &LosParams) -> f64 {
    if h_max_m <= params.h_v_m {
        return params.r_max_m;
    }
    let r = (params.h_u_m - params.h_v_m) / (h_max_m - params.h_v_m) * params.w_bv_m;
    r.min(params.r_max_m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: PlanarPoint,
    pub max: PlanarPoint,
}

impl BoundingBox {
    pub fn of(points: &[PlanarPoint]) -> Option<Self> {
        let first = *points.first()?;
        let mut bb = BoundingBox {
            min: first,
            max: first,
        };
        for p in points {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    pub fn union(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            min: PlanarPoint::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: PlanarPoint::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Simple polygon given by its vertex ring (closing vertex not repeated).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<PlanarPoint>,
    bbox: BoundingBox,
}

impl Polygon {
    /// Accepts a ring with or without a repeated closing vertex. Requires at
    /// least three distinct vertices, finite coordinates, non-zero area and no
    /// self-intersections.
    pub fn new(mut vertices: Vec<PlanarPoint>) -> Result<Self, String> {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        vertices.dedup();
        if vertices.len() < 3 {
            return Err(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            ));
        }
        if vertices
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err("polygon has non-finite coordinates".into());
        }
        let bbox = BoundingBox::of(&vertices).expect("non-empty");
        let polygon = Self { vertices, bbox };
        if polygon.signed_area() == 0.0 {
            return Err("polygon has zero area".into());
        }
        if let Some((a, b)) = polygon.first_self_intersection() {
            return Err(format!("polygon edges {a} and {b} intersect"));
        }
        Ok(polygon)
    }

    pub fn vertices(&self) -> &[PlanarPoint] {
        &self.vertices
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a.x * b.y - b.x * a.y;
        }
        0.5 * acc
    }

    fn edge(&self, i: usize) -> (PlanarPoint, PlanarPoint) {
        (
            self.vertices[i],
            self.vertices[(i + 1) % self.vertices.len()],
        )
    }

    fn first_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (p1, p2) = self.edge(i);
                let (q1, q2) = self.edge(j);
                if adjacent {
                    // Adjacent edges share a vertex; they only conflict when
                    // they fold back over each other.
                    let shared = if j == i + 1 { p2 } else { p1 };
                    let (a, b) = if j == i + 1 { (p1, q2) } else { (p2, q1) };
                    if cross(shared, a, b) == 0.0 && dot(shared, a, b) > 0.0 {
                        return Some((i, j));
                    }
                } else if segments_intersect(p1, p2, q1, q2) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn classify(&self, p: PlanarPoint) -> Containment {
        let bb = self.bbox;
        if p.x < bb.min.x || p.x > bb.max.x || p.y < bb.min.y || p.y > bb.max.y {
            return Containment::Outside;
        }
        let scale = bb.width().max(bb.height()).max(1.0);
        let eps = 1e-9 * scale;
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if point_segment_distance(p, a, b) <= eps {
                return Containment::Boundary;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
        if inside {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    pub fn contains_strict(&self, p: PlanarPoint) -> bool {
        self.classify(p) == Containment::Inside
    }

    pub fn contains_inclusive(&self, p: PlanarPoint) -> bool {
        self.classify(p) != Containment::Outside
    }
}

fn cross(o: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn dot(o: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> f64 {
    (a.x - o.x) * (b.x - o.x) + (a.y - o.y) * (b.y - o.y)
}

fn on_segment(a: PlanarPoint, b: PlanarPoint, p: PlanarPoint) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(p1: PlanarPoint, p2: PlanarPoint, q1: PlanarPoint, q2: PlanarPoint) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn point_segment_distance(p: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> f64 {
    let len2 = a.distance_squared(&b);
    if len2 == 0.0 {
        return p.distance(&a);
    }
    let t = (((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2).clamp(0.0, 1.0);
    p.distance(&PlanarPoint::new(
        a.x + t * (b.x - a.x),
        a.y + t * (b.y - a.y),
    ))
}

/// Region with a single maximum building height.
#[derive(Debug, Clone, PartialEq)]
pub struct Subarea {
    pub id: String,
    pub boundary: Polygon,
    pub h_max_m: f64,
}

impl Subarea {
    pub fn new(
        id: impl Into<String>,
        boundary: Vec<PlanarPoint>,
        h_max_m: f64,
    ) -> Result<Self, GeometryError> {
        let id = id.into();
        if !(h_max_m.is_finite() && h_max_m > 0.0) {
            return Err(GeometryError::InvalidSubarea {
                id,
                reason: format!("maximum building height must be > 0, got {h_max_m}"),
            });
        }
        let boundary = Polygon::new(boundary).map_err(|reason| GeometryError::InvalidSubarea {
            id: id.clone(),
            reason,
        })?;
        Ok(Self {
            id,
            boundary,
            h_max_m,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoadClass {
    Primary,
    Secondary,
    Residential,
}

impl RoadClass {
    pub const ALL: [RoadClass; 3] = [
        RoadClass::Primary,
        RoadClass::Secondary,
        RoadClass::Residential,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RoadClass::Primary => "primary",
            RoadClass::Secondary => "secondary",
            RoadClass::Residential => "residential",
        }
    }
}

impl fmt::Display for RoadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RoadClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "primary" => Ok(RoadClass::Primary),
            "secondary" => Ok(RoadClass::Secondary),
            "residential" => Ok(RoadClass::Residential),
            other => Err(format!(
                "unknown road class {other:?} (expected primary, secondary or residential)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadSegment {
    pub id: usize,
    pub class: RoadClass,
    pub points: Vec<PlanarPoint>,
}

impl RoadSegment {
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoadNetwork {
    segments: Vec<RoadSegment>,
}

impl RoadNetwork {
    pub fn new(segments: Vec<RoadSegment>) -> Result<Self, GeometryError> {
        for s in &segments {
            if s.points.len() < 2 {
                return Err(GeometryError::InvalidSegment {
                    id: s.id,
                    reason: format!("needs at least 2 points, got {}", s.points.len()),
                });
            }
            if s.points
                .iter()
                .any(|p| !p.x.is_finite() || !p.y.is_finite())
            {
                return Err(GeometryError::InvalidSegment {
                    id: s.id,
                    reason: "non-finite coordinate".into(),
                });
            }
        }
        let network = Self { segments };
        if !network.segments.is_empty() && network.total_length() <= 0.0 {
            return Err(GeometryError::InvalidSegment {
                id: network.segments[0].id,
                reason: "network has zero total length".into(),
            });
        }
        Ok(network)
    }

    pub fn segments(&self) -> &[RoadSegment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(RoadSegment::length).sum()
    }

    /// Keeps only segments whose class is listed.
    pub fn filter_classes(&self, classes: &[RoadClass]) -> RoadNetwork {
        RoadNetwork {
            segments: self
                .segments
                .iter()
                .filter(|s| classes.contains(&s.class))
                .cloned()
                .collect(),
        }
    }
}

/// Road point that must be observed from at least one selected site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoI {
    pub position: PlanarPoint,
    /// Detection radius of the enclosing subarea, meters.
    pub radius: f64,
    pub source_segment: usize,
}

/// Lattice point where a drone may hover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSite {
    pub position: PlanarPoint,
    pub subarea_id: String,
}

/// Lattice points of the given spacing anchored at the polygon's bounding-box
/// lower-left corner that lie strictly inside the polygon, in row-major order
/// (y then x).
pub fn lattice_in_polygon(polygon: &Polygon, spacing: f64) -> Vec<PlanarPoint> {
    let bb = polygon.bbox();
    let nx = (bb.width() / spacing).floor() as usize;
    let ny = (bb.height() / spacing).floor() as usize;
    let mut out = Vec::new();
    for j in 0..=ny {
        let y = bb.min.y + j as f64 * spacing;
        for i in 0..=nx {
            let p = PlanarPoint::new(bb.min.x + i as f64 * spacing, y);
            if polygon.contains_strict(p) {
                out.push(p);
            }
        }
    }
    out
}

/// Candidate sites on a per-subarea square lattice of spacing `R_l / rho`.
///
/// A point falling inside an earlier-listed subarea is dropped from later ones.
/// Output is sorted by subarea id, then y, then x.
pub fn build_grid(
    subareas: &[Subarea],
    rho: u32,
    params: &LosParams,
) -> Result<Vec<CandidateSite>, GeometryError> {
    if rho == 0 {
        return Err(GeometryError::ZeroGranularity);
    }
    params.validate()?;
    let per_area: Vec<Vec<CandidateSite>> = subareas
        .par_iter()
        .enumerate()
        .map(|(idx, area)| {
            let spacing = los_radius(area.h_max_m, params) / f64::from(rho);
            lattice_in_polygon(&area.boundary, spacing)
                .into_iter()
                .filter(|p| {
                    !subareas[..idx]
                        .iter()
                        .any(|earlier| earlier.boundary.contains_inclusive(*p))
                })
                .map(|position| CandidateSite {
                    position,
                    subarea_id: area.id.clone(),
                })
                .collect()
        })
        .collect();
    let mut sites: Vec<CandidateSite> = per_area.into_iter().flatten().collect();
    sites.sort_by(|a, b| {
        a.subarea_id
            .cmp(&b.subarea_id)
            .then(a.position.y.total_cmp(&b.position.y))
            .then(a.position.x.total_cmp(&b.position.x))
    });
    Ok(sites)
}

/// Arc-length positions at which a polyline of `length` is sampled: every
/// `spacing` from the start, plus the end point.
pub fn sample_offsets(length: f64, spacing: f64) -> Vec<f64> {
    let eps = 1e-9 * spacing.max(length).max(1.0);
    let mut out = vec![0.0];
    let mut k = 1u64;
    loop {
        let s = k as f64 * spacing;
        if s >= length - eps {
            break;
        }
        out.push(s);
        k += 1;
    }
    if length > eps {
        out.push(length);
    }
    out
}

fn point_at(points: &[PlanarPoint], cumulative: &[f64], s: f64) -> PlanarPoint {
    // cumulative[i] is the arc length at points[i].
    let i = match cumulative.binary_search_by(|c| c.total_cmp(&s)) {
        Ok(i) => return points[i],
        Err(i) => i.clamp(1, points.len() - 1),
    };
    let (a, b) = (points[i - 1], points[i]);
    let seg = cumulative[i] - cumulative[i - 1];
    if seg <= 0.0 {
        return b;
    }
    let t = ((s - cumulative[i - 1]) / seg).clamp(0.0, 1.0);
    PlanarPoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

/// Samples PoIs along every road polyline at fixed arc-length spacing,
/// including both endpoints. Each PoI takes the detection radius of the first
/// subarea containing it, or of `default_h_max_m` when none does.
pub fn sample_pois(
    network: &RoadNetwork,
    spacing: f64,
    subareas: &[Subarea],
    params: &LosParams,
    default_h_max_m: f64,
) -> Result<Vec<PoI>, GeometryError> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(GeometryError::InvalidSpacing(spacing));
    }
    params.validate()?;
    let default_radius = los_radius(default_h_max_m, params);
    let mut pois = Vec::new();
    for seg in network.segments() {
        let mut cumulative = Vec::with_capacity(seg.points.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in seg.points.windows(2) {
            acc += w[0].distance(&w[1]);
            cumulative.push(acc);
        }
        for s in sample_offsets(acc, spacing) {
            let position = point_at(&seg.points, &cumulative, s);
            let radius = subareas
                .iter()
                .find(|a| a.boundary.contains_inclusive(position))
                .map_or(default_radius, |a| los_radius(a.h_max_m, params));
            pois.push(PoI {
                position,
                radius,
                source_segment: seg.id,
            });
        }
    }
    Ok(pois)
}
