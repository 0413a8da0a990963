//! GeoJSON input parsing and JSON/GeoJSON artifact emission.

use geojson::{Feature, Value};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};
use thiserror::Error;

use crate::geometry::{GeoPoint, PlanarPoint, Projection, RoadClass};
use crate::planner::{FleetParams, Plan};

#[derive(Debug, Error, PartialEq)]
pub enum InputError {
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expected a GeoJSON FeatureCollection")]
    NotFeatureCollection,
    #[error("feature {index}: {message}")]
    Feature { index: usize, message: String },
    #[error("invalid plan document: {0}")]
    Plan(String),
}

fn json_error(e: serde_json::Error) -> InputError {
    InputError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn feature_error(index: usize, message: impl Into<String>) -> InputError {
    InputError::Feature {
        index,
        message: message.into(),
    }
}

/// Parses a FeatureCollection and hands each feature with its index to `f`.
fn for_each_feature<T>(
    text: &str,
    mut f: impl FnMut(usize, Feature) -> Result<T, InputError>,
) -> Result<Vec<T>, InputError> {
    let value: JsonValue = serde_json::from_str(text).map_err(json_error)?;
    let obj = value.as_object().ok_or(InputError::NotFeatureCollection)?;
    if obj.get("type").and_then(JsonValue::as_str) != Some("FeatureCollection") {
        return Err(InputError::NotFeatureCollection);
    }
    let features = obj
        .get("features")
        .and_then(JsonValue::as_array)
        .ok_or(InputError::NotFeatureCollection)?;
    features
        .iter()
        .enumerate()
        .map(|(index, raw)| {
            let feature = Feature::from_json_value(raw.clone())
                .map_err(|e| feature_error(index, e.to_string()))?;
            f(index, feature)
        })
        .collect()
}

fn position(index: usize, pos: &[f64]) -> Result<GeoPoint, InputError> {
    if pos.len() < 2 {
        return Err(feature_error(
            index,
            "position needs longitude and latitude",
        ));
    }
    GeoPoint::new(pos[1], pos[0]).map_err(|e| feature_error(index, e.to_string()))
}

fn positions(index: usize, line: &[Vec<f64>]) -> Result<Vec<GeoPoint>, InputError> {
    line.iter().map(|p| position(index, p)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadFeature {
    pub index: usize,
    pub class: RoadClass,
    pub coords: Vec<GeoPoint>,
}

/// Roads: LineString features with a string `class` property.
pub fn parse_roads(text: &str) -> Result<Vec<RoadFeature>, InputError> {
    for_each_feature(text, |index, feature| {
        let class = feature
            .property("class")
            .ok_or_else(|| feature_error(index, "missing \"class\" property"))?
            .as_str()
            .ok_or_else(|| feature_error(index, "\"class\" must be a string"))?
            .parse::<RoadClass>()
            .map_err(|e| feature_error(index, e))?;
        let geometry = feature
            .geometry
            .as_ref()
            .ok_or_else(|| feature_error(index, "missing geometry"))?;
        let coords = match &geometry.value {
            Value::LineString(line) => positions(index, line)?,
            _ => return Err(feature_error(index, "geometry must be a LineString")),
        };
        if coords.len() < 2 {
            return Err(feature_error(
                index,
                "LineString needs at least 2 positions",
            ));
        }
        Ok(RoadFeature {
            index,
            class,
            coords,
        })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubareaFeature {
    pub index: usize,
    pub id: String,
    pub h_max_m: f64,
    pub ring: Vec<GeoPoint>,
}

/// Subareas: Polygon features (outer ring only) with a numeric `h_max_m`
/// property. The id comes from an `id` property, the feature id, or the
/// feature index, in that order.
pub fn parse_subareas(text: &str) -> Result<Vec<SubareaFeature>, InputError> {
    for_each_feature(text, |index, feature| {
        let h_max_m = feature
            .property("h_max_m")
            .ok_or_else(|| feature_error(index, "missing \"h_max_m\" property"))?
            .as_f64()
            .ok_or_else(|| feature_error(index, "\"h_max_m\" must be a number"))?;
        if !(h_max_m.is_finite() && h_max_m > 0.0) {
            return Err(feature_error(
                index,
                format!("\"h_max_m\" must be > 0, got {h_max_m}"),
            ));
        }
        let id = match (feature.property("id"), &feature.id) {
            (Some(JsonValue::String(s)), _) => s.clone(),
            (Some(JsonValue::Number(n)), _) => n.to_string(),
            (_, Some(geojson::feature::Id::String(s))) => s.clone(),
            (_, Some(geojson::feature::Id::Number(n))) => n.to_string(),
            _ => format!("subarea-{index}"),
        };
        let geometry = feature
            .geometry
            .as_ref()
            .ok_or_else(|| feature_error(index, "missing geometry"))?;
        let ring = match &geometry.value {
            Value::Polygon(rings) if rings.len() == 1 => positions(index, &rings[0])?,
            Value::Polygon(rings) if rings.is_empty() => {
                return Err(feature_error(index, "Polygon has no rings"))
            }
            Value::Polygon(_) => {
                return Err(feature_error(index, "Polygon holes are not supported"))
            }
            _ => return Err(feature_error(index, "geometry must be a Polygon")),
        };
        Ok(SubareaFeature {
            index,
            id,
            h_max_m,
            ring,
        })
    })
}

/// A selected hover site, in both coordinate systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub x_m: f64,
    pub y_m: f64,
    pub lat: f64,
    pub lon: f64,
    pub subarea_id: String,
}

impl SiteRecord {
    pub fn planar(&self) -> PlanarPoint {
        PlanarPoint::new(self.x_m, self.y_m)
    }
}

/// Contents of `plan.json`: the tour plan plus everything needed to rerun the
/// baseline against it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub origin: GeoPoint,
    pub fleet: FleetParams,
    pub sites: Vec<SiteRecord>,
    pub plan: Plan,
}

impl PlanDocument {
    pub fn points(&self) -> Vec<PlanarPoint> {
        self.sites.iter().map(SiteRecord::planar).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plan serializes");
        s.push('\n');
        s
    }
}

/// Parses and validates `plan.json`: the tours must partition the site list.
pub fn parse_plan_document(text: &str) -> Result<PlanDocument, InputError> {
    let doc: PlanDocument = serde_json::from_str(text).map_err(json_error)?;
    if !doc.plan.partitions(doc.sites.len()) {
        return Err(InputError::Plan(
            "tours do not visit every site exactly once".into(),
        ));
    }
    if doc
        .plan
        .tours
        .iter()
        .any(|t| !(t.cost.is_finite() && t.cost >= 0.0))
    {
        return Err(InputError::Plan("tour cost must be finite and >= 0".into()));
    }
    let finite = doc
        .sites
        .iter()
        .all(|s| s.x_m.is_finite() && s.y_m.is_finite());
    if !finite {
        return Err(InputError::Plan("site coordinates must be finite".into()));
    }
    Ok(doc)
}

/// Tours as a FeatureCollection of closed LineStrings in WGS84, with local
/// planar coordinates under `properties.planar`.
pub fn tours_geojson(plan: &Plan, sites: &[SiteRecord], projection: &Projection) -> String {
    let features: Vec<JsonValue> = plan
        .tours
        .iter()
        .enumerate()
        .map(|(t, tour)| {
            let mut ring: Vec<PlanarPoint> =
                tour.order.iter().map(|&k| sites[k].planar()).collect();
            if let Some(first) = ring.first().copied() {
                ring.push(first);
            }
            let coordinates: Vec<[f64; 2]> = ring
                .iter()
                .map(|p| {
                    let g = projection.inverse(*p);
                    [g.lon, g.lat]
                })
                .collect();
            let planar: Vec<[f64; 2]> = ring.iter().map(|p| [p.x, p.y]).collect();
            json!({
                "type": "Feature",
                "geometry": { "type": "LineString", "coordinates": coordinates },
                "properties": {
                    "tour": t,
                    "order": tour.order,
                    "cost_m": tour.cost,
                    "cost_km": tour.cost / 1000.0,
                    "edges": tour.edge_count(),
                    "planar": planar,
                },
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json!({
        "type": "FeatureCollection",
        "features": features,
    }))
    .expect("geojson serializes");
    s.push('\n');
    s
}
