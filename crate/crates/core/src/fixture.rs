//! Synthetic test city: a 4 km square with four subareas in three height
//! zones and a layered road grid. Used by tests and shipped as example data.

use serde_json::{json, Value as JsonValue};

use crate::config::PlanConfig;
use crate::geometry::{GeoPoint, PlanarPoint, Projection, RoadClass};

pub const ORIGIN: GeoPoint = GeoPoint {
    lat: 45.0,
    lon: 10.0,
};

const HALF: f64 = 2000.0;

/// (id, [x0, y0, x1, y1], h_max_m)
const SUBAREAS: [(&str, [f64; 4], f64); 4] = [
    ("north", [-HALF, 500.0, HALF, HALF], 8.0),
    ("south", [-HALF, -HALF, HALF, -500.0], 8.0),
    ("west", [-HALF, -500.0, 0.0, 500.0], 17.0),
    ("east", [0.0, -500.0, HALF, 500.0], 38.0),
];

fn roads_planar() -> Vec<(RoadClass, Vec<PlanarPoint>)> {
    let mut roads = Vec::new();
    let line =
        |a: (f64, f64), b: (f64, f64)| vec![PlanarPoint::new(a.0, a.1), PlanarPoint::new(b.0, b.1)];
    for c in [-1500.0, 0.0, 1500.0] {
        roads.push((RoadClass::Primary, line((c, -HALF), (c, HALF))));
        roads.push((RoadClass::Primary, line((-HALF, c), (HALF, c))));
    }
    for c in [-750.0, 750.0] {
        roads.push((RoadClass::Secondary, line((c, -HALF), (c, HALF))));
        roads.push((RoadClass::Secondary, line((-HALF, c), (HALF, c))));
    }
    for y in [-250.0, 250.0] {
        roads.push((RoadClass::Residential, line((-HALF, y), (HALF, y))));
    }
    for i in 0..16 {
        let x = -1875.0 + 250.0 * i as f64;
        roads.push((RoadClass::Residential, line((x, -500.0), (x, 500.0))));
    }
    // A bent residential street in the south, exercising multi-vertex lines.
    roads.push((
        RoadClass::Residential,
        vec![
            PlanarPoint::new(-1200.0, -1800.0),
            PlanarPoint::new(-400.0, -1800.0),
            PlanarPoint::new(-400.0, -1100.0),
            PlanarPoint::new(400.0, -1100.0),
        ],
    ));
    roads
}

fn to_lonlat(projection: &Projection, p: PlanarPoint) -> [f64; 2] {
    let g = projection.inverse(p);
    // Seven decimals (~1 cm) keeps the files short and stable.
    let round = |v: f64| (v * 1e7).round() / 1e7;
    [round(g.lon), round(g.lat)]
}

pub fn roads_geojson() -> String {
    let projection = Projection::new(ORIGIN);
    let features: Vec<JsonValue> = roads_planar()
        .into_iter()
        .map(|(class, pts)| {
            let coords: Vec<[f64; 2]> = pts.iter().map(|p| to_lonlat(&projection, *p)).collect();
            json!({
                "type": "Feature",
                "properties": { "class": class.as_str() },
                "geometry": { "type": "LineString", "coordinates": coords },
            })
        })
        .collect();
    pretty(json!({ "type": "FeatureCollection", "features": features }))
}

pub fn subareas_geojson() -> String {
    let projection = Projection::new(ORIGIN);
    let features: Vec<JsonValue> = SUBAREAS
        .iter()
        .map(|(id, [x0, y0, x1, y1], h)| {
            let ring: Vec<[f64; 2]> = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
                .iter()
                .map(|(x, y)| to_lonlat(&projection, PlanarPoint::new(**x, **y)))
                .collect();
            json!({
                "type": "Feature",
                "properties": { "id": id, "h_max_m": h },
                "geometry": { "type": "Polygon", "coordinates": [ring] },
            })
        })
        .collect();
    pretty(json!({ "type": "FeatureCollection", "features": features }))
}

pub fn config() -> PlanConfig {
    PlanConfig {
        seed: 7,
        ..PlanConfig::default()
    }
}

pub fn config_toml() -> String {
    config().to_toml()
}

fn pretty(v: JsonValue) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("fixture serializes");
    s.push('\n');
    s
}
