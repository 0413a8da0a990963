//! Deterministic SVG rendering of tour plans and tour-count sweeps.

use std::fmt::Write;

use crate::geometry::{BoundingBox, PlanarPoint};
use crate::planner::{Plan, SweepPoint};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 800.0;
const MARGIN: f64 = 60.0;
const LEGEND_WIDTH: f64 = 180.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn tour_color(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

/// Maps planar meters into the drawing area, preserving aspect ratio and
/// flipping y so north is up.
struct Frame {
    origin: PlanarPoint,
    scale: f64,
    top: f64,
}

impl Frame {
    fn new(bbox: Option<BoundingBox>) -> Self {
        let plot_w = WIDTH - 2.0 * MARGIN;
        let plot_h = HEIGHT - 2.0 * MARGIN;
        match bbox {
            Some(bb) => {
                let span = bb.width().max(bb.height()).max(1.0);
                Self {
                    origin: bb.min,
                    scale: plot_w.min(plot_h) / span,
                    top: HEIGHT - MARGIN,
                }
            }
            None => Self {
                origin: PlanarPoint::default(),
                scale: 1.0,
                top: HEIGHT - MARGIN,
            },
        }
    }

    fn map(&self, p: PlanarPoint) -> (f64, f64) {
        (
            MARGIN + (p.x - self.origin.x) * self.scale,
            self.top - (p.y - self.origin.y) * self.scale,
        )
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
}

fn axes(out: &mut String, x_label: &str, y_label: &str) {
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let (x1, y1) = (WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{x_label}</text>"#,
        0.5 * (x0 + x1),
        y0 + 35.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{y_label}</text>"#,
        x0 - 35.0,
        0.5 * (y0 + y1),
        x0 - 35.0,
        0.5 * (y0 + y1)
    );
}

/// Map of the plan: PoIs as grey dots, one closed path per tour in its own
/// color, visited sites as colored dots, and a legend with per-tour cost.
pub fn emit_plan_svg(plan: &Plan, sites: &[PlanarPoint], pois: &[PlanarPoint]) -> String {
    let all: Vec<PlanarPoint> = sites.iter().chain(pois).copied().collect();
    let frame = Frame::new(BoundingBox::of(&all));
    let mut out = String::new();
    header(&mut out, WIDTH + LEGEND_WIDTH, HEIGHT);
    axes(&mut out, "east (m)", "north (m)");

    let _ = writeln!(out, r##"<g class="pois" fill="#bbbbbb">"##);
    for p in pois {
        let (x, y) = frame.map(*p);
        let _ = writeln!(out, r#"<circle cx="{x:.1}" cy="{y:.1}" r="1.5"/>"#);
    }
    let _ = writeln!(out, "</g>");

    for (t, tour) in plan.tours.iter().enumerate() {
        let color = tour_color(t);
        let mut d = String::new();
        for (i, &k) in tour.order.iter().enumerate() {
            let (x, y) = frame.map(sites[k]);
            let _ = write!(d, "{}{x:.1},{y:.1} ", if i == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r#"<path class="tour" data-tour="{t}" d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
        let _ = writeln!(out, r#"<g class="sites" fill="{color}">"#);
        for &k in &tour.order {
            let (x, y) = frame.map(sites[k]);
            let _ = writeln!(out, r#"<circle cx="{x:.1}" cy="{y:.1}" r="2.5"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g class="legend" font-size="12">"#);
    for (t, tour) in plan.tours.iter().enumerate() {
        let y = MARGIN + 18.0 * t as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{:.1}">tour {}: {:.2} km</text>"#,
            WIDTH + 5.0,
            y,
            tour_color(t),
            WIDTH + 22.0,
            y + 10.0,
            t + 1,
            tour.cost / 1000.0
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

/// Line chart of tour count against the distance budget.
pub fn emit_sweep_svg(points: &[SweepPoint]) -> String {
    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT);
    axes(&mut out, "max travel distance (km)", "tours");
    if points.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let max_x = points
        .iter()
        .map(|p| p.max_distance_km)
        .fold(0.0, f64::max)
        .max(1e-9);
    let max_y = points.iter().map(|p| p.tours).max().unwrap_or(1).max(1) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let map = |p: &SweepPoint| {
        (
            MARGIN + p.max_distance_km / max_x * plot_w,
            HEIGHT - MARGIN - p.tours as f64 / max_y * plot_h,
        )
    };
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = map(p);
        let _ = write!(d, "{}{x:.1},{y:.1} ", if i == 0 { "M" } else { "L" });
    }
    let _ = writeln!(
        out,
        r##"<path class="sweep" d="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
        d.trim_end()
    );
    for p in points {
        let (x, y) = map(p);
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="#1f77b4"/><text x="{:.1}" y="{:.1}" font-size="11">{} @ {} km</text>"##,
            x + 6.0,
            y - 6.0,
            p.tours,
            p.max_distance_km
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::PlanMethod;
    use crate::routing::Tour;

    fn plan(tours: Vec<Tour>) -> Plan {
        Plan {
            method: PlanMethod::Mta,
            seed: 0,
            max_distance_km: 20.0,
            feasible: true,
            tours,
        }
    }

    #[test]
    fn empty_plan_has_only_axes() {
        let svg = emit_plan_svg(&plan(vec![]), &[], &[]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(r#"class="axes""#));
        assert_eq!(svg.matches("<path").count(), 0);
    }

    #[test]
    fn one_closed_path_per_tour() {
        let sites = [
            PlanarPoint::new(0.0, 0.0),
            PlanarPoint::new(100.0, 0.0),
            PlanarPoint::new(100.0, 100.0),
            PlanarPoint::new(500.0, 500.0),
        ];
        let p = plan(vec![
            Tour {
                order: vec![0, 1, 2],
                cost: 341.4,
            },
            Tour::singleton(3),
        ]);
        let svg = emit_plan_svg(&p, &sites, &[PlanarPoint::new(50.0, 0.0)]);
        assert_eq!(svg.matches(r#"<path class="tour""#).count(), 2);
        assert_eq!(svg.matches(r#"Z" fill="none""#).count(), 2);
        assert!(svg.contains("tour 1: 0.34 km"));
        assert_eq!(
            svg,
            emit_plan_svg(&p, &sites, &[PlanarPoint::new(50.0, 0.0)])
        );
    }

    #[test]
    fn sweep_chart() {
        let pts = [
            SweepPoint {
                max_distance_km: 10.0,
                tours: 6,
            },
            SweepPoint {
                max_distance_km: 20.0,
                tours: 3,
            },
        ];
        let svg = emit_sweep_svg(&pts);
        assert_eq!(svg.matches(r#"class="sweep""#).count(), 1);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(emit_sweep_svg(&[]).contains("</svg>"));
    }
}
