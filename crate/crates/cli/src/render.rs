//! SVG drawings of pipeline stages, projected onto the XZ plane.

use std::fmt::Write;

use onepath_core::graph::{DepGraph, EdgeKind, InitGraph};
use onepath_core::plan::PlanOutput;
use onepath_core::{Layer, Point, PrintPlan, PrinterConfig};
use svg::node::element::{Circle, Definitions, Element, Group, Line, Marker, Polygon, Polyline, Rectangle};
use svg::{Document, Node};

const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
const MUTED: &str = "#c8c8c8";
const TRANSFER: &str = "#e4002b";
const CANVAS_WIDTH: f64 = 800.0;

pub fn color(id: usize) -> &'static str {
    PALETTE[id % PALETTE.len()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Layers,
    Dep,
    Init,
    Opps,
    Plan,
}

enum Shape {
    Poly { points: Vec<(f64, f64)>, closed: bool, color: &'static str, class: &'static str, weight: f64, dashed: bool },
    Arrow { from: (f64, f64), to: (f64, f64), kind: EdgeKind },
    Dot { at: (f64, f64), color: &'static str },
}

/// Collects shapes in model units, then fits the view box around them.
#[derive(Default)]
struct Canvas {
    shapes: Vec<Shape>,
    bounds: Option<(f64, f64, f64, f64)>,
}

fn project(p: Point) -> (f64, f64) {
    (p.x, -p.z)
}

fn centroid(points: &[Point]) -> (f64, f64) {
    let n = points.len().max(1) as f64;
    let (x, y) = points.iter().map(|&p| project(p)).fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    (x / n, y / n)
}

fn points_attr(points: &[(f64, f64)]) -> String {
    let mut s = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.4},{y:.4}");
    }
    s
}

impl Canvas {
    fn grow(&mut self, (x, y): (f64, f64)) {
        let b = self.bounds.get_or_insert((x, y, x, y));
        *b = (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y));
    }

    fn poly(&mut self, points: &[Point], closed: bool, color: &'static str, class: &'static str) {
        self.poly_styled(points, closed, color, class, 1.0, false);
    }

    fn poly_styled(
        &mut self,
        points: &[Point],
        closed: bool,
        color: &'static str,
        class: &'static str,
        weight: f64,
        dashed: bool,
    ) {
        let points: Vec<_> = points.iter().map(|&p| project(p)).collect();
        for &p in &points {
            self.grow(p);
        }
        self.shapes.push(Shape::Poly { points, closed, color, class, weight, dashed });
    }

    fn arrow(&mut self, from: (f64, f64), to: (f64, f64), kind: EdgeKind) {
        self.grow(from);
        self.grow(to);
        self.shapes.push(Shape::Arrow { from, to, kind });
    }

    fn dot(&mut self, at: (f64, f64), color: &'static str) {
        self.grow(at);
        self.shapes.push(Shape::Dot { at, color });
    }

    fn finish(self) -> Document {
        let Some((x0, y0, x1, y1)) = self.bounds else {
            return Document::new().set("viewBox", (0, 0, 1, 1)).set("width", CANVAS_WIDTH).set("height", CANVAS_WIDTH);
        };
        let extent = (x1 - x0).max(y1 - y0).max(1.0);
        let pad = extent * 0.05;
        let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
        let stroke = extent / 400.0;
        let marker = Marker::new()
            .set("id", "arrow")
            .set("viewBox", "0 0 10 10")
            .set("refX", 10)
            .set("refY", 5)
            .set("markerWidth", 6)
            .set("markerHeight", 6)
            .set("orient", "auto")
            .add(Polygon::new().set("points", "0,0 10,5 0,10").set("fill", "#333"));
        let mut group = Group::new().set("fill", "none").set("stroke-linejoin", "round");
        for s in self.shapes {
            group = match s {
                Shape::Poly { points, closed, color, class, weight, dashed } => {
                    let width = stroke * weight;
                    let mut el = if closed {
                        Polygon::new().set("points", points_attr(&points)).into()
                    } else {
                        Element::from(Polyline::new().set("points", points_attr(&points)))
                    };
                    el.assign("class", class);
                    el.assign("stroke", color);
                    el.assign("stroke-width", width);
                    if dashed {
                        el.assign("stroke-dasharray", format!("{} {}", 4.0 * width, 2.0 * width));
                    }
                    group.add(el)
                }
                Shape::Arrow { from, to, kind } => {
                    let mut line = Line::new()
                        .set("class", format!("edge {}", kind.as_str()))
                        .set("x1", from.0)
                        .set("y1", from.1)
                        .set("x2", to.0)
                        .set("y2", to.1)
                        .set("stroke", "#333")
                        .set("stroke-width", stroke)
                        .set("marker-end", "url(#arrow)");
                    if kind == EdgeKind::Collision {
                        line = line.set("stroke-dasharray", format!("{} {}", 4.0 * stroke, 3.0 * stroke));
                    }
                    group.add(line)
                }
                Shape::Dot { at, color } => group.add(
                    Circle::new()
                        .set("class", "node")
                        .set("cx", at.0)
                        .set("cy", at.1)
                        .set("r", stroke * 2.5)
                        .set("fill", color)
                        .set("stroke", "none"),
                ),
            };
        }
        Document::new()
            .set("viewBox", (x0 - pad, y0 - pad, w, h))
            .set("width", CANVAS_WIDTH)
            .set("height", (CANVAS_WIDTH * h / w).round())
            .add(Definitions::new().add(marker))
            .add(
                Rectangle::new()
                    .set("x", x0 - pad)
                    .set("y", y0 - pad)
                    .set("width", w)
                    .set("height", h)
                    .set("fill", "white"),
            )
            .add(group)
    }
}

/// Every sliced element, alternating shades by layer.
pub fn render_layers(layers: &[Layer]) -> Document {
    let mut c = Canvas::default();
    for l in layers {
        let col = if l.index % 2 == 0 { "#4a4a4a" } else { "#8a8a8a" };
        for e in &l.elements {
            c.poly(&e.points, e.is_contour(), col, "element");
        }
    }
    c.finish()
}

/// Elements with one arrow per dependency edge; collision edges are dashed.
pub fn render_dep(dep: &DepGraph<f64>) -> Document {
    let mut c = Canvas::default();
    for e in &dep.elements {
        c.poly(&e.points, e.is_contour(), MUTED, "element");
    }
    let centers: Vec<_> = dep.elements.iter().map(|e| centroid(&e.points)).collect();
    for &at in &centers {
        c.dot(at, "#333");
    }
    for (u, v, k) in dep.dag.edges() {
        c.arrow(centers[u], centers[v], k);
    }
    c.finish()
}

/// Elements colored by their chain node, with the contracted edges.
pub fn render_init(dep: &DepGraph<f64>, init: &InitGraph) -> Document {
    let mut c = Canvas::default();
    let mut centers = Vec::with_capacity(init.node_count());
    for (i, node) in init.nodes.iter().enumerate() {
        let mut pts = Vec::new();
        for &e in node {
            let el = &dep.elements[e];
            c.poly(&el.points, el.is_contour(), color(i), "element");
            pts.extend_from_slice(&el.points);
        }
        centers.push(centroid(&pts));
    }
    for (i, &at) in centers.iter().enumerate() {
        c.dot(at, color(i));
    }
    for (u, v, k) in init.dag.edges() {
        c.arrow(centers[u], centers[v], k);
    }
    c.finish()
}

/// Patch layers (flat or curved) colored by OPP id.
pub fn render_opps(out: &PlanOutput<f64>, cfg: &PrinterConfig) -> Document {
    let ctx = out.context(cfg);
    let mut c = Canvas::default();
    for (i, p) in out.curved.patches.iter().enumerate() {
        for l in p.layers(&ctx) {
            c.poly(&l.points, l.closed, color(i), "layer");
        }
    }
    c.finish()
}

/// Toolpaths colored by OPP id, transfer moves highlighted.
pub fn render_plan(plan: &PrintPlan) -> Document {
    let mut c = Canvas::default();
    for tp in &plan.toolpaths {
        let pts: Vec<Point> = tp.vertices.iter().map(|v| v.position).collect();
        c.poly(&pts, false, color(tp.opp_id), "toolpath");
    }
    for (t, tp) in plan.transfers.iter().zip(&plan.toolpaths) {
        let mut pts: Vec<Point> = tp.vertices.last().map(|v| v.position).into_iter().collect();
        pts.extend_from_slice(&t.moves);
        c.poly_styled(&pts, false, TRANSFER, "transfer", 1.5, true);
    }
    c.finish()
}

pub fn render_stage(out: &PlanOutput<f64>, cfg: &PrinterConfig, stage: Stage) -> Document {
    match stage {
        Stage::Layers => render_layers(&out.layers),
        Stage::Dep => render_dep(&out.dep),
        Stage::Init => render_init(&out.dep, &out.init),
        Stage::Opps => render_opps(out, cfg),
        Stage::Plan => render_plan(&out.plan),
    }
}
