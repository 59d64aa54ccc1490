//! Scenes in the Poincare disk rendered as SVG.
//!
//! The unit disk fills a 1000 x 1000 viewBox (scale 500, y up). Geodesics
//! are arcs of circles orthogonal to the unit circle, or chords when the two
//! endpoints are collinear with the origin. All numbers are printed with six
//! decimals so equal scenes give byte-equal documents.

use std::fmt::Write;

use hypskew::HPoint;

pub const VIEW_SIZE: f64 = 1000.0;
pub const SCALE: f64 = 500.0;

/// Below this `|a x b|` the geodesic through `a` and `b` is drawn as a chord.
pub const DIAMETER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

/// Blue to yellow to red for `s` in `[0, 1]` (clamped).
pub fn color_ramp(s: f64) -> Rgb {
    const STOPS: [(f64, f64, f64); 3] = [(44.0, 123.0, 182.0), (255.0, 255.0, 191.0), (215.0, 25.0, 28.0)];
    let s = if s.is_nan() { 0.0 } else { s.clamp(0.0, 1.0) };
    let (a, b, u) = if s < 0.5 { (STOPS[0], STOPS[1], 2.0 * s) } else { (STOPS[1], STOPS[2], 2.0 * s - 1.0) };
    let mix = |x: f64, y: f64| (x + (y - x) * u).round() as u8;
    Rgb(mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// Closed geodesic polygon.
    Polygon { vertices: Vec<HPoint>, stroke: Rgb, fill: Option<Rgb> },
    Geodesic { from: HPoint, to: HPoint, stroke: Rgb },
    Point { at: HPoint, radius: f64, fill: Rgb },
}

/// Elements are drawn in insertion order on top of the disk outline.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene {
    pub elements: Vec<Element>,
}

impl Scene {
    pub fn new() -> Self {
        Scene::default()
    }

    pub fn push(&mut self, e: Element) {
        self.elements.push(e);
    }

    pub fn triangle(&mut self, vertices: [HPoint; 3], stroke: Rgb, fill: Option<Rgb>) {
        self.push(Element::Polygon {
            vertices: vertices.to_vec(),
            stroke,
            fill,
        });
    }

    pub fn point(&mut self, at: HPoint, radius: f64, fill: Rgb) {
        self.push(Element::Point { at, radius, fill });
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn screen(z: HPoint) -> (f64, f64) {
    (SCALE + SCALE * z.x(), SCALE - SCALE * z.y())
}

fn move_to(z: HPoint) -> String {
    let (x, y) = screen(z);
    format!("M {} {}", num(x), num(y))
}

/// Path command continuing from `a` along the geodesic to `b`.
pub fn geodesic_step(a: HPoint, b: HPoint) -> String {
    let (bx, by) = screen(b);
    let cross = a.x() * b.y() - a.y() * b.x();
    if cross.abs() < DIAMETER_TOL {
        return format!("L {} {}", num(bx), num(by));
    }
    // centre c of the orthogonal circle: 2 c.a = 1 + |a|^2, 2 c.b = 1 + |b|^2
    let (pa, pb) = ((1.0 + a.norm_sqr()) / 2.0, (1.0 + b.norm_sqr()) / 2.0);
    let cx = (pa * b.y() - pb * a.y()) / cross;
    let cy = (a.x() * pb - b.x() * pa) / cross;
    let radius = (cx * cx + cy * cy - 1.0).max(0.0).sqrt() * SCALE;
    // the arc inside the disk is the minor one. Counterclockwise about 0 is
    // clockwise about c, which is the positive SVG direction once y is flipped
    let sweep = if cross > 0.0 { 1 } else { 0 };
    format!("A {} {} 0 0 {} {} {}", num(radius), num(radius), sweep, num(bx), num(by))
}

fn polygon_path(vertices: &[HPoint]) -> String {
    let mut d = move_to(vertices[0]);
    for k in 0..vertices.len() {
        d.push(' ');
        d.push_str(&geodesic_step(vertices[k], vertices[(k + 1) % vertices.len()]));
    }
    d.push_str(" Z");
    d
}

pub fn render_svg(scene: &Scene) -> String {
    let mut out = String::new();
    let size = num(VIEW_SIZE);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {s} {s}" width="{s}" height="{s}">"#,
        s = size
    );
    let _ = writeln!(
        out,
        r##"<circle cx="{c}" cy="{c}" r="{c}" fill="#ffffff" stroke="#000000" stroke-width="1.500000"/>"##,
        c = num(SCALE)
    );
    for e in &scene.elements {
        match e {
            Element::Polygon { vertices, stroke, fill } if vertices.len() >= 2 => {
                let fill = fill.map_or("none".to_string(), |f| f.hex());
                let _ = writeln!(
                    out,
                    r#"<path d="{}" fill="{}" fill-opacity="0.600000" stroke="{}" stroke-width="1.000000"/>"#,
                    polygon_path(vertices),
                    fill,
                    stroke.hex()
                );
            }
            Element::Polygon { .. } => {}
            Element::Geodesic { from, to, stroke } => {
                let _ = writeln!(
                    out,
                    r#"<path d="{} {}" fill="none" stroke="{}" stroke-width="1.000000"/>"#,
                    move_to(*from),
                    geodesic_step(*from, *to),
                    stroke.hex()
                );
            }
            Element::Point { at, radius, fill } => {
                let (x, y) = screen(*at);
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
                    num(x),
                    num(y),
                    num(*radius),
                    fill.hex()
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
