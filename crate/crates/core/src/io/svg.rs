use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

#[derive(Debug, Clone)]
enum Layer {
    Points(Vec<(f64, f64)>, &'static str),
    Line(Vec<(f64, f64)>, &'static str),
    /// `(lo, hi, height)` rectangles.
    Bars(Vec<(f64, f64, f64)>, &'static str),
    /// Circle about the origin, in data units.
    Circle(f64, &'static str),
}

/// Minimal scatter / line / histogram plot. Output depends only on the
/// data, so reruns are byte-identical.
#[derive(Debug, Clone)]
pub struct SvgPlot {
    title: String,
    x_label: String,
    y_label: String,
    layers: Vec<Layer>,
    equal_aspect: bool,
    log_x: bool,
}

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            layers: Vec::new(),
            equal_aspect: false,
            log_x: false,
        }
    }

    pub fn scatter(mut self, points: Vec<(f64, f64)>, color: &'static str) -> Self {
        self.layers.push(Layer::Points(points, color));
        self
    }

    pub fn line(mut self, points: Vec<(f64, f64)>, color: &'static str) -> Self {
        self.layers.push(Layer::Line(points, color));
        self
    }

    pub fn bars(mut self, bars: Vec<(f64, f64, f64)>, color: &'static str) -> Self {
        self.layers.push(Layer::Bars(bars, color));
        self
    }

    pub fn circle(mut self, radius: f64, color: &'static str) -> Self {
        self.layers.push(Layer::Circle(radius, color));
        self
    }

    /// Same scale on both axes, for eigenvalue clouds.
    pub fn equal_aspect(mut self) -> Self {
        self.equal_aspect = true;
        self
    }

    /// Logarithmic x axis; nonpositive x values are dropped.
    pub fn log_x(mut self) -> Self {
        self.log_x = true;
        self
    }

    fn tx(&self, x: f64) -> f64 {
        if self.log_x {
            x.log10()
        } else {
            x
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        let mut add = |x: f64, y: f64| {
            if x.is_finite() && y.is_finite() {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        };
        for layer in &self.layers {
            match layer {
                Layer::Points(p, _) | Layer::Line(p, _) => p.iter().for_each(|&(x, y)| add(self.tx(x), y)),
                Layer::Bars(b, _) => b.iter().for_each(|&(lo, hi, h)| {
                    add(self.tx(lo), 0.0);
                    add(self.tx(hi), h);
                }),
                Layer::Circle(r, _) => {
                    add(-r, -r);
                    add(*r, *r);
                }
            }
        }
        if !x0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| {
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let ((x0, x1), (y0, y1)) = (pad(x0, x1), pad(y0, y1));
        if self.equal_aspect {
            let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
            let half = (x1 - x0).max(y1 - y0) / 2.0;
            return (cx - half, cx + half, cy - half, cy + half);
        }
        (x0, x1, y0, y1)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let plot_w = if self.equal_aspect { HEIGHT - 2.0 * MARGIN } else { WIDTH - 2.0 * MARGIN };
        let plot_h = HEIGHT - 2.0 * MARGIN;
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * plot_w;
        let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * plot_h;

        let mut s = String::new();
        // writing into a String cannot fail
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#
        );
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let xl = if self.log_x { format!("1e{xv:.1}") } else { format!("{xv:.3}") };
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xl}</text>"#,
                px(xv),
                HEIGHT - MARGIN + 16.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.3}</text>"#,
                MARGIN - 6.0,
                py(yv) + 4.0
            );
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="30" text-anchor="middle" font-size="14">{}</text>"#, MARGIN + plot_w / 2.0, escape(&self.title));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN + plot_w / 2.0, HEIGHT - 15.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );

        for layer in &self.layers {
            match layer {
                Layer::Points(p, color) => {
                    for &(x, y) in p {
                        let x = self.tx(x);
                        if x.is_finite() && y.is_finite() {
                            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{color}"/>"#, px(x), py(y));
                        }
                    }
                }
                Layer::Line(p, color) => {
                    let pts: Vec<String> = p
                        .iter()
                        .map(|&(x, y)| (self.tx(x), y))
                        .filter(|(x, y)| x.is_finite() && y.is_finite())
                        .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                        .collect();
                    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" "));
                }
                Layer::Bars(b, color) => {
                    for &(lo, hi, h) in b {
                        let (l, r) = (px(self.tx(lo)), px(self.tx(hi)));
                        let (top, base) = (py(h), py(0.0));
                        let _ = writeln!(
                            s,
                            r#"<rect x="{l:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" stroke="white" stroke-width="0.3"/>"#,
                            top.min(base),
                            (r - l).max(0.0),
                            (base - top).abs()
                        );
                    }
                }
                Layer::Circle(r, color) => {
                    let _ = writeln!(
                        s,
                        r#"<ellipse cx="{:.2}" cy="{:.2}" rx="{:.2}" ry="{:.2}" fill="none" stroke="{color}" stroke-dasharray="4 3"/>"#,
                        px(0.0),
                        py(0.0),
                        (px(*r) - px(0.0)).abs(),
                        (py(*r) - py(0.0)).abs()
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_every_layer() {
        let svg = SvgPlot::new("a<b", "x", "y")
            .scatter(vec![(0.0, 0.0), (1.0, 1.0)], "black")
            .line(vec![(0.0, 1.0), (1.0, 0.0)], "red")
            .bars(vec![(0.0, 0.5, 1.0)], "gray")
            .circle(0.5, "blue")
            .equal_aspect()
            .render();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("<polyline") && svg.contains("<ellipse") && svg.contains("a&lt;b"));
    }

    #[test]
    fn empty_plot_still_renders() {
        let svg = SvgPlot::new("", "", "").log_x().render();
        assert!(svg.contains("</svg>"));
    }
}
