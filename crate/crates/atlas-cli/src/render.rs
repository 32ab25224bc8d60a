//! Deterministic SVG rendering of a document: curves in the four-color
//! convention, zeros as dots sized by order, branch points as crosses,
//! arcs dashed, domains shaded, axes in s-plane units. Identical documents
//! produce byte-identical files.

use std::fmt::Write as _;

use atlas_core::geom::Rect;
use atlas_core::trace::{CurveClass, LevelSet, Source};
use atlas_core::zeros::Target;
use atlas_core::AtlasDocument;

const W: f64 = 900.0;
const H: f64 = 700.0;
const MARGIN: f64 = 50.0;

struct Frame {
    rect: Rect,
}

impl Frame {
    fn x(&self, sigma: f64) -> f64 {
        MARGIN + (sigma - self.rect.sigma_min) / self.rect.width() * (W - 2.0 * MARGIN)
    }

    fn y(&self, t: f64) -> f64 {
        // SVG y grows downward; the t axis grows upward.
        H - MARGIN - (t - self.rect.t_min) / self.rect.height() * (H - 2.0 * MARGIN)
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_finite() {
        (v * 10000.0).round() / 10000.0
    } else {
        0.0
    }
}

fn color_code(c: u8) -> &'static str {
    match c {
        1 => "#c22f2f",
        2 => "#2456a8",
        3 => "#e08a26",
        4 => "#2d8a43",
        _ => "#666666",
    }
}

fn class_color(class: CurveClass, source: Source) -> &'static str {
    match (class, source) {
        (CurveClass::GammaPrime { .. }, _) => color_code(1),
        (CurveClass::GammaZero { .. }, _) => color_code(2),
        (CurveClass::GammaJ { .. }, _) => "#7a3fa8",
        (CurveClass::UpsilonPrime { .. }, _) => color_code(4),
        (CurveClass::UpsilonZero { .. }, _) => color_code(3),
        (CurveClass::UpsilonJ { .. }, _) => "#3f8a8a",
        (CurveClass::CircleComponent { .. }, _) => "#888888",
        (CurveClass::Unknown, Source::F) => "#bbbbbb",
        (CurveClass::Unknown, Source::FPrime) => "#cccccc",
    }
}

/// Which layers to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layers {
    pub curves: bool,
    pub zeros: bool,
    pub domains: bool,
    pub arcs: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Layers {
            curves: true,
            zeros: true,
            domains: true,
            arcs: true,
        }
    }
}

impl Layers {
    pub fn parse(spec: &str) -> Self {
        let mut l = Layers {
            curves: false,
            zeros: false,
            domains: false,
            arcs: false,
        };
        for part in spec.split(',') {
            match part.trim() {
                "curves" => l.curves = true,
                "zeros" => l.zeros = true,
                "domains" => l.domains = true,
                "arcs" => l.arcs = true,
                "all" => return Layers::default(),
                _ => {}
            }
        }
        l
    }
}

pub fn render_svg(doc: &AtlasDocument, layers: Layers) -> anyhow::Result<String> {
    let rect = doc
        .window
        .map(|w| w.rect)
        .or_else(|| {
            // Fall back to the bounding box of whatever geometry exists.
            let mut pts = doc.curves.iter().flat_map(|c| c.points.iter());
            pts.next().map(|first| {
                let mut r = Rect::from_center(*first, 1e-6, 1e-6);
                for p in doc.curves.iter().flat_map(|c| c.points.iter()) {
                    r.sigma_min = r.sigma_min.min(p.re);
                    r.sigma_max = r.sigma_max.max(p.re);
                    r.t_min = r.t_min.min(p.im);
                    r.t_max = r.t_max.max(p.im);
                }
                r
            })
        })
        .unwrap_or(Rect {
            sigma_min: -1.0,
            sigma_max: 1.0,
            t_min: -1.0,
            t_max: 1.0,
        });
    let f = Frame { rect };
    let mut svg = String::new();
    writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"##
    )?;
    writeln!(svg, r##"<rect width="{W}" height="{H}" fill="#fdfdf8"/>"##)?;

    if layers.domains {
        let fills = ["#f0e8f8", "#e8f2e8", "#f8efe2", "#e6eef6", "#f6e6ea", "#eef6e6"];
        for d in &doc.domains {
            let fill = fills[d.index % fills.len()];
            let mut path = String::new();
            for (i, p) in d.polygon.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                write!(path, "{cmd}{} {} ", sanitize(f.x(p.re)), sanitize(f.y(p.im)))?;
            }
            path.push('Z');
            writeln!(
                svg,
                r##"<path d="{path}" fill="{fill}" stroke="none" opacity="0.85"/>"##
            )?;
        }
    }

    // Axes with unit ticks.
    let ax = |v: f64| sanitize(v);
    writeln!(
        svg,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333" stroke-width="1"/>"##,
        MARGIN,
        MARGIN,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    )?;
    let tick_step = |span: f64| -> f64 {
        let raw = span / 8.0;
        let mag = 10f64.powf(raw.log10().floor());
        let norm = raw / mag;
        if norm < 1.5 {
            mag
        } else if norm < 3.5 {
            2.0 * mag
        } else if norm < 7.5 {
            5.0 * mag
        } else {
            10.0 * mag
        }
    };
    let sx = tick_step(rect.width());
    let mut sigma = (rect.sigma_min / sx).ceil() * sx;
    while sigma <= rect.sigma_max + 1e-12 {
        writeln!(
            svg,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#999" stroke-width="0.5"/><text x="{0}" y="{3}" font-size="11" text-anchor="middle" fill="#333">{4}</text>"##,
            ax(f.x(sigma)),
            H - MARGIN,
            H - MARGIN + 5.0,
            H - MARGIN + 18.0,
            (sigma * 1000.0).round() / 1000.0
        )?;
        sigma += sx;
    }
    let sy = tick_step(rect.height());
    let mut t = (rect.t_min / sy).ceil() * sy;
    while t <= rect.t_max + 1e-12 {
        writeln!(
            svg,
            r##"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#999" stroke-width="0.5"/><text x="{3}" y="{0}" font-size="11" text-anchor="end" fill="#333">{4}</text>"##,
            ax(f.y(t)),
            MARGIN - 5.0,
            MARGIN,
            MARGIN - 8.0,
            (t * 1000.0).round() / 1000.0
        )?;
        t += sy;
    }

    if layers.arcs {
        for d in &doc.domains {
            for seg in &d.boundary {
                if matches!(seg.kind, atlas_core::domains::SegKind::EtaArc(_)) {
                    let mut path = String::new();
                    for (i, p) in seg.points.iter().enumerate() {
                        let cmd = if i == 0 { 'M' } else { 'L' };
                        write!(path, "{cmd}{} {} ", sanitize(f.x(p.re)), sanitize(f.y(p.im)))?;
                    }
                    writeln!(
                        svg,
                        r##"<path d="{path}" fill="none" stroke="#555" stroke-width="1.2" stroke-dasharray="6 4"/>"##
                    )?;
                }
            }
        }
    }

    if layers.curves {
        for c in &doc.curves {
            if c.points.len() < 2 {
                continue;
            }
            // Color runs paint real-axis pre-images piecewise; otherwise the
            // class color applies to the whole polyline.
            let runs: Vec<(usize, &str)> = if matches!(c.levelset, LevelSet::ImZero)
                && !c.color_runs.is_empty()
            {
                c.color_runs
                    .iter()
                    .map(|(i, col)| (*i, color_code(*col)))
                    .collect()
            } else {
                vec![(0usize, class_color(c.class, c.source))]
            };
            let dash = if c.source == Source::FPrime {
                r##" stroke-dasharray="1.5 2.5""##
            } else {
                ""
            };
            let width = if matches!(c.levelset, LevelSet::AbsEq(_)) {
                0.8
            } else {
                1.6
            };
            for (ri, (start, color)) in runs.iter().enumerate() {
                let end = runs.get(ri + 1).map(|(i, _)| *i + 1).unwrap_or(c.points.len());
                if end <= *start + 1 {
                    continue;
                }
                let mut path = String::new();
                for (i, p) in c.points[*start..end].iter().enumerate() {
                    let cmd = if i == 0 { 'M' } else { 'L' };
                    write!(path, "{cmd}{} {} ", sanitize(f.x(p.re)), sanitize(f.y(p.im)))?;
                }
                writeln!(
                    svg,
                    r##"<path d="{path}" fill="none" stroke="{color}" stroke-width="{width}"{dash}/>"##
                )?;
            }
        }
    }

    if layers.zeros {
        for z in &doc.zeros {
            let (x, y) = (sanitize(f.x(z.location.re)), sanitize(f.y(z.location.im)));
            match z.target {
                Target::F => {
                    let r = if z.order == 2 { 6.0 } else { 3.5 };
                    writeln!(
                        svg,
                        r##"<circle cx="{x}" cy="{y}" r="{r}" fill="#111" stroke="#fff" stroke-width="0.8"/>"##
                    )?;
                }
                Target::FPrime | Target::FDoublePrime => {
                    let d = 4.0;
                    writeln!(
                        svg,
                        r##"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="#8a1f1f" stroke-width="1.6" fill="none"/>"##,
                        sanitize(x - d),
                        sanitize(y - d),
                        sanitize(x + d),
                        sanitize(y + d),
                        sanitize(x - d),
                        sanitize(y + d),
                        sanitize(x + d),
                        sanitize(y - d)
                    )?;
                }
            }
        }
        for tree in &doc.merge_trees {
            for n in &tree.nodes {
                let (x, y) = (
                    sanitize(f.x(n.branch_point.re)),
                    sanitize(f.y(n.branch_point.im)),
                );
                let d = 4.0;
                writeln!(
                    svg,
                    r##"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="#8a1f1f" stroke-width="1.6" fill="none"/>"##,
                    sanitize(x - d),
                    sanitize(y - d),
                    sanitize(x + d),
                    sanitize(y + d),
                    sanitize(x - d),
                    sanitize(y + d),
                    sanitize(x + d),
                    sanitize(y - d)
                )?;
            }
        }
    }

    writeln!(
        svg,
        r##"<text x="{}" y="{}" font-size="13" fill="#222">{}</text>"##,
        MARGIN,
        MARGIN - 14.0,
        doc.spec
    )?;
    writeln!(svg, "</svg>")?;
    Ok(svg)
}
