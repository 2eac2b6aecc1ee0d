//! SVG drawings of subdivision cells in a disk model.
//!
//! Hyperbolic triangles are placed with their centroid at the origin and
//! drawn in the Klein (straight edges) or Poincaré (sampled arcs) disk.
//! Euclidean shapes have no hyperbolic realization; they are drawn flat,
//! centred and scaled to fit the same canvas.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::plane_model::{self, DiskModel, HPoint};
use crate::shape::ShapeRecord;
use crate::subdivision::Letter;

pub const MAX_RENDER_DEPTH: usize = 8;
pub const DEFAULT_SIZE: u32 = 800;
pub const DEFAULT_ARC_SAMPLES: usize = 32;
pub const DEFAULT_PALETTE: [&str; 4] = ["#e4572e", "#29335c", "#f3a712", "#4f9d69"];

#[derive(Debug, Clone, PartialEq)]
pub enum RenderMode {
    /// All `4^d` cells of depth `d`.
    Depth(usize),
    /// The nested cells along one word, the last one highlighted.
    Word(Vec<Letter>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub model: DiskModel,
    pub mode: RenderMode,
    /// Fill colours for cells whose last letter is A, B, C, M.
    pub palette: [String; 4],
    pub size: u32,
    /// Points per edge for Poincaré arcs at depth 0; halved per level.
    pub arc_samples: usize,
}

impl RenderSpec {
    pub fn new(model: DiskModel, mode: RenderMode) -> Self {
        RenderSpec {
            model,
            mode,
            palette: DEFAULT_PALETTE.map(String::from),
            size: DEFAULT_SIZE,
            arc_samples: DEFAULT_ARC_SAMPLES,
        }
    }
}

type Tri<P> = [P; 3];

/// Child vertices in the slot convention of the maps.
fn child<P: Copy>(l: Letter, t: &Tri<P>, mid: &impl Fn(&P, &P) -> P) -> Tri<P> {
    let [a, b, c] = t;
    let (ma, mb, mc) = (mid(b, c), mid(c, a), mid(a, b));
    match l {
        Letter::A => [*a, mc, mb],
        Letter::B => [mc, *b, ma],
        Letter::C => [mb, ma, *c],
        Letter::M => [ma, mb, mc],
    }
}

struct Canvas {
    size: f64,
    out: String,
}

impl Canvas {
    fn point(&mut self, (x, y): (f64, f64)) {
        let (px, py) = ((x + 1.0) / 2.0 * self.size, (1.0 - y) / 2.0 * self.size);
        let _ = write!(self.out, "{px:.10},{py:.10} ");
    }

    fn polygon(&mut self, class: &str, address: &str, style: &str, pts: &[(f64, f64)]) {
        let _ = write!(
            self.out,
            "<polygon class=\"{class}\" data-address=\"{address}\" {style} points=\""
        );
        for &p in pts {
            self.point(p);
        }
        if self.out.ends_with(' ') {
            self.out.pop();
        }
        self.out.push_str("\"/>\n");
    }
}

fn word_string(w: &[Letter]) -> String {
    w.iter().map(|l| l.as_char()).collect()
}

fn fill_style(colour: &str) -> String {
    format!("fill=\"{colour}\" fill-opacity=\"0.55\" stroke=\"#222\" stroke-width=\"0.5\"")
}

fn draw<P: Copy>(
    spec: &RenderSpec,
    root: Tri<P>,
    mid: impl Fn(&P, &P) -> P,
    outline: impl Fn(&Tri<P>, usize) -> Vec<(f64, f64)>,
    canvas: &mut Canvas,
) {
    match &spec.mode {
        RenderMode::Depth(d) => {
            let mut cells: Vec<(Vec<Letter>, Tri<P>)> = vec![(Vec::new(), root)];
            for _ in 0..*d {
                cells = cells
                    .into_iter()
                    .flat_map(|(w, t)| {
                        Letter::ALL.map(|l| {
                            let mut w = w.clone();
                            w.push(l);
                            (w, child(l, &t, &mid))
                        })
                    })
                    .collect();
            }
            if *d > 0 {
                for (w, t) in &cells {
                    let colour = &spec.palette[letter_index(*w.last().expect("nonempty"))];
                    canvas.polygon(
                        "cell",
                        &word_string(w),
                        &fill_style(colour),
                        &outline(t, *d),
                    );
                }
            }
        }
        RenderMode::Word(word) => {
            let mut t = root;
            for (k, &l) in word.iter().enumerate() {
                t = child(l, &t, &mid);
                let colour = &spec.palette[letter_index(l)];
                let addr = word_string(&word[..=k]);
                if k + 1 == word.len() {
                    canvas.polygon(
                        "cell final",
                        &addr,
                        &fill_style(colour),
                        &outline(&t, k + 1),
                    );
                } else {
                    let style = format!("fill=\"none\" stroke=\"{colour}\" stroke-width=\"1\"");
                    canvas.polygon("cell", &addr, &style, &outline(&t, k + 1));
                }
            }
        }
    }
    canvas.polygon(
        "triangle",
        "",
        "fill=\"none\" stroke=\"#000\" stroke-width=\"2\"",
        &outline(&root, 0),
    );
}

fn letter_index(l: Letter) -> usize {
    l.slot().unwrap_or(3)
}

/// Draw a shape. Depth mode is limited to [`MAX_RENDER_DEPTH`].
pub fn render_svg(shape: &ShapeRecord, spec: &RenderSpec) -> Result<String> {
    if let RenderMode::Depth(d) = spec.mode {
        if d > MAX_RENDER_DEPTH {
            return Err(Error::DepthLimit {
                depth: d,
                max: MAX_RENDER_DEPTH,
            });
        }
    }
    let size = spec.size as f64;
    let mut canvas = Canvas {
        size,
        out: String::new(),
    };
    let _ = writeln!(
        canvas.out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        spec.size
    );
    match shape.edges {
        Some(e) => {
            let half = size / 2.0;
            let _ = writeln!(
                canvas.out,
                "<circle class=\"disk\" cx=\"{half}\" cy=\"{half}\" r=\"{half}\" fill=\"#f7f7f7\" stroke=\"#888\"/>"
            );
            let t = plane_model::place_centered(&e)?;
            let model = spec.model;
            let base = spec.arc_samples.max(1);
            draw(
                spec,
                t.vertices(),
                plane_model::midpoint,
                |t: &Tri<HPoint>, depth| {
                    let n = match model {
                        DiskModel::Klein => 1,
                        DiskModel::Poincare => (base >> depth.min(31)).max(1),
                    };
                    let mut pts = Vec::with_capacity(3 * n);
                    for k in 0..3 {
                        let (u, v) = (&t[k], &t[(k + 1) % 3]);
                        for i in 0..n {
                            let p = plane_model::lerp_geodesic(u, v, i as f64 / n as f64);
                            pts.push(plane_model::to_disk(&p, model));
                        }
                    }
                    pts
                },
                &mut canvas,
            );
        }
        None => {
            let [a, b, c] = shape.angles.0;
            // law of sines with |AB| = 1
            let side_b = b.sin() / c.sin();
            let raw = [(0.0, 0.0), (1.0, 0.0), (side_b * a.cos(), side_b * a.sin())];
            let (cx, cy) = (
                raw.iter().map(|p| p.0).sum::<f64>() / 3.0,
                raw.iter().map(|p| p.1).sum::<f64>() / 3.0,
            );
            let r = raw
                .iter()
                .map(|p| ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt())
                .fold(0.0, f64::max);
            let k = 0.9 / r;
            let root = raw.map(|p| ((p.0 - cx) * k, (p.1 - cy) * k));
            draw(
                spec,
                root,
                |p: &(f64, f64), q: &(f64, f64)| ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0),
                |t: &Tri<(f64, f64)>, _| t.to_vec(),
                &mut canvas,
            );
        }
    }
    canvas.out.push_str("</svg>\n");
    Ok(canvas.out)
}

/// `(class, address, canvas points)` of one drawn polygon.
pub type ParsedPolygon = (String, String, Vec<(f64, f64)>);

/// Read back every polygon of a rendered SVG.
pub fn parse_polygons(svg: &str) -> Vec<ParsedPolygon> {
    let attr = |line: &str, name: &str| -> Option<String> {
        let key = format!("{name}=\"");
        let start = line.find(&key)? + key.len();
        let len = line[start..].find('"')?;
        Some(line[start..start + len].to_owned())
    };
    svg.lines()
        .filter(|l| l.starts_with("<polygon"))
        .filter_map(|l| {
            let pts = attr(l, "points")?
                .split_whitespace()
                .filter_map(|p| {
                    let (x, y) = p.split_once(',')?;
                    Some((x.parse().ok()?, y.parse().ok()?))
                })
                .collect();
            Some((attr(l, "class")?, attr(l, "data-address")?, pts))
        })
        .collect()
}

/// Inverse of the canvas mapping.
pub fn canvas_to_disk((px, py): (f64, f64), size: f64) -> (f64, f64) {
    (2.0 * px / size - 1.0, 1.0 - 2.0 * py / size)
}
