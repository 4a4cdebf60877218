use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use super::label::LabeledRegion;
use crate::geometry::{polygon_vertices, HPolytope, LpKernel, Tolerances};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    RegionId,
    ClassLabel,
    BoundaryBand,
}

impl std::str::FromStr for RenderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "region_id" => Ok(Self::RegionId),
            "class_label" => Ok(Self::ClassLabel),
            "boundary_band" => Ok(Self::BoundaryBand),
            other => Err(Error::Invalid(format!("unknown render mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub mode: RenderMode,
    pub width: u32,
    pub height: u32,
    pub color_seed: u64,
    /// Half-width of the boundary band, in output units.
    pub band: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            mode: RenderMode::RegionId,
            width: 800,
            height: 800,
            color_seed: 0,
            band: 0.05,
        }
    }
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

fn region_color(key: &str, seed: u64) -> String {
    let mut h = DefaultHasher::new();
    seed.hash(&mut h);
    key.hash(&mut h);
    let v = h.finish();
    // Keep channels away from black and white so borders stay visible.
    let ch = |shift: u32| 48 + ((v >> shift) & 0xff) * 176 / 255;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(8), ch(16))
}

fn points_attr(vertices: &[[f64; 2]]) -> String {
    let mut s = String::new();
    for (i, v) in vertices.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", v[0], v[1]);
    }
    s
}

/// Renders 2D regions as an SVG document. Each region becomes one
/// `<polygon class="region">` whose points are in data coordinates; a
/// single group transform maps data space onto the canvas with y up.
pub fn render_svg_2d(labeled: &[LabeledRegion], spec: &RenderSpec) -> Result<String, Error> {
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::Invalid("canvas size must be positive".into()));
    }
    if !(spec.band >= 0.0 && spec.band.is_finite()) {
        return Err(Error::Invalid("band must be finite and non-negative".into()));
    }
    if let Some(r) = labeled.iter().find(|l| l.region.polytope.dim() != 2) {
        return Err(Error::NotTwoDimensional(r.region.polytope.dim()));
    }
    let kernel = LpKernel::new(Tolerances::default());
    let polygons: Vec<Vec<[f64; 2]>> = labeled
        .iter()
        .map(|l| kernel.enumerate_vertices_2d(&l.region.polytope))
        .collect::<Result<_, _>>()?;

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in polygons.iter().flatten() {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    if polygons.is_empty() {
        lo = [0.0; 2];
        hi = [1.0; 2];
    }
    let (w, h) = (spec.width as f64, spec.height as f64);
    let sx = w / (hi[0] - lo[0]).max(f64::MIN_POSITIVE);
    let sy = h / (hi[1] - lo[1]).max(f64::MIN_POSITIVE);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(
        svg,
        r##"<g transform="matrix({} 0 0 {} {} {})" stroke="#202020" stroke-width="1" vector-effect="non-scaling-stroke">"##,
        sx,
        -sy,
        -lo[0] * sx,
        h + lo[1] * sy
    );
    for (l, poly) in labeled.iter().zip(&polygons) {
        let key = l.region.sign_key.to_bitstring();
        let fill = match spec.mode {
            RenderMode::RegionId => region_color(&key, spec.color_seed),
            RenderMode::ClassLabel | RenderMode::BoundaryBand => PALETTE[l.label % PALETTE.len()].to_string(),
        };
        let _ = writeln!(
            svg,
            r#"<polygon class="region" data-key="{}" data-label="{}" fill="{}" vector-effect="non-scaling-stroke" points="{}"/>"#,
            key,
            l.label,
            fill,
            points_attr(poly)
        );
    }
    if spec.mode == RenderMode::BoundaryBand {
        for l in labeled {
            for band in band_polygons(&kernel, l, spec.band)? {
                let _ = writeln!(
                    svg,
                    r##"<polygon class="band" fill="#ffffff" stroke="none" points="{}"/>"##,
                    points_attr(&band)
                );
            }
        }
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

/// Parts of the region where the winning class is within `band` of another.
fn band_polygons(kernel: &LpKernel, l: &LabeledRegion, band: f64) -> Result<Vec<Vec<[f64; 2]>>, Error> {
    let classes = l.output_affine.rows();
    let eps_dim = kernel.tolerances().eps_dim;
    let mut out = Vec::new();
    for j in (0..classes).filter(|&j| j != l.label) {
        let Some(h) = l.decision_boundary(l.label, j) else {
            continue;
        };
        let mut slab: HPolytope = l.region.polytope.clone();
        let mut upper = h.negative_side();
        upper.offset += band;
        let mut lower = h.positive_side();
        lower.offset += band;
        slab.push(upper)?;
        slab.push(lower)?;
        if kernel.inscribed_ball(&slab, eps_dim)?.is_some() {
            out.push(polygon_vertices(slab.halfspaces(), kernel.tolerances().eps_feas));
        }
    }
    Ok(out)
}
