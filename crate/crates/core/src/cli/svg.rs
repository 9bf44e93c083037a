//! Standalone SVG 1.1 figures. Coordinates are printed with four decimals so
//! the bytes depend only on the inputs.

use crate::fibers::{reduced_curve, FiberError, FiberSpec};
use crate::framing::{zero_section_plg, DiskChartPoint};
use crate::index::IndexReport;
use crate::profile::P2;
use crate::surface::OrbitSurface;
use crate::surgery::LaDiskCandidate;
use std::f64::consts::PI;
use std::fmt::Write as _;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const MAX_POINTS_PER_ARC: usize = 400;
const POSITIVE: &str = "#c0392b";
const NEGATIVE: &str = "#2471a3";
const NEUTRAL: &str = "#555555";

/// Maps data coordinates to the square canvas, `y` up.
struct View {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl View {
    fn fit(points: impl Iterator<Item = P2>) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() {
            lo = [-1.0, -1.0];
            hi = [1.0, 1.0];
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        View {
            x0: lo[0] - 0.5 * (span - (hi[0] - lo[0])),
            y0: lo[1] - 0.5 * (span - (hi[1] - lo[1])),
            scale,
        }
    }

    fn px(&self, p: P2) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.x0) * self.scale,
            SIZE - MARGIN - (p[1] - self.y0) * self.scale,
        )
    }
}

fn open(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn polyline(out: &mut String, v: &View, pts: &[P2], stroke: &str, width: f64, extra: &str) {
    let step = pts.len().div_ceil(MAX_POINTS_PER_ARC).max(1);
    let mut d = String::new();
    let mut idx: Vec<usize> = (0..pts.len()).step_by(step).collect();
    if idx.last() != Some(&(pts.len() - 1)) {
        idx.push(pts.len() - 1);
    }
    for i in idx {
        let (x, y) = v.px(pts[i]);
        let _ = write!(d, "{x:.4},{y:.4} ");
    }
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>"#,
        d.trim_end()
    );
}

fn axes(out: &mut String, v: &View) {
    let (ox, oy) = v.px([0.0, 0.0]);
    let _ = writeln!(
        out,
        r##"<g stroke="#cccccc" stroke-width="0.8"><line x1="0" y1="{oy:.4}" x2="{SIZE}" y2="{oy:.4}"/><line x1="{ox:.4}" y1="0" x2="{ox:.4}" y2="{SIZE}"/></g>"##
    );
}

/// The profile plane: arcs coloured by the parity of their crossing domain
/// relative to the reference, the `g_pi` image dashed, la-disk segments.
pub fn profile_svg(
    title: &str,
    s: &OrbitSurface,
    index: Option<&IndexReport>,
    candidates: &[LaDiskCandidate],
    reference: Option<P2>,
) -> String {
    let arcs = &s.profile.arcs;
    let v = View::fit(
        arcs.iter()
            .flat_map(|a| a.samples.iter().flat_map(|p| [*p, [-p[0], -p[1]]]))
            .chain(std::iter::once([0.0, 0.0])),
    );
    let mut out = open(title);
    axes(&mut out, &v);
    for a in arcs {
        let neg: Vec<P2> = a.samples.iter().map(|p| [-p[0], -p[1]]).collect();
        polyline(
            &mut out,
            &v,
            &neg,
            "#aaaaaa",
            1.0,
            r#" stroke-dasharray="4 3""#,
        );
    }
    for (i, a) in arcs.iter().enumerate() {
        let colour = index
            .and_then(|r| r.domains.iter().find(|d| d.id == s.domain_of_arc(i)))
            .map_or(NEUTRAL, |d| if d.epsilon > 0 { POSITIVE } else { NEGATIVE });
        polyline(&mut out, &v, &a.samples, colour, 2.2, "");
    }
    for c in candidates {
        let (ox, oy) = v.px([0.0, 0.0]);
        let (px, py) = v.px(c.point);
        let colour = if c.stable { "#1e8449" } else { "#999999" };
        let _ = writeln!(
            out,
            r#"<line x1="{ox:.4}" y1="{oy:.4}" x2="{px:.4}" y2="{py:.4}" stroke="{colour}" stroke-width="1.5"/>"#
        );
    }
    if let Some(q) = reference {
        let (x, y) = v.px(q);
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.4}" cy="{y:.4}" r="4" fill="#000000"/>"##
        );
    }
    let (ox, oy) = v.px([0.0, 0.0]);
    let _ = writeln!(
        out,
        r##"<circle cx="{ox:.4}" cy="{oy:.4}" r="2.5" fill="#000000"/>"##
    );
    if let Some(r) = index {
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{:.4}" font-family="monospace" font-size="13">mu2 = {}  y = {}</text>"#,
            MARGIN - 6.0,
            r.mu2,
            r.y
        );
    }
    out.push_str("</svg>\n");
    out
}

/// The reduced curve `P^2 = R(rho)` of a fiber with `a != 0`.
pub fn reduced_svg(title: &str, f: &FiberSpec) -> Result<String, FiberError> {
    let pts = reduced_curve(f, 720)?;
    let v = View::fit(pts.iter().copied().chain(std::iter::once([0.0, 0.0])));
    let mut out = open(title);
    axes(&mut out, &v);
    polyline(&mut out, &v, &pts, NEUTRAL, 2.2, "");
    out.push_str("</svg>\n");
    Ok(out)
}

/// The disk chart of the zero-section framing: cells shaded by the height of
/// the PLG image, with the loci `Gamma_s` (pairs of orthogonal diameters).
pub fn disk_chart_svg(title: &str, cells: usize, s_values: &[f64]) -> String {
    let v = View::fit([[-1.0, -1.0], [1.0, 1.0]].into_iter());
    let mut out = open(title);
    let h = 2.0 / cells as f64;
    let w = h * v.scale;
    for i in 0..cells {
        for j in 0..cells {
            let x = -1.0 + (i as f64 + 0.5) * h;
            let y = -1.0 + (j as f64 + 0.5) * h;
            if x * x + y * y >= 1.0 {
                continue;
            }
            let z = zero_section_plg(&DiskChartPoint::new(x, y))[2];
            let level = (127.5 * (1.0 + z)).round().clamp(0.0, 255.0) as u8;
            let (px, py) = v.px([x - 0.5 * h, y + 0.5 * h]);
            let _ = writeln!(
                out,
                r##"<rect x="{px:.4}" y="{py:.4}" width="{w:.4}" height="{w:.4}" fill="#{level:02x}{level:02x}{:02x}"/>"##,
                255 - level / 2
            );
        }
    }
    let (cx, cy) = v.px([0.0, 0.0]);
    let _ = writeln!(
        out,
        r#"<circle cx="{cx:.4}" cy="{cy:.4}" r="{:.4}" fill="none" stroke="{NEUTRAL}" stroke-width="1.5"/>"#,
        v.scale
    );
    for &s in s_values {
        for psi in [-s, -s + 0.5 * PI] {
            let (a, b) = (v.px([psi.cos(), psi.sin()]), v.px([-psi.cos(), -psi.sin()]));
            let _ = writeln!(
                out,
                r#"<line x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="{POSITIVE}" stroke-width="1.5"/>"#,
                a.0, a.1, b.0, b.1
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Builtin;
    use crate::surgery::candidate_disks;

    #[test]
    fn figures_are_deterministic_and_small() {
        let s = OrbitSurface::builtin(&Builtin::Chekanov { r: 1.0 }).unwrap();
        let c = candidate_disks(&s);
        let a = profile_svg("chekanov", &s, None, &c, None);
        assert_eq!(a, profile_svg("chekanov", &s, None, &c, None));
        assert!(a.len() < 2 << 20);
        assert!(a.starts_with("<?xml") && a.ends_with("</svg>\n"));
        let d = disk_chart_svg("tss", 48, &[0.3]);
        assert_eq!(d.matches("<line").count(), 2);
        assert!(d.len() < 2 << 20);
    }
}
