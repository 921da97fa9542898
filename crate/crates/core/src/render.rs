//! SVG 1.1 drawings of partitions: the unit square at 1000 × 1000 px with
//! every mod-1 copy of each region that meets it.

use std::fmt::Write as _;

use crate::region::{Partition, Region};
use crate::scalar::Real;

pub const SIZE: f64 = 1000.0;

/// Fill colors, cycled by region index.
pub const PALETTE: [&str; 25] = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c",
    "#fabebe", "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1",
    "#000075", "#808080", "#ffffff", "#000000", "#a9a9a9", "#ff7f50", "#6495ed",
];

fn px(x: f64) -> f64 {
    x * SIZE
}

/// Plane `y` grows upward; SVG `y` grows downward.
fn py(y: f64) -> f64 {
    (1.0 - y) * SIZE
}

pub fn render_svg<T: Real>(p: &Partition<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="1000" height="1000" viewBox="0 0 1000 1000">"#
    );
    let _ = writeln!(out, r#"<title>m={} tau={:.6}</title>"#, p.m, p.tau.as_f64());
    let _ = writeln!(out, r#"<defs><clipPath id="unit"><rect x="0" y="0" width="1000" height="1000"/></clipPath></defs>"#);
    let _ = writeln!(out, r##"<rect x="0" y="0" width="1000" height="1000" fill="#ffffff"/>"##);
    let _ = writeln!(out, r#"<g clip-path="url(#unit)" stroke="black" stroke-width="1">"#);
    for (i, region) in p.regions.iter().enumerate() {
        let fill = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, r#"<g id="region-{i}" fill="{fill}">"#);
        match region {
            Region::Polygon(poly) => {
                let verts: Vec<[f64; 2]> = poly.vertices().iter().map(|v| [v[0].as_f64(), v[1].as_f64()]).collect();
                let (lo, hi) = poly.bbox();
                let (lo, hi) = ([lo[0].as_f64(), lo[1].as_f64()], [hi[0].as_f64(), hi[1].as_f64()]);
                for sx in -2i32..=2 {
                    for sy in -2i32..=2 {
                        let (dx, dy) = (f64::from(sx), f64::from(sy));
                        if hi[0] + dx <= 0.0 || lo[0] + dx >= 1.0 || hi[1] + dy <= 0.0 || lo[1] + dy >= 1.0 {
                            continue;
                        }
                        let pts: Vec<String> = verts
                            .iter()
                            .map(|v| format!("{:.3},{:.3}", px(v[0] + dx), py(v[1] + dy)))
                            .collect();
                        let _ = writeln!(out, r#"<polygon points="{}"/>"#, pts.join(" "));
                    }
                }
            }
            Region::VerticalStrip { lo, hi } => {
                let (lo, hi) = (lo.as_f64(), hi.as_f64());
                let _ = writeln!(out, r#"<rect x="{:.3}" y="0" width="{:.3}" height="1000"/>"#, px(lo), px(hi - lo));
            }
            Region::HorizontalStrip { lo, hi } => {
                let (lo, hi) = (lo.as_f64(), hi.as_f64());
                let _ = writeln!(out, r#"<rect x="0" y="{:.3}" width="1000" height="{:.3}"/>"#, py(hi), px(hi - lo));
            }
            Region::Pixels(set) => {
                let side = 1.0 / f64::from(set.grid_size());
                for &(i, j) in set.cells() {
                    let (x, y) = (f64::from(i) * side, f64::from(j) * side);
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                        px(x),
                        py(y + side),
                        px(side),
                        px(side)
                    );
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<rect x="0" y="0" width="1000" height="1000" fill="none" stroke="black" stroke-width="2"/>"#);
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::stripe_partition;
    use crate::region::LiftedPolygon;

    #[test]
    fn deterministic_and_well_formed() {
        let p = stripe_partition::<f64>(3);
        let a = render_svg(&p);
        assert_eq!(a, render_svg(&p));
        assert!(a.starts_with("<?xml"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<g id=\"region-").count(), 3);
        assert!(a.contains(PALETTE[2]));
    }

    #[test]
    fn wrapped_polygon_draws_every_copy() {
        let poly = LiftedPolygon::new(vec![[0.75, 0.75], [1.25, 0.75], [1.25, 1.25], [0.75, 1.25]]).unwrap();
        let p = Partition::new(vec![Region::Polygon(poly)], 1.0, "corner");
        let svg = render_svg(&p);
        assert_eq!(svg.matches("<polygon").count(), 4);
    }
}
