//! Static SVG plots of a scan: curve branches, medial samples, predicted
//! fan directions.

use std::fmt::Write as _;

use medax_core::{DirectionFan, MedialSample, PlaneCurveGerm};

const CURVE_COLOR: &str = "#1f4e79";
const SAMPLE_COLOR: &str = "#c0392b";
const FAN_COLOR: &str = "#27ae60";

fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}

/// Renders an SVG 1.1 document whose viewBox spans the analysis window.
/// The y axis is flipped so the mathematical orientation is preserved.
pub fn render_scan(
    curve: &PlaneCurveGerm,
    samples: &[MedialSample],
    fan: &DirectionFan,
    window: f64,
) -> String {
    let w = window;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="640" height="640">"#,
        fmt(-w),
        fmt(-w),
        fmt(2.0 * w),
        fmt(2.0 * w)
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(
        out,
        r##"<circle cx="0" cy="0" r="{}" fill="none" stroke="#bbbbbb" stroke-width="{}"/>"##,
        fmt(w),
        fmt(w / 320.0)
    );

    // branches, sampled out to the window boundary
    for branch in curve.branches() {
        let mut points = Vec::new();
        let n = 512;
        for i in 0..=n {
            let t = branch.domain_length() * (i as f64 / n as f64).powi(2);
            let p = branch.eval(t).expect("parameter within domain");
            if p.norm() > 1.45 * w {
                break;
            }
            points.push(format!("{},{}", fmt(p.x), fmt(p.y)));
        }
        if points.len() >= 2 {
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="{}" points="{}"/>"#,
                CURVE_COLOR,
                fmt(w / 160.0),
                points.join(" ")
            );
        }
    }

    // predicted fan directions as rays from the origin
    for dir in &fan.directions {
        let tip = dir.direction * w;
        let _ = writeln!(
            out,
            r#"<line x1="0" y1="0" x2="{}" y2="{}" stroke="{}" stroke-width="{}" stroke-dasharray="{},{}"/>"#,
            fmt(tip.x),
            fmt(tip.y),
            FAN_COLOR,
            fmt(w / 200.0),
            fmt(w / 40.0),
            fmt(w / 80.0)
        );
    }

    for s in samples {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}" fill-opacity="0.55"/>"#,
            fmt(s.point.x),
            fmt(s.point.y),
            fmt(w / 400.0),
            SAMPLE_COLOR
        );
    }

    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use medax_core::curve::BranchGerm;
    use medax_core::germ::DirectionFan as Fan;

    #[test]
    fn renders_well_formed_document() {
        let curve = PlaneCurveGerm::new(vec![
            BranchGerm::power(1.0, 3, 2, 0.0, 1.0).unwrap(),
        ])
        .unwrap();
        let svg = render_scan(&curve, &[], &Fan::empty(), 0.5);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
    }
}
