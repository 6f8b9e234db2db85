use medax_core::curve::{BranchGerm, PlaneCurveGerm};
use medax_core::dist::{DistanceField, ScanWorkspace};
use medax_core::geom::Point2;
use medax_core::medial::{grid_medial_scan, GridScanConfig};

#[test]
fn debug_fine_window_detection() {
    let curve =
        PlaneCurveGerm::new(vec![BranchGerm::power(1.0, 3, 2, 0.0, 1.0).unwrap()]).unwrap();
    let field = DistanceField::new(&curve, 1e-12).unwrap();
    let mut ws = ScanWorkspace::new();

    let y = 3e-4;
    let x_axis = -0.375 * y * y;
    eprintln!("axis at x ~ {x_axis:.3e}, t* ~ {:.3e}", 2.25 * y * y);
    for x in [
        x_axis - 2e-6,
        x_axis - 2e-7,
        x_axis,
        x_axis + 2e-7,
        x_axis + 2e-6,
    ] {
        let q = Point2::new(x, y);
        let c = field.coarse_probe(q, &mut ws);
        eprintln!(
            "x={x:+.6e}: d={:.6e} slack={:.2e} branch={} t_best={:.6e} second_gap={:.3e}",
            c.d_estimate, c.d_slack, c.branch, c.t_best, c.second_gap
        );
        let det = field.closest_with_window(q, 1e-5);
        for b in &det.basins {
            eprintln!("    basin t={:.6e} h={:+.6e} d={:.9e}", b.t, b.h, b.distance);
        }
        for cl in &det.set.clusters {
            eprintln!(
                "    cluster branch={} t={:.6e} point=({:.3e},{:.3e})",
                cl.branch, cl.parameter, cl.point.x, cl.point.y
            );
        }
    }

    // the scan itself at the finest window
    let cfg = GridScanConfig::new(0.5 * 0.5f64.powi(10), 512);
    let samples = grid_medial_scan(&curve, &cfg).unwrap();
    eprintln!("finest-window scan: {} samples", samples.len());
    let min_norm = samples
        .iter()
        .map(|s| s.point.norm())
        .fold(f64::INFINITY, f64::min);
    eprintln!("min norm {min_norm:.6e}");
}
