use medax_core::curve::{BranchGerm, PlaneCurveGerm};
use medax_core::dist::DistanceField;
use medax_core::geom::Point2;

#[test]
fn debug_hump_near_axis() {
    let curve =
        PlaneCurveGerm::new(vec![BranchGerm::power(1.0, 3, 2, 0.0, 1.0).unwrap()]).unwrap();
    let field = DistanceField::new(&curve, 1e-12).unwrap();
    let branch = curve.branch(0);

    let y = 2.7615e-4;
    let x_axis = -0.375 * y * y;
    for dx in [-2e-9, -1e-9, 0.0, 1e-9, 2e-9] {
        let q = Point2::new(x_axis + dx, y);
        let det = field.closest_with_window(q, 0.0);
        eprint!(
            "x={:+.6e}: clusters={} basins=[",
            q.x,
            det.set.clusters.len()
        );
        for b in &det.basins {
            eprint!(" (t={:.4e}, h={:+.4e})", b.t, b.h);
        }
        eprintln!(" ]");
    }

    // manual hump: max over the arc (0, t*) of h(t) = ‖γ(t)−q‖² − ‖q‖²
    let q = Point2::new(x_axis, y);
    let t_star = 2.25 * y * y;
    let mut hump = f64::NEG_INFINITY;
    for i in 1..2000 {
        let t = t_star * i as f64 / 2000.0;
        let p = branch.eval(t).unwrap();
        let h = (p - q).norm_sq() - q.norm_sq();
        hump = hump.max(h);
    }
    let b = branch.eval(t_star).unwrap();
    eprintln!(
        "t* = {t_star:.4e}, ‖b‖² = {:.4e}, hump = {hump:.4e}, threshold = {:.4e}",
        b.norm_sq(),
        1e-10 * b.norm_sq()
    );
}
