//! Numerical verification: estimate tangent cones and branch counts from
//! medial samples and compare them against the symbolic predictions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::curve::PlaneCurveGerm;
use crate::dist::DistanceField;
use crate::geom::{angular_separation, Point2};
use crate::germ::{self, DirectionFan, GermError, RegionReport, SuperquadraticVerdict};
use crate::medial::{
    self, clearance_with_field, GridScanConfig, MedialError, MedialSample, ReachVerdict,
    RegionGeometry, CLEARANCE_CERT, RESIDUAL_CERT,
};
use crate::scalar::Real;

/// Angular merge threshold inside an annulus and for tracking clusters
/// across annuli, degrees.
pub const ANGULAR_MERGE_DEG: f64 = 5.0;
/// A direction cluster counts as persistent when present in at least this
/// many consecutive annuli including the innermost populated one.
pub const PERSISTENCE_ANNULI: usize = 3;
/// Minimum samples for an annulus to be used by the estimator.
pub const MIN_ANNULUS_SAMPLES: usize = 10;
/// Ratio-bound slack.
pub const RATIO_BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Medial(#[from] MedialError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// Directions of medial samples inside one annulus, merged into angular
/// clusters.
#[derive(Debug, Clone)]
pub struct AnnulusDirectionEstimate<T> {
    pub r_inner: T,
    pub r_outer: T,
    pub clusters: Vec<DirectionCluster<T>>,
    pub sample_count: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct DirectionCluster<T> {
    pub mean: Point2<T>,
    pub spread_deg: T,
    pub count: usize,
}

/// Merges sample directions inside the annulus by the 5° angular threshold.
pub fn cluster_annulus<T: Real>(
    r_inner: T,
    r_outer: T,
    directions: &[Point2<T>],
) -> AnnulusDirectionEstimate<T> {
    let mut angles: Vec<T> = directions.iter().map(|d| d.angle()).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = angles.len();
    let mut clusters = Vec::new();
    if n > 0 {
        let tau = T::of(std::f64::consts::TAU);
        let merge = T::of(ANGULAR_MERGE_DEG.to_radians());
        // break the circle at the widest gap, then sweep
        let mut start = 0;
        let mut widest = angles[0] + tau - angles[n - 1];
        for i in 1..n {
            let gap = angles[i] - angles[i - 1];
            if gap > widest {
                widest = gap;
                start = i;
            }
        }
        let mut group: Vec<T> = Vec::new();
        let flush = |group: &mut Vec<T>, clusters: &mut Vec<DirectionCluster<T>>| {
            if group.is_empty() {
                return;
            }
            let dirs: Vec<Point2<T>> = group.iter().map(|&a| Point2::from_angle(a)).collect();
            let mean = crate::geom::circular_mean(&dirs).unwrap_or(dirs[0]);
            let mean_angle = mean.angle();
            let spread = group
                .iter()
                .map(|&a| angular_separation(a, mean_angle))
                .fold(T::zero(), T::max);
            clusters.push(DirectionCluster {
                mean,
                spread_deg: spread * T::of(180.0 / std::f64::consts::PI),
                count: group.len(),
            });
            group.clear();
        };
        for idx in 0..n {
            let a = angles[(start + idx) % n];
            match group.last() {
                Some(&prev) => {
                    let gap = crate::geom::ccw_delta(prev, a);
                    if gap <= merge {
                        group.push(a);
                    } else {
                        flush(&mut group, &mut clusters);
                        group.push(a);
                    }
                }
                None => group.push(a),
            }
        }
        flush(&mut group, &mut clusters);
    }
    AnnulusDirectionEstimate {
        r_inner,
        r_outer,
        clusters,
        sample_count: n,
    }
}

/// Tracks direction clusters across shrinking annuli (outermost first) and
/// reports, per persistent cluster, the innermost-annulus mean direction as
/// the `r → 0` estimate. Annuli with fewer than 10 samples are skipped.
pub fn estimate_tangent_cone<T: Real>(
    annuli: &[AnnulusDirectionEstimate<T>],
) -> DirectionFan<T> {
    let used: Vec<&AnnulusDirectionEstimate<T>> = annuli
        .iter()
        .filter(|a| a.sample_count >= MIN_ANNULUS_SAMPLES)
        .collect();
    if used.is_empty() {
        return DirectionFan::empty();
    }
    let merge = T::of(ANGULAR_MERGE_DEG.to_radians());
    // chains[c] = (current mean angle, consecutive length, alive)
    let mut chains: Vec<(T, usize, bool)> = Vec::new();
    for (level, annulus) in used.iter().enumerate() {
        for chain in chains.iter_mut() {
            chain.2 = false;
        }
        for cluster in &annulus.clusters {
            let a = cluster.mean.angle();
            let matched = chains
                .iter_mut()
                .filter(|(angle, _, alive)| !alive && angular_separation(*angle, a) <= merge)
                .min_by(|(x, _, _), (y, _, _)| {
                    angular_separation(*x, a)
                        .partial_cmp(&angular_separation(*y, a))
                        .unwrap()
                });
            match matched {
                Some(chain) => {
                    chain.0 = a;
                    chain.1 += 1;
                    chain.2 = true;
                }
                None => chains.push((a, 1, true)),
            }
        }
        // chains broken before reaching the innermost annulus are dropped
        if level + 1 < used.len() {
            chains.retain(|&(_, _, alive)| alive);
        }
    }
    let need = PERSISTENCE_ANNULI.min(used.len());
    let mut angles: Vec<T> = chains
        .iter()
        .filter(|&&(_, len, alive)| alive && len >= need)
        .map(|&(a, _, _)| a)
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    DirectionFan::from_observed_angles(&angles)
}

/// Counts 8-adjacency connected components of the samples' grid cells that
/// intersect the annulus `[r_inner, r_outer]`.
pub fn estimate_branch_count<T: Real>(
    samples: &[MedialSample<T>],
    r_inner: T,
    r_outer: T,
) -> usize {
    let mut cells: BTreeMap<(i64, i64), bool> = BTreeMap::new();
    for s in samples {
        let Some(cell) = s.cell else { continue };
        let norm = s.point.norm();
        let in_annulus = norm >= r_inner && norm <= r_outer;
        *cells.entry(cell).or_insert(false) |= in_annulus;
    }
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut components = 0;
    for (&cell, _) in cells.iter() {
        if seen.contains(&cell) {
            continue;
        }
        // flood fill
        let mut stack = vec![cell];
        let mut touches = false;
        seen.insert(cell);
        while let Some((cx, cy)) = stack.pop() {
            if cells[&(cx, cy)] {
                touches = true;
            }
            for dx in -1..=1i64 {
                for dy in -1..=1i64 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let nb = (cx + dx, cy + dy);
                    if cells.contains_key(&nb) && seen.insert(nb) {
                        stack.push(nb);
                    }
                }
            }
        }
        if touches {
            components += 1;
        }
    }
    components
}

/// Outcome of matching a predicted against an observed fan.
#[derive(Debug, Clone)]
pub struct FanComparison<T> {
    /// `(predicted index, observed index, angular error in degrees)`.
    pub matches: Vec<(usize, usize, T)>,
    pub unmatched_predicted: Vec<usize>,
    pub unmatched_observed: Vec<usize>,
    pub pass: bool,
}

impl<T: Real> FanComparison<T> {
    pub fn max_error_deg(&self) -> Option<T> {
        self.matches
            .iter()
            .map(|&(_, _, e)| e)
            .max_by(|a, b| a.partial_cmp(b).unwrap())
    }
}

/// Greedy closest-pair angular assignment between two fans; passes iff
/// every direction on both sides is matched within `tol_deg`.
pub fn compare_fans<T: Real>(
    predicted: &DirectionFan<T>,
    observed: &DirectionFan<T>,
    tol_deg: T,
) -> FanComparison<T> {
    let to_deg = T::of(180.0 / std::f64::consts::PI);
    let pred: Vec<T> = predicted
        .directions
        .iter()
        .map(|d| d.direction.angle())
        .collect();
    let obs: Vec<T> = observed
        .directions
        .iter()
        .map(|d| d.direction.angle())
        .collect();
    let mut free_p: Vec<usize> = (0..pred.len()).collect();
    let mut free_o: Vec<usize> = (0..obs.len()).collect();
    let mut matches = Vec::new();
    loop {
        let mut best: Option<(usize, usize, T)> = None;
        for &pi in &free_p {
            for &oi in &free_o {
                let err = angular_separation(pred[pi], obs[oi]) * to_deg;
                if best.map_or(true, |(_, _, e)| err < e) {
                    best = Some((pi, oi, err));
                }
            }
        }
        match best {
            Some((pi, oi, err)) if err <= tol_deg => {
                matches.push((pi, oi, err));
                free_p.retain(|&x| x != pi);
                free_o.retain(|&x| x != oi);
            }
            _ => break,
        }
    }
    let pass = free_p.is_empty() && free_o.is_empty();
    FanComparison {
        matches,
        unmatched_predicted: free_p,
        unmatched_observed: free_o,
        pass,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimVerdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for ClaimVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClaimVerdict::Pass => write!(f, "pass"),
            ClaimVerdict::Fail => write!(f, "fail"),
            ClaimVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// One verified claim row of the report.
#[derive(Debug, Clone)]
pub struct Claim {
    pub id: String,
    pub predicted: String,
    pub observed: String,
    pub error: Option<f64>,
    pub verdict: ClaimVerdict,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig<T> {
    pub window_radius: T,
    pub resolution: usize,
    pub halvings: usize,
    /// Number of innermost populated annuli fed to the fan estimator.
    pub annuli: usize,
    pub tol: T,
    pub angular_tol_deg: T,
    pub probe_count: usize,
}

impl<T: Real> VerifyConfig<T> {
    pub fn for_curve(curve: &PlaneCurveGerm<T>) -> Self {
        Self {
            window_radius: curve.min_domain_length().half(),
            resolution: 512,
            halvings: medial::DEFAULT_HALVINGS,
            annuli: 8,
            tol: T::of(1e-12),
            angular_tol_deg: T::two(),
            probe_count: crate::dist::DEFAULT_PROBES,
        }
    }

    fn scan_base(&self) -> GridScanConfig<T> {
        GridScanConfig {
            window_radius: self.window_radius,
            resolution: self.resolution,
            tol: self.tol,
            probe_count: self.probe_count,
        }
    }
}

/// Full verification outcome for one curve.
#[derive(Debug, Clone)]
pub struct VerificationReport<T> {
    pub curve_label: String,
    pub branch_verdicts: Vec<SuperquadraticVerdict<T>>,
    pub regions: Vec<RegionReport<T>>,
    pub reach_predicted: Option<bool>,
    pub reach_observed: ReachVerdict,
    pub per_window: Vec<(T, Option<T>)>,
    pub contributing_observed: Vec<bool>,
    pub predicted_fan: DirectionFan<T>,
    pub observed_fan: DirectionFan<T>,
    pub annuli: Vec<AnnulusDirectionEstimate<T>>,
    pub fan_comparison: FanComparison<T>,
    pub observed_branch_count: usize,
    pub branch_count_bound: Option<usize>,
    pub max_residual: T,
    pub max_clearance_violation: T,
    pub max_ratio_margin: T,
    pub sample_total: usize,
    pub claims: Vec<Claim>,
}

impl<T: Real> VerificationReport<T> {
    pub fn overall(&self) -> ClaimVerdict {
        if self
            .claims
            .iter()
            .any(|c| c.verdict == ClaimVerdict::Inconclusive)
        {
            return ClaimVerdict::Inconclusive;
        }
        if self.claims.iter().any(|c| c.verdict == ClaimVerdict::Fail) {
            return ClaimVerdict::Fail;
        }
        ClaimVerdict::Pass
    }

    /// Plain-text rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "curve: {}", self.curve_label);
        for v in &self.branch_verdicts {
            match &v.leading {
                Some((a, e)) => {
                    let _ = writeln!(
                        out,
                        "branch {}: leading {}*t^({}/{}), superquadratic: {}",
                        v.branch,
                        a,
                        e.numer(),
                        e.denom(),
                        if v.superquadratic { "yes" } else { "no" }
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "branch {}: identically zero, superquadratic: no",
                        v.branch
                    );
                }
            }
        }
        for r in &self.regions {
            let deg = r.oriented_angle.as_f64().to_degrees();
            let _ = writeln!(
                out,
                "region D(G{}, G{}): angle {:.4} deg, predicted contribution {}, observed {}",
                r.pair.0,
                r.pair.1,
                deg,
                r.contributing_predicted,
                self.contributing_observed
                    .get(r.position)
                    .map(|c| if *c { "yes" } else { "no" })
                    .unwrap_or("-"),
            );
        }
        if let Some(p) = self.reach_predicted {
            let _ = writeln!(
                out,
                "reach: predicted {}, observed {}",
                if p { "reaches" } else { "bounded away" },
                self.reach_observed
            );
        } else {
            let _ = writeln!(out, "reach: observed {}", self.reach_observed);
        }
        for (r, m) in &self.per_window {
            match m {
                Some(m) => {
                    let _ = writeln!(
                        out,
                        "window r={:.6e}: min sample norm {:.6e}",
                        r.as_f64(),
                        m.as_f64()
                    );
                }
                None => {
                    let _ = writeln!(out, "window r={:.6e}: no samples", r.as_f64());
                }
            }
        }
        let fmt_fan = |fan: &DirectionFan<T>| -> String {
            let degs: Vec<String> = fan
                .angles_deg()
                .iter()
                .map(|d| format!("{:.3}", d.as_f64()))
                .collect();
            format!("[{}]", degs.join(", "))
        };
        let _ = writeln!(out, "predicted fan (deg): {}", fmt_fan(&self.predicted_fan));
        let _ = writeln!(out, "observed fan (deg):  {}", fmt_fan(&self.observed_fan));
        let _ = writeln!(
            out,
            "observed medial branches: {} (bound {})",
            self.observed_branch_count,
            self.branch_count_bound
                .map(|b| b.to_string())
                .unwrap_or_else(|| "-".into())
        );
        let _ = writeln!(
            out,
            "certificates over {} samples: max residual {:.3e}, max clearance violation {:.3e}, max ratio margin {:.3e}",
            self.sample_total,
            self.max_residual.as_f64(),
            self.max_clearance_violation.as_f64(),
            self.max_ratio_margin.as_f64()
        );
        let _ = writeln!(out, "claims:");
        for c in &self.claims {
            let _ = writeln!(
                out,
                "  {:<24} predicted={:<24} observed={:<24} error={:<12} verdict={}",
                c.id,
                c.predicted,
                c.observed,
                c.error.map(|e| format!("{e:.6}")).unwrap_or_else(|| "-".into()),
                c.verdict
            );
        }
        let _ = writeln!(
            out,
            "verdict: {}",
            match self.overall() {
                ClaimVerdict::Pass => "PASS",
                ClaimVerdict::Fail => "FAIL",
                ClaimVerdict::Inconclusive => "INCONCLUSIVE",
            }
        );
        out
    }

    /// CSV rendering: one row per claim.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("claim,predicted,observed,error,verdict\n");
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.id,
                c.predicted,
                c.observed,
                c.error.map(|e| format!("{e:.9}")).unwrap_or_default(),
                c.verdict
            );
        }
        out
    }
}

/// Runs the full pipeline: shrinking-window scans, certificates, annulus
/// direction estimation, symbolic prediction, and claim-by-claim
/// comparison.
pub fn run_verification<T: Real>(
    curve: &PlaneCurveGerm<T>,
    label: &str,
    cfg: &VerifyConfig<T>,
) -> Result<VerificationReport<T>, VerifyError> {
    let k = curve.branch_count();
    let base = cfg.scan_base();
    let r0 = cfg.window_radius;

    // shrinking-window scans
    let mut per_window: Vec<(T, Option<T>)> = Vec::new();
    let mut window_samples: Vec<Vec<MedialSample<T>>> = Vec::new();
    for step in 0..=cfg.halvings {
        let r = r0 * T::of(0.5f64.powi(step as i32));
        let scan_cfg = base.with_window(r, curve);
        let samples = medial::grid_medial_scan(curve, &scan_cfg)?;
        per_window.push((r, medial::min_reach_norm(&samples)));
        window_samples.push(samples);
    }
    let reach_observed = medial::reach_verdict(&per_window, r0, cfg.resolution);

    // annuli: shell [r/2, r] of each window, outermost first
    let mut annuli = Vec::new();
    for (step, samples) in window_samples.iter().enumerate() {
        let r = r0 * T::of(0.5f64.powi(step as i32));
        let r_in = r.half();
        let dirs: Vec<Point2<T>> = samples
            .iter()
            .filter(|s| {
                let n = s.point.norm();
                n >= r_in && n <= r
            })
            .filter_map(|s| s.point.unit())
            .collect();
        annuli.push(cluster_annulus(r_in, r, &dirs));
    }
    let used_start = annuli
        .iter()
        .filter(|a| a.sample_count >= MIN_ANNULUS_SAMPLES)
        .count()
        .saturating_sub(cfg.annuli);
    let estimator_annuli: Vec<AnnulusDirectionEstimate<T>> = annuli
        .iter()
        .filter(|a| a.sample_count >= MIN_ANNULUS_SAMPLES)
        .skip(used_start)
        .cloned()
        .collect();
    let observed_fan = estimate_tangent_cone(&estimator_annuli);

    // observed contribution per region: samples in the innermost annulus
    let geometry = RegionGeometry::new(curve);
    let finest = window_samples.last().expect("at least one window");
    let r_fine = per_window.last().unwrap().0;
    let mut contributing_observed = vec![false; k];
    for s in finest {
        let n = s.point.norm();
        if n >= r_fine.half() && n <= r_fine && s.counts_for_reach() {
            if let Some(pos) = geometry.locate(s.point) {
                contributing_observed[pos] = true;
            }
        }
    }

    // symbolic side
    let branch_verdicts: Vec<SuperquadraticVerdict<T>> = curve
        .branches()
        .iter()
        .enumerate()
        .map(|(i, b)| germ::classify_superquadratic(b, i))
        .collect();
    let regions = if k >= 2 {
        germ::predict_regions(curve)?
    } else {
        Vec::new()
    };
    let reach_predicted = if k == 1 {
        Some(germ::predict_reach(curve)?)
    } else {
        None
    };
    let mut claims: Vec<Claim> = Vec::new();
    let predicted_fan = match germ::predict_tangent_cone(curve, &contributing_observed) {
        Ok(fan) => fan,
        Err(GermError::ContradictoryContribution { region }) => {
            claims.push(Claim {
                id: "region-consistency".into(),
                predicted: "superquadratic delimiter for reflex region".into(),
                observed: format!("region {region} contributes without one"),
                error: None,
                verdict: ClaimVerdict::Fail,
            });
            DirectionFan::empty()
        }
        Err(e) => return Err(e.into()),
    };
    let fan_comparison = compare_fans(&predicted_fan, &observed_fan, cfg.angular_tol_deg);

    // branch count from the finest window
    let observed_branch_count = estimate_branch_count(finest, r_fine.half(), r_fine);
    let branch_count_bound = if k >= 2 {
        Some(germ::branch_count_bound(curve, &contributing_observed)?)
    } else {
        None
    };

    // certificate statistics over every emitted sample
    let field = DistanceField::new(curve, cfg.tol).map_err(MedialError::from)?;
    let mut max_residual = T::neg_infinity();
    let mut max_clearance_violation = T::neg_infinity();
    let mut max_ratio_margin = T::neg_infinity();
    let mut sample_total = 0usize;
    for samples in &window_samples {
        for s in samples {
            sample_total += 1;
            max_residual = max_residual.max(s.residual);
            let clearance = clearance_with_field(s, &field, cfg.probe_count)?;
            max_clearance_violation = max_clearance_violation.max(-clearance);
            if let Some(m) = s.ratio_bound_margin() {
                max_ratio_margin = max_ratio_margin.max(m);
            }
        }
    }
    if sample_total == 0 {
        max_residual = T::zero();
        max_clearance_violation = T::zero();
        max_ratio_margin = T::zero();
    }

    // claims
    if let Some(predicted) = reach_predicted {
        let verdict = match (predicted, reach_observed) {
            (true, ReachVerdict::Reaches) => ClaimVerdict::Pass,
            (false, ReachVerdict::BoundedAway) => ClaimVerdict::Pass,
            (_, ReachVerdict::Inconclusive) => ClaimVerdict::Inconclusive,
            _ => ClaimVerdict::Fail,
        };
        claims.push(Claim {
            id: "reach".into(),
            predicted: if predicted { "reaches" } else { "bounded away" }.into(),
            observed: reach_observed.to_string(),
            error: None,
            verdict,
        });
    }
    claims.push(Claim {
        id: "tangent-cone".into(),
        predicted: format!("{} directions", predicted_fan.len()),
        observed: format!("{} directions", observed_fan.len()),
        error: fan_comparison.max_error_deg().map(|e| e.as_f64()),
        verdict: if fan_comparison.pass {
            ClaimVerdict::Pass
        } else {
            ClaimVerdict::Fail
        },
    });
    match branch_count_bound {
        Some(bound) => {
            claims.push(Claim {
                id: "branch-count-bound".into(),
                predicted: format!("<= {bound}"),
                observed: observed_branch_count.to_string(),
                error: None,
                verdict: if observed_branch_count <= bound {
                    ClaimVerdict::Pass
                } else {
                    ClaimVerdict::Fail
                },
            });
        }
        None => {
            // single branch: one medial branch when reaching, none otherwise
            let expected = match reach_observed {
                ReachVerdict::Reaches => 1,
                ReachVerdict::BoundedAway => 0,
                ReachVerdict::Inconclusive => usize::MAX,
            };
            let verdict = if expected == usize::MAX {
                ClaimVerdict::Inconclusive
            } else if observed_branch_count == expected {
                ClaimVerdict::Pass
            } else {
                ClaimVerdict::Fail
            };
            claims.push(Claim {
                id: "medial-branch-count".into(),
                predicted: if expected == usize::MAX {
                    "-".into()
                } else {
                    expected.to_string()
                },
                observed: observed_branch_count.to_string(),
                error: None,
                verdict,
            });
        }
    }
    let certificates_ok = max_residual <= T::of(RESIDUAL_CERT)
        && -max_clearance_violation >= T::of(CLEARANCE_CERT)
        && max_ratio_margin <= T::of(RATIO_BOUND_SLACK);
    claims.push(Claim {
        id: "certificates".into(),
        predicted: "residual<=1e-8, clearance>=-1e-9, ratio margin<=1e-6".into(),
        observed: format!(
            "residual {:.3e}, clearance violation {:.3e}, ratio margin {:.3e}",
            max_residual.as_f64(),
            max_clearance_violation.as_f64(),
            max_ratio_margin.as_f64()
        ),
        error: None,
        verdict: if certificates_ok {
            ClaimVerdict::Pass
        } else {
            ClaimVerdict::Fail
        },
    });

    Ok(VerificationReport {
        curve_label: label.to_string(),
        branch_verdicts,
        regions,
        reach_predicted,
        reach_observed,
        per_window,
        contributing_observed,
        predicted_fan,
        observed_fan,
        annuli,
        fan_comparison,
        observed_branch_count,
        branch_count_bound,
        max_residual,
        max_clearance_violation,
        max_ratio_margin,
        sample_total,
        claims,
    })
}
