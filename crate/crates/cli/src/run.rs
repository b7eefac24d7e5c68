//! Turns a configuration into report tables.

use std::sync::Arc;

use isogauge::families::{self, rng};
use isogauge::plane::{
    curve_from_support, hurwitz_report, normal_graph_area, reverse_iso_report,
    total_curvature_identity, NormProfile, SupportProfile,
};
use isogauge::search::{self, maximize, SearchOptions, SearchSpace, SearchStatus};
use isogauge::spectral::{
    poincare_gap_circle, poincare_gap_sphere, PeriodicSamples, SphereGrid, SphereScalarField,
};
use isogauge::sphere_curve::{
    frame_and_curvature, gnomonic_lift, length_area, reverse_iso_identity_report, SphericalCurve,
};
use isogauge::surface::{
    deficit_identity_check, focal_volume_identity, normal_graph_volume_check,
    reverse_minkowski_report, SupportField,
};
use isogauge::InequalityReport;
use rayon::prelude::*;

use crate::config::{
    Config, CurveConfig, CurveSpec, Family, Fourier, Normalization, PlaneConfig, PoincareConfig,
    Profile, SearchConfig, SphereField, SurfaceConfig,
};
use crate::converge::converge;
use crate::error::{CliError, Context};
use crate::output::{Cell, Table};

/// Resolved run parameters (flags over config over defaults).
#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub resolution: Option<usize>,
    pub tolerance: f64,
    pub seed: u64,
}

pub struct Outcome {
    pub tables: Vec<Table>,
    /// One line per failed assertion.
    pub failures: Vec<String>,
    /// Failed advisory checks; reported but not fatal.
    pub warnings: Vec<String>,
}

/// Reports whose failure is diagnostic only: the focal identity needs smooth
/// ordered radii and loses accuracy at the umbilics of generic surfaces.
const ADVISORY: &[&str] = &["focal_volume_identity"];

const CIRCLE_N: usize = isogauge::DEFAULT_CIRCLE_N;
const CURVE_N: usize = 256;

fn fourier_series(f: &Fourier) -> isogauge::spectral::FourierCoefficients {
    let k = f.cos.len().max(f.sin.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    let modes: Vec<_> = (0..k)
        .map(|i| (i + 1, at(&f.cos, i), at(&f.sin, i)))
        .collect();
    families::series(f.a0, &modes)
}

pub fn samples_at(profile: &Profile, n: usize) -> Result<PeriodicSamples, CliError> {
    match profile {
        Profile::Fourier(f) => fourier_series(f)
            .synthesize(n)
            .context(|| format!("fourier profile at n = {n}")),
        Profile::Samples(v) => PeriodicSamples::new(v.clone())
            .and_then(|s| s.resample(n))
            .context(|| format!("{} samples at n = {n}", v.len())),
        Profile::Ellipse { a, b } => families::ellipse_support(n, *a, *b)
            .map(|p| p.p().clone())
            .context(|| format!("ellipse ({a}, {b})")),
    }
}

fn support_at(profile: &Profile, n: usize) -> Result<SupportProfile, CliError> {
    SupportProfile::new(samples_at(profile, n)?).context(|| "support profile".into())
}

fn norm_at(profile: Option<&Profile>, n: usize) -> Result<NormProfile, CliError> {
    match profile {
        None => NormProfile::euclidean(n).context(|| "euclidean norm".into()),
        Some(p) => NormProfile::new(samples_at(p, n)?).context(|| "norm profile".into()),
    }
}

fn describe_profile(p: &Profile) -> String {
    match p {
        Profile::Fourier(f) => format!("fourier degree {}", f.cos.len().max(f.sin.len())),
        Profile::Samples(v) => format!("{} samples", v.len()),
        Profile::Ellipse { a, b } => format!("ellipse {a} {b}"),
    }
}

/// One certification row.
struct Row {
    family: String,
    parameters: String,
    report: InequalityReport,
}

fn report_table(rows: &[Row]) -> Table {
    let mut t = Table::new(
        "report",
        &[
            "family",
            "parameters",
            "report",
            "relation",
            "resolution",
            "tolerance",
            "lhs",
            "rhs",
            "margin",
            "equality",
            "passed",
            "failures",
        ],
    );
    for row in rows {
        let r = &row.report;
        let relation = match r.relation {
            isogauge::Relation::Identity => "identity",
            isogauge::Relation::Inequality => "inequality",
        };
        let mut cells: Vec<(String, Cell)> = vec![
            ("family".into(), row.family.clone().into()),
            ("parameters".into(), row.parameters.clone().into()),
            ("report".into(), r.name.clone().into()),
            ("relation".into(), relation.into()),
            ("resolution".into(), r.resolution.to_string().into()),
            ("tolerance".into(), r.tolerance.into()),
            ("lhs".into(), r.lhs.into()),
            ("rhs".into(), r.rhs.into()),
            ("margin".into(), r.margin.into()),
            ("equality".into(), r.equality.into()),
            ("passed".into(), r.passed.into()),
            ("failures".into(), r.failures.join("; ").into()),
        ];
        cells.extend(
            r.functionals
                .iter()
                .map(|(k, v)| (k.clone(), Cell::Float(*v))),
        );
        t.push(cells);
    }
    t
}

fn failures_of<'a>(rows: impl Iterator<Item = &'a Row>) -> Vec<String> {
    rows.flat_map(|row| {
        row.report
            .failures
            .iter()
            .map(move |f| format!("{} / {}: {f}", row.family, row.report.name))
    })
    .collect()
}

/// Computes every case on the current pool; results keep case order.
fn compute<C: Sync>(
    cases: &[(String, String, C)],
    f: impl Fn(&C) -> Result<Vec<InequalityReport>, CliError> + Sync,
) -> Result<Outcome, CliError> {
    let reports: Vec<Result<Vec<InequalityReport>, CliError>> =
        cases.par_iter().map(|(_, _, c)| f(c)).collect();
    let mut rows = Vec::new();
    for ((family, parameters, _), r) in cases.iter().zip(reports) {
        for report in r? {
            rows.push(Row {
                family: family.clone(),
                parameters: parameters.clone(),
                report,
            });
        }
    }
    let advisory = |r: &&Row| ADVISORY.contains(&r.report.name.as_str());
    Ok(Outcome {
        failures: failures_of(rows.iter().filter(|r| !advisory(r))),
        warnings: failures_of(rows.iter().filter(advisory)),
        tables: vec![report_table(&rows)],
    })
}

fn random_label(seed: u64, i: usize) -> (String, String) {
    (format!("random-{i}"), format!("seed {seed} draw {i}"))
}

// ---- plane ------------------------------------------------------------------

pub struct PlaneCase {
    p: SupportProfile,
    h: NormProfile,
    phi: Option<PeriodicSamples>,
}

pub fn plane_reports(c: &PlaneCase, tol: f64) -> Result<Vec<InequalityReport>, CliError> {
    let ctx = || "plane report".to_string();
    let mut out = vec![
        hurwitz_report(&c.p, tol).context(ctx)?.report,
        reverse_iso_report(&c.p, &c.h, tol).context(ctx)?.report,
        total_curvature_identity(&c.p, &c.h, tol).context(ctx)?,
    ];
    if let Some(phi) = &c.phi {
        out.push(normal_graph_area(&c.p, &c.h, phi, tol).context(ctx)?);
    }
    Ok(out)
}

pub fn plane_case(
    support: &Profile,
    norm: Option<&Profile>,
    n: usize,
) -> Result<PlaneCase, CliError> {
    Ok(PlaneCase {
        p: support_at(support, n)?,
        h: norm_at(norm, n)?,
        phi: None,
    })
}

fn plane(c: &PlaneConfig, params: Params) -> Result<Outcome, CliError> {
    let n = params.resolution.unwrap_or(CIRCLE_N);
    let mut cases = Vec::new();
    if let Some(support) = &c.support {
        let mut case = plane_case(support, c.norm.as_ref(), n)?;
        case.phi = c.phi.as_ref().map(|p| samples_at(p, n)).transpose()?;
        let mut desc = describe_profile(support);
        if let Some(h) = &c.norm {
            desc += &format!("; norm {}", describe_profile(h));
        }
        cases.push(("input".to_string(), desc, case));
    }
    if let Some(random) = &c.random {
        let mut r = rng(params.seed);
        for i in 0..random.count {
            let ps = families::random_support_series(&mut r, 5);
            let hs = families::random_norm_series(&mut r, 6);
            let case = PlaneCase {
                p: families::support_profile(&ps, n).context(|| "random support".into())?,
                h: families::norm_profile(&hs, n).context(|| "random norm".into())?,
                phi: Some(families::random_phi(&mut r, n).context(|| "random phi".into())?),
            };
            let (f, p) = random_label(params.seed, i);
            cases.push((f, p, case));
        }
    }
    compute(&cases, |c| plane_reports(c, params.tolerance))
}

// ---- surface ----------------------------------------------------------------

/// Grid implied by a field spec and the requested resolution.
fn grid_for(
    field: &SphereField,
    resolution: Option<usize>,
    default: usize,
) -> Result<Arc<SphereGrid>, CliError> {
    let (nt, np) = match field {
        SphereField::Zonal(v) => (v.len(), 2 * v.len()),
        SphereField::Grid { n_theta, n_phi, .. } => (*n_theta, *n_phi),
        _ => {
            let n = resolution.unwrap_or(default);
            (n, 2 * n)
        }
    };
    if let Some(r) = resolution {
        if r != nt {
            return Err(CliError::Usage(format!(
                "resolution {r} conflicts with a field tabulated on {nt} colatitudes"
            )));
        }
    }
    SphereGrid::new(nt, np).context(|| format!("grid {nt}x{np}"))
}

pub fn field_on(
    field: &SphereField,
    grid: &Arc<SphereGrid>,
) -> Result<SphereScalarField, CliError> {
    let ctx = || "sphere field".to_string();
    match field {
        SphereField::Zonal(v) => {
            if v.len() != grid.n_theta() {
                return Err(CliError::Usage(format!(
                    "zonal table has {} entries, grid has {} colatitudes",
                    v.len(),
                    grid.n_theta()
                )));
            }
            let values = grid.nodes().map(|(i, _)| v[i]).collect();
            SphereScalarField::new(grid.clone(), values).context(ctx)
        }
        SphereField::Harmonics(h) => {
            let (c, terms) = h.parts();
            isogauge::spectral::harmonic_sum(grid, c, terms).context(ctx)
        }
        SphereField::Grid {
            n_theta,
            n_phi,
            values,
        } => {
            if (*n_theta, *n_phi) != (grid.n_theta(), grid.n_phi()) {
                return Err(CliError::Usage(format!(
                    "field grid {n_theta}x{n_phi} differs from run grid {}x{}",
                    grid.n_theta(),
                    grid.n_phi()
                )));
            }
            SphereScalarField::new(grid.clone(), values.clone()).context(ctx)
        }
        SphereField::Ellipsoid { axes } => SupportField::ellipsoid(grid, *axes)
            .map(|h| h.h().clone())
            .context(ctx),
        SphereField::Sphere { radius } => SphereScalarField::constant(grid, *radius).context(ctx),
    }
}

fn describe_field(f: &SphereField) -> String {
    match f {
        SphereField::Zonal(v) => format!("zonal table of {}", v.len()),
        SphereField::Harmonics(h) => format!("{} harmonic terms", h.parts().1.len()),
        SphereField::Grid { n_theta, n_phi, .. } => format!("grid {n_theta}x{n_phi}"),
        SphereField::Ellipsoid { axes } => format!("ellipsoid {} {} {}", axes[0], axes[1], axes[2]),
        SphereField::Sphere { radius } => format!("sphere {radius}"),
    }
}

pub struct SurfaceCase {
    h: SupportField,
    u: Option<SphereScalarField>,
}

pub fn surface_case(
    support: &SphereField,
    grid: &Arc<SphereGrid>,
) -> Result<SurfaceCase, CliError> {
    let h = SupportField::new(field_on(support, grid)?).context(|| "support field".into())?;
    Ok(SurfaceCase { h, u: None })
}

pub fn surface_reports(c: &SurfaceCase, tol: f64) -> Result<Vec<InequalityReport>, CliError> {
    let mut out = vec![
        reverse_minkowski_report(&c.h, tol).report,
        deficit_identity_check(&c.h, tol),
        focal_volume_identity(&c.h, tol.max(1e-7)),
    ];
    if let Some(u) = &c.u {
        out.push(normal_graph_volume_check(&c.h, u, tol).context(|| "normal graph volume".into())?);
    }
    Ok(out)
}

fn surface(c: &SurfaceConfig, params: Params) -> Result<Outcome, CliError> {
    let default = isogauge::DEFAULT_SPHERE_N_THETA;
    let grid = match &c.support {
        Some(f) => grid_for(f, params.resolution, default)?,
        None => {
            let n = params.resolution.unwrap_or(default);
            SphereGrid::new(n, 2 * n).context(|| "grid".into())?
        }
    };
    let mut cases = Vec::new();
    if let Some(support) = &c.support {
        let mut case = surface_case(support, &grid)?;
        case.u = c
            .displacement
            .as_ref()
            .map(|u| field_on(u, &grid))
            .transpose()?;
        cases.push(("input".to_string(), describe_field(support), case));
    }
    if let Some(random) = &c.random {
        let mut r = rng(params.seed);
        for i in 0..random.count {
            let h = families::random_surface(&mut r, &grid).context(|| "random surface".into())?;
            let u = families::random_displacement(&mut r, &grid)
                .context(|| "random displacement".into())?;
            let (f, p) = random_label(params.seed, i);
            cases.push((f, p, SurfaceCase { h, u: Some(u) }));
        }
    }
    compute(&cases, |c| surface_reports(c, params.tolerance))
}

// ---- spherical curves -------------------------------------------------------

pub fn curve_at(spec: &CurveSpec, n: usize) -> Result<SphericalCurve, CliError> {
    let ctx = || "spherical curve".to_string();
    match spec {
        CurveSpec::Samples(points) => SphericalCurve::new(points.clone()).context(ctx),
        CurveSpec::Gnomonic { profile, height } => {
            gnomonic_lift(&curve_from_support(&support_at(profile, n)?), *height).context(ctx)
        }
        CurveSpec::GnomonicEllipse { a, b, centre } => {
            families::gnomonic_ellipse(n, *a, *b, *centre).context(ctx)
        }
        CurveSpec::GeodesicCircle { alpha } => families::geodesic_circle(n, *alpha).context(ctx),
    }
}

fn describe_curve(c: &CurveSpec) -> String {
    match c {
        CurveSpec::Samples(p) => format!("{} samples", p.len()),
        CurveSpec::Gnomonic { profile, height } => {
            format!("gnomonic {} at height {height}", describe_profile(profile))
        }
        CurveSpec::GnomonicEllipse { a, b, centre } => {
            format!("gnomonic ellipse {a} {b} at ({}, {})", centre[0], centre[1])
        }
        CurveSpec::GeodesicCircle { alpha } => format!("geodesic circle {alpha}"),
    }
}

pub fn curve_reports(curve: &SphericalCurve, tol: f64) -> Result<Vec<InequalityReport>, CliError> {
    let ctx = || "spherical curve report".to_string();
    let identity = reverse_iso_identity_report(curve, tol).context(ctx)?.report;
    let frame = frame_and_curvature(curve).context(ctx)?;
    let space_form = length_area(&frame)
        .context(ctx)?
        .space_form_report(curve.len(), tol);
    Ok(vec![identity, space_form])
}

fn sphere_curve(c: &CurveConfig, params: Params) -> Result<Outcome, CliError> {
    let n = params.resolution.unwrap_or(CURVE_N);
    let mut cases = Vec::new();
    if let Some(spec) = &c.curve {
        cases.push((
            "input".to_string(),
            describe_curve(spec),
            curve_at(spec, n)?,
        ));
    }
    if let Some(random) = &c.random {
        let mut r = rng(params.seed);
        for i in 0..random.count {
            let curve = families::gnomonic_oval(&mut r, n).context(|| "random oval".into())?;
            let (f, p) = random_label(params.seed, i);
            cases.push((f, p, curve));
        }
    }
    compute(&cases, |c| curve_reports(c, params.tolerance))
}

// ---- Poincaré gap -----------------------------------------------------------

enum GapCase {
    Circle(PeriodicSamples),
    Sphere(SphereScalarField),
}

fn poincare(c: &PoincareConfig, params: Params) -> Result<Outcome, CliError> {
    let mut cases = Vec::new();
    if let Some(p) = &c.circle {
        let n = params.resolution.unwrap_or(CIRCLE_N);
        cases.push((
            "circle".to_string(),
            describe_profile(p),
            GapCase::Circle(samples_at(p, n)?),
        ));
    }
    if let Some(f) = &c.sphere {
        let grid = grid_for(f, params.resolution, 32)?;
        cases.push((
            "sphere".to_string(),
            describe_field(f),
            GapCase::Sphere(field_on(f, &grid)?),
        ));
    }
    compute(&cases, |c| {
        let r = match c {
            GapCase::Circle(f) => poincare_gap_circle(f, params.tolerance),
            GapCase::Sphere(f) => poincare_gap_sphere(f, params.tolerance),
        };
        Ok(vec![r.context(|| "poincare gap".into())?])
    })
}

// ---- search -----------------------------------------------------------------

fn run_search(c: &SearchConfig, params: Params) -> Result<Outcome, CliError> {
    let base = c
        .base_norm
        .as_ref()
        .map(fourier_series)
        .unwrap_or_else(|| families::series(1.0, &[]));
    let mut space = match c.normalization {
        Normalization::Euclidean => SearchSpace::euclidean(c.curve_degree),
        Normalization::Anisotropic => SearchSpace::anisotropic(c.curve_degree, base),
    };
    space.norm_degree = c.norm_degree;
    if let Some(b) = c.bound {
        space.bound = b;
    }
    if let Some(n) = params.resolution {
        space.resolution = n;
    }
    let options = SearchOptions {
        budget: c.budget,
        restarts: c.restarts,
        seed: params.seed,
    };
    let result = maximize(&space, options).context(|| "search".into())?;

    let mut failures = Vec::new();
    if result.status == SearchStatus::Infeasible {
        failures.push("search: every evaluated point was rejected".to_string());
    }
    let ceiling = 1.0 + 1e-9;
    if result.best_objective > ceiling || result.recertified_objective > ceiling {
        failures.push(format!(
            "search: objective {} exceeds 1 (recertified {})",
            result.best_objective, result.recertified_objective
        ));
    }
    if !result.recertified {
        failures.push(format!(
            "search: objective moved from {} to {} at n = {}",
            result.best_objective, result.recertified_objective, result.recertified_resolution
        ));
    }

    let normalization = match space.normalization {
        search::Normalization::Euclidean => "euclidean",
        search::Normalization::Anisotropic => "anisotropic",
    };
    let mut summary = Table::new("search", &[]);
    let point: Vec<String> = result
        .best_point
        .iter()
        .map(|v| crate::output::float(*v))
        .collect();
    summary.push(vec![
        ("normalization".into(), normalization.into()),
        ("curve_degree".into(), c.curve_degree.into()),
        ("norm_degree".into(), c.norm_degree.into()),
        ("seed".into(), Cell::Int(params.seed)),
        ("budget".into(), c.budget.into()),
        ("restarts".into(), c.restarts.into()),
        ("resolution".into(), space.resolution.into()),
        (
            "status".into(),
            match result.status {
                SearchStatus::Completed => "completed",
                SearchStatus::Infeasible => "infeasible",
            }
            .into(),
        ),
        ("evaluations".into(), result.evaluations.into()),
        ("best_objective".into(), result.best_objective.into()),
        (
            "recertified_resolution".into(),
            result.recertified_resolution.into(),
        ),
        (
            "recertified_objective".into(),
            result.recertified_objective.into(),
        ),
        ("recertified".into(), result.recertified.into()),
        ("best_point".into(), point.join(" ").into()),
    ]);
    let mut trace = Table::new("trace", &["evaluation", "restart", "objective"]);
    for t in &result.trace {
        trace.push(vec![
            ("evaluation".into(), t.evaluation.into()),
            ("restart".into(), t.restart.into()),
            ("objective".into(), t.objective.into()),
        ]);
    }
    Ok(Outcome {
        tables: vec![summary, trace],
        failures,
        warnings: Vec::new(),
    })
}

/// Reports of a converge family at one resolution.
pub fn family_reports(
    family: &Family,
    n: usize,
    tol: f64,
) -> Result<Vec<InequalityReport>, CliError> {
    match family {
        Family::Plane { support, norm } => {
            plane_reports(&plane_case(support, norm.as_ref(), n)?, tol)
        }
        Family::Surface { support } => {
            if matches!(support, SphereField::Zonal(_) | SphereField::Grid { .. }) {
                return Err(CliError::Usage(
                    "tabulated sphere fields cannot be refined".into(),
                ));
            }
            let grid = SphereGrid::new(n, 2 * n).context(|| format!("grid {n}x{}", 2 * n))?;
            surface_reports(&surface_case(support, &grid)?, tol)
        }
        Family::SphereCurve { curve } => {
            if matches!(curve, CurveSpec::Samples(_)) {
                return Err(CliError::Usage("sampled curves cannot be refined".into()));
            }
            curve_reports(&curve_at(curve, n)?, tol)
        }
    }
}

pub fn run(config: &Config, params: Params) -> Result<Outcome, CliError> {
    match config {
        Config::Plane(c) => plane(c, params),
        Config::Surface(c) => surface(c, params),
        Config::SphereCurve(c) => sphere_curve(c, params),
        Config::Poincare(c) => poincare(c, params),
        Config::Search(c) => run_search(c, params),
        Config::Converge(c) => converge(c, params),
    }
}
