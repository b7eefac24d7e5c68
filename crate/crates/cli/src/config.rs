//! JSON run configuration. Every object rejects unknown keys.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

/// Values shared by every command; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub resolution: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Config {
    Plane(PlaneConfig),
    Surface(SurfaceConfig),
    SphereCurve(CurveConfig),
    Poincare(PoincareConfig),
    Search(SearchConfig),
    Converge(ConvergeConfig),
}

impl Config {
    pub fn name(&self) -> &'static str {
        match self {
            Config::Plane(_) => "plane",
            Config::Surface(_) => "surface",
            Config::SphereCurve(_) => "sphere-curve",
            Config::Poincare(_) => "poincare",
            Config::Search(_) => "search",
            Config::Converge(_) => "converge",
        }
    }

    pub fn settings(&self) -> &Settings {
        match self {
            Config::Plane(c) => &c.settings,
            Config::Surface(c) => &c.settings,
            Config::SphereCurve(c) => &c.settings,
            Config::Poincare(c) => &c.settings,
            Config::Search(c) => &c.settings,
            Config::Converge(c) => &c.settings,
        }
    }
}

/// Periodic profile on `[0, 2π)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    /// `a0 + Σ cos[k−1] cos kθ + sin[k−1] sin kθ`.
    Fourier(Fourier),
    /// Values at `θ_j = 2πj/n`; resampled spectrally to the run resolution.
    Samples(Vec<f64>),
    /// Support function of the ellipse with semi-axes `a`, `b`.
    Ellipse { a: f64, b: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fourier {
    pub a0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

/// Scalar field on the unit sphere.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SphereField {
    /// Values at the Gauss–Legendre colatitudes, north to south; fixes `n_theta`.
    Zonal(Vec<f64>),
    Harmonics(Harmonics),
    /// Ring-major samples on a `n_theta × n_phi` grid.
    Grid {
        n_theta: usize,
        n_phi: usize,
        values: Vec<f64>,
    },
    Ellipsoid {
        axes: [f64; 3],
    },
    Sphere {
        radius: f64,
    },
}

/// `[[l, m, c], …]` of orthonormal real harmonics, optionally on top of a constant.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Harmonics {
    Terms(Vec<(usize, i64, f64)>),
    WithConstant {
        constant: f64,
        terms: Vec<(usize, i64, f64)>,
    },
}

impl Harmonics {
    pub fn parts(&self) -> (f64, &[(usize, i64, f64)]) {
        match self {
            Harmonics::Terms(t) => (0.0, t),
            Harmonics::WithConstant { constant, terms } => (*constant, terms),
        }
    }
}

/// Closed curve on the unit sphere.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    /// Unit vectors in traversal order.
    Samples(Vec<[f64; 3]>),
    /// Central projection of the planar curve with support function `profile`
    /// drawn in the plane `z = height`.
    Gnomonic { profile: Profile, height: f64 },
    GnomonicEllipse {
        a: f64,
        b: f64,
        #[serde(default)]
        centre: [f64; 2],
    },
    /// Circle of geodesic radius `alpha` about the north pole.
    GeodesicCircle { alpha: f64 },
}

/// Adds `count` seeded draws from the command's random family.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Random {
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneConfig {
    #[serde(default)]
    pub settings: Settings,
    pub support: Option<Profile>,
    /// Dual norm; Euclidean when absent.
    pub norm: Option<Profile>,
    /// Normal-graph displacement; adds a signed-area row.
    pub phi: Option<Profile>,
    pub random: Option<Random>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    #[serde(default)]
    pub settings: Settings,
    pub support: Option<SphereField>,
    /// Normal-graph displacement; adds a volume row.
    pub displacement: Option<SphereField>,
    pub random: Option<Random>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    #[serde(default)]
    pub settings: Settings,
    pub curve: Option<CurveSpec>,
    pub random: Option<Random>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareConfig {
    #[serde(default)]
    pub settings: Settings,
    pub circle: Option<Profile>,
    pub sphere: Option<SphereField>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Euclidean,
    Anisotropic,
}

fn default_budget() -> usize {
    2000
}

fn default_restarts() -> usize {
    8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(default)]
    pub settings: Settings,
    pub normalization: Normalization,
    pub curve_degree: usize,
    #[serde(default)]
    pub norm_degree: usize,
    /// Fixed part of the dual norm (Fourier form only).
    pub base_norm: Option<Fourier>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Plane {
        support: Profile,
        norm: Option<Profile>,
    },
    Surface {
        support: SphereField,
    },
    SphereCurve {
        curve: CurveSpec,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeConfig {
    #[serde(default)]
    pub settings: Settings,
    pub family: Family,
    /// Increasing resolutions (`n` or `n_theta`).
    pub ladder: Vec<usize>,
}

pub fn parse(text: &str, origin: &str) -> Result<Config, CliError> {
    let config: Config = serde_json::from_str(text).map_err(|e| {
        let (line, column) = match (e.line(), locate(text, &e.to_string())) {
            // tagged enums are buffered before the field check, which loses the position
            (0, Some(at)) => at,
            _ => (e.line(), e.column()),
        };
        CliError::Config {
            path: origin.to_owned(),
            line,
            column,
            message: e.to_string(),
        }
    })?;
    validate(&config).map_err(|message| CliError::Invalid {
        path: origin.to_owned(),
        message,
    })?;
    Ok(config)
}

/// Position of the first key named in backticks in a serde message.
fn locate(text: &str, message: &str) -> Option<(usize, usize)> {
    let name = message.split('`').nth(1)?;
    let offset = text.find(&format!("\"{name}\""))?;
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    Some((line, column))
}

pub fn load(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text, &path.display().to_string())
}

/// Checks the cross-field rules serde cannot express.
fn validate(config: &Config) -> Result<(), String> {
    let s = config.settings();
    if let Some(t) = s.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(format!("settings.tolerance must be positive, got {t}"));
        }
    }
    let nothing = |what: &str| Err(format!("{} needs {what}", config.name()));
    match config {
        Config::Plane(c) if c.support.is_none() && c.random.is_none() => {
            nothing("`support` or `random`")
        }
        Config::Surface(c) if c.support.is_none() && c.random.is_none() => {
            nothing("`support` or `random`")
        }
        Config::SphereCurve(c) if c.curve.is_none() && c.random.is_none() => {
            nothing("`curve` or `random`")
        }
        Config::Poincare(c) if c.circle.is_none() && c.sphere.is_none() => {
            nothing("`circle` or `sphere`")
        }
        Config::Search(c) if c.curve_degree < 2 => {
            Err("search.curve_degree must be at least 2".into())
        }
        Config::Converge(c) if c.ladder.len() < 2 => {
            Err("converge.ladder needs at least two resolutions".into())
        }
        Config::Converge(c) if c.ladder.windows(2).any(|w| w[1] <= w[0]) => {
            Err("converge.ladder must be strictly increasing".into())
        }
        _ => Ok(()),
    }
}
