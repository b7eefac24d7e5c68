//! Certification records shared by every geometry module.

use serde::Serialize;

/// Grid size a report was computed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Resolution {
    Circle { n: usize },
    Sphere { n_theta: usize, n_phi: usize },
    Curve { n: usize },
}

impl std::fmt::Display for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resolution::Circle { n } | Resolution::Curve { n } => write!(f, "{n}"),
            Resolution::Sphere { n_theta, n_phi } => write!(f, "{n_theta}x{n_phi}"),
        }
    }
}

/// Whether the two sides are claimed equal or ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs == rhs` up to tolerance.
    Identity,
    /// `lhs <= rhs` up to tolerance.
    Inequality,
}

/// A named comparison `lhs (=|<=) rhs` with every functional that went into it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub relation: Relation,
    pub functionals: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    /// Always `rhs - lhs`.
    pub margin: f64,
    /// `|margin| <= tolerance * scale`.
    pub equality: bool,
    /// Every assertion attached to this report passed.
    pub passed: bool,
    /// Human-readable reasons for `passed == false`.
    pub failures: Vec<String>,
    pub resolution: Resolution,
    pub tolerance: f64,
}

impl InequalityReport {
    /// Starts a report; `scale` sets the magnitude the tolerance is relative to.
    pub fn new(
        name: &str,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        scale: f64,
        resolution: Resolution,
        tolerance: f64,
    ) -> Self {
        let margin = rhs - lhs;
        let equality = margin.abs() <= tolerance * scale;
        let mut report = Self {
            name: name.to_owned(),
            relation,
            functionals: Vec::new(),
            lhs,
            rhs,
            margin,
            equality,
            passed: true,
            failures: Vec::new(),
            resolution,
            tolerance,
        };
        match relation {
            Relation::Identity => {
                report.check(equality, || {
                    format!("identity residual {margin:e} exceeds {tolerance:e} * {scale:e}")
                });
            }
            Relation::Inequality => {
                report.check(margin >= -tolerance * scale, || {
                    format!("lhs {lhs:e} exceeds rhs {rhs:e} beyond {tolerance:e} * {scale:e}")
                });
            }
        }
        report
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.push(name, value);
        self
    }

    pub fn push(&mut self, name: &str, value: f64) {
        self.functionals.push((name.to_owned(), value));
    }

    /// Records an extra assertion; the message is built only on failure.
    pub fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.passed = false;
            self.failures.push(message());
        }
    }

    pub fn functional(&self, name: &str) -> Option<f64> {
        self.functionals
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }
}

/// Equality test used throughout: `|a - b| <= tol * max(|a|, |b|, floor)`.
pub fn close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(floor)
}
