//! Resolution ladders: every functional is tabulated against resolution and
//! its successive differences must shrink at least tenfold per step until
//! they reach the roundoff floor.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::config::{ConvergeConfig, Family};
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::run::{family_reports, Outcome, Params};

/// Required shrink factor of successive differences.
pub const DECAY: f64 = 10.0;
/// Differences below `FLOOR · max(1, |value|)` count as converged.
pub const FLOOR: f64 = 1e-11;

/// Values taken as a maximum or minimum over nodes (or a mode index) converge
/// only with the node spacing; they are tabulated but not asserted.
const SAMPLED: &[&str] = &[
    "k_g_sup",
    "oscillation_bound",
    "max_radius_gap",
    "min_radius_gap",
    "dominant_high_mode",
];

/// `ok[k]` for each difference `d[k]`: the first one is unconstrained.
pub fn decays(values: &[f64]) -> Vec<bool> {
    let floor = FLOOR * values.last().map_or(1.0, |v| v.abs().max(1.0));
    let d: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    (0..d.len())
        .map(|k| k == 0 || d[k] <= (d[k - 1] / DECAY).max(floor))
        .collect()
}

fn family_name(f: &Family) -> &'static str {
    match f {
        Family::Plane { .. } => "plane",
        Family::Surface { .. } => "surface",
        Family::SphereCurve { .. } => "sphere-curve",
    }
}

pub fn converge(c: &ConvergeConfig, params: Params) -> Result<Outcome, CliError> {
    let per_level: Vec<_> = c
        .ladder
        .par_iter()
        .map(|&n| family_reports(&c.family, n, params.tolerance))
        .collect();
    // (report, functional) in first-seen order -> values along the ladder
    let mut order: Vec<(String, String)> = Vec::new();
    let mut series: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for reports in per_level {
        for r in reports? {
            let mut push = |name: &str, v: f64| {
                let key = (r.name.clone(), name.to_owned());
                let entry = series.entry(key.clone()).or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                });
                entry.push(v);
            };
            push("lhs", r.lhs);
            push("rhs", r.rhs);
            for (k, v) in &r.functionals {
                push(k, *v);
            }
        }
    }

    let family = family_name(&c.family);
    let mut table = Table::new(
        "convergence",
        &[
            "family",
            "report",
            "functional",
            "resolution",
            "value",
            "difference",
            "asserted",
            "decayed",
        ],
    );
    let mut failures = Vec::new();
    for key in &order {
        let values = &series[key];
        if values.len() != c.ladder.len() {
            return Err(CliError::Usage(format!(
                "{} / {} is not reported at every resolution",
                key.0, key.1
            )));
        }
        let asserted = !SAMPLED.contains(&key.1.as_str());
        let ok = decays(values);
        for (i, (&n, &v)) in c.ladder.iter().zip(values).enumerate() {
            let (difference, decayed) = if i == 0 {
                (Cell::Empty, Cell::Empty)
            } else {
                (
                    Cell::Float((v - values[i - 1]).abs()),
                    Cell::Bool(ok[i - 1]),
                )
            };
            table.push(vec![
                ("family".into(), family.into()),
                ("report".into(), key.0.clone().into()),
                ("functional".into(), key.1.clone().into()),
                ("resolution".into(), n.into()),
                ("value".into(), v.into()),
                ("difference".into(), difference),
                ("asserted".into(), asserted.into()),
                ("decayed".into(), decayed),
            ]);
        }
        if asserted && ok.iter().any(|&b| !b) {
            let d: Vec<String> = values
                .windows(2)
                .map(|w| format!("{:.3e}", (w[1] - w[0]).abs()))
                .collect();
            failures.push(format!(
                "{} / {}: differences [{}] do not decay",
                key.0,
                key.1,
                d.join(", ")
            ));
        }
    }
    Ok(Outcome {
        tables: vec![table],
        failures,
        warnings: Vec::new(),
    })
}
