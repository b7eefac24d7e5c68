//! Derivative-free search for curves that come closest to equality in the
//! reverse isoperimetric inequalities.
//!
//! The search space holds the Fourier coefficients of the curve's support
//! function (modes `2..=D_p`, with `a₀ = 1` and the degree-1 translation modes
//! frozen) and optionally even modes of the norm profile added to a base norm.
//! Each restart runs a Nelder–Mead simplex from a random feasible point;
//! restarts run in parallel and are merged in restart order, so the result
//! depends only on the seed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{rng, series};
use crate::plane::{hurwitz_report, reverse_iso_report, NormProfile, SupportProfile};
use crate::spectral::FourierCoefficients;

/// Smallest admissible evaluation budget.
pub const MIN_BUDGET: usize = 50;
/// `|𝒜(e)|` below this (relative to the squared length) counts as equality.
pub const DEGENERATE_EVOLUTE: f64 = 1e-10;

/// Which inequality normalises the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `(L² − 4πA) / (π|A(e)|)`.
    Euclidean,
    /// `(𝓛² − 4𝒜(γ)𝒜(ℐ)) / (4𝒜(ℐ)|𝒜(e)|)`.
    Anisotropic,
}

/// Objective value for one curve; in `[0, 1]` by either inequality.
pub fn sharpness_objective(
    p: &SupportProfile,
    h: &NormProfile,
    normalization: Normalization,
) -> Result<f64> {
    let r = match normalization {
        Normalization::Euclidean => hurwitz_report(p, crate::DEFAULT_TOLERANCE)?,
        Normalization::Anisotropic => reverse_iso_report(p, h, crate::DEFAULT_TOLERANCE)?,
    };
    let denominator = r.area_evolute.abs();
    if denominator < DEGENERATE_EVOLUTE * r.length * r.length {
        return Ok(0.0);
    }
    Ok(r.lhs() / r.rhs())
}

/// Coefficient box and fixed data of a search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub normalization: Normalization,
    /// Highest curve mode `D_p`; modes `2..=D_p` are free.
    pub curve_degree: usize,
    /// Highest free norm mode `D_h`; even modes `2..=D_h` are added to `base_norm`.
    pub norm_degree: usize,
    pub base_norm: FourierCoefficients,
    /// Every coordinate is confined to `[−bound, bound]`.
    pub bound: f64,
    /// Sample count of each evaluation.
    pub resolution: usize,
}

impl SearchSpace {
    pub fn euclidean(curve_degree: usize) -> Self {
        Self {
            normalization: Normalization::Euclidean,
            curve_degree,
            norm_degree: 0,
            base_norm: series(1.0, &[]),
            bound: 0.3,
            resolution: 128,
        }
    }

    pub fn anisotropic(curve_degree: usize, base_norm: FourierCoefficients) -> Self {
        Self {
            normalization: Normalization::Anisotropic,
            base_norm,
            ..Self::euclidean(curve_degree)
        }
    }

    fn curve_modes(&self) -> Vec<usize> {
        (2..=self.curve_degree).collect()
    }

    fn norm_modes(&self) -> Vec<usize> {
        (2..=self.norm_degree).step_by(2).collect()
    }

    pub fn dimension(&self) -> usize {
        2 * (self.curve_modes().len() + self.norm_modes().len())
    }

    /// Splits a point into curve and norm series.
    pub fn decode(&self, x: &[f64]) -> (FourierCoefficients, FourierCoefficients) {
        let cm = self.curve_modes();
        let curve: Vec<_> = cm
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, x[2 * i], x[2 * i + 1]))
            .collect();
        let off = 2 * cm.len();
        let mut norm = self.base_norm.clone();
        for (i, k) in self.norm_modes().into_iter().enumerate() {
            if norm.a.len() < k {
                norm.a.resize(k, 0.0);
                norm.b.resize(k, 0.0);
            }
            norm.a[k - 1] += x[off + 2 * i];
            norm.b[k - 1] += x[off + 2 * i + 1];
        }
        (series(1.0, &curve), norm)
    }

    /// Objective at `x` on `n` samples; `−∞` outside the box or when either
    /// profile fails validation.
    pub fn evaluate_at(&self, x: &[f64], n: usize) -> f64 {
        if x.iter().any(|v| v.is_nan() || v.abs() > self.bound) {
            return f64::NEG_INFINITY;
        }
        let (curve, norm) = self.decode(x);
        let value = (|| -> Result<f64> {
            let p = SupportProfile::new(curve.synthesize(n)?)?;
            let h = NormProfile::new(norm.synthesize(n)?)?;
            sharpness_objective(&p, &h, self.normalization)
        })();
        match value {
            Ok(v) if v.is_finite() => v,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.evaluate_at(x, self.resolution)
    }

    /// Per-coordinate scale `1/((k² − 1)·d)` for `d` coordinates in the block
    /// (capped at `bound`): a point with every coordinate within half of it
    /// keeps `Σ(k² − 1)|c_k| ≤ ½`, hence convex.
    fn coordinate_scales(&self) -> Vec<f64> {
        let cm = self.curve_modes();
        let nm = self.norm_modes();
        let per = |modes: &[usize]| -> Vec<f64> {
            let count = (2 * modes.len()).max(1) as f64;
            modes
                .iter()
                .flat_map(|&k| {
                    let s = (1.0 / (((k * k) as f64 - 1.0) * count)).min(self.bound);
                    [s, s]
                })
                .collect()
        };
        let mut scales = per(&cm);
        scales.extend(per(&nm));
        scales
    }
}

/// Outcome of a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Completed,
    /// Every evaluated point was rejected.
    Infeasible,
}

/// One improvement of the incumbent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    /// 1-based evaluation index in restart order.
    pub evaluation: usize,
    pub restart: usize,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub best_point: Vec<f64>,
    pub best_objective: f64,
    pub evaluations: usize,
    /// Non-decreasing incumbent values.
    pub trace: Vec<TracePoint>,
    pub recertified_resolution: usize,
    pub recertified_objective: f64,
    /// Relative change under doubled resolution stayed below 1e-6.
    pub recertified: bool,
}

/// Options beyond the space itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 2000,
            restarts: 8,
            seed: 0,
        }
    }
}

/// Evaluation log of one restart.
struct Run {
    values: Vec<f64>,
    best: (Vec<f64>, f64),
}

struct Counter<'a> {
    space: &'a SearchSpace,
    budget: usize,
    values: Vec<f64>,
    best: (Vec<f64>, f64),
}

impl Counter<'_> {
    fn left(&self) -> bool {
        self.values.len() < self.budget
    }

    /// Cost to minimise: the negated objective.
    fn cost(&mut self, x: &[f64]) -> f64 {
        let v = self.space.evaluate(x);
        self.values.push(v);
        if v > self.best.1 {
            self.best = (x.to_vec(), v);
        }
        -v
    }
}

fn random_point(rng: &mut ChaCha8Rng, scales: &[f64]) -> Vec<f64> {
    scales
        .iter()
        .map(|&s| rng.random_range(-0.5 * s..=0.5 * s))
        .collect()
}

fn nelder_mead(space: &SearchSpace, budget: usize, rng: &mut ChaCha8Rng) -> Run {
    let dim = space.dimension();
    let scales = space.coordinate_scales();
    let mut c = Counter {
        space,
        budget,
        values: Vec::new(),
        best: (vec![0.0; dim], f64::NEG_INFINITY),
    };
    while c.left() {
        // random feasible start
        let mut x0 = random_point(rng, &scales);
        let mut f0 = c.cost(&x0);
        while f0.is_infinite() && c.left() {
            x0 = random_point(rng, &scales);
            f0 = c.cost(&x0);
        }
        if f0.is_infinite() {
            break;
        }
        let mut simplex = vec![(x0.clone(), f0)];
        for i in 0..dim {
            if !c.left() {
                break;
            }
            let mut x = x0.clone();
            x[i] += if x0[i] > 0.0 { -0.25 } else { 0.25 } * scales[i];
            let f = c.cost(&x);
            simplex.push((x, f));
        }
        if simplex.len() < dim + 1 {
            break;
        }
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (lo, hi) = (simplex[0].1, simplex[dim].1);
            let size = simplex
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if !c.left()
                || (hi - lo).abs() <= 1e-15 * lo.abs().max(1e-300) && size < 1e-9
                || size < 1e-13
            {
                break;
            }
            let centroid: Vec<f64> = (0..dim)
                .map(|i| simplex[..dim].iter().map(|(x, _)| x[i]).sum::<f64>() / dim as f64)
                .collect();
            let worst = simplex[dim].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xr = along(1.0);
            let fr = c.cost(&xr);
            if fr < simplex[0].1 {
                if !c.left() {
                    simplex[dim] = (xr, fr);
                    continue;
                }
                let xe = along(2.0);
                let fe = c.cost(&xe);
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
            } else {
                if !c.left() {
                    continue;
                }
                let (xc, fc) = if fr < worst.1 {
                    let x = along(0.5);
                    let f = c.cost(&x);
                    (x, f)
                } else {
                    let x = along(-0.5);
                    let f = c.cost(&x);
                    (x, f)
                };
                if fc < worst.1.min(fr) {
                    simplex[dim] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        if !c.left() {
                            break;
                        }
                        let x: Vec<f64> = best
                            .iter()
                            .zip(&entry.0)
                            .map(|(b, v)| b + 0.5 * (v - b))
                            .collect();
                        let f = c.cost(&x);
                        *entry = (x, f);
                    }
                }
            }
        }
    }
    Run {
        values: c.values,
        best: c.best,
    }
}

/// Maximises the objective over `space` within `options.budget` evaluations.
pub fn maximize(space: &SearchSpace, options: SearchOptions) -> Result<SearchResult> {
    if options.budget < MIN_BUDGET {
        return Err(Error::Domain(format!(
            "search budget {} is below the minimum of {MIN_BUDGET}",
            options.budget
        )));
    }
    if space.curve_degree > space.resolution / 4 || space.norm_degree > space.resolution / 4 {
        return Err(Error::BandTooWide {
            band: space.curve_degree.max(space.norm_degree),
            n: space.resolution,
        });
    }
    let dim = space.dimension();
    let runs: Vec<Run> = if dim == 0 {
        let v = space.evaluate(&[]);
        vec![Run {
            values: vec![v],
            best: (Vec::new(), v),
        }]
    } else {
        let restarts = options.restarts.clamp(1, options.budget / (dim + 2)).max(1);
        let share = options.budget / restarts;
        (0..restarts)
            .into_par_iter()
            .map(|r| {
                let mut g = rng(options.seed.wrapping_add(r as u64));
                let extra = usize::from(r < options.budget % restarts);
                nelder_mead(space, share + extra, &mut g)
            })
            .collect()
    };

    let mut trace = Vec::new();
    let mut incumbent = (Vec::new(), f64::NEG_INFINITY);
    let mut evaluations = 0;
    for (r, run) in runs.iter().enumerate() {
        for &v in &run.values {
            evaluations += 1;
            if v > trace
                .last()
                .map_or(f64::NEG_INFINITY, |t: &TracePoint| t.objective)
            {
                trace.push(TracePoint {
                    evaluation: evaluations,
                    restart: r,
                    objective: v,
                });
            }
        }
        if run.best.1 > incumbent.1 {
            incumbent = run.best.clone();
        }
    }
    if incumbent.1 == f64::NEG_INFINITY {
        return Ok(SearchResult {
            status: SearchStatus::Infeasible,
            best_point: Vec::new(),
            best_objective: f64::NEG_INFINITY,
            evaluations,
            trace,
            recertified_resolution: 2 * space.resolution,
            recertified_objective: f64::NEG_INFINITY,
            recertified: false,
        });
    }
    let fine = space.evaluate_at(&incumbent.0, 2 * space.resolution);
    let recertified = (fine - incumbent.1).abs() < 1e-6 * incumbent.1.abs().max(1e-12)
        || (fine == 0.0 && incumbent.1 == 0.0);
    Ok(SearchResult {
        status: SearchStatus::Completed,
        best_point: incumbent.0,
        best_objective: incumbent.1,
        evaluations,
        trace,
        recertified_resolution: 2 * space.resolution,
        recertified_objective: fine,
        recertified,
    })
}
