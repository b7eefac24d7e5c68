//! Independent oracles for unit tests: exact trigonometric polynomials and
//! high-order finite differences.

use std::f64::consts::PI;

/// `a0 + Σ a_k cos kθ + b_k sin kθ`, evaluated and integrated in closed form.
#[derive(Debug, Clone)]
pub struct Trig {
    pub a0: f64,
    pub modes: Vec<(usize, f64, f64)>,
}

impl Trig {
    pub fn new(a0: f64, modes: &[(usize, f64, f64)]) -> Self {
        Self {
            a0,
            modes: modes.to_vec(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.a0
            + self
                .modes
                .iter()
                .map(|&(k, a, b)| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
                .sum::<f64>()
    }

    pub fn derivative(&self, order: usize) -> Self {
        let mut modes = self.modes.clone();
        for _ in 0..order {
            for m in &mut modes {
                let k = m.0 as f64;
                *m = (m.0, k * m.2, -k * m.1);
            }
        }
        Self {
            a0: if order == 0 { self.a0 } else { 0.0 },
            modes,
        }
    }

    /// `f'' + f`.
    pub fn radius(&self) -> Self {
        let mut modes = self.modes.clone();
        for m in &mut modes {
            let s = 1.0 - (m.0 * m.0) as f64;
            *m = (m.0, s * m.1, s * m.2);
        }
        Self { a0: self.a0, modes }
    }

    /// `∫_0^{2π} f g dθ` by orthogonality.
    pub fn product_integral(&self, other: &Self) -> f64 {
        let mut total = 2.0 * PI * self.a0 * other.a0;
        for &(k, a, b) in &self.modes {
            for &(l, c, d) in &other.modes {
                if k == l && k > 0 {
                    total += PI * (a * c + b * d);
                }
            }
        }
        total
    }
}

/// Eighth-order central difference of a scalar function.
pub fn fd8(f: impl Fn(f64) -> f64, t: f64, order: usize) -> f64 {
    let h = 1e-2;
    let (w, denom): (&[f64], f64) = match order {
        1 => (&[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0], h),
        2 => (&[8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0], h * h),
        _ => panic!("order {order}"),
    };
    let centre = if order == 2 {
        -205.0 / 72.0 * f(t)
    } else {
        0.0
    };
    let sum: f64 = w
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let s = (i + 1) as f64 * h;
            if order == 1 {
                c * (f(t + s) - f(t - s))
            } else {
                c * (f(t + s) + f(t - s))
            }
        })
        .sum();
    (centre + sum) / denom
}

/// Signed Euclidean curvature of a parametrised plane curve.
pub fn fd_curvature(curve: impl Fn(f64) -> [f64; 2], t: f64) -> f64 {
    let x = |s: f64| curve(s)[0];
    let y = |s: f64| curve(s)[1];
    let (x1, y1) = (fd8(x, t, 1), fd8(y, t, 1));
    let (x2, y2) = (fd8(x, t, 2), fd8(y, t, 2));
    (x1 * y2 - y1 * x2) / x1.hypot(y1).powi(3)
}
