use crate::error::{Error, Result};
use crate::spectral::PeriodicSamples;

/// Closed sampled map `S¹ → R²`, possibly singular (a front).
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarFront {
    x: PeriodicSamples,
    y: PeriodicSamples,
    immersed: bool,
}

impl PlanarFront {
    pub fn new(x: PeriodicSamples, y: PeriodicSamples, immersed: bool) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch(x.len(), y.len()));
        }
        Ok(Self { x, y, immersed })
    }

    pub fn from_points(points: &[[f64; 2]], immersed: bool) -> Result<Self> {
        let x = PeriodicSamples::new(points.iter().map(|p| p[0]).collect())?;
        let y = PeriodicSamples::new(points.iter().map(|p| p[1]).collect())?;
        Self::new(x, y, immersed)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &PeriodicSamples {
        &self.x
    }

    pub fn y(&self) -> &PeriodicSamples {
        &self.y
    }

    pub fn immersed(&self) -> bool {
        self.immersed
    }

    pub fn point(&self, j: usize) -> [f64; 2] {
        [self.x.values()[j], self.y.values()[j]]
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(|j| self.point(j))
    }

    /// `½ ∫ c ∧ c_u du` with spectral `c_u`.
    pub fn signed_area(&self) -> f64 {
        let dx = self.x.derivative(1).expect("valid samples");
        let dy = self.y.derivative(1).expect("valid samples");
        let integrand: Vec<f64> = (0..self.len())
            .map(|j| self.x.values()[j] * dy.values()[j] - self.y.values()[j] * dx.values()[j])
            .collect();
        0.5 * PeriodicSamples::new(integrand).expect("finite").integral()
    }
}

/// Signed Euclidean area of a closed front.
pub fn signed_area(c: &PlanarFront) -> f64 {
    c.signed_area()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_and_point() {
        let r = 1.7;
        let pts: Vec<[f64; 2]> = (0..32)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / 32.0;
                [3.0 + r * t.cos(), -1.0 + r * t.sin()]
            })
            .collect();
        let c = PlanarFront::from_points(&pts, true).unwrap();
        assert!((signed_area(&c) - PI * r * r).abs() < 1e-13);
        let rev: Vec<[f64; 2]> = pts.iter().rev().copied().collect();
        assert!(
            (PlanarFront::from_points(&rev, true).unwrap().signed_area() + PI * r * r).abs()
                < 1e-13
        );
        let point = PlanarFront::from_points(&[[2.0, 5.0]; 16], false).unwrap();
        assert_eq!(signed_area(&point), 0.0);
    }
}
