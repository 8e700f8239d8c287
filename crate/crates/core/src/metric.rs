//! Metric function, covariant vector and metric tensor of the quartic
//! Berwald-Moor space, restricted to the up-sector (all components positive).

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Smallest component accepted by [`UpVector::new`].
///
/// The metric tensor contains `1 / (y^A y^B)`, so components closer to zero
/// than this overflow.
pub const DEFAULT_COMPONENT_FLOOR: f64 = 1e-300;

/// A vector of the up-sector: four finite, strictly positive components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct UpVector([f64; 4]);

impl UpVector {
    pub fn new(y: [f64; 4]) -> Result<Self> {
        Self::with_floor(y, DEFAULT_COMPONENT_FLOOR)
    }

    /// Validates against a caller-chosen minimum component.
    pub fn with_floor(y: [f64; 4], floor: f64) -> Result<Self> {
        for (index, &value) in y.iter().enumerate() {
            if !value.is_finite() || value <= floor.max(0.0) {
                return Err(Error::NotUpSector { index, value, floor });
            }
        }
        Ok(UpVector(y))
    }

    pub fn ones() -> Self {
        UpVector([1.0; 4])
    }

    pub fn components(&self) -> [f64; 4] {
        self.0
    }

    pub fn as_vector(&self) -> Vector4<f64> {
        Vector4::from(self.0)
    }

    /// Componentwise natural logarithm.
    pub fn ln(&self) -> [f64; 4] {
        self.0.map(f64::ln)
    }

    /// Multiplies every component by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        UpVector::new(self.0.map(|c| c * k))
    }

    pub fn metric_function(&self) -> f64 {
        metric_function(self)
    }
}

impl TryFrom<[f64; 4]> for UpVector {
    type Error = Error;

    fn try_from(y: [f64; 4]) -> Result<Self> {
        UpVector::new(y)
    }
}

impl From<UpVector> for [f64; 4] {
    fn from(y: UpVector) -> Self {
        y.0
    }
}

impl std::ops::Index<usize> for UpVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `F(y) = (y¹y²y³y⁴)^(1/4)`.
///
/// Evaluated as the exponential of the mean logarithm so that products of
/// very large or very small components do not overflow.
pub fn metric_function(y: &UpVector) -> f64 {
    let direct = y.0.iter().product::<f64>();
    if direct.is_normal() {
        direct.sqrt().sqrt()
    } else {
        (y.0.iter().map(|c| c.ln()).sum::<f64>() / 4.0).exp()
    }
}

/// Covariant vector `y_A = F² / (4 y^A)`, so that `y_A y^A = F²`.
pub fn covariant_vector(y: &UpVector) -> [f64; 4] {
    let f2 = metric_function(y).powi(2);
    y.0.map(|c| f2 / (4.0 * c))
}

/// Unit vector `l = y / F(y)` on the indicatrix.
pub fn unit_vector(y: &UpVector) -> UpVector {
    let f = metric_function(y);
    UpVector(y.0.map(|c| c / f))
}

/// The metric tensor at a point together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricAtPoint {
    pub base: UpVector,
    /// Covariant components `g_AB`.
    pub g: Matrix4<f64>,
    /// Contravariant components `g^AB`.
    pub g_inv: Matrix4<f64>,
}

impl MetricAtPoint {
    pub fn determinant(&self) -> f64 {
        linalg::symmetric_determinant(&self.g)
    }

    /// `(positive, negative, zero)` eigenvalue counts of `g`.
    pub fn signature(&self) -> (usize, usize, usize) {
        linalg::inertia(&self.g)
    }

    /// `g_AB v^A w^B`.
    pub fn inner(&self, v: &Vector4<f64>, w: &Vector4<f64>) -> f64 {
        v.dot(&(self.g * w))
    }
}

/// `g_AB = 2 y_A y_B / F² − F² δ_AB / (4 y^A y^B)` and
/// `g^AB = 2 y^A y^B / F² − 4 y^A y^B δ^AB / F²`.
pub fn metric_tensor(y: &UpVector) -> MetricAtPoint {
    let f2 = metric_function(y).powi(2);
    let cov = covariant_vector(y);
    let g = Matrix4::from_fn(|a, b| {
        let mut v = 2.0 * cov[a] * cov[b] / f2;
        if a == b {
            v -= f2 / (4.0 * y.0[a] * y.0[b]);
        }
        v
    });
    let g_inv = Matrix4::from_fn(|a, b| {
        let mut v = 2.0 * y.0[a] * y.0[b] / f2;
        if a == b {
            v -= 4.0 * y.0[a] * y.0[b] / f2;
        }
        v
    });
    MetricAtPoint { base: *y, g, g_inv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn up(y: [f64; 4]) -> UpVector {
        UpVector::new(y).unwrap()
    }

    #[test]
    fn rejects_non_up_sector() {
        assert!(matches!(
            UpVector::new([1.0, 0.0, 1.0, 1.0]),
            Err(Error::NotUpSector { index: 1, .. })
        ));
        assert!(UpVector::new([1.0, 1.0, -2.0, 1.0]).is_err());
        assert!(UpVector::new([1.0, 1.0, 1.0, f64::NAN]).is_err());
        assert!(UpVector::new([f64::INFINITY, 1.0, 1.0, 1.0]).is_err());
        assert!(UpVector::with_floor([1e-5, 1.0, 1.0, 1.0], 1e-3).is_err());
    }

    #[test]
    fn metric_function_values() {
        assert_eq!(metric_function(&UpVector::ones()), 1.0);
        assert_abs_diff_eq!(metric_function(&up([16.0, 1.0, 1.0, 1.0])), 2.0, epsilon = 1e-15);
        let y = up([0.3, 2.5, 7.0, 0.01]);
        let k = 3.7;
        assert_abs_diff_eq!(
            metric_function(&y.scaled(k).unwrap()),
            k * metric_function(&y),
            epsilon = 1e-14
        );
    }

    #[test]
    fn metric_function_survives_extreme_components() {
        let y = up([1e-200, 1e-200, 1e200, 1e200]);
        assert_abs_diff_eq!(metric_function(&y), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn covariant_vector_values() {
        assert_eq!(covariant_vector(&UpVector::ones()), [0.25; 4]);
        let c = covariant_vector(&up([16.0, 1.0, 1.0, 1.0]));
        assert_abs_diff_eq!(c[0], 0.0625, epsilon = 1e-15);
        for v in &c[1..] {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn unit_vector_values() {
        assert_eq!(unit_vector(&UpVector::ones()), UpVector::ones());
        let l = unit_vector(&up([16.0, 1.0, 1.0, 1.0]));
        for (got, want) in l.components().iter().zip([8.0, 0.5, 0.5, 0.5]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn metric_at_all_ones() {
        let m = metric_tensor(&UpVector::ones());
        for a in 0..4 {
            for b in 0..4 {
                let (g, gi) = if a == b { (-0.125, -2.0) } else { (0.125, 2.0) };
                assert_abs_diff_eq!(m.g[(a, b)], g, epsilon = 1e-15);
                assert_abs_diff_eq!(m.g_inv[(a, b)], gi, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(m.determinant(), -1.0 / 256.0, epsilon = 1e-15);
        assert_eq!(m.signature(), (1, 3, 0));
    }

    #[test]
    fn inverse_and_contraction() {
        let y = up([0.2, 3.0, 1.5, 9.0]);
        let m = metric_tensor(&y);
        let id = m.g * m.g_inv;
        assert!(linalg::max_abs_diff(&id, &Matrix4::identity()) < 1e-12);
        let v = y.as_vector();
        assert_abs_diff_eq!(m.inner(&v, &v), metric_function(&y).powi(2), epsilon = 1e-12);
    }
}
