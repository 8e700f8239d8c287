//! Product-of-powers maps `y'^A = Π_B (y^B)^{f^{AB}}` that realise rotations
//! of the indicatrix chart, unimodular dilatations, and finite-difference
//! residuals of the metricity condition.

use nalgebra::{Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::ConstantsMatrix;
use crate::metric::{covariant_vector, metric_function, metric_tensor, UpVector};
use crate::numerics::{fd_jacobian, fd_second_derivatives, FdConfig};

const SUM_TOL: f64 = 1e-12;

/// Exponent matrix `f[(A, B)] = f^{AB}` with unit row and column sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTransform {
    f: Matrix4<f64>,
}

impl PowerTransform {
    pub fn new(f: Matrix4<f64>) -> Result<Self> {
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidExponents("non-finite entry".into()));
        }
        for i in 0..4 {
            let row: f64 = f.row(i).sum();
            if (row - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidExponents(format!("row {i} sums to {row}, expected 1")));
            }
            let col: f64 = f.column(i).sum();
            if (col - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidExponents(format!("column {i} sums to {col}, expected 1")));
            }
        }
        Ok(PowerTransform { f })
    }

    pub fn identity() -> Self {
        PowerTransform { f: Matrix4::identity() }
    }

    pub fn exponents(&self) -> &Matrix4<f64> {
        &self.f
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn then_after(&self, other: &PowerTransform) -> PowerTransform {
        PowerTransform { f: self.f * other.f }
    }

    /// Jacobian `∂y'^A/∂y^C = f^{AC} y'^A / y^C`.
    pub fn jacobian(&self, y: &UpVector) -> Result<Matrix4<f64>> {
        let image = apply_power_transform(self, y)?;
        Ok(Matrix4::from_fn(|a, c| self.f[(a, c)] * image[a] / y[c]))
    }
}

/// Euler angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationAngles {
    pub theta: f64,
    pub psi: f64,
    pub phi: f64,
}

impl RotationAngles {
    pub fn new(theta: f64, psi: f64, phi: f64) -> Result<Self> {
        for (what, value) in [("theta", theta), ("psi", psi), ("phi", phi)] {
            if !value.is_finite() {
                return Err(Error::Degenerate { what, value });
            }
        }
        Ok(RotationAngles { theta, psi, phi })
    }

    /// Rows `l`, `m`, `n`, acting as `u' = R u`.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        let (s1, c1) = self.theta.sin_cos();
        let (s2, c2) = self.psi.sin_cos();
        let (s3, c3) = self.phi.sin_cos();
        #[rustfmt::skip]
        let r = Matrix3::new(
            c2 * c3 - c1 * s2 * s3, -c2 * s3 - c1 * s2 * c3,  s1 * s2,
            s2 * c3 + c1 * c2 * s3, -s2 * s3 + c1 * c2 * c3, -s1 * c2,
            s1 * s3,                 s1 * c3,                 c1,
        );
        r
    }
}

/// `f = Cᵀ diag(1, R) C⁻¹`, the exponents that rotate the chart coordinates `u` by `R`.
pub fn exponents_from_rotation(r: &Matrix3<f64>, constants: &ConstantsMatrix) -> Result<PowerTransform> {
    let mut block = Matrix4::identity();
    block.fixed_view_mut::<3, 3>(1, 1).copy_from(r);
    PowerTransform::new(constants.forward().transpose() * block * constants.inverse())
}

/// Exponents of the Euler rotation in the chart defined by `constants`.
pub fn rotation_exponents_in(angles: &RotationAngles, constants: &ConstantsMatrix) -> PowerTransform {
    exponents_from_rotation(&angles.rotation_matrix(), constants).expect("rotation exponents have unit sums")
}

/// Exponents of the Euler rotation in the Hadamard chart.
pub fn rotation_exponents(angles: &RotationAngles) -> PowerTransform {
    rotation_exponents_in(angles, &ConstantsMatrix::hadamard())
}

/// One-angle coefficients with zero row sums; they act as a rotation only on `F = 1`.
pub fn one_angle_exponents_indicatrix(eta: f64) -> Matrix4<f64> {
    let (s, c) = eta.sin_cos();
    let p = 2.0 * c + 1.0;
    let q = 2.0 * s - 1.0;
    let r = -2.0 * s - 1.0;
    let t = -2.0 * c + 1.0;
    #[rustfmt::skip]
    let m = Matrix4::new(
        p, q, r, t,
        r, p, t, q,
        q, t, p, r,
        t, r, q, p,
    ) / 4.0;
    m
}

/// One-angle coefficients shifted by `1/4`, which makes them homogeneous of degree 1.
pub fn one_angle_exponents(eta: f64) -> PowerTransform {
    PowerTransform::new(one_angle_exponents_indicatrix(eta).add_scalar(0.25)).expect("homogenised exponents have unit sums")
}

pub fn apply_power_transform(t: &PowerTransform, y: &UpVector) -> Result<UpVector> {
    apply_exponents(&t.f, y)
}

/// Applies any exponent matrix, checked or not.
pub fn apply_exponents(f: &Matrix4<f64>, y: &UpVector) -> Result<UpVector> {
    let ln_y = nalgebra::Vector4::from(y.ln());
    let ln_out = f * ln_y;
    let out: [f64; 4] = ln_out.map(f64::exp).into();
    if out.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Overflow { context: "power transform" });
    }
    UpVector::new(out)
}

const UNIMODULAR_TOL: f64 = 1e-12;

/// `y^A k^A` for `k¹k²k³k⁴ = 1`.
pub fn unimodular_dilatation(k: [f64; 4], y: &UpVector) -> Result<UpVector> {
    for (index, &value) in k.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NotUpSector { index, value, floor: 0.0 });
        }
    }
    let product: f64 = k.iter().product();
    if (product - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular { product });
    }
    UpVector::new(std::array::from_fn(|i| y[i] * k[i]))
}

/// Finite-difference second derivatives of a transform and their contraction
/// with the covariant vector of the image.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricityResidual {
    /// `second[B][(C, D)] = ∂²y'^B / ∂y^C ∂y^D`.
    pub second: [Matrix4<f64>; 4],
    /// `y'_B ∂²y'^B / ∂y^C ∂y^D`.
    pub contracted: Matrix4<f64>,
}

impl MetricityResidual {
    pub fn max_abs(&self) -> f64 {
        self.contracted.amax()
    }
}

fn transform_closure(f: Matrix4<f64>) -> impl Fn(&[f64; 4]) -> Result<[f64; 4]> {
    move |p: &[f64; 4]| Ok(apply_exponents(&f, &UpVector::new(*p)?)?.components())
}

/// Metricity residual of an arbitrary exponent matrix.
pub fn metricity_residual_of(f: &Matrix4<f64>, y: &UpVector, cfg: &FdConfig) -> Result<MetricityResidual> {
    let image = apply_exponents(f, y)?;
    let cov = covariant_vector(&image);
    let second = fd_second_derivatives(transform_closure(*f), &y.components(), cfg)?;
    let contracted = second.iter().zip(cov.iter()).fold(Matrix4::zeros(), |acc, (d, c)| acc + d * *c);
    Ok(MetricityResidual { second, contracted })
}

pub fn metricity_residual(t: &PowerTransform, y: &UpVector, cfg: &FdConfig) -> Result<MetricityResidual> {
    metricity_residual_of(&t.f, y, cfg)
}

/// Closed form of the contracted residual:
/// `F² / (4 y^C y^D) · ((fᵀf)_CD − δ_CD Σ_B f^{BC})`.
pub fn metricity_residual_analytic(f: &Matrix4<f64>, y: &UpVector) -> Matrix4<f64> {
    let f2 = metric_function(y).powi(2);
    let ftf = f.transpose() * f;
    Matrix4::from_fn(|c, d| {
        let mut v = ftf[(c, d)];
        if c == d {
            v -= f.column(c).sum();
        }
        f2 * v / (4.0 * y[c] * y[d])
    })
}

/// `g(y) − Jᵀ g(t(y)) J` with the Jacobian `J` taken by central differences.
pub fn metric_invariance_residual(t: &PowerTransform, y: &UpVector, cfg: &FdConfig) -> Result<Matrix4<f64>> {
    let image = apply_power_transform(t, y)?;
    let j = fd_jacobian(transform_closure(t.f), &y.components(), cfg)?;
    Ok(metric_tensor(y).g - j.transpose() * metric_tensor(&image).g * j)
}

/// `g(y) − diag(k) g(k·y) diag(k)` for a unimodular dilatation.
pub fn dilatation_invariance_residual(k: [f64; 4], y: &UpVector) -> Result<Matrix4<f64>> {
    let image = unimodular_dilatation(k, y)?;
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::from(k));
    Ok(metric_tensor(y).g - d * metric_tensor(&image).g * d)
}
