//! Kinematic coefficients between inertial frames, the extended Lorentz
//! boost, the quartic kinematic length and the algebra of relative velocities.
//!
//! Explicit velocity formulas assume the Hadamard constants, for which the
//! frame change depends on the two vectors only through the relative velocity.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{tetrad, ConstantsMatrix};
use crate::metric::UpVector;

/// Sign patterns `(σ¹, σ², σ³)` of the four brackets `1 + σ·s`.
pub const BRACKET_SIGNS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [-1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

fn bracket_values(s: &[f64; 3]) -> [f64; 4] {
    BRACKET_SIGNS.map(|sg| 1.0 + sg[0] * s[0] + sg[1] * s[1] + sg[2] * s[2])
}

/// Signed combinations `Σ_k σ_k^a x_k / Σ_k x_k` used by every ratio form.
fn signed_ratio(x: &[f64; 4]) -> [f64; 3] {
    let total: f64 = x.iter().sum();
    std::array::from_fn(|a| (0..4).map(|k| BRACKET_SIGNS[k][a] * x[k]).sum::<f64>() / total)
}

/// The four bracket factors of a velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketFactors {
    pub j: [f64; 4],
}

impl BracketFactors {
    pub fn product(&self) -> f64 {
        self.j.iter().product()
    }

    /// `A = (J₁J₂J₃J₄)^{1/4}`.
    pub fn dilatation(&self) -> f64 {
        self.product().sqrt().sqrt()
    }
}

/// A relative velocity whose four brackets are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Velocity3([f64; 3]);

impl Velocity3 {
    pub fn new(s: [f64; 3]) -> Result<Self> {
        for (index, &value) in bracket_values(&s).iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) || s.iter().any(|c| !c.is_finite()) {
                return Err(Error::InadmissibleVelocity { s, index: index + 1, value });
            }
        }
        Ok(Velocity3(s))
    }

    pub fn zero() -> Self {
        Velocity3([0.0; 3])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn brackets(&self) -> BracketFactors {
        BracketFactors { j: bracket_values(&self.0) }
    }

    pub fn dilatation_factor(&self) -> f64 {
        self.brackets().dilatation()
    }
}

impl TryFrom<[f64; 3]> for Velocity3 {
    type Error = Error;

    fn try_from(s: [f64; 3]) -> Result<Self> {
        Velocity3::new(s)
    }
}

impl From<Velocity3> for [f64; 3] {
    fn from(v: Velocity3) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for Velocity3 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Frame-change coefficients `N^p_q`, stored as `n[(p, q)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicMatrix {
    pub n: Matrix4<f64>,
}

impl KinematicMatrix {
    pub fn determinant(&self) -> f64 {
        self.n.determinant()
    }

    /// Product of the four signed sums of the first column; equals 1.
    pub fn quartic_identity(&self) -> f64 {
        let col = [self.n[(0, 0)], self.n[(1, 0)], self.n[(2, 0)], self.n[(3, 0)]];
        BRACKET_SIGNS
            .iter()
            .map(|sg| col[0] + sg[0] * col[1] + sg[1] * col[2] + sg[2] * col[3])
            .product()
    }

    /// `s^a = N^a₀ / N⁰₀`.
    pub fn velocity(&self) -> Result<Velocity3> {
        let n00 = self.n[(0, 0)];
        Velocity3::new(std::array::from_fn(|a| self.n[(a + 1, 0)] / n00))
    }

    /// `s_a = N⁰_a / N⁰₀`.
    pub fn adjoint_velocity(&self) -> [f64; 3] {
        let n00 = self.n[(0, 0)];
        std::array::from_fn(|a| self.n[(0, a + 1)] / n00)
    }

    pub fn apply(&self, y: &[f64; 4]) -> [f64; 4] {
        (self.n * nalgebra::Vector4::from(*y)).into()
    }

    pub fn compose(&self, other: &KinematicMatrix) -> KinematicMatrix {
        KinematicMatrix { n: self.n * other.n }
    }

    pub fn try_inverse(&self) -> Option<KinematicMatrix> {
        self.n.try_inverse().map(|n| KinematicMatrix { n })
    }
}

/// `N^p_q(a, b) = h^p_A(a) h_q^A(b)` for an arbitrary constants matrix.
pub fn kinematic_matrix_in(a: &UpVector, b: &UpVector, constants: &ConstantsMatrix) -> Result<KinematicMatrix> {
    let ha = tetrad(a, constants)?;
    let hb = tetrad(b, constants)?;
    Ok(KinematicMatrix { n: ha.h * hb.h_recip })
}

/// Kinematic coefficients in the Hadamard frame.
pub fn kinematic_matrix(a: &UpVector, b: &UpVector) -> Result<KinematicMatrix> {
    kinematic_matrix_in(a, b, &ConstantsMatrix::hadamard())
}

/// `F(a) b^A / (F(b) a^A)`, the component ratios that drive every explicit formula.
pub fn component_ratios(a: &UpVector, b: &UpVector) -> [f64; 4] {
    let fa = a.metric_function();
    let fb = b.metric_function();
    std::array::from_fn(|i| fa * b[i] / (fb * a[i]))
}

/// First column `N^p₀(a, b)` from the explicit ratio sums.
pub fn first_column_explicit(a: &UpVector, b: &UpVector) -> [f64; 4] {
    let r = component_ratios(a, b);
    let mut out = [r.iter().sum::<f64>() / 4.0, 0.0, 0.0, 0.0];
    for (p, v) in out.iter_mut().enumerate().skip(1) {
        *v = (0..4).map(|k| BRACKET_SIGNS[k][p - 1] * r[k]).sum::<f64>() / 4.0;
    }
    out
}

/// Velocity of the frame of `b` relative to the frame of `a`.
pub fn relative_velocity(a: &UpVector, b: &UpVector) -> Result<Velocity3> {
    kinematic_matrix(a, b)?.velocity()
}

/// Relative velocity from the signed sums of `b^A / a^A`.
pub fn relative_velocity_from_ratios(a: &UpVector, b: &UpVector) -> Result<Velocity3> {
    Velocity3::new(signed_ratio(&std::array::from_fn(|i| b[i] / a[i])))
}

pub fn dilatation_factor(s: &Velocity3) -> f64 {
    s.dilatation_factor()
}

/// `N^p_q` written through the relative velocity.
pub fn matrix_from_velocity(s: &Velocity3) -> KinematicMatrix {
    let inv_a = 1.0 / s.dilatation_factor();
    let [s1, s2, s3] = s.0;
    #[rustfmt::skip]
    let n = Matrix4::new(
        1.0, s1,  s2,  s3,
        s1,  1.0, s3,  s2,
        s2,  s3,  1.0, s1,
        s3,  s2,  s1,  1.0,
    ) * inv_a;
    KinematicMatrix { n }
}

/// The extended Lorentz transformation of frame components.
pub fn boost(y: &[f64; 4], s: &Velocity3) -> [f64; 4] {
    let a = s.dilatation_factor();
    let [s1, s2, s3] = s.0;
    let [y0, y1, y2, y3] = *y;
    [
        (y0 + s1 * y1 + s2 * y2 + s3 * y3) / a,
        (s1 * y0 + y1 + s3 * y2 + s2 * y3) / a,
        (s2 * y0 + s3 * y1 + y2 + s1 * y3) / a,
        (s3 * y0 + s2 * y1 + s1 * y2 + y3) / a,
    ]
}

/// Fourth root of the product of `Y⁰ + σ·(Y¹, Y², Y³)` over the four sign patterns.
pub fn kinematic_length(y: &[f64; 4]) -> Result<f64> {
    let mut product = 1.0;
    for (index, sg) in BRACKET_SIGNS.iter().enumerate() {
        let value = y[0] + sg[0] * y[1] + sg[1] * y[2] + sg[2] * y[3];
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NotFuturePointing { index: index + 1, value });
        }
        product *= value;
    }
    Ok(product.sqrt().sqrt())
}

/// `s₁ ⊕ s₂` from the rational component formulas.
pub fn compose(s1: &Velocity3, s2: &Velocity3) -> Result<Velocity3> {
    let [a1, a2, a3] = s1.0;
    let [b1, b2, b3] = s2.0;
    let d = 1.0 + a1 * b1 + a2 * b2 + a3 * b3;
    Velocity3::new([
        (a1 + b1 + a2 * b3 + a3 * b2) / d,
        (a2 + b2 + a1 * b3 + a3 * b1) / d,
        (a3 + b3 + a1 * b2 + a2 * b1) / d,
    ])
}

/// `s₁ ⊕ s₂` from the products of bracket factors `J_{1k} J_{2k}`.
pub fn compose_brackets(s1: &Velocity3, s2: &Velocity3) -> Result<Velocity3> {
    let j1 = s1.brackets().j;
    let j2 = s2.brackets().j;
    Velocity3::new(signed_ratio(&std::array::from_fn(|k| j1[k] * j2[k])))
}

/// `s₃ ⊖ s₂`: the velocity `s₁` with `s₁ ⊕ s₂ = s₃`.
pub fn subtract(s3: &Velocity3, s2: &Velocity3) -> Result<Velocity3> {
    let j3 = s3.brackets().j;
    let j2 = s2.brackets().j;
    let q: [f64; 4] = std::array::from_fn(|k| j3[k] / j2[k]);
    let h: f64 = q.iter().sum();
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Degenerate { what: "subtraction normaliser H", value: h });
    }
    Velocity3::new(signed_ratio(&q))
}

/// The inverse velocity `⊖s`, i.e. the relative velocity with the frames swapped.
///
/// Computed as signed sums of `1/J_k` normalised by `Σ 1/J_k`.
pub fn reciprocal(s: &Velocity3) -> Velocity3 {
    let j = s.brackets().j;
    Velocity3::new(signed_ratio(&j.map(|v| 1.0 / v))).expect("inverse of an admissible velocity is admissible")
}

/// `⊖s` as a rational function: `−P(s) / (1 − |s|² + 2s¹s²s³)`.
pub fn reciprocal_polynomial(s: &Velocity3) -> Velocity3 {
    let [s1, s2, s3] = s.0;
    let q = 1.0 - s1 * s1 - s2 * s2 - s3 * s3 + 2.0 * s1 * s2 * s3;
    let p = reciprocal_numerators(&s.0);
    Velocity3::new(p.map(|v| -v / q)).expect("inverse of an admissible velocity is admissible")
}

fn reciprocal_numerators(s: &[f64; 3]) -> [f64; 3] {
    let [s1, s2, s3] = *s;
    [
        s1 - 2.0 * s2 * s3 - s1.powi(3) + s1 * (s2 * s2 + s3 * s3),
        s2 - 2.0 * s1 * s3 - s2.powi(3) + s2 * (s1 * s1 + s3 * s3),
        s3 - 2.0 * s1 * s2 - s3.powi(3) + s3 * (s1 * s1 + s2 * s2),
    ]
}

/// Quarter-sum of signed `1/J_k` without the normalising factor.
///
/// Equals [`reciprocal`] scaled by `¼ Σ 1/J_k`; kept for comparison only.
pub fn reciprocal_unnormalised_brackets(s: &Velocity3) -> [f64; 3] {
    let j = s.brackets().j;
    std::array::from_fn(|a| (0..4).map(|k| BRACKET_SIGNS[k][a] / j[k]).sum::<f64>() / 4.0)
}

/// Polynomial form `−P(s) / A⁴`; agrees with
/// [`reciprocal_unnormalised_brackets`], not with [`reciprocal`].
pub fn reciprocal_unnormalised_polynomial(s: &Velocity3) -> [f64; 3] {
    let a4 = s.brackets().product();
    reciprocal_numerators(&s.0).map(|v| -v / a4)
}

/// Small-velocity expansion `A₁ + A₂` of the dilatation factor, accurate to fifth order.
pub fn dilatation_factor_approx(s: &[f64; 3]) -> f64 {
    let [s1, s2, s3] = *s;
    let (q1, q2, q3) = (s1 * s1, s2 * s2, s3 * s3);
    let a1 = 1.0 - 0.5 * (q1 + q2 + q3) - 0.125 * (q1 * q1 + q2 * q2 + q3 * q3);
    let a2 = 2.0 * s1 * s2 * s3 - 1.25 * (q1 * q2 + q2 * q3 + q1 * q3);
    a1 + a2
}
