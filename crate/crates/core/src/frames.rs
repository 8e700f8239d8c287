//! Indicatrix chart `(z⁰, u)`, the constants matrix that defines it, tetrads
//! and the conformal factorisation `g = F² c` of the metric tensor.
//!
//! The chart is `y^A = exp(z⁰) · exp(C^A_a u^a)`. With the orthogonality
//! condition `¼ Σ_A C^A_a C^A_b = δ_ab` the induced metric on the
//! indicatrix `F = 1` is the euclidean identity in `u`, and the metric of the
//! up-sector becomes `e^{2z⁰} ((dz⁰)² − |du|²)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{metric_function, metric_tensor, unit_vector, UpVector};

/// Which constant set defines the chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsChoice {
    /// Rows of ±1 only; gives the simplest tetrads and kinematics.
    #[default]
    Hadamard,
    /// The set built from `√3`, `√(8/3)`, `√(2/3)` and `√2`.
    Orthonormal,
}

impl ConstantsChoice {
    pub fn name(self) -> &'static str {
        match self {
            ConstantsChoice::Hadamard => "hadamard",
            ConstantsChoice::Orthonormal => "orthonormal",
        }
    }
}

impl fmt::Display for ConstantsChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstantsChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hadamard" => Ok(ConstantsChoice::Hadamard),
            "orthonormal" => Ok(ConstantsChoice::Orthonormal),
            other => Err(format!("unknown constants choice `{other}` (expected hadamard or orthonormal)")),
        }
    }
}

const CONSTANTS_TOL: f64 = 1e-12;

/// The constants `C^A_p` and their inverse `C^p_A`.
///
/// `forward[(p, A)] = C^A_p` and `inverse[(p, A)] = C^p_A`, so that
/// `inverse * forward.transpose() = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsMatrix {
    forward: Matrix4<f64>,
    inverse: Matrix4<f64>,
}

impl ConstantsMatrix {
    /// Validates a user-supplied set; no attempt is made to repair one that fails.
    pub fn new(forward: Matrix4<f64>) -> Result<Self> {
        if forward.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConstants("non-finite entry".into()));
        }
        for a in 0..4 {
            if (forward[(0, a)] - 1.0).abs() > CONSTANTS_TOL {
                return Err(Error::InvalidConstants(format!(
                    "row 0 must be all ones, entry {a} is {}",
                    forward[(0, a)]
                )));
            }
        }
        for p in 1..4 {
            let sum: f64 = forward.row(p).sum();
            if sum.abs() > CONSTANTS_TOL {
                return Err(Error::InvalidConstants(format!("row {p} sums to {sum}, expected 0")));
            }
        }
        for p in 1..4 {
            for q in 1..4 {
                let dot = forward.row(p).dot(&forward.row(q)) / 4.0;
                let want = if p == q { 1.0 } else { 0.0 };
                if (dot - want).abs() > CONSTANTS_TOL {
                    return Err(Error::InvalidConstants(format!(
                        "rows {p} and {q}: quarter dot product {dot}, expected {want}"
                    )));
                }
            }
        }
        let inverse = forward
            .transpose()
            .try_inverse()
            .ok_or_else(|| Error::InvalidConstants("singular".into()))?;
        Ok(ConstantsMatrix { forward, inverse })
    }

    pub fn hadamard() -> Self {
        #[rustfmt::skip]
        let forward = Matrix4::new(
            1.0,  1.0,  1.0,  1.0,
            1.0, -1.0,  1.0, -1.0,
            1.0,  1.0, -1.0, -1.0,
            1.0, -1.0, -1.0,  1.0,
        );
        ConstantsMatrix::new(forward).expect("hadamard constants are valid")
    }

    pub fn orthonormal() -> Self {
        let r3 = 3f64.sqrt();
        let r2 = 2f64.sqrt();
        #[rustfmt::skip]
        let forward = Matrix4::new(
            1.0,  1.0,                 1.0,                  1.0,
            -r3,  1.0 / r3,            1.0 / r3,             1.0 / r3,
            0.0,  (8.0f64 / 3.0).sqrt(), -(2.0f64 / 3.0).sqrt(), -(2.0f64 / 3.0).sqrt(),
            0.0,  0.0,                 -r2,                  r2,
        );
        ConstantsMatrix::new(forward).expect("orthonormal constants are valid")
    }

    pub fn from_choice(choice: ConstantsChoice) -> Self {
        match choice {
            ConstantsChoice::Hadamard => Self::hadamard(),
            ConstantsChoice::Orthonormal => Self::orthonormal(),
        }
    }

    /// `C^A_p` as `(p, A)`.
    pub fn forward(&self) -> &Matrix4<f64> {
        &self.forward
    }

    /// `C^p_A` as `(p, A)`.
    pub fn inverse(&self) -> &Matrix4<f64> {
        &self.inverse
    }

    /// `C^A_p`.
    pub fn c(&self, upper_a: usize, p: usize) -> f64 {
        self.forward[(p, upper_a)]
    }

    /// `C^p_A`.
    pub fn c_inv(&self, p: usize, lower_a: usize) -> f64 {
        self.inverse[(p, lower_a)]
    }
}

impl Default for ConstantsMatrix {
    fn default() -> Self {
        Self::hadamard()
    }
}

/// Position of a point relative to the indicatrix `F = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Above,
    On,
    Below,
}

impl Region {
    /// Classifies by the sign of `z⁰`, treating `|z⁰| <= tol` as zero.
    pub fn from_z0(z0: f64, tol: f64) -> Self {
        if z0 > tol {
            Region::Above
        } else if z0 < -tol {
            Region::Below
        } else {
            Region::On
        }
    }
}

/// Chart coordinates of an up-sector point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    /// `ln F`.
    pub z0: f64,
    /// Indicatrix coordinates.
    pub u: [f64; 3],
    pub region: Region,
}

impl ChartPoint {
    pub fn new(z0: f64, u: [f64; 3]) -> Self {
        ChartPoint { z0, u, region: Region::from_z0(z0, REGION_TOL) }
    }
}

const REGION_TOL: f64 = 1e-12;

/// `z⁰ = ln F(y)`, `u^a = C^a_A ln l^A`.
pub fn to_chart(y: &UpVector, constants: &ConstantsMatrix) -> ChartPoint {
    let ln_y = y.ln();
    let z0 = ln_y.iter().sum::<f64>() / 4.0;
    let ln_l = ln_y.map(|v| v - z0);
    let mut u = [0.0; 3];
    for (a, ua) in u.iter_mut().enumerate() {
        *ua = (0..4).map(|b| constants.c_inv(a + 1, b) * ln_l[b]).sum();
    }
    ChartPoint::new(z0, u)
}

/// `y^A = exp(z⁰ + C^A_a u^a)`.
pub fn from_chart(z: &ChartPoint, constants: &ConstantsMatrix) -> Result<UpVector> {
    from_chart_coords(z.z0, &z.u, constants)
}

pub(crate) fn from_chart_coords(z0: f64, u: &[f64; 3], constants: &ConstantsMatrix) -> Result<UpVector> {
    let mut y = [0.0; 4];
    for (b, yb) in y.iter_mut().enumerate() {
        let exponent = z0 + (0..3).map(|a| constants.c(b, a + 1) * u[a]).sum::<f64>();
        *yb = exponent.exp();
    }
    if y.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Overflow { context: "chart inverse" });
    }
    UpVector::new(y)
}

/// A tetrad attached to a base vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Tetrad {
    pub base: UpVector,
    /// `h[(p, A)] = h^p_A`.
    pub h: Matrix4<f64>,
    /// `h_recip[(A, p)] = h_p^A`, so `h * h_recip = I`.
    pub h_recip: Matrix4<f64>,
}

impl Tetrad {
    /// `h⁰_A h⁰_B − Σ_a h^a_A h^a_B`.
    pub fn metric(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|a, b| {
            let mut v = self.h[(0, a)] * self.h[(0, b)];
            for p in 1..4 {
                v -= self.h[(p, a)] * self.h[(p, b)];
            }
            v
        })
    }

    /// `h_0^A h_0^B − Σ_a h_a^A h_a^B`.
    pub fn inverse_metric(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|a, b| {
            let mut v = self.h_recip[(a, 0)] * self.h_recip[(b, 0)];
            for p in 1..4 {
                v -= self.h_recip[(a, p)] * self.h_recip[(b, p)];
            }
            v
        })
    }

    pub fn determinant(&self) -> f64 {
        self.h.determinant()
    }
}

/// `h^p_A = C^p_A / l^A`; the reciprocal is obtained by inversion.
pub fn tetrad(y: &UpVector, constants: &ConstantsMatrix) -> Result<Tetrad> {
    let l = unit_vector(y);
    let h = Matrix4::from_fn(|p, a| constants.c_inv(p, a) / l[a]);
    let h_recip = h.try_inverse().ok_or(Error::Overflow { context: "tetrad inverse" })?;
    Ok(Tetrad { base: *y, h, h_recip })
}

/// Projection factors `t^A_a = C^A_a l^A` at the indicatrix point with coordinates `u`.
pub fn projection_factors(u: &[f64; 3], constants: &ConstantsMatrix) -> Result<[[f64; 3]; 4]> {
    let l = from_chart_coords(0.0, u, constants)?;
    let mut t = [[0.0; 3]; 4];
    for (b, row) in t.iter_mut().enumerate() {
        for (a, v) in row.iter_mut().enumerate() {
            *v = constants.c(b, a + 1) * l[b];
        }
    }
    Ok(t)
}

/// `i_ab = −t^A_a t^B_b g_AB` on the indicatrix.
pub fn induced_indicatrix_metric(u: &[f64; 3], constants: &ConstantsMatrix) -> Result<Matrix3<f64>> {
    let l = from_chart_coords(0.0, u, constants)?;
    let t = projection_factors(u, constants)?;
    let g = metric_tensor(&l).g;
    Ok(Matrix3::from_fn(|a, b| {
        let mut v = 0.0;
        for ua in 0..4 {
            for ub in 0..4 {
                v += t[ua][a] * t[ub][b] * g[(ua, ub)];
            }
        }
        -v
    }))
}

/// `c_AB = z^p_A z^q_B e_pq` with `z^p_A = h^p_A / F`, so `g_AB = F² c_AB`.
pub fn conformal_tensor(y: &UpVector, constants: &ConstantsMatrix) -> Result<Matrix4<f64>> {
    let f = metric_function(y);
    let h = tetrad(y, constants)?.h / f;
    Ok(Matrix4::from_fn(|a, b| {
        let mut v = h[(0, a)] * h[(0, b)];
        for p in 1..4 {
            v -= h[(p, a)] * h[(p, b)];
        }
        v
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::metric::covariant_vector;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    fn up(y: [f64; 4]) -> UpVector {
        UpVector::new(y).unwrap()
    }

    fn both() -> [ConstantsMatrix; 2] {
        [ConstantsMatrix::hadamard(), ConstantsMatrix::orthonormal()]
    }

    #[test]
    fn constant_sets() {
        let h = ConstantsMatrix::hadamard();
        assert_eq!(h.forward().row(1).iter().copied().collect::<Vec<_>>(), vec![1.0, -1.0, 1.0, -1.0]);
        let o = ConstantsMatrix::orthonormal();
        assert_abs_diff_eq!(o.c(0, 1), -3f64.sqrt(), epsilon = 1e-15);
        for a in 1..4 {
            assert_abs_diff_eq!(o.c(a, 1), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        }
        for c in both() {
            for a in 0..4 {
                assert_abs_diff_eq!(c.c_inv(0, a), 0.25, epsilon = 1e-15);
            }
            let id = c.inverse() * c.forward().transpose();
            assert!(max_abs_diff(&id, &Matrix4::identity()) < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_constants() {
        let mut f = *ConstantsMatrix::hadamard().forward();
        f[(2, 3)] = 0.0;
        assert!(matches!(ConstantsMatrix::new(f), Err(Error::InvalidConstants(_))));
        let mut g = *ConstantsMatrix::hadamard().forward();
        g[(0, 0)] = 2.0;
        assert!(ConstantsMatrix::new(g).is_err());
        // rows sum to zero but are not orthogonal
        #[rustfmt::skip]
        let skew = Matrix4::new(
            1.0, 1.0, 1.0, 1.0,
            1.0, -1.0, 1.0, -1.0,
            1.0, -1.0, 1.0, -1.0,
            1.0, -1.0, -1.0, 1.0,
        );
        assert!(ConstantsMatrix::new(skew).is_err());
    }

    #[test]
    fn choice_parsing() {
        assert_eq!("Hadamard".parse::<ConstantsChoice>().unwrap(), ConstantsChoice::Hadamard);
        assert_eq!("orthonormal".parse::<ConstantsChoice>().unwrap(), ConstantsChoice::Orthonormal);
        assert!("other".parse::<ConstantsChoice>().is_err());
        assert_eq!(ConstantsChoice::default(), ConstantsChoice::Hadamard);
    }

    #[test]
    fn chart_of_origin_and_e_point() {
        let c = ConstantsMatrix::hadamard();
        let z = to_chart(&UpVector::ones(), &c);
        assert_eq!(z.z0, 0.0);
        assert_eq!(z.u, [0.0; 3]);
        assert_eq!(z.region, Region::On);

        let z = to_chart(&up([E, 1.0, 1.0, 1.0]), &c);
        assert_abs_diff_eq!(z.z0, 0.25, epsilon = 1e-15);
        for ua in z.u {
            assert_abs_diff_eq!(ua, 0.25, epsilon = 1e-15);
        }
        assert_eq!(z.region, Region::Above);
        assert_eq!(to_chart(&up([0.5, 1.0, 1.0, 1.0]), &c).region, Region::Below);

        let y = from_chart(&ChartPoint::new(0.25, [0.25; 3]), &c).unwrap();
        for (got, want) in y.components().iter().zip([E, 1.0, 1.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert_eq!(from_chart(&ChartPoint::new(0.0, [0.0; 3]), &c).unwrap(), UpVector::ones());
    }

    #[test]
    fn from_chart_overflow() {
        let c = ConstantsMatrix::hadamard();
        assert!(matches!(
            from_chart(&ChartPoint::new(800.0, [0.0; 3]), &c),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn tetrad_at_origin_is_quarter_hadamard() {
        let c = ConstantsMatrix::hadamard();
        let t = tetrad(&UpVector::ones(), &c).unwrap();
        assert!(max_abs_diff(&t.h, &(c.forward() / 4.0)) < 1e-15);
        // columns of h_recip are the hadamard rows
        assert!(max_abs_diff(&t.h_recip, &c.forward().transpose()) < 1e-15);
        assert_abs_diff_eq!(t.determinant().abs(), 1.0 / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn tetrad_matches_simple_hadamard_display() {
        // h^1_A = (F/4)(1/a¹, −1/a², 1/a³, −1/a⁴), h_2^A = (a¹, a², −a³, −a⁴)/F
        let y = up([0.7, 2.0, 5.0, 0.3]);
        let f = metric_function(&y);
        let t = tetrad(&y, &ConstantsMatrix::hadamard()).unwrap();
        let signs1 = [1.0, -1.0, 1.0, -1.0];
        let signs2 = [1.0, 1.0, -1.0, -1.0];
        for a in 0..4 {
            assert_abs_diff_eq!(t.h[(1, a)], f / 4.0 * signs1[a] / y[a], epsilon = 1e-14);
            assert_abs_diff_eq!(t.h_recip[(a, 2)], signs2[a] * y[a] / f, epsilon = 1e-13);
        }
    }

    #[test]
    fn tetrad_time_row_is_covariant_unit_vector() {
        let y = up([0.4, 1.3, 8.0, 2.2]);
        let f = metric_function(&y);
        let cov = covariant_vector(&y);
        for c in both() {
            let t = tetrad(&y, &c).unwrap();
            for (a, c) in cov.iter().enumerate() {
                assert_abs_diff_eq!(t.h[(0, a)], c / f, epsilon = 1e-14);
            }
            assert_abs_diff_eq!(t.determinant().abs(), 1.0 / 16.0, epsilon = 1e-14);
            let g = metric_tensor(&y);
            assert!(max_abs_diff(&t.metric(), &g.g) < 1e-13);
            assert!(max_abs_diff(&t.inverse_metric(), &g.g_inv) < 1e-12);
        }
    }

    #[test]
    fn induced_metric_is_identity() {
        for c in both() {
            let i0 = induced_indicatrix_metric(&[0.0; 3], &c).unwrap();
            assert!(max_abs_diff(&i0, &Matrix3::identity()) < 1e-15);
            let i1 = induced_indicatrix_metric(&[0.3, -0.2, 0.7], &c).unwrap();
            assert!(max_abs_diff(&i1, &Matrix3::identity()) < 1e-12);
        }
    }

    #[test]
    fn projection_factors_match_finite_differences() {
        let u = [0.3, -0.2, 0.7];
        let h = 1e-5;
        for c in both() {
            let t = projection_factors(&u, &c).unwrap();
            for a in 0..3 {
                let mut up_ = u;
                let mut dn = u;
                up_[a] += h;
                dn[a] -= h;
                let lp = from_chart_coords(0.0, &up_, &c).unwrap();
                let lm = from_chart_coords(0.0, &dn, &c).unwrap();
                for b in 0..4 {
                    let fd = (lp[b] - lm[b]) / (2.0 * h);
                    assert_abs_diff_eq!(fd, t[b][a], epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn conformal_tensor_factorises_metric() {
        let c = ConstantsMatrix::hadamard();
        let at_one = conformal_tensor(&UpVector::ones(), &c).unwrap();
        assert!(max_abs_diff(&at_one, &metric_tensor(&UpVector::ones()).g) < 1e-15);

        let y = up([16.0, 1.0, 1.0, 1.0]);
        let f2 = metric_function(&y).powi(2);
        let ct = conformal_tensor(&y, &c).unwrap();
        assert!(max_abs_diff(&(ct * f2), &metric_tensor(&y).g) < 1e-12);

        let k = 2.5;
        let ck = conformal_tensor(&y.scaled(k).unwrap(), &c).unwrap();
        assert!(max_abs_diff(&ck, &(ct / (k * k))) < 1e-14);
    }
}
