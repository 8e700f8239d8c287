//! Closed-form timelike geodesics of the up-sector and the angle, distance
//! and scalar product they induce.
//!
//! In chart coordinates the metric is `e^{2z⁰}((dz⁰)² − |du|²)`; along a
//! unit-speed geodesic `F(s)² = a² + 2bs + s²` and `u` runs along a straight
//! line with direction `n`, reaching `u(0) + n · ½ ln X(s)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{from_chart_coords, to_chart, ChartPoint, ConstantsMatrix};
use crate::metric::{metric_function, UpVector};
use crate::numerics::{rk4_integrate, Trajectory};

/// Right-hand side of the geodesic system in chart coordinates.
///
/// `z = (z⁰, u)` and `velocity = dz/ds`; returns `(dz/ds, dU/ds)` with
/// `dU⁰/ds = −((U⁰)² + |U|²)` and `dU^a/ds = −2 U^a U⁰`.
pub fn geodesic_rhs(_z: &[f64; 4], velocity: &[f64; 4]) -> [f64; 8] {
    let [u0, u1, u2, u3] = *velocity;
    let transverse = u1 * u1 + u2 * u2 + u3 * u3;
    [u0, u1, u2, u3, -(u0 * u0 + transverse), -2.0 * u1 * u0, -2.0 * u2 * u0, -2.0 * u3 * u0]
}

/// Integration constants of a geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicIvp {
    /// `F` at `s = 0`.
    pub a: f64,
    /// `½ dF²/ds` at `s = 0`.
    pub b: f64,
    /// Unit direction in the indicatrix chart; zero for radial rays.
    pub n: [f64; 3],
    /// Offsets in `u(s) = m + n ln(F(s) / |s + b + w|)`.
    pub m: [f64; 3],
}

impl GeodesicIvp {
    /// `√(b² − a²)`.
    pub fn w(&self) -> f64 {
        ((self.b - self.a) * (self.b + self.a)).max(0.0).sqrt()
    }
}

/// A unit-speed geodesic arc `s ∈ [0, length]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicCurve {
    ivp: GeodesicIvp,
    w: f64,
    start: ChartPoint,
    length: f64,
    constants: ConstantsMatrix,
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl GeodesicCurve {
    fn build(
        a: f64,
        b: f64,
        w: f64,
        n: [f64; 3],
        start: ChartPoint,
        length: f64,
        constants: &ConstantsMatrix,
    ) -> Result<Self> {
        if !(length >= 0.0 && length.is_finite()) {
            return Err(Error::InvalidLength(length));
        }
        let shift = ((b + w).abs() / a).ln();
        let m = std::array::from_fn(|i| start.u[i] + n[i] * shift);
        Ok(GeodesicCurve { ivp: GeodesicIvp { a, b, n, m }, w, start, length, constants: constants.clone() })
    }

    /// Starts at chart point `start` with chart velocity `velocity = dz/ds`.
    ///
    /// The velocity is rescaled to unit length; it must be timelike and
    /// future-pointing.
    pub fn from_chart_velocity(
        start: ChartPoint,
        velocity: [f64; 4],
        length: f64,
        constants: &ConstantsMatrix,
    ) -> Result<Self> {
        let a = start.z0.exp();
        if !(a.is_finite() && a > 0.0) || velocity.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow { context: "geodesic initial data" });
        }
        let transverse = norm3(&[velocity[1], velocity[2], velocity[3]]);
        let norm_sq = a * a * (velocity[0] - transverse) * (velocity[0] + transverse);
        if norm_sq.is_nan() || norm_sq <= 0.0 {
            return Err(Error::NonTimelikeDirection { norm_sq });
        }
        let scale = norm_sq.sqrt();
        let b = a * a * velocity[0] / scale;
        if b < 0.0 {
            return Err(Error::PastDirected { a, b });
        }
        let w = a * a * transverse / scale;
        let n = if transverse > 0.0 {
            [velocity[1] / transverse, velocity[2] / transverse, velocity[3] / transverse]
        } else {
            [0.0; 3]
        };
        GeodesicCurve::build(a, b.max(a), w, n, start, length, constants)
    }

    pub fn ivp(&self) -> &GeodesicIvp {
        &self.ivp
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn constants(&self) -> &ConstantsMatrix {
        &self.constants
    }

    /// `√(b² − a²)`, kept exactly as constructed.
    pub fn transverse_rate(&self) -> f64 {
        self.w
    }

    /// `F(s) = √(a² + 2bs + s²)`.
    pub fn f_value(&self, s: f64) -> f64 {
        let GeodesicIvp { a, b, .. } = self.ivp;
        (a * a + 2.0 * b * s + s * s).sqrt()
    }

    /// `½ ln X(s) = ln(|a² + (b + w)s| / (a F(s)))`, the chart distance travelled.
    pub fn half_log_x(&self, s: f64) -> f64 {
        let GeodesicIvp { a, b, .. } = self.ivp;
        ((a * a + (b + self.w) * s).abs() / (a * self.f_value(s))).ln()
    }

    pub fn x_factor(&self, s: f64) -> f64 {
        (2.0 * self.half_log_x(s)).exp()
    }

    fn check_range(&self, s: f64) -> Result<f64> {
        let slack = 1e-12 * self.length.max(1.0);
        if !(s >= -slack && s <= self.length + slack) {
            return Err(Error::OutOfRange { s, length: self.length });
        }
        Ok(s.clamp(0.0, self.length))
    }

    pub fn chart_point(&self, s: f64) -> Result<ChartPoint> {
        let s = self.check_range(s)?;
        let r = self.half_log_x(s);
        let n = self.ivp.n;
        Ok(ChartPoint::new(
            self.f_value(s).ln(),
            std::array::from_fn(|i| self.start.u[i] + n[i] * r),
        ))
    }

    /// Chart coordinates from the offset form `m + n ln(F(s) / |s + b + w|)`.
    pub fn chart_point_from_offsets(&self, s: f64) -> Result<ChartPoint> {
        let s = self.check_range(s)?;
        let f = self.f_value(s);
        let r = (f / (s + self.ivp.b + self.w).abs()).ln();
        Ok(ChartPoint::new(f.ln(), std::array::from_fn(|i| self.ivp.m[i] + self.ivp.n[i] * r)))
    }

    pub fn point(&self, s: f64) -> Result<UpVector> {
        let z = self.chart_point(s)?;
        from_chart_coords(z.z0, &z.u, &self.constants)
    }

    /// Chart velocity `dz/ds` at `s = 0`.
    pub fn initial_velocity(&self) -> [f64; 4] {
        let GeodesicIvp { a, b, n, .. } = self.ivp;
        let a2 = a * a;
        [b / a2, n[0] * self.w / a2, n[1] * self.w / a2, n[2] * self.w / a2]
    }

    /// `(z, dz/ds)` at `s = 0`, the initial state of [`geodesic_rhs`].
    pub fn initial_state(&self) -> [f64; 8] {
        let v = self.initial_velocity();
        let u = self.start.u;
        [self.start.z0, u[0], u[1], u[2], v[0], v[1], v[2], v[3]]
    }

    /// Evenly spaced samples including both ends.
    pub fn samples(&self, count: usize) -> Result<Vec<(f64, UpVector)>> {
        let count = count.max(2);
        (0..count)
            .map(|i| {
                let s = self.length * i as f64 / (count - 1) as f64;
                Ok((s, self.point(s)?))
            })
            .collect()
    }
}

/// Converts a direction in the up-sector into chart velocity and builds the arc.
///
/// The direction is normalised to unit speed. It must be timelike and
/// future-pointing.
pub fn solve_ivp(
    start: &UpVector,
    direction: [f64; 4],
    length: f64,
    constants: &ConstantsMatrix,
) -> Result<GeodesicCurve> {
    let chart = to_chart(start, constants);
    let mut velocity = [0.0; 4];
    for (p, v) in velocity.iter_mut().enumerate() {
        *v = (0..4).map(|c| constants.c_inv(p, c) * direction[c] / start[c]).sum();
    }
    GeodesicCurve::from_chart_velocity(chart, velocity, length, constants)
}

/// Integrates [`geodesic_rhs`] from the curve's initial state with RK4.
pub fn integrate_geodesic(curve: &GeodesicCurve, step: f64) -> Result<Trajectory<8>> {
    let rhs = |_s: f64, x: &[f64; 8]| -> Result<[f64; 8]> {
        Ok(geodesic_rhs(&[x[0], x[1], x[2], x[3]], &[x[4], x[5], x[6], x[7]]))
    };
    rk4_integrate(&rhs, curve.initial_state(), curve.length(), step)
}

/// A geodesic joining two fixed points.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSolution {
    pub curve: GeodesicCurve,
    pub delta_s: f64,
    pub endpoints: [UpVector; 2],
    pub eta: f64,
}

impl GeodesicSolution {
    pub fn ivp(&self) -> &GeodesicIvp {
        self.curve.ivp()
    }
}

#[derive(Debug, Clone, Copy)]
struct Chord {
    a: f64,
    eta: f64,
    delta_s: f64,
    b: f64,
    w: f64,
}

fn chord(y1: &UpVector, y2: &UpVector) -> Result<Chord> {
    let a = metric_function(y1);
    let f2 = metric_function(y2);
    let eta = angle(y1, y2);
    let sh = (eta / 2.0).sinh();
    // same as a² + F₂² − 2aF₂ cosh η, without the cancellation near η = 0
    let interval_sq = (a - f2) * (a - f2) - 4.0 * a * f2 * sh * sh;
    if interval_sq.is_nan() || interval_sq <= 0.0 {
        return Err(Error::Spacelike { interval_sq });
    }
    let delta_s = interval_sq.sqrt();
    let b = (a * f2 * (eta.cosh() - 1.0) + a * (f2 - a)) / delta_s;
    let w = a * f2 * eta.sinh() / delta_s;
    Ok(Chord { a, eta, delta_s, b, w })
}

/// The geodesic from `y1` to `y2`; the chord must be timelike.
pub fn solve_bvp(y1: &UpVector, y2: &UpVector, constants: &ConstantsMatrix) -> Result<GeodesicSolution> {
    let c = chord(y1, y2)?;
    let z1 = to_chart(y1, constants);
    let z2 = to_chart(y2, constants);
    let du: [f64; 3] = std::array::from_fn(|i| z2.u[i] - z1.u[i]);
    let len = norm3(&du);
    let n = if len > 0.0 { du.map(|v| v / len) } else { [0.0; 3] };
    let curve = GeodesicCurve::build(c.a, c.b, c.w, n, z1, c.delta_s, constants)?;
    Ok(GeodesicSolution { curve, delta_s: c.delta_s, endpoints: [*y1, *y2], eta: c.eta })
}

/// The point at arc length `s` on the geodesic from `y1` to `y2`, computed
/// componentwise from the endpoint logarithms without using a chart.
pub fn point_along(y1: &UpVector, y2: &UpVector, s: f64) -> Result<UpVector> {
    let c = chord(y1, y2)?;
    let slack = 1e-12 * c.delta_s.max(1.0);
    if !(s >= -slack && s <= c.delta_s + slack) {
        return Err(Error::OutOfRange { s, length: c.delta_s });
    }
    let s = s.clamp(0.0, c.delta_s);
    let f_s = (c.a * c.a + 2.0 * c.b * s + s * s).sqrt();
    let half_log_x = ((c.a * c.a + (c.b + c.w) * s).abs() / (c.a * f_s)).ln();
    let f1 = c.a;
    let f2 = metric_function(y2);
    let mut out = [0.0; 4];
    for (i, v) in out.iter_mut().enumerate() {
        let lambda = (y2[i] * f1 / (y1[i] * f2)).ln();
        let turn = if c.eta > 0.0 { half_log_x * lambda / c.eta } else { 0.0 };
        *v = f_s / f1 * y1[i] * turn.exp();
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow { context: "point along geodesic" });
    }
    UpVector::new(out)
}

/// `η = √(¼ Σ_A (ln(a^A F(b) / (b^A F(a))))²)`.
pub fn angle(a: &UpVector, b: &UpVector) -> f64 {
    let la = a.ln();
    let lb = b.ln();
    let d: [f64; 4] = std::array::from_fn(|i| la[i] - lb[i]);
    let mean = d.iter().sum::<f64>() / 4.0;
    (d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0).sqrt()
}

/// `√(F(a)² + F(b)² − 2F(a)F(b) cosh η)`.
pub fn distance(a: &UpVector, b: &UpVector) -> Result<f64> {
    Ok(chord(a, b)?.delta_s)
}

/// `F(a) F(b) cosh η`.
pub fn scalar_product(a: &UpVector, b: &UpVector) -> f64 {
    metric_function(a) * metric_function(b) * angle(a, b).cosh()
}

/// Signed two-dimensional angle `ln(a¹F(b) / (b¹F(a)))` with `F = √(y¹y²)`.
pub fn angle_2d(a: [f64; 2], b: [f64; 2]) -> Result<f64> {
    for (i, &v) in a.iter().chain(b.iter()).enumerate() {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NotUpSector { index: i % 2, value: v, floor: 0.0 });
        }
    }
    let fa = (a[0] * a[1]).sqrt();
    let fb = (b[0] * b[1]).sqrt();
    Ok((a[0] * fb / (b[0] * fa)).ln())
}
