//! Finite differences and a fixed-step RK4 integrator.
//!
//! These are deliberately naive: they exist to cross-check the closed-form
//! results elsewhere in the crate, not to be fast.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default step for first derivatives.
pub const DEFAULT_GRADIENT_STEP: f64 = 1e-4;
/// Default step for second derivatives.
pub const DEFAULT_HESSIAN_STEP: f64 = 1e-3;
/// Default step for the RK4 integrator.
pub const DEFAULT_ODE_STEP: f64 = 1e-3;

/// Central finite-difference settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    step: f64,
    /// One level of Richardson extrapolation using steps `h` and `h/2`.
    pub richardson: bool,
}

impl FdConfig {
    pub fn central(step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidStep(step));
        }
        Ok(FdConfig { step, richardson: false })
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn extrapolate<T, F>(&self, estimate: F) -> Result<T>
    where
        F: Fn(f64) -> Result<T>,
        T: std::ops::Mul<f64, Output = T> + std::ops::Sub<Output = T>,
    {
        let coarse = estimate(self.step)?;
        if !self.richardson {
            return Ok(coarse);
        }
        let fine = estimate(self.step / 2.0)?;
        Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
    }
}

fn shifted(y: &[f64; 4], moves: &[(usize, f64)]) -> [f64; 4] {
    let mut out = *y;
    for &(i, d) in moves {
        out[i] += d;
    }
    out
}

/// Central-difference gradient of a scalar field on four reals.
pub fn fd_gradient<F>(f: F, y: &[f64; 4], cfg: &FdConfig) -> Result<[f64; 4]>
where
    F: Fn(&[f64; 4]) -> Result<f64>,
{
    let estimate = |h: f64| -> Result<nalgebra::Vector4<f64>> {
        let mut g = nalgebra::Vector4::zeros();
        for i in 0..4 {
            let fp = f(&shifted(y, &[(i, h)]))?;
            let fm = f(&shifted(y, &[(i, -h)]))?;
            g[i] = (fp - fm) / (2.0 * h);
        }
        Ok(g)
    };
    Ok(cfg.extrapolate(estimate)?.into())
}

/// Symmetric central-difference Hessian of a scalar field on four reals.
pub fn fd_hessian<F>(f: F, y: &[f64; 4], cfg: &FdConfig) -> Result<Matrix4<f64>>
where
    F: Fn(&[f64; 4]) -> Result<f64>,
{
    let estimate = |h: f64| -> Result<Matrix4<f64>> {
        let f0 = f(y)?;
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            let fp = f(&shifted(y, &[(i, h)]))?;
            let fm = f(&shifted(y, &[(i, -h)]))?;
            m[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
            for j in (i + 1)..4 {
                let fpp = f(&shifted(y, &[(i, h), (j, h)]))?;
                let fpm = f(&shifted(y, &[(i, h), (j, -h)]))?;
                let fmp = f(&shifted(y, &[(i, -h), (j, h)]))?;
                let fmm = f(&shifted(y, &[(i, -h), (j, -h)]))?;
                let v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(m)
    };
    cfg.extrapolate(estimate)
}

/// Central-difference Jacobian `J[(A, C)] = ∂f^A/∂y^C` of a map on four reals.
pub fn fd_jacobian<F>(f: F, y: &[f64; 4], cfg: &FdConfig) -> Result<Matrix4<f64>>
where
    F: Fn(&[f64; 4]) -> Result<[f64; 4]>,
{
    let estimate = |h: f64| -> Result<Matrix4<f64>> {
        let mut j = Matrix4::zeros();
        for c in 0..4 {
            let fp = f(&shifted(y, &[(c, h)]))?;
            let fm = f(&shifted(y, &[(c, -h)]))?;
            for a in 0..4 {
                j[(a, c)] = (fp[a] - fm[a]) / (2.0 * h);
            }
        }
        Ok(j)
    };
    cfg.extrapolate(estimate)
}

/// Second derivatives `D[A][(C, D)] = ∂²f^A/∂y^C∂y^D` of a map on four reals.
pub fn fd_second_derivatives<F>(f: F, y: &[f64; 4], cfg: &FdConfig) -> Result<[Matrix4<f64>; 4]>
where
    F: Fn(&[f64; 4]) -> Result<[f64; 4]>,
{
    let mut out = [Matrix4::zeros(); 4];
    for (a, slot) in out.iter_mut().enumerate() {
        *slot = fd_hessian(|p| Ok(f(p)?[a]), y, cfg)?;
    }
    Ok(out)
}

/// A first-order system `dx/ds = rhs(s, x)` of fixed dimension.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, s: f64, state: &[f64; N]) -> Result<[f64; N]>;
}

impl<const N: usize, F> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    fn rhs(&self, s: f64, state: &[f64; N]) -> Result<[f64; N]> {
        self(s, state)
    }
}

/// Samples of an integrated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub s: Vec<f64>,
    pub states: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        let i = self.s.len() - 1;
        (self.s[i], self.states[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64; N])> {
        self.s.iter().copied().zip(self.states.iter())
    }
}

fn axpy<const N: usize>(x: &[f64; N], k: &[f64; N], h: f64) -> [f64; N] {
    std::array::from_fn(|i| x[i] + h * k[i])
}

/// Classic fourth-order Runge-Kutta from `s = 0` to `s = length`.
///
/// Samples are recorded at every multiple of `step`; a final shorter step
/// lands exactly on `length`.
pub fn rk4_integrate<const N: usize, S: OdeSystem<N>>(
    sys: &S,
    y0: [f64; N],
    length: f64,
    step: f64,
) -> Result<Trajectory<N>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidStep(step));
    }
    if !(length >= 0.0 && length.is_finite()) {
        return Err(Error::InvalidLength(length));
    }
    let full_steps = (length / step).floor() as usize;
    let mut traj = Trajectory { s: Vec::with_capacity(full_steps + 2), states: Vec::with_capacity(full_steps + 2) };
    traj.s.push(0.0);
    traj.states.push(y0);

    let mut x = y0;
    let mut i = 0usize;
    loop {
        let s = i as f64 * step;
        let remaining = length - s;
        if remaining <= step * 1e-9 {
            break;
        }
        let h = remaining.min(step);
        let k1 = sys.rhs(s, &x)?;
        let k2 = sys.rhs(s + h / 2.0, &axpy(&x, &k1, h / 2.0))?;
        let k3 = sys.rhs(s + h / 2.0, &axpy(&x, &k2, h / 2.0))?;
        let k4 = sys.rhs(s + h, &axpy(&x, &k3, h))?;
        x = std::array::from_fn(|j| x[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        let s_next = if h < step { length } else { (i + 1) as f64 * step };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { s: s_next });
        }
        traj.s.push(s_next);
        traj.states.push(x);
        i += 1;
    }
    Ok(traj)
}
