//! Deterministic property suites. Each criterion samples with a seeded RNG,
//! records the worst deviation of every check and compares it with a limit.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{from_chart_coords, induced_indicatrix_metric, tetrad, to_chart, ConstantsMatrix};
use crate::geodesic::{
    angle, distance, integrate_geodesic, point_along, solve_bvp, GeodesicCurve,
};
use crate::invariance::{
    apply_power_transform, metric_invariance_residual, metricity_residual, metricity_residual_of,
    one_angle_exponents, rotation_exponents, PowerTransform, RotationAngles,
};
use crate::kinematics::{
    boost, compose, dilatation_factor, dilatation_factor_approx, kinematic_length, kinematic_matrix,
    matrix_from_velocity, reciprocal, reciprocal_polynomial, reciprocal_unnormalised_brackets,
    reciprocal_unnormalised_polynomial, relative_velocity, subtract, Velocity3, BRACKET_SIGNS,
};
use crate::linalg::{inertia, max_scaled_diff};
use crate::metric::{metric_function, metric_tensor, UpVector};
use crate::numerics::{fd_hessian, FdConfig};

pub const DEFAULT_SEED: u64 = 0x5eed_b3a1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Limit for closed-form identities.
    pub tol_exact: f64,
    /// Limit for finite-difference and ODE comparisons.
    pub tol_fd: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { tol_exact: 1e-12, tol_fd: 1e-6, seed: DEFAULT_SEED }
    }
}

/// One measured quantity inside a criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub worst: f64,
    pub limit: f64,
    /// `true` when the measured value must exceed the limit instead.
    pub lower_bound: bool,
    pub samples: usize,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, worst: f64, limit: f64, samples: usize) -> Self {
        Check { name: name.into(), worst, limit, lower_bound: false, samples, passed: worst <= limit }
    }

    fn at_least(name: &str, least: f64, limit: f64, samples: usize) -> Self {
        Check { name: name.into(), worst: least, limit, lower_bound: true, samples, passed: least > limit }
    }

    fn holds(name: &str, ok: bool, samples: usize) -> Self {
        let worst = if ok { 0.0 } else { 1.0 };
        Check { name: name.into(), worst, limit: 0.0, lower_bound: false, samples, passed: ok }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    fn new(id: u8, title: &str, checks: Vec<Check>) -> Self {
        CriterionReport { id, title: title.into(), passed: checks.iter().all(|c| c.passed), checks }
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] #{:<2} {}", self.id, self.title)?;
        for c in &self.checks {
            let op = if c.lower_bound { ">" } else { "<=" };
            write!(f, " | {}: {:.3e} {op} {:.0e} (n={})", c.name, c.worst, c.limit, c.samples)?;
        }
        Ok(())
    }
}

/// Named groups of criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Metric,
    Frames,
    Geodesics,
    Kinematics,
    Invariance,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13],
            Suite::Metric => &[1, 2, 3],
            Suite::Frames => &[4, 5],
            Suite::Geodesics => &[6, 7, 8],
            Suite::Kinematics => &[9, 10, 11, 12],
            Suite::Invariance => &[13],
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "all" => Suite::All,
            "metric" => Suite::Metric,
            "frames" => Suite::Frames,
            "geodesics" => Suite::Geodesics,
            "kinematics" => Suite::Kinematics,
            "invariance" => Suite::Invariance,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::All => "all",
            Suite::Metric => "metric",
            Suite::Frames => "frames",
            Suite::Geodesics => "geodesics",
            Suite::Kinematics => "kinematics",
            Suite::Invariance => "invariance",
        };
        f.write_str(name)
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CriterionReport> {
    suite.criteria().iter().map(|&id| run_criterion(id, cfg)).collect()
}

/// Runs one criterion; an unexpected library error is reported as a failed check.
pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> CriterionReport {
    let (title, outcome) = match id {
        1 => ("metric determinant is -1/256", criterion_1(cfg)),
        2 => ("metric signature is (+,-,-,-)", criterion_2(cfg)),
        3 => ("metric tensor is half the Hessian of F^2", criterion_3(cfg)),
        4 => ("tetrad reciprocity, determinant and decomposition", criterion_4(cfg)),
        5 => ("induced indicatrix metric is the identity", criterion_5(cfg)),
        6 => ("closed-form geodesics match RK4 and have unit speed", criterion_6(cfg)),
        7 => ("angle identities", criterion_7(cfg)),
        8 => ("hand-checkable angle and distance values", criterion_8(cfg)),
        9 => ("kinematic coefficient identities", criterion_9(cfg)),
        10 => ("kinematic length is boost invariant", criterion_10(cfg)),
        11 => ("velocity algebra", criterion_11(cfg)),
        12 => ("small-velocity expansion of the dilatation factor", criterion_12(cfg)),
        13 => ("invariance transforms", criterion_13(cfg)),
        _ => ("unknown criterion", Err(Error::Degenerate { what: "criterion id", value: id as f64 })),
    };
    let checks = outcome.unwrap_or_else(|e| vec![Check::holds(&format!("no library error ({e})"), false, 0)]);
    CriterionReport::new(id, title, checks)
}

fn rng_for(cfg: &VerifyConfig, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Up-sector point with components log-uniform in `[lo, hi]`.
pub fn random_up_vector(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> UpVector {
    UpVector::new(std::array::from_fn(|_| log_uniform(rng, lo, hi))).expect("positive sample")
}

fn random_unit3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|c| c / n);
        }
    }
}

/// Admissible velocity whose brackets all exceed `margin`.
pub fn random_velocity(rng: &mut ChaCha8Rng, margin: f64) -> Velocity3 {
    loop {
        let s: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if let Ok(v) = Velocity3::new(s) {
            if v.brackets().j.iter().all(|&j| j > margin) {
                return v;
            }
        }
    }
}

/// Timelike pair: `y2` has angle `η ≤ 1.5` from `y1` and `F(y2)/F(y1)` outside `[e^{-η}, e^η]`.
pub fn random_timelike_pair(rng: &mut ChaCha8Rng, constants: &ConstantsMatrix) -> (UpVector, UpVector) {
    let y1 = random_up_vector(rng, 0.1, 10.0);
    let z1 = to_chart(&y1, constants);
    let eta = rng.random_range(0.0..1.5);
    let n = random_unit3(rng);
    let margin = rng.random_range(0.1..2.0);
    let mut ln_ratio = eta + (1.0f64 + margin).ln();
    if rng.random_bool(0.5) {
        ln_ratio = -ln_ratio;
    }
    let u2 = std::array::from_fn(|i| z1.u[i] + eta * n[i]);
    let y2 = from_chart_coords(z1.z0 + ln_ratio, &u2, constants).expect("moderate chart point");
    (y1, y2)
}

fn both_constants() -> [ConstantsMatrix; 2] {
    [ConstantsMatrix::hadamard(), ConstantsMatrix::orthonormal()]
}

/// `|Δg_AB| / (F² / (8 y^A y^B))`, the entry error relative to the natural scale of `g`.
fn metric_relative_error(a: &Matrix4<f64>, g: &Matrix4<f64>, y: &UpVector) -> f64 {
    let f2 = metric_function(y).powi(2);
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let scale = f2 / (8.0 * y[i] * y[j]);
            worst = worst.max((a[(i, j)] - g[(i, j)]).abs() / scale);
        }
    }
    worst
}

fn criterion_1(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let y = random_up_vector(&mut rng, 1e-3, 1e3);
        let det = metric_tensor(&y).determinant();
        worst = worst.max((det + 1.0 / 256.0).abs());
    }
    Ok(vec![Check::at_most("|det g + 1/256|", worst, 1e-10, 1000)])
}

fn criterion_2(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    // same sample as criterion 1
    let mut rng = rng_for(cfg, 1);
    let mut failures = 0usize;
    for _ in 0..1000 {
        let y = random_up_vector(&mut rng, 1e-3, 1e3);
        if inertia(&metric_tensor(&y).g) != (1, 3, 0) {
            failures += 1;
        }
    }
    Ok(vec![Check::at_most("points with wrong signature", failures as f64, 0.0, 1000)])
}

fn criterion_3(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 3);
    let fd = FdConfig::central(1e-4)?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let y = random_up_vector(&mut rng, 0.5, 2.0);
        let h = fd_hessian(|p| Ok(metric_function(&UpVector::new(*p)?).powi(2)), &y.components(), &fd)?;
        worst = worst.max((h * 0.5 - metric_tensor(&y).g).amax());
    }
    Ok(vec![Check::at_most("|g - Hess(F^2)/2|", worst, cfg.tol_fd, 100)])
}

fn criterion_4(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 4);
    let (mut recip, mut det, mut decomp, mut decomp_inv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut n = 0;
    for _ in 0..100 {
        let y = random_up_vector(&mut rng, 1e-3, 1e3);
        let g = metric_tensor(&y);
        for c in both_constants() {
            let t = tetrad(&y, &c)?;
            recip = recip.max((t.h * t.h_recip - Matrix4::identity()).amax());
            det = det.max((16.0 * t.determinant().abs() - 1.0).abs());
            decomp = decomp.max(metric_relative_error(&t.metric(), &g.g, &y));
            let f2 = metric_function(&y).powi(2);
            let inv_err = Matrix4::from_fn(|i, j| {
                (t.inverse_metric()[(i, j)] - g.g_inv[(i, j)]).abs() / (2.0 * y[i] * y[j] / f2)
            });
            decomp_inv = decomp_inv.max(inv_err.amax());
            n += 1;
        }
    }
    Ok(vec![
        Check::at_most("|h h^-1 - I|", recip, cfg.tol_exact, n),
        Check::at_most("|16 |det h| - 1|", det, cfg.tol_exact, n),
        Check::at_most("tetrad metric vs g (relative)", decomp, cfg.tol_exact, n),
        Check::at_most("tetrad inverse metric vs g^-1 (relative)", decomp_inv, cfg.tol_exact, n),
    ])
}

fn criterion_5(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    for c in both_constants() {
        for &a in &grid {
            for &b in &grid {
                for &d in &grid {
                    let m = induced_indicatrix_metric(&[a, b, d], &c)?;
                    worst = worst.max((m - Matrix3::identity()).amax());
                    n += 1;
                }
            }
        }
    }
    Ok(vec![Check::at_most("|i_ab - delta_ab|", worst, cfg.tol_exact, n)])
}

fn criterion_6(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 6);
    let (mut deviation, mut speed) = (0.0f64, 0.0f64);
    let h = 1e-5;
    let constants = both_constants();
    for k in 0..100 {
        let c = &constants[k % 2];
        let start = random_up_vector(&mut rng, 0.5, 2.0);
        let a = metric_function(&start);
        let beta: f64 = rng.random_range(0.0..1.5);
        let n = random_unit3(&mut rng);
        let velocity = [beta.cosh() / a, beta.sinh() * n[0] / a, beta.sinh() * n[1] / a, beta.sinh() * n[2] / a];
        let curve = GeodesicCurve::from_chart_velocity(to_chart(&start, c), velocity, 3.0, c)?;
        let traj = integrate_geodesic(&curve, 1e-3)?;
        for (s, x) in traj.iter() {
            let y_ode = from_chart_coords(x[0], &[x[1], x[2], x[3]], c)?;
            let y_cf = curve.point(s)?;
            for i in 0..4 {
                deviation = deviation.max((y_ode[i] - y_cf[i]).abs() / y_cf[i].max(1.0));
            }
        }
        for j in 1..20 {
            let s = 3.0 * j as f64 / 20.0;
            let v = (curve.point(s + h)?.as_vector() - curve.point(s - h)?.as_vector()) / (2.0 * h);
            let g = metric_tensor(&curve.point(s)?);
            speed = speed.max((g.inner(&v, &v) - 1.0).abs());
        }
    }
    Ok(vec![
        Check::at_most("closed form vs RK4 (componentwise, scaled)", deviation, cfg.tol_fd, 100),
        Check::at_most("|g(v, v) - 1|", speed, 1e-8, 100 * 19),
    ])
}

fn criterion_7(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 7);
    let (mut chart, mut symmetry, mut additivity, mut x_law) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let n = 200;
    let constants = both_constants();
    for k in 0..n {
        let c = &constants[k % 2];
        let (y1, y2) = random_timelike_pair(&mut rng, c);
        let eta = angle(&y1, &y2);
        let u1 = to_chart(&y1, c).u;
        let u2 = to_chart(&y2, c).u;
        let d = ((u1[0] - u2[0]).powi(2) + (u1[1] - u2[1]).powi(2) + (u1[2] - u2[2]).powi(2)).sqrt();
        chart = chart.max((eta - d).abs());
        symmetry = symmetry.max((eta - angle(&y2, &y1)).abs());
        let sol = solve_bvp(&y1, &y2, c)?;
        let t = rng.random_range(0.05..0.95);
        let p = point_along(&y1, &y2, t * sol.delta_s)?;
        additivity = additivity.max((angle(&y1, &p) + angle(&p, &y2) - eta).abs());
        x_law = x_law.max((sol.curve.x_factor(sol.delta_s) / (2.0 * sol.eta).exp() - 1.0).abs());
    }
    Ok(vec![
        Check::at_most("|eta - |du||", chart, cfg.tol_exact, n),
        Check::at_most("eta symmetry", symmetry, 1e-10, n),
        Check::at_most("eta additivity along geodesic", additivity, 1e-10, n),
        Check::at_most("|X(ds) / e^(2 eta) - 1|", x_law, cfg.tol_exact, n),
    ])
}

fn criterion_8(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let e = std::f64::consts::E;
    let one = UpVector::ones();
    let e1 = UpVector::new([e, 1.0, 1.0, 1.0])?;
    let eta = angle(&e1, &one);
    let d = distance(&one, &UpVector::new([4.0; 4])?)?;
    let spacelike = matches!(distance(&one, &e1), Err(Error::Spacelike { .. }))
        && matches!(solve_bvp(&one, &e1, &ConstantsMatrix::hadamard()), Err(Error::Spacelike { .. }));
    Ok(vec![
        Check::at_most("|eta - sqrt(3)/4|", (eta - 3f64.sqrt() / 4.0).abs(), cfg.tol_exact, 1),
        Check::at_most("|distance - 3|", (d - 3.0).abs(), cfg.tol_exact, 1),
        Check::holds("spacelike pair raises the spacelike error", spacelike, 1),
    ])
}

fn criterion_9(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 9);
    let (mut det, mut quartic, mut group, mut through_velocity) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let n = 100;
    for _ in 0..n {
        let a = random_up_vector(&mut rng, 0.1, 10.0);
        let b = random_up_vector(&mut rng, 0.1, 10.0);
        let c = random_up_vector(&mut rng, 0.1, 10.0);
        let nab = kinematic_matrix(&a, &b)?;
        let nbc = kinematic_matrix(&b, &c)?;
        let nac = kinematic_matrix(&a, &c)?;
        det = det.max((nab.determinant() - 1.0).abs());
        quartic = quartic.max((nab.quartic_identity() - 1.0).abs());
        group = group.max(max_scaled_diff(&(nab.n * nbc.n), &nac.n));
        let rebuilt = matrix_from_velocity(&relative_velocity(&a, &b)?);
        through_velocity = through_velocity.max(max_scaled_diff(&rebuilt.n, &nab.n));
    }
    Ok(vec![
        Check::at_most("|det N - 1|", det, cfg.tol_exact, n),
        Check::at_most("|quartic identity - 1|", quartic, cfg.tol_exact, n),
        Check::at_most("group property (scaled)", group, cfg.tol_exact, n),
        Check::at_most("N from relative velocity (scaled)", through_velocity, cfg.tol_exact, n),
    ])
}

fn criterion_10(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 10);
    let mut worst: f64 = 0.0;
    let n = 1000;
    for _ in 0..n {
        let combos: [f64; 4] = std::array::from_fn(|_| log_uniform(&mut rng, 0.1, 2.0));
        let mut y = [combos.iter().sum::<f64>() / 4.0, 0.0, 0.0, 0.0];
        for (a, v) in y.iter_mut().enumerate().skip(1) {
            *v = (0..4).map(|k| BRACKET_SIGNS[k][a - 1] * combos[k]).sum::<f64>() / 4.0;
        }
        let s = random_velocity(&mut rng, 0.1);
        let before = kinematic_length(&y)?;
        let after = kinematic_length(&boost(&y, &s))?;
        worst = worst.max((after / before - 1.0).abs());
    }
    let lorentz = boost(&[1.0, 0.0, 0.0, 0.0], &Velocity3::new([0.5, 0.0, 0.0])?);
    let want = [1.154701, 0.577350, 0.0, 0.0];
    let lorentz_err = (0..4).map(|i| (lorentz[i] - want[i]).abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most("relative change of kinematic length", worst, cfg.tol_exact, n),
        // reference digits are rounded to 6 places
        Check::at_most("1D boost vs Lorentz digits", lorentz_err, 1e-6, 1),
        Check::at_most(
            "1D boost vs exact Lorentz",
            (lorentz[0] - 1.0 / 0.75f64.sqrt()).abs().max((lorentz[1] - 0.5 / 0.75f64.sqrt()).abs()),
            1e-9,
            1,
        ),
    ])
}

fn criterion_11(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 11);
    let half = Velocity3::new([0.5, 0.0, 0.0])?;
    let einstein = compose(&half, &half)?.components();
    let einstein_err = (einstein[0] - 0.8).abs().max(einstein[1].abs()).max(einstein[2].abs());
    let (mut round_trip, mut inverse, mut forms, mut unnormalised, mut symmetric) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let n = 1000;
    let max3 = |a: [f64; 3], b: [f64; 3]| (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
    for _ in 0..n {
        let s1 = random_velocity(&mut rng, 0.1);
        let s2 = random_velocity(&mut rng, 0.1);
        let s3 = compose(&s1, &s2)?;
        round_trip = round_trip.max(max3(subtract(&s3, &s2)?.components(), s1.components()));
        symmetric = symmetric.max(max3(s3.components(), compose(&s2, &s1)?.components()));
        inverse = inverse.max(max3(compose(&s1, &reciprocal(&s1))?.components(), [0.0; 3]));
        forms = forms.max(max3(reciprocal(&s1).components(), reciprocal_polynomial(&s1).components()));
        unnormalised = unnormalised.max(max3(reciprocal_unnormalised_brackets(&s1), reciprocal_unnormalised_polynomial(&s1)));
    }
    Ok(vec![
        Check::at_most("(0.5,0,0)+(0.5,0,0) vs (0.8,0,0)", einstein_err, cfg.tol_exact, 1),
        Check::at_most("subtract(compose(s1, s2), s2) vs s1", round_trip, cfg.tol_exact, n),
        Check::at_most("compose(s, reciprocal(s))", inverse, cfg.tol_exact, n),
        Check::at_most("reciprocal bracket vs polynomial form", forms, cfg.tol_exact, n),
        Check::at_most("unnormalised reciprocal forms agree", unnormalised, cfg.tol_exact, n),
        Check::at_most("composition symmetry", symmetric, cfg.tol_exact, n),
    ])
}

fn criterion_12(_cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    let steps = 15;
    for i in -steps..=steps {
        for j in -steps..=steps {
            for k in -steps..=steps {
                let s = [i as f64, j as f64, k as f64].map(|v| 0.15 * v / steps as f64);
                let norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
                let exact = dilatation_factor(&Velocity3::new(s)?);
                let diff = (exact - dilatation_factor_approx(&s)).abs();
                n += 1;
                if norm > 0.0 {
                    worst = worst.max(diff / norm.powi(5));
                } else if diff > 0.0 {
                    worst = f64::INFINITY;
                }
            }
        }
    }
    Ok(vec![Check::at_most("max |A - (A1 + A2)| / |s|^5", worst, 5.0, n)])
}

fn negative_control(t: &PowerTransform, eps: f64) -> Matrix4<f64> {
    let mut f = *t.exponents();
    f[(0, 0)] += eps;
    f[(0, 1)] -= eps;
    f[(1, 0)] -= eps;
    f[(1, 1)] += eps;
    f
}

fn criterion_13(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = rng_for(cfg, 13);
    let pi = std::f64::consts::PI;
    let angles: Vec<RotationAngles> = (0..20)
        .map(|_| {
            RotationAngles::new(rng.random_range(-pi..pi), rng.random_range(-pi..pi), rng.random_range(-pi..pi))
        })
        .collect::<Result<_>>()?;
    let points: Vec<UpVector> = (0..20).map(|_| random_up_vector(&mut rng, 0.5, 2.0)).collect();
    let first = FdConfig::central(1e-4)?;
    let second = FdConfig::central(1e-3)?.with_richardson(true);
    let (mut f_inv, mut tensor, mut metricity, mut control) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    let mut n = 0;
    for a in &angles {
        let t = rotation_exponents(a);
        let bad = negative_control(&t, 0.2);
        for y in &points {
            let img = apply_power_transform(&t, y)?;
            f_inv = f_inv.max((metric_function(&img) / metric_function(y) - 1.0).abs());
            tensor = tensor.max(metric_invariance_residual(&t, y, &first)?.amax());
            metricity = metricity.max(metricity_residual(&t, y, &second)?.max_abs());
            control = control.min(metricity_residual_of(&bad, y, &second)?.max_abs());
            n += 1;
        }
    }

    let (mut specialisation, mut group) = (0.0f64, 0.0f64);
    let mut m = 0;
    for _ in 0..20 {
        let eta = rng.random_range(-pi..pi);
        let psi = rng.random_range(-pi..pi);
        let euler = rotation_exponents(&RotationAngles::new(0.0, psi, -eta - psi)?);
        specialisation = specialisation.max((one_angle_exponents(eta).exponents() - euler.exponents()).amax());
        let eta2 = rng.random_range(-pi..pi);
        let product = one_angle_exponents(eta).then_after(&one_angle_exponents(eta2));
        group = group.max((product.exponents() - one_angle_exponents(eta + eta2).exponents()).amax());
        for y in points.iter().take(5) {
            let twice = apply_power_transform(&one_angle_exponents(eta), &apply_power_transform(&one_angle_exponents(eta2), y)?)?;
            let once = apply_power_transform(&one_angle_exponents(eta + eta2), y)?;
            let d = (Vector4::from(twice.components()) - Vector4::from(once.components())).amax();
            group = group.max(d);
        }
        m += 1;
    }
    Ok(vec![
        Check::at_most("|F(t(y)) / F(y) - 1|", f_inv, cfg.tol_exact, n),
        Check::at_most("metric tensor invariance residual", tensor, cfg.tol_fd, n),
        Check::at_most("metricity residual", metricity, cfg.tol_fd, n),
        Check::at_least("negative control metricity residual (min)", control, 1e-2, n),
        Check::at_most("one-angle vs Euler specialisation", specialisation, 1e-14, m),
        Check::at_most("one-angle group law", group, 1e-10, m),
    ])
}
