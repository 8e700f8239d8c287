//! One function per subcommand, each returning a [`Report`].

use bm_core::linalg::to_rows;
use bm_core::verify::{run_suite, VerifyConfig, DEFAULT_SEED};
use bm_core::{
    angle, angle_2d, apply_power_transform, boost, compose, covariant_vector, dilatation_factor, distance,
    from_chart, integrate_geodesic, kinematic_length, metric_function, metric_invariance_residual,
    metric_tensor, metricity_residual, one_angle_exponents, reciprocal, rotation_exponents_in, scalar_product,
    solve_bvp, solve_ivp, subtract, tetrad, to_chart, unimodular_dilatation, unit_vector, ChartPoint,
    ConstantsMatrix, Error, FdConfig, GeodesicCurve, RotationAngles, UpVector, Velocity3,
};
use serde_json::{json, Map, Value};

use crate::args::{ChartArgs, Command, GlobalOpts, RealList, RotateArgs};
use crate::render::{Report, Table};

#[derive(Debug)]
pub enum CommandError {
    Domain(Error),
    Usage(String),
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Domain(e)
    }
}

/// A finished command: its report and whether it counts as a verification failure.
pub struct Finished {
    pub report: Report,
    pub verify_failed: bool,
}

fn up(y: [f64; 4]) -> Result<UpVector, CommandError> {
    Ok(UpVector::new(y)?)
}

fn velocity(s: [f64; 3]) -> Result<Velocity3, CommandError> {
    Ok(Velocity3::new(s)?)
}

fn outputs(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        other => {
            let mut map = Map::new();
            map.insert("value".into(), other);
            map
        }
    }
}

pub fn paper_ref(cmd: &Command) -> &'static str {
    match cmd {
        Command::Metric { .. } => "quartic metric function and metric tensor",
        Command::Chart(_) => "indicatrix chart",
        Command::Tetrad { .. } => "tetrad decomposition of the metric tensor",
        Command::GeodesicIvp { .. } => "closed-form geodesic from initial data",
        Command::GeodesicBvp { .. } => "closed-form geodesic between fixed ends",
        Command::Angle { .. } => "angle between vectors",
        Command::Distance { .. } => "geodesic distance",
        Command::ScalarProduct { .. } => "scalar product",
        Command::Boost { .. } => "extended Lorentz boost",
        Command::Compose { .. } => "velocity composition",
        Command::Subtract { .. } => "velocity subtraction",
        Command::InvertVelocity { .. } => "reciprocal velocity",
        Command::KinLength { .. } => "kinematic length",
        Command::Rotate(_) => "indicatrix rotation as a power transform",
        Command::Dilate { .. } => "unimodular dilatation",
        Command::Verify { .. } => "cross-module invariant suite",
    }
}

/// The flag values echoed under `inputs`.
pub fn inputs(cmd: &Command) -> Value {
    match cmd {
        Command::Metric { y } | Command::Tetrad { y } | Command::KinLength { y } => json!({ "y": y.0 }),
        Command::Chart(ChartArgs { y, z }) => json!({ "y": y.map(|v| v.0), "z": z.map(|v| v.0) }),
        Command::GeodesicIvp { start, direction, length, samples, rk4_step } => json!({
            "start": start.0, "direction": direction.0, "length": length, "samples": samples, "rk4_step": rk4_step,
        }),
        Command::GeodesicBvp { y1, y2, samples } => json!({ "y1": y1.0, "y2": y2.0, "samples": samples }),
        Command::Angle { a, b } => json!({ "a": a.0, "b": b.0 }),
        Command::Distance { a, b } | Command::ScalarProduct { a, b } => json!({ "a": a.0, "b": b.0 }),
        Command::Boost { y, s } => json!({ "y": y.0, "s": s.0 }),
        Command::Compose { s1, s2 } => json!({ "s1": s1.0, "s2": s2.0 }),
        Command::Subtract { s3, s2 } => json!({ "s3": s3.0, "s2": s2.0 }),
        Command::InvertVelocity { s } => json!({ "s": s.0 }),
        Command::Rotate(RotateArgs { y, theta, psi, phi, eta }) => match eta {
            Some(eta) => json!({ "y": y.0, "eta": eta }),
            None => json!({ "y": y.0, "theta": theta, "psi": psi, "phi": phi }),
        },
        Command::Dilate { k, y } => json!({ "k": k.0, "y": y.0 }),
        Command::Verify { suite, seed } => json!({ "suite": suite.to_string(), "seed": seed }),
    }
}

pub fn config(global: &GlobalOpts) -> Value {
    json!({
        "constants": global.constants.name(),
        "tol_exact": global.tol_exact,
        "tol_fd": global.tol_fd,
        "output": global.output.to_string(),
    })
}

fn sample_table(curve: &GeodesicCurve, count: usize) -> Result<(Value, Table), CommandError> {
    let samples = curve.samples(count)?;
    let mut rows = Vec::with_capacity(samples.len());
    let mut list = Vec::with_capacity(samples.len());
    for (s, y) in &samples {
        let f = metric_function(y);
        let c = y.components();
        rows.push(vec![json!(s), json!(c[0]), json!(c[1]), json!(c[2]), json!(c[3]), json!(f)]);
        list.push(json!({ "s": s, "y": c, "F": f }));
    }
    let columns = ["s", "y1", "y2", "y3", "y4", "F"].map(String::from).to_vec();
    Ok((Value::Array(list), Table { columns, rows }))
}

fn curve_summary(curve: &GeodesicCurve) -> Value {
    let ivp = curve.ivp();
    json!({ "a": ivp.a, "b": ivp.b, "w": curve.transverse_rate(), "n": ivp.n, "m": ivp.m })
}

fn rk4_deviation(curve: &GeodesicCurve, step: f64) -> Result<f64, CommandError> {
    let traj = integrate_geodesic(curve, step)?;
    let mut worst: f64 = 0.0;
    for (s, x) in traj.iter() {
        let z = ChartPoint::new(x[0], [x[1], x[2], x[3]]);
        let y = from_chart(&z, curve.constants())?;
        let want = curve.point(s)?;
        for i in 0..4 {
            worst = worst.max((y[i] - want[i]).abs() / want[i].max(1.0));
        }
    }
    Ok(worst)
}

fn angle_output(a: &RealList, b: &RealList) -> Result<Value, CommandError> {
    match (a.0.as_slice(), b.0.as_slice()) {
        (&[a0, a1], &[b0, b1]) => Ok(json!({ "eta": angle_2d([a0, a1], [b0, b1])? })),
        (&[a0, a1, a2, a3], &[b0, b1, b2, b3]) => {
            Ok(json!({ "eta": angle(&up([a0, a1, a2, a3])?, &up([b0, b1, b2, b3])?) }))
        }
        _ => Err(CommandError::Usage(format!(
            "angle needs two vectors with 2 or 4 components each, got {} and {}",
            a.0.len(),
            b.0.len()
        ))),
    }
}

fn rotate(args: &RotateArgs, constants: &ConstantsMatrix, global: &GlobalOpts) -> Result<Value, CommandError> {
    let y = up(args.y.0)?;
    let (t, rotation) = match args.eta {
        Some(eta) => {
            if !eta.is_finite() {
                return Err(Error::Degenerate { what: "eta", value: eta }.into());
            }
            (one_angle_exponents(eta), None)
        }
        None => {
            let angles = RotationAngles::new(args.theta, args.psi, args.phi)?;
            (rotation_exponents_in(&angles, constants), Some(to_rows(&angles.rotation_matrix())))
        }
    };
    let image = apply_power_transform(&t, &y)?;
    let first = FdConfig::central(bm_core::numerics::DEFAULT_GRADIENT_STEP)?;
    let second = FdConfig::central(bm_core::numerics::DEFAULT_HESSIAN_STEP)?.with_richardson(true);
    let metricity = metricity_residual(&t, &y, &second)?.max_abs();
    let invariance = metric_invariance_residual(&t, &y, &first)?.amax();
    let chart_constants = if args.eta.is_some() { ConstantsMatrix::hadamard() } else { constants.clone() };
    Ok(json!({
        "exponents": to_rows(t.exponents()),
        "rotation": rotation,
        "image": image.components(),
        "F": metric_function(&y),
        "F_image": metric_function(&image),
        "u": to_chart(&y, &chart_constants).u,
        "u_image": to_chart(&image, &chart_constants).u,
        "metricity_residual": metricity,
        "metric_invariance_residual": invariance,
        "residuals_within_tol_fd": metricity <= global.tol_fd && invariance <= global.tol_fd,
    }))
}

pub fn execute(cmd: &Command, global: &GlobalOpts) -> Result<Finished, CommandError> {
    let constants = ConstantsMatrix::from_choice(global.constants);
    let mut table = None;
    let mut plain_lines = None;
    let mut verify_failed = false;

    let out = match cmd {
        Command::Metric { y } => {
            let y = up(y.0)?;
            let m = metric_tensor(&y);
            json!({
                "F": metric_function(&y),
                "covariant": covariant_vector(&y),
                "unit": unit_vector(&y).components(),
                "g": to_rows(&m.g),
                "g_inv": to_rows(&m.g_inv),
                "det": m.determinant(),
                "signature": m.signature(),
            })
        }
        Command::Chart(ChartArgs { y, z }) => match (y, z) {
            (Some(y), _) => {
                let y = up(y.0)?;
                let c = to_chart(&y, &constants);
                json!({ "z0": c.z0, "u": c.u, "region": c.region })
            }
            (None, Some(z)) => {
                let z = ChartPoint::new(z.0[0], [z.0[1], z.0[2], z.0[3]]);
                json!({ "y": from_chart(&z, &constants)?.components(), "region": z.region })
            }
            (None, None) => return Err(CommandError::Usage("chart needs --y or --z".into())),
        },
        Command::Tetrad { y } => {
            let t = tetrad(&up(y.0)?, &constants)?;
            json!({ "h": to_rows(&t.h), "h_recip": to_rows(&t.h_recip), "det_h": t.determinant() })
        }
        Command::GeodesicIvp { start, direction, length, samples, rk4_step } => {
            let curve = solve_ivp(&up(start.0)?, direction.0, *length, &constants)?;
            let (list, t) = sample_table(&curve, *samples)?;
            table = Some(t);
            let mut v = json!({
                "ivp": curve_summary(&curve),
                "end": curve.point(curve.length())?.components(),
                "samples": list,
            });
            if let Some(step) = rk4_step {
                v["rk4_max_deviation"] = json!(rk4_deviation(&curve, *step)?);
            }
            v
        }
        Command::GeodesicBvp { y1, y2, samples } => {
            let sol = solve_bvp(&up(y1.0)?, &up(y2.0)?, &constants)?;
            let (list, t) = sample_table(&sol.curve, *samples)?;
            table = Some(t);
            json!({ "delta_s": sol.delta_s, "eta": sol.eta, "ivp": curve_summary(&sol.curve), "samples": list })
        }
        Command::Angle { a, b } => angle_output(a, b)?,
        Command::Distance { a, b } => {
            let (a, b) = (up(a.0)?, up(b.0)?);
            json!({ "delta_s": distance(&a, &b)?, "eta": angle(&a, &b) })
        }
        Command::ScalarProduct { a, b } => json!({ "value": scalar_product(&up(a.0)?, &up(b.0)?) }),
        Command::Boost { y, s } => {
            let s = velocity(s.0)?;
            let image = boost(&y.0, &s);
            json!({
                "y_boosted": image,
                "dilatation_factor": dilatation_factor(&s),
                "kinematic_length": kinematic_length(&y.0).ok(),
                "kinematic_length_boosted": kinematic_length(&image).ok(),
            })
        }
        Command::Compose { s1, s2 } => json!({ "s3": compose(&velocity(s1.0)?, &velocity(s2.0)?)?.components() }),
        Command::Subtract { s3, s2 } => json!({ "s1": subtract(&velocity(s3.0)?, &velocity(s2.0)?)?.components() }),
        Command::InvertVelocity { s } => {
            let s = velocity(s.0)?;
            let r = reciprocal(&s);
            json!({ "s_inv": r.components(), "check": compose(&s, &r)?.components() })
        }
        Command::KinLength { y } => json!({ "value": kinematic_length(&y.0)? }),
        Command::Rotate(args) => rotate(args, &constants, global)?,
        Command::Dilate { k, y } => {
            let y = up(y.0)?;
            let image = unimodular_dilatation(k.0, &y)?;
            let (u, u_image) = (to_chart(&y, &constants).u, to_chart(&image, &constants).u);
            json!({
                "image": image.components(),
                "F": metric_function(&y),
                "F_image": metric_function(&image),
                "u_shift": [u_image[0] - u[0], u_image[1] - u[1], u_image[2] - u[2]],
            })
        }
        Command::Verify { suite, seed } => {
            let cfg = VerifyConfig { tol_exact: global.tol_exact, tol_fd: global.tol_fd, seed: seed.unwrap_or(DEFAULT_SEED) };
            let reports = run_suite(*suite, &cfg);
            let passed = reports.iter().all(|r| r.passed);
            verify_failed = !passed;
            let mut rows = Vec::new();
            for r in &reports {
                for c in &r.checks {
                    rows.push(vec![
                        json!(r.id),
                        json!(r.title),
                        json!(c.name),
                        json!(c.worst),
                        json!(if c.lower_bound { ">" } else { "<=" }),
                        json!(c.limit),
                        json!(c.samples),
                        json!(c.passed),
                    ]);
                }
            }
            let columns = ["criterion", "title", "check", "measured", "relation", "limit", "samples", "passed"];
            table = Some(Table { columns: columns.map(String::from).to_vec(), rows });
            let mut lines: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
            let failed = reports.iter().filter(|r| !r.passed).count();
            lines.push(format!("{} of {} criteria passed", reports.len() - failed, reports.len()));
            plain_lines = Some(lines);
            json!({ "passed": passed, "criteria": reports })
        }
    };

    Ok(Finished {
        report: Report {
            op: cmd.name(),
            inputs: inputs(cmd),
            outputs: outputs(out),
            paper_ref: paper_ref(cmd),
            config: config(global),
            table,
            plain_lines,
        },
        verify_failed,
    })
}
