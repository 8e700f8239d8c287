//! Command-line grammar.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bm_core::verify::Suite;
use bm_core::ConstantsChoice;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Fixed-length list of comma-separated reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reals<const N: usize>(pub [f64; N]);

impl<const N: usize> FromStr for Reals<N> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = RealList::from_str(s)?.0;
        let got = v.len();
        v.try_into().map(Reals).map_err(|_| format!("expected {N} comma-separated numbers, got {got}"))
    }
}

/// Comma-separated reals of any length.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|p| {
                let p = p.trim();
                p.parse::<f64>().map_err(|_| format!("`{p}` is not a number"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(RealList)
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {v}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Plain => "plain",
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "bm", version, about = "Berwald-Moor quartic Finsler geometry toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Constant set defining the indicatrix chart.
    #[arg(long, global = true, env = "BM_CONSTANTS", default_value = "hadamard")]
    pub constants: ConstantsChoice,

    /// Tolerance for closed-form identities.
    #[arg(long, global = true, default_value_t = 1e-12, value_parser = positive)]
    pub tol_exact: f64,

    /// Tolerance for finite-difference and ODE comparisons.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive)]
    pub tol_fd: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    /// JSON object whose keys fill flags not given on the command line.
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Metric function, covariant vector and metric tensor at a point.
    Metric {
        #[arg(long, allow_hyphen_values = true)]
        y: Reals<4>,
    },
    /// Chart coordinates of a point, or the point of given chart coordinates.
    Chart(ChartArgs),
    /// Tetrad and reciprocal tetrad at a point.
    Tetrad {
        #[arg(long, allow_hyphen_values = true)]
        y: Reals<4>,
    },
    /// Geodesic from a start point and a direction.
    GeodesicIvp {
        #[arg(long, allow_hyphen_values = true)]
        start: Reals<4>,
        #[arg(long, allow_hyphen_values = true)]
        direction: Reals<4>,
        #[arg(long, allow_hyphen_values = true)]
        length: f64,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        /// Also integrate with RK4 at this step and report the deviation.
        #[arg(long, value_parser = positive)]
        rk4_step: Option<f64>,
    },
    /// Geodesic joining two points.
    GeodesicBvp {
        #[arg(long, allow_hyphen_values = true)]
        y1: Reals<4>,
        #[arg(long, allow_hyphen_values = true)]
        y2: Reals<4>,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Angle between two vectors (four components, or two for the planar case).
    Angle {
        #[arg(long, allow_hyphen_values = true)]
        a: RealList,
        #[arg(long, allow_hyphen_values = true)]
        b: RealList,
    },
    /// Geodesic distance between two points.
    Distance {
        #[arg(long, allow_hyphen_values = true)]
        a: Reals<4>,
        #[arg(long, allow_hyphen_values = true)]
        b: Reals<4>,
    },
    /// Scalar product of two vectors.
    ScalarProduct {
        #[arg(long, allow_hyphen_values = true)]
        a: Reals<4>,
        #[arg(long, allow_hyphen_values = true)]
        b: Reals<4>,
    },
    /// Extended Lorentz boost of frame components.
    Boost {
        #[arg(long, allow_hyphen_values = true)]
        y: Reals<4>,
        #[arg(long, allow_hyphen_values = true)]
        s: Reals<3>,
    },
    /// Composition of two relative velocities.
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        s1: Reals<3>,
        #[arg(long, allow_hyphen_values = true)]
        s2: Reals<3>,
    },
    /// The velocity s1 with compose(s1, s2) = s3.
    Subtract {
        #[arg(long, allow_hyphen_values = true)]
        s3: Reals<3>,
        #[arg(long, allow_hyphen_values = true)]
        s2: Reals<3>,
    },
    /// Inverse of a relative velocity under composition.
    InvertVelocity {
        #[arg(long, allow_hyphen_values = true)]
        s: Reals<3>,
    },
    /// Quartic kinematic length of frame components.
    KinLength {
        #[arg(long, allow_hyphen_values = true)]
        y: Reals<4>,
    },
    /// Power transform realising an indicatrix rotation.
    Rotate(RotateArgs),
    /// Componentwise scaling with unit product.
    Dilate {
        #[arg(long, allow_hyphen_values = true)]
        k: Reals<4>,
        #[arg(long, allow_hyphen_values = true)]
        y: Reals<4>,
    },
    /// Run the invariant suites.
    Verify {
        #[arg(long, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ChartArgs {
    /// Up-sector point to map into the chart.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<Reals<4>>,
    /// Chart coordinates `z0,u1,u2,u3` to map back.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<Reals<4>>,
}

#[derive(Debug, Clone, Args)]
pub struct RotateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub y: Reals<4>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub psi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub phi: f64,
    /// Use the one-angle coefficients instead of Euler angles.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["theta", "psi", "phi"])]
    pub eta: Option<f64>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Metric { .. } => "metric",
            Command::Chart(_) => "chart",
            Command::Tetrad { .. } => "tetrad",
            Command::GeodesicIvp { .. } => "geodesic-ivp",
            Command::GeodesicBvp { .. } => "geodesic-bvp",
            Command::Angle { .. } => "angle",
            Command::Distance { .. } => "distance",
            Command::ScalarProduct { .. } => "scalar-product",
            Command::Boost { .. } => "boost",
            Command::Compose { .. } => "compose",
            Command::Subtract { .. } => "subtract",
            Command::InvertVelocity { .. } => "invert-velocity",
            Command::KinLength { .. } => "kin-length",
            Command::Rotate(_) => "rotate",
            Command::Dilate { .. } => "dilate",
            Command::Verify { .. } => "verify",
        }
    }
}
