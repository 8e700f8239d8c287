#![allow(dead_code)]

use bm_core::kinematics::BRACKET_SIGNS;
use bm_core::{UpVector, Velocity3};
use proptest::prelude::*;

/// Up-sector vectors with components log-uniform in `[e^-lo, e^lo]`.
pub fn up_vector(lo: f64) -> impl Strategy<Value = UpVector> {
    prop::array::uniform4(-lo..lo).prop_map(|l| UpVector::new(l.map(f64::exp)).unwrap())
}

/// Admissible velocities as convex combinations of the tetrahedron vertices.
pub fn velocity() -> impl Strategy<Value = Velocity3> {
    prop::array::uniform4(0.05f64..1.0).prop_map(|w| {
        let total: f64 = w.iter().sum();
        let s = std::array::from_fn(|a| (0..4).map(|k| BRACKET_SIGNS[k][a] * w[k]).sum::<f64>() / total);
        Velocity3::new(s).unwrap()
    })
}

pub fn max_diff<const N: usize>(a: [f64; N], b: [f64; N]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
