//! Small helpers on fixed-size matrices that nalgebra does not provide directly.

use nalgebra::{Matrix4, SymmetricEigen};

/// Power-of-two symmetric scaling `S m S` that brings every diagonal entry
/// of `m` close to unit magnitude. Scaling by powers of two is exact, so the
/// returned factors can be used to undo it without rounding.
fn equilibrate(m: &Matrix4<f64>) -> (Matrix4<f64>, [f64; 4]) {
    let mut scale = [1.0; 4];
    for (i, s) in scale.iter_mut().enumerate() {
        let d = m[(i, i)].abs();
        if d > 0.0 && d.is_finite() {
            *s = 2f64.powi(-(d.sqrt().log2().round() as i32));
        }
    }
    let scaled = Matrix4::from_fn(|i, j| m[(i, j)] * scale[i] * scale[j]);
    (scaled, scale)
}

/// Determinant of a symmetric matrix whose entries span many orders of magnitude.
pub fn symmetric_determinant(m: &Matrix4<f64>) -> f64 {
    let (scaled, scale) = equilibrate(m);
    let s: f64 = scale.iter().product();
    scaled.determinant() / (s * s)
}

/// Eigenvalue sign counts `(positive, negative, zero)` of a symmetric matrix.
///
/// Works on the equilibrated congruent matrix, which has the same inertia.
pub fn inertia(m: &Matrix4<f64>) -> (usize, usize, usize) {
    let (scaled, _) = equilibrate(m);
    let eig = SymmetricEigen::new(scaled);
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let mut counts = (0, 0, 0);
    for &v in eig.eigenvalues.iter() {
        if v.abs() <= 1e-12 * scale {
            counts.2 += 1;
        } else if v > 0.0 {
            counts.0 += 1;
        } else {
            counts.1 += 1;
        }
    }
    counts
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &nalgebra::SMatrix<f64, R, C>,
    b: &nalgebra::SMatrix<f64, R, C>,
) -> f64 {
    (a - b).amax()
}

/// Largest entry of `|a - b| / max(1, |b|)`.
pub fn max_scaled_diff<const R: usize, const C: usize>(
    a: &nalgebra::SMatrix<f64, R, C>,
    b: &nalgebra::SMatrix<f64, R, C>,
) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

pub fn to_rows<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> [[f64; C]; R] {
    let mut out = [[0.0; C]; R];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_badly_scaled_diagonal() {
        let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(1e8, -1e-8, 3.0, 0.25));
        let expected = 1e8 * -1e-8 * 3.0 * 0.25;
        assert!((symmetric_determinant(&m) - expected).abs() < 1e-15);
    }

    #[test]
    fn inertia_counts_signs() {
        let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(2.0, -1e-9, -4e9, 0.0));
        assert_eq!(inertia(&m), (1, 2, 1));
    }
}
