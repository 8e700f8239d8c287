mod common;

use bm_core::invariance::exponents_from_rotation;
use bm_core::{
    apply_power_transform, metric_function, one_angle_exponents, rotation_exponents_in, to_chart,
    unimodular_dilatation, ConstantsMatrix, RotationAngles,
};
use common::max_diff;
use proptest::prelude::*;

fn angles() -> impl Strategy<Value = RotationAngles> {
    let pi = std::f64::consts::PI;
    (-pi..pi, -pi..pi, -pi..pi).prop_map(|(t, p, f)| RotationAngles::new(t, p, f).unwrap())
}

fn both() -> [ConstantsMatrix; 2] {
    [ConstantsMatrix::hadamard(), ConstantsMatrix::orthonormal()]
}

proptest! {
    #[test]
    fn unit_sums(r in angles()) {
        for c in both() {
            let f = *rotation_exponents_in(&r, &c).exponents();
            for i in 0..4 {
                prop_assert!((f.row(i).sum() - 1.0).abs() < 1e-14);
                prop_assert!((f.column(i).sum() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn preserves_f_and_rotates_chart(r in angles(), y in common::up_vector(3.0)) {
        for c in both() {
            let image = apply_power_transform(&rotation_exponents_in(&r, &c), &y).unwrap();
            prop_assert!((metric_function(&image) / metric_function(&y) - 1.0).abs() < 1e-12);
            let rotated = r.rotation_matrix() * nalgebra::Vector3::from(to_chart(&y, &c).u);
            prop_assert!(max_diff(to_chart(&image, &c).u, rotated.into()) < 1e-12);
        }
    }

    #[test]
    fn degree_one_homogeneity(r in angles(), y in common::up_vector(2.0), k in -2.0f64..2.0) {
        let t = rotation_exponents_in(&r, &ConstantsMatrix::hadamard());
        let k = k.exp();
        let a = apply_power_transform(&t, &y.scaled(k).unwrap()).unwrap();
        let b = apply_power_transform(&t, &y).unwrap();
        for i in 0..4 {
            prop_assert!((a[i] / (k * b[i]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn group_closure(r1 in angles(), r2 in angles(), y in common::up_vector(1.0)) {
        for c in both() {
            let t1 = rotation_exponents_in(&r1, &c);
            let t2 = rotation_exponents_in(&r2, &c);
            let composed = exponents_from_rotation(&(r1.rotation_matrix() * r2.rotation_matrix()), &c).unwrap();
            prop_assert!((t1.then_after(&t2).exponents() - composed.exponents()).amax() < 1e-10);
            let twice = apply_power_transform(&t1, &apply_power_transform(&t2, &y).unwrap()).unwrap();
            let once = apply_power_transform(&composed, &y).unwrap();
            prop_assert!(max_diff(twice.components(), once.components()) < 1e-10);
        }
    }

    #[test]
    fn one_angle_homomorphism(e1 in -3.0f64..3.0, e2 in -3.0f64..3.0, y in common::up_vector(1.0)) {
        let twice = apply_power_transform(&one_angle_exponents(e2), &apply_power_transform(&one_angle_exponents(e1), &y).unwrap()).unwrap();
        let once = apply_power_transform(&one_angle_exponents(e1 + e2), &y).unwrap();
        prop_assert!(max_diff(twice.components(), once.components()) < 1e-12);
    }

    #[test]
    fn dilatation_translates_chart(w in prop::array::uniform3(-1.0f64..1.0), y1 in common::up_vector(2.0), y2 in common::up_vector(2.0)) {
        let k = [w[0].exp(), w[1].exp(), w[2].exp(), (-w[0] - w[1] - w[2]).exp()];
        for c in both() {
            let shift = |y: &bm_core::UpVector| -> [f64; 3] {
                let (u, v) = (to_chart(y, &c).u, to_chart(&unimodular_dilatation(k, y).unwrap(), &c).u);
                [v[0] - u[0], v[1] - u[1], v[2] - u[2]]
            };
            prop_assert!(max_diff(shift(&y1), shift(&y2)) < 1e-12);
            let image = unimodular_dilatation(k, &y1).unwrap();
            prop_assert!((metric_function(&image) / metric_function(&y1) - 1.0).abs() < 1e-12);
        }
    }
}
