//! Property tests over random curves, points and states.

use gvf_core::curve::{self, Circle, Ellipse, EllipseParams, ImplicitCurve};
use gvf_core::gvf::{self, Direction, Gains};
use gvf_core::sim::{self, VehicleState, WindModel};
use gvf_core::Vec2;
use proptest::prelude::*;

fn ellipse_strategy() -> impl Strategy<Value = Ellipse> {
    (
        -50.0f64..50.0,
        -50.0f64..50.0,
        10.0f64..120.0,
        10.0f64..120.0,
        -3.0f64..3.0,
    )
        .prop_map(|(cx, cy, a, b, rot)| {
            Ellipse::new(EllipseParams {
                center: Vec2::new(cx, cy),
                semi_axis_a: a,
                semi_axis_b: b,
                rotation: rot,
            })
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tangent_orthogonal_and_norm_preserving(
        e in ellipse_strategy(),
        px in -300.0f64..300.0,
        py in -300.0f64..300.0,
    ) {
        let p = Vec2::new(px, py);
        let n = curve::normal(&e, p);
        let t = curve::tangent(&e, p);
        prop_assert!(t.dot(n).abs() <= 1e-12 * n.norm_sq().max(1.0));
        prop_assert!((t.norm() - n.norm()).abs() <= 1e-12 * n.norm().max(1.0));
    }

    #[test]
    fn analytic_derivatives_match_central_differences(
        e in ellipse_strategy(),
        seed in any::<u64>(),
    ) {
        let mut rng = gvf_core::rng::SplitMix64::new(seed);
        let probes: Vec<Vec2> = (0..50)
            .map(|_| Vec2::new(rng.gen_range(-200.0, 200.0), rng.gen_range(-200.0, 200.0)))
            .collect();
        let report = curve::fd_validate(&e, &probes, 1e-5).unwrap();
        prop_assert!(report.passes(1e-6), "{report:?}");
        prop_assert!(report.max_hessian_asymmetry <= 1e-12);
    }

    #[test]
    fn field_descent_identity_everywhere(
        e in ellipse_strategy(),
        px in -300.0f64..300.0,
        py in -300.0f64..300.0,
        k_e in 0.01f64..3.0,
    ) {
        let p = Vec2::new(px, py);
        let g = Gains::new(k_e, 1.0).unwrap();
        let err = e.phi(p);
        let n = e.grad(p);
        let f = gvf::field(&e, p, &g, Direction::Standard).vector;
        // e·nᵀṗ_d = −k_e e² ‖n‖², the reason following the field shrinks |e|.
        let lhs = err * n.dot(f);
        let rhs = -k_e * err * err * n.norm_sq();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1e-9));
    }

    #[test]
    fn sideslip_right_triangle(
        yaw in -3.0f64..3.0,
        beta0 in 0.0f64..1.2,
        s in 5.0f64..30.0,
    ) {
        let m = Vec2::from_angle(yaw);
        let w = m.rot_ccw() * (s * beta0.tan());
        let beta = gvf::sideslip(s * m + w, yaw).unwrap();
        prop_assert!((beta - beta0).abs() < 1e-9);
    }

    #[test]
    fn constant_wind_superposes_in_rk4(
        u in -1.5f64..1.5,
        wx in -6.0f64..6.0,
        wy in -6.0f64..6.0,
        yaw0 in -3.0f64..3.0,
    ) {
        let s = 11.0;
        let dt = 0.02;
        let wind = WindModel::constant(Vec2::new(wx, wy)).unwrap();
        let still = WindModel::constant(Vec2::ZERO).unwrap();
        let mut a = VehicleState::new(Vec2::ZERO, yaw0);
        let mut b = a;
        for i in 0..150 {
            let t = i as f64 * dt;
            a = sim::step(&a, u, s, &still, t, dt).unwrap();
            b = sim::step(&b, u, s, &wind, t, dt).unwrap();
        }
        let drift = b.position - a.position;
        let expect = Vec2::new(wx, wy) * (150.0 * dt);
        prop_assert!((drift - expect).norm() < 1e-9);
    }

    #[test]
    fn field_unit_grid_nodes_have_unit_norm(
        e in ellipse_strategy(),
        nx in 2usize..12,
        ny in 2usize..12,
    ) {
        let region = e.band_hint(4.0).unwrap();
        let g = Gains::new(0.4, 1.0).unwrap();
        let grid = sim::sample_field_grid(&e, region, nx, ny, &g, Direction::Standard).unwrap();
        prop_assert_eq!(grid.nodes.len(), nx * ny);
        for node in &grid.nodes {
            if !node.degenerate {
                prop_assert!((node.direction.norm() - 1.0).abs() <= 1e-12);
            } else {
                prop_assert_eq!(node.direction, Vec2::ZERO);
            }
        }
    }

    #[test]
    fn course_rate_antisymmetric_under_velocity_reversal_on_circles(
        r in 10.0f64..200.0,
        ang in -3.0f64..3.0,
        speed in 5.0f64..25.0,
    ) {
        // On the path the field is the tangent and reversing the ground
        // velocity flips the sign of the commanded course rate.
        let c = Circle::new(Vec2::ZERO, r).unwrap();
        let p = r * Vec2::from_angle(ang);
        let g = Gains::new(0.5, 1.0).unwrap();
        let tau = curve::tangent(&c, p).normalized().unwrap();
        let fwd = gvf::desired_course_rate(&c, p, speed * tau, &g, Direction::Standard).unwrap();
        let back = gvf::desired_course_rate(&c, p, -speed * tau, &g, Direction::Standard).unwrap();
        prop_assert!((fwd + back).abs() <= 1e-12 * fwd.abs().max(1e-12));
        prop_assert!((fwd.abs() - speed / r).abs() <= 1e-9 * (speed / r));
    }
}
