use conic_em_core::math::PI;
use conic_em_core::quadrature::{self, QuadratureSpec};
use conic_em_core::{BaseBody, ConeSpec, CoronalSpec, Polytope, Rotation, Support, Vec3};
use proptest::prelude::*;
use std::sync::Arc;

proptest! {
    #[test]
    fn cone_integrals_are_rigid_motion_invariant(
        theta in 0.2f64..1.3, radius in 0.3f64..2.0,
        ax in prop::collection::vec(-1.0f64..1.0, 3), angle in 0.0f64..6.0,
        shift in prop::collection::vec(-3.0f64..3.0, 3),
    ) {
        let axis = Vec3::new(ax[0], ax[1], ax[2]);
        prop_assume!(axis.norm() > 0.1);
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, theta, radius).unwrap();
        let rot = Rotation::about_axis(axis, angle);
        let moved = cone.transformed(&rot, Vec3::new(shift[0], shift[1], shift[2]));
        let spec = QuadratureSpec::default();
        let f = |apex: Vec3, a: Vec3| move |x: Vec3| {
            let r = x - apex;
            r.dot(r) * (1.0 + r.dot(a))
        };
        let base: f64 = quadrature::integrate_cone(f(cone.apex(), cone.axis()), &cone, &spec, None).unwrap();
        let other: f64 = quadrature::integrate_cone(f(moved.apex(), moved.axis()), &moved, &spec, None).unwrap();
        prop_assert!((base - other).abs() <= 1e-10 * base.abs().max(1e-12));
        prop_assert!((moved.volume() - cone.volume()).abs() <= 1e-14 * cone.volume());
    }

    #[test]
    fn cone_membership_matches_angle(x in prop::collection::vec(-1.5f64..1.5, 3)) {
        let cone = ConeSpec::new(Vec3::new(0.1, 0.0, -0.2), Vec3::new(1.0, 1.0, 1.0), 0.6, 1.0).unwrap();
        let p = Vec3::new(x[0], x[1], x[2]);
        let r = p - cone.apex();
        prop_assume!(r.norm() > 1e-6 && (r.norm() - 1.0).abs() > 1e-6);
        let ang = conic_em_core::geometry::angle_between(r, cone.axis());
        prop_assume!((ang - 0.6).abs() > 1e-6);
        prop_assert_eq!(cone.contains(p), ang < 0.6 && r.norm() < 1.0);
    }
}

#[test]
fn coronal_volume_is_base_plus_corners() {
    let base = BaseBody::ball(Vec3::ZERO, 1.0).unwrap();
    let spike = ConeSpec::new(Vec3::new(0.0, 0.0, 1.5), Vec3::E3, PI / 8.0, 1.0).unwrap();
    let dom = CoronalSpec::new(base, vec![spike]).unwrap();
    let support = Support::Coronal(Arc::new(dom.clone()));
    let spec = QuadratureSpec::uniform(32).unwrap();
    let nodes = quadrature::support_rule(&support, &spec).unwrap();
    let vol: f64 = quadrature::integrate(&nodes, |_| 1.0);
    // oracle: indicator of the domain on a fine enclosing ball rule
    let big = quadrature::ball_rule(Vec3::new(0.0, 0.0, 0.25), 1.3, &QuadratureSpec::uniform(96).unwrap()).unwrap();
    let oracle: f64 = big.iter().filter(|n| dom.contains(n.x)).map(|n| n.w).sum();
    assert!((vol - oracle).abs() <= 1e-2 * oracle, "{vol} {oracle}");
    assert!(vol > 4.0 * PI / 3.0);
}

#[test]
fn cuboid_polytope_margin() {
    let p = Polytope::cuboid(Vec3::ZERO, Vec3::new(1.0, 2.0, 3.0)).unwrap();
    assert!((p.margin(Vec3::ZERO) - 1.0).abs() < 1e-14);
    assert!(p.margin(Vec3::new(1.5, 0.0, 0.0)) < 0.0);
}
