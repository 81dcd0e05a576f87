use conic_em_core::asymptotics::verify_cgo_norm_bounds;
use conic_em_core::fields::{self, ComplexVectorField, HerglotzKernel, Smoothness};
use conic_em_core::herglotz_checks::*;
use conic_em_core::math::{c, PI};
use conic_em_core::quadrature::QuadratureSpec;
use conic_em_core::vector::CVec3;
use conic_em_core::{Background, ConeSpec, Rotation, Support, Vec3};
use proptest::prelude::*;

fn cone() -> ConeSpec {
    ConeSpec::new(Vec3::ZERO, Vec3::E3, PI / 6.0, 1.0).unwrap()
}

fn bg() -> Background {
    Background::with_omega(1.0).unwrap()
}

fn spherical_j0(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

#[test]
fn constant_kernel_wave_is_a_bessel_function() {
    let k1 = 2.0;
    let g = CVec3::new(c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.0));
    let kernel = HerglotzKernel::constant(g, k1).unwrap();
    let e = fields::herglotz_electric(&kernel, 24).unwrap();
    for x in [Vec3::ZERO, Vec3::new(0.3, -0.2, 0.1), Vec3::new(1.0, 1.0, -0.5), Vec3::new(0.0, 0.0, 2.0)] {
        let expected = g * (4.0 * PI * spherical_j0(k1 * x.norm()));
        assert!((e.eval(x) - expected).norm() <= 1e-8, "{x:?}");
    }
}

#[test]
fn remainder_ratios_are_bounded() {
    let r = remainder_bound_check(
        &cone(),
        &bg(),
        3.0,
        1.0,
        1.5,
        &[4.0, 8.0, 16.0, 32.0],
        CVec3::from(Vec3::E1),
        &QuadratureSpec::default(),
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
    let max = r.rows.iter().map(|x| x.ratio).fold(0.0, f64::max);
    let min = r.rows.iter().map(|x| x.ratio).fold(f64::INFINITY, f64::min);
    assert!(max / min <= 2.0);
}

#[test]
fn remainder_ratios_survive_rigid_motion() {
    let spec = QuadratureSpec::default();
    let dir = CVec3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.0));
    let js = [4.0, 8.0, 16.0];
    let base = remainder_bound_check(&cone(), &bg(), 3.0, 1.0, 1.5, &js, dir, &spec).unwrap();
    let rot = Rotation::about_axis(Vec3::new(0.2, 1.0, -0.4), 1.1);
    let moved = cone().transformed(&rot, Vec3::new(3.0, -1.0, 0.5));
    let other = remainder_bound_check(&moved, &bg(), 3.0, 1.0, 1.5, &js, dir, &spec).unwrap();
    for (a, b) in base.rows.iter().zip(&other.rows) {
        assert!((a.ratio - b.ratio).abs() <= 1e-8 * a.ratio, "{} {}", a.ratio, b.ratio);
    }
}

#[test]
fn cgo_norm_ratios_are_bounded() {
    let taus = [20.0, 40.0, 80.0, 160.0, 320.0];
    let r = verify_cgo_norm_bounds(&cone(), &bg(), 0.0, 1.0, &taus, &QuadratureSpec::default()).unwrap();
    assert!(r.pass);
}

fn linear_field() -> ComplexVectorField {
    ComplexVectorField::new(|x: Vec3| CVec3::from(x), Support::AllSpace, Smoothness::Analytic).unwrap()
}

#[test]
fn linear_field_vanishes_at_the_apex() {
    let rhos = [0.4, 0.2, 0.1, 0.05];
    let p = apex_average_profile(&linear_field(), &cone(), &rhos, &QuadratureSpec::default()).unwrap();
    assert!(p.vanishing, "{p:?}");
    // mean of |x| over a truncated cone of radius ρ is 3ρ/4
    for (rho, avg) in &p.rows {
        assert!((avg - 0.75 * rho).abs() < 1e-12);
    }
}

#[test]
fn constant_field_does_not_vanish() {
    let f = ComplexVectorField::constant(CVec3::new(c(0.0, 2.0), c(0.0, 0.0), c(0.0, 0.0)), Support::AllSpace);
    let p = apex_average_profile(&f, &cone(), &[0.4, 0.2, 0.1], &QuadratureSpec::default()).unwrap();
    assert!(!p.vanishing);
    assert!(p.rows.iter().all(|(_, a)| (a - 2.0).abs() < 1e-12));
}

#[test]
fn herglotz_field_with_planted_zero_vanishes() {
    let kernel = HerglotzKernel::constant(CVec3::from(Vec3::E2), 1.5).unwrap();
    let e = fields::herglotz_electric(&kernel, 12).unwrap();
    let f = subtract_value_at(&e, Vec3::ZERO);
    // the planted zero is of second order, so the linear model needs small ρ
    let p = apex_average_profile(&f, &cone(), &[0.2, 0.1, 0.05, 0.025], &QuadratureSpec::default()).unwrap();
    assert!(p.vanishing, "{p:?}");

    let odd = HerglotzKernel::new(|d: Vec3| CVec3::from(Vec3::E2) * d.x(), 1.5).unwrap();
    let eo = fields::herglotz_electric(&odd, 12).unwrap();
    let po = apex_average_profile(
        &subtract_value_at(&eo, Vec3::ZERO),
        &cone(),
        &[0.4, 0.2, 0.1, 0.05],
        &QuadratureSpec::default(),
    )
    .unwrap();
    assert!(po.vanishing, "{po:?}");
    let raw = apex_average_profile(&e, &cone(), &[0.4, 0.2, 0.1, 0.05], &QuadratureSpec::default()).unwrap();
    assert!(!raw.vanishing);
}

#[test]
fn holder_field_uses_its_exponent() {
    let f = fields::holder_source(Vec3::ZERO, CVec3::ZERO, CVec3::from(Vec3::E1), 0.5, Support::AllSpace).unwrap();
    let p = apex_average_profile(&f, &cone(), &[0.4, 0.2, 0.1, 0.05], &QuadratureSpec::default()).unwrap();
    assert!(p.vanishing, "{p:?}");
    assert!(p.extrapolated.abs() < 1e-10);
}

#[test]
fn schedule_must_decrease() {
    let spec = QuadratureSpec::default();
    assert!(apex_average_profile(&linear_field(), &cone(), &[0.1, 0.2], &spec).is_err());
    assert!(apex_average_profile(&linear_field(), &cone(), &[2.0, 0.2], &spec).is_err());
}

proptest! {
    #[test]
    fn kernel_norm_is_a_norm(a in prop::collection::vec(-2.0f64..2.0, 6), b in prop::collection::vec(-2.0f64..2.0, 6), s in -3.0f64..3.0) {
        let ka = CVec3::new(c(a[0], a[1]), c(a[2], 0.0), c(0.0, a[3]));
        let kb = CVec3::new(c(b[0], 0.0), c(b[1], b[2]), c(b[3], 0.0));
        let (ta, tb) = (a[4], b[5]);
        let ga = move |d: Vec3| ka * (ta * d.x() + d.z() * d.z());
        let gb = move |d: Vec3| kb * (tb * d.y() - d.x() * d.z());
        let na = kernel_norm(&HerglotzKernel::new(ga, 1.0).unwrap(), 12).unwrap();
        let nb = kernel_norm(&HerglotzKernel::new(gb, 1.0).unwrap(), 12).unwrap();
        let nsum = kernel_norm(&HerglotzKernel::new(move |d| ga(d) + gb(d), 1.0).unwrap(), 12).unwrap();
        let nscaled = kernel_norm(&HerglotzKernel::new(move |d| ga(d) * s, 1.0).unwrap(), 12).unwrap();
        prop_assert!(nsum <= na + nb + 1e-10);
        prop_assert!((nscaled - s.abs() * na).abs() <= 1e-10 * (1.0 + na));
    }

    #[test]
    fn average_verdicts_ignore_scalar_factors(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let s = c(re, im);
        let spec = QuadratureSpec::default();
        let rhos = [0.4, 0.2, 0.1];
        for f in [linear_field(), ComplexVectorField::constant(CVec3::from(Vec3::E3), Support::AllSpace)] {
            let a = apex_average_profile(&f, &cone(), &rhos, &spec).unwrap();
            let b = apex_average_profile(&f.scaled(s), &cone(), &rhos, &spec).unwrap();
            prop_assert_eq!(a.vanishing, b.vanishing);
            for (x, y) in a.rows.iter().zip(&b.rows) {
                prop_assert!((y.1 - s.norm() * x.1).abs() <= 1e-10 * (1.0 + y.1));
            }
        }
    }
}
