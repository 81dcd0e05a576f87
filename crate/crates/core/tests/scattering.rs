use conic_em_core::fields::{self, maxwell_residual, ComplexVectorField};
use conic_em_core::math::{c, cexp, i, PI};
use conic_em_core::quadrature::{self, QuadratureSpec};
use conic_em_core::scattering::*;
use conic_em_core::{Background, CVec3, Complex64, ConeSpec, Rotation, Support, Vec3};

fn ball(center: Vec3, radius: f64) -> Support {
    Support::Ball { center, radius }
}

fn dipole(center: Vec3, a: f64, pol: CVec3) -> SourcePair {
    let vol = 4.0 * PI * a * a * a / 3.0;
    let support = ball(center, a);
    SourcePair::electric(ComplexVectorField::constant(pol * (1.0 / vol), support.clone()), support).unwrap()
}

fn cone_source() -> SourcePair {
    let cone = ConeSpec::new(Vec3::new(0.1, -0.2, 0.0), Vec3::new(0.3, 0.2, 1.0), PI / 4.0, 1.0).unwrap();
    let support = Support::Cone(cone);
    let j1 = ComplexVectorField::new(
        |x: Vec3| CVec3::new(c(x.y(), 0.5), c(1.0, 0.0), c(0.0, x.x())),
        support.clone(),
        fields::Smoothness::Analytic,
    )
    .unwrap();
    let j2 = ComplexVectorField::constant(CVec3::new(c(0.2, 0.0), c(0.0, -1.0), c(1.0, 0.3)), support.clone());
    SourcePair::new(j1, j2, support).unwrap()
}

#[test]
fn small_ball_matches_hertzian_dipole() {
    let bg = Background::with_omega(1.0).unwrap();
    let pol = CVec3::new(c(1.0, 0.0), c(0.0, 0.5), c(-0.3, 0.0));
    let p = far_field_from_source(&dipole(Vec3::ZERO, 0.05, pol), &bg, 12, &QuadratureSpec::default()).unwrap();
    let k = i() * bg.omega * bg.mu0 * (1.0 / (4.0 * PI));
    let mut worst: f64 = 0.0;
    for (n, e) in p.nodes.iter().zip(&p.e_inf) {
        let expect = pol.project_out(n.dir) * k;
        worst = worst.max((*e - expect).norm() / (pol.norm() * k.norm()));
    }
    assert!(worst <= 0.02, "dipole shape error {worst}");
    assert!(far_field_equiv_check(&p) <= 1e-8);
}

#[test]
fn large_radius_extraction_agrees_with_far_field_kernel() {
    let bg = Background::new(1.5, 1.2, 0.8).unwrap();
    let src = cone_source();
    let spec = QuadratureSpec::new(12, 10, 12, false).unwrap();
    let pattern = far_field_from_source(&src, &bg, 4, &spec).unwrap();
    let k = bg.k();
    for idx in [0, 5, 13, 27] {
        let dir = pattern.nodes[idx].dir;
        let radii = [50.0 / k, 100.0 / k, 200.0 / k];
        let samples: Vec<(CVec3, CVec3)> = radii
            .iter()
            .map(|&r| {
                let (e, h) = radiated_field(&src, &bg, dir * r, &spec).unwrap();
                let s = cexp(c(0.0, -k * r)) * r;
                (e * s, h * s)
            })
            .collect();
        // quadratic in s = 1/R through the three radii, evaluated at s = 0
        let extrapolate = |v: [CVec3; 3]| {
            let s = radii.map(|r| 1.0 / r);
            let mut out = CVec3::ZERO;
            for j in 0..3 {
                let w: f64 = (0..3).filter(|&m| m != j).map(|m| -s[m] / (s[j] - s[m])).product();
                out += v[j] * w;
            }
            out
        };
        let e = extrapolate([samples[0].0, samples[1].0, samples[2].0]);
        let h = extrapolate([samples[0].1, samples[1].1, samples[2].1]);
        let scale = pattern.e_inf[idx].norm().max(1e-3);
        assert!((e - pattern.e_inf[idx]).norm() / scale < 1e-4, "E at {idx}");
        assert!((h - pattern.h_inf[idx]).norm() / scale < 1e-4, "H at {idx}");
    }
}

#[test]
fn nonradiating_construction_has_zero_far_field() {
    let bg = Background::with_omega(2.0).unwrap();
    let e0 = fields::bump_field(Vec3::ZERO, 0.5, CVec3::new(c(1.0, 0.0), c(0.0, 0.5), c(0.2, 0.0))).unwrap();
    let h0 = fields::bump_field(Vec3::ZERO, 0.5, CVec3::new(c(0.0, 0.3), c(-1.0, 0.0), c(0.4, 0.1))).unwrap();
    let src = nonradiating_source(&e0, &h0, &bg).unwrap();
    let spec = QuadratureSpec::default();
    let nodes = quadrature::support_rule(&src.support, &spec).unwrap();
    let peak = nodes.iter().map(|n| src.j1.eval(n.x).norm().max(src.j2.eval(n.x).norm())).fold(0.0, f64::max);
    let volume = 4.0 * PI * 0.125 / 3.0;
    let p = far_field_from_source(&src, &bg, 16, &spec).unwrap();
    assert!(p.max_norm() <= 1e-6 * peak * volume, "{} vs {}", p.max_norm(), peak * volume);
    assert!(far_field_equiv_check(&p) <= 1e-8);
    // outside the ball and on its boundary the sources vanish identically
    for x in [Vec3::new(0.5, 0.0, 0.0), Vec3::new(0.0, 0.7, 0.1)] {
        assert_eq!(src.j1.eval(x), CVec3::ZERO);
        assert_eq!(src.j2.eval(x), CVec3::ZERO);
    }
}

#[test]
fn non_compact_generators_are_rejected() {
    let bg = Background::with_omega(1.0).unwrap();
    let (e, h) = fields::plane_wave_incident(CVec3::from(Vec3::E1), Vec3::E3, &bg).unwrap();
    assert!(matches!(nonradiating_source(&e, &h, &bg), Err(conic_em_core::Error::NonCompactSupport)));
}

#[test]
fn forward_map_is_linear() {
    let bg = Background::with_omega(1.0).unwrap();
    let spec = QuadratureSpec::new(16, 12, 12, false).unwrap();
    let a = cone_source();
    let b = dipole(Vec3::new(0.2, 0.1, 0.3), 0.2, CVec3::new(c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)));
    let (al, be) = (c(0.7, -1.3), c(-0.4, 2.0));
    let pa = far_field_from_source(&a, &bg, 8, &spec).unwrap();
    let pb = far_field_from_source(&b, &bg, 8, &spec).unwrap();
    let combined = pa.scaled(al).plus(&pb.scaled(be)).unwrap();
    let direct = far_field_from_source(&a.scaled(al), &bg, 8, &spec)
        .unwrap()
        .plus(&far_field_from_source(&b.scaled(be), &bg, 8, &spec).unwrap())
        .unwrap();
    let d = farfield_distance(&combined, &direct).unwrap();
    assert!(d <= 1e-9 * combined.l2_norm());
}

#[test]
fn translation_multiplies_by_phase() {
    let bg = Background::with_omega(1.3).unwrap();
    let pol = CVec3::new(c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0));
    let t = Vec3::new(0.4, -0.7, 0.25);
    let spec = QuadratureSpec::default();
    let p0 = far_field_from_source(&dipole(Vec3::ZERO, 0.05, pol), &bg, 8, &spec).unwrap();
    let p1 = far_field_from_source(&dipole(t, 0.05, pol), &bg, 8, &spec).unwrap();
    for ((n, a), b) in p0.nodes.iter().zip(&p0.e_inf).zip(&p1.e_inf) {
        let expect = *a * cexp(c(0.0, -bg.k() * n.dir.dot(t)));
        assert!((*b - expect).norm() <= 1e-6 * a.norm().max(1e-12));
    }
}

#[test]
fn rotated_dipole_distance_matches_closed_form() {
    let bg = Background::with_omega(1.0).unwrap();
    let spec = QuadratureSpec::default();
    let c1 = CVec3::from(Vec3::E3);
    let rot = Rotation::about_axis(Vec3::E1, 0.6);
    let c2 = CVec3::from(rot.apply(Vec3::E3));
    let pa = far_field_from_source(&dipole(Vec3::ZERO, 0.05, c1), &bg, 16, &spec).unwrap();
    let pb = far_field_from_source(&dipole(Vec3::ZERO, 0.05, c2), &bg, 16, &spec).unwrap();
    let d = farfield_distance(&pa, &pb).unwrap();
    let expect = bg.omega * bg.mu0 / (4.0 * PI) * (8.0 * PI / 3.0f64).sqrt() * (c1 - c2).norm();
    assert!((d - expect).abs() <= 0.02 * expect, "{d} vs {expect}");
    assert!(d > 0.0);
}

#[test]
fn every_pattern_is_tangential_and_reciprocal() {
    for bg in [Background::with_omega(1.0).unwrap(), Background::new(2.0, 3.0, 0.5).unwrap()] {
        let p = far_field_from_source(&cone_source(), &bg, 10, &QuadratureSpec::default()).unwrap();
        let scale = p.max_norm();
        assert!(far_field_equiv_check(&p) <= 1e-8 * scale.max(1.0));
        assert!(p.tangential_residual() <= 1e-8 * scale.max(1.0));
    }
}

#[test]
fn induced_sources_satisfy_background_equations() {
    let bg = Background::with_omega(1.5).unwrap();
    let (eps1, mu1, sigma1) = (2.0, 1.3, 0.4);
    let support = ball(Vec3::ZERO, 1.0);
    let med = MediumParams::homogeneous(support, eps1, mu1, sigma1, bg).unwrap();
    // plane wave of the medium itself: ∇∧E − iωμ₁H = 0, ∇∧H + iωγ₁E = 0
    let gamma = c(eps1, sigma1 / bg.omega);
    let k1 = (gamma * mu1).sqrt() * bg.omega;
    let d = Vec3::new(1.0, 2.0, 2.0).normalized().unwrap();
    let p = CVec3::from(Vec3::new(2.0, -1.0, 0.0).normalized().unwrap());
    let kappa = CVec3::from(d) * (i() * k1);
    let e = ComplexVectorField::exponential(p, kappa);
    let h = ComplexVectorField::exponential(p.crossed_by(d) * (k1 / (bg.omega * mu1)), kappa);
    let src = induced_sources_from_medium(&med, &e, &h).unwrap();
    let x = Vec3::new(0.1, -0.2, 0.15);
    let res = |step: f64| {
        let (r1, r2) = maxwell_residual(&e, &h, &src.j1, &src.j2, &bg, x, step).unwrap();
        r1.norm() + r2.norm()
    };
    let (coarse, fine) = (res(1e-2), res(5e-3));
    assert!(fine < 1e-3, "{fine}");
    assert!(coarse / fine > 3.5, "not second order: {coarse} {fine}");
    // reversing the sign of J₂ leaves an O(1) residual
    let flipped = src.j2.scaled(c(-1.0, 0.0));
    let (_, r2) = maxwell_residual(&e, &h, &src.j1, &flipped, &bg, x, 5e-3).unwrap();
    assert!(r2.norm() > 0.1);
}

#[test]
fn conductivity_only_enters_gamma() {
    let bg = Background::with_omega(2.0).unwrap();
    let support = ball(Vec3::ZERO, 1.0);
    let med = MediumParams::homogeneous(support, 1.0, 1.0, 0.0, bg).unwrap();
    assert_eq!(med.gamma(Vec3::ZERO), Complex64::new(1.0, 0.0));
    let lossy = MediumParams::homogeneous(ball(Vec3::ZERO, 1.0), 1.0, 1.0, 0.6, bg).unwrap();
    assert_eq!(lossy.gamma(Vec3::ZERO), Complex64::new(1.0, 0.3));
    assert_eq!(lossy.gamma(Vec3::new(2.0, 0.0, 0.0)), Complex64::new(1.0, 0.0));
}

#[test]
fn born_far_field_of_small_contrast_is_dipole_like() {
    let bg = Background::with_omega(1.0).unwrap();
    let med = MediumParams::homogeneous(ball(Vec3::ZERO, 0.05), 1.1, 1.0, 0.0, bg).unwrap();
    let (e, h) = fields::plane_wave_incident(CVec3::from(Vec3::E1), Vec3::E3, &bg).unwrap();
    let p = born_far_field(&med, &e, &h, 12, &QuadratureSpec::default()).unwrap();
    assert!(p.l2_norm() > 0.0);
    // J₂ ≈ −iω(0.1)E₁ over the ball: pattern ∝ (I − x̂x̂ᵀ)e₁
    let vol = 4.0 * PI * 0.05f64.powi(3) / 3.0;
    let k = i() * bg.omega * bg.mu0 * (1.0 / (4.0 * PI));
    for (n, v) in p.nodes.iter().zip(&p.e_inf) {
        let expect = CVec3::from(Vec3::E1).project_out(n.dir) * (k * (-i() * 0.1 * vol));
        assert!((*v - expect).norm() <= 0.02 * expect.norm().max(1e-3 * (k.norm() * 0.1 * vol)));
    }
    let zero = MediumParams::homogeneous(ball(Vec3::ZERO, 0.05), 1.0, 1.0, 0.0, bg).unwrap();
    assert_eq!(born_far_field(&zero, &e, &h, 8, &QuadratureSpec::default()).unwrap().l2_norm(), 0.0);
}
