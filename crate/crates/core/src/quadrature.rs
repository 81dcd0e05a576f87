//! Deterministic product rules on cones, caps, lateral surfaces, balls and the
//! unit sphere.
//!
//! Radial and polar directions use Gauss–Legendre; the azimuth uses the
//! trapezoid rule, which is spectrally accurate for periodic integrands.
//! Summation is sequential in node order so results are bit-reproducible.

use core::ops::{Add, Mul};

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{BaseBody, ConeSpec, Support};
use crate::math::{self, PI, TAU};
use crate::vector::{CVec3, Vec3};

/// Maximum number of nodes a single integral may use.
pub const NODE_CAP: usize = 10_000_000;

/// Largest decay span `τ·Δr` covered by one radial panel when τ-scaling.
const PANEL_SPAN: f64 = 8.0;

/// Values that quadrature can accumulate.
pub trait Quantity: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Quantity for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Quantity for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

impl Quantity for CVec3 {
    fn zero() -> Self {
        CVec3::ZERO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub radial_order: usize,
    pub polar_order: usize,
    pub azimuthal_order: usize,
    /// Split the radial interval into panels of width `8/τ` when a τ hint is
    /// supplied, so `e^{−τδr}` decay and `τ`-scale oscillation stay resolved.
    pub tau_scaling: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { radial_order: 32, polar_order: 16, azimuthal_order: 16, tau_scaling: true }
    }
}

impl QuadratureSpec {
    pub fn new(radial: usize, polar: usize, azimuthal: usize, tau_scaling: bool) -> Result<Self> {
        let spec = QuadratureSpec { radial_order: radial, polar_order: polar, azimuthal_order: azimuthal, tau_scaling };
        spec.validate()?;
        Ok(spec)
    }

    /// Same order in every direction.
    pub fn uniform(order: usize) -> Result<Self> {
        Self::new(order, order, order, true)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_order < 2 || self.polar_order < 2 || self.azimuthal_order < 2 {
            return Err(Error::PreconditionViolated("quadrature orders must be at least 2"));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            radial_order: 2 * self.radial_order,
            polar_order: 2 * self.polar_order,
            azimuthal_order: 2 * self.azimuthal_order,
            tau_scaling: self.tau_scaling,
        }
    }

    fn radial_panels(&self, r_max: f64, tau_hint: Option<f64>) -> usize {
        match tau_hint {
            Some(tau) if self.tau_scaling && tau > 0.0 => (math::ceil(tau * r_max / PANEL_SPAN) as usize).max(1),
            _ => 1,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = math::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (m + h * x, h * w))
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<T: Quantity>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        self.mapped(a, b).fold(T::zero(), |s, (x, w)| s + f(x) * w)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Trapezoid nodes `2πj/n` with weight `2π/n`.
fn azimuths(n: usize) -> impl Iterator<Item = (f64, f64)> {
    let w = TAU / n as f64;
    (0..n).map(move |j| (w * j as f64, w))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeNode {
    pub x: Vec3,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceNode {
    pub x: Vec3,
    /// Outward unit normal.
    pub normal: Vec3,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub dir: Vec3,
    pub theta: f64,
    pub phi: f64,
    pub w: f64,
}

fn check_budget(nodes: usize) -> Result<()> {
    if nodes > NODE_CAP {
        Err(Error::BudgetExceeded { nodes, cap: NODE_CAP })
    } else {
        Ok(())
    }
}

/// Spherical-coordinate rule about `center` for the star-shaped region
/// `{center + r u : angle(u, axis) ≤ theta_max, 0 ≤ r < extent(u)}`.
/// `frame = [e₁, e₂, axis]` must be orthonormal.
pub fn star_rule(
    center: Vec3,
    frame: [Vec3; 3],
    theta_max: f64,
    extent: impl Fn(Vec3) -> f64,
    spec: &QuadratureSpec,
    panels: usize,
) -> Result<Vec<VolumeNode>> {
    spec.validate()?;
    let panels = panels.max(1);
    let count = spec.radial_order * panels * spec.polar_order * spec.azimuthal_order;
    check_budget(count)?;
    let radial = GaussRule::new(spec.radial_order);
    let polar = GaussRule::new(spec.polar_order);
    let mut out = Vec::with_capacity(count);
    for (theta, wt) in polar.mapped(0.0, theta_max) {
        let (st, ct) = (math::sin(theta), math::cos(theta));
        for (phi, wp) in azimuths(spec.azimuthal_order) {
            let u = frame[0] * (st * math::cos(phi)) + frame[1] * (st * math::sin(phi)) + frame[2] * ct;
            let r_max = extent(u);
            if !(r_max > 0.0) {
                continue;
            }
            let h = r_max / panels as f64;
            for p in 0..panels {
                let a = h * p as f64;
                for (r, wr) in radial.mapped(a, a + h) {
                    out.push(VolumeNode { x: center + u * r, w: wr * wt * wp * r * r * st });
                }
            }
        }
    }
    Ok(out)
}

fn cone_frame(cone: &ConeSpec) -> [Vec3; 3] {
    let [e1, e2] = cone.frame();
    [e1, e2, cone.axis()]
}

/// Volume rule on the truncated cone about its apex.
pub fn cone_rule(cone: &ConeSpec, spec: &QuadratureSpec, tau_hint: Option<f64>) -> Result<Vec<VolumeNode>> {
    let panels = spec.radial_panels(cone.radius(), tau_hint);
    let r0 = cone.radius();
    star_rule(cone.apex(), cone_frame(cone), cone.half_angle(), |_| r0, spec, panels)
}

/// Volume rule on a ball.
pub fn ball_rule(center: Vec3, radius: f64, spec: &QuadratureSpec) -> Result<Vec<VolumeNode>> {
    star_rule(center, [Vec3::E1, Vec3::E2, Vec3::E3], PI, |_| radius, spec, 1)
}

/// Volume rule for a bounded support.
pub fn support_rule(support: &Support, spec: &QuadratureSpec) -> Result<Vec<VolumeNode>> {
    match support {
        Support::AllSpace => Err(Error::UnboundedSupport),
        Support::Ball { center, radius } => ball_rule(*center, *radius, spec),
        Support::Cone(c) => cone_rule(c, spec, None),
        Support::Coronal(dom) => {
            let mut nodes = match dom.base() {
                BaseBody::Ball { center, radius } => ball_rule(*center, *radius, spec)?,
                BaseBody::Polytope(p) => {
                    star_rule(p.interior_point(), [Vec3::E1, Vec3::E2, Vec3::E3], PI, |u| p.exit_distance(u), spec, 1)?
                }
            };
            for corner in dom.corners() {
                let base = dom.base();
                nodes.extend(star_rule(
                    corner.cone.apex(),
                    cone_frame(&corner.cone),
                    corner.cone.half_angle(),
                    |u| corner.ray_extent(base, u),
                    spec,
                    1,
                )?);
            }
            check_budget(nodes.len())?;
            Ok(nodes)
        }
    }
}

/// Spherical cap `r = r₀`, `angle ≤ θ₀`, with outward normal `x̂`.
pub fn cap_rule(cone: &ConeSpec, spec: &QuadratureSpec) -> Result<Vec<SurfaceNode>> {
    spec.validate()?;
    check_budget(spec.polar_order * spec.azimuthal_order)?;
    let polar = GaussRule::new(spec.polar_order);
    let r0 = cone.radius();
    let mut out = Vec::with_capacity(spec.polar_order * spec.azimuthal_order);
    for (theta, wt) in polar.mapped(0.0, cone.half_angle()) {
        let st = math::sin(theta);
        for (phi, wp) in azimuths(spec.azimuthal_order) {
            let u = cone.direction(theta, phi);
            out.push(SurfaceNode { x: cone.apex() + u * r0, normal: u, w: r0 * r0 * st * wt * wp });
        }
    }
    Ok(out)
}

/// Lateral surface `θ = θ₀`, `0 < r < r₀`, with outward normal.
pub fn lateral_rule(cone: &ConeSpec, spec: &QuadratureSpec, tau_hint: Option<f64>) -> Result<Vec<SurfaceNode>> {
    spec.validate()?;
    let panels = spec.radial_panels(cone.radius(), tau_hint);
    let count = spec.radial_order * panels * spec.azimuthal_order;
    check_budget(count)?;
    let radial = GaussRule::new(spec.radial_order);
    let [e1, e2] = cone.frame();
    let (st, ct) = (math::sin(cone.half_angle()), math::cos(cone.half_angle()));
    let h = cone.radius() / panels as f64;
    let mut out = Vec::with_capacity(count);
    for (phi, wp) in azimuths(spec.azimuthal_order) {
        let u_phi = e1 * math::cos(phi) + e2 * math::sin(phi);
        let gen = u_phi * st + cone.axis() * ct;
        let normal = u_phi * ct - cone.axis() * st;
        for p in 0..panels {
            let a = h * p as f64;
            for (r, wr) in radial.mapped(a, a + h) {
                out.push(SurfaceNode { x: cone.apex() + gen * r, normal, w: r * st * wr * wp });
            }
        }
    }
    Ok(out)
}

/// Product rule on `S²`: Gauss–Legendre in `cos θ` (`order` nodes) times
/// trapezoid in `φ` (`2·order` nodes).
pub fn sphere_rule(order: usize) -> Result<Vec<SphereNode>> {
    if order < 4 {
        return Err(Error::PreconditionViolated("sphere quadrature order must be at least 4"));
    }
    let gl = GaussRule::new(order);
    let mut out = Vec::with_capacity(2 * order * order);
    for (mu, wm) in gl.mapped(-1.0, 1.0) {
        let theta = math::acos(mu);
        let st = math::sqrt((1.0 - mu * mu).max(0.0));
        for (phi, wp) in azimuths(2 * order) {
            let dir = Vec3::new(st * math::cos(phi), st * math::sin(phi), mu);
            out.push(SphereNode { dir, theta, phi, w: wm * wp });
        }
    }
    Ok(out)
}

pub fn integrate<T: Quantity>(nodes: &[VolumeNode], f: impl Fn(Vec3) -> T) -> T {
    nodes.iter().fold(T::zero(), |s, n| s + f(n.x) * n.w)
}

/// Surface integral; `f` receives the point and the outward normal.
pub fn integrate_surface<T: Quantity>(nodes: &[SurfaceNode], f: impl Fn(Vec3, Vec3) -> T) -> T {
    nodes.iter().fold(T::zero(), |s, n| s + f(n.x, n.normal) * n.w)
}

pub fn integrate_cone<T: Quantity>(
    f: impl Fn(Vec3) -> T,
    cone: &ConeSpec,
    spec: &QuadratureSpec,
    tau_hint: Option<f64>,
) -> Result<T> {
    Ok(integrate(&cone_rule(cone, spec, tau_hint)?, f))
}

pub fn integrate_cap<T: Quantity>(f: impl Fn(Vec3, Vec3) -> T, cone: &ConeSpec, spec: &QuadratureSpec) -> Result<T> {
    Ok(integrate_surface(&cap_rule(cone, spec)?, f))
}

pub fn integrate_lateral<T: Quantity>(
    f: impl Fn(Vec3, Vec3) -> T,
    cone: &ConeSpec,
    spec: &QuadratureSpec,
    tau_hint: Option<f64>,
) -> Result<T> {
    Ok(integrate_surface(&lateral_rule(cone, spec, tau_hint)?, f))
}

pub fn integrate_sphere<T: Quantity>(f: impl Fn(Vec3) -> T, order: usize) -> Result<T> {
    Ok(sphere_rule(order)?.iter().fold(T::zero(), |s, n| s + f(n.dir) * n.w))
}

/// Region over which [`local_average`] averages.
#[derive(Debug, Clone, Copy)]
pub enum AverageDomain<'a> {
    AllSpace,
    Cone(&'a ConeSpec),
}

/// Mean of `magnitude` over `B(center, ρ) ∩ domain`.
///
/// When the ball is centered at the cone apex the intersection is itself a
/// truncated cone and is integrated exactly; otherwise a ball rule with the
/// cone indicator is used.
pub fn local_average(
    magnitude: impl Fn(Vec3) -> f64,
    center: Vec3,
    rho: f64,
    domain: AverageDomain<'_>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::NonpositiveRadius { radius: rho });
    }
    let (sum, measure) = match domain {
        AverageDomain::Cone(cone) if (center - cone.apex()).norm() <= 1e-14 * (1.0 + rho) => {
            let sub = cone.with_radius(rho.min(cone.radius()))?;
            let nodes = cone_rule(&sub, spec, None)?;
            (integrate(&nodes, &magnitude), sub.volume())
        }
        AverageDomain::Cone(cone) => {
            let nodes = ball_rule(center, rho, spec)?;
            nodes
                .iter()
                .filter(|n| cone.contains(n.x))
                .fold((0.0, 0.0), |(s, m), n| (s + magnitude(n.x) * n.w, m + n.w))
        }
        AverageDomain::AllSpace => {
            let nodes = ball_rule(center, rho, spec)?;
            (integrate(&nodes, &magnitude), 4.0 * PI * rho * rho * rho / 3.0)
        }
    };
    if !(measure > 0.0) {
        return Err(Error::EmptyIntersection);
    }
    Ok(sum / measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::FRAC_PI_2;

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        let g = GaussRule::new(10);
        for m in 0..20 {
            let got = g.integrate(0.0, 1.0, |x| math::powi(x, m));
            let exact = 1.0 / (m as f64 + 1.0);
            assert!((got - exact).abs() < 1e-14, "m = {m}");
        }
        assert!((g.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn large_gauss_rules_are_accurate() {
        let g = GaussRule::new(128);
        let got = g.integrate(0.0, PI, math::sin);
        assert!((got - 2.0).abs() < 1e-13);
    }

    #[test]
    fn cone_volume() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, PI / 3.0, 1.0).unwrap();
        let v: f64 = integrate_cone(|_| 1.0, &cone, &QuadratureSpec::default(), None).unwrap();
        assert!((v - PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, 0.7, 1.0).unwrap();
        let v: f64 = integrate_cone(|x| x.x(), &cone, &QuadratureSpec::default(), None).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn cap_and_lateral_areas() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, PI / 6.0, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        let cap: f64 = integrate_cap(|_, _| 1.0, &cone, &spec).unwrap();
        assert!((cap - 0.8417872144769223).abs() < 1e-12);
        let lat: f64 = integrate_lateral(|_, _| 1.0, &cone, &spec, None).unwrap();
        assert!((lat - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn lateral_normals_are_orthogonal_to_generators() {
        let cone = ConeSpec::new(Vec3::new(0.3, -1.0, 2.0), Vec3::new(1.0, 1.0, 0.5), 0.4, 2.0).unwrap();
        for n in lateral_rule(&cone, &QuadratureSpec::new(4, 4, 5, false).unwrap(), None).unwrap() {
            let g = (n.x - cone.apex()).normalized().unwrap();
            assert!(n.normal.dot(g).abs() < 1e-14);
            assert!((n.normal.norm() - 1.0).abs() < 1e-14);
            assert!((n.normal.dot(cone.axis()) + cone.half_angle().sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn sphere_moments() {
        let one: f64 = integrate_sphere(|_| 1.0, 16).unwrap();
        assert!((one - 4.0 * PI).abs() < 1e-12);
        let z2: f64 = integrate_sphere(|d| d.z() * d.z(), 16).unwrap();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
        assert_eq!(sphere_rule(16).unwrap().len(), 512);
        assert!(sphere_rule(3).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, 0.5, 1.0).unwrap();
        let spec = QuadratureSpec::new(400, 200, 200, false).unwrap();
        assert!(matches!(cone_rule(&cone, &spec, None), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn local_average_of_constant() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, 0.5, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        for rho in [0.1, 0.5, 2.0] {
            let a = local_average(|_| 3.5, Vec3::ZERO, rho, AverageDomain::Cone(&cone), &spec).unwrap();
            assert!((a - 3.5).abs() < 1e-12);
        }
        let off = local_average(|_| 2.0, Vec3::new(0.0, 0.0, 0.5), 0.1, AverageDomain::Cone(&cone), &spec).unwrap();
        assert!((off - 2.0).abs() < 1e-12);
        assert_eq!(
            local_average(|_| 1.0, Vec3::new(0.0, 0.0, -1.0), 0.1, AverageDomain::Cone(&cone), &spec),
            Err(Error::EmptyIntersection)
        );
    }
}
