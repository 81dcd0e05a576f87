//! Truncated cones, coronal-shape domains and the homogeneous background.
//!
//! A cone is open: the apex and the lateral surface are not members. Directions
//! about the apex are parameterized by a polar angle `θ` from the axis and an
//! azimuth `φ` measured in the cone's orthonormal frame `(e₁, e₂, a)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, FRAC_PI_2, TAU};
use crate::vector::{Rotation, Vec3};

/// Homogeneous background medium. `k = ω√(ε₀μ₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    pub omega: f64,
    pub eps0: f64,
    pub mu0: f64,
}

impl Background {
    pub fn new(omega: f64, eps0: f64, mu0: f64) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if ok(omega) && ok(eps0) && ok(mu0) {
            Ok(Background { omega, eps0, mu0 })
        } else {
            Err(Error::InvalidBackground)
        }
    }

    /// Unit constants `ε₀ = μ₀ = 1`, so `k = ω`.
    pub fn with_omega(omega: f64) -> Result<Self> {
        Self::new(omega, 1.0, 1.0)
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.omega * math::sqrt(self.eps0 * self.mu0)
    }

    /// Free-space admittance `√(ε₀/μ₀)`; relates `H∞ = Y x̂∧E∞`.
    #[inline]
    pub fn admittance(&self) -> f64 {
        math::sqrt(self.eps0 / self.mu0)
    }
}

/// Truncated open cone `K ∩ B_{r₀}(x₀)` with half-angle `θ₀ ∈ (0, π/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    apex: Vec3,
    axis: Vec3,
    half_angle: f64,
    radius: f64,
    frame: [Vec3; 2],
}

impl ConeSpec {
    /// Validates and normalizes a cone description. The axis is rescaled to
    /// unit length; only the zero vector is rejected.
    pub fn new(apex: Vec3, axis: Vec3, half_angle: f64, radius: f64) -> Result<Self> {
        let axis = axis.normalized().ok_or(Error::ZeroAxis)?;
        if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
            return Err(Error::AngleOutOfRange { angle: half_angle });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::NonpositiveRadius { radius });
        }
        Ok(ConeSpec { apex, axis, half_angle, radius, frame: default_frame(axis) })
    }

    #[inline]
    pub fn apex(&self) -> Vec3 {
        self.apex
    }
    #[inline]
    pub fn axis(&self) -> Vec3 {
        self.axis
    }
    #[inline]
    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }
    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }
    /// Transverse frame vectors `(e₁, e₂)`; `(e₁, e₂, a)` is right-handed.
    #[inline]
    pub fn frame(&self) -> [Vec3; 2] {
        self.frame
    }

    /// Direction bound `δ = cos θ₀` of the CGO direction `d = −a`.
    #[inline]
    pub fn delta(&self) -> f64 {
        math::cos(self.half_angle)
    }

    /// Same cone truncated at a different radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::NonpositiveRadius { radius });
        }
        Ok(ConeSpec { radius, ..*self })
    }

    /// Same cone with its axis reversed, apex and opening unchanged.
    pub fn flipped(&self) -> Self {
        let axis = -self.axis;
        ConeSpec { axis, frame: default_frame(axis), ..*self }
    }

    /// Rigid motion `x ↦ R x + t`, carrying the frame along.
    pub fn transformed(&self, rot: &Rotation, shift: Vec3) -> Self {
        ConeSpec {
            apex: rot.apply(self.apex) + shift,
            axis: rot.apply(self.axis),
            frame: [rot.apply(self.frame[0]), rot.apply(self.frame[1])],
            ..*self
        }
    }

    /// Unit direction at polar angle `theta` from the axis and azimuth `phi`.
    #[inline]
    pub fn direction(&self, theta: f64, phi: f64) -> Vec3 {
        let (st, ct) = (math::sin(theta), math::cos(theta));
        let (sp, cp) = (math::sin(phi), math::cos(phi));
        self.frame[0] * (st * cp) + self.frame[1] * (st * sp) + self.axis * ct
    }

    #[inline]
    pub fn point(&self, r: f64, theta: f64, phi: f64) -> Vec3 {
        self.apex + self.direction(theta, phi) * r
    }

    /// Membership in the open truncated cone.
    pub fn contains(&self, x: Vec3) -> bool {
        let v = x - self.apex;
        let r = v.norm();
        if !(r > 0.0 && r < self.radius) {
            return false;
        }
        angle_between(v, self.axis) < self.half_angle
    }

    /// Largest `δ > 0` with `d·x̂ ≤ −δ` for every direction `x̂` of the cone.
    pub fn direction_bound(&self, d: Vec3) -> Result<f64> {
        let max_dot = self.max_dot_over_directions(d);
        if max_dot < -1e-12 {
            Ok(-max_dot)
        } else {
            Err(Error::NoUniformBound { max_dot })
        }
    }

    /// `sup { d·x̂ : angle(x̂, a) ≤ θ₀ }` for a unit `d`.
    pub fn max_dot_over_directions(&self, d: Vec3) -> f64 {
        let psi = angle_between(d, self.axis);
        if psi <= self.half_angle {
            d.norm()
        } else {
            d.norm() * math::cos(psi - self.half_angle)
        }
    }

    /// Distance-like margin of `x` inside the cone; negative outside.
    pub fn margin(&self, x: Vec3) -> f64 {
        let v = x - self.apex;
        let r = v.norm();
        if r == 0.0 {
            return 0.0;
        }
        let psi = angle_between(v, self.axis);
        let lateral = r * math::sin(self.half_angle - psi);
        lateral.min(self.radius - r)
    }

    pub fn volume(&self) -> f64 {
        TAU * (1.0 - math::cos(self.half_angle)) * math::powi(self.radius, 3) / 3.0
    }

    pub fn cap_area(&self) -> f64 {
        TAU * (1.0 - math::cos(self.half_angle)) * self.radius * self.radius
    }

    pub fn lateral_area(&self) -> f64 {
        math::PI * self.radius * self.radius * math::sin(self.half_angle)
    }
}

/// Deterministic transverse frame; for `a = e₃` it is `(e₁, e₂)`.
fn default_frame(axis: Vec3) -> [Vec3; 2] {
    let ax = [axis.x().abs(), axis.y().abs(), axis.z().abs()];
    let mut pick = 0;
    for i in 1..3 {
        if ax[i] < ax[pick] {
            pick = i;
        }
    }
    let mut helper = Vec3::ZERO;
    helper.0[pick] = 1.0;
    let e1 = (helper - axis * helper.dot(axis)).normalized().unwrap_or(Vec3::E1);
    let e2 = axis.cross(e1);
    [e1, e2]
}

/// Angle in `[0, π]` between two nonzero vectors.
pub fn angle_between(u: Vec3, v: Vec3) -> f64 {
    // atan2 form stays accurate near 0 and π
    math::atan2(u.cross(v).norm(), u.dot(v))
}

/// Closed half-space `n·x ≤ b` with unit outward normal `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) {
            return Err(Error::PreconditionViolated("half-space normal must be nonzero"));
        }
        Ok(HalfSpace { normal: normal * (1.0 / n), offset: offset / n })
    }

    #[inline]
    fn excess(&self, x: Vec3) -> f64 {
        self.normal.dot(x) - self.offset
    }
}

/// Bounded convex polytope given by half-spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    faces: Vec<HalfSpace>,
    interior: Vec3,
}

impl Polytope {
    /// Builds the polytope and locates an interior point (vertex centroid).
    pub fn new(faces: Vec<HalfSpace>) -> Result<Self> {
        if faces.len() < 4 {
            return Err(Error::PreconditionViolated("a bounded polytope needs at least 4 faces"));
        }
        let mut vertices: Vec<Vec3> = Vec::new();
        let m = faces.len();
        for a in 0..m {
            for b in (a + 1)..m {
                for c in (b + 1)..m {
                    if let Some(v) = intersect_planes(&faces[a], &faces[b], &faces[c]) {
                        if faces.iter().all(|f| f.excess(v) <= 1e-9) {
                            vertices.push(v);
                        }
                    }
                }
            }
        }
        if vertices.len() < 4 {
            return Err(Error::PreconditionViolated("half-spaces do not bound a solid"));
        }
        let n = vertices.len() as f64;
        let interior = vertices.iter().fold(Vec3::ZERO, |s, &v| s + v) * (1.0 / n);
        if faces.iter().any(|f| f.excess(interior) >= -1e-12) {
            return Err(Error::PreconditionViolated("polytope has empty interior"));
        }
        Ok(Polytope { faces, interior })
    }

    /// Axis-aligned box `|xᵢ − cᵢ| ≤ hᵢ`.
    pub fn cuboid(center: Vec3, half: Vec3) -> Result<Self> {
        let mut faces = Vec::with_capacity(6);
        for i in 0..3 {
            let mut n = Vec3::ZERO;
            n.0[i] = 1.0;
            faces.push(HalfSpace::new(n, center[i] + half[i])?);
            faces.push(HalfSpace::new(-n, -(center[i] - half[i]))?);
        }
        Polytope::new(faces)
    }

    pub fn faces(&self) -> &[HalfSpace] {
        &self.faces
    }

    pub fn interior_point(&self) -> Vec3 {
        self.interior
    }

    /// Signed margin: positive inside, `−max excess` outside.
    pub fn margin(&self, x: Vec3) -> f64 {
        self.faces.iter().map(|f| -f.excess(x)).fold(f64::INFINITY, f64::min)
    }

    /// Distance from the interior point to the boundary along `dir`.
    pub fn exit_distance(&self, dir: Vec3) -> f64 {
        let mut t = f64::INFINITY;
        for f in &self.faces {
            let nd = f.normal.dot(dir);
            if nd > 0.0 {
                t = t.min(-f.excess(self.interior) / nd);
            }
        }
        t
    }

    fn ray_entry(&self, origin: Vec3, dir: Vec3) -> Option<f64> {
        let (mut t_in, mut t_out) = (0.0f64, f64::INFINITY);
        for f in &self.faces {
            let nd = f.normal.dot(dir);
            let ex = f.excess(origin);
            if nd.abs() < 1e-300 {
                if ex > 0.0 {
                    return None;
                }
                continue;
            }
            let t = -ex / nd;
            if nd < 0.0 {
                t_in = t_in.max(t);
            } else {
                t_out = t_out.min(t);
            }
        }
        (t_in <= t_out && t_out > 0.0).then_some(t_in)
    }
}

fn intersect_planes(a: &HalfSpace, b: &HalfSpace, c: &HalfSpace) -> Option<Vec3> {
    let (n1, n2, n3) = (a.normal, b.normal, c.normal);
    let det = n1.dot(n2.cross(n3));
    if det.abs() < 1e-12 {
        return None;
    }
    let v = n2.cross(n3) * a.offset + n3.cross(n1) * b.offset + n1.cross(n2) * c.offset;
    Some(v * (1.0 / det))
}

/// Convex base body of a coronal-shape domain.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseBody {
    Ball { center: Vec3, radius: f64 },
    Polytope(Polytope),
}

impl BaseBody {
    pub fn ball(center: Vec3, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::NonpositiveRadius { radius });
        }
        Ok(BaseBody::Ball { center, radius })
    }

    /// Positive inside, zero on the boundary, negative outside.
    pub fn margin(&self, x: Vec3) -> f64 {
        match self {
            BaseBody::Ball { center, radius } => radius - (x - *center).norm(),
            BaseBody::Polytope(p) => p.margin(x),
        }
    }

    pub fn contains(&self, x: Vec3) -> bool {
        self.margin(x) > 0.0
    }

    /// Lower bound on the distance from an exterior point to the body.
    pub fn clearance(&self, x: Vec3) -> f64 {
        (-self.margin(x)).max(0.0)
    }

    /// First intersection of the ray `origin + t·dir`, `t ≥ 0`, with the body.
    pub fn ray_entry(&self, origin: Vec3, dir: Vec3) -> Option<f64> {
        match self {
            BaseBody::Ball { center, radius } => {
                let oc = origin - *center;
                let b = oc.dot(dir);
                let c = oc.dot(oc) - radius * radius;
                let disc = b * b - c;
                if disc < 0.0 {
                    return None;
                }
                let s = math::sqrt(disc);
                let (t0, t1) = (-b - s, -b + s);
                if t1 < 0.0 {
                    None
                } else {
                    Some(t0.max(0.0))
                }
            }
            BaseBody::Polytope(p) => p.ray_entry(origin, dir),
        }
    }
}

/// One conical spike of a coronal domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    /// Spike as supplied: apex outside the base, axis pointing away from it.
    pub spike: ConeSpec,
    /// The corner solid seen from the apex: same apex, axis toward the base.
    pub cone: ConeSpec,
    /// Radius of a ball about the apex that stays clear of the base.
    pub clearance: f64,
}

impl Corner {
    /// Radial extent of the corner solid along a unit direction of `cone`.
    pub fn ray_extent(&self, base: &BaseBody, dir: Vec3) -> f64 {
        let r0 = self.cone.radius();
        base.ray_entry(self.cone.apex(), dir).map_or(r0, |t| t.min(r0))
    }

    /// The largest truncated corner cone that stays outside the base.
    pub fn local_cone(&self) -> ConeSpec {
        let r = self.clearance.min(self.cone.radius());
        self.cone.with_radius(r).unwrap_or(self.cone)
    }
}

/// Convex base body with finitely many outward conical spikes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoronalSpec {
    base: BaseBody,
    corners: Vec<Corner>,
}

impl CoronalSpec {
    /// Validates a coronal domain. Each `ConeSpec` describes a spike: its apex
    /// lies outside the base and its axis points away from the base; the corner
    /// solid opens from the apex back toward the base and is cut off where it
    /// enters the base (or at the cone radius, whichever comes first).
    pub fn new(base: BaseBody, spikes: Vec<ConeSpec>) -> Result<Self> {
        let mut corners = Vec::with_capacity(spikes.len());
        for (index, spike) in spikes.into_iter().enumerate() {
            let apex = spike.apex();
            if base.margin(apex) > -1e-12 {
                return Err(Error::ApexInsideBase { index });
            }
            let toward = reference_point(&base) - apex;
            if spike.axis().dot(toward) >= 0.0 {
                return Err(Error::InwardAxis { index });
            }
            let cone = spike.flipped();
            match base.ray_entry(apex, cone.axis()) {
                Some(t) if t < cone.radius() => {}
                _ => return Err(Error::DetachedCorner { index }),
            }
            corners.push(Corner { spike, cone, clearance: base.clearance(apex) });
        }
        for i in 0..corners.len() {
            for j in (i + 1)..corners.len() {
                if patches_overlap(&base, &corners[i], &corners[j]) || patches_overlap(&base, &corners[j], &corners[i])
                {
                    return Err(Error::OverlappingAttachment { first: i, second: j });
                }
            }
        }
        Ok(CoronalSpec { base, corners })
    }

    pub fn base(&self) -> &BaseBody {
        &self.base
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn contains(&self, x: Vec3) -> bool {
        self.base.contains(x) || self.corners.iter().any(|c| self.corner_contains(c, x))
    }

    fn corner_contains(&self, corner: &Corner, x: Vec3) -> bool {
        let v = x - corner.cone.apex();
        let r = v.norm();
        if r == 0.0 || angle_between(v, corner.cone.axis()) >= corner.cone.half_angle() {
            return false;
        }
        r < corner.ray_extent(&self.base, v * (1.0 / r))
    }

    /// Margin lower bound: positive inside the domain.
    pub fn margin(&self, x: Vec3) -> f64 {
        self.corners.iter().map(|c| c.local_cone().margin(x)).fold(self.base.margin(x), f64::max)
    }
}

fn reference_point(base: &BaseBody) -> Vec3 {
    match base {
        BaseBody::Ball { center, .. } => *center,
        BaseBody::Polytope(p) => p.interior_point(),
    }
}

const PATCH_POLAR: usize = 8;
const PATCH_AZIMUTH: usize = 24;

/// Sampled test: does any attachment point of `a` lie on the patch of `b`?
fn patches_overlap(base: &BaseBody, a: &Corner, b: &Corner) -> bool {
    for it in 0..=PATCH_POLAR {
        let theta = a.cone.half_angle() * it as f64 / PATCH_POLAR as f64;
        let n_phi = if it == 0 { 1 } else { PATCH_AZIMUTH };
        for ip in 0..n_phi {
            let phi = TAU * ip as f64 / n_phi as f64;
            let u = a.cone.direction(theta, phi);
            let Some(t) = base.ray_entry(a.cone.apex(), u) else { continue };
            if t > a.cone.radius() {
                continue;
            }
            let p = a.cone.apex() + u * t;
            let v = p - b.cone.apex();
            let dist = v.norm();
            if dist == 0.0 || dist > b.cone.radius() {
                continue;
            }
            if angle_between(v, b.cone.axis()) > b.cone.half_angle() + 1e-12 {
                continue;
            }
            let w = v * (1.0 / dist);
            if let Some(tb) = base.ray_entry(b.cone.apex(), w) {
                if (tb - dist).abs() <= 1e-9 * (1.0 + dist) {
                    return true;
                }
            }
        }
    }
    false
}

/// Declared support of a vector field.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    AllSpace,
    Ball { center: Vec3, radius: f64 },
    Cone(ConeSpec),
    Coronal(alloc::sync::Arc<CoronalSpec>),
}

impl Support {
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Support::AllSpace)
    }

    /// Margin of `x` inside the support; `+∞` for all space.
    pub fn margin(&self, x: Vec3) -> f64 {
        match self {
            Support::AllSpace => f64::INFINITY,
            Support::Ball { center, radius } => radius - (x - *center).norm(),
            Support::Cone(c) => c.margin(x),
            Support::Coronal(c) => c.margin(x),
        }
    }

    pub fn contains(&self, x: Vec3) -> bool {
        match self {
            Support::AllSpace => true,
            Support::Ball { center, radius } => (x - *center).norm() <= *radius,
            Support::Cone(c) => c.contains(x),
            Support::Coronal(c) => c.contains(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    fn unit_cone(theta: f64) -> ConeSpec {
        ConeSpec::new(Vec3::ZERO, Vec3::E3, theta, 1.0).unwrap()
    }

    #[test]
    fn make_cone_records_delta() {
        let c = unit_cone(PI / 6.0);
        assert!((c.delta() - 0.8660254037844386).abs() < 1e-15);
    }

    #[test]
    fn make_cone_normalizes_axis() {
        let c = ConeSpec::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 2.0), 0.3, 1.0).unwrap();
        assert_eq!(c.axis(), Vec3::E3);
        assert_eq!(c.frame(), [Vec3::E1, Vec3::E2]);
    }

    #[test]
    fn make_cone_errors() {
        assert_eq!(ConeSpec::new(Vec3::ZERO, Vec3::ZERO, 0.3, 1.0), Err(Error::ZeroAxis));
        assert!(matches!(ConeSpec::new(Vec3::ZERO, Vec3::E3, FRAC_PI_2, 1.0), Err(Error::AngleOutOfRange { .. })));
        assert!(matches!(ConeSpec::new(Vec3::ZERO, Vec3::E3, 0.0, 1.0), Err(Error::AngleOutOfRange { .. })));
        assert!(matches!(ConeSpec::new(Vec3::ZERO, Vec3::E3, 0.3, 0.0), Err(Error::NonpositiveRadius { .. })));
    }

    #[test]
    fn membership_examples() {
        let c = unit_cone(PI / 4.0);
        assert!(c.contains(Vec3::new(0.0, 0.0, 0.5)));
        assert!(!c.contains(Vec3::new(1.0, 0.0, 0.0)));
        assert!(!c.contains(Vec3::new(0.0, 0.0, 1.5)));
        assert!(!c.contains(Vec3::ZERO));
    }

    #[test]
    fn direction_bound_examples() {
        let c = unit_cone(PI / 6.0);
        let delta = c.direction_bound(-Vec3::E3).unwrap();
        assert!((delta - (PI / 6.0).cos()).abs() < 1e-12);
        assert!(matches!(c.direction_bound(Vec3::E3), Err(Error::NoUniformBound { .. })));

        let c = unit_cone(PI / 4.0);
        let d = Vec3::new(-1.0, 0.0, -1.0).normalized().unwrap();
        assert!(matches!(c.direction_bound(d), Err(Error::NoUniformBound { .. })));
    }

    #[test]
    fn coronal_examples() {
        let ball = BaseBody::ball(Vec3::ZERO, 1.0).unwrap();
        let spike = ConeSpec::new(Vec3::new(0.0, 0.0, 2.0), Vec3::E3, 0.3, 1.5).unwrap();
        let dom = CoronalSpec::new(ball.clone(), alloc::vec![spike]).unwrap();
        assert!(dom.contains(Vec3::new(0.0, 0.0, 1.5)));
        assert!(dom.contains(Vec3::ZERO));
        assert!(!dom.contains(Vec3::new(0.5, 0.0, 1.8)));

        let inside = ConeSpec::new(Vec3::new(0.0, 0.0, 0.5), Vec3::E3, 0.3, 1.0).unwrap();
        assert_eq!(CoronalSpec::new(ball.clone(), alloc::vec![inside]), Err(Error::ApexInsideBase { index: 0 }));

        assert_eq!(
            CoronalSpec::new(ball, alloc::vec![spike, spike]),
            Err(Error::OverlappingAttachment { first: 0, second: 1 })
        );
    }

    #[test]
    fn coronal_rejects_inward_and_detached_spikes() {
        let ball = BaseBody::ball(Vec3::ZERO, 1.0).unwrap();
        let inward = ConeSpec::new(Vec3::new(0.0, 0.0, 2.0), -Vec3::E3, 0.3, 1.5).unwrap();
        assert_eq!(CoronalSpec::new(ball.clone(), alloc::vec![inward]), Err(Error::InwardAxis { index: 0 }));
        let short = ConeSpec::new(Vec3::new(0.0, 0.0, 2.0), Vec3::E3, 0.3, 0.5).unwrap();
        assert_eq!(CoronalSpec::new(ball, alloc::vec![short]), Err(Error::DetachedCorner { index: 0 }));
    }

    #[test]
    fn disjoint_spikes_are_accepted() {
        let ball = BaseBody::ball(Vec3::ZERO, 1.0).unwrap();
        let up = ConeSpec::new(Vec3::new(0.0, 0.0, 1.6), Vec3::E3, 0.4, 1.0).unwrap();
        let down = ConeSpec::new(Vec3::new(0.0, 0.0, -1.6), -Vec3::E3, 0.4, 1.0).unwrap();
        let side = ConeSpec::new(Vec3::new(1.6, 0.0, 0.0), Vec3::E1, 0.4, 1.0).unwrap();
        let dom = CoronalSpec::new(ball, alloc::vec![up, down, side]).unwrap();
        assert_eq!(dom.corners().len(), 3);
        assert!((dom.corners()[0].clearance - 0.6).abs() < 1e-12);
    }

    #[test]
    fn polytope_base() {
        let cube = Polytope::cuboid(Vec3::ZERO, Vec3::new(1.0, 1.0, 1.0)).unwrap();
        assert!(cube.interior_point().norm() < 1e-12);
        assert!((cube.exit_distance(Vec3::E1) - 1.0).abs() < 1e-12);
        let base = BaseBody::Polytope(cube);
        assert_eq!(base.ray_entry(Vec3::new(0.0, 0.0, 3.0), -Vec3::E3), Some(2.0));
        assert_eq!(base.ray_entry(Vec3::new(0.0, 0.0, 3.0), Vec3::E3), None);
        let spike = ConeSpec::new(Vec3::new(0.0, 0.0, 1.5), Vec3::E3, 0.3, 1.0).unwrap();
        assert!(CoronalSpec::new(base, alloc::vec![spike]).is_ok());
    }

    #[test]
    fn cone_margin_sign() {
        let c = unit_cone(PI / 4.0);
        assert!(c.margin(Vec3::new(0.0, 0.0, 0.5)) > 0.3);
        assert!(c.margin(Vec3::new(1.0, 0.0, 0.1)) < 0.0);
    }
}
