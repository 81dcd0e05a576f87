//! Checks on Herglotz kernels, approximation rates, CGO remainder estimates
//! and local averages at a cone apex.
//!
//! No transmission eigenfunctions are computed here; every check runs on
//! synthetic fields with planted regularity.

use alloc::vec::Vec;

use crate::asymptotics;
use crate::error::{Error, Result};
use crate::fields::{CgoFamily, CgoPair, CgoParams, ComplexVectorField, HerglotzKernel, Smoothness};
use crate::geometry::{Background, ConeSpec};
use crate::math::{self, c};
use crate::quadrature::{self, AverageDomain, QuadratureSpec};
use crate::vector::{CVec3, Vec3};

/// Header attached to every report produced from this module.
pub const REPORT_NOTE: &str = "synthetic fields with planted regularity; no transmission eigenfunctions are computed";

/// `‖g‖_{L²(S²)}` by the product sphere rule.
pub fn kernel_norm(kernel: &HerglotzKernel, order: usize) -> Result<f64> {
    let s: f64 = quadrature::integrate_sphere(|d| kernel.g(d).norm_sqr(), order)?;
    Ok(math::sqrt(s))
}

/// True iff `ζ, β > 0` and `β < (2/3)ζ`.
pub fn rate_gate(zeta: f64, beta: f64) -> bool {
    zeta > 0.0 && beta > 0.0 && beta < 2.0 * zeta / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderRow {
    pub j: f64,
    pub tau: f64,
    /// `|∫_K δE·V|`.
    pub integral: f64,
    /// `|∫_K δE·V| τ⁴ / j^β`.
    pub ratio: f64,
    /// `|∫_K δE·V| j^{3a}`, which must tend to zero.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderReport {
    pub zeta: f64,
    pub beta: f64,
    pub a: f64,
    pub rows: Vec<RemainderRow>,
    pub bounded: bool,
    pub scaled_decreasing: bool,
    pub pass: bool,
}

/// Tabulates the remainder `δE(x) = j^β |x − x₀| ĉ` against the electric CGO
/// field with `τ = j^a`.
///
/// `local_direction` gives `ĉ` in the cone frame `(e₁, e₂, axis)`, so the
/// table is unchanged by rigid motions of the cone.
#[allow(clippy::too_many_arguments)]
pub fn remainder_bound_check(
    cone: &ConeSpec,
    bg: &Background,
    zeta: f64,
    beta: f64,
    a: f64,
    js: &[f64],
    local_direction: CVec3,
    spec: &QuadratureSpec,
) -> Result<RemainderReport> {
    if !rate_gate(zeta, beta) || !(a > beta && a < 2.0 * zeta / 3.0) {
        return Err(Error::RateGateFailed);
    }
    if js.is_empty() || js.iter().any(|&j| !(j > 1.0)) || js.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::PreconditionViolated("j list must exceed 1 and increase"));
    }
    let [e1, e2] = cone.frame();
    let dir = CVec3::from(e1) * local_direction[0]
        + CVec3::from(e2) * local_direction[1]
        + CVec3::from(cone.axis()) * local_direction[2];
    let apex = cone.apex();
    let mut rows = Vec::with_capacity(js.len());
    for &j in js {
        let tau = math::powf(j, a);
        let params = CgoParams::for_cone(cone, 0.0, tau, bg.k())?;
        let pair = CgoPair::new(&params, bg, CgoFamily::Electric)?.centered_at(apex);
        let amp = math::powf(j, beta);
        let nodes = quadrature::cone_rule(cone, spec, Some(tau))?;
        let sum = quadrature::integrate(&nodes, |x| dir.dot(pair.v(x)) * (amp * (x - apex).norm()));
        let integral = sum.norm();
        rows.push(RemainderRow {
            j,
            tau,
            integral,
            ratio: integral * math::powi(tau, 4) / amp,
            scaled: integral * math::powf(j, 3.0 * a),
        });
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let bounded = asymptotics::ratios_bounded(&ratios);
    let scaled_decreasing = rows.windows(2).all(|w| w[1].scaled <= w[0].scaled);
    Ok(RemainderReport { zeta, beta, a, rows, bounded, scaled_decreasing, pass: bounded && scaled_decreasing })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageProfile {
    /// `(ρ, mean |F| over B(x₀, ρ) ∩ K)` in schedule order.
    pub rows: Vec<(f64, f64)>,
    /// Two-point Richardson limit as `ρ → 0`.
    pub extrapolated: f64,
    /// `max |F|` over the truncated cone.
    pub scale: f64,
    pub vanishing: bool,
}

/// Local averages of `|F|` at the apex over a decreasing `ρ` schedule.
///
/// The limit uses the model `A₀ + Bρ^s` with `s = α` for Hölder fields and
/// `s = 1` otherwise; the profile is vanishing iff the averages decrease and
/// the limit is at most `1e−3` of the field scale.
pub fn apex_average_profile(
    field: &ComplexVectorField,
    cone: &ConeSpec,
    rhos: &[f64],
    spec: &QuadratureSpec,
) -> Result<AverageProfile> {
    if rhos.len() < 2 {
        return Err(Error::InsufficientData { samples: rhos.len() });
    }
    if rhos.iter().any(|&r| !(r > 0.0 && r <= cone.radius())) || rhos.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::PreconditionViolated("rho schedule must decrease within (0, r0]"));
    }
    let apex = cone.apex();
    let rows = rhos
        .iter()
        .map(|&rho| {
            let avg = quadrature::local_average(|x| field.eval(x).norm(), apex, rho, AverageDomain::Cone(cone), spec)?;
            Ok((rho, avg))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = quadrature::cone_rule(cone, spec, None)?.iter().map(|n| field.eval(n.x).norm()).fold(0.0, f64::max);
    let s = match field.smoothness() {
        Smoothness::Holder(alpha) => alpha,
        _ => 1.0,
    };
    let n = rows.len();
    let ((r1, a1), (r2, a2)) = (rows[n - 2], rows[n - 1]);
    let (p1, p2) = (math::powf(r1, s), math::powf(r2, s));
    let extrapolated = (a2 * p1 - a1 * p2) / (p1 - p2);
    let decreasing = rows.windows(2).all(|w| w[1].1 < w[0].1);
    let vanishing = scale == 0.0 || (decreasing && extrapolated.abs() <= 1e-3 * scale);
    Ok(AverageProfile { rows, extrapolated, scale, vanishing })
}

/// `E_g − E_g(x₀)`: a C¹ field with a planted zero at `x₀`.
pub fn subtract_value_at(field: &ComplexVectorField, x0: Vec3) -> ComplexVectorField {
    let v = field.eval(x0);
    field.plus(&ComplexVectorField::constant(v * c(-1.0, 0.0), crate::geometry::Support::AllSpace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    #[test]
    fn kernel_norm_examples() {
        let one = HerglotzKernel::constant(CVec3::from(Vec3::E1), 1.0).unwrap();
        assert!((kernel_norm(&one, 16).unwrap() - math::sqrt(4.0 * PI)).abs() < 1e-12);
        let zero = HerglotzKernel::constant(CVec3::ZERO, 1.0).unwrap();
        assert_eq!(kernel_norm(&zero, 16).unwrap(), 0.0);
        let radial = HerglotzKernel::new(CVec3::from, 1.0).unwrap();
        assert!((kernel_norm(&radial, 16).unwrap() - math::sqrt(4.0 * PI)).abs() < 1e-12);
        assert!(kernel_norm(&one, 3).is_err());
    }

    #[test]
    fn rate_gate_examples() {
        assert!(rate_gate(3.0, 1.0));
        assert!(!rate_gate(3.0, 2.0));
        assert!(!rate_gate(1.5, 1.0));
    }

    #[test]
    fn remainder_preconditions() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, PI / 6.0, 1.0).unwrap();
        let bg = Background::with_omega(1.0).unwrap();
        let spec = QuadratureSpec::default();
        let dir = CVec3::from(Vec3::E1);
        assert_eq!(remainder_bound_check(&cone, &bg, 3.0, 1.0, 2.0, &[4.0], dir, &spec), Err(Error::RateGateFailed));
        let zero = remainder_bound_check(&cone, &bg, 3.0, 1.0, 1.5, &[4.0, 8.0], CVec3::ZERO, &spec).unwrap();
        assert!(zero.rows.iter().all(|r| r.ratio == 0.0));
    }
}
