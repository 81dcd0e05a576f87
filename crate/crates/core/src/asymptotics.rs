//! Radial moments and tails, the cone exponential integral `∫_K e^{ρ·x} dx`
//! and its lower bound, CGO norm scaling, and power-law fitting.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{CgoFamily, CgoPair, CgoParams};
use crate::geometry::{Background, ConeSpec};
use crate::math::{self, c, FRAC_PI_2, PI, TAU};
use crate::quadrature::{self, GaussRule, QuadratureSpec};
use crate::vector::CVec3;

/// Decomposition `Γ(α+1)/η^{α+1} = ∫₀^c + ∫_c^∞` of `∫ r^α e^{−ηr} dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMoment {
    pub full: Complex64,
    pub truncated: Complex64,
    pub tail: Complex64,
    /// `(2/Re η) e^{−c·Re η/2}`.
    pub tail_bound: f64,
    /// `Some(|tail| ≤ tail_bound)` when `Re η ≥ 2α/e`, otherwise `None`.
    pub bound_ok: Option<bool>,
}

const GRADED_LEVELS: usize = 60;

/// `∫₀^c r^α e^{−ηr} dr` on geometrically graded panels toward `r = 0`.
pub fn truncated_moment(alpha: f64, eta: Complex64, cutoff: f64) -> Complex64 {
    let gl = GaussRule::new(24);
    let f = |r: f64| math::cexp(-eta * r) * math::powf(r, alpha);
    let mut sum = c(0.0, 0.0);
    let mut hi = cutoff;
    for _ in 0..GRADED_LEVELS {
        let lo = 0.5 * hi;
        let pieces = (math::ceil(eta.norm() * (hi - lo) / 4.0) as usize).max(1);
        let w = (hi - lo) / pieces as f64;
        for p in 0..pieces {
            let a = lo + w * p as f64;
            sum += gl.integrate(a, a + w, f);
        }
        hi = lo;
    }
    sum + gl.integrate(0.0, hi, f)
}

/// `∫_c^∞ r^α e^{−ηr} dr` by composite Gauss on `[c, c + 40/Re η]`,
/// independent of the closed form used by [`radial_moment`].
pub fn tail_by_quadrature(alpha: f64, eta: Complex64, cutoff: f64) -> Complex64 {
    let end = cutoff + 40.0 / eta.re;
    let gl = GaussRule::new(32);
    let pieces = (math::ceil((end - cutoff) * eta.norm() / 2.0) as usize).max(50);
    let h = (end - cutoff) / pieces as f64;
    (0..pieces).fold(c(0.0, 0.0), |s, p| {
        let a = cutoff + h * p as f64;
        s + gl.integrate(a, a + h, |r| math::cexp(-eta * r) * math::powf(r, alpha))
    })
}

pub fn radial_moment(alpha: f64, eta: Complex64, cutoff: f64) -> Result<RadialMoment> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::PreconditionViolated("radial moment needs alpha > 0"));
    }
    if !(eta.re > 0.0) {
        return Err(Error::PreconditionViolated("radial moment needs Re eta > 0"));
    }
    if !(cutoff > 0.0 && cutoff < core::f64::consts::E) {
        return Err(Error::PreconditionViolated("radial moment needs cutoff in (0, e)"));
    }
    let full = math::cpow_real(eta, -(alpha + 1.0)) * math::gamma(alpha + 1.0);
    let truncated = truncated_moment(alpha, eta, cutoff);
    let tail = full - truncated;
    let tail_bound = 2.0 / eta.re * math::exp(-cutoff * eta.re / 2.0);
    let bound_ok = (eta.re >= 2.0 * alpha / core::f64::consts::E).then(|| tail.norm() <= tail_bound);
    Ok(RadialMoment { full, truncated, tail, tail_bound, bound_ok })
}

/// `∫₀^{r₀} r² e^{−ηr} dr` in closed form.
pub fn cubic_radial_integral(eta: Complex64, r0: f64) -> Complex64 {
    let z = eta * r0;
    if z.norm() < 0.5 {
        // series in z avoids cancellation
        let mut term = c(1.0, 0.0);
        let mut sum = c(0.0, 0.0);
        for n in 0..30 {
            sum += term / (n as f64 + 3.0);
            term = term * (-z) / (n as f64 + 1.0);
        }
        return sum * (r0 * r0 * r0);
    }
    let poly = c(1.0, 0.0) + z + z * z * 0.5;
    (c(1.0, 0.0) - math::cexp(-z) * poly) * (eta * eta * eta).inv() * 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeIntegralMethod {
    /// Radial integral in closed form, angles by quadrature.
    ClosedRadial,
    /// Full three-dimensional product rule with τ-scaled radial panels.
    Full3d,
}

fn check_direction(cone: &ConeSpec, params: &CgoParams) -> Result<f64> {
    cone.direction_bound(params.d())
        .map_err(|_| Error::DirectionBoundViolated { max_dot: cone.max_dot_over_directions(params.d()) })
}

/// `I(τ) = ∫_{K_{r₀}} e^{ρ·(x − x₀)} dx`, the exponent measured from the apex.
pub fn cone_exp_integral(
    cone: &ConeSpec,
    params: &CgoParams,
    method: ConeIntegralMethod,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_direction(cone, params)?;
    let rho = params.rho();
    match method {
        ConeIntegralMethod::ClosedRadial => {
            spec.validate()?;
            let polar = GaussRule::new(spec.polar_order);
            let n_phi = spec.azimuthal_order;
            let mut sum = c(0.0, 0.0);
            for (theta, wt) in polar.mapped(0.0, cone.half_angle()) {
                let st = math::sin(theta);
                for j in 0..n_phi {
                    let phi = TAU * j as f64 / n_phi as f64;
                    let eta = -rho.dot_real(cone.direction(theta, phi));
                    sum += cubic_radial_integral(eta, cone.radius()) * (st * wt);
                }
            }
            Ok(sum * (TAU / n_phi as f64))
        }
        ConeIntegralMethod::Full3d => {
            let apex = cone.apex();
            quadrature::integrate_cone(|x| math::cexp(rho.dot_real(x - apex)), cone, spec, Some(params.tau()))
        }
    }
}

/// `√2·π·(1 − cos θ₀)`.
pub fn lower_bound_constant(theta0: f64) -> Result<f64> {
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(Error::AngleOutOfRange { angle: theta0 });
    }
    Ok(math::sqrt(2.0) * PI * (1.0 - math::cos(theta0)))
}

/// `lim τ³ I(τ) = 2 ∫∫ sin θ (−d·x̂ − i d⊥·x̂)^{−3} dθ dφ`, by angular quadrature.
pub fn cone_integral_limit(cone: &ConeSpec, params: &CgoParams, order: usize) -> Result<Complex64> {
    check_direction(cone, params)?;
    let polar = GaussRule::new(order);
    let n_phi = 2 * order;
    let mut sum = c(0.0, 0.0);
    for (theta, wt) in polar.mapped(0.0, cone.half_angle()) {
        for j in 0..n_phi {
            let u = cone.direction(theta, TAU * j as f64 / n_phi as f64);
            let z = c(-params.d().dot(u), -params.d_perp().dot(u));
            sum += (z * z * z).inv() * (2.0 * math::sin(theta) * wt);
        }
    }
    Ok(sum * (TAU / n_phi as f64))
}

/// Closed form of the limit for `d = −a`: `2π cos θ₀ sin² θ₀`.
pub fn axial_limit(theta0: f64) -> f64 {
    let s = math::sin(theta0);
    TAU * math::cos(theta0) * s * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeIntegralRow {
    pub tau: f64,
    pub abs_i: f64,
    /// `τ³|I(τ)|(1 + k²/τ²)^{3/2}`.
    pub normalized: f64,
    /// `normalized − C_K`.
    pub margin: f64,
    /// Normalized worst-case radial-tail magnitude.
    pub remainder: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeIntegralReport {
    pub c_k: f64,
    pub limit: f64,
    pub rows: Vec<ConeIntegralRow>,
    /// Margins above the median τ stay within 1% of `C_K`, remainder subtracted.
    pub bound_holds: bool,
    /// Same check with the remainder added instead.
    pub bound_holds_additive: bool,
    /// Successive differences of the normalized sequence shrink.
    pub cauchy: bool,
    pub pass: bool,
}

fn check_schedule(taus: &[f64], min_len: usize) -> Result<()> {
    if taus.len() < min_len {
        return Err(Error::InsufficientData { samples: taus.len() });
    }
    if taus.iter().any(|&t| !(t > 0.0)) || taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::PreconditionViolated("tau schedule must be positive and increasing"));
    }
    Ok(())
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Sweeps `τ` and checks `τ³|I(τ)|(1+k²/τ²)^{3/2} ≥ C_K` for large `τ`.
pub fn verify_cone_integral_bound(
    cone: &ConeSpec,
    bg: &Background,
    phi: f64,
    taus: &[f64],
    spec: &QuadratureSpec,
) -> Result<ConeIntegralReport> {
    check_schedule(taus, 4)?;
    let k = bg.k();
    let c_k = lower_bound_constant(cone.half_angle())?;
    let delta = cone.delta();
    let solid_angle = TAU * (1.0 - delta);
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let params = CgoParams::for_cone(cone, phi, tau, k)?;
        let integral = cone_exp_integral(cone, &params, ConeIntegralMethod::ClosedRadial, spec)?;
        let scale = tau * tau * tau * math::powf(1.0 + k * k / (tau * tau), 1.5);
        let tail = 2.0 / (tau * delta) * math::exp(-cone.radius() * tau * delta / 2.0);
        let normalized = scale * integral.norm();
        rows.push(ConeIntegralRow {
            tau,
            abs_i: integral.norm(),
            normalized,
            margin: normalized - c_k,
            remainder: scale * solid_angle * tail,
        });
    }
    let params = CgoParams::for_cone(cone, phi, taus[0], k)?;
    let limit = cone_integral_limit(cone, &params, 48)?.norm();
    let med = median(taus);
    let slack = -0.01 * c_k;
    let large = || rows.iter().filter(|r| r.tau >= med);
    let bound_holds = large().all(|r| r.margin - r.remainder >= slack);
    let bound_holds_additive = large().all(|r| r.margin + r.remainder >= slack);
    let diffs: Vec<f64> = rows.windows(2).map(|w| (w[1].normalized - w[0].normalized).abs()).collect();
    let floor = 1e-12 * rows.last().map_or(1.0, |r| r.normalized.abs().max(1.0));
    let cauchy = diffs.windows(2).all(|w| w[1] <= w[0] || w[1] <= floor);
    Ok(ConeIntegralReport { c_k, limit, pass: bound_holds && cauchy, rows, bound_holds, bound_holds_additive, cauchy })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBoundRow {
    pub tau: f64,
    /// `‖V‖_{L²(K)} τ^{3/2}`.
    pub l2_ratio: f64,
    /// `|∫_K V| τ³`.
    pub integral_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormBoundReport {
    pub rows: Vec<NormBoundRow>,
    pub bounded: bool,
    pub eventually_monotone: bool,
    pub pass: bool,
}

/// `max/min ≤ 2` (an all-zero sequence counts as bounded).
pub fn ratios_bounded(values: &[f64]) -> bool {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        return true;
    }
    min > 0.0 && max / min <= 2.0
}

/// The last three entries are monotone (either direction).
pub fn eventually_monotone(values: &[f64]) -> bool {
    let n = values.len();
    if n < 3 {
        return true;
    }
    let t = &values[n - 3..];
    (t[0] <= t[1] && t[1] <= t[2]) || (t[0] >= t[1] && t[1] >= t[2])
}

/// Scaling of the electric CGO field `V = amplitude · p e^{ρ·(x−x₀)}`:
/// `‖V‖_{L²} ~ τ^{−3/2}` and `|∫V| ~ τ^{−3}` on the cone.
pub fn verify_cgo_norm_bounds(
    cone: &ConeSpec,
    bg: &Background,
    phi: f64,
    amplitude: f64,
    taus: &[f64],
    spec: &QuadratureSpec,
) -> Result<NormBoundReport> {
    check_schedule(taus, 4)?;
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let params = CgoParams::for_cone(cone, phi, tau, bg.k())?;
        check_direction(cone, &params)?;
        let pair = CgoPair::new(&params, bg, CgoFamily::Electric)?.centered_at(cone.apex());
        let nodes = quadrature::cone_rule(cone, spec, Some(tau))?;
        let l2 = quadrature::integrate(&nodes, |x| pair.v(x).norm_sqr() * amplitude * amplitude);
        let int: CVec3 = quadrature::integrate(&nodes, |x| pair.v(x) * amplitude);
        rows.push(NormBoundRow {
            tau,
            l2_ratio: math::sqrt(l2) * math::powf(tau, 1.5),
            integral_ratio: int.norm() * tau * tau * tau,
        });
    }
    let l2: Vec<f64> = rows.iter().map(|r| r.l2_ratio).collect();
    let iv: Vec<f64> = rows.iter().map(|r| r.integral_ratio).collect();
    let bounded = ratios_bounded(&l2) && ratios_bounded(&iv);
    let mono = eventually_monotone(&l2) && eventually_monotone(&iv);
    Ok(NormBoundReport { rows, bounded, eventually_monotone: mono, pass: bounded && mono })
}

/// Least-squares line through `(ln τ, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub tau_range: (f64, f64),
}

pub fn fit_decay_exponent(taus: &[f64], values: &[f64]) -> Result<DecayFit> {
    if taus.len() != values.len() {
        return Err(Error::PreconditionViolated("tau and value lists differ in length"));
    }
    if taus.len() < 3 {
        return Err(Error::InsufficientData { samples: taus.len() });
    }
    for (index, (&t, &v)) in taus.iter().zip(values).enumerate() {
        if !(t > 0.0 && v > 0.0) {
            return Err(Error::NonpositiveValue { index });
        }
    }
    let n = taus.len() as f64;
    let xs: Vec<f64> = taus.iter().map(|&t| math::ln(t)).collect();
    let ys: Vec<f64> = values.iter().map(|&v| math::ln(v)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::PreconditionViolated("tau samples must not all coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| math::powi(y - intercept - slope * x, 2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let lo = taus.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = taus.iter().cloned().fold(0.0, f64::max);
    Ok(DecayFit { slope, intercept, r2, tau_range: (lo, hi) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Vec3;

    #[test]
    fn radial_moment_example() {
        let m = radial_moment(1.0, c(1.0, 0.0), 2.0).unwrap();
        let e2 = math::exp(-2.0);
        assert!((m.full - c(1.0, 0.0)).norm() < 1e-14);
        assert!((m.truncated - c(1.0 - 3.0 * e2, 0.0)).norm() < 1e-13);
        assert!((m.tail - c(3.0 * e2, 0.0)).norm() < 1e-13);
        assert!((m.tail_bound - 2.0 * math::exp(-1.0)).abs() < 1e-15);
        assert_eq!(m.bound_ok, Some(true));
    }

    #[test]
    fn radial_moment_preconditions() {
        assert!(radial_moment(0.0, c(1.0, 0.0), 1.0).is_err());
        assert!(radial_moment(1.0, c(0.0, 1.0), 1.0).is_err());
        assert!(radial_moment(1.0, c(1.0, 0.0), 3.0).is_err());
        let m = radial_moment(2.0, c(0.5, 0.0), 1.0).unwrap();
        assert_eq!(m.bound_ok, None);
    }

    #[test]
    fn small_alpha_approaches_reciprocal() {
        let eta = c(1.5, 0.7);
        let m = radial_moment(1e-9, eta, 1.0).unwrap();
        assert!((m.full - eta.inv()).norm() < 1e-8);
    }

    #[test]
    fn cubic_integral_matches_series_switch() {
        for z in [0.49, 0.51] {
            let eta = c(z, 0.0);
            let expect = truncated_moment(2.0, eta, 1.0);
            assert!((cubic_radial_integral(eta, 1.0) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn lower_bound_constant_values() {
        assert!((lower_bound_constant(PI / 6.0).unwrap() - 0.5952).abs() < 5e-5);
        assert!((lower_bound_constant(PI / 3.0).unwrap() - 2.22144).abs() < 5e-6);
        assert!(lower_bound_constant(1e-8).unwrap() < 1e-15);
        assert!(lower_bound_constant(0.0).is_err());
    }

    #[test]
    fn zero_exponent_limit_is_volume() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, PI / 6.0, 1.0).unwrap();
        let params = CgoParams::for_cone(&cone, 0.0, 1e-9, 0.0).unwrap();
        let got =
            cone_exp_integral(&cone, &params, ConeIntegralMethod::ClosedRadial, &QuadratureSpec::default()).unwrap();
        assert!((got.re - cone.volume()).abs() < 1e-8);
    }

    #[test]
    fn axial_limit_matches_quadrature() {
        let cone = ConeSpec::new(Vec3::ZERO, Vec3::E3, PI / 6.0, 1.0).unwrap();
        let params = CgoParams::for_cone(&cone, 0.3, 10.0, 1.0).unwrap();
        let q = cone_integral_limit(&cone, &params, 32).unwrap();
        assert!((q.norm() - axial_limit(PI / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn exact_power_law_fit() {
        let taus = [2.0, 4.0, 8.0, 16.0];
        let vals: Vec<f64> = taus.iter().map(|t: &f64| t.powf(-3.0)).collect();
        let fit = fit_decay_exponent(&taus, &vals).unwrap();
        assert!((fit.slope + 3.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert_eq!(fit.tau_range, (2.0, 16.0));
        assert_eq!(fit_decay_exponent(&taus[..2], &vals[..2]), Err(Error::InsufficientData { samples: 2 }));
        assert_eq!(fit_decay_exponent(&taus[..3], &[1.0, 0.0, 1.0]), Err(Error::NonpositiveValue { index: 1 }));
    }

    #[test]
    fn bounded_and_monotone_helpers() {
        assert!(ratios_bounded(&[0.0, 0.0]));
        assert!(ratios_bounded(&[1.0, 1.9]));
        assert!(!ratios_bounded(&[1.0, 2.1]));
        assert!(!ratios_bounded(&[0.0, 1.0]));
        assert!(eventually_monotone(&[5.0, 1.0, 2.0, 3.0]));
        assert!(!eventually_monotone(&[1.0, 3.0, 2.0]));
    }
}
