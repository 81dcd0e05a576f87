//! Evaluable complex vector fields: CGO test pairs, plane waves, Herglotz
//! waves, bump generators, Hölder test sources and finite-difference Maxwell
//! residuals.
//!
//! Exponential-type fields carry their curl in closed form,
//! `∇∧(q e^{κ·x}) = κ∧q e^{κ·x}`; finite differences are only a cross-check.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Background, ConeSpec, Support};
use crate::math::{self, c, i};
use crate::quadrature::{self, NODE_CAP};
use crate::vector::{CVec3, Vec3};

pub type EvalFn = Arc<dyn Fn(Vec3) -> CVec3 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothness {
    /// Hölder continuous with exponent `α ∈ (0, 1)`.
    Holder(f64),
    C1,
    CInf,
    Analytic,
}

impl Smoothness {
    fn rank(self) -> (u8, f64) {
        match self {
            Smoothness::Holder(a) => (0, a),
            Smoothness::C1 => (1, 0.0),
            Smoothness::CInf => (2, 0.0),
            Smoothness::Analytic => (3, 0.0),
        }
    }

    /// The weaker of two regularity classes.
    pub fn min(self, other: Smoothness) -> Smoothness {
        let (a, b) = (self.rank(), other.rank());
        if a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1) {
            self
        } else {
            other
        }
    }
}

/// A map `ℝ³ → ℂ³` with support and regularity metadata.
#[derive(Clone)]
pub struct ComplexVectorField {
    eval: EvalFn,
    curl: Option<EvalFn>,
    support: Support,
    smoothness: Smoothness,
}

impl core::fmt::Debug for ComplexVectorField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ComplexVectorField")
            .field("support", &self.support)
            .field("smoothness", &self.smoothness)
            .field("analytic_curl", &self.curl.is_some())
            .finish()
    }
}

impl ComplexVectorField {
    pub fn new(
        eval: impl Fn(Vec3) -> CVec3 + Send + Sync + 'static,
        support: Support,
        smoothness: Smoothness,
    ) -> Result<Self> {
        if let Smoothness::Holder(a) = smoothness {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::PreconditionViolated("Hölder exponent must lie in (0, 1)"));
            }
        }
        Ok(ComplexVectorField { eval: Arc::new(eval), curl: None, support, smoothness })
    }

    /// Attaches a closed-form curl.
    pub fn with_curl(mut self, curl: impl Fn(Vec3) -> CVec3 + Send + Sync + 'static) -> Self {
        self.curl = Some(Arc::new(curl));
        self
    }

    pub fn with_support(mut self, support: Support) -> Self {
        self.support = support;
        self
    }

    pub fn zero() -> Self {
        ComplexVectorField {
            eval: Arc::new(|_| CVec3::ZERO),
            curl: Some(Arc::new(|_| CVec3::ZERO)),
            support: Support::AllSpace,
            smoothness: Smoothness::Analytic,
        }
    }

    pub fn constant(value: CVec3, support: Support) -> Self {
        let inside = support.clone();
        ComplexVectorField {
            eval: Arc::new(move |x| if inside.contains(x) { value } else { CVec3::ZERO }),
            curl: Some(Arc::new(|_| CVec3::ZERO)),
            support,
            smoothness: Smoothness::Analytic,
        }
    }

    /// `q e^{κ·x}` on all of space.
    pub fn exponential(q: CVec3, kappa: CVec3) -> Self {
        let curl_q = kappa.cross(q);
        ComplexVectorField {
            eval: Arc::new(move |x| q * math::cexp(kappa.dot_real(x))),
            curl: Some(Arc::new(move |x| curl_q * math::cexp(kappa.dot_real(x)))),
            support: Support::AllSpace,
            smoothness: Smoothness::Analytic,
        }
    }

    #[inline]
    pub fn eval(&self, x: Vec3) -> CVec3 {
        (self.eval)(x)
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn has_analytic_curl(&self) -> bool {
        self.curl.is_some()
    }

    /// Closed-form curl when available, otherwise a fourth-order central
    /// difference with step `h`.
    pub fn curl(&self, x: Vec3, h: f64) -> CVec3 {
        match &self.curl {
            Some(c) => c(x),
            None => fd_curl4(&*self.eval, x, h),
        }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let f = self.eval.clone();
        let curl = self.curl.clone().map(|c| -> EvalFn { Arc::new(move |x| c(x) * s) });
        ComplexVectorField {
            eval: Arc::new(move |x| f(x) * s),
            curl,
            support: self.support.clone(),
            smoothness: self.smoothness,
        }
    }

    /// Pointwise sum. The support is kept only when both agree.
    pub fn plus(&self, other: &ComplexVectorField) -> Self {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let curl = match (&self.curl, &other.curl) {
            (Some(a), Some(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Some(Arc::new(move |x| a(x) + b(x)) as EvalFn)
            }
            _ => None,
        };
        let support = if self.support == other.support { self.support.clone() } else { Support::AllSpace };
        ComplexVectorField {
            eval: Arc::new(move |x| f(x) + g(x)),
            curl,
            support,
            smoothness: self.smoothness.min(other.smoothness),
        }
    }
}

/// Centered second-order finite-difference curl.
pub fn fd_curl(f: &dyn Fn(Vec3) -> CVec3, x: Vec3, h: f64) -> CVec3 {
    let d = |j: usize| {
        let mut e = Vec3::ZERO;
        e.0[j] = h;
        (f(x + e) - f(x - e)) * (0.5 / h)
    };
    curl_from_partials([d(0), d(1), d(2)])
}

fn fd_curl4(f: &dyn Fn(Vec3) -> CVec3, x: Vec3, h: f64) -> CVec3 {
    let d = |j: usize| {
        let mut e = Vec3::ZERO;
        e.0[j] = h;
        let near = f(x + e) - f(x - e);
        let far = f(x + e * 2.0) - f(x - e * 2.0);
        (near * 8.0 - far) * (1.0 / (12.0 * h))
    };
    curl_from_partials([d(0), d(1), d(2)])
}

/// `partials[j]` holds `∂ⱼF`.
fn curl_from_partials(p: [CVec3; 3]) -> CVec3 {
    CVec3::new(p[1][2] - p[2][1], p[2][0] - p[0][2], p[0][1] - p[1][0])
}

/// The quadruple `(d, d⊥, τ, k)` defining a CGO exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgoParams {
    d: Vec3,
    d_perp: Vec3,
    tau: f64,
    k: f64,
}

impl CgoParams {
    pub fn new(d: Vec3, d_perp: Vec3, tau: f64, k: f64) -> Result<Self> {
        if (d.norm() - 1.0).abs() > 1e-12 || (d_perp.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidCgoParams("d and d_perp must be unit vectors"));
        }
        if d.dot(d_perp).abs() > 1e-12 {
            return Err(Error::InvalidCgoParams("d and d_perp must be orthogonal"));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidCgoParams("tau must be positive"));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidCgoParams("k must be nonnegative"));
        }
        Ok(CgoParams { d, d_perp, tau, k })
    }

    /// `d = −a` and `d⊥ = cos φ e₁ + sin φ e₂` in the cone's frame.
    pub fn for_cone(cone: &ConeSpec, phi: f64, tau: f64, k: f64) -> Result<Self> {
        let [e1, e2] = cone.frame();
        let d_perp = e1 * math::cos(phi) + e2 * math::sin(phi);
        Self::new(-cone.axis(), d_perp, tau, k)
    }

    pub fn d(&self) -> Vec3 {
        self.d
    }
    pub fn d_perp(&self) -> Vec3 {
        self.d_perp
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `ρ = τd + i√(τ²+k²) d⊥`.
    pub fn rho(&self) -> CVec3 {
        let s = math::sqrt(self.tau * self.tau + self.k * self.k);
        CVec3::from_parts(self.d * self.tau, self.d_perp * s)
    }

    /// `p = d⊥ − i√(1+k²/τ²) d`.
    pub fn p(&self) -> CVec3 {
        let s = math::sqrt(1.0 + (self.k / self.tau) * (self.k / self.tau));
        CVec3::from_parts(self.d_perp, self.d * -s)
    }

    pub fn rho_p(&self) -> (CVec3, CVec3) {
        (self.rho(), self.p())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgoFamily {
    /// `V = p e^{ρ·x}`, `W = ρ∧p e^{ρ·x}/(iωμ₀)`; probes `J₂`.
    Electric,
    /// `V = −ρ∧p e^{ρ·x}/(iωε₀)`, `W = p e^{ρ·x}`; probes `J₁`.
    Magnetic,
}

/// Solution `(V, W)` of `∇∧V − iωμ₀W = 0`, `∇∧W + iωε₀V = 0` of the form
/// `(V₀, W₀) e^{ρ·(x − origin)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgoPair {
    pub rho: CVec3,
    pub v0: CVec3,
    pub w0: CVec3,
    pub origin: Vec3,
}

impl CgoPair {
    pub fn new(params: &CgoParams, bg: &Background, family: CgoFamily) -> Result<Self> {
        let k = bg.k();
        if (k - params.k()).abs() > 1e-12 * k.max(1.0) {
            return Err(Error::WavenumberMismatch { expected: k, found: params.k() });
        }
        let (rho, p) = params.rho_p();
        let rp = rho.cross(p);
        let (v0, w0) = match family {
            CgoFamily::Electric => (p, rp * (i() * bg.omega * bg.mu0).inv()),
            CgoFamily::Magnetic => (-(rp * (i() * bg.omega * bg.eps0).inv()), p),
        };
        Ok(CgoPair { rho, v0, w0, origin: Vec3::ZERO })
    }

    /// Same pair with the exponent centered at `origin`.
    pub fn centered_at(self, origin: Vec3) -> Self {
        CgoPair { origin, ..self }
    }

    #[inline]
    pub fn phase(&self, x: Vec3) -> Complex64 {
        math::cexp(self.rho.dot_real(x - self.origin))
    }

    #[inline]
    pub fn v(&self, x: Vec3) -> CVec3 {
        self.v0 * self.phase(x)
    }

    #[inline]
    pub fn w(&self, x: Vec3) -> CVec3 {
        self.w0 * self.phase(x)
    }

    /// `(V, W)` at `x` with a single exponential evaluation.
    #[inline]
    pub fn vw(&self, x: Vec3) -> (CVec3, CVec3) {
        let e = self.phase(x);
        (self.v0 * e, self.w0 * e)
    }

    pub fn to_fields(&self) -> (ComplexVectorField, ComplexVectorField) {
        let shift = self.rho.dot_real(self.origin);
        let scale = math::cexp(-shift);
        (
            ComplexVectorField::exponential(self.v0 * scale, self.rho),
            ComplexVectorField::exponential(self.w0 * scale, self.rho),
        )
    }
}

pub fn cgo_pair_electric(params: &CgoParams, bg: &Background) -> Result<CgoPair> {
    CgoPair::new(params, bg, CgoFamily::Electric)
}

pub fn cgo_pair_magnetic(params: &CgoParams, bg: &Background) -> Result<CgoPair> {
    CgoPair::new(params, bg, CgoFamily::Magnetic)
}

/// Incident plane wave `E = p e^{ik d·x}`, `H = (k/(ωμ₀)) d∧p e^{ik d·x}`.
pub fn plane_wave_incident(p: CVec3, dir: Vec3, bg: &Background) -> Result<(ComplexVectorField, ComplexVectorField)> {
    let dir = dir.normalized().ok_or(Error::NonTransversePolarization)?;
    if p.dot_real(dir).norm() > 1e-12 * p.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NonTransversePolarization);
    }
    let k = bg.k();
    let kappa = CVec3::from_parts(Vec3::ZERO, dir * k);
    let h = p.crossed_by(dir) * (k / (bg.omega * bg.mu0));
    Ok((ComplexVectorField::exponential(p, kappa), ComplexVectorField::exponential(h, kappa)))
}

/// Approximation-rate metadata `(ζ, β, ζ′, β′)` of a kernel sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub zeta: f64,
    pub beta: f64,
    pub zeta_m: f64,
    pub beta_m: f64,
}

/// Kernel `g : S² → ℂ³` of an electric Herglotz wave with wavenumber `k₁`.
#[derive(Clone)]
pub struct HerglotzKernel {
    g: Arc<dyn Fn(Vec3) -> CVec3 + Send + Sync>,
    k1: f64,
    rates: Option<Rates>,
}

impl core::fmt::Debug for HerglotzKernel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("HerglotzKernel").field("k1", &self.k1).field("rates", &self.rates).finish()
    }
}

impl HerglotzKernel {
    pub fn new(g: impl Fn(Vec3) -> CVec3 + Send + Sync + 'static, k1: f64) -> Result<Self> {
        if !(k1 > 0.0 && k1.is_finite()) {
            return Err(Error::PreconditionViolated("Herglotz wavenumber must be positive"));
        }
        Ok(HerglotzKernel { g: Arc::new(g), k1, rates: None })
    }

    pub fn constant(value: CVec3, k1: f64) -> Result<Self> {
        Self::new(move |_| value, k1)
    }

    /// Attaches rates; both pairs must satisfy `β < (2/3)ζ`.
    pub fn with_rates(mut self, rates: Rates) -> Result<Self> {
        let pos = [rates.zeta, rates.beta, rates.zeta_m, rates.beta_m].iter().all(|&v| v > 0.0);
        if !pos || rates.beta >= 2.0 * rates.zeta / 3.0 || rates.beta_m >= 2.0 * rates.zeta_m / 3.0 {
            return Err(Error::RateGateFailed);
        }
        self.rates = Some(rates);
        Ok(self)
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn rates(&self) -> Option<Rates> {
        self.rates
    }

    #[inline]
    pub fn g(&self, d: Vec3) -> CVec3 {
        (self.g)(d)
    }
}

struct SampledKernel {
    dirs: Vec<Vec3>,
    values: Vec<CVec3>,
    k1: f64,
}

impl SampledKernel {
    fn new(kernel: &HerglotzKernel, order: usize, map: impl Fn(Vec3, CVec3) -> CVec3) -> Result<Self> {
        let nodes = 2 * order.saturating_mul(order);
        if nodes > NODE_CAP {
            return Err(Error::BudgetExceeded { nodes, cap: NODE_CAP });
        }
        let rule = quadrature::sphere_rule(order)?;
        let dirs = rule.iter().map(|n| n.dir).collect();
        let values = rule.iter().map(|n| map(n.dir, kernel.g(n.dir)) * n.w).collect();
        Ok(SampledKernel { dirs, values, k1: kernel.k1 })
    }

    fn eval(&self, x: Vec3) -> CVec3 {
        let mut s = CVec3::ZERO;
        for (d, v) in self.dirs.iter().zip(&self.values) {
            s += *v * math::cexp(c(0.0, self.k1 * x.dot(*d)));
        }
        s
    }

    fn curl(&self, x: Vec3) -> CVec3 {
        let mut s = CVec3::ZERO;
        for (d, v) in self.dirs.iter().zip(&self.values) {
            s += v.crossed_by(*d) * (i() * self.k1 * math::cexp(c(0.0, self.k1 * x.dot(*d))));
        }
        s
    }
}

fn herglotz_field(sampled: SampledKernel) -> ComplexVectorField {
    let sampled = Arc::new(sampled);
    let s2 = sampled.clone();
    ComplexVectorField {
        eval: Arc::new(move |x| sampled.eval(x)),
        curl: Some(Arc::new(move |x| s2.curl(x))),
        support: Support::AllSpace,
        smoothness: Smoothness::Analytic,
    }
}

/// `E_g(x) = ∫_{S²} g(d) e^{ik₁x·d} dσ(d)` by the product sphere rule.
pub fn herglotz_electric(kernel: &HerglotzKernel, quad_order: usize) -> Result<ComplexVectorField> {
    Ok(herglotz_field(SampledKernel::new(kernel, quad_order, |_, g| g)?))
}

/// `H_f` with kernel `f(d) = factor · d∧g(d)`.
pub fn herglotz_magnetic_with_factor(
    kernel: &HerglotzKernel,
    factor: f64,
    quad_order: usize,
) -> Result<ComplexVectorField> {
    Ok(herglotz_field(SampledKernel::new(kernel, quad_order, |d, g| g.crossed_by(d) * factor)?))
}

/// `H_f` with the kernel relation `f(d) = (k₁/(ωμ₀)) d∧g(d)`, which makes
/// `H_f = ∇∧E_g/(iωμ₀)`.
pub fn herglotz_magnetic(kernel: &HerglotzKernel, bg: &Background, quad_order: usize) -> Result<ComplexVectorField> {
    herglotz_magnetic_with_factor(kernel, kernel.k1 / (bg.omega * bg.mu0), quad_order)
}

/// `exp(−1/(1 − |x−c|²/R²))` inside the ball and its gradient.
#[inline]
pub fn bump_with_gradient(x: Vec3, center: Vec3, radius: f64) -> (f64, Vec3) {
    let v = x - center;
    let u = v.dot(v) / (radius * radius);
    if u >= 1.0 {
        return (0.0, Vec3::ZERO);
    }
    let s = 1.0 - u;
    let b = math::exp(-1.0 / s);
    (b, v * (-2.0 * b / (radius * radius * s * s)))
}

/// Smooth compactly supported `polarization · exp(−1/(1 − |x−c|²/R²))`.
pub fn bump_field(center: Vec3, radius: f64, polarization: CVec3) -> Result<ComplexVectorField> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::NonpositiveRadius { radius });
    }
    Ok(ComplexVectorField {
        eval: Arc::new(move |x| polarization * bump_with_gradient(x, center, radius).0),
        curl: Some(Arc::new(move |x| polarization.crossed_by(bump_with_gradient(x, center, radius).1))),
        support: Support::Ball { center, radius },
        smoothness: Smoothness::CInf,
    })
}

/// `J(x) = c₀ + |x − x₀|^α c₁` restricted to `support`, with `J(x₀) = c₀`.
pub fn holder_source(x0: Vec3, c0: CVec3, c1: CVec3, alpha: f64, support: Support) -> Result<ComplexVectorField> {
    if !(alpha > 0.0) {
        return Err(Error::PreconditionViolated("Hölder exponent must be positive"));
    }
    let smoothness = if alpha < 1.0 { Smoothness::Holder(alpha) } else { Smoothness::C1 };
    let inside = support.clone();
    ComplexVectorField::new(
        move |x| {
            if inside.contains(x) {
                c0 + c1 * math::powf((x - x0).norm(), alpha)
            } else {
                CVec3::ZERO
            }
        },
        support,
        smoothness,
    )
}

/// Sources `J₁ = ∇∧E − iωμ₀H`, `J₂ = ∇∧H + iωε₀E` that make `(E, H)` an
/// exact solution. Curls are analytic when available.
pub fn sources_from_fields(
    e: &ComplexVectorField,
    h: &ComplexVectorField,
    bg: &Background,
) -> (ComplexVectorField, ComplexVectorField) {
    let (e1, h1) = (e.clone(), h.clone());
    let (e2, h2) = (e.clone(), h.clone());
    let (a, b) = (i() * bg.omega * bg.mu0, i() * bg.omega * bg.eps0);
    const STEP: f64 = 1e-3;
    let support = if e.support == h.support { e.support.clone() } else { Support::AllSpace };
    let smoothness = e.smoothness.min(h.smoothness);
    let j1 = ComplexVectorField {
        eval: Arc::new(move |x| e1.curl(x, STEP) - h1.eval(x) * a),
        curl: None,
        support: support.clone(),
        smoothness,
    };
    let j2 = ComplexVectorField {
        eval: Arc::new(move |x| h2.curl(x, STEP) + e2.eval(x) * b),
        curl: None,
        support,
        smoothness,
    };
    (j1, j2)
}

/// Finite-difference residuals `r₁ = ∇∧E − iωμ₀H − J₁`,
/// `r₂ = ∇∧H + iωε₀E − J₂` at `x` with centered step `h`.
pub fn maxwell_residual(
    e: &ComplexVectorField,
    h_field: &ComplexVectorField,
    j1: &ComplexVectorField,
    j2: &ComplexVectorField,
    bg: &Background,
    x: Vec3,
    h: f64,
) -> Result<(CVec3, CVec3)> {
    for f in [e, h_field, j1, j2] {
        if f.support.margin(x) < 2.0 * h {
            return Err(Error::SupportMarginViolated);
        }
    }
    let r1 = fd_curl(&*e.eval, x, h) - h_field.eval(x) * (i() * bg.omega * bg.mu0) - j1.eval(x);
    let r2 = fd_curl(&*h_field.eval, x, h) + e.eval(x) * (i() * bg.omega * bg.eps0) - j2.eval(x);
    Ok((r1, r2))
}
