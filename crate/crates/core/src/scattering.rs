//! Far fields of compactly supported sources, non-radiating sources, induced
//! sources of penetrable media and first-order (Born) medium far fields.
//!
//! With `Ĵᵢ(x̂) = ∫ e^{−ik x̂·y} Jᵢ(y) dy` the radiating solution of
//! `∇∧E − iωμ₀H = J₁`, `∇∧H + iωε₀E = J₂` has
//!
//! ```text
//! E∞ = (1/4π) [ iωμ₀ (I − x̂x̂ᵀ) Ĵ₂ + ik x̂∧Ĵ₁ ]
//! H∞ = (1/4π) [ −iωε₀ (I − x̂x̂ᵀ) Ĵ₁ + ik x̂∧Ĵ₂ ]
//! ```
//!
//! so `H∞ = Y x̂∧E∞` with admittance `Y = √(ε₀/μ₀)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::ComplexVectorField;
use crate::geometry::{Background, Support};
use crate::math::{self, c, i, PI};
use crate::quadrature::{self, QuadratureSpec, SphereNode};
use crate::vector::{CVec3, Vec3};

/// Magnetic-type `J₁` and electric-type `J₂` sources on a bounded support.
#[derive(Debug, Clone)]
pub struct SourcePair {
    pub j1: ComplexVectorField,
    pub j2: ComplexVectorField,
    pub support: Support,
    /// Hölder exponent when the pair is only Hölder continuous.
    pub alpha: Option<f64>,
}

impl SourcePair {
    pub fn new(j1: ComplexVectorField, j2: ComplexVectorField, support: Support) -> Result<Self> {
        if !support.is_bounded() {
            return Err(Error::UnboundedSupport);
        }
        let alpha = match j1.smoothness().min(j2.smoothness()) {
            crate::fields::Smoothness::Holder(a) => Some(a),
            _ => None,
        };
        Ok(SourcePair { j1, j2, support, alpha })
    }

    /// Electric-type source only.
    pub fn electric(j2: ComplexVectorField, support: Support) -> Result<Self> {
        Self::new(ComplexVectorField::zero(), j2, support)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        SourcePair { j1: self.j1.scaled(s), j2: self.j2.scaled(s), ..self.clone() }
    }
}

pub type ScalarField = Arc<dyn Fn(Vec3) -> f64 + Send + Sync>;

/// Penetrable medium `(ε, μ, σ)` equal to the background outside `support`.
#[derive(Clone)]
pub struct MediumParams {
    eps: ScalarField,
    mu: ScalarField,
    sigma: ScalarField,
    support: Support,
    bg: Background,
}

impl core::fmt::Debug for MediumParams {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MediumParams").field("support", &self.support).field("bg", &self.bg).finish()
    }
}

impl MediumParams {
    /// Variable coefficients; values are only consulted inside `support`.
    pub fn new(
        eps: impl Fn(Vec3) -> f64 + Send + Sync + 'static,
        mu: impl Fn(Vec3) -> f64 + Send + Sync + 'static,
        sigma: impl Fn(Vec3) -> f64 + Send + Sync + 'static,
        support: Support,
        bg: Background,
    ) -> Result<Self> {
        if !support.is_bounded() {
            return Err(Error::UnboundedSupport);
        }
        Ok(MediumParams { eps: Arc::new(eps), mu: Arc::new(mu), sigma: Arc::new(sigma), support, bg })
    }

    /// Homogeneous inclusion with constants `(ε₁, μ₁, σ₁)`.
    pub fn homogeneous(support: Support, eps1: f64, mu1: f64, sigma1: f64, bg: Background) -> Result<Self> {
        if !(eps1 > 0.0 && mu1 > 0.0 && sigma1 >= 0.0) {
            return Err(Error::PreconditionViolated("medium needs eps > 0, mu > 0, sigma >= 0"));
        }
        Self::new(move |_| eps1, move |_| mu1, move |_| sigma1, support, bg)
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn mu(&self, x: Vec3) -> f64 {
        if self.support.contains(x) {
            (self.mu)(x)
        } else {
            self.bg.mu0
        }
    }

    /// `γ = ε + iσ/ω`.
    pub fn gamma(&self, x: Vec3) -> Complex64 {
        if self.support.contains(x) {
            c((self.eps)(x), (self.sigma)(x) / self.bg.omega)
        } else {
            c(self.bg.eps0, 0.0)
        }
    }
}

/// Tangential far-field patterns on the product sphere rule.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    pub order: usize,
    pub nodes: Vec<SphereNode>,
    pub e_inf: Vec<CVec3>,
    pub h_inf: Vec<CVec3>,
    /// `√(ε₀/μ₀)` of the background that produced the pattern.
    pub admittance: f64,
}

impl FarFieldPattern {
    pub fn zero(order: usize, admittance: f64) -> Result<Self> {
        let nodes = quadrature::sphere_rule(order)?;
        let n = nodes.len();
        Ok(FarFieldPattern {
            order,
            nodes,
            e_inf: alloc::vec![CVec3::ZERO; n],
            h_inf: alloc::vec![CVec3::ZERO; n],
            admittance,
        })
    }

    /// `‖E∞‖_{L²(S²)}`.
    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.nodes.iter().zip(&self.e_inf).map(|(n, e)| n.w * e.norm_sqr()).sum())
    }

    /// `max |E∞|` over the nodes.
    pub fn max_norm(&self) -> f64 {
        self.e_inf.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        FarFieldPattern {
            e_inf: self.e_inf.iter().map(|e| *e * s).collect(),
            h_inf: self.h_inf.iter().map(|h| *h * s).collect(),
            ..self.clone()
        }
    }

    pub fn plus(&self, other: &FarFieldPattern) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::GridMismatch);
        }
        Ok(FarFieldPattern {
            e_inf: self.e_inf.iter().zip(&other.e_inf).map(|(a, b)| *a + *b).collect(),
            h_inf: self.h_inf.iter().zip(&other.h_inf).map(|(a, b)| *a + *b).collect(),
            ..self.clone()
        })
    }

    /// `max |x̂·E∞| + |x̂·H∞|` over the nodes.
    pub fn tangential_residual(&self) -> f64 {
        self.nodes
            .iter()
            .zip(self.e_inf.iter().zip(&self.h_inf))
            .map(|(n, (e, h))| e.dot_real(n.dir).norm() + h.dot_real(n.dir).norm())
            .fold(0.0, f64::max)
    }
}

/// `(I − x̂x̂ᵀ)Ĵ` with the radiation integrals `Ĵ₁, Ĵ₂` at one direction.
fn patterns_from_transforms(dir: Vec3, j1: CVec3, j2: CVec3, bg: &Background) -> (CVec3, CVec3) {
    let k = bg.k();
    let s = 1.0 / (4.0 * PI);
    let e = (j2.project_out(dir) * (i() * bg.omega * bg.mu0) + j1.crossed_by(dir) * (i() * k)) * s;
    let h = (j1.project_out(dir) * (-i() * bg.omega * bg.eps0) + j2.crossed_by(dir) * (i() * k)) * s;
    (e, h)
}

/// Far-field patterns of the radiating solution driven by `src`.
pub fn far_field_from_source(
    src: &SourcePair,
    bg: &Background,
    grid_order: usize,
    spec: &QuadratureSpec,
) -> Result<FarFieldPattern> {
    let volume = quadrature::support_rule(&src.support, spec)?;
    let samples: Vec<(Vec3, CVec3, CVec3)> = volume
        .iter()
        .map(|n| (n.x, src.j1.eval(n.x) * n.w, src.j2.eval(n.x) * n.w))
        .filter(|(_, a, b)| a.norm_sqr() + b.norm_sqr() > 0.0)
        .collect();
    let mut pattern = FarFieldPattern::zero(grid_order, bg.admittance())?;
    let k = bg.k();
    for (idx, node) in pattern.nodes.iter().enumerate() {
        let (mut a, mut b) = (CVec3::ZERO, CVec3::ZERO);
        for (y, j1, j2) in &samples {
            let ph = math::cexp(c(0.0, -k * node.dir.dot(*y)));
            a += *j1 * ph;
            b += *j2 * ph;
        }
        let (e, h) = patterns_from_transforms(node.dir, a, b, bg);
        pattern.e_inf[idx] = e;
        pattern.h_inf[idx] = h;
    }
    Ok(pattern)
}

/// Radiated `(E, H)` at an observation point outside the support, from the
/// free-space dyadic Green's function.
pub fn radiated_field(src: &SourcePair, bg: &Background, x: Vec3, spec: &QuadratureSpec) -> Result<(CVec3, CVec3)> {
    let volume = quadrature::support_rule(&src.support, spec)?;
    let k = bg.k();
    let (mut e, mut h) = (CVec3::ZERO, CVec3::ZERO);
    for n in &volume {
        let rvec = x - n.x;
        let r = rvec.norm();
        if r == 0.0 {
            return Err(Error::PreconditionViolated("observation point lies on the source support"));
        }
        let rhat = rvec * (1.0 / r);
        let kr = k * r;
        let phi = math::cexp(c(0.0, kr)) * (1.0 / (4.0 * PI * r));
        let a = c(1.0 - 1.0 / (kr * kr), 1.0 / kr);
        let b = c(1.0 - 3.0 / (kr * kr), 3.0 / kr);
        let green = |j: CVec3| (j * a - CVec3::from(rhat) * (j.dot_real(rhat) * b)) * phi;
        let grad = rhat.to_complex() * (phi * c(-1.0 / r, k));
        let (j1, j2) = (src.j1.eval(n.x) * n.w, src.j2.eval(n.x) * n.w);
        e += green(j2) * (i() * bg.omega * bg.mu0) + grad.cross(j1);
        h += green(j1) * (-i() * bg.omega * bg.eps0) + grad.cross(j2);
    }
    Ok((e, h))
}

fn enclosing(a: &Support, b: &Support) -> Result<Support> {
    if !a.is_bounded() || !b.is_bounded() {
        return Err(Error::NonCompactSupport);
    }
    if a == b {
        return Ok(a.clone());
    }
    match (a, b) {
        (Support::Ball { center: c1, radius: r1 }, Support::Ball { center: c2, radius: r2 }) => {
            let d = (*c2 - *c1).norm();
            Ok(Support::Ball { center: *c1, radius: r1.max(d + r2) })
        }
        _ => Err(Error::PreconditionViolated("generators need equal or ball supports")),
    }
}

/// `J₁ = ∇∧E₀ − iωμ₀H₀`, `J₂ = ∇∧H₀ + iωε₀E₀` for compactly supported smooth
/// `(E₀, H₀)`; their radiating solution is `(E₀, H₀)` itself, so the far field
/// vanishes.
pub fn nonradiating_source(e0: &ComplexVectorField, h0: &ComplexVectorField, bg: &Background) -> Result<SourcePair> {
    let support = enclosing(e0.support(), h0.support())?;
    let (j1, j2) = crate::fields::sources_from_fields(e0, h0, bg);
    SourcePair::new(j1.with_support(support.clone()), j2.with_support(support.clone()), support)
}

/// Induced sources `J₁ = iω(μ − μ₀)Hᵗ`, `J₂ = −iω(γ − ε₀)Eᵗ` that turn the
/// medium equations into background equations with sources.
pub fn induced_sources_from_medium(
    med: &MediumParams,
    e_total: &ComplexVectorField,
    h_total: &ComplexVectorField,
) -> Result<SourcePair> {
    let bg = med.bg;
    let (m1, m2) = (med.clone(), med.clone());
    let (et, ht) = (e_total.clone(), h_total.clone());
    let smooth = e_total.smoothness().min(h_total.smoothness());
    let support = med.support.clone();
    let j1 =
        ComplexVectorField::new(move |x| ht.eval(x) * (i() * bg.omega * (m1.mu(x) - bg.mu0)), support.clone(), smooth)?;
    let j2 = ComplexVectorField::new(
        move |x| et.eval(x) * (-i() * bg.omega * (m2.gamma(x) - bg.eps0)),
        support.clone(),
        smooth,
    )?;
    SourcePair::new(j1, j2, support)
}

/// First-order far field: induced sources evaluated with the incident field.
pub fn born_far_field(
    med: &MediumParams,
    e_inc: &ComplexVectorField,
    h_inc: &ComplexVectorField,
    grid_order: usize,
    spec: &QuadratureSpec,
) -> Result<FarFieldPattern> {
    let src = induced_sources_from_medium(med, e_inc, h_inc)?;
    far_field_from_source(&src, &med.bg, grid_order, spec)
}

/// `max |H∞ − Y x̂∧E∞| + |E∞ + x̂∧H∞/Y|` over the grid.
pub fn far_field_equiv_check(pattern: &FarFieldPattern) -> f64 {
    let y = pattern.admittance;
    pattern
        .nodes
        .iter()
        .zip(pattern.e_inf.iter().zip(&pattern.h_inf))
        .map(|(n, (e, h))| (*h - e.crossed_by(n.dir) * y).norm() + (*e + h.crossed_by(n.dir) * (1.0 / y)).norm())
        .fold(0.0, f64::max)
}

/// Weighted `L²(S²)` norm of `E∞ᴬ − E∞ᴮ`.
pub fn farfield_distance(a: &FarFieldPattern, b: &FarFieldPattern) -> Result<f64> {
    if a.order != b.order || a.nodes.len() != b.nodes.len() {
        return Err(Error::GridMismatch);
    }
    let s: f64 = a.nodes.iter().zip(a.e_inf.iter().zip(&b.e_inf)).map(|(n, (x, y))| n.w * (*x - *y).norm_sqr()).sum();
    Ok(math::sqrt(s))
}
