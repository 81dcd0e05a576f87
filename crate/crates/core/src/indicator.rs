//! Integral identities with CGO test pairs, the boundary functional on a
//! truncated cone, apex source recovery, visibility classification and
//! coronal-domain comparisons.
//!
//! For `(E, H)` solving `∇∧E − iωμ₀H = J₁`, `∇∧H + iωε₀E = J₂` in a cone and a
//! pair `(V, W)` solving the source-free system,
//!
//! ```text
//! ∫ J₁·W + J₂·V          = ∫_∂ W·(ν∧E) + V·(ν∧H)
//! ε₀∫ J₁·V − μ₀∫ J₂·W    = ε₀∫_∂ V·(ν∧E) − μ₀∫_∂ W·(ν∧H)
//! ```
//!
//! (bilinear products). With the electric CGO pair the left side of the first
//! identity behaves like `J₂(x₀)·p ∫_K e^{ρ·x}` as `τ → ∞`, and with the
//! magnetic pair like `J₁(x₀)·p ∫_K e^{ρ·x}`; dividing by the cone integral
//! and inverting over several azimuths recovers the apex values.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::asymptotics::{self, ConeIntegralMethod, DecayFit};
use crate::error::{Error, Result};
use crate::fields::{CgoFamily, CgoPair, CgoParams, ComplexVectorField};
use crate::geometry::{Background, ConeSpec, CoronalSpec};
use crate::math::{self, c, FRAC_PI_2, PI};
use crate::quadrature::{self, QuadratureSpec, SurfaceNode};
use crate::scattering::{self, FarFieldPattern, SourcePair};
use crate::vector::{CVec3, Vec3};

/// Default threshold separating zero from nonzero far fields.
pub const NOISE_FLOOR: f64 = 1e-6;

/// Both sides of the two integral identities and their residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub volume1: Complex64,
    pub boundary1: Complex64,
    pub volume2: Complex64,
    pub boundary2: Complex64,
}

impl IdentityResidual {
    pub fn res1(&self) -> f64 {
        (self.volume1 - self.boundary1).norm()
    }

    pub fn res2(&self) -> f64 {
        (self.volume2 - self.boundary2).norm()
    }

    /// Residuals relative to the larger side of each identity.
    pub fn relative(&self) -> (f64, f64) {
        let rel = |r: f64, a: Complex64, b: Complex64| {
            let s = a.norm().max(b.norm());
            if s == 0.0 {
                r
            } else {
                r / s
            }
        };
        (rel(self.res1(), self.volume1, self.boundary1), rel(self.res2(), self.volume2, self.boundary2))
    }
}

/// Evaluates both identities on `domain` (volume over the truncated cone,
/// boundary over cap and lateral surface).
#[allow(clippy::too_many_arguments)]
pub fn integral_identity_residual(
    e: &ComplexVectorField,
    h: &ComplexVectorField,
    j1: &ComplexVectorField,
    j2: &ComplexVectorField,
    domain: &ConeSpec,
    cgo: &CgoPair,
    bg: &Background,
    spec: &QuadratureSpec,
    tau_hint: Option<f64>,
) -> Result<IdentityResidual> {
    let (eps0, mu0) = (bg.eps0, bg.mu0);
    let nodes = quadrature::cone_rule(domain, spec, tau_hint)?;
    let (mut v1, mut v2) = (c(0.0, 0.0), c(0.0, 0.0));
    for n in &nodes {
        let (v, w) = cgo.vw(n.x);
        let (a, b) = (j1.eval(n.x), j2.eval(n.x));
        v1 += (a.dot(w) + b.dot(v)) * n.w;
        v2 += (a.dot(v) * eps0 - b.dot(w) * mu0) * n.w;
    }
    let mut surface = quadrature::cap_rule(domain, spec)?;
    surface.extend(quadrature::lateral_rule(domain, spec, tau_hint)?);
    let (mut b1, mut b2) = (c(0.0, 0.0), c(0.0, 0.0));
    for n in &surface {
        let (v, w) = cgo.vw(n.x);
        let nu = n.normal;
        let (ne, nh) = (e.eval(n.x).crossed_by(nu), h.eval(n.x).crossed_by(nu));
        b1 += (w.dot(ne) + v.dot(nh)) * n.w;
        b2 += (v.dot(ne) * eps0 - w.dot(nh) * mu0) * n.w;
    }
    Ok(IdentityResidual { volume1: v1, boundary1: b1, volume2: v2, boundary2: b2 })
}

/// Tangential traces `ν∧E`, `ν∧H` at one boundary node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub node: SurfaceNode,
    pub nu_e: CVec3,
    pub nu_h: CVec3,
}

/// Cauchy data on the spherical cap of a truncated cone, optionally with
/// lateral traces.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyCapData {
    pub cone: ConeSpec,
    pub cap: Vec<TraceSample>,
    pub lateral: Option<Vec<TraceSample>>,
}

fn traces(nodes: Vec<SurfaceNode>, e: &ComplexVectorField, h: &ComplexVectorField) -> Vec<TraceSample> {
    nodes
        .into_iter()
        .map(|node| TraceSample {
            node,
            nu_e: e.eval(node.x).crossed_by(node.normal),
            nu_h: h.eval(node.x).crossed_by(node.normal),
        })
        .collect()
}

impl CauchyCapData {
    /// Samples the traces of `(E, H)` on the deterministic cap rule and, when
    /// requested, on the lateral rule refined for `tau_hint`.
    pub fn from_fields(
        cone: &ConeSpec,
        e: &ComplexVectorField,
        h: &ComplexVectorField,
        spec: &QuadratureSpec,
        lateral: bool,
        tau_hint: Option<f64>,
    ) -> Result<Self> {
        let cap = traces(quadrature::cap_rule(cone, spec)?, e, h);
        let lateral = if lateral { Some(traces(quadrature::lateral_rule(cone, spec, tau_hint)?, e, h)) } else { None };
        Ok(CauchyCapData { cone: *cone, cap, lateral })
    }

    /// All-zero data on the cap rule.
    pub fn zero(cone: &ConeSpec, spec: &QuadratureSpec) -> Result<Self> {
        let cap = quadrature::cap_rule(cone, spec)?
            .into_iter()
            .map(|node| TraceSample { node, nu_e: CVec3::ZERO, nu_h: CVec3::ZERO })
            .collect();
        Ok(CauchyCapData { cone: *cone, cap, lateral: None })
    }

    fn samples(&self) -> impl Iterator<Item = &TraceSample> {
        self.cap.iter().chain(self.lateral.iter().flatten())
    }
}

fn direction_guard(cone: &ConeSpec, params: &CgoParams) -> Result<()> {
    cone.direction_bound(params.d())
        .map(|_| ())
        .map_err(|_| Error::DirectionBoundViolated { max_dot: cone.max_dot_over_directions(params.d()) })
}

/// `∫ W·(ν∧E) + V·(ν∧H)` over the sampled boundary for the chosen CGO family,
/// with the exponent centered at the apex.
pub fn cgo_boundary_functional(
    data: &CauchyCapData,
    params: &CgoParams,
    family: CgoFamily,
    bg: &Background,
) -> Result<Complex64> {
    direction_guard(&data.cone, params)?;
    let pair = CgoPair::new(params, bg, family)?.centered_at(data.cone.apex());
    Ok(boundary_sum(data, &pair))
}

fn boundary_sum(data: &CauchyCapData, pair: &CgoPair) -> Complex64 {
    data.samples().fold(c(0.0, 0.0), |s, t| {
        let (v, w) = pair.vw(t.node.x);
        s + (w.dot(t.nu_e) + v.dot(t.nu_h)) * t.node.w
    })
}

/// Where apex recovery reads its data from.
pub enum DataProvider<'a> {
    /// Cauchy data generated for each `τ` (the lateral rule depends on `τ`).
    Cauchy(&'a dyn Fn(f64) -> Result<CauchyCapData>),
    /// Traces sampled from known fields.
    Fields { e: &'a ComplexVectorField, h: &'a ComplexVectorField, lateral: bool },
    /// The volume side `∫ J₁·W + J₂·V` computed directly from the sources.
    Sources { j1: &'a ComplexVectorField, j2: &'a ComplexVectorField },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOptions {
    pub taus: Vec<f64>,
    /// Azimuths of `d⊥`; must contain `0`, `π/2` and `π`.
    pub phis: Vec<f64>,
    pub spec: QuadratureSpec,
    /// Differences below this absolute level skip the divergence test.
    pub floor: f64,
    /// Differences below `rtol` times the estimate count as converged.
    pub rtol: f64,
}

impl RecoveryOptions {
    pub fn new(taus: Vec<f64>) -> Self {
        RecoveryOptions {
            taus,
            phis: alloc::vec![0.0, FRAC_PI_2, PI],
            spec: QuadratureSpec::default(),
            floor: 0.0,
            rtol: 1e-8,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.taus.len() < 3 {
            return Err(Error::InsufficientData { samples: self.taus.len() });
        }
        if self.taus.iter().any(|&t| !(t > 0.0)) || self.taus.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::PreconditionViolated("tau schedule must be positive and increasing"));
        }
        for needed in [0.0, FRAC_PI_2, PI] {
            if !self.phis.iter().any(|&p| (p - needed).abs() < 1e-12) {
                return Err(Error::PreconditionViolated("azimuth set must contain 0, pi/2 and pi"));
            }
        }
        self.spec.validate()
    }
}

/// Per-`τ` estimate before extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryRow {
    pub tau: f64,
    pub j1: CVec3,
    pub j2: CVec3,
    /// Root-sum-square over azimuths of the raw functional, per family.
    pub functional_electric: f64,
    pub functional_magnetic: f64,
    /// `τ³|I(τ)|(1+k²/τ²)^{3/2}`.
    pub normalized_integral: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApexEstimate {
    pub j1: CVec3,
    pub j2: CVec3,
    /// Fit of the electric-family functional magnitude; `None` when degenerate.
    pub decay_electric: Option<DecayFit>,
    pub decay_magnetic: Option<DecayFit>,
    pub taus: Vec<f64>,
    pub rows: Vec<RecoveryRow>,
}

impl ApexEstimate {
    /// True when no decay fit could be formed (e.g. identically zero data).
    pub fn degenerate(&self) -> bool {
        self.decay_electric.is_none() && self.decay_magnetic.is_none()
    }
}

/// Solves `Σ_φ |a₁cosφ + a₂sinφ + i s a₃ − q(φ)|² → min` for `(a₁, a₂, a₃)`.
/// Exact for the azimuths `{0, π/2, π}`.
pub fn invert_phi_samples(phis: &[f64], q: &[Complex64], s: f64) -> Result<[Complex64; 3]> {
    if phis.len() != q.len() || phis.len() < 3 {
        return Err(Error::InsufficientData { samples: phis.len().min(q.len()) });
    }
    let rows: Vec<[Complex64; 3]> =
        phis.iter().map(|&p| [c(math::cos(p), 0.0), c(math::sin(p), 0.0), c(0.0, s)]).collect();
    // normal equations with the Hermitian adjoint
    let mut m = [[c(0.0, 0.0); 3]; 3];
    let mut rhs = [c(0.0, 0.0); 3];
    for (row, &qv) in rows.iter().zip(q) {
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] += row[a].conj() * row[b];
            }
            rhs[a] += row[a].conj() * qv;
        }
    }
    solve3(m, rhs).ok_or(Error::PreconditionViolated("azimuth set does not determine the apex vector"))
}

fn solve3(mut m: [[Complex64; 3]; 3], mut b: [Complex64; 3]) -> Option<[Complex64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))?;
        if m[pivot][col].norm() < 1e-14 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..3 {
            let f = m[r][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, v) in m[r].iter_mut().zip(pivot_row).skip(col) {
                *dst -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = [c(0.0, 0.0); 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for k in (r + 1)..3 {
            s -= m[r][k] * x[k];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}

/// Richardson-type limit from the last three estimates, assuming geometric
/// convergence of the differences.
fn extrapolate(values: &[CVec3], floor: f64, rtol: f64) -> Result<CVec3> {
    let n = values.len();
    let (a, b, last) = (values[n - 3], values[n - 2], values[n - 1]);
    let (d1, d2) = (b - a, last - b);
    let (n1, n2) = (d1.norm(), d2.norm());
    let scale = last.norm().max(b.norm());
    if n2 <= floor || n2 <= rtol * scale {
        return Ok(last);
    }
    if n1 == 0.0 {
        return Err(Error::ExtrapolationDiverged { ratio: f64::INFINITY });
    }
    let ratio = n2 / n1;
    if ratio >= 1.0 {
        return Err(Error::ExtrapolationDiverged { ratio });
    }
    Ok(last + d2 * (ratio / (1.0 - ratio)))
}

fn rss(values: &[Complex64]) -> f64 {
    math::sqrt(values.iter().map(|v| v.norm_sqr()).sum())
}

fn fit_or_none(taus: &[f64], values: &[f64]) -> Option<DecayFit> {
    asymptotics::fit_decay_exponent(taus, values).ok()
}

/// Recovers `J₁(x₀)` and `J₂(x₀)` at the apex of `cone`.
///
/// For every `τ` and azimuth `φ` the functional is divided by the computed
/// cone integral `I(τ)`; the azimuthal samples are inverted with the exact
/// `p(τ)` and the per-`τ` vectors are extrapolated to `τ → ∞`.
pub fn recover_apex_source(
    provider: &DataProvider<'_>,
    cone: &ConeSpec,
    bg: &Background,
    opts: &RecoveryOptions,
) -> Result<ApexEstimate> {
    opts.validate()?;
    let k = bg.k();
    let guard = 0.5 * asymptotics::axial_limit(cone.half_angle());
    let [e1, e2] = cone.frame();
    let axis = cone.axis();
    let to_global = |a: [Complex64; 3]| CVec3::from(e1) * a[0] + CVec3::from(e2) * a[1] + CVec3::from(axis) * a[2];
    let mut rows = Vec::with_capacity(opts.taus.len());
    for &tau in &opts.taus {
        let pairs: Vec<(CgoParams, CgoPair, CgoPair)> = opts
            .phis
            .iter()
            .map(|&phi| {
                let params = CgoParams::for_cone(cone, phi, tau, k)?;
                direction_guard(cone, &params)?;
                let el = CgoPair::new(&params, bg, CgoFamily::Electric)?.centered_at(cone.apex());
                let mg = CgoPair::new(&params, bg, CgoFamily::Magnetic)?.centered_at(cone.apex());
                Ok((params, el, mg))
            })
            .collect::<Result<_>>()?;
        let integral = asymptotics::cone_exp_integral(
            cone,
            &pairs[0].0,
            ConeIntegralMethod::ClosedRadial,
            &QuadratureSpec { azimuthal_order: 2 * opts.spec.polar_order.max(24), ..opts.spec },
        )?;
        let normalized = tau * tau * tau * math::powf(1.0 + k * k / (tau * tau), 1.5) * integral.norm();
        if normalized < guard {
            return Err(Error::DegenerateNormalization { normalized });
        }
        let (fe, fm): (Vec<Complex64>, Vec<Complex64>) = match provider {
            DataProvider::Cauchy(gen) => {
                let data = gen(tau)?;
                pairs.iter().map(|(_, el, mg)| (boundary_sum(&data, el), boundary_sum(&data, mg))).unzip()
            }
            DataProvider::Fields { e, h, lateral } => {
                let data = CauchyCapData::from_fields(cone, e, h, &opts.spec, *lateral, Some(tau))?;
                pairs.iter().map(|(_, el, mg)| (boundary_sum(&data, el), boundary_sum(&data, mg))).unzip()
            }
            DataProvider::Sources { j1, j2 } => {
                let nodes = quadrature::cone_rule(cone, &opts.spec, Some(tau))?;
                let samples: Vec<(Vec3, CVec3, CVec3)> =
                    nodes.iter().map(|n| (n.x, j1.eval(n.x) * n.w, j2.eval(n.x) * n.w)).collect();
                let volume = |pair: &CgoPair| {
                    samples.iter().fold(c(0.0, 0.0), |s, (x, a, b)| {
                        let (v, w) = pair.vw(*x);
                        s + a.dot(w) + b.dot(v)
                    })
                };
                pairs.iter().map(|(_, el, mg)| (volume(el), volume(mg))).unzip()
            }
        };
        let s = math::sqrt(1.0 + k * k / (tau * tau));
        let qe: Vec<Complex64> = fe.iter().map(|f| f / integral).collect();
        let qm: Vec<Complex64> = fm.iter().map(|f| f / integral).collect();
        let j2 = to_global(invert_phi_samples(&opts.phis, &qe, s)?);
        let j1 = to_global(invert_phi_samples(&opts.phis, &qm, s)?);
        rows.push(RecoveryRow {
            tau,
            j1,
            j2,
            functional_electric: rss(&fe),
            functional_magnetic: rss(&fm),
            normalized_integral: normalized,
        });
    }
    let j1s: Vec<CVec3> = rows.iter().map(|r| r.j1).collect();
    let j2s: Vec<CVec3> = rows.iter().map(|r| r.j2).collect();
    let j1 = extrapolate(&j1s, opts.floor, opts.rtol)?;
    let j2 = extrapolate(&j2s, opts.floor, opts.rtol)?;
    let fe: Vec<f64> = rows.iter().map(|r| r.functional_electric).collect();
    let fm: Vec<f64> = rows.iter().map(|r| r.functional_magnetic).collect();
    Ok(ApexEstimate {
        j1,
        j2,
        decay_electric: fit_or_none(&opts.taus, &fe),
        decay_magnetic: fit_or_none(&opts.taus, &fm),
        taus: opts.taus.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Visible,
    Invisible,
}

/// Visible iff `‖E∞‖_{L²(S²)} > tol`.
pub fn classify_visibility(pattern: &FarFieldPattern, tol: f64) -> Visibility {
    if pattern.l2_norm() > tol {
        Visibility::Visible
    } else {
        Visibility::Invisible
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Config {
    A,
    B,
}

/// Apex recovery on a corner that only one of the two domains has.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerDiagnostic {
    pub config: Config,
    pub index: usize,
    pub apex: Vec3,
    /// Source value just inside the apex.
    pub apex_value: (CVec3, CVec3),
    pub estimate: core::result::Result<ApexEstimate, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoronalReport {
    pub pattern_a: FarFieldPattern,
    pub pattern_b: FarFieldPattern,
    pub distance: f64,
    pub distinguishable: bool,
    pub corners: Vec<CornerDiagnostic>,
}

fn same_corner(a: &ConeSpec, b: &ConeSpec) -> bool {
    (a.apex() - b.apex()).norm() <= 1e-12
        && (a.axis() - b.axis()).norm() <= 1e-12
        && (a.half_angle() - b.half_angle()).abs() <= 1e-12
}

fn apex_limit(src: &SourcePair, cone: &ConeSpec) -> (CVec3, CVec3) {
    let x = cone.apex() + cone.axis() * (1e-9 * cone.radius());
    (src.j1.eval(x), src.j2.eval(x))
}

/// Compares the far fields of two coronal source configurations and runs apex
/// recovery on every corner in the symmetric difference.
#[allow(clippy::too_many_arguments)]
pub fn coronal_uniqueness_experiment(
    a: (&CoronalSpec, &SourcePair),
    b: (&CoronalSpec, &SourcePair),
    bg: &Background,
    grid_order: usize,
    spec: &QuadratureSpec,
    noise_floor: f64,
    recovery: &RecoveryOptions,
) -> Result<CoronalReport> {
    for (dom, src) in [a, b] {
        for corner in dom.corners() {
            let (v1, v2) = apex_limit(src, &corner.cone);
            if v1.norm() == 0.0 && v2.norm() == 0.0 {
                return Err(Error::PreconditionViolated("source vanishes at a corner apex"));
            }
        }
    }
    let pattern_a = scattering::far_field_from_source(a.1, bg, grid_order, spec)?;
    let pattern_b = scattering::far_field_from_source(b.1, bg, grid_order, spec)?;
    let distance = scattering::farfield_distance(&pattern_a, &pattern_b)?;
    let mut corners = Vec::new();
    for (tag, (dom, src), (other, _)) in [(Config::A, a, b), (Config::B, b, a)] {
        for (index, corner) in dom.corners().iter().enumerate() {
            if other.corners().iter().any(|o| same_corner(&o.cone, &corner.cone)) {
                continue;
            }
            let local = corner.local_cone();
            let provider = DataProvider::Sources { j1: &src.j1, j2: &src.j2 };
            corners.push(CornerDiagnostic {
                config: tag,
                index,
                apex: local.apex(),
                apex_value: apex_limit(src, &local),
                estimate: recover_apex_source(&provider, &local, bg, recovery),
            });
        }
    }
    Ok(CoronalReport { distinguishable: distance > 10.0 * noise_floor, pattern_a, pattern_b, distance, corners })
}
