//! Sectioned key-value experiment configuration.
//!
//! ```ini
//! [experiment]
//! name = lemma24_sweep
//! cone = main
//!
//! [cone.main]
//! apex = 0, 0, 0
//! axis = 0, 0, 1
//! half_angle_deg = 30
//! radius = 1
//!
//! [schedule]
//! tau = 20, 40, 80, 160, 320
//! ```

use std::sync::Arc;

use conic_em_core::fields::{self, CgoFamily, CgoPair, CgoParams, ComplexVectorField, HerglotzKernel, Smoothness};
use conic_em_core::math::c;
use conic_em_core::vector::CVec3;
use conic_em_core::{Background, BaseBody, Complex64, ConeSpec, CoronalSpec, QuadratureSpec, Support, Vec3};
use ini::{Ini, Properties};

use crate::error::{parse_err, CliResult};

pub struct Config {
    ini: Ini,
}

fn parse_f64(section: &str, key: &str, raw: &str) -> CliResult<f64> {
    raw.trim().parse::<f64>().map_err(|_| parse_err(format!("[{section}] {key}: `{raw}` is not a number")))
}

/// Accessor for one section with error messages that name it.
pub struct Block<'a> {
    name: String,
    props: Option<&'a Properties>,
}

impl<'a> Block<'a> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn raw(&self, key: &str) -> Option<&'a str> {
        self.props.and_then(|p| p.get(key)).map(str::trim)
    }

    pub fn str_req(&self, key: &str) -> CliResult<&'a str> {
        self.raw(key).ok_or_else(|| parse_err(format!("[{}] missing key `{key}`", self.name)))
    }

    pub fn f64_opt(&self, key: &str) -> CliResult<Option<f64>> {
        self.raw(key).map(|r| parse_f64(&self.name, key, r)).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn f64_req(&self, key: &str) -> CliResult<f64> {
        parse_f64(&self.name, key, self.str_req(key)?)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(r) => {
                r.parse().map_err(|_| parse_err(format!("[{}] {key}: `{r}` is not a nonnegative integer", self.name)))
            }
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some("true") | Some("yes") | Some("1") => Ok(true),
            Some("false") | Some("no") | Some("0") => Ok(false),
            Some(r) => Err(parse_err(format!("[{}] {key}: `{r}` is not a boolean", self.name))),
        }
    }

    pub fn list_opt(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        self.raw(key)
            .map(|r| {
                r.split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_f64(&self.name, key, s))
                    .collect::<CliResult<Vec<_>>>()
            })
            .transpose()
    }

    pub fn names(&self, key: &str) -> Vec<&'a str> {
        self.raw(key).map(|r| r.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()).unwrap_or_default()
    }

    pub fn vec3_opt(&self, key: &str) -> CliResult<Option<Vec3>> {
        match self.list_opt(key)? {
            None => Ok(None),
            Some(v) if v.len() == 3 => Ok(Some(Vec3::new(v[0], v[1], v[2]))),
            Some(_) => Err(parse_err(format!("[{}] {key}: expected three components", self.name))),
        }
    }

    pub fn vec3_req(&self, key: &str) -> CliResult<Vec3> {
        self.vec3_opt(key)?.ok_or_else(|| parse_err(format!("[{}] missing key `{key}`", self.name)))
    }

    pub fn vec3_or(&self, key: &str, default: Vec3) -> CliResult<Vec3> {
        Ok(self.vec3_opt(key)?.unwrap_or(default))
    }

    /// Complex vector from `key` (real part) and optional `key_im`.
    pub fn cvec3_opt(&self, key: &str) -> CliResult<Option<CVec3>> {
        let re = match self.vec3_opt(key)? {
            None => return Ok(None),
            Some(v) => v,
        };
        let im = self.vec3_or(&format!("{key}_im"), Vec3::ZERO)?;
        Ok(Some(CVec3::from_parts(re, im)))
    }

    pub fn cvec3_req(&self, key: &str) -> CliResult<CVec3> {
        self.cvec3_opt(key)?.ok_or_else(|| parse_err(format!("[{}] missing key `{key}`", self.name)))
    }

    pub fn cvec3_or(&self, key: &str, default: CVec3) -> CliResult<CVec3> {
        Ok(self.cvec3_opt(key)?.unwrap_or(default))
    }
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| parse_err(e.to_string()))?;
        let cfg = Config { ini };
        cfg.validate_references()?;
        Ok(cfg)
    }

    pub fn block(&self, section: &str) -> Block<'_> {
        Block { name: section.to_string(), props: self.ini.section(Some(section)) }
    }

    fn named(&self, kind: &str, name: &str) -> CliResult<Block<'_>> {
        let section = format!("{kind}.{name}");
        match self.ini.section(Some(section.as_str())) {
            Some(props) => Ok(Block { name: section, props: Some(props) }),
            None => Err(parse_err(format!("missing block [{section}]"))),
        }
    }

    pub fn experiment(&self) -> Block<'_> {
        self.block("experiment")
    }

    pub fn name(&self) -> CliResult<&str> {
        self.experiment().str_req("name")
    }

    pub fn seed(&self) -> CliResult<u64> {
        Ok(self.experiment().usize_or("seed", 0)? as u64)
    }

    pub fn output_dir(&self) -> Option<&str> {
        self.block("output").raw("dir")
    }

    /// Every `cone = …`, `coronal = …`, `spikes = …` style reference resolves.
    fn validate_references(&self) -> CliResult<()> {
        for (section, props) in self.ini.iter() {
            let Some(section) = section else { continue };
            for (key, value) in props.iter() {
                let kind = match key {
                    "cone" | "spikes" | "recovery_cone" | "source_cone" | "support_cone" => "cone",
                    "coronal" | "coronal_a" | "coronal_b" => "coronal",
                    "fields" | "field" | "j1" | "j2" | "incident" => "field",
                    _ => continue,
                };
                for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    if self.ini.section(Some(format!("{kind}.{name}").as_str())).is_none() {
                        return Err(parse_err(format!("[{section}] {key}: no block [{kind}.{name}]")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn background(&self) -> CliResult<Background> {
        let b = self.block("background");
        Ok(Background::new(b.f64_or("omega", 1.0)?, b.f64_or("eps0", 1.0)?, b.f64_or("mu0", 1.0)?)?)
    }

    /// `[quad]` with the given fallback orders.
    pub fn quad_or(&self, default: QuadratureSpec) -> CliResult<QuadratureSpec> {
        let b = self.block("quad");
        let order = b.usize_or("order", 0)?;
        let base = if order > 0 { QuadratureSpec::uniform(order)? } else { default };
        Ok(QuadratureSpec::new(
            b.usize_or("radial", base.radial_order)?,
            b.usize_or("polar", base.polar_order)?,
            b.usize_or("azimuthal", base.azimuthal_order)?,
            b.bool_or("tau_scaling", base.tau_scaling)?,
        )?)
    }

    pub fn quad(&self) -> CliResult<QuadratureSpec> {
        self.quad_or(QuadratureSpec::default())
    }

    /// A schedule list; `None` when absent.
    pub fn schedule(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        let list = self.block("schedule").list_opt(key)?;
        if let Some(v) = &list {
            if v.is_empty() {
                return Err(parse_err(format!("[schedule] {key} is empty")));
            }
        }
        Ok(list)
    }

    /// A schedule that must be strictly monotone in the given direction.
    pub fn monotone_schedule(&self, key: &str, increasing: bool, min_len: usize) -> CliResult<Option<Vec<f64>>> {
        let Some(v) = self.schedule(key)? else { return Ok(None) };
        if v.len() < min_len {
            return Err(parse_err(format!("[schedule] {key} needs at least {min_len} entries (schedule too short)")));
        }
        let ok = v.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
        if !ok {
            let dir = if increasing { "increasing" } else { "decreasing" };
            return Err(parse_err(format!("[schedule] {key} must be strictly {dir}")));
        }
        Ok(Some(v))
    }

    pub fn cone(&self, name: &str) -> CliResult<ConeSpec> {
        let b = self.named("cone", name)?;
        Ok(ConeSpec::new(
            b.vec3_or("apex", Vec3::ZERO)?,
            b.vec3_or("axis", Vec3::E3)?,
            b.f64_req("half_angle_deg")?.to_radians(),
            b.f64_or("radius", 1.0)?,
        )?)
    }

    pub fn coronal(&self, name: &str) -> CliResult<CoronalSpec> {
        let b = self.named("coronal", name)?;
        let base = match b.raw("base").unwrap_or("ball") {
            "ball" => BaseBody::ball(b.vec3_or("center", Vec3::ZERO)?, b.f64_or("radius", 1.0)?)?,
            "cuboid" => BaseBody::Polytope(conic_em_core::Polytope::cuboid(
                b.vec3_or("center", Vec3::ZERO)?,
                b.vec3_req("half_extent")?,
            )?),
            other => return Err(parse_err(format!("[{}] unknown base `{other}`", b.name()))),
        };
        let spikes = b.names("spikes").into_iter().map(|n| self.cone(n)).collect::<CliResult<Vec<_>>>()?;
        Ok(CoronalSpec::new(base, spikes)?)
    }

    /// Support named by `support_cone`, `coronal`, or a ball `support_center`/`support_radius`.
    pub fn support(&self, b: &Block<'_>) -> CliResult<Support> {
        if let Some(name) = b.raw("support_cone") {
            return Ok(Support::Cone(self.cone(name)?));
        }
        if let Some(name) = b.raw("coronal") {
            return Ok(Support::Coronal(Arc::new(self.coronal(name)?)));
        }
        if let Some(r) = b.f64_opt("support_radius")? {
            return Ok(Support::Ball { center: b.vec3_or("support_center", Vec3::ZERO)?, radius: r });
        }
        Ok(Support::AllSpace)
    }

    /// The field pair `(E, H)` (or `(V, W)`, or `(J, 0)`) described by `[field.NAME]`.
    pub fn field_pair(&self, name: &str) -> CliResult<(ComplexVectorField, ComplexVectorField)> {
        let b = self.named("field", name)?;
        let bg = self.background()?;
        let kind = b.str_req("kind")?;
        let zero = ComplexVectorField::zero();
        let pair = match kind {
            "cgo_electric" | "cgo_magnetic" => {
                let cone = self.cone(b.str_req("cone")?)?;
                let params =
                    CgoParams::for_cone(&cone, b.f64_or("phi_deg", 0.0)?.to_radians(), b.f64_req("tau")?, bg.k())?;
                let family = if kind == "cgo_electric" { CgoFamily::Electric } else { CgoFamily::Magnetic };
                CgoPair::new(&params, &bg, family)?.centered_at(cone.apex()).to_fields()
            }
            "plane_wave" => {
                let dir =
                    b.vec3_req("direction")?.normalized().ok_or_else(|| parse_err("zero plane-wave direction"))?;
                fields::plane_wave_incident(b.cvec3_req("polarization")?, dir, &bg)?
            }
            "herglotz" => {
                let kernel = HerglotzKernel::constant(b.cvec3_req("value")?, b.f64_or("k1", bg.k())?)?;
                let order = b.usize_or("order", 16)?;
                let e = fields::herglotz_electric(&kernel, order)?;
                let h = fields::herglotz_magnetic(&kernel, &bg, order)?;
                if b.bool_or("subtract_origin", false)? {
                    let at = b.vec3_or("origin", Vec3::ZERO)?;
                    (
                        conic_em_core::herglotz_checks::subtract_value_at(&e, at),
                        conic_em_core::herglotz_checks::subtract_value_at(&h, at),
                    )
                } else {
                    (e, h)
                }
            }
            "bump" => {
                let center = b.vec3_or("center", Vec3::ZERO)?;
                let radius = b.f64_req("radius")?;
                (
                    fields::bump_field(center, radius, b.cvec3_req("e_polarization")?)?,
                    fields::bump_field(center, radius, b.cvec3_or("h_polarization", CVec3::ZERO)?)?,
                )
            }
            "holder_source" => {
                let support = self.support(&b)?;
                let j = fields::holder_source(
                    b.vec3_or("x0", Vec3::ZERO)?,
                    b.cvec3_or("c0", CVec3::ZERO)?,
                    b.cvec3_req("c1")?,
                    b.f64_req("alpha")?,
                    support,
                )?;
                (j, zero)
            }
            "constant" => (ComplexVectorField::constant(b.cvec3_req("value")?, self.support(&b)?), zero),
            "linear" => {
                let x0 = b.vec3_or("origin", Vec3::ZERO)?;
                let s = b.f64_or("scale", 1.0)?;
                let f =
                    ComplexVectorField::new(move |x| CVec3::from(x - x0) * s, Support::AllSpace, Smoothness::Analytic)?;
                (f, zero)
            }
            "exponential" => (
                ComplexVectorField::exponential(b.cvec3_req("e_amplitude")?, b.cvec3_req("e_kappa")?),
                ComplexVectorField::exponential(b.cvec3_req("h_amplitude")?, b.cvec3_req("h_kappa")?),
            ),
            "constant_source_solution" => constant_source_solution(&bg, c(b.f64_or("amplitude", 1.0)?, 0.0)),
            other => return Err(parse_err(format!("[{}] unknown field kind `{other}`", b.name()))),
        };
        Ok(pair)
    }

    /// Single field: the first member of the pair unless `part = h`.
    pub fn field(&self, name: &str) -> CliResult<ComplexVectorField> {
        let part = self.named("field", name)?.raw("part").unwrap_or("e").to_string();
        let (e, h) = self.field_pair(name)?;
        match part.as_str() {
            "e" | "v" | "j" => Ok(e),
            "h" | "w" => Ok(h),
            other => Err(parse_err(format!("[field.{name}] unknown part `{other}`"))),
        }
    }
}

/// `E = s(x₂, x₁, 0)`, `H = s(0, 0, x₂ − iωε₀(x₂² − x₁²)/2)`: an exact solution
/// with `J₂ ≡ s(1, 0, 0)` and `J₁ = −iωμ₀H`.
pub fn constant_source_solution(bg: &Background, s: Complex64) -> (ComplexVectorField, ComplexVectorField) {
    let a = c(0.0, bg.omega * bg.eps0);
    let e = ComplexVectorField::new(
        move |x: Vec3| CVec3::new(s * x.y(), s * x.x(), c(0.0, 0.0)),
        Support::AllSpace,
        Smoothness::Analytic,
    )
    .expect("analytic field")
    .with_curl(|_| CVec3::ZERO);
    let h = ComplexVectorField::new(
        move |x: Vec3| {
            CVec3::new(c(0.0, 0.0), c(0.0, 0.0), s * (c(x.y(), 0.0) - a * ((x.y() * x.y() - x.x() * x.x()) / 2.0)))
        },
        Support::AllSpace,
        Smoothness::Analytic,
    )
    .expect("analytic field")
    .with_curl(move |x: Vec3| CVec3::new(s * (c(1.0, 0.0) - a * x.y()), -(s * a) * x.x(), c(0.0, 0.0)));
    (e, h)
}
