//! Acceptance criteria 1-11, each run at its stated tolerance and time limit.
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::{Map, Value};

struct Run {
    metrics: Map<String, Value>,
    elapsed: Duration,
}

fn config(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.ini"));
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run(name: &str) -> Result<Run, String> {
    let start = Instant::now();
    let (_, report, _) = conic_em::evaluate(&config(name), None).map_err(|e| format!("{name}: {e}"))?;
    Ok(Run { metrics: report.metrics, elapsed: start.elapsed() })
}

fn f(m: &Map<String, Value>, key: &str) -> Result<f64, String> {
    m.get(key).and_then(Value::as_f64).ok_or_else(|| format!("missing metric {key}"))
}

fn b(m: &Map<String, Value>, key: &str) -> Result<bool, String> {
    m.get(key).and_then(Value::as_bool).ok_or_else(|| format!("missing metric {key}"))
}

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn timed(r: &Run, limit_s: f64, ok: bool, detail: String) -> Outcome {
    let t = r.elapsed.as_secs_f64();
    Ok((ok && t < limit_s, format!("{detail}; {t:.2} s of {limit_s} s")))
}

fn cgo_algebra() -> Outcome {
    let r = run("cgo_identities")?;
    let (o, x, d) = (
        f(&r.metrics, "max_rho_dot_p")?,
        f(&r.metrics, "max_cross_residual")?,
        f(&r.metrics, "max_dispersion_residual")?,
    );
    let draws = f(&r.metrics, "draws")?;
    let ok = draws >= 100.0 && o <= 1e-12 && x <= 1e-10 && d <= 1e-10;
    timed(&r, 1.0, ok, format!("{draws} draws, rho.p {o:.1e}, cross {x:.1e}, dispersion {d:.1e}"))
}

fn radial_tail() -> Outcome {
    let r = run("lemma23_tail")?;
    let res = f(&r.metrics, "max_identity_residual")?;
    let fails = f(&r.metrics, "bound_failures")?;
    timed(&r, 5.0, res <= 1e-10 && fails == 0.0, format!("identity residual {res:.1e}, tail-bound failures {fails}"))
}

fn cone_integral_bound() -> Outcome {
    let r = run("lemma24_sweep")?;
    let ck = f(&r.metrics, "c_k")?;
    let ratio = f(&r.metrics, "min_normalized_over_c_k")?;
    let cauchy = b(&r.metrics, "cauchy")?;
    let ok = (ck - 0.5952).abs() < 5e-5 && ratio >= 0.99 && cauchy;
    timed(&r, 60.0, ok, format!("C_K {ck:.4}, min normalized/C_K {ratio:.3}, Cauchy {cauchy}"))
}

fn integral_identity() -> Outcome {
    let r = run("integral_identity")?;
    let mut ok = true;
    let mut parts = Vec::new();
    for fam in ["electric", "magnetic"] {
        let res = f(&r.metrics, &format!("{fam}_residual"))?;
        let gain = f(&r.metrics, &format!("{fam}_improvement"))?;
        ok &= res <= 1e-8 && gain >= 100.0;
        parts.push(format!("{fam} {res:.1e} (x{gain:.0} on doubling)"));
    }
    timed(&r, 60.0, ok, parts.join(", "))
}

fn nonradiating() -> Outcome {
    let r = run("nonradiating")?;
    let ff = f(&r.metrics, "farfield_max_over_scale")?;
    let apex = f(&r.metrics, "apex_estimate_over_scale")?;
    timed(&r, 300.0, ff <= 1e-6 && apex <= 5e-3, format!("far field/scale {ff:.1e}, apex estimate/scale {apex:.1e}"))
}

fn visibility() -> Outcome {
    let r = run("visibility")?;
    let ratio = f(&r.metrics, "ratio_to_noise")?;
    let class = r.metrics.get("classification").and_then(Value::as_str).unwrap_or("");
    timed(&r, 300.0, ratio >= 1e3 && class == "visible", format!("L2/noise {ratio:.1e}, classified {class}"))
}

fn apex_recovery() -> Outcome {
    let r = run("apex_recovery")?;
    let err = f(&r.metrics, "expect_j2_error_at_tau_max")?;
    let mono = b(&r.metrics, "expect_j2_monotone")?;
    let h = run("apex_recovery_holder")?;
    let slope = f(&h.metrics, "decay_exponent_electric")?;
    let ok = err <= 0.05 && mono && (3.3..=3.7).contains(&slope);
    let total = Run { metrics: Map::new(), elapsed: r.elapsed + h.elapsed };
    timed(
        &total,
        600.0,
        ok,
        format!("J2 error at tau 128 {err:.1e}, monotone {mono}, Holder decay exponent {slope:.3}"),
    )
}

fn far_field_residuals() -> Outcome {
    let mut worst = 0.0f64;
    let mut elapsed = Duration::ZERO;
    for name in ["visibility", "nonradiating", "born_medium", "coronal_uniqueness"] {
        let r = run(name)?;
        elapsed += r.elapsed;
        let keys: Vec<&String> =
            r.metrics.keys().filter(|k| k.ends_with("equiv_residual") || k.ends_with("tangential_residual")).collect();
        if keys.is_empty() {
            return Err(format!("{name}: no far-field residuals reported"));
        }
        for k in keys {
            worst = worst.max(f(&r.metrics, k)?);
        }
    }
    let total = Run { metrics: Map::new(), elapsed };
    timed(&total, 600.0, worst <= 1e-8, format!("worst reciprocity/tangentiality residual {worst:.1e}"))
}

fn coronal() -> Outcome {
    let r = run("coronal_uniqueness")?;
    let same = run("coronal_identical")?;
    let (d, noise) = (f(&r.metrics, "distance")?, f(&r.metrics, "noise_floor")?);
    let d0 = f(&same.metrics, "distance")?;
    let total = Run { metrics: Map::new(), elapsed: r.elapsed + same.elapsed };
    timed(
        &total,
        600.0,
        d > 10.0 * noise && d0 <= 1e-9,
        format!("one-corner distance {d:.1e} (noise {noise:.0e}), identical {d0:.1e}"),
    )
}

fn herglotz() -> Outcome {
    let r = run("herglotz_bounds")?;
    let norms = b(&r.metrics, "norm_ratios_bounded")?;
    let rem = b(&r.metrics, "remainder_ratios_bounded")?;
    let bessel = f(&r.metrics, "bessel_max_error")?;
    timed(
        &r,
        120.0,
        norms && rem && bessel <= 1e-8,
        format!("norm ratios bounded {norms}, remainder ratios bounded {rem}, Bessel error {bessel:.1e}"),
    )
}

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .expect("output dir")
        .map(|e| {
            let p = e.expect("dir entry").path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let mut bytes = fs::read(&p).expect("artifact");
            if name == "manifest.json" {
                let mut v: Value = serde_json::from_slice(&bytes).expect("manifest json");
                v.as_object_mut().unwrap().remove("wall_time_s");
                bytes = v.to_string().into_bytes();
            }
            (name, bytes)
        })
        .collect();
    out.sort();
    out
}

fn determinism() -> Outcome {
    let root = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = fs::remove_dir_all(&root);
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut names: Vec<PathBuf> =
        fs::read_dir(&configs).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    names.sort();
    let mut differing = Vec::new();
    for path in &names {
        let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
        let (a, b) = (root.join(format!("{stem}-a")), root.join(format!("{stem}-b")));
        conic_em::run(path, Some(&a), Some(1)).map_err(|e| format!("{stem}: {e}"))?;
        conic_em::run(path, Some(&b), None).map_err(|e| format!("{stem}: {e}"))?;
        if artifacts(&a) != artifacts(&b) {
            differing.push(stem);
        }
    }
    let _ = fs::remove_dir_all(&root);
    Ok((
        differing.is_empty(),
        format!("{} configs run twice (1 thread vs default), differing: {differing:?}", names.len()),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("CGO vector algebra", cgo_algebra),
        ("radial moment identity and tail bound", radial_tail),
        ("cone integral lower bound", cone_integral_bound),
        ("Maxwell integral identities", integral_identity),
        ("non-radiating source", nonradiating),
        ("constant cone source visibility", visibility),
        ("apex source recovery", apex_recovery),
        ("far-field reciprocity and tangentiality", far_field_residuals),
        ("coronal uniqueness witness", coronal),
        ("Herglotz and CGO ratio bounds", herglotz),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (label, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match check() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {label}: {} ({detail})", n + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
