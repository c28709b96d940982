//! Executes a [`JobConfig`].

use std::time::{Duration, Instant};

use apnforge_core::apn::{classify_degree, extension_scan_with_budget, spectrum, MAX_SPECTRUM_BITS};
use apnforge_core::factorcheck::{
    absolute_factorization, extension_field, factor_homogeneous_over, factor_over, surface_abs_irred_by_sections,
};
use apnforge_core::phi::{build_phi, section_infinity};
use apnforge_core::verify::{check_names, run_all, Status};
use apnforge_core::{FieldSpec, MPoly, UPoly};
use serde_json::{json, Value};

use crate::config::{Command, JobConfig};

/// Default time budget for verify.
const VERIFY_BUDGET: Duration = Duration::from_secs(600);

pub struct Outcome {
    pub document: Value,
    pub summary: String,
    /// Whether a verify check failed.
    pub failed: bool,
}

fn field_of(cfg: &JobConfig) -> FieldSpec {
    cfg.field
        .or_else(|| cfg.poly.as_ref().and_then(|p| p.field))
        .unwrap_or_else(FieldSpec::f2)
}

fn poly_of(cfg: &JobConfig) -> Result<UPoly, String> {
    let p = cfg.poly.as_ref().ok_or("this command needs a polynomial")?;
    p.resolve(field_of(cfg))
}

fn ok(document: Value, summary: String) -> Result<Outcome, String> {
    Ok(Outcome {
        document,
        summary,
        failed: false,
    })
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn execute(cfg: &JobConfig) -> Result<Outcome, String> {
    let start = Instant::now();
    let mut outcome = match cfg.command {
        Command::FieldInfo => field_info(field_of(cfg)),
        Command::PhiBuild => phi_build(&poly_of(cfg)?),
        Command::PhiFactor => phi_factor(&poly_of(cfg)?),
        Command::Factor => factor(cfg),
        Command::ApnSpectrum => {
            let s = spectrum(&poly_of(cfg)?).map_err(err)?;
            let summary = format!("delta = {}, APN: {}", s.max_count, s.is_apn);
            ok(serde_json::to_value(&s).map_err(err)?, summary)
        }
        Command::ApnScan => {
            let f = poly_of(cfg)?;
            let max_ext = cfg.options.max_ext.ok_or("apn-scan needs max_ext")?;
            let bits = cfg.options.budget_bits.unwrap_or(MAX_SPECTRUM_BITS);
            let r = extension_scan_with_budget(&f, max_ext, bits).map_err(err)?;
            let flags: Vec<String> = r.entries.iter().map(|e| format!("m={}:{}", e.m, e.is_apn)).collect();
            let summary = format!("APN by extension degree: {}", flags.join(" "));
            ok(serde_json::to_value(&r).map_err(err)?, summary)
        }
        Command::Classify => {
            let d = cfg.options.degree.ok_or("classify needs a degree")?;
            let c = classify_degree(d);
            ok(serde_json::to_value(c).map_err(err)?, format!("{d}: {:?}", c.class))
        }
        Command::Verify => verify(cfg),
    }?;
    if cfg.options.timings {
        if let Value::Object(m) = &mut outcome.document {
            m.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
        }
    }
    Ok(outcome)
}

fn field_info(field: FieldSpec) -> Result<Outcome, String> {
    let subfields: Vec<u32> = (1..=field.n()).filter(|d| field.n().is_multiple_of(*d)).collect();
    let doc = json!({
        "field": field,
        "order": format!("{:#x}", field.order()),
        "is_default": field.is_default(),
        "generator": field.generator(),
        "subfield_degrees": subfields,
    });
    ok(doc, format!("GF(2^{}) with modulus {:#x}", field.n(), field.modulus()))
}

fn phi_build(f: &UPoly) -> Result<Outcome, String> {
    let s = build_phi(f).map_err(err)?;
    let summary = if s.degenerate {
        "phi is identically zero".to_string()
    } else {
        format!("phi has total degree {}", s.phi.total_degree().unwrap_or(0))
    };
    ok(serde_json::to_value(&s).map_err(err)?, summary)
}

fn phi_factor(f: &UPoly) -> Result<Outcome, String> {
    let s = build_phi(f).map_err(err)?;
    if s.degenerate {
        let doc = json!({ "f": f, "phi": s.phi, "degenerate": true, "verdict": null, "at_infinity": null });
        return ok(doc, "phi is identically zero".into());
    }
    let verdict = surface_abs_irred_by_sections(&s.phi).map_err(err)?;
    let infinity = section_infinity(&s);
    let factors = match infinity.total_degree() {
        Some(d) if d >= 1 => Some(absolute_factorization(&infinity).map_err(err)?),
        _ => None,
    };
    let summary = format!("{:?} ({:?})", verdict.verdict, verdict.criterion);
    let doc = json!({
        "f": f,
        "phi": s.phi,
        "degenerate": false,
        "verdict": verdict,
        "at_infinity": { "section": infinity, "factorization": factors },
    });
    ok(doc, summary)
}

fn factor(cfg: &JobConfig) -> Result<Outcome, String> {
    let field = field_of(cfg);
    let nvars = cfg.options.nvars.unwrap_or(2);
    if !(2..=3).contains(&nvars) {
        return Err("nvars must be 2 or 3".into());
    }
    let text = cfg.options.mpoly.as_deref().ok_or("factor needs a polynomial")?;
    let p = MPoly::parse(field, nvars, text).map_err(err)?;
    if nvars == 3 && !p.is_homogeneous() {
        return Err("trivariate input must be homogeneous".into());
    }
    match cfg.options.ext {
        Some(r) => {
            let big = extension_field(field, r).map_err(err)?;
            let fac = if nvars == 2 {
                factor_over(&p, big)
            } else {
                factor_homogeneous_over(&p, big)
            }
            .map_err(err)?;
            let summary = format!("{} factors over GF(2^{})", fac.factors.len(), big.n());
            ok(
                json!({ "input": p, "extension_degree": r, "factorization": fac }),
                summary,
            )
        }
        None => {
            let res = absolute_factorization(&p).map_err(err)?;
            let summary = format!(
                "{} factors over the base field, {} absolutely irreducible factors",
                res.base_factors.len(),
                res.factors.len()
            );
            ok(serde_json::to_value(&res).map_err(err)?, summary)
        }
    }
}

fn verify(cfg: &JobConfig) -> Result<Outcome, String> {
    if cfg.options.list {
        let names = check_names();
        let summary = format!("{} checks", names.len());
        return ok(json!(names), summary);
    }
    let budget = cfg
        .options
        .budget_secs
        .map(Duration::from_secs)
        .unwrap_or(VERIFY_BUDGET);
    let seed = cfg.options.seed_value()?;
    let results = run_all(budget, cfg.options.check.as_deref(), seed).map_err(err)?;
    let count = |pred: fn(&Status) -> bool| results.iter().filter(|r| pred(&r.status)).count();
    let (pass, fail, skipped) = (
        count(|s| *s == Status::Pass),
        count(|s| *s == Status::Fail),
        count(|s| matches!(s, Status::Skipped(_))),
    );
    let mut doc = Vec::with_capacity(results.len());
    for r in &results {
        let mut v = serde_json::to_value(r).map_err(err)?;
        if cfg.options.timings {
            v["elapsed_ms"] = json!(r.elapsed.as_secs_f64() * 1e3);
        }
        doc.push(v);
    }
    Ok(Outcome {
        document: Value::Array(doc),
        summary: format!("{pass} passed, {fail} failed, {skipped} skipped"),
        failed: fail > 0,
    })
}
