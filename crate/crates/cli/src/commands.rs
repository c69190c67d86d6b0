use std::collections::BTreeMap;

use hzpos::{
    adjoint_shift, all_criteria, candidate_classes, canonical_class, check, hzero_base, intersect, lambda_of,
    necessary_positivity, scan_obstructions, self_intersection, BaseDivisorClass, BlowupModel, BoundValue,
    CriterionReport, DivisorClass, Position, ScanMode, Variant, Verdict,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::input::{BundleSpec, CliError};
use crate::output::to_value;

/// Search limits shared by `check` and `catalog`.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Largest `β` for section-type catalog classes; defaults to `λ + 1`.
    pub beta_max: Option<u64>,
    pub generic_bound: u64,
}

impl Limits {
    fn beta_max(&self, model: &BlowupModel) -> u64 {
        self.beta_max
            .unwrap_or_else(|| lambda_of(model.e, model.r as u64).lambda + 1)
    }
}

fn lattice_error(field: &str, err: hzpos::LatticeError) -> CliError {
    CliError::input(field, err.to_string())
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "satisfied",
        Verdict::NotSatisfied => "not_satisfied",
        Verdict::NotApplicable => "not_applicable",
    }
}

/// All twelve reports for `spec`, the k-family at `spec.k` (default 1).
pub fn criteria_reports(spec: &BundleSpec) -> Result<Vec<CriterionReport>, CliError> {
    let (model, l) = (spec.model(), spec.class());
    all_criteria(spec.k.unwrap_or(1))
        .into_iter()
        .map(|id| check(&l, &model, id).map_err(|e| lattice_error("m", e)))
        .collect()
}

pub fn check_document(spec: &BundleSpec, limits: Limits) -> Result<Value, CliError> {
    let (model, l) = (spec.model(), spec.class());
    let k = spec.k.unwrap_or(1);
    let reports = criteria_reports(spec)?;
    let verdicts: BTreeMap<String, &str> = reports
        .iter()
        .map(|r| (r.id.short_name(), verdict_str(r.verdict)))
        .collect();

    let l2 = self_intersection(&l, &model).map_err(|e| lattice_error("m", e))?;
    let canonical = canonical_class(&model);
    let n = adjoint_shift(&l, &model).map_err(|e| lattice_error("m", e))?;
    let n2 = self_intersection(&n, &model).map_err(|e| lattice_error("m", e))?;
    let beta_max = limits.beta_max(&model);

    let catalog = candidate_classes(&model, &l, beta_max).map_err(|e| lattice_error("m", e))?;
    let mut pairings = Vec::with_capacity(catalog.len());
    for c in &catalog {
        let d = c.divisor();
        pairings.push(json!({
            "name": c.name(),
            "curve": to_value(c),
            "l_dot_d": to_value(&IntOut(intersect(&l, &d, &model).map_err(|e| lattice_error("m", e))?)),
            "n_dot_d": to_value(&IntOut(intersect(&n, &d, &model).map_err(|e| lattice_error("m", e))?)),
            "d_squared": to_value(&IntOut(self_intersection(&d, &model).map_err(|e| lattice_error("m", e))?)),
        }));
    }
    let positivity = necessary_positivity(&l, &model, &catalog).map_err(|e| lattice_error("m", e))?;

    let mut scans = Vec::new();
    for mode in [ScanMode::Gg, ScanMode::Va, ScanMode::Bfs { k }] {
        let rep = scan_obstructions(&n, &model, mode, beta_max, limits.generic_bound)
            .map_err(|e| lattice_error("m", e))?;
        scans.push(to_value(&rep));
    }

    let th = lambda_of(model.e, model.r as u64);
    Ok(json!({
        "bundle": to_value(spec),
        "class": l.to_string(),
        "l_squared": to_value(&IntOut(l2)),
        "canonical": to_value(&canonical),
        "adjoint": to_value(&n),
        "n_squared": to_value(&IntOut(n2)),
        "thresholds": to_value(&th),
        "criteria": to_value(&reports),
        "verdicts": to_value(&verdicts),
        "catalog": {
            "beta_max": beta_max,
            "pairings": pairings,
        },
        "necessary_positivity": to_value(&positivity),
        "obstruction_scans": scans,
        "notes": [
            "criteria are sufficient conditions; not_satisfied does not mean the property fails",
            "obstruction scans cover a finite catalog and a bounded sweep; an empty scan certifies nothing",
        ],
    }))
}

pub fn check_text(spec: &BundleSpec, doc: &Value, reports: &[CriterionReport]) -> Vec<String> {
    let mut out = vec![
        format!("model: F_{{{},{}}}, {} points", spec.e, spec.r, spec.position),
        format!("L = {}", doc["class"].as_str().unwrap_or_default()),
        format!("L^2 = {}", doc["l_squared"]),
        format!("N = L - K = {}", spec_class_display(&doc["adjoint"])),
        format!("N^2 = {}", doc["n_squared"]),
        String::new(),
    ];
    for r in reports {
        let mut line = format!("{:<10} {}", r.id.to_string(), verdict_str(r.verdict));
        match r.verdict {
            Verdict::NotApplicable => line.push_str(&format!("  ({})", r.applicability_note)),
            Verdict::NotSatisfied => {
                if let Some(c) = r.first_failure() {
                    line.push_str(&format!("  first failure: {}  [{} vs {}]", c.label, c.lhs, c.rhs));
                }
            }
            Verdict::Satisfied => {}
        }
        out.push(line);
    }
    out.push(String::new());
    let np = doc["necessary_positivity"].as_array().map_or(0, Vec::len);
    out.push(format!("necessary positivity findings: {np}"));
    if let Some(scans) = doc["obstruction_scans"].as_array() {
        for s in scans {
            let mode = match &s["mode"]["mode"] {
                Value::String(m) if m == "bfs" => format!("bfs(k={})", s["mode"]["k"]),
                Value::String(m) => m.clone(),
                _ => "?".into(),
            };
            out.push(format!(
                "scan {mode}: {} findings, N^2 = {} (floor {}, {})",
                s["findings"].as_array().map_or(0, Vec::len),
                s["n_squared"],
                s["n_squared_floor"],
                if s["floor_met"] == Value::Bool(true) { "met" } else { "not met" },
            ));
        }
    }
    out
}

fn spec_class_display(v: &Value) -> String {
    match serde_json::from_value::<DivisorClass>(v.clone()) {
        Ok(d) => d.to_string(),
        Err(_) => v.to_string(),
    }
}

/// Wrapper so bare integers go through the same number-or-string encoding.
#[derive(serde::Serialize)]
struct IntOut(#[serde(with = "hzpos::int_serde::one")] BigInt);

fn bound_value(b: &Option<BoundValue>) -> Value {
    match b {
        Some(b) => json!({ "value": b.value, "expr": b.expr }),
        None => Value::Null,
    }
}

pub fn seshadri_document(a: &BigInt, b: &BigInt, e: u64, r: usize) -> Value {
    let l = BaseDivisorClass::new(a.clone(), b.clone());
    let rep = hzpos::seshadri_bounds(&l, e, r);
    let assumptions: BTreeMap<&str, &str> = rep
        .assumptions
        .iter()
        .map(|(v, p)| (v.as_str(), p.as_str()))
        .collect();
    json!({
        "input": { "a": to_value(&IntOut(a.clone())), "b": to_value(&IntOut(b.clone())), "e": e, "r": r },
        "bounds": {
            "I": bound_value(&rep.bound_i),
            "II": bound_value(&rep.bound_ii),
            "III": bound_value(&rep.bound_iii),
        },
        "best": bound_value(&rep.best),
        "best_from": rep.best_from.map(Variant::as_str),
        "assumptions": assumptions,
        "warnings": rep.warnings,
    })
}

pub fn seshadri_text(doc: &Value) -> Vec<String> {
    let mut out = vec![format!(
        "l = {}C_e + {}f on F_{}, r = {}",
        doc["input"]["a"], doc["input"]["b"], doc["input"]["e"], doc["input"]["r"]
    )];
    for v in ["I", "II", "III"] {
        let b = &doc["bounds"][v];
        let shown = if b.is_null() {
            "n/a".to_string()
        } else {
            format!("{} = {}", b["expr"].as_str().unwrap_or_default(), b["value"])
        };
        out.push(format!("bound {v:<3} {shown}  (needs {} points)", doc["assumptions"][v].as_str().unwrap_or("?")));
    }
    match doc["best_from"].as_str() {
        Some(v) => out.push(format!("best: {} (from {v})", doc["best"]["expr"].as_str().unwrap_or_default())),
        None => out.push("best: none".into()),
    }
    if let Some(ws) = doc["warnings"].as_array() {
        for w in ws {
            out.push(format!("warning: {}", w.as_str().unwrap_or_default()));
        }
    }
    out
}

pub fn hzero(a: &BigInt, b: &BigInt, e: u64) -> Result<BigInt, CliError> {
    hzero_base(&BaseDivisorClass::new(a.clone(), b.clone()), e).map_err(|err| lattice_error("b", err))
}

pub fn hzero_document(a: &BigInt, b: &BigInt, e: u64) -> Result<Value, CliError> {
    let h = hzero(a, b, e)?;
    Ok(json!({
        "input": { "a": to_value(&IntOut(a.clone())), "b": to_value(&IntOut(b.clone())), "e": e },
        "h0": to_value(&IntOut(h)),
    }))
}

/// `D₁·D₂`, or `D²` when only one class is given.
pub fn intersect_value(e: u64, r: usize, classes: &[Vec<BigInt>]) -> Result<BigInt, CliError> {
    let model = BlowupModel::new(e, r, Position::Arbitrary);
    let parsed: Vec<DivisorClass> = classes
        .iter()
        .map(|c| {
            if c.len() != r + 2 {
                return Err(CliError::input(
                    "class",
                    format!("expected a,b followed by r = {r} multiplicities ({} numbers), found {}", r + 2, c.len()),
                ));
            }
            Ok(DivisorClass::new(c[0].clone(), c[1].clone(), c[2..].to_vec()))
        })
        .collect::<Result<_, _>>()?;
    match parsed.as_slice() {
        [d] => self_intersection(d, &model).map_err(|e| lattice_error("class", e)),
        [d1, d2] => intersect(d1, d2, &model).map_err(|e| lattice_error("class", e)),
        _ => Err(CliError::input("class", "give one or two classes")),
    }
}

pub fn intersect_document(e: u64, r: usize, classes: &[Vec<BigInt>]) -> Result<Value, CliError> {
    let v = intersect_value(e, r, classes)?;
    let classes: Vec<Value> = classes
        .iter()
        .map(|c| Value::Array(c.iter().map(|x| to_value(&IntOut(x.clone()))).collect()))
        .collect();
    Ok(json!({
        "input": { "e": e, "r": r, "classes": classes },
        "value": to_value(&IntOut(v)),
    }))
}

pub fn catalog_document(spec: &BundleSpec, limits: Limits) -> Result<Value, CliError> {
    let (model, l) = (spec.model(), spec.class());
    let beta_max = limits.beta_max(&model);
    let catalog = candidate_classes(&model, &l, beta_max).map_err(|e| lattice_error("m", e))?;
    let mut rows = Vec::with_capacity(catalog.len());
    for c in &catalog {
        let d = c.divisor();
        rows.push(json!({
            "name": c.name(),
            "curve": to_value(c),
            "d_squared": to_value(&IntOut(self_intersection(&d, &model).map_err(|e| lattice_error("m", e))?)),
            "l_dot_d": to_value(&IntOut(intersect(&l, &d, &model).map_err(|e| lattice_error("m", e))?)),
        }));
    }
    Ok(json!({
        "model": to_value(&model),
        "bundle": to_value(spec),
        "beta_max": beta_max,
        "classes": rows,
    }))
}

pub fn catalog_text(doc: &Value) -> Vec<String> {
    let mut out = vec![format!("{:<24} {:>8} {:>10}", "class", "D^2", "L.D")];
    if let Some(rows) = doc["classes"].as_array() {
        for r in rows {
            out.push(format!(
                "{:<24} {:>8} {:>10}",
                r["name"].as_str().unwrap_or_default(),
                r["d_squared"].to_string(),
                r["l_dot_d"].to_string()
            ));
        }
    }
    out
}
