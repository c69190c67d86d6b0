//! Grid scans over `(a, b)` with a fixed multiplicity pattern.

use std::collections::BTreeMap;

use hzpos::{check, self_intersection, BlowupModel, CriterionId, DivisorClass, Verdict};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::CliError;
use crate::output::{to_value, Sink};

#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub model: BlowupModel,
    pub a_range: (i64, i64),
    pub b_range: (i64, i64),
    pub m: Vec<BigInt>,
    pub criteria: Vec<CriterionId>,
    pub audit_monotonicity: bool,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub a: i64,
    pub b: i64,
    pub l_squared: BigInt,
    pub verdicts: Vec<Verdict>,
}

/// A satisfied cell whose upper neighbour in `b` is not satisfied.
#[derive(Debug, Clone)]
pub struct Violation {
    pub criterion: String,
    pub a: i64,
    pub b: i64,
}

pub fn cell(v: Verdict) -> &'static str {
    match v {
        Verdict::Satisfied => "1",
        Verdict::NotSatisfied => "0",
        Verdict::NotApplicable => "NA",
    }
}

/// Thread count from `HP_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("HP_THREADS") {
        Err(_) => Ok(None),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::input("HP_THREADS", format!("expected a positive integer, got {s:?}"))),
        },
    }
}

fn evaluate(spec: &ScanSpec, a: i64, b: i64) -> Result<Row, CliError> {
    let l = DivisorClass::new(a, b, spec.m.clone());
    let bad = |e: hzpos::LatticeError| CliError::input("m", e.to_string());
    let l_squared = self_intersection(&l, &spec.model).map_err(bad)?;
    let verdicts = spec
        .criteria
        .iter()
        .map(|id| check(&l, &spec.model, *id).map(|r| r.verdict).map_err(bad))
        .collect::<Result<_, _>>()?;
    Ok(Row { a, b, l_squared, verdicts })
}

/// Rows in lexicographic `(a, b)` order regardless of how many threads ran.
pub fn run(spec: &ScanSpec) -> Result<Vec<Row>, CliError> {
    let cells: Vec<(i64, i64)> = (spec.a_range.0..=spec.a_range.1)
        .flat_map(|a| (spec.b_range.0..=spec.b_range.1).map(move |b| (a, b)))
        .collect();
    let work = || cells.par_iter().map(|&(a, b)| evaluate(spec, a, b)).collect::<Result<Vec<_>, _>>();
    match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::input("HP_THREADS", e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Checks that `Satisfied` at `(a, b)` stays `Satisfied` at `(a, b + 1)`.
pub fn audit(spec: &ScanSpec, rows: &[Row]) -> Vec<Violation> {
    let mut out = Vec::new();
    for pair in rows.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        if lo.a != hi.a || hi.b != lo.b + 1 {
            continue;
        }
        for (j, id) in spec.criteria.iter().enumerate() {
            if lo.verdicts[j] == Verdict::Satisfied && hi.verdicts[j] != Verdict::Satisfied {
                out.push(Violation {
                    criterion: id.short_name(),
                    a: lo.a,
                    b: lo.b,
                });
            }
        }
    }
    out
}

fn summary(rows: &[Row]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for row in rows {
        let key = row.verdicts.iter().map(|v| cell(*v)).collect::<Vec<_>>().join(",");
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

fn header(spec: &ScanSpec) -> Vec<String> {
    let mut cols: Vec<String> = ["e", "r", "position", "a", "b"].iter().map(|s| s.to_string()).collect();
    cols.extend((1..=spec.model.r).map(|i| format!("m{i}")));
    cols.push("L2".into());
    cols.extend(spec.criteria.iter().map(CriterionId::short_name));
    cols
}

pub fn write_csv(spec: &ScanSpec, rows: &[Row], violations: Option<&[Violation]>, sink: &mut Sink) -> Result<(), CliError> {
    sink.line(&header(spec).join(","))?;
    let m: Vec<String> = spec.m.iter().map(ToString::to_string).collect();
    for row in rows {
        let mut fields = vec![
            spec.model.e.to_string(),
            spec.model.r.to_string(),
            spec.model.position.as_str().to_string(),
            row.a.to_string(),
            row.b.to_string(),
        ];
        fields.extend(m.iter().cloned());
        fields.push(row.l_squared.to_string());
        fields.extend(row.verdicts.iter().map(|v| cell(*v).to_string()));
        sink.line(&fields.join(","))?;
    }
    let names: Vec<String> = spec.criteria.iter().map(CriterionId::short_name).collect();
    sink.line(&format!("# rows: {}", rows.len()))?;
    sink.line(&format!("# combinations ({}): count", names.join(",")))?;
    for (key, n) in summary(rows) {
        sink.line(&format!("# {key}: {n}"))?;
    }
    if let Some(vs) = violations {
        sink.line(&format!("# b-monotonicity violations: {}", vs.len()))?;
        for v in vs {
            sink.line(&format!("# violation {} at a={}, b={} -> b={}", v.criterion, v.a, v.b, v.b + 1))?;
        }
    }
    Ok(())
}

pub fn json_document(spec: &ScanSpec, rows: &[Row], violations: Option<&[Violation]>) -> Value {
    let names: Vec<String> = spec.criteria.iter().map(CriterionId::short_name).collect();
    let rows_json: Vec<Value> = rows
        .iter()
        .map(|row| {
            let verdicts: BTreeMap<&str, &str> = names
                .iter()
                .map(String::as_str)
                .zip(row.verdicts.iter().map(|v| cell(*v)))
                .collect();
            json!({
                "a": row.a,
                "b": row.b,
                "l_squared": row.l_squared.to_string(),
                "verdicts": verdicts,
            })
        })
        .collect();
    let mut doc = json!({
        "model": to_value(&spec.model),
        "m": spec.m.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "a_range": [spec.a_range.0, spec.a_range.1],
        "b_range": [spec.b_range.0, spec.b_range.1],
        "columns": names,
        "rows": rows_json,
        "summary": { "rows": rows.len(), "combinations": summary(rows) },
    });
    if let Some(vs) = violations {
        doc["monotonicity_audit"] = json!({
            "violations": vs
                .iter()
                .map(|v| json!({ "criterion": v.criterion, "a": v.a, "b": v.b }))
                .collect::<Vec<_>>(),
        });
    }
    doc
}
