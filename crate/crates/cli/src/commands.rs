use crate::config::{usage, Check, RunConfig};
use anyhow::Result;
use genus_core::classgroup::{NarrowClassGroup, WideClassGroup};
use genus_core::lseries::{self, compare_series, evaluate, IdealCensus};
use genus_core::order::{self, genus_characters, GenusCharacter};
use genus_core::typenumbers::{self, Sense};
use genus_core::{arith, QuadraticOrder};
use rayon::prelude::*;
use serde_json::{json, Value};

pub struct Report {
    pub results: Vec<Value>,
    pub summary: Value,
    pub passed: bool,
}

fn int(n: impl ToString) -> Value {
    Value::String(n.to_string())
}

fn ints<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(int).collect())
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn character_json(chi: &GenusCharacter) -> Value {
    json!({
        "delta1": int(chi.delta1()),
        "delta2": int(chi.delta2()),
        "f1": int(chi.f1()),
        "f0": int(chi.f0()),
    })
}

fn order_json(o: &QuadraticOrder) -> Value {
    json!({
        "discriminant": int(o.discriminant()),
        "fundamental_discriminant": int(o.fundamental_discriminant()),
        "conductor": int(o.conductor()),
    })
}

pub fn order_info(config: &RunConfig) -> Result<Report> {
    let o = config.order()?;
    let primes = arith::factorize(o.discriminant())?;
    let e_p: Vec<Value> = primes
        .primes()
        .map(|p| Ok(json!({ "p": int(p), "e_p": int(order::local_norm_index(&o, p)?) })))
        .collect::<Result<_>>()?;
    let mut result = order_json(&o);
    let obj = result.as_object_mut().expect("object");
    obj.insert("fundamental_divisors".into(), ints(order::fundamental_divisors(&o)));
    obj.insert(
        "reciprocal_pairs".into(),
        genus_characters(&o).iter().map(character_json).collect(),
    );
    obj.insert("genus_number_narrow".into(), int(order::genus_number_narrow(&o)));
    obj.insert("genus_number_wide".into(), int(order::genus_number_wide(&o)));
    obj.insert(
        "genus_number_from_local_indices".into(),
        int(order::genus_number_from_local_indices(&o)),
    );
    obj.insert("local_norm_indices".into(), Value::Array(e_p));
    obj.insert(
        "prime_discriminants".into(),
        ints(order::prime_discriminants(&o).iter().map(|p| p.value())),
    );
    if o.is_real() {
        obj.insert("minus_one_is_norm".into(), Value::Bool(order::minus_one_is_norm(&o)?));
    }
    Ok(Report {
        results: vec![result],
        summary: json!({ "orders": "1" }),
        passed: true,
    })
}

pub fn classgroup(config: &RunConfig) -> Result<Report> {
    let o = config.order()?;
    let g = NarrowClassGroup::build_with_search_bound(&o, config.search());
    let w = WideClassGroup::from_narrow(&g);
    let chars = genus_characters(&o);
    let mut table = Vec::new();
    for chi in &chars {
        let mut c = character_json(chi);
        c["values"] = ints(g.character_table(chi)?);
        table.push(c);
    }
    let representatives: Vec<Value> = g
        .representatives()
        .iter()
        .enumerate()
        .map(|(id, f)| json!({ "class": int(id), "a": int(f.a()), "b": int(f.b()), "c": int(f.c()) }))
        .collect();
    let mut result = order_json(&o);
    let obj = result.as_object_mut().expect("object");
    obj.insert("narrow_class_number".into(), int(g.class_number()));
    obj.insert("narrow_structure".into(), ints(g.structure()));
    obj.insert("wide_class_number".into(), int(w.class_number()));
    obj.insert("wide_structure".into(), ints(w.structure()));
    obj.insert("representatives".into(), Value::Array(representatives));
    obj.insert(
        "genus_cosets".into(),
        g.genus_cosets().into_iter().map(ints).collect(),
    );
    obj.insert("genus_number".into(), int(g.genus_number()));
    obj.insert("characters".into(), Value::Array(table));
    Ok(Report {
        results: vec![result],
        summary: json!({ "characters": int(chars.len()), "class_number": int(g.class_number()) }),
        passed: true,
    })
}

/// One character's three-way comparison and evaluations.
fn verify_character(
    o: &QuadraticOrder,
    chi: &GenusCharacter,
    census: &IdealCensus,
    config: &RunConfig,
) -> (Value, bool) {
    let run = || -> genus_core::Result<(Value, bool)> {
        let mut brute = census.coefficients(chi)?;
        if let Some(k) = config.inject_mismatch.filter(|&k| (1..=brute.len()).contains(&k)) {
            brute.coeffs_mut()[k - 1] += 1;
        }
        let local = lseries::lhs_coeffs_local(o, chi, config.n)?;
        let rhs = lseries::rhs_coeffs(o, chi, config.n)?;
        let report = compare_series(&[&brute, &local, &rhs]);
        let mut ok = report.is_equal();
        let mut evaluations = Vec::new();
        for &s in &config.s {
            let l = evaluate(&brute, s)?;
            let r = evaluate(&rhs, s)?;
            let within = (l.value - r.value).abs() < l.tail_bound + r.tail_bound;
            ok &= within;
            let bound = |b: f64| if b.is_finite() { json!(b) } else { Value::Null };
            evaluations.push(json!({
                "s": s,
                "lhs": l.value,
                "lhs_tail_bound": bound(l.tail_bound),
                "rhs": r.value,
                "rhs_tail_bound": bound(r.tail_bound),
                "within_bound": within,
            }));
        }
        let mismatch = report.mismatch.map_or(Value::Null, |m| {
            json!({
                "n": int(m.n),
                "bruteforce": int(m.values[0]),
                "local": int(m.values[1]),
                "closed_form": int(m.values[2]),
            })
        });
        Ok((
            json!({
                "character": character_json(chi),
                "status": status(ok),
                "first_mismatch": mismatch,
                "evaluation": evaluations,
            }),
            ok,
        ))
    };
    run().unwrap_or_else(|e| {
        (
            json!({ "character": character_json(chi), "status": "FAIL", "error": e.to_string() }),
            false,
        )
    })
}

fn verify_order(o: &QuadraticOrder, config: &RunConfig) -> (Value, bool) {
    let mut result = order_json(o);
    let census = match IdealCensus::build_with_search_bound(o, config.n, config.search()) {
        Ok(c) => c,
        Err(e) => {
            result["status"] = json!("FAIL");
            result["error"] = json!(e.to_string());
            return (result, false);
        }
    };
    let mut all = true;
    let mut cells = Vec::new();
    for chi in genus_characters(o) {
        let (cell, ok) = verify_character(o, &chi, &census, config);
        all &= ok;
        cells.push(cell);
    }
    result["n"] = int(config.n);
    result["characters"] = Value::Array(cells);
    result["status"] = json!(status(all));
    (result, all)
}

pub fn verify(config: &RunConfig) -> Result<Report> {
    let o = config.order()?;
    let (result, ok) = verify_order(&o, config);
    let cells = result["characters"].as_array().map_or(0, Vec::len);
    Ok(Report {
        results: vec![result],
        summary: json!({ "characters": int(cells), "status": status(ok) }),
        passed: ok,
    })
}

fn genus_cell(o: &QuadraticOrder, config: &RunConfig) -> (Value, bool) {
    let g = NarrowClassGroup::build_with_search_bound(o, config.search());
    let w = WideClassGroup::from_narrow(&g);
    let narrow = (order::genus_number_narrow(o), g.genus_number() as u64);
    let wide = (order::genus_number_wide(o), w.genus_number() as u64);
    let ok = narrow.0 == narrow.1 && wide.0 == wide.1;
    (
        json!({
            "genus_number_narrow": { "formula": int(narrow.0), "class_group": int(narrow.1) },
            "genus_number_wide": { "formula": int(wide.0), "class_group": int(wide.1) },
            "status": status(ok),
        }),
        ok,
    )
}

pub fn sweep(config: &RunConfig) -> Result<Report> {
    let (lo, hi) = config.range()?;
    let orders: Vec<QuadraticOrder> = (lo..=hi)
        .filter_map(|d| QuadraticOrder::from_discriminant(d).ok())
        .collect();
    let cell = |o: &QuadraticOrder| -> (Value, bool) {
        let mut result = order_json(o);
        let (genus, genus_ok) = genus_cell(o, config);
        result["genus_numbers"] = genus;
        let mut ok = genus_ok;
        if config.check == Check::Lseries {
            let (lseries, l_ok) = verify_order(o, config);
            result["lseries"] = lseries["characters"].clone();
            if let Some(err) = lseries.get("error") {
                result["error"] = err.clone();
            }
            ok &= l_ok;
        }
        result["status"] = json!(status(ok));
        (result, ok)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| usage(e.to_string()))?;
    // collect keeps discriminant order
    let cells: Vec<(Value, bool)> = pool.install(|| orders.par_iter().map(cell).collect());
    let failed: Vec<Value> = cells
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(v, _)| v["discriminant"].clone())
        .collect();
    let passed = failed.is_empty();
    Ok(Report {
        summary: json!({
            "cells": int(cells.len()),
            "passed": int(cells.len() - failed.len()),
            "failed": int(failed.len()),
            "failed_discriminants": failed,
            "status": status(passed),
        }),
        results: cells.into_iter().map(|(v, _)| v).collect(),
        passed,
    })
}

pub fn typenumbers(config: &RunConfig) -> Result<Report> {
    let o = config.order()?;
    if !o.is_maximal() {
        return Err(usage(format!(
            "D = {} is not fundamental; pass the maximal order, e.g. --dk {} --f 1",
            o.discriminant(),
            o.fundamental_discriminant()
        )));
    }
    let mut result = order_json(&o);
    for sense in [Sense::Wide, Sense::Narrow] {
        let reps = typenumbers::representatives(&o, sense)?;
        let reps: Vec<Value> = reps
            .iter()
            .map(|r| {
                json!({
                    "coset": int(r.coset),
                    "class": int(r.class),
                    "ideal": { "a": int(r.ideal.a()), "b": int(r.ideal.b()), "scale": int(r.ideal.scale()) },
                    "label": r.label,
                    "pattern": r.pattern,
                })
            })
            .collect();
        result[format!("type_number_{sense}")] = int(typenumbers::type_number(&o, sense)?);
        result[format!("representatives_{sense}")] = Value::Array(reps);
    }
    let ok = result["type_number_wide"] == int(order::genus_number_wide(&o))
        && result["type_number_narrow"] == int(order::genus_number_narrow(&o));
    result["status"] = json!(status(ok));
    Ok(Report {
        summary: json!({ "status": status(ok) }),
        results: vec![result],
        passed: ok,
    })
}
