//! Browser demo: three calls returning JSON for the page in `www/`.
//!
//! Each exported function wraps a plain one that returns a
//! `serde_json::Value`, so the logic is testable natively.

use serde_json::{json, Value};
use tnv_core::diagrams::{complement, maya_to_young, IndexTuple, MayaDiagram};
use tnv_core::expcurve::{hull_i, hull_p, perimeters, perimeters_i, vertex_set, FrequencySet};
use tnv_core::profile::profile_geometric;
use tnv_core::tableaux::{edge_sum_sweep, f_hook, tableau_profile_closed_form, Side};
use tnv_core::{CoreError, Result};
use wasm_bindgen::prelude::*;

fn parse_tuple(text: &str, n: usize) -> Result<IndexTuple> {
    let entries = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CoreError::InvalidInput(format!("{s:?} is not an index")))
        })
        .collect::<Result<Vec<usize>>>()?;
    IndexTuple::bounded(entries, n)
}

/// Maya diagram, Young diagram, complement and diagonal profile of a tuple.
pub fn describe_tuple(n: usize, tuple: &str) -> Result<Value> {
    let sigma = parse_tuple(tuple, n)?;
    let p = sigma.len();
    let lambda = maya_to_young(&sigma, p, n)?;
    let dual = complement(&lambda, p, n)?;
    Ok(json!({
        "sigma": sigma,
        "p": p,
        "level": sigma.level(),
        "maya": MayaDiagram::from_tuple(&sigma, n)?.to_string(),
        "young": lambda,
        "complement": dual,
        "rows": p,
        "cols": n + 1 - p,
        "profile": profile_geometric(&lambda, p, n)?,
        "tableaux": f_hook(&lambda).to_string(),
        "complementTableaux": f_hook(&dual).to_string(),
    }))
}

/// Edge sums on both sides and the closed-form tableau profile of the rectangle.
pub fn rectangle_sums(n: usize, p: usize) -> Result<Value> {
    let side = |s: Side| -> Result<Vec<String>> {
        Ok(edge_sum_sweep(s, p, n)?.iter().map(|e| e.value.to_string()).collect())
    };
    let profile = (1..=n)
        .map(|k| Ok(tableau_profile_closed_form(k, p, n)?.to_string()))
        .collect::<Result<Vec<String>>>()?;
    Ok(json!({
        "n": n,
        "p": p,
        "emptySide": side(Side::EmptyBox)?,
        "ballSide": side(Side::Ball)?,
        "profile": profile,
    }))
}

/// Subset-sum cloud of a point set, its hull, the hull of pair sums, and the
/// perimeter sequences.
pub fn point_hulls(points_csv: &str, p: usize) -> Result<Value> {
    let set = FrequencySet::from_csv(points_csv)?;
    let to_f64 = |pts: Vec<(num_rational::BigRational, num_rational::BigRational)>| -> Vec<[f64; 2]> {
        use num_traits::ToPrimitive;
        pts.into_iter()
            .map(|(a, b)| [a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN)])
            .collect()
    };
    let l = perimeters(&set)?;
    let pairs = if vertex_set(&set, p)?.len() >= 2 {
        Some(hull_i(&set, p, 2)?.vertices)
    } else {
        None
    };
    Ok(json!({
        "points": set.as_f64(),
        "cloud": to_f64(vertex_set(&set, p)?),
        "hull": hull_p(&set, p)?.vertices,
        "pairHull": pairs,
        "perimeters": l.l,
        "subsetPerimeters": perimeters_i(&set, p)?,
    }))
}

fn to_js(result: Result<Value>) -> std::result::Result<String, JsError> {
    result
        .map(|v| v.to_string())
        .map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = describeTuple)]
pub fn describe_tuple_js(n: usize, tuple: &str) -> std::result::Result<String, JsError> {
    to_js(describe_tuple(n, tuple))
}

#[wasm_bindgen(js_name = rectangleSums)]
pub fn rectangle_sums_js(n: usize, p: usize) -> std::result::Result<String, JsError> {
    to_js(rectangle_sums(n, p))
}

#[wasm_bindgen(js_name = pointHulls)]
pub fn point_hulls_js(points_csv: &str, p: usize) -> std::result::Result<String, JsError> {
    to_js(point_hulls(points_csv, p))
}
