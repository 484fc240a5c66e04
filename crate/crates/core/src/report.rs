//! Seeded batteries of checks per module, the JSON report they produce, and
//! table renderings of it.
//!
//! Every case carries the inputs that identify it, what was computed, what
//! was expected, a residual and a verdict. Cases are sorted by their inputs
//! (numbers compared by value), so a report depends only on the suite, its
//! parameters, the seed and the tool version.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::caps;
use crate::diagrams::{
    all_levels, binomial, bounded_partitions, complement, level_count_bound, maya_to_young, top_level,
    weighted_level_sum, young_to_maya, MayaDiagram, YoungDiagram,
};
use crate::error::{CoreError, Result};
use crate::expcurve::{
    collinear_sharpness, minkowski_identity_check, peculiar_sweep, perimeters, random_integer_set, six_point_table,
    slope_check, symmetry_check, FrequencySet, DEFAULT_SAMPLES,
};
use crate::poly::{format_rational, Poly};
use crate::profile::{profile_balls, profile_geometric};
use crate::sums::{brill_segre_check, verify_identity, Identity, Lattice};
use crate::tableaux::{
    chain_multiplicities, chains_through, edge_sum_sweep, enumerate_syt, f_hook, f_recursive, tableau_profile_sum,
    Side,
};
use crate::wedge::{
    associated_degree, d_convexity, d_of, d_via_profile, default_truncation, derivative_syt, derive_formal,
    derive_leibniz, derive_times, pluecker, stationary_indices, verify_bounds, verify_d_against_pluecker,
    FormalWedge, PolyCurve,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 7;

/// Suites in the order `all` runs them.
pub const SUITES: [&str; 5] = ["diagrams", "tableaux", "sums", "wedge", "expcurve"];

/// Preset point sets accepted by the `expcurve` suite.
pub const PRESETS: [&str; 2] = ["six-point", "paper-n5"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub inputs: Value,
    pub computed: Value,
    pub expected: Value,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub tool_version: String,
    pub seed: u64,
    pub params: Value,
    pub cases: Vec<Case>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Set when a cap stopped part of the battery; the cases are then partial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource_cap: Option<String>,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64, params: Value, cases: Vec<Case>) -> Self {
        // grouped by suite tag (only present under `all`), then by inputs
        let mut keyed: Vec<(String, String, Case)> = cases
            .into_iter()
            .map(|c| {
                let tag = c.inputs["suite"].as_str().unwrap_or_default().to_string();
                (tag, c.inputs.to_string(), c)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| natural_cmp(&a.1, &b.1)));
        let cases: Vec<Case> = keyed.into_iter().map(|(_, _, c)| c).collect();
        let summary = Summary {
            total: cases.len(),
            passed: cases.iter().filter(|c| c.pass).count(),
            max_residual: cases
                .iter()
                .map(|c| c.residual)
                .filter(|r| !r.is_nan())
                .fold(0.0, f64::max),
        };
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
            params,
            cases,
            summary,
            notes: Vec::new(),
            resource_cap: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    /// 0 when every case passes, 1 on any violation, 3 when a cap cut the
    /// battery short and nothing failed.
    pub fn exit_code(&self) -> i32 {
        if !self.all_pass() {
            1
        } else if self.resource_cap.is_some() {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }
}

/// Exit code for a suite that could not produce a report at all.
pub fn exit_code_for_error(err: &CoreError) -> i32 {
    match err {
        CoreError::Resource { .. } => 3,
        _ => 2,
    }
}

/// Suite parameters. Unset fields fall back to per-suite sweeps.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<FrequencySet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<PolyCurve>,
}

impl SuiteParams {
    /// Reads `{n, p, i, trials, seed, preset, points, curve}`; `points` is CSV
    /// text and `curve` a JSON array of coefficient arrays.
    pub fn from_json(value: &Value) -> Result<Self> {
        let map = value
            .as_object()
            .ok_or_else(|| CoreError::input("suite parameters must be a JSON object"))?;
        let mut params = SuiteParams::default();
        for (key, v) in map {
            let count = || {
                v.as_u64()
                    .ok_or_else(|| CoreError::input(format!("{key} must be a non-negative integer")))
            };
            match key.as_str() {
                "n" => params.n = Some(count()? as usize),
                "p" => params.p = Some(count()? as usize),
                "i" => params.i = Some(count()? as usize),
                "trials" => params.trials = Some(count()? as usize),
                "seed" => params.seed = Some(count()?),
                "preset" => {
                    let name = v.as_str().ok_or_else(|| CoreError::input("preset must be a string"))?;
                    params.preset = Some(name.to_string());
                }
                "points" => {
                    let text = v.as_str().ok_or_else(|| CoreError::input("points must be CSV text"))?;
                    params.points = Some(FrequencySet::from_csv(text)?);
                }
                "curve" => {
                    params.curve = Some(PolyCurve::from_json(&v.to_string())?);
                }
                other => return Err(CoreError::input(format!("unknown parameter {other:?}"))),
            }
        }
        Ok(params)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn ns(&self, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        self.n.map_or_else(|| default.collect(), |n| vec![n])
    }

    fn ps(&self, n: usize) -> Vec<usize> {
        self.p.map_or_else(|| (1..=n).collect(), |p| vec![p])
    }

    fn validate(&self, suite: &str) -> Result<()> {
        if self.n == Some(0) {
            return Err(CoreError::input("n must be at least 1"));
        }
        if self.p == Some(0) {
            return Err(CoreError::input("p must be at least 1"));
        }
        if let (Some(n), Some(p)) = (self.n, self.p) {
            if p > n {
                return Err(CoreError::input(format!("need p ≤ n, got n = {n}, p = {p}")));
            }
        }
        let any = suite == "all";
        if (self.preset.is_some() || self.points.is_some()) && !(any || suite == "expcurve") {
            return Err(CoreError::input("preset and points apply to the expcurve suite"));
        }
        if self.curve.is_some() && !(any || suite == "wedge") {
            return Err(CoreError::input("curve applies to the wedge suite"));
        }
        if self.preset.is_some() && self.points.is_some() {
            return Err(CoreError::input("give either a preset or points, not both"));
        }
        if let Some(name) = &self.preset {
            if !PRESETS.contains(&name.as_str()) {
                return Err(CoreError::input(format!(
                    "unknown preset {name:?}; expected one of {}",
                    PRESETS.join(", ")
                )));
            }
        }
        Ok(())
    }
}

/// Runs the named battery. `all` runs every suite and tags each case with it.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<VerificationReport> {
    if name != "all" && !SUITES.contains(&name) {
        return Err(CoreError::UnknownSuite(name.to_string()));
    }
    params.validate(name)?;
    let mut battery = Battery::default();
    if name == "all" {
        for suite in SUITES {
            battery.tag = Some(suite);
            run_one(suite, params, &mut battery)?;
        }
    } else {
        run_one(name, params, &mut battery)?;
    }
    let params_json = serde_json::to_value(params).expect("parameters serialize");
    let mut report = VerificationReport::new(name, params.seed(), params_json, battery.cases);
    report.notes = battery.notes;
    report.resource_cap = battery.cap;
    Ok(report)
}

fn run_one(suite: &str, params: &SuiteParams, b: &mut Battery) -> Result<()> {
    match suite {
        "diagrams" => diagrams_suite(params, b),
        "tableaux" => tableaux_suite(params, b),
        "sums" => sums_suite(params, b),
        "wedge" => wedge_suite(params, b),
        "expcurve" => expcurve_suite(params, b),
        other => Err(CoreError::UnknownSuite(other.to_string())),
    }
}

#[derive(Default)]
struct Battery {
    tag: Option<&'static str>,
    cases: Vec<Case>,
    notes: Vec<String>,
    cap: Option<String>,
}

impl Battery {
    fn push(&mut self, mut inputs: Value, computed: Value, expected: Value, residual: f64, pass: bool) {
        if let (Some(tag), Some(map)) = (self.tag, inputs.as_object_mut()) {
            map.insert("suite".into(), json!(tag));
        }
        self.cases.push(Case {
            inputs,
            computed,
            expected,
            residual,
            pass,
        });
    }

    /// A count of mismatches that should be zero.
    fn zero(&mut self, inputs: Value, mismatches: usize) {
        self.push(inputs, json!(mismatches), json!(0), mismatches as f64, mismatches == 0);
    }

    fn capped(&mut self, message: String) {
        let message = match self.tag {
            Some(tag) => format!("{tag}: {message}"),
            None => message,
        };
        if self.cap.is_none() {
            self.cap = Some(message.clone());
        }
        self.notes.push(message);
    }

    /// Resource errors become a cap note; anything else propagates.
    fn guard<T>(&mut self, result: Result<T>) -> Result<Option<T>> {
        match result {
            Ok(v) => Ok(Some(v)),
            Err(e @ CoreError::Resource { .. }) => {
                self.capped(e.to_string());
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

fn lattice_guard(n: usize, p: usize) -> Result<()> {
    let needed = binomial(n + 1, p);
    let cap = caps::subset_sums();
    if needed > cap {
        return Err(CoreError::Resource {
            what: "index tuples",
            needed,
            cap,
        });
    }
    Ok(())
}

fn big(x: &BigUint) -> Value {
    x.to_u64().map_or_else(|| json!(x.to_string()), |v| json!(v))
}

fn rational(x: &BigRational) -> Value {
    if x.is_integer() {
        if let Some(v) = x.numer().to_i64() {
            return json!(v);
        }
    }
    json!(format_rational(x))
}

fn gap(a: &BigRational, b: &BigRational) -> f64 {
    (a - b).abs().to_f64().unwrap_or(f64::INFINITY)
}

fn diagrams_suite(params: &SuiteParams, b: &mut Battery) -> Result<()> {
    for n in params.ns(1..=7) {
        for p in params.ps(n) {
            let key = |check: &str| json!({"check": check, "n": n, "p": p});
            if b.guard(lattice_guard(n, p))?.is_none() {
                continue;
            }
            let levels = all_levels(n, p)?;
            let q = top_level(n, p);
            let total: usize = levels.iter().map(Vec::len).sum();
            let expected = binomial(n + 1, p);
            b.push(
                key("level-count"),
                json!({"tuples": total, "levels": levels.len()}),
                json!({"tuples": expected, "levels": q + 1}),
                (total as f64 - expected as f64).abs() + levels.len().abs_diff(q + 1) as f64,
                total as u128 == expected && levels.len() == q + 1,
            );

            let (mut roundtrip, mut profiles) = (0, 0);
            for (s, level) in levels.iter().enumerate() {
                for sigma in level {
                    let lambda = maya_to_young(sigma, p, n)?;
                    let dual = complement(&lambda, p, n)?;
                    let ok = young_to_maya(&lambda, p, n)? == *sigma
                        && MayaDiagram::from_tuple(sigma, n)?.to_tuple() == *sigma
                        && lambda.size() == s
                        && sigma.level() == s
                        && dual.size() + s == q
                        && complement(&dual, p, n)? == lambda;
                    roundtrip += usize::from(!ok);
                    let geometric = profile_geometric(&lambda, p, n)?;
                    let balls = profile_balls(sigma, p, n)?;
                    profiles += usize::from(geometric != balls || geometric.mass() as usize != s);
                }
            }
            b.zero(key("maya-young-roundtrip"), roundtrip);
            b.zero(key("profile-oracles"), profiles);

            let mut bound_failures = 0;
            for s in 0..=q {
                let bound = level_count_bound(n, p, s)?;
                bound_failures += usize::from(bound.count > bound.partition_value || !bound.iff_condition_holds);
            }
            b.zero(key("partition-bound"), bound_failures);

            let weighted = weighted_level_sum(n, p)?;
            b.push(
                key("weighted-level-sum"),
                json!(weighted.sum),
                json!(weighted.closed_form),
                weighted.sum.abs_diff(weighted.closed_form) as f64,
                weighted.holds(),
            );
        }
    }
    Ok(())
}

fn tableaux_suite(params: &SuiteParams, b: &mut Battery) -> Result<()> {
    for n in params.ns(1..=6) {
        for p in params.ps(n) {
            let cols = n + 1 - p;
            for side in [Side::EmptyBox, Side::Ball] {
                for e in edge_sum_sweep(side, p, n)? {
                    let value = BigRational::from_integer(BigInt::from(e.value.clone()));
                    b.push(
                        json!({"check": "edge-sum", "n": n, "p": p, "side": side.name(), "j": e.j}),
                        big(&e.value),
                        rational(&e.closed_form),
                        gap(&value, &e.closed_form),
                        e.holds(),
                    );
                }
            }

            for k in 1..=n {
                let t = tableau_profile_sum(k, p, n)?;
                match &t.enumerated {
                    Some(v) => {
                        let value = BigRational::from_integer(BigInt::from(v.clone()));
                        b.push(
                            json!({"check": "tableau-profile", "n": n, "p": p, "k": k}),
                            big(v),
                            rational(&t.closed_form),
                            gap(&value, &t.closed_form),
                            t.verified(),
                        );
                    }
                    None => b.capped(format!(
                        "tableau profile n={n} p={p} k={k}: {p}x{cols} rectangle exceeds the {}-cell enumeration cap",
                        caps::syt_cells()
                    )),
                }
            }

            // f by hook lengths, by recursion and by enumeration, for every
            // shape in the rectangle
            let (mut shapes, mut mismatches, mut skipped) = (0, 0, 0);
            for size in 0..=p * cols {
                for lambda in bounded_partitions(size, p, cols) {
                    shapes += 1;
                    let hook = f_hook(&lambda);
                    let mut ok = f_recursive(&lambda) == hook;
                    match b.guard(enumerate_syt(&lambda))? {
                        Some(tabs) => ok &= BigUint::from(tabs.len()) == hook,
                        None => skipped += 1,
                    }
                    mismatches += usize::from(!ok);
                }
            }
            b.push(
                json!({"check": "hook-count", "n": n, "p": p, "shapes": shapes, "unenumerated": skipped}),
                json!(mismatches),
                json!(0),
                mismatches as f64,
                mismatches == 0,
            );

            if let Some(tally) = b.guard(chain_multiplicities(p, n))? {
                let f_rect = f_hook(&YoungDiagram::rectangle(p, cols));
                let mut bad = 0;
                for level in all_levels(n, p)? {
                    let mut rank = BigUint::from(0u8);
                    for sigma in level {
                        let lambda = maya_to_young(&sigma, p, n)?;
                        let walked = BigUint::from(tally.get(&lambda).copied().unwrap_or(0));
                        bad += usize::from(walked != chains_through(&lambda, p, n)?);
                        rank += walked;
                    }
                    bad += usize::from(rank != f_rect);
                }
                b.zero(json!({"check": "chain-walk", "n": n, "p": p}), bad);
            }
        }
    }
    Ok(())
}

const SUITE_IDENTITIES: [Identity; 6] = [
    Identity::Balanced,
    Identity::AkIdentity,
    Identity::Weighted,
    Identity::Chain,
    Identity::SecondDifference,
    Identity::BoxForm,
];

fn sums_suite(params: &SuiteParams, b: &mut Battery) -> Result<()> {
    let trials = params.trials.unwrap_or(50);
    let seed = params.seed();
    for n in params.ns(1..=6) {
        for p in params.ps(n) {
            if b.guard(lattice_guard(n, p))?.is_none() {
                continue;
            }
            for identity in SUITE_IDENTITIES {
                if let Some(v) = b.guard(verify_identity(identity, n, p, trials, seed))? {
                    b.push(
                        json!({"check": identity.name(), "n": n, "p": p, "trials": trials}),
                        json!(v.max_abs_residual),
                        json!(0),
                        v.max_abs_residual,
                        v.pass(),
                    );
                }
            }
            let counts = Lattice::new(n, p)?.edge_class_counts();
            let bad = counts.iter().filter(|c| !c.holds()).count();
            b.zero(json!({"check": "edge-class-count", "n": n, "p": p}), bad);
        }
        let v = verify_identity(Identity::BrillSegre, n, 1, trials, seed)?;
        b.push(
            json!({"check": Identity::BrillSegre.name(), "n": n, "trials": trials}),
            json!(v.max_abs_residual),
            json!(0),
            v.max_abs_residual,
            v.pass(),
        );
    }
    Ok(())
}

fn wedge_mismatches(a: &FormalWedge, b: &FormalWedge) -> usize {
    let keys: std::collections::BTreeSet<_> = a.terms().chain(b.terms()).map(|(s, _)| s.clone()).collect();
    keys.iter().filter(|s| a.coeff(s) != b.coeff(s)).count()
}

fn poly_curve(rows: &[&[i64]]) -> PolyCurve {
    PolyCurve::new(rows.iter().map(|r| Poly::from_ints(r)).collect()).expect("fixed curves have components")
}

/// Fixed curves with stationary points at the origin.
fn sample_curves() -> Vec<(&'static str, PolyCurve)> {
    vec![
        ("cusp", poly_curve(&[&[1], &[0, 0, 1], &[0, 0, 0, 1]])),
        ("flex", poly_curve(&[&[1], &[0, 1], &[0, 0, 0, 1]])),
        ("gaps-3", poly_curve(&[&[1], &[0, 0, 1], &[0, 0, 0, 1], &[0, 0, 0, 0, 0, 1]])),
        ("mixed-3", poly_curve(&[&[1, 1], &[0, 1, -1], &[0, 0, 0, 1, 2], &[0, 0, 0, 0, 1]])),
        ("gaps-4", poly_curve(&[&[1], &[0, 1], &[0, 0, 0, 1], &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 0, 0, 0, 1]])),
    ]
}

fn wedge_suite(params: &SuiteParams, b: &mut Battery) -> Result<()> {
    let ps: Vec<usize> = params.p.map_or_else(|| (1..=4).collect(), |p| vec![p]);
    let is: Vec<usize> = params.i.map_or_else(|| (0..=8).collect(), |i| vec![i]);
    if params.curve.is_none() {
        for &p in &ps {
            for &i in &is {
                let syt = derivative_syt(p, i)?;
                let id = FormalWedge::identity(p);
                let leibniz = derive_times(&id, i, derive_leibniz);
                let formal = derive_times(&id, i, derive_formal);
                let bad = wedge_mismatches(&syt, &leibniz) + wedge_mismatches(&syt, &formal);
                b.push(
                    json!({"check": "derivative-syt", "p": p, "i": i}),
                    json!({"terms": syt.len()}),
                    json!({"terms": leibniz.len()}),
                    bad as f64,
                    bad == 0,
                );
            }
        }
    }

    let mut curves: Vec<(String, PolyCurve)> = Vec::new();
    match &params.curve {
        Some(curve) => curves.push(("input".into(), curve.clone())),
        None => {
            let ns = params.ns(1..=5);
            for &n in &ns {
                curves.push((format!("normal-{n}"), PolyCurve::rational_normal(n)));
            }
            for (name, curve) in sample_curves() {
                if ns.contains(&curve.n()) {
                    curves.push((name.into(), curve));
                }
            }
        }
    }

    for (label, curve) in &curves {
        let n = curve.n();
        if label.starts_with("normal-") {
            for p in params.ps(n) {
                let q = (p * (n + 1 - p)) as i64;
                let degree = b.guard(pluecker(curve, p).and_then(|c| associated_degree(&c)))?;
                let Some(degree) = degree else { continue };
                let nu = brill_segre_check(0, n as i64, &vec![0; n], n)?.nu[p];
                b.push(
                    json!({"check": "normal-curve-degree", "n": n, "p": p}),
                    json!({"pluecker": degree, "recursion": nu}),
                    json!({"pluecker": q, "recursion": q}),
                    ((degree as i64 - q).abs() + (nu - q).abs()) as f64,
                    degree as i64 == q && nu == q,
                );
            }
        }
        for z0 in [0i64, 1] {
            let at = BigRational::from_integer(BigInt::from(z0));
            let profile = stationary_indices(curve, &at, default_truncation(curve))?;
            let key = |check: &str, p: Option<usize>| {
                let mut v = json!({"check": check, "curve": label, "n": n, "z0": z0});
                if let Some(p) = p {
                    v["p"] = json!(p);
                }
                v
            };
            let steps = d_convexity(&profile);
            let bad = steps.iter().filter(|s| !s.holds()).count();
            b.push(
                key("convexity", None),
                json!({"delta": profile.delta(), "failures": bad}),
                json!({"delta": profile.delta(), "failures": 0}),
                bad as f64,
                bad == 0,
            );
            for p in params.ps(n) {
                let Some(orders) = b.guard(verify_d_against_pluecker(curve, p, &at))? else {
                    continue;
                };
                let bad = orders.rows.iter().filter(|r| !r.pass).count();
                b.zero(key("pluecker-orders", Some(p)), bad);

                let mut via = 0;
                for sigma in all_levels(n, p)?.into_iter().flatten() {
                    via += usize::from(d_of(&sigma, &profile)? != d_via_profile(&sigma, &profile)?);
                }
                b.zero(key("d-via-profile", Some(p)), via);

                let q = p * (n + 1 - p);
                if let Some(bounds) = b.guard(verify_bounds(curve, p, &at, q))? {
                    let mins: Vec<i64> = bounds.stages.iter().map(|s| s.min_d).collect();
                    let pivots = &bounds.associated_pivots[..mins.len()];
                    let excess = pivots
                        .iter()
                        .zip(&mins)
                        .map(|(&a, &m)| (a as i64 - m).max(0))
                        .sum::<i64>();
                    b.push(
                        key("stage-bounds", Some(p)),
                        json!(pivots),
                        json!({"atMost": mins}),
                        excess as f64,
                        bounds.pass,
                    );
                }
            }
        }
    }
    Ok(())
}

fn expcurve_suite(params: &SuiteParams, b: &mut Battery) -> Result<()> {
    if let Some(preset) = &params.preset {
        for check in six_point_table()? {
            b.push(
                json!({"check": "six-point", "preset": preset, "quantity": check.quantity}),
                json!(check.value),
                json!(check.bound),
                check.residual(),
                check.pass,
            );
        }
        return set_battery(b, json!({"set": preset}), &FrequencySet::six_point(), params);
    }
    if let Some(points) = &params.points {
        return set_battery(b, json!({"set": "input"}), points, params);
    }
    let trials = params.trials.unwrap_or(10);
    let seed = params.seed();
    for n in params.ns(1..=5) {
        for t in 0..trials {
            let mut rng = crate::random::stream(seed, ((n as u64) << 32) | t as u64);
            let set = random_integer_set(&mut rng, n, 3.max(n as i64));
            set_battery(b, json!({"set": "random", "trial": t}), &set, params)?;
        }
    }
    for n in params.ns(1..=6) {
        for p in params.ps(n) {
            for s in collinear_sharpness(n, p)? {
                if params.i.is_some_and(|i| i != s.i) {
                    continue;
                }
                let expected = s.expected as f64;
                b.push(
                    json!({"check": "sharpness", "n": n, "p": p, "i": s.i}),
                    json!({"middle": s.middle, "pointSums": s.l_i_points, "subsetSums": s.l_i}),
                    json!({"middle": s.expected, "pointSums": s.expected, "subsetSumsAtLeast": s.expected}),
                    (s.middle - expected).abs() + (s.l_i_points - expected).abs() + (expected - s.l_i).max(0.0),
                    s.pass,
                );
            }
        }
    }
    Ok(())
}

/// Perimeter checks on one point set; `tag` identifies the set in each case.
fn set_battery(b: &mut Battery, tag: Value, set: &FrequencySet, params: &SuiteParams) -> Result<()> {
    let n = set.n();
    let key = |check: &str, extra: Value| {
        let mut v = tag.clone();
        v["check"] = json!(check);
        v["n"] = json!(n);
        if let (Some(map), Some(more)) = (v.as_object_mut(), extra.as_object()) {
            map.extend(more.clone());
        }
        v
    };
    let l = perimeters(set)?;
    let worst = (1..=n).map(|k| l.second_difference(k)).fold(0.0, f64::max);
    b.push(
        key("concavity", json!({})),
        json!(l.l),
        json!("second differences ≤ 0"),
        worst,
        l.concave(),
    );
    for row in symmetry_check(set)? {
        b.push(
            key("symmetry", json!({"p": row.p})),
            json!({"L_p": row.l_p, "reflected": row.reflected}),
            json!({"L_p": row.l_mirror, "reflected": true}),
            (row.l_p - row.l_mirror).abs(),
            row.pass,
        );
    }
    let ps = match params.p {
        Some(p) if p <= n => vec![p],
        Some(_) => Vec::new(),
        None => (1..=n).collect(),
    };
    for &p in &ps {
        let Some(m) = b.guard(minkowski_identity_check(set, p))? else {
            continue;
        };
        b.push(
            key("minkowski", json!({"p": p})),
            json!({"neighbours": m.neighbours, "setEqual": m.set_equal}),
            json!({"neighbours": m.pair_perimeter, "setEqual": true}),
            (m.neighbours - m.pair_perimeter).abs(),
            m.pass,
        );
        let Some(sweep) = b.guard(peculiar_sweep(set, p))? else {
            continue;
        };
        for r in sweep {
            if params.i.is_some_and(|i| i != r.i) {
                continue;
            }
            let upper = r.l_i.min(r.l_i_points);
            b.push(
                key("peculiar", json!({"p": p, "i": r.i})),
                json!({"lower": r.l_p, "middle": r.middle, "upper": upper}),
                json!("lower ≤ middle ≤ upper"),
                (r.l_p - r.middle).max(r.middle - upper).max(0.0),
                r.pass(),
            );
        }
        if n <= 6 {
            let s = slope_check(set, p, 50.0, 100.0, DEFAULT_SAMPLES)?;
            b.push(
                key("slope", json!({"p": p, "r1": 50, "r2": 100, "samples": DEFAULT_SAMPLES})),
                json!(s.slope),
                json!(s.expected),
                s.relative_error,
                s.pass,
            );
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            other => Err(CoreError::input(format!("unknown table format {other:?}"))),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Csv => "csv",
            TableFormat::Markdown => "markdown",
        })
    }
}

const COLUMNS: [&str; 5] = ["inputs", "computed", "expected", "residual", "pass"];

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn row(case: &Case) -> [String; 5] {
    [
        cell(&case.inputs),
        cell(&case.computed),
        cell(&case.expected),
        case.residual.to_string(),
        case.pass.to_string(),
    ]
}

/// One row per case, columns in schema order.
pub fn emit_table(report: &VerificationReport, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut out = csv::Writer::from_writer(Vec::new());
            out.write_record(COLUMNS).expect("in-memory write");
            for case in &report.cases {
                out.write_record(row(case)).expect("in-memory write");
            }
            String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8 cells")
        }
        TableFormat::Markdown => {
            let mut out = format!("| {} |\n|{}\n", COLUMNS.join(" | "), "---|".repeat(COLUMNS.len()));
            for case in &report.cases {
                let cells: Vec<String> = row(case).iter().map(|c| c.replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out
        }
    }
}

/// Orders strings with digit runs compared by value, so `n":10` sorts after `n":9`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let i = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let j = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (u, v) = (trim_zeros(&x[..i]), trim_zeros(&y[..j]));
                let ord = u.len().cmp(&v.len()).then_with(|| u.cmp(v)).then_with(|| i.cmp(&j));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[i..];
                y = &y[j..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let lead = digits.iter().take_while(|&&c| c == b'0').count();
    &digits[lead..]
}
