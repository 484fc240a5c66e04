//! Associated curves of polynomial curves in projective space: the formal
//! derivative on wedge monomials, exact Plücker coordinates, vanishing orders
//! at a point, stationary indices by row reduction, and the candidate bounds
//! on the stationary indices of the associated curves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::diagrams::{all_levels, bounded_partitions, check_dims, maya_to_young, tuple_of_young, IndexTuple};
use crate::error::{CoreError, Result};
use crate::poly::{format_rational, Poly};
use crate::profile::{phi, StationaryVector};
use crate::tableaux::f_hook;

/// Largest `n + 1` for which all Plücker coordinates are computed at once.
pub const MAX_AMBIENT: usize = 20;

/// Formal integer combination of wedge monomials `x^(i_0) ∧ ⋯ ∧ x^(i_{p−1})`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalWedge {
    terms: BTreeMap<IndexTuple, BigInt>,
}

/// Sorts `slots` in place and returns the permutation sign, or `None` on a repeat.
fn sort_with_sign(slots: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    // insertion sort; each adjacent swap flips the sign
    for i in 1..slots.len() {
        let mut j = i;
        while j > 0 && slots[j - 1] > slots[j] {
            slots.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if slots.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl FormalWedge {
    pub fn zero() -> Self {
        FormalWedge::default()
    }

    /// The single monomial `x ∧ x' ∧ ⋯ ∧ x^(p−1)`.
    pub fn identity(p: usize) -> Self {
        let mut w = FormalWedge::zero();
        w.add_term(IndexTuple::identity(p), BigInt::one());
        w
    }

    fn add_term(&mut self, sigma: IndexTuple, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(sigma).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Adds `coeff · x^(s_0) ∧ ⋯` for slots in any order; repeated slots vanish.
    pub fn add_slots(&mut self, slots: &[usize], coeff: BigInt) {
        let mut sorted = slots.to_vec();
        if let Some(negative) = sort_with_sign(&mut sorted) {
            let coeff = if negative { -coeff } else { coeff };
            self.add_term(IndexTuple::from_sorted_unchecked(sorted, None), coeff);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexTuple, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, sigma: &IndexTuple) -> BigInt {
        self.terms.get(sigma).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for FormalWedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(sigma, c)| {
                if c.is_one() {
                    sigma.to_string()
                } else {
                    format!("{c}·{sigma}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `{"i0,i1,…": coefficient}`.
impl Serialize for FormalWedge {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(sigma, c)| {
                let value = i64::try_from(c)
                    .map(serde_json::Value::from)
                    .unwrap_or_else(|_| serde_json::Value::from(c.to_string()));
                (sigma.key(), value)
            })
            .collect();
        map.serialize(serializer)
    }
}

/// One derivative by the ball-shift rule: entry `k` moves up by one when the
/// next box is free (the last entry always can).
pub fn derive_formal(w: &FormalWedge) -> FormalWedge {
    let mut out = FormalWedge::zero();
    for (sigma, c) in &w.terms {
        let e = sigma.entries();
        for k in 0..e.len() {
            if k + 1 == e.len() || e[k] + 1 < e[k + 1] {
                let mut shifted = e.to_vec();
                shifted[k] += 1;
                out.add_term(IndexTuple::from_sorted_unchecked(shifted, None), c.clone());
            }
        }
    }
    out
}

/// One derivative by the Leibniz rule on every slot, followed by
/// canonicalization. Independent oracle for [`derive_formal`].
pub fn derive_leibniz(w: &FormalWedge) -> FormalWedge {
    let mut out = FormalWedge::zero();
    for (sigma, c) in &w.terms {
        for k in 0..sigma.len() {
            let mut slots = sigma.entries().to_vec();
            slots[k] += 1;
            out.add_slots(&slots, c.clone());
        }
    }
    out
}

pub fn derive_times(w: &FormalWedge, times: usize, step: fn(&FormalWedge) -> FormalWedge) -> FormalWedge {
    (0..times).fold(w.clone(), |acc, _| step(&acc))
}

/// `i`-th derivative of `x ∧ ⋯ ∧ x^(p−1)` written down directly: the tuple of
/// every shape `λ ⊢ i` with at most `p` rows, weighted by `f_λ`.
pub fn derivative_syt(p: usize, i: usize) -> Result<FormalWedge> {
    if p == 0 {
        return Err(CoreError::input("p must be at least 1"));
    }
    let mut out = FormalWedge::zero();
    for lambda in bounded_partitions(i, p, i.max(1)) {
        let sigma = tuple_of_young(&lambda, p)?;
        out.add_term(sigma, BigInt::from(f_hook(&lambda)));
    }
    Ok(out)
}

/// `n + 1` polynomial components of a curve in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Poly>", into = "Vec<Poly>")]
pub struct PolyCurve {
    components: Vec<Poly>,
}

impl TryFrom<Vec<Poly>> for PolyCurve {
    type Error = CoreError;

    fn try_from(components: Vec<Poly>) -> Result<Self> {
        PolyCurve::new(components)
    }
}

impl From<PolyCurve> for Vec<Poly> {
    fn from(curve: PolyCurve) -> Self {
        curve.components
    }
}

impl PolyCurve {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        if components.len() < 2 {
            return Err(CoreError::input("a curve needs at least two components"));
        }
        if components.iter().all(Poly::is_zero) {
            return Err(CoreError::input("all components are zero"));
        }
        Ok(PolyCurve { components })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CoreError::input(format!("bad curve JSON: {e}")))
    }

    /// `(1, z, …, z^n)`.
    pub fn rational_normal(n: usize) -> Self {
        PolyCurve {
            components: (0..=n).map(|k| Poly::monomial(BigRational::one(), k)).collect(),
        }
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// Dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.components.len() - 1
    }

    pub fn max_degree(&self) -> usize {
        self.components.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// Divides out the common polynomial factor.
    pub fn reduced(&self) -> Self {
        let g = common_factor(&self.components);
        PolyCurve {
            components: self.components.iter().map(|c| c.div_rem(&g).0).collect(),
        }
    }

    /// Rows `x, x', …, x^(count−1)`.
    fn derivative_rows(&self, count: usize) -> Vec<Vec<Poly>> {
        let mut rows = Vec::with_capacity(count);
        let mut current = self.components.clone();
        for _ in 0..count {
            let next = current.iter().map(Poly::derivative).collect();
            rows.push(current);
            current = next;
        }
        rows
    }
}

fn common_factor(polys: &[Poly]) -> Poly {
    polys.iter().fold(Poly::zero(), |g, c| g.gcd(c))
}

/// All maximal minors of a `p × (n+1)` polynomial matrix, by Laplace
/// expansion along the last row over column subsets.
pub fn wedge_rows(rows: &[Vec<Poly>]) -> Result<BTreeMap<IndexTuple, Poly>> {
    let p = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(CoreError::input("rows have different lengths"));
    }
    if p == 0 || p > width {
        return Err(CoreError::input(format!("need 1 ≤ rows ≤ {width}, got {p}")));
    }
    if width > MAX_AMBIENT {
        return Err(CoreError::Resource {
            what: "Plücker column subsets",
            needed: 1u128 << width,
            cap: 1u128 << MAX_AMBIENT,
        });
    }
    let mut minors: Vec<Option<Poly>> = vec![None; 1 << width];
    minors[0] = Some(Poly::constant(BigRational::one()));
    for (r, row) in rows.iter().enumerate() {
        let masks: Vec<usize> = (0usize..1 << width)
            .filter(|m| m.count_ones() as usize == r + 1)
            .collect();
        for mask in masks {
            let mut acc = Poly::zero();
            for (j, entry) in row.iter().enumerate() {
                if mask & (1 << j) == 0 || entry.is_zero() {
                    continue;
                }
                let rest = minors[mask ^ (1 << j)].as_ref().expect("smaller minor computed");
                let term = entry * rest;
                // sign of moving column j past the larger columns of the mask
                if (mask >> (j + 1)).count_ones() % 2 == 1 {
                    acc = &acc - &term;
                } else {
                    acc = &acc + &term;
                }
            }
            minors[mask] = Some(acc);
        }
    }
    let mut out = BTreeMap::new();
    for (mask, minor) in minors.into_iter().enumerate() {
        if mask.count_ones() as usize == p {
            let entries = (0..width).filter(|j| mask & (1 << j) != 0).collect();
            let sigma = IndexTuple::from_sorted_unchecked(entries, Some(width - 1));
            out.insert(sigma, minor.expect("all masks of size p computed"));
        }
    }
    Ok(out)
}

/// Coordinates of `x ∧ x' ∧ ⋯ ∧ x^(p−1)`, one polynomial per tuple.
pub fn pluecker(curve: &PolyCurve, p: usize) -> Result<BTreeMap<IndexTuple, Poly>> {
    check_dims(curve.n(), p)?;
    wedge_rows(&curve.derivative_rows(p))
}

/// Plücker map in its file form: `"i0,i1,…"` ↦ coefficient array.
pub fn pluecker_json(coords: &BTreeMap<IndexTuple, Poly>) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = coords
        .iter()
        .map(|(sigma, poly)| (sigma.key(), serde_json::to_value(poly).expect("poly serializes")))
        .collect();
    serde_json::Value::Object(map)
}

/// Vanishing order; the zero polynomial vanishes to infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => serializer.serialize_u64(*k as u64),
            Order::Infinite => serializer.serialize_str("inf"),
        }
    }
}

pub fn vanishing_order(f: &Poly, z0: &BigRational) -> Order {
    match f.taylor_at(z0).iter().position(|c| !c.is_zero()) {
        Some(k) => Order::Finite(k),
        None => Order::Infinite,
    }
}

/// Pivot orders `δ_0 < ⋯ < δ_n` of a curve at `z0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryProfile {
    delta: Vec<usize>,
    z0: BigRational,
}

impl Serialize for StationaryProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            delta: &'a [usize],
            v: Vec<i64>,
            z0: String,
        }
        Repr {
            delta: &self.delta,
            v: self.v().as_slice().to_vec(),
            z0: format_rational(&self.z0),
        }
        .serialize(serializer)
    }
}

impl StationaryProfile {
    pub fn new(delta: Vec<usize>, z0: BigRational) -> Result<Self> {
        if delta.is_empty() {
            return Err(CoreError::input("empty stationary profile"));
        }
        if delta.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::input(format!("{delta:?} is not strictly increasing")));
        }
        Ok(StationaryProfile { delta, z0 })
    }

    /// Profile at `z0 = 0`.
    pub fn from_delta(delta: Vec<usize>) -> Result<Self> {
        Self::new(delta, BigRational::zero())
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn z0(&self) -> &BigRational {
        &self.z0
    }

    pub fn n(&self) -> usize {
        self.delta.len() - 1
    }

    /// `v_i = δ_i − δ_{i−1}` for `1 ≤ i ≤ n`.
    pub fn v(&self) -> StationaryVector {
        let v = self.delta.windows(2).map(|w| (w[1] - w[0]) as i64).collect();
        StationaryVector::new(v).expect("differences of an increasing sequence")
    }
}

/// `d(σ) = Σ_k (δ_{i_k} − k)`.
pub fn d_of(sigma: &IndexTuple, delta: &StationaryProfile) -> Result<i64> {
    let n = delta.n();
    if sigma.entries().last().is_some_and(|&last| last > n) {
        return Err(CoreError::input(format!("{sigma} exceeds bound {n}")));
    }
    Ok(sigma
        .entries()
        .iter()
        .enumerate()
        .map(|(k, &i)| delta.delta[i] as i64 - k as i64)
        .sum())
}

/// `d_p = d(0, …, p−1)`; `d_0 = 0`.
pub fn d_p(p: usize, delta: &StationaryProfile) -> Result<i64> {
    if p > delta.n() + 1 {
        return Err(CoreError::input(format!("p = {p} exceeds n + 1 = {}", delta.n() + 1)));
    }
    d_of(&IndexTuple::identity(p), delta)
}

/// `d_p + φ_p(λ(σ))` with the stationary indices of `delta`; equals [`d_of`].
pub fn d_via_profile(sigma: &IndexTuple, delta: &StationaryProfile) -> Result<i64> {
    let (n, p) = (delta.n(), sigma.len());
    let lambda = maya_to_young(sigma, p, n)?;
    Ok(d_p(p, delta)? + phi(&lambda, p, n, &delta.v())?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexityStep {
    pub p: usize,
    pub second_difference: i64,
    pub expected: i64,
}

impl ConvexityStep {
    pub fn holds(&self) -> bool {
        self.second_difference == self.expected && self.second_difference >= 0
    }
}

/// `d_{p−1} − 2d_p + d_{p+1}` against `v_p − 1` for `1 ≤ p ≤ n`.
pub fn d_convexity(delta: &StationaryProfile) -> Vec<ConvexityStep> {
    let n = delta.n();
    let d: Vec<i64> = (0..=n + 1).map(|p| d_p(p, delta).expect("p ≤ n + 1")).collect();
    let v = delta.v();
    (1..=n)
        .map(|p| ConvexityStep {
            p,
            second_difference: d[p - 1] - 2 * d[p] + d[p + 1],
            expected: v.get(p) - 1,
        })
        .collect()
}

/// Row reduction of `rows`, tracking the combination of original rows behind
/// each reduced row. Returns `(pivot column, reduced row, combination)` sorted
/// by pivot.
#[allow(clippy::type_complexity)]
fn echelon(rows: &[Vec<BigRational>]) -> Vec<(usize, Vec<BigRational>, Vec<BigRational>)> {
    let count = rows.len();
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut work: Vec<(Vec<BigRational>, Vec<BigRational>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut padded = r.clone();
            padded.resize(width, BigRational::zero());
            let mut unit = vec![BigRational::zero(); count];
            unit[i] = BigRational::one();
            (padded, unit)
        })
        .collect();
    let mut out = Vec::new();
    for col in 0..width {
        let Some(pos) = work.iter().position(|(r, _)| !r[col].is_zero()) else {
            continue;
        };
        let (pivot_row, pivot_comb) = work.swap_remove(pos);
        for (r, comb) in work.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let factor = &r[col] / &pivot_row[col];
            for (x, y) in r.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
            for (x, y) in comb.iter_mut().zip(&pivot_comb) {
                *x -= &factor * y;
            }
        }
        out.push((col, pivot_row, pivot_comb));
        if work.is_empty() {
            break;
        }
    }
    out
}

fn taylor_rows(polys: &[Poly], z0: &BigRational) -> Vec<Vec<BigRational>> {
    polys.iter().map(|f| f.taylor_at(z0)).collect()
}

/// Default truncation: highest component degree plus `n + 2`.
pub fn default_truncation(curve: &PolyCurve) -> usize {
    curve.max_degree() + curve.n() + 2
}

/// Pivot columns of the Taylor coefficient matrix at `z0`, keeping only the
/// first `truncation` coefficients of each component.
pub fn stationary_indices(curve: &PolyCurve, z0: &BigRational, truncation: usize) -> Result<StationaryProfile> {
    let expected = curve.n() + 1;
    let full = taylor_rows(curve.components(), z0);
    // polynomials have finite expansions, so the untruncated rank is exact
    let rank = echelon(&full).len();
    if rank < expected {
        return Err(CoreError::Degenerate { rank, expected });
    }
    let cut: Vec<Vec<BigRational>> = full
        .iter()
        .map(|r| r.iter().take(truncation).cloned().collect())
        .collect();
    let pivots: Vec<usize> = echelon(&cut).into_iter().map(|(col, _, _)| col).collect();
    if pivots.len() < expected {
        return Err(CoreError::TruncationInsufficient {
            truncation,
            pivots: pivots.len(),
            expected,
        });
    }
    StationaryProfile::new(pivots, z0.clone())
}

/// Linear change of coordinates putting the curve in normal form at `z0`:
/// component `i` vanishes to order exactly `δ_i`.
pub fn normal_form(curve: &PolyCurve, z0: &BigRational) -> Result<(PolyCurve, StationaryProfile)> {
    let expected = curve.n() + 1;
    let reduced = echelon(&taylor_rows(curve.components(), z0));
    if reduced.len() < expected {
        return Err(CoreError::Degenerate {
            rank: reduced.len(),
            expected,
        });
    }
    let mut components = Vec::with_capacity(expected);
    let mut delta = Vec::with_capacity(expected);
    for (col, _, comb) in reduced {
        let mut y = Poly::zero();
        for (c, x) in comb.iter().zip(curve.components()) {
            y = &y + &x.scale(c);
        }
        components.push(y);
        delta.push(col);
    }
    Ok((PolyCurve::new(components)?, StationaryProfile::new(delta, z0.clone())?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub sigma: IndexTuple,
    pub order: Order,
    pub d: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub p: usize,
    pub profile: StationaryProfile,
    pub rows: Vec<OrderCheck>,
}

impl OrderReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Orders of the Plücker coordinates of the normal form against `d(σ)`.
pub fn verify_d_against_pluecker(curve: &PolyCurve, p: usize, z0: &BigRational) -> Result<OrderReport> {
    let (normal, profile) = normal_form(curve, z0)?;
    let coords = pluecker(&normal, p)?;
    let mut rows = Vec::with_capacity(coords.len());
    for (sigma, poly) in coords {
        let order = vanishing_order(&poly, z0);
        let d = d_of(&sigma, &profile)?;
        let pass = order == Order::Finite(d as usize);
        rows.push(OrderCheck { sigma, order, d, pass });
    }
    Ok(OrderReport { p, profile, rows })
}

/// `max deg X_σ − deg gcd_σ X_σ`, the degree of the associated curve.
pub fn associated_degree(coords: &BTreeMap<IndexTuple, Poly>) -> Result<usize> {
    let polys: Vec<Poly> = coords.values().cloned().collect();
    let g = common_factor(&polys);
    let top = polys.iter().filter_map(Poly::degree).max();
    match (top, g.degree()) {
        (Some(top), Some(common)) => Ok(top - common),
        _ => Err(CoreError::input("all Plücker coordinates vanish")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateStage {
    pub i: usize,
    pub members: Vec<IndexTuple>,
    pub min_d: i64,
    pub minimizers: Vec<IndexTuple>,
    pub bound: i64,
}

/// Stages `V(0), …, V(i_max)`: stage `i` holds every tuple of level `≤ i`
/// except the minimizers of `d` at earlier stages. Its bound is the stage
/// minimum minus the earlier bounds.
pub fn candidate_sets_v(n: usize, p: usize, delta: &StationaryProfile, i_max: usize) -> Result<Vec<CandidateStage>> {
    check_dims(n, p)?;
    if delta.n() != n {
        return Err(CoreError::input(format!("profile has n = {}, expected {n}", delta.n())));
    }
    let levels = all_levels(n, p)?;
    let q = levels.len() - 1;
    if i_max > q {
        return Err(CoreError::input(format!("i_max = {i_max} exceeds top level {q}")));
    }
    let mut removed: BTreeSet<IndexTuple> = BTreeSet::new();
    let mut stages = Vec::with_capacity(i_max + 1);
    let mut bound_total = 0i64;
    for i in 0..=i_max {
        let members: Vec<IndexTuple> = levels[..=i]
            .iter()
            .flatten()
            .filter(|s| !removed.contains(*s))
            .cloned()
            .collect();
        let scored: Vec<(i64, &IndexTuple)> = members
            .iter()
            .map(|s| Ok((d_of(s, delta)?, s)))
            .collect::<Result<_>>()?;
        let min_d = scored.iter().map(|(d, _)| *d).min().expect("stage contains level i");
        let minimizers: Vec<IndexTuple> = scored
            .iter()
            .filter(|(d, _)| *d == min_d)
            .map(|(_, s)| (*s).clone())
            .collect();
        removed.extend(minimizers.iter().cloned());
        let bound = min_d - bound_total;
        bound_total += bound;
        stages.push(CandidateStage {
            i,
            members,
            min_d,
            minimizers,
            bound,
        });
    }
    Ok(stages)
}

/// Pivot orders of the associated curve `X^(p)` at `z0`, one per independent
/// direction it sweeps out; `δ'_i − δ'_{i−1}` is its `i`-th stationary index.
pub fn associated_pivots(curve: &PolyCurve, p: usize, z0: &BigRational) -> Result<Vec<usize>> {
    let coords: Vec<Poly> = pluecker(curve, p)?.into_values().collect();
    Ok(echelon(&taylor_rows(&coords, z0)).into_iter().map(|(col, _, _)| col).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub p: usize,
    pub profile: StationaryProfile,
    pub associated_pivots: Vec<usize>,
    pub stages: Vec<CandidateStage>,
    pub pass: bool,
}

/// Checks the candidate bounds against the true associated curve: each pivot
/// `δ'_i` is at most the stage minimum, with equality for `i ≤ 1`.
pub fn verify_bounds(curve: &PolyCurve, p: usize, z0: &BigRational, i_max: usize) -> Result<BoundCheck> {
    let n = curve.n();
    let profile = stationary_indices(curve, z0, default_truncation(curve))?;
    let pivots = associated_pivots(curve, p, z0)?;
    let i_max = i_max.min(pivots.len().saturating_sub(1));
    let stages = candidate_sets_v(n, p, &profile, i_max)?;
    let pass = stages.iter().all(|stage| {
        let actual = pivots[stage.i] as i64;
        if stage.i <= 1 {
            actual == stage.min_d
        } else {
            actual <= stage.min_d
        }
    });
    Ok(BoundCheck {
        p,
        profile,
        associated_pivots: pivots,
        stages,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};
    use proptest::prelude::*;

    fn t(v: &[usize]) -> IndexTuple {
        IndexTuple::unbounded(v.to_vec()).unwrap()
    }

    fn curve(rows: &[&[i64]]) -> PolyCurve {
        PolyCurve::new(rows.iter().map(|r| Poly::from_ints(r)).collect()).unwrap()
    }

    fn wedge(terms: &[(&[usize], i64)]) -> FormalWedge {
        let mut w = FormalWedge::zero();
        for (slots, c) in terms {
            w.add_slots(slots, BigInt::from(*c));
        }
        w
    }

    #[test]
    fn formal_derivatives() {
        let id = FormalWedge::identity(2);
        assert_eq!(derive_formal(&id), wedge(&[(&[0, 2], 1)]));
        assert_eq!(derive_times(&id, 2, derive_formal), wedge(&[(&[1, 2], 1), (&[0, 3], 1)]));
        assert_eq!(derive_times(&id, 3, derive_formal), wedge(&[(&[1, 3], 2), (&[0, 4], 1)]));
        assert_eq!(derivative_syt(2, 2).unwrap(), wedge(&[(&[1, 2], 1), (&[0, 3], 1)]));
        assert_eq!(derivative_syt(2, 3).unwrap(), wedge(&[(&[1, 3], 2), (&[0, 4], 1)]));
        assert_eq!(derivative_syt(5, 0).unwrap(), FormalWedge::identity(5));
        assert_eq!(
            serde_json::to_string(&derivative_syt(2, 3).unwrap()).unwrap(),
            r#"{"0,4":1,"1,3":2}"#
        );
    }

    #[test]
    fn canonical_sign() {
        let mut w = FormalWedge::zero();
        w.add_slots(&[2, 0, 1], BigInt::from(3));
        assert_eq!(w.coeff(&t(&[0, 1, 2])), BigInt::from(3));
        w.add_slots(&[1, 0, 2], BigInt::from(3));
        assert!(w.is_empty());
        w.add_slots(&[1, 1], BigInt::from(1));
        assert!(w.is_empty());
    }

    #[test]
    fn three_derivative_routes_agree() {
        for p in 1..=4 {
            let mut formal = FormalWedge::identity(p);
            let mut leibniz = FormalWedge::identity(p);
            for i in 0..=8 {
                let direct = derivative_syt(p, i).unwrap();
                assert_eq!(formal, direct, "p={p} i={i}");
                assert_eq!(leibniz, direct, "p={p} i={i}");
                assert!(direct.terms().all(|(s, _)| s.level() == i));
                formal = derive_formal(&formal);
                leibniz = derive_leibniz(&leibniz);
            }
        }
    }

    #[test]
    fn pluecker_examples() {
        let conic = PolyCurve::rational_normal(2);
        let coords = pluecker(&conic, 2).unwrap();
        assert_eq!(coords[&t(&[0, 1])], Poly::from_ints(&[1]));
        assert_eq!(coords[&t(&[0, 2])], Poly::from_ints(&[0, 2]));
        assert_eq!(coords[&t(&[1, 2])], Poly::from_ints(&[0, 0, 1]));
        assert_eq!(
            pluecker_json(&coords).to_string(),
            r#"{"0,1":["1"],"0,2":["0","2"],"1,2":["0","0","1"]}"#
        );
        let odd = curve(&[&[1, 2], &[0, 0, 3], &[5]]);
        let p1 = pluecker(&odd, 1).unwrap();
        assert_eq!(p1.values().cloned().collect::<Vec<_>>(), odd.components().to_vec());
        let w = pluecker(&PolyCurve::rational_normal(3), 4).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[&t(&[0, 1, 2, 3])], Poly::from_ints(&[12]));
    }

    #[test]
    fn row_swap_flips_sign() {
        let rows = PolyCurve::rational_normal(4).derivative_rows(3);
        let forward = wedge_rows(&rows).unwrap();
        let swapped = wedge_rows(&[rows[1].clone(), rows[0].clone(), rows[2].clone()]).unwrap();
        for (sigma, poly) in &forward {
            assert_eq!(&-poly, &swapped[sigma]);
        }
    }

    #[test]
    fn orders() {
        let f = Poly::from_ints(&[0, 0, -1, 1]);
        assert_eq!(vanishing_order(&f, &int(0)), Order::Finite(2));
        assert_eq!(vanishing_order(&f, &int(1)), Order::Finite(1));
        assert_eq!(vanishing_order(&Poly::zero(), &int(1)), Order::Infinite);
        let coords = pluecker(&PolyCurve::rational_normal(2), 2).unwrap();
        let delta = StationaryProfile::from_delta(vec![0, 1, 2]).unwrap();
        let sigma = IndexTuple::bounded(vec![1, 2], 2).unwrap();
        assert_eq!(vanishing_order(&coords[&sigma], &int(0)), Order::Finite(2));
        assert_eq!(d_of(&sigma, &delta).unwrap(), 2);
    }

    #[test]
    fn d_values() {
        let delta = StationaryProfile::from_delta(vec![0, 2, 3]).unwrap();
        assert_eq!(d_of(&t(&[1, 2]), &delta).unwrap(), 4);
        assert_eq!(d_p(2, &delta).unwrap(), 1);
        let steps = d_convexity(&delta);
        assert_eq!(steps[0].second_difference, 1);
        assert!(steps.iter().all(ConvexityStep::holds));
        // at a generic point d(σ) is the size of λ(σ)
        let generic = StationaryProfile::from_delta((0..=6).collect()).unwrap();
        assert!(d_convexity(&generic).iter().all(|s| s.second_difference == 0));
        for p in 1..=6 {
            for (s, level) in all_levels(6, p).unwrap().iter().enumerate() {
                for sigma in level {
                    assert_eq!(d_of(sigma, &generic).unwrap(), s as i64);
                }
            }
        }
    }

    #[test]
    fn stationary_examples() {
        let cusp = curve(&[&[1], &[0, 0, 1], &[0, 0, 0, 1]]);
        let prof = stationary_indices(&cusp, &int(0), default_truncation(&cusp)).unwrap();
        assert_eq!(prof.delta(), &[0, 2, 3]);
        assert_eq!(prof.v().as_slice(), &[2, 1]);
        for z0 in [int(0), int(3), rat(-1, 2)] {
            let rnc = PolyCurve::rational_normal(5);
            let prof = stationary_indices(&rnc, &z0, default_truncation(&rnc)).unwrap();
            assert_eq!(prof.delta(), &[0, 1, 2, 3, 4, 5]);
        }
        let tri = curve(&[&[1], &[0, 1, 1], &[0, 0, 1]]);
        let prof = stationary_indices(&tri, &int(0), 8).unwrap();
        assert_eq!(prof.delta(), &[0, 1, 2]);
        assert!(matches!(
            stationary_indices(&cusp, &int(0), 3),
            Err(CoreError::TruncationInsufficient { pivots: 2, .. })
        ));
        let flat = curve(&[&[1], &[0, 1], &[2, 3]]);
        assert!(matches!(
            stationary_indices(&flat, &int(0), 10),
            Err(CoreError::Degenerate { rank: 2, expected: 3 })
        ));
    }

    #[test]
    fn candidate_bounds_match_small_cases() {
        let (n, p) = (5, 3);
        // v = (3, 1, 2, 5, 1)
        let delta = StationaryProfile::from_delta(vec![0, 3, 4, 6, 11, 12]).unwrap();
        let v = delta.v();
        let stages = candidate_sets_v(n, p, &delta, 3).unwrap();
        assert_eq!(stages[0].bound, d_p(p, &delta).unwrap());
        assert_eq!(stages[1].members, vec![IndexTuple::bounded(vec![0, 1, 3], n).unwrap()]);
        assert_eq!(stages[1].bound, v.get(p));
        assert_eq!(stages[2].bound, v.get(p - 1).min(v.get(p + 1)));
        // v_{p−1} < v_{p+1}
        assert_eq!(stages[3].bound, v.get(p - 2).min(v.get(p + 1) - v.get(p - 1)));
    }

    #[test]
    fn verify_orders_examples() {
        let report = verify_d_against_pluecker(&PolyCurve::rational_normal(2), 2, &int(0)).unwrap();
        assert!(report.all_pass());
        let orders: Vec<Order> = report.rows.iter().map(|r| r.order).collect();
        assert_eq!(orders, vec![Order::Finite(0), Order::Finite(1), Order::Finite(2)]);
        let cusp = curve(&[&[1], &[0, 0, 1], &[0, 0, 0, 1]]);
        let report = verify_d_against_pluecker(&cusp, 2, &int(0)).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.rows.iter().map(|r| r.d).collect::<Vec<_>>(), vec![1, 2, 4]);
        let report = verify_d_against_pluecker(&cusp, 1, &int(0)).unwrap();
        assert_eq!(report.rows.iter().map(|r| r.d).collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!(report.all_pass());
    }

    #[test]
    fn rational_normal_degrees() {
        for n in 1..=6 {
            let rnc = PolyCurve::rational_normal(n);
            for p in 1..=n {
                let coords = pluecker(&rnc, p).unwrap();
                assert_eq!(associated_degree(&coords).unwrap(), p * (n - p + 1), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn curve_json_round_trip() {
        let c = PolyCurve::from_json(r#"[["1"], ["0","1/2"], [0,0,"-3"]]"#).unwrap();
        assert_eq!(c.components()[1], Poly::new(vec![int(0), rat(1, 2)]));
        let back = serde_json::to_string(&c).unwrap();
        assert_eq!(PolyCurve::from_json(&back).unwrap(), c);
        assert!(PolyCurve::from_json("[[0],[0]]").is_err());
    }

    fn monomial_curve() -> impl Strategy<Value = (PolyCurve, i64)> {
        // components z^{δ_i} plus random higher-order tails, z0 random
        (2usize..=4, -2i64..=2).prop_flat_map(|(n, z0)| {
            (
                prop::collection::btree_set(0usize..7, n + 1),
                prop::collection::vec(prop::collection::vec(-3i64..=3, 3), n + 1),
                prop::collection::vec(prop::collection::vec(-2i64..=2, n + 1), n + 1),
                Just(z0),
            )
        })
        .prop_map(|(orders, tails, mix, z0)| {
            let shift = Poly::from_ints(&[-z0, 1]);
            let base: Vec<Poly> = orders
                .iter()
                .zip(&tails)
                .map(|(&d, tail)| {
                    let mut power = Poly::constant(int(1));
                    for _ in 0..d {
                        power = &power * &shift;
                    }
                    let tail = Poly::from_ints(&[1, tail[0], tail[1], tail[2]]);
                    let tail = Poly::new(tail.taylor_at(&int(-z0)));
                    &power * &tail
                })
                .collect();
            let n = base.len();
            // unit lower-triangular mixing keeps the pivots
            let mixed = (0..n)
                .map(|i| {
                    (0..=i).fold(Poly::zero(), |acc, j| {
                        let c = if i == j { 1 } else { mix[i][j] };
                        &acc + &base[n - 1 - j].scale(&int(c))
                    })
                })
                .collect();
            (PolyCurve::new(mixed).unwrap(), z0)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn convexity_for_random_profiles(steps in prop::collection::vec(1usize..5, 1..8)) {
            let mut delta = vec![0usize];
            for s in steps {
                delta.push(delta.last().unwrap() + s);
            }
            let profile = StationaryProfile::from_delta(delta).unwrap();
            prop_assert!(d_convexity(&profile).iter().all(ConvexityStep::holds));
            let n = profile.n();
            for p in 1..=n {
                for level in all_levels(n, p).unwrap() {
                    for sigma in level {
                        prop_assert_eq!(d_of(&sigma, &profile).unwrap(), d_via_profile(&sigma, &profile).unwrap());
                    }
                }
            }
        }

        #[test]
        fn orders_match_d((c, z0) in monomial_curve()) {
            let z0 = int(z0);
            for p in 1..=c.n() + 1 {
                let report = verify_d_against_pluecker(&c, p, &z0).unwrap();
                prop_assert!(report.all_pass(), "{:?}", report.rows);
            }
        }

        #[test]
        fn bounds_hold((c, z0) in monomial_curve()) {
            let z0 = int(z0);
            for p in 1..=c.n() {
                let q = p * (c.n() + 1 - p);
                let check = verify_bounds(&c, p, &z0, q).unwrap();
                prop_assert!(check.pass, "{:?}", check);
            }
        }
    }
}
