//! Exponential curves `z ↦ (e^{w_0 z}, …, e^{w_n z})` seen through their
//! frequency points `(a_k, b_k)` with `w_k = a_k − i b_k`: the clouds of
//! subset sums, their convex hulls and perimeters, and the growth rate of
//! the order function of the associated curves.
//!
//! Inputs are exact rationals. Geometry runs on integer coordinates after
//! clearing denominators, so hulls and set comparisons are exact; only the
//! perimeters themselves are floating point.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng as _;
use serde::{Serialize, Serializer};

use crate::caps;
use crate::diagrams::{all_levels, binomial, check_dims, maya_to_young, IndexTuple};
use crate::error::{CoreError, Result};
use crate::poly::{format_rational, parse_rational};
use crate::profile::profile_geometric;
use crate::random::Rng;

pub const TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 4096;
pub const SLOPE_TOLERANCE: f64 = 0.02;

/// Bound on cleared coordinates, keeping every product below `i128::MAX`.
const MAX_FRAME_COORD: i128 = 1 << 40;

type Pt = [i128; 2];

fn sub(a: Pt, b: Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: Pt, b: Pt) -> Pt {
    [a[0] + b[0], a[1] + b[1]]
}

fn cross(a: Pt, b: Pt) -> i128 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Pt, b: Pt) -> i128 {
    a[0] * b[0] + a[1] * b[1]
}

/// Exact planar point.
pub type RationalPoint = (BigRational, BigRational);

/// The `n + 1` distinct frequency points of an exponential curve in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySet {
    points: Vec<RationalPoint>,
}

/// Points scaled by a common denominator to integers.
struct Frame {
    pts: Vec<Pt>,
    denominator: BigInt,
    scale: f64,
}

impl Frame {
    fn to_rational(&self, p: Pt) -> RationalPoint {
        (
            BigRational::new(BigInt::from(p[0]), self.denominator.clone()),
            BigRational::new(BigInt::from(p[1]), self.denominator.clone()),
        )
    }

    fn polygon(&self, hull: &[Pt]) -> ConvexPolygon {
        ConvexPolygon {
            vertices: hull
                .iter()
                .map(|p| [p[0] as f64 / self.scale, p[1] as f64 / self.scale])
                .collect(),
        }
    }

    /// Closed boundary length of an integer hull, in original units.
    fn perimeter(&self, hull: &[Pt]) -> f64 {
        if hull.len() < 2 {
            return 0.0;
        }
        let total: f64 = (0..hull.len())
            .map(|k| {
                let d = sub(hull[(k + 1) % hull.len()], hull[k]);
                ((d[0] * d[0] + d[1] * d[1]) as f64).sqrt()
            })
            .sum();
        total / self.scale
    }
}

impl Serialize for FrequencySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pts: Vec<[String; 2]> = self
            .points
            .iter()
            .map(|(a, b)| [format_rational(a), format_rational(b)])
            .collect();
        pts.serialize(serializer)
    }
}

impl FrequencySet {
    pub fn new(points: Vec<RationalPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(CoreError::input("need at least two frequency points"));
        }
        let distinct: BTreeSet<&RationalPoint> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(CoreError::input("frequency points must be pairwise distinct"));
        }
        let set = FrequencySet { points };
        set.frame()?;
        Ok(set)
    }

    pub fn from_ints(points: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|&(a, b)| (BigRational::from_integer(a.into()), BigRational::from_integer(b.into())))
                .collect(),
        )
    }

    /// CSV lines `a,b`; entries are integers, decimals or `num/den`. Lines
    /// starting with `#` are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CoreError::input(format!("point CSV: {e}")))?;
            if record.len() != 2 {
                return Err(CoreError::input(format!(
                    "point CSV record {}: expected 2 fields, got {}",
                    line + 1,
                    record.len()
                )));
            }
            points.push((parse_rational(&record[0])?, parse_rational(&record[1])?));
        }
        Self::new(points)
    }

    pub fn to_csv(&self) -> String {
        self.points
            .iter()
            .map(|(a, b)| format!("{},{}\n", format_rational(a), format_rational(b)))
            .collect()
    }

    /// The six-point set `(0,0),(0,1),(1,0),(1,1),(1,2),(2,1)` in `P^5`.
    pub fn six_point() -> Self {
        Self::from_ints(&[(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]).expect("distinct")
    }

    /// `(0,0), (1,0), …, (n,0)`: frequencies `0, 1, …, n`.
    pub fn collinear(n: usize) -> Self {
        let pts: Vec<(i64, i64)> = (0..=n as i64).map(|k| (k, 0)).collect();
        Self::from_ints(&pts).expect("distinct")
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    pub fn as_f64(&self) -> Vec<[f64; 2]> {
        self.points
            .iter()
            .map(|(a, b)| [a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN)])
            .collect()
    }

    /// `w_k = a_k − i b_k`.
    pub fn frequencies(&self) -> Vec<Complex64> {
        self.as_f64().iter().map(|p| Complex64::new(p[0], -p[1])).collect()
    }

    fn frame(&self) -> Result<Frame> {
        let denominator = self
            .points
            .iter()
            .flat_map(|(a, b)| [a.denom().clone(), b.denom().clone()])
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let clear = |x: &BigRational| -> Result<i128> {
            let scaled = (x * &denominator).to_integer();
            match scaled.to_i128() {
                Some(v) if v.abs() <= MAX_FRAME_COORD => Ok(v),
                _ => Err(CoreError::input(
                    "coordinates are too large or too finely divided for exact geometry",
                )),
            }
        };
        let pts = self
            .points
            .iter()
            .map(|(a, b)| Ok([clear(a)?, clear(b)?]))
            .collect::<Result<Vec<Pt>>>()?;
        let scale = denominator.to_f64().unwrap_or(f64::INFINITY);
        Ok(Frame {
            pts,
            denominator,
            scale,
        })
    }
}

/// Counterclockwise vertices; two vertices for a segment, one for a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    pub vertices: Vec<[f64; 2]>,
}

/// Boundary length, walking the closed vertex loop: a segment counts twice.
pub fn perimeter(poly: &ConvexPolygon) -> f64 {
    let v = &poly.vertices;
    if v.len() < 2 {
        return 0.0;
    }
    (0..v.len())
        .map(|k| {
            let (a, b) = (v[k], v[(k + 1) % v.len()]);
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .sum()
}

/// Monotone chain on exact integer points; collinear points are dropped.
fn hull_exact(points: &[Pt]) -> Vec<Pt> {
    let mut v = points.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() <= 2 {
        return v;
    }
    let mut lower: Vec<Pt> = Vec::with_capacity(v.len());
    for &p in &v {
        while lower.len() >= 2 && cross(sub(lower[lower.len() - 1], lower[lower.len() - 2]), sub(p, lower[lower.len() - 2])) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Pt> = Vec::with_capacity(v.len());
    for &p in v.iter().rev() {
        while upper.len() >= 2 && cross(sub(upper[upper.len() - 1], upper[upper.len() - 2]), sub(p, upper[upper.len() - 2])) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Monotone chain in floating point, for inputs without an exact form.
pub fn convex_hull(points: &[[f64; 2]]) -> Result<ConvexPolygon> {
    if points.is_empty() {
        return Err(CoreError::input("hull of an empty set"));
    }
    if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(CoreError::input("non-finite point"));
    }
    let mut v = points.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v.dedup();
    let extent = v
        .iter()
        .flat_map(|p| [p[0].abs(), p[1].abs()])
        .fold(1.0f64, f64::max);
    let eps = 1e-12 * extent * extent;
    let turn = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    if v.len() <= 2 {
        return Ok(ConvexPolygon { vertices: v });
    }
    let chain = |iter: &mut dyn Iterator<Item = [f64; 2]>| {
        let mut out: Vec<[f64; 2]> = Vec::new();
        for p in iter {
            while out.len() >= 2 && turn(out[out.len() - 2], out[out.len() - 1], p) <= eps {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
        out
    };
    let mut lower = chain(&mut v.iter().copied());
    let upper = chain(&mut v.iter().rev().copied());
    lower.extend(upper);
    Ok(ConvexPolygon { vertices: lower })
}

/// Sum of each `p`-subset of `pts`, in lexicographic subset order.
fn subset_sums(pts: &[Pt], p: usize) -> Vec<Pt> {
    if p == 0 {
        return vec![[0, 0]];
    }
    pts.iter()
        .copied()
        .combinations(p)
        .map(|c| c.into_iter().fold([0, 0], add))
        .collect()
}

fn check_p(set: &FrequencySet, p: usize) -> Result<()> {
    if p > set.n() + 1 {
        return Err(CoreError::input(format!("p = {p} exceeds n + 1 = {}", set.n() + 1)));
    }
    Ok(())
}

/// `{Σ_{k∈σ} (a_k, b_k)}` over `p`-subsets `σ`, sorted and deduplicated.
pub fn vertex_set(set: &FrequencySet, p: usize) -> Result<Vec<RationalPoint>> {
    check_p(set, p)?;
    let frame = set.frame()?;
    let unique: BTreeSet<Pt> = subset_sums(&frame.pts, p).into_iter().collect();
    Ok(unique.into_iter().map(|q| frame.to_rational(q)).collect())
}

/// Sums over `i` distinct `p`-subsets, with repetitions when distinct choices coincide.
fn enumerate_i(sums: &[Pt], i: usize) -> Result<Vec<Pt>> {
    let m = sums.len();
    if i == 0 || i > m {
        return Err(CoreError::input(format!("i = {i} outside 1..={m}")));
    }
    let needed = binomial(m, i);
    let cap = caps::subset_sums();
    if needed > cap {
        return Err(CoreError::Resource {
            what: "subset-sum enumeration",
            needed,
            cap,
        });
    }
    Ok(sums
        .iter()
        .copied()
        .combinations(i)
        .map(|c| c.into_iter().fold([0, 0], add))
        .collect())
}

/// Sums over `i` distinct `p`-subsets, sorted and deduplicated.
pub fn vertex_set_i(set: &FrequencySet, p: usize, i: usize) -> Result<Vec<RationalPoint>> {
    check_p(set, p)?;
    let frame = set.frame()?;
    let unique: BTreeSet<Pt> = enumerate_i(&subset_sums(&frame.pts, p), i)?.into_iter().collect();
    Ok(unique.into_iter().map(|q| frame.to_rational(q)).collect())
}

/// Hull of the `p`-subset sums.
pub fn hull_p(set: &FrequencySet, p: usize) -> Result<ConvexPolygon> {
    check_p(set, p)?;
    let frame = set.frame()?;
    Ok(frame.polygon(&hull_exact(&subset_sums(&frame.pts, p))))
}

/// Hull of the sums of `i` distinct `p`-subset sums.
pub fn hull_i(set: &FrequencySet, p: usize, i: usize) -> Result<ConvexPolygon> {
    check_p(set, p)?;
    let frame = set.frame()?;
    let sums = subset_sums(&frame.pts, p);
    check_i(sums.len(), i)?;
    let hulls = top_sum_hulls(&sums);
    Ok(frame.polygon(&hulls[i - 1]))
}

fn check_i(m: usize, i: usize) -> Result<()> {
    if i == 0 || i > m {
        return Err(CoreError::input(format!("i = {i} outside 1..={m}")));
    }
    Ok(())
}

/// Half-plane then cross-product order on directions, counterclockwise from angle 0.
fn angle_cmp(a: &Pt, b: &Pt) -> std::cmp::Ordering {
    let half = |v: &Pt| v[1] < 0 || (v[1] == 0 && v[0] < 0);
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(*a, *b)))
}

/// For every `i`, the hull of all sums of `i` distinct entries of `pts`.
///
/// In direction `u` the extreme sum takes the `i` entries with the largest
/// projection. That choice only changes where two entries project equally,
/// so one direction inside each arc between such critical directions finds
/// every hull vertex, for all `i` at once.
fn top_sum_hulls(pts: &[Pt]) -> Vec<Vec<Pt>> {
    let m = pts.len();
    let mut directions: BTreeSet<Pt> = BTreeSet::new();
    for a in 0..m {
        for b in a + 1..m {
            let d = sub(pts[b], pts[a]);
            if d == [0, 0] {
                continue;
            }
            let g = d[0].gcd(&d[1]);
            let normal = [-d[1] / g, d[0] / g];
            directions.insert(normal);
            directions.insert([-normal[0], -normal[1]]);
        }
    }
    let mut directions: Vec<Pt> = directions.into_iter().collect();
    directions.sort_by(angle_cmp);
    if directions.is_empty() {
        // all entries coincide
        let mut acc = [0, 0];
        return pts
            .iter()
            .map(|&q| {
                acc = add(acc, q);
                vec![acc]
            })
            .collect();
    }
    let mut vertices: Vec<Vec<Pt>> = vec![Vec::new(); m];
    let mut order: Vec<usize> = (0..m).collect();
    for k in 0..directions.len() {
        let (c1, c2) = (directions[k], directions[(k + 1) % directions.len()]);
        let u = if cross(c1, c2) > 0 {
            add(c1, c2)
        } else {
            // only two antipodal critical directions: the arc is a half turn
            [-c1[1], c1[0]]
        };
        order.sort_by_key(|&j| std::cmp::Reverse(dot(u, pts[j])));
        let mut acc = [0, 0];
        for (slot, &j) in order.iter().enumerate() {
            acc = add(acc, pts[j]);
            vertices[slot].push(acc);
        }
    }
    vertices.iter().map(|v| hull_exact(v)).collect()
}

/// `L_0, …, L_{n+1}`: hull perimeters of the `p`-subset sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerimeterSequence {
    pub l: Vec<f64>,
}

impl PerimeterSequence {
    pub fn n(&self) -> usize {
        self.l.len() - 2
    }

    pub fn get(&self, k: usize) -> f64 {
        self.l[k]
    }

    /// `L_{k−1} − 2L_k + L_{k+1}` for `1 ≤ k ≤ n`.
    pub fn second_difference(&self, k: usize) -> f64 {
        self.l[k - 1] - 2.0 * self.l[k] + self.l[k + 1]
    }

    pub fn concave(&self) -> bool {
        (1..=self.n()).all(|k| self.second_difference(k) <= TOLERANCE)
    }
}

pub fn perimeters(set: &FrequencySet) -> Result<PerimeterSequence> {
    let frame = set.frame()?;
    let l = (0..=set.n() + 1)
        .map(|p| frame.perimeter(&hull_exact(&subset_sums(&frame.pts, p))))
        .collect();
    Ok(PerimeterSequence { l })
}

/// `L_i^(p)` for `i = 1..=C(n+1,p)`.
pub fn perimeters_i(set: &FrequencySet, p: usize) -> Result<Vec<f64>> {
    check_p(set, p)?;
    let frame = set.frame()?;
    let sums = subset_sums(&frame.pts, p);
    Ok(top_sum_hulls(&sums).iter().map(|h| frame.perimeter(h)).collect())
}

/// Like [`perimeters_i`] but choosing `i` distinct points of `V_p`, so that
/// coinciding subset sums are used once; `i = 1..=|V_p|`.
pub fn perimeters_i_points(set: &FrequencySet, p: usize) -> Result<Vec<f64>> {
    check_p(set, p)?;
    let frame = set.frame()?;
    let points: Vec<Pt> = subset_sums(&frame.pts, p)
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(top_sum_hulls(&points).iter().map(|h| frame.perimeter(h)).collect())
}

pub fn perimeter_i(set: &FrequencySet, p: usize, i: usize) -> Result<f64> {
    check_p(set, p)?;
    check_i(binomial(set.n() + 1, p) as usize, i)?;
    Ok(perimeters_i(set, p)?[i - 1])
}

/// `L_i^(p)` by listing every choice of `i` subsets; capped.
pub fn perimeter_i_enumerated(set: &FrequencySet, p: usize, i: usize) -> Result<f64> {
    check_p(set, p)?;
    let frame = set.frame()?;
    let all = enumerate_i(&subset_sums(&frame.pts, p), i)?;
    Ok(frame.perimeter(&hull_exact(&all)))
}

/// `pass` is the verdict on `value` against `bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub pass: bool,
    #[serde(skip)]
    relation: Relation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Equal,
    /// Equality up to a relative error.
    Relative,
    AtMost,
    AtLeast,
    Free,
}

impl Check {
    pub fn equal(quantity: impl Into<String>, value: f64, expected: f64) -> Self {
        Check {
            quantity: quantity.into(),
            value,
            bound: Some(expected),
            pass: (value - expected).abs() <= TOLERANCE,
            relation: Relation::Equal,
        }
    }

    pub fn at_most(quantity: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            quantity: quantity.into(),
            value,
            bound: Some(bound),
            pass: value <= bound + TOLERANCE,
            relation: Relation::AtMost,
        }
    }

    pub fn at_least(quantity: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            quantity: quantity.into(),
            value,
            bound: Some(bound),
            pass: value >= bound - TOLERANCE,
            relation: Relation::AtLeast,
        }
    }

    pub fn value(quantity: impl Into<String>, value: f64) -> Self {
        Check {
            quantity: quantity.into(),
            value,
            bound: None,
            pass: value.is_finite(),
            relation: Relation::Free,
        }
    }

    /// Distance from `value` to satisfying the relation with `bound`.
    pub fn residual(&self) -> f64 {
        match (self.relation, self.bound) {
            (Relation::Equal, Some(b)) => (self.value - b).abs(),
            (Relation::Relative, Some(b)) if b.abs() > TOLERANCE => ((self.value - b) / b).abs(),
            (Relation::Relative, Some(b)) => (self.value - b).abs(),
            (Relation::AtMost, Some(b)) => (self.value - b).max(0.0),
            (Relation::AtLeast, Some(b)) => (b - self.value).max(0.0),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinkowskiCheck {
    pub p: usize,
    pub set_equal: bool,
    /// `L_{p−1} + L_{p+1}`.
    pub neighbours: f64,
    /// `L_2^(p)`.
    pub pair_perimeter: f64,
    pub pass: bool,
}

/// `V_{p−1} + V_{p+1} = V_2^(p)` as exact sets, and the perimeters agree.
impl MinkowskiCheck {
    pub fn checks(&self) -> Vec<Check> {
        let p = self.p;
        vec![
            Check {
                quantity: format!("L_{}+L_{}", p - 1, p + 1),
                value: self.neighbours,
                bound: Some(self.pair_perimeter),
                pass: (self.neighbours - self.pair_perimeter).abs() <= TOLERANCE,
                relation: Relation::Equal,
            },
            Check {
                quantity: format!("V_{}+V_{}=V_2^({p})", p - 1, p + 1),
                value: f64::from(u8::from(self.set_equal)),
                bound: Some(1.0),
                pass: self.set_equal,
                relation: Relation::Equal,
            },
        ]
    }
}

pub fn minkowski_identity_check(set: &FrequencySet, p: usize) -> Result<MinkowskiCheck> {
    let n = set.n();
    if p == 0 || p > n {
        return Err(CoreError::input(format!("need 1 ≤ p ≤ n = {n}, got {p}")));
    }
    let frame = set.frame()?;
    let below: BTreeSet<Pt> = subset_sums(&frame.pts, p - 1).into_iter().collect();
    let above: BTreeSet<Pt> = subset_sums(&frame.pts, p + 1).into_iter().collect();
    let minkowski: BTreeSet<Pt> = below
        .iter()
        .flat_map(|&a| above.iter().map(move |&b| add(a, b)))
        .collect();
    let sums = subset_sums(&frame.pts, p);
    let pairs: BTreeSet<Pt> = enumerate_i(&sums, 2)?.into_iter().collect();
    let neighbours = frame.perimeter(&hull_exact(&below.iter().copied().collect::<Vec<_>>()))
        + frame.perimeter(&hull_exact(&above.iter().copied().collect::<Vec<_>>()));
    let pair_perimeter = frame.perimeter(&top_sum_hulls(&sums)[1]);
    let set_equal = minkowski == pairs;
    Ok(MinkowskiCheck {
        p,
        set_equal,
        neighbours,
        pair_perimeter,
        pass: set_equal && (neighbours - pair_perimeter).abs() <= TOLERANCE,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryRow {
    pub p: usize,
    pub l_p: f64,
    pub l_mirror: f64,
    /// `V_{n+1−p}` is the reflection of `V_p` through half the total sum.
    pub reflected: bool,
    pub pass: bool,
}

pub fn symmetry_check(set: &FrequencySet) -> Result<Vec<SymmetryRow>> {
    let n = set.n();
    let frame = set.frame()?;
    let total = frame.pts.iter().copied().fold([0, 0], add);
    let l = perimeters(set)?;
    Ok((1..=n)
        .map(|p| {
            let direct: BTreeSet<Pt> = subset_sums(&frame.pts, n + 1 - p).into_iter().collect();
            let mirrored: BTreeSet<Pt> = subset_sums(&frame.pts, p).into_iter().map(|q| sub(total, q)).collect();
            let reflected = direct == mirrored;
            let (l_p, l_mirror) = (l.get(p), l.get(n + 1 - p));
            SymmetryRow {
                p,
                l_p,
                l_mirror,
                reflected,
                pass: reflected && (l_p - l_mirror).abs() <= TOLERANCE,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelMax {
    pub level: usize,
    pub sigma: IndexTuple,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeculiarReport {
    pub n: usize,
    pub p: usize,
    pub i: usize,
    pub l_p: f64,
    pub middle: f64,
    /// Hull perimeter of the sums over `i` distinct `p`-subsets.
    pub l_i: f64,
    /// Same with `i` distinct points of `V_p`; differs when subset sums coincide.
    pub l_i_points: f64,
    pub maxima: Vec<LevelMax>,
    pub left: bool,
    pub right: bool,
}

impl PeculiarReport {
    pub fn pass(&self) -> bool {
        self.left && self.right
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![
            Check::at_most(format!("L_{}", self.p), self.l_p, self.middle),
            Check::at_most("middle", self.middle, self.l_i),
            Check::at_most("middle", self.middle, self.l_i_points),
            Check::value(format!("L_{}^({})", self.i, self.p), self.l_i),
        ]
    }
}

/// For each level `s ≥ 1`, the tuple maximizing `Σ_k n_λ(σ)(k)(L_{k−1} − 2L_k + L_{k+1})`.
fn level_maxima(l: &PerimeterSequence, n: usize, p: usize, up_to: usize) -> Result<Vec<LevelMax>> {
    let levels = all_levels(n, p)?;
    let mut out = Vec::new();
    for (s, level) in levels.iter().enumerate().take(up_to + 1).skip(1) {
        let mut best: Option<LevelMax> = None;
        for sigma in level {
            let profile = profile_geometric(&maya_to_young(sigma, p, n)?, p, n)?;
            let value: f64 = profile.iter().map(|(k, m)| m as f64 * l.second_difference(k)).sum();
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(LevelMax {
                    level: s,
                    sigma: sigma.clone(),
                    value,
                });
            }
        }
        out.push(best.expect("levels below the top are non-empty"));
    }
    Ok(out)
}

/// `L_p ≤ Σ_{s<i} max_{σ at level s}(…) + i L_p ≤ L_i^(p)` for every `i = 1..=p(n−p+1)`.
pub fn peculiar_sweep(set: &FrequencySet, p: usize) -> Result<Vec<PeculiarReport>> {
    let n = set.n();
    check_dims(n, p)?;
    if p > n {
        return Err(CoreError::input(format!("need 1 ≤ p ≤ n = {n}, got {p}")));
    }
    let q = p * (n + 1 - p);
    let l = perimeters(set)?;
    let l_i = perimeters_i(set, p)?;
    // at least q + 1 distinct subset sums exist, so every i has a value
    let l_i_points = perimeters_i_points(set, p)?;
    let maxima = level_maxima(&l, n, p, q - 1)?;
    let l_p = l.get(p);
    Ok((1..=q)
        .map(|i| {
            let middle = maxima[..i - 1].iter().map(|m| m.value).sum::<f64>() + i as f64 * l_p;
            PeculiarReport {
                n,
                p,
                i,
                l_p,
                middle,
                l_i: l_i[i - 1],
                l_i_points: l_i_points[i - 1],
                maxima: maxima[..i - 1].to_vec(),
                left: l_p <= middle + TOLERANCE,
                right: middle <= l_i[i - 1] + TOLERANCE && middle <= l_i_points[i - 1] + TOLERANCE,
            }
        })
        .collect())
}

pub fn peculiar_middle(set: &FrequencySet, p: usize, i: usize) -> Result<PeculiarReport> {
    let n = set.n();
    check_dims(n, p)?;
    let q = p * (n + 1 - p);
    if i == 0 || i > q || p > n {
        return Err(CoreError::input(format!("need 1 ≤ p ≤ n and 1 ≤ i ≤ {q}")));
    }
    Ok(peculiar_sweep(set, p)?.swap_remove(i - 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessCheck {
    pub n: usize,
    pub p: usize,
    pub i: usize,
    pub middle: f64,
    pub l_i: f64,
    pub l_i_points: f64,
    pub expected: i64,
    pub pass: bool,
}

impl SharpnessCheck {
    pub fn checks(&self) -> Vec<Check> {
        let (n, p, i) = (self.n, self.p, self.i);
        let expected = self.expected as f64;
        let exact = |quantity: String, value: f64| Check {
            quantity,
            value,
            bound: Some(expected),
            pass: value == expected,
            relation: Relation::Equal,
        };
        vec![
            exact(format!("middle(n={n},p={p},i={i})"), self.middle),
            exact(format!("L_{i}^({p}) points(n={n})"), self.l_i_points),
            Check::at_least(format!("L_{i}^({p})(n={n})"), self.l_i, expected),
        ]
    }
}

/// `2i(np − p² + p − i + 1)`.
pub fn sharpness_value(n: usize, p: usize, i: usize) -> i64 {
    let (n, p, i) = (n as i64, p as i64, i as i64);
    2 * i * (n * p - p * p + p - i + 1)
}

/// Frequencies `0, 1, …, n` attain equality on the right: the middle term
/// and the perimeter over distinct points of `V_p` both equal
/// `2i(np − p² + p − i + 1)`. Over distinct subsets the sums repeat once
/// `i` passes the first level with two tuples, and that perimeter is only
/// bounded below by the same value. All values are integers here, so the
/// comparisons are exact.
pub fn collinear_sharpness(n: usize, p: usize) -> Result<Vec<SharpnessCheck>> {
    let set = FrequencySet::collinear(n);
    Ok(peculiar_sweep(&set, p)?
        .into_iter()
        .map(|r| {
            let expected = sharpness_value(n, p, r.i);
            SharpnessCheck {
                n,
                p,
                i: r.i,
                middle: r.middle,
                l_i: r.l_i,
                l_i_points: r.l_i_points,
                expected,
                pass: r.middle == expected as f64 && r.l_i_points == expected as f64 && r.l_i >= expected as f64,
            }
        })
        .collect())
}

/// Log-magnitudes and exponents of `|E^(p)(z)|² = Σ_σ |c_σ|² exp(2 Re(w_σ z))`.
fn exponential_terms(set: &FrequencySet, p: usize) -> Result<Vec<(f64, Complex64)>> {
    check_p(set, p)?;
    if p == 0 {
        return Err(CoreError::input("p must be at least 1"));
    }
    let w = set.frequencies();
    let mut terms = Vec::new();
    for sigma in (0..w.len()).combinations(p) {
        let mut log_c2 = 0.0;
        for (a, &k) in sigma.iter().enumerate() {
            for &l in &sigma[a + 1..] {
                let gap = (w[l] - w[k]).norm();
                if gap == 0.0 || !gap.is_finite() {
                    let key = sigma.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                    return Err(CoreError::VanishingCoefficient(key));
                }
                log_c2 += 2.0 * gap.ln();
            }
        }
        let w_sigma: Complex64 = sigma.iter().map(|&k| w[k]).sum();
        terms.push((log_c2, w_sigma));
    }
    Ok(terms)
}

/// `m(r) = (1/4π) ∮ log |E^(p)(r e^{iθ})|² dθ` by the trapezoid rule with
/// log-sum-exp over the terms.
fn order_function(terms: &[(f64, Complex64)], r: f64, samples: usize) -> f64 {
    let mut total = 0.0;
    let mut exps = vec![0.0; terms.len()];
    for j in 0..samples {
        let theta = 2.0 * PI * j as f64 / samples as f64;
        let z = Complex64::from_polar(r, theta);
        for (slot, (log_c2, w)) in exps.iter_mut().zip(terms) {
            *slot = log_c2 + 2.0 * (w * z).re;
        }
        let top = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        total += top + exps.iter().map(|x| (x - top).exp()).sum::<f64>().ln();
    }
    total / (2.0 * samples as f64)
}

pub fn order_value(set: &FrequencySet, p: usize, r: f64, samples: usize) -> Result<f64> {
    Ok(order_function(&exponential_terms(set, p)?, r, samples))
}

/// `(m(r2) − m(r1)) / (r2 − r1)`, which tends to `L_p / 2π`.
pub fn numerical_order_slope(set: &FrequencySet, p: usize, r1: f64, r2: f64, samples: usize) -> Result<f64> {
    if !(r1 > 0.0 && r2 > r1 && r2.is_finite()) {
        return Err(CoreError::input(format!("need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")));
    }
    if samples < 256 {
        return Err(CoreError::input(format!("need at least 256 samples, got {samples}")));
    }
    let terms = exponential_terms(set, p)?;
    Ok((order_function(&terms, r2, samples) - order_function(&terms, r1, samples)) / (r2 - r1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeCheck {
    pub p: usize,
    pub r1: f64,
    pub r2: f64,
    pub samples: usize,
    pub slope: f64,
    pub expected: f64,
    pub relative_error: f64,
    pub pass: bool,
}

impl SlopeCheck {
    pub fn check(&self) -> Check {
        Check {
            quantity: format!("slope_{}", self.p),
            value: self.slope,
            bound: Some(self.expected),
            pass: self.pass,
            relation: Relation::Relative,
        }
    }
}

/// Slope against `L_p / 2π` within 2% (absolute `1e−9` when `L_p = 0`).
pub fn slope_check(set: &FrequencySet, p: usize, r1: f64, r2: f64, samples: usize) -> Result<SlopeCheck> {
    let slope = numerical_order_slope(set, p, r1, r2, samples)?;
    let expected = perimeters(set)?.get(p) / (2.0 * PI);
    let (relative_error, pass) = if expected > TOLERANCE {
        let rel = (slope - expected).abs() / expected;
        (rel, rel <= SLOPE_TOLERANCE)
    } else {
        (slope.abs(), slope.abs() <= TOLERANCE)
    };
    Ok(SlopeCheck {
        p,
        r1,
        r2,
        samples,
        slope,
        expected,
        relative_error,
        pass,
    })
}

/// Perimeter and neighbour checks for the six-point set against its known
/// closed forms.
pub fn six_point_table() -> Result<Vec<Check>> {
    let set = FrequencySet::six_point();
    let (r2, r5) = (2f64.sqrt(), 5f64.sqrt());
    let l = perimeters(&set)?;
    let l2 = perimeters_i(&set, 2)?;
    let minkowski = minkowski_identity_check(&set, 2)?;
    let peculiar = peculiar_middle(&set, 2, 3)?;
    Ok(vec![
        Check::equal("L_1", l.get(1), 2.0 + 3.0 * r2),
        Check::equal("L_2", l.get(2), 4.0 + r2 + 2.0 * r5),
        Check::equal("L_3", l.get(3), 8.0 + 2.0 * r2),
        Check::equal("L_2^(2)", l2[1], 10.0 + 5.0 * r2),
        Check::equal("L_3^(2)", l2[2], 8.0 + 4.0 * r2 + 4.0 * r5),
        Check {
            quantity: "L_1+L_3".into(),
            value: minkowski.neighbours,
            bound: Some(minkowski.pair_perimeter),
            pass: minkowski.pass,
            relation: Relation::Equal,
        },
        Check::equal("middle(p=2,i=3)", peculiar.middle, 8.0 + 7.0 * r2 + 2.0 * r5),
        Check::at_most("middle(p=2,i=3)", peculiar.middle, peculiar.l_i),
    ])
}

/// Distinct integer points with coordinates in `[−range, range]`.
pub fn random_integer_set(rng: &mut Rng, n: usize, range: i64) -> FrequencySet {
    let mut seen = BTreeSet::new();
    while seen.len() < n + 1 {
        seen.insert((rng.random_range(-range..=range), rng.random_range(-range..=range)));
    }
    let mut pts: Vec<(i64, i64)> = seen.into_iter().collect();
    // BTreeSet order is not random; shuffle for index assignment
    for k in (1..pts.len()).rev() {
        pts.swap(k, rng.random_range(0..=k));
    }
    FrequencySet::from_ints(&pts).expect("distinct")
}

/// Distinct points on the grid `(1/8)ℤ²` inside `[−4, 4]²`.
pub fn random_eighths_set(rng: &mut Rng, n: usize) -> FrequencySet {
    let ints = random_integer_set(rng, n, 32);
    let eighth = BigRational::new(BigInt::one(), BigInt::from(8));
    FrequencySet::new(
        ints.points
            .into_iter()
            .map(|(a, b)| (a * &eighth, b * &eighth))
            .collect(),
    )
    .expect("scaling keeps points distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOLERANCE
    }

    /// `∮ h(θ) dθ` for the support function `h`, which equals the perimeter.
    fn support_integral(poly: &ConvexPolygon, samples: usize) -> f64 {
        (0..samples)
            .map(|j| {
                let t = 2.0 * PI * (j as f64 + 0.5) / samples as f64;
                poly.vertices
                    .iter()
                    .map(|v| v[0] * t.cos() + v[1] * t.sin())
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum::<f64>()
            * 2.0
            * PI
            / samples as f64
    }

    #[test]
    fn six_point_values() {
        let set = FrequencySet::six_point();
        let hull = hull_p(&set, 1).unwrap();
        assert_eq!(
            hull.vertices,
            vec![[0.0, 0.0], [1.0, 0.0], [2.0, 1.0], [1.0, 2.0], [0.0, 1.0]]
        );
        assert!(close(perimeter(&hull), 2.0 + 3.0 * 2f64.sqrt()));
        assert!(six_point_table().unwrap().iter().all(|c| c.pass));
        assert_eq!(vertex_set(&set, 1).unwrap().len(), 6);
        assert!(vertex_set(&set, 2).unwrap().len() < 15);
        assert_eq!(vertex_set(&set, 6).unwrap().len(), 1);
        let l = perimeters(&set).unwrap();
        assert!(close(l.get(2), l.get(4)));
        assert!(l.concave());
        let peculiar = peculiar_middle(&set, 2, 3).unwrap();
        assert!(peculiar.pass());
        assert!(close(peculiar.l_i, 8.0 + 4.0 * 2f64.sqrt() + 4.0 * 5f64.sqrt()));
        assert!(close(peculiar.l_i_points, peculiar.l_i));
    }

    #[test]
    fn degenerate_hulls() {
        let seg = convex_hull(&[[0.0, 0.0], [1.0, 0.0], [3.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_eq!(seg.vertices, vec![[0.0, 0.0], [3.0, 0.0]]);
        assert_eq!(perimeter(&seg), 6.0);
        let pt = convex_hull(&[[1.5, 2.0], [1.5, 2.0]]).unwrap();
        assert_eq!(perimeter(&pt), 0.0);
        assert!(convex_hull(&[]).is_err());
        assert_eq!(perimeters(&FrequencySet::collinear(3)).unwrap().l, vec![0.0, 6.0, 8.0, 6.0, 0.0]);
    }

    #[test]
    fn float_and_exact_hulls_agree() {
        let mut rng = seeded(5);
        for _ in 0..30 {
            let set = random_eighths_set(&mut rng, 6);
            for p in 1..=6 {
                let exact = hull_p(&set, p).unwrap();
                let pts: Vec<[f64; 2]> = vertex_set(&set, p)
                    .unwrap()
                    .iter()
                    .map(|(a, b)| [a.to_f64().unwrap(), b.to_f64().unwrap()])
                    .collect();
                let float = convex_hull(&pts).unwrap();
                assert_eq!(exact.vertices, float.vertices);
                let cauchy = support_integral(&exact, 20_000);
                assert!((cauchy - perimeter(&exact)).abs() <= 1e-6 * perimeter(&exact).max(1.0));
            }
        }
    }

    #[test]
    fn sweep_matches_enumeration() {
        let mut rng = seeded(9);
        for n in 1..=5 {
            for _ in 0..4 {
                let set = random_integer_set(&mut rng, n, 4);
                for p in 1..=n + 1 {
                    let all = perimeters_i(&set, p).unwrap();
                    for (idx, swept) in all.iter().enumerate() {
                        let i = idx + 1;
                        if binomial(all.len(), i) > 20_000 {
                            continue;
                        }
                        let listed = perimeter_i_enumerated(&set, p, i).unwrap();
                        assert!(close(*swept, listed), "n={n} p={p} i={i}");
                        // repeated sums do not move the hull
                        let frame = set.frame().unwrap();
                        let multi = enumerate_i(&subset_sums(&frame.pts, p), i).unwrap();
                        let unique: Vec<Pt> = multi.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
                        assert_eq!(hull_exact(&multi), hull_exact(&unique));
                    }
                    assert_eq!(*all.last().unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let set = random_integer_set(&mut seeded(1), 6, 10);
        assert!(matches!(
            perimeter_i_enumerated(&set, 3, 12),
            Err(CoreError::Resource { .. })
        ));
        assert!(perimeter_i(&set, 3, 12).unwrap() > 0.0);
        assert!(vertex_set_i(&set, 3, 36).is_err());
    }

    #[test]
    fn minkowski_and_symmetry() {
        let mut rng = seeded(21);
        for n in 1..=6 {
            let set = random_eighths_set(&mut rng, n);
            for p in 1..=n {
                assert!(minkowski_identity_check(&set, p).unwrap().pass, "n={n} p={p}");
            }
            assert!(symmetry_check(&set).unwrap().iter().all(|r| r.pass));
            assert!(perimeters(&set).unwrap().concave());
        }
        let single = FrequencySet::from_ints(&[(0, 0), (3, 1)]).unwrap();
        let row = &symmetry_check(&single).unwrap()[0];
        assert_eq!(row.l_p, row.l_mirror);
    }

    #[test]
    fn sharpness_small() {
        let checks = collinear_sharpness(3, 2).unwrap();
        assert_eq!(checks[1].middle, 12.0);
        // sums of pairs are 1, 2, 3, 3, 4, 5: four distinct pairs span [9, 15]
        assert_eq!((checks[3].l_i, checks[3].l_i_points, checks[3].expected), (12.0, 8.0, 8));
        assert!(checks.iter().all(|c| c.pass));
        for n in 1..=6 {
            for p in 1..=n {
                let checks = collinear_sharpness(n, p).unwrap();
                assert!(checks.iter().all(|c| c.pass), "n={n} p={p}");
                let q = p * (n + 1 - p);
                assert_eq!(checks[0].l_i, (2 * p * (n - p + 1)) as f64);
                assert_eq!(checks[0].l_i_points, checks[0].l_i);
                assert_eq!(checks[q - 1].expected, 2 * q as i64);
            }
        }
    }

    #[test]
    fn slope_examples() {
        let pair = FrequencySet::from_ints(&[(-1, 0), (1, 0)]).unwrap();
        let c = slope_check(&pair, 1, 50.0, 100.0, DEFAULT_SAMPLES).unwrap();
        assert!(close(c.expected, 4.0 / (2.0 * PI)));
        assert!(c.pass, "{c:?}");
        let top = slope_check(&pair, 2, 50.0, 100.0, DEFAULT_SAMPLES).unwrap();
        assert!(top.pass && top.expected == 0.0);
        let six = slope_check(&FrequencySet::six_point(), 2, 50.0, 100.0, DEFAULT_SAMPLES).unwrap();
        assert!(six.pass, "{six:?}");
        assert!(numerical_order_slope(&pair, 1, 2.0, 1.0, 512).is_err());
        assert!(numerical_order_slope(&pair, 1, 1.0, 2.0, 16).is_err());
    }

    #[test]
    fn csv_input() {
        let set = FrequencySet::from_csv("# frequencies\n0,0\n1/2, 0.25\n-1,3\n").unwrap();
        assert_eq!(set.n(), 2);
        assert_eq!(set.points()[1].1, BigRational::new(1.into(), 4.into()));
        assert_eq!(FrequencySet::from_csv(&set.to_csv()).unwrap(), set);
        assert!(FrequencySet::from_csv("0,0\n0,0\n").is_err());
        assert!(FrequencySet::from_csv("0,0,1\n1,1,1\n").is_err());
        assert!(FrequencySet::from_csv("0,x\n1,1\n").is_err());
    }

    fn convex_position() -> impl Strategy<Value = Vec<Pt>> {
        prop::collection::vec((-20i128..=20, -20i128..=20), 1..8)
            .prop_map(|v| hull_exact(&v.into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn minkowski_additivity(a in convex_position(), b in convex_position()) {
            let frame = Frame { pts: Vec::new(), denominator: BigInt::one(), scale: 1.0 };
            let sum: Vec<Pt> = a.iter().flat_map(|&x| b.iter().map(move |&y| add(x, y))).collect();
            let lhs = frame.perimeter(&hull_exact(&sum));
            let rhs = frame.perimeter(&a) + frame.perimeter(&b);
            prop_assert!((lhs - rhs).abs() <= TOLERANCE * rhs.max(1.0));
        }
    }
}
