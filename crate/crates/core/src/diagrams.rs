//! Index tuples, Maya diagrams and Young diagrams inside the `p × (n-p+1)`
//! rectangle, together with the graded level sets of tuples by coordinate sum.
//!
//! All tuples are 0-based: the tuple `(i_0, …, i_{p-1})` has a ball in Maya box
//! `i_k + 1`. The offset only shows up when a [`MayaDiagram`] is rendered.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};

/// Strictly increasing tuple of non-negative integers, optionally bounded by `n`.
///
/// Equality, ordering and hashing only look at the entries.
#[derive(Debug, Clone)]
pub struct IndexTuple {
    entries: Vec<usize>,
    bound: Option<usize>,
}

impl IndexTuple {
    pub fn new(entries: Vec<usize>, bound: Option<usize>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::input(format!(
                "index tuple {entries:?} is not strictly increasing"
            )));
        }
        if let (Some(n), Some(&last)) = (bound, entries.last()) {
            if last > n {
                return Err(CoreError::input(format!(
                    "index tuple {entries:?} exceeds bound {n}"
                )));
            }
        }
        Ok(IndexTuple { entries, bound })
    }

    pub fn unbounded(entries: Vec<usize>) -> Result<Self> {
        Self::new(entries, None)
    }

    pub fn bounded(entries: Vec<usize>, n: usize) -> Result<Self> {
        Self::new(entries, Some(n))
    }

    /// `(0, 1, …, p-1)`, the unique tuple of level 0.
    pub fn identity(p: usize) -> Self {
        IndexTuple {
            entries: (0..p).collect(),
            bound: None,
        }
    }

    pub(crate) fn from_sorted_unchecked(entries: Vec<usize>, bound: Option<usize>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0] < w[1]));
        IndexTuple { entries, bound }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.entries.binary_search(&j).is_ok()
    }

    /// `Σ i_k − p(p−1)/2`, which equals the size of the associated Young diagram.
    pub fn level(&self) -> usize {
        let p = self.entries.len();
        self.entries.iter().sum::<usize>() - p * p.saturating_sub(1) / 2
    }

    /// Comma-joined entries, used as a stable map key in JSON output.
    pub fn key(&self) -> String {
        self.entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl PartialEq for IndexTuple {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for IndexTuple {}

impl Hash for IndexTuple {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl PartialOrd for IndexTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl Serialize for IndexTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<usize>::deserialize(deserializer)?;
        IndexTuple::unbounded(entries).map_err(serde::de::Error::custom)
    }
}

/// Row of `n+1` boxes holding `p` balls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MayaDiagram {
    boxes: Vec<bool>,
}

impl MayaDiagram {
    pub fn from_tuple(sigma: &IndexTuple, n: usize) -> Result<Self> {
        if sigma.entries.last().is_some_and(|&last| last > n) {
            return Err(CoreError::input(format!("{sigma} does not fit in {} boxes", n + 1)));
        }
        let mut boxes = vec![false; n + 1];
        for &i in &sigma.entries {
            boxes[i] = true;
        }
        Ok(MayaDiagram { boxes })
    }

    pub fn to_tuple(&self) -> IndexTuple {
        let entries = self
            .boxes
            .iter()
            .enumerate()
            .filter_map(|(i, &ball)| ball.then_some(i))
            .collect();
        IndexTuple::from_sorted_unchecked(entries, Some(self.boxes.len().saturating_sub(1)))
    }

    pub fn boxes(&self) -> &[bool] {
        &self.boxes
    }

    pub fn ball_count(&self) -> usize {
        self.boxes.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for MayaDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &ball in &self.boxes {
            f.write_str(if ball { "o" } else { "." })?;
        }
        Ok(())
    }
}

impl FromStr for MayaDiagram {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let boxes = s
            .chars()
            .map(|c| match c {
                'o' => Ok(true),
                '.' => Ok(false),
                other => Err(CoreError::input(format!("unexpected Maya character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if boxes.is_empty() {
            return Err(CoreError::input("empty Maya diagram"));
        }
        Ok(MayaDiagram { boxes })
    }
}

/// Partition with weakly decreasing parts; trailing zeros are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CoreError::input(format!("parts {parts:?} are not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(YoungDiagram { parts })
    }

    pub fn empty() -> Self {
        YoungDiagram::default()
    }

    /// `[cols^rows]`.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if cols == 0 {
            return YoungDiagram::empty();
        }
        YoungDiagram {
            parts: vec![cols; rows],
        }
    }

    pub(crate) fn from_parts_unchecked(mut parts: Vec<usize>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        YoungDiagram { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i`, zero past the last nonzero row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.parts.len() <= rows && self.part(0) <= cols
    }

    /// Cells as 0-based `(row, col)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    /// Length of column `c` (0-based).
    pub fn column_len(&self, c: usize) -> usize {
        self.parts.iter().take_while(|&&len| len > c).count()
    }

    /// Hook length of the 0-based cell `(r, c)`.
    pub fn hook(&self, r: usize, c: usize) -> usize {
        (self.parts[r] - c - 1) + (self.column_len(c) - r - 1) + 1
    }

    /// Rows whose last cell can be removed leaving a partition.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&r| self.part(r) > self.part(r + 1))
            .collect()
    }

    /// Rows where a cell can be added while staying inside `rows × cols`.
    pub fn addable_rows(&self, rows: usize, cols: usize) -> Vec<usize> {
        (0..rows.min(self.parts.len() + 1))
            .filter(|&r| {
                let len = self.part(r);
                len < cols && (r == 0 || self.part(r - 1) > len)
            })
            .collect()
    }

    pub fn remove_from_row(&self, r: usize) -> Self {
        let mut parts = self.parts.clone();
        parts[r] -= 1;
        YoungDiagram::from_parts_unchecked(parts)
    }

    pub fn add_to_row(&self, r: usize) -> Self {
        let mut parts = self.parts.clone();
        if r == parts.len() {
            parts.push(0);
        }
        parts[r] += 1;
        YoungDiagram::from_parts_unchecked(parts)
    }

    pub fn contains(&self, other: &YoungDiagram) -> bool {
        other.parts.len() <= self.parts.len()
            && other.parts.iter().enumerate().all(|(i, &l)| l <= self.parts[i])
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for YoungDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for YoungDiagram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        YoungDiagram::new(parts).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_dims(n: usize, p: usize) -> Result<()> {
    if p == 0 || p > n + 1 {
        return Err(CoreError::input(format!("need 1 <= p <= n+1, got n={n}, p={p}")));
    }
    Ok(())
}

fn check_tuple(sigma: &IndexTuple, p: usize, n: usize) -> Result<()> {
    check_dims(n, p)?;
    if sigma.len() != p {
        return Err(CoreError::input(format!("{sigma} has length {}, expected {p}", sigma.len())));
    }
    if sigma.entries.last().is_some_and(|&last| last > n) {
        return Err(CoreError::input(format!("{sigma} exceeds bound {n}")));
    }
    Ok(())
}

fn check_fits(lambda: &YoungDiagram, p: usize, n: usize) -> Result<()> {
    check_dims(n, p)?;
    if !lambda.fits(p, n + 1 - p) {
        return Err(CoreError::input(format!(
            "{lambda} does not fit in the {p}×{} rectangle",
            n + 1 - p
        )));
    }
    Ok(())
}

/// `λ(σ) = (i_{p−1} − p + 1, …, i_1 − 1, i_0)`.
pub fn maya_to_young(sigma: &IndexTuple, p: usize, n: usize) -> Result<YoungDiagram> {
    check_tuple(sigma, p, n)?;
    Ok(young_of_tuple(sigma))
}

/// [`maya_to_young`] without the rectangle check, for unbounded tuples.
pub fn young_of_tuple(sigma: &IndexTuple) -> YoungDiagram {
    let p = sigma.len();
    let parts = (0..p).map(|r| sigma.entries[p - 1 - r] - (p - 1 - r)).collect();
    YoungDiagram::from_parts_unchecked(parts)
}

/// Inverse of [`maya_to_young`]: `i_k = λ_{p−1−k} + k`.
pub fn young_to_maya(lambda: &YoungDiagram, p: usize, n: usize) -> Result<IndexTuple> {
    check_fits(lambda, p, n)?;
    Ok(IndexTuple::from_sorted_unchecked(tuple_entries(lambda, p), Some(n)))
}

fn tuple_entries(lambda: &YoungDiagram, p: usize) -> Vec<usize> {
    (0..p).map(|k| lambda.part(p - 1 - k) + k).collect()
}

/// Tuple of a diagram with at most `p` rows, with no upper bound on entries.
pub fn tuple_of_young(lambda: &YoungDiagram, p: usize) -> Result<IndexTuple> {
    if lambda.rows() > p {
        return Err(CoreError::input(format!("{lambda} has more than {p} rows")));
    }
    Ok(IndexTuple::from_sorted_unchecked(tuple_entries(lambda, p), None))
}

/// Complement of `λ` in the `p × (n−p+1)` rectangle, rotated by 180°.
pub fn complement(lambda: &YoungDiagram, p: usize, n: usize) -> Result<YoungDiagram> {
    check_fits(lambda, p, n)?;
    let cols = n + 1 - p;
    let parts = (0..p).map(|i| cols - lambda.part(p - 1 - i)).collect();
    Ok(YoungDiagram::from_parts_unchecked(parts))
}

/// `q = p(n−p+1)`, the top level (and the Grassmannian dimension).
pub fn top_level(n: usize, p: usize) -> usize {
    p * (n + 1 - p)
}

/// Partitions of `s` with at most `max_parts` parts, each at most `max_part`,
/// in reverse lexicographic order.
pub fn bounded_partitions(s: usize, max_parts: usize, max_part: usize) -> Vec<YoungDiagram> {
    fn rec(
        remaining: usize,
        slots: usize,
        cap: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<YoungDiagram>,
    ) {
        if remaining == 0 {
            out.push(YoungDiagram::from_parts_unchecked(current.clone()));
            return;
        }
        if slots == 0 || remaining > slots * cap {
            return;
        }
        for part in (1..=cap.min(remaining)).rev() {
            current.push(part);
            rec(remaining - part, slots - 1, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, max_parts, max_part, &mut Vec::new(), &mut out);
    out
}

/// Tuples of level `s`; errors when `s > p(n−p+1)`.
pub fn graded_level(n: usize, p: usize, s: usize) -> Result<Vec<IndexTuple>> {
    check_dims(n, p)?;
    let q = top_level(n, p);
    if s > q {
        return Err(CoreError::input(format!("level {s} exceeds top level {q}")));
    }
    Ok(graded_level_permissive(n, p, s))
}

/// Like [`graded_level`] but returns an empty set past the top level.
pub fn graded_level_permissive(n: usize, p: usize, s: usize) -> Vec<IndexTuple> {
    if p == 0 || p > n + 1 {
        return Vec::new();
    }
    let mut out: Vec<IndexTuple> = bounded_partitions(s, p, n + 1 - p)
        .iter()
        .map(|lambda| IndexTuple::from_sorted_unchecked(tuple_entries(lambda, p), Some(n)))
        .collect();
    out.sort();
    out
}

/// Every tuple in `binom([n+1], p)`, grouped by level.
pub fn all_levels(n: usize, p: usize) -> Result<Vec<Vec<IndexTuple>>> {
    check_dims(n, p)?;
    Ok((0..=top_level(n, p))
        .map(|s| graded_level_permissive(n, p, s))
        .collect())
}

/// Unrestricted partition function `p(s)` by the standard coin DP.
pub fn partition_count(s: usize) -> u128 {
    let mut ways = vec![0u128; s + 1];
    ways[0] = 1;
    for part in 1..=s {
        for total in part..=s {
            ways[total] += ways[total - part];
        }
    }
    ways[s]
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelCountBound {
    pub count: u128,
    pub partition_value: u128,
    pub equality_holds: bool,
    /// Whether `equality_holds ⇔ s ≤ min(n−p+1, p)` is borne out.
    pub iff_condition_holds: bool,
}

pub fn level_count_bound(n: usize, p: usize, s: usize) -> Result<LevelCountBound> {
    check_dims(n, p)?;
    let count = graded_level_permissive(n, p, s).len() as u128;
    let partition_value = partition_count(s);
    let equality_holds = count == partition_value;
    let predicted = s <= (n + 1 - p).min(p);
    Ok(LevelCountBound {
        count,
        partition_value,
        equality_holds,
        iff_condition_holds: equality_holds == predicted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightedLevelSum {
    pub sum: u128,
    pub closed_form: u128,
}

impl WeightedLevelSum {
    pub fn holds(&self) -> bool {
        self.sum == self.closed_form
    }
}

/// `Σ_s s·#level(s)` against `p(n−p+1)/2 · C(n+1, p)`.
pub fn weighted_level_sum(n: usize, p: usize) -> Result<WeightedLevelSum> {
    if p == 0 || p > n {
        return Err(CoreError::input(format!("need 1 <= p <= n, got n={n}, p={p}")));
    }
    let q = top_level(n, p);
    let sum = (1..=q)
        .map(|s| s as u128 * graded_level_permissive(n, p, s).len() as u128)
        .sum();
    Ok(WeightedLevelSum {
        sum,
        closed_form: q as u128 * binomial(n + 1, p) / 2,
    })
}
