//! The diagonal profile `k ↦ n_λ(k)` of a Young diagram drawn in Russian
//! convention with its peak over `x = p`, computed two ways: by counting
//! cells per diagonal, and by the ball placement on a row of `n` boxes.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::diagrams::{check_dims, maya_to_young, IndexTuple, YoungDiagram};
use crate::error::{CoreError, Result};

/// Sparse map `k ↦ n_λ(k)` for `1 ≤ k ≤ n`; zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileVector {
    anchor: usize,
    n: usize,
    values: BTreeMap<usize, u64>,
}

impl ProfileVector {
    fn zero(anchor: usize, n: usize) -> Self {
        ProfileVector {
            anchor,
            n,
            values: BTreeMap::new(),
        }
    }

    fn bump(&mut self, k: usize) {
        *self.values.entry(k).or_insert(0) += 1;
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize) -> u64 {
        self.values.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Dense `[n_λ(1), …, n_λ(n)]`.
    pub fn dense(&self) -> Vec<u64> {
        (1..=self.n).map(|k| self.get(k)).collect()
    }

    pub fn mass(&self) -> u64 {
        self.values.values().sum()
    }

    pub fn support(&self) -> Option<(usize, usize)> {
        Some((*self.values.keys().next()?, *self.values.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

impl Serialize for ProfileVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

/// Stationary indices `v_1, …, v_n` of a curve at a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StationaryVector {
    v: Vec<i64>,
}

impl StationaryVector {
    pub fn new(v: Vec<i64>) -> Result<Self> {
        if v.iter().any(|&x| x < 0) {
            return Err(CoreError::input("stationary indices must be non-negative"));
        }
        Ok(StationaryVector { v })
    }

    pub fn ones(n: usize) -> Self {
        StationaryVector { v: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    /// `v_k`, 1-based.
    pub fn get(&self, k: usize) -> i64 {
        self.v[k - 1]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.v
    }
}

/// Diagonal index of the 0-based cell `(r, c)`: `p − (r+1) + (c+1)`.
pub fn diagonal(p: usize, r: usize, c: usize) -> usize {
    p + c - r
}

/// Cell-wise count: the vertical line `x = k` crosses exactly the cells on diagonal `k`.
pub fn profile_geometric(lambda: &YoungDiagram, p: usize, n: usize) -> Result<ProfileVector> {
    check_dims(n, p)?;
    if !lambda.fits(p, n + 1 - p) {
        return Err(CoreError::input(format!(
            "{lambda} does not fit in the {p}×{} rectangle",
            n + 1 - p
        )));
    }
    let mut profile = ProfileVector::zero(p, n);
    for (r, c) in lambda.cells() {
        profile.bump(diagonal(p, r, c));
    }
    Ok(profile)
}

/// Ball placement: for each `k`, one ball in each of boxes `k+1, …, i_k`.
pub fn profile_balls(sigma: &IndexTuple, p: usize, n: usize) -> Result<ProfileVector> {
    // reuse the tuple checks
    maya_to_young(sigma, p, n)?;
    let mut profile = ProfileVector::zero(p, n);
    for (k, &ik) in sigma.entries().iter().enumerate() {
        for m in k + 1..=ik {
            profile.bump(m);
        }
    }
    Ok(profile)
}

/// `φ_p(λ) = Σ_k n_λ(k) v_k`.
pub fn phi(lambda: &YoungDiagram, p: usize, n: usize, v: &StationaryVector) -> Result<i64> {
    if v.len() != n {
        return Err(CoreError::input(format!(
            "stationary vector has length {}, expected {n}",
            v.len()
        )));
    }
    let profile = profile_geometric(lambda, p, n)?;
    Ok(profile.iter().map(|(k, m)| m as i64 * v.get(k)).sum())
}

/// Splits `λ` into its hooks along the main diagonal; hook `j` is row `j` from
/// column `j` plus column `j` below row `j`. Returns each hook's profile.
pub fn hook_profiles(lambda: &YoungDiagram, p: usize, n: usize) -> Result<Vec<ProfileVector>> {
    profile_geometric(lambda, p, n)?;
    let thickness = (0..lambda.rows()).take_while(|&j| lambda.part(j) > j).count();
    let hooks = (0..thickness)
        .map(|j| {
            let mut profile = ProfileVector::zero(p, n);
            for c in j..lambda.part(j) {
                profile.bump(diagonal(p, j, c));
            }
            for r in j + 1..lambda.column_len(j) {
                profile.bump(diagonal(p, r, j));
            }
            profile
        })
        .collect();
    Ok(hooks)
}
