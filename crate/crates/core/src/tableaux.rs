//! Standard Young tableaux: counting by hook lengths, by corner removal, and
//! by explicit enumeration; maximal chains in the finite Young lattice of the
//! `p × (n−p+1)` rectangle; and the edge sums and tableau profile sums of
//! that lattice with their closed forms.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::caps;
use crate::diagrams::{all_levels, complement, maya_to_young, top_level, YoungDiagram};
use crate::error::{CoreError, Result};
use crate::profile::diagonal;

/// A filling of `shape` by `1..=|shape|`, increasing along rows and down columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StandardTableau {
    shape: YoungDiagram,
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = YoungDiagram::new(rows.iter().map(Vec::len).collect())?;
        let size = shape.size();
        let mut seen = vec![false; size + 1];
        for (r, row) in rows.iter().enumerate() {
            for (c, &label) in row.iter().enumerate() {
                if label == 0 || label > size || seen[label] {
                    return Err(CoreError::input(format!("label {label} repeated or out of range")));
                }
                seen[label] = true;
                if c > 0 && row[c - 1] >= label {
                    return Err(CoreError::input(format!("row {r} is not increasing")));
                }
                if r > 0 && rows[r - 1][c] >= label {
                    return Err(CoreError::input(format!("column {c} is not increasing")));
                }
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &YoungDiagram {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Entry at the 0-based cell `(r, c)`.
    pub fn entry(&self, r: usize, c: usize) -> usize {
        self.rows[r][c]
    }

    /// Sum of entries on diagonal `k` (the tableau analogue of `n_λ(k)`).
    pub fn diagonal_sum(&self, p: usize, k: usize) -> u64 {
        self.shape
            .cells()
            .filter(|&(r, c)| diagonal(p, r, c) == k)
            .map(|(r, c)| self.rows[r][c] as u64)
            .sum()
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        f.write_str(&rows.join(" / "))
    }
}

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `f_λ = |λ|! / Π h(i,j)`.
pub fn f_hook(lambda: &YoungDiagram) -> BigUint {
    let hooks = lambda
        .cells()
        .fold(BigUint::one(), |acc, (r, c)| acc * BigUint::from(lambda.hook(r, c)));
    factorial(lambda.size()) / hooks
}

fn recursion_cache() -> &'static Mutex<HashMap<Vec<usize>, BigUint>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<usize>, BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `f_λ = Σ_{removable corners} f_{λ − corner}`, memoized across calls and threads.
pub fn f_recursive(lambda: &YoungDiagram) -> BigUint {
    if lambda.is_empty() {
        return BigUint::one();
    }
    let key = lambda.parts().to_vec();
    if let Some(hit) = recursion_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    // computed outside the lock; a racing thread can only insert the same value
    let value = lambda
        .removable_rows()
        .into_iter()
        .map(|r| f_recursive(&lambda.remove_from_row(r)))
        .sum::<BigUint>();
    recursion_cache().lock().unwrap().insert(key, value.clone());
    value
}

/// Every standard tableau of shape `λ`, within the cell cap from [`caps::syt_cells`].
pub fn enumerate_syt(lambda: &YoungDiagram) -> Result<Vec<StandardTableau>> {
    enumerate_syt_capped(lambda, caps::syt_cells())
}

pub fn enumerate_syt_capped(lambda: &YoungDiagram, cap: usize) -> Result<Vec<StandardTableau>> {
    let size = lambda.size();
    if size > cap {
        return Err(CoreError::Resource {
            what: "tableau enumeration cells",
            needed: size as u128,
            cap: cap as u128,
        });
    }
    fn place(
        lambda: &YoungDiagram,
        label: usize,
        rows: &mut Vec<Vec<usize>>,
        out: &mut Vec<StandardTableau>,
    ) {
        if label > lambda.size() {
            out.push(StandardTableau {
                shape: lambda.clone(),
                rows: rows.clone(),
            });
            return;
        }
        for r in 0..rows.len() {
            let len = rows[r].len();
            if len < lambda.part(r) && (r == 0 || rows[r - 1].len() > len) {
                rows[r].push(label);
                place(lambda, label + 1, rows, out);
                rows[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    place(lambda, 1, &mut vec![Vec::new(); lambda.rows()], &mut out);
    Ok(out)
}

/// Number of maximal chains `∅ → [(n−p+1)^p]` through `λ`, i.e. `f_λ · f_λ̂`.
pub fn chains_through(lambda: &YoungDiagram, p: usize, n: usize) -> Result<BigUint> {
    let hat = complement(lambda, p, n)?;
    Ok(f_hook(lambda) * f_hook(&hat))
}

/// Walks every maximal chain of the rectangle's Young lattice and tallies,
/// for each diagram, how many chains visit it. Capped by rectangle area.
pub fn chain_multiplicities(p: usize, n: usize) -> Result<HashMap<YoungDiagram, u64>> {
    crate::diagrams::check_dims(n, p)?;
    let cols = n + 1 - p;
    let area = p * cols;
    let cap = caps::chain_area();
    if area > cap {
        return Err(CoreError::Resource {
            what: "chain enumeration area",
            needed: area as u128,
            cap: cap as u128,
        });
    }
    fn walk(
        current: &YoungDiagram,
        path: &mut Vec<YoungDiagram>,
        rows: usize,
        cols: usize,
        tally: &mut HashMap<YoungDiagram, u64>,
    ) {
        let next = current.addable_rows(rows, cols);
        if next.is_empty() {
            for shape in path.iter() {
                *tally.entry(shape.clone()).or_insert(0) += 1;
            }
            return;
        }
        for r in next {
            let grown = current.add_to_row(r);
            path.push(grown.clone());
            walk(&grown, path, rows, cols, tally);
            path.pop();
        }
    }
    let mut tally = HashMap::new();
    let start = YoungDiagram::empty();
    walk(&start, &mut vec![start.clone()], p, cols, &mut tally);
    Ok(tally)
}

/// Which boxes of the Maya diagram an edge sum ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Tuples with box `j+1` empty (`j ∉ σ`).
    EmptyBox,
    /// Tuples with a ball in box `j+1` (`j ∈ σ`).
    Ball,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::EmptyBox => "empty_box",
            Side::Ball => "ball",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSum {
    pub j: usize,
    pub side: Side,
    pub value: BigUint,
    /// `(n−p+1)(q+1)/(n+1)·f_rect` or `p(q+1)/(n+1)·f_rect`.
    pub closed_form: BigRational,
    /// `f_[(n−p+1)^p, 1]` or `f_[n−p+2, (n−p+1)^{p−1}]`.
    pub extended_shape_count: BigUint,
}

impl EdgeSum {
    pub fn holds(&self) -> bool {
        let value = BigRational::from_integer(BigInt::from(self.value.clone()));
        value == self.closed_form && self.value == self.extended_shape_count
    }
}

pub(crate) fn rational(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn check_p_le_n(n: usize, p: usize) -> Result<()> {
    if p == 0 || p > n {
        return Err(CoreError::input(format!("need 1 <= p <= n, got n={n}, p={p}")));
    }
    Ok(())
}

/// `Σ f_{λ(σ)} f_{λ̂(σ)}` over tuples with `j ∉ σ` (empty side) or `j ∈ σ` (ball side).
pub fn edge_sum(j: usize, side: Side, p: usize, n: usize) -> Result<EdgeSum> {
    check_p_le_n(n, p)?;
    if j > n {
        return Err(CoreError::input(format!("j={j} outside 0..={n}")));
    }
    let mut value = BigUint::zero();
    for level in all_levels(n, p)? {
        for sigma in level {
            if sigma.contains(j) == (side == Side::Ball) {
                let lambda = maya_to_young(&sigma, p, n)?;
                value += chains_through(&lambda, p, n)?;
            }
        }
    }
    let cols = n + 1 - p;
    let q = top_level(n, p);
    let f_rect = rational(&f_hook(&YoungDiagram::rectangle(p, cols)));
    let (closed_form, extended) = match side {
        Side::EmptyBox => {
            let mut parts = vec![cols; p];
            parts.push(1);
            (ratio(cols * (q + 1), n + 1) * f_rect, parts)
        }
        Side::Ball => {
            let mut parts = vec![cols; p];
            parts[0] += 1;
            (ratio(p * (q + 1), n + 1) * f_rect, parts)
        }
    };
    let extended_shape_count = f_hook(&YoungDiagram::new(extended)?);
    Ok(EdgeSum {
        j,
        side,
        value,
        closed_form,
        extended_shape_count,
    })
}

/// Edge sums for every `0 ≤ j ≤ n` on one side.
pub fn edge_sum_sweep(side: Side, p: usize, n: usize) -> Result<Vec<EdgeSum>> {
    (0..=n).map(|j| edge_sum(j, side, p, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauProfileSum {
    pub k: usize,
    /// `Σ_T n_T(k)` over enumerated tableaux; `None` past the enumeration cap.
    pub enumerated: Option<BigUint>,
    pub closed_form: BigRational,
}

impl TableauProfileSum {
    pub fn verified(&self) -> bool {
        self.enumerated
            .as_ref()
            .is_some_and(|v| rational(v) == self.closed_form)
    }
}

/// Closed form of `Σ_T n_T(k)` over tableaux of the full rectangle.
pub fn tableau_profile_closed_form(k: usize, p: usize, n: usize) -> Result<BigRational> {
    check_p_le_n(n, p)?;
    if k == 0 || k > n {
        return Err(CoreError::input(format!("k={k} outside 1..={n}")));
    }
    let cols = n + 1 - p;
    let q = top_level(n, p);
    let f_rect = rational(&f_hook(&YoungDiagram::rectangle(p, cols)));
    Ok(if k <= cols {
        ratio(p * (q + 1) * k, n + 1) * f_rect
    } else {
        ratio(cols * (q + 1) * (n + 1 - k), n + 1) * f_rect
    })
}

pub fn tableau_profile_sum(k: usize, p: usize, n: usize) -> Result<TableauProfileSum> {
    let closed_form = tableau_profile_closed_form(k, p, n)?;
    let rect = YoungDiagram::rectangle(p, n + 1 - p);
    let enumerated = match enumerate_syt(&rect) {
        Ok(all) => Some(all.iter().map(|t| BigUint::from(t.diagonal_sum(p, k))).sum()),
        Err(CoreError::Resource { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TableauProfileSum {
        k,
        enumerated,
        closed_form,
    })
}
