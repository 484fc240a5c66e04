//! Balanced sums over the Grassmannian lattice: for a sequence `a_0..a_{n+1}`
//! with vanishing ends,
//! `Σ_σ ( Σ_k n_λ(σ)(k)(a_{k−1} − 2a_k + a_{k+1}) + a_p ) = 0`,
//! its weighted form with `f_λ f_λ̂`, the coefficient identity behind it, the
//! free-top variant, and the degree formulas it yields for algebraic curves.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng as _;
use serde::Serialize;

use crate::diagrams::{all_levels, binomial, check_dims, complement, maya_to_young, IndexTuple};
use crate::error::{CoreError, Result};
use crate::poly::{format_rational, int};
use crate::profile::profile_geometric;
use crate::random::Rng;
use crate::tableaux::{chain_multiplicities, f_hook};

/// Float residuals below this (relative to the term magnitudes) count as zero.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Arithmetic the sums are evaluated in: exact rationals, or doubles with a tolerance.
pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn from_int(x: i64) -> Self;
    fn from_big(x: &BigUint) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn magnitude(&self) -> f64;
    /// Whether `self` is zero, given the size of the terms that produced it.
    fn vanishes(&self, scale: f64) -> bool;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_int(x: i64) -> Self {
        int(x)
    }

    fn from_big(x: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(x.clone()))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn vanishes(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn from_int(x: i64) -> Self {
        x as f64
    }

    fn from_big(x: &BigUint) -> Self {
        x.to_f64().unwrap_or(f64::INFINITY)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn vanishes(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_TOLERANCE * scale.max(1.0)
    }
}

/// `a_0, …, a_{n+1}` with `a_0 = a_{n+1} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySequence<S: Scalar> {
    a: Vec<S>,
}

impl<S: Scalar> BoundarySequence<S> {
    pub fn new(a: Vec<S>) -> Result<Self> {
        if a.len() < 3 {
            return Err(CoreError::input("sequence needs at least a_0, a_1, a_2"));
        }
        if a[0] != S::zero() || a[a.len() - 1] != S::zero() {
            return Err(CoreError::input("sequence must vanish at both ends"));
        }
        Ok(BoundarySequence { a })
    }

    /// Pads `a_1..a_n` with zero ends.
    pub fn from_interior(interior: Vec<S>) -> Result<Self> {
        let mut a = Vec::with_capacity(interior.len() + 2);
        a.push(S::zero());
        a.extend(interior);
        a.push(S::zero());
        Self::new(a)
    }

    pub fn n(&self) -> usize {
        self.a.len() - 2
    }

    pub fn values(&self) -> &[S] {
        &self.a
    }
}

/// `ā_0, …, ā_{n+1}` with `ā_0 = 0` and the top entry unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeTopSequence<S: Scalar> {
    a: Vec<S>,
}

impl<S: Scalar> FreeTopSequence<S> {
    pub fn new(a: Vec<S>) -> Result<Self> {
        if a.len() < 3 {
            return Err(CoreError::input("sequence needs at least three entries"));
        }
        if a[0] != S::zero() {
            return Err(CoreError::input("sequence must vanish at index 0"));
        }
        Ok(FreeTopSequence { a })
    }

    pub fn n(&self) -> usize {
        self.a.len() - 2
    }

    pub fn values(&self) -> &[S] {
        &self.a
    }
}

/// `a_{k−1} − 2a_k + a_{k+1}` for `k = 1..=n`, index `k − 1`.
fn second_differences<S: Scalar>(a: &[S]) -> Vec<S> {
    a.windows(3)
        .map(|w| w[0].sub(&w[1]).sub(&w[1]).add(&w[2]))
        .collect()
}

struct Cell {
    sigma: IndexTuple,
    profile: Vec<u64>,
    weight: BigUint,
}

/// The lattice of one `(n, p)`: every tuple with its profile and `f_λ f_λ̂`.
pub struct Lattice {
    n: usize,
    p: usize,
    cells: Vec<Cell>,
}

impl Lattice {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        check_dims(n, p)?;
        if p > n {
            return Err(CoreError::input(format!("need 1 ≤ p ≤ n, got p = {p}, n = {n}")));
        }
        let mut cells = Vec::new();
        for level in all_levels(n, p)? {
            for sigma in level {
                let lambda = maya_to_young(&sigma, p, n)?;
                let profile = profile_geometric(&lambda, p, n)?.dense();
                let weight = f_hook(&lambda) * f_hook(&complement(&lambda, p, n)?);
                cells.push(Cell { sigma, profile, weight });
            }
        }
        Ok(Lattice { n, p, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n + 2 {
            return Err(CoreError::input(format!(
                "sequence has {len} entries, expected n + 2 = {}",
                self.n + 2
            )));
        }
        Ok(())
    }

    /// `Σ_k n(k) Δ²a_k` for one tuple.
    fn profile_term<S: Scalar>(cell: &Cell, d2: &[S]) -> S {
        cell.profile
            .iter()
            .zip(d2)
            .filter(|(m, _)| **m > 0)
            .fold(S::zero(), |acc, (&m, d)| acc.add(&S::from_int(m as i64).mul(d)))
    }

    fn summand<S: Scalar>(cell: &Cell, d2: &[S], a: &[S], p: usize) -> S {
        Self::profile_term(cell, d2).add(&a[p])
    }

    pub fn balanced_sum<S: Scalar>(&self, a: &BoundarySequence<S>) -> Result<Residual<S>> {
        self.check_len(a.a.len())?;
        let d2 = second_differences(&a.a);
        let mut value = S::zero();
        let mut scale = 0.0;
        for cell in &self.cells {
            let term = Self::summand(cell, &d2, &a.a, self.p);
            scale += term.magnitude();
            value = value.add(&term);
        }
        Ok(Residual { value, scale })
    }

    /// `α_k = Σ_σ n_λ(σ)(k)`, accumulated from the profiles.
    pub fn extracted_alpha(&self) -> Vec<u64> {
        let mut alpha = vec![0u64; self.n];
        for cell in &self.cells {
            for (acc, m) in alpha.iter_mut().zip(&cell.profile) {
                *acc += m;
            }
        }
        alpha
    }

    pub fn weighted_sum<S: Scalar>(&self, a: &BoundarySequence<S>) -> Result<Residual<S>> {
        self.check_len(a.a.len())?;
        let d2 = second_differences(&a.a);
        let mut value = S::zero();
        let mut scale = 0.0;
        for cell in &self.cells {
            let term = S::from_big(&cell.weight).mul(&Self::summand(cell, &d2, &a.a, self.p));
            scale += term.magnitude();
            value = value.add(&term);
        }
        Ok(Residual { value, scale })
    }

    /// The weighted sum evaluated chain by chain: each tuple counted once per
    /// maximal chain of the rectangle passing through it, by brute-force walk.
    pub fn chain_sum<S: Scalar>(&self, a: &BoundarySequence<S>) -> Result<Residual<S>> {
        self.check_len(a.a.len())?;
        let counts = chain_multiplicities(self.p, self.n)?;
        let d2 = second_differences(&a.a);
        let mut value = S::zero();
        let mut scale = 0.0;
        for cell in &self.cells {
            let lambda = maya_to_young(&cell.sigma, self.p, self.n)?;
            let visits = counts.get(&lambda).copied().unwrap_or(0);
            let term = S::from_int(visits as i64).mul(&Self::summand(cell, &d2, &a.a, self.p));
            scale += term.magnitude();
            value = value.add(&term);
        }
        Ok(Residual { value, scale })
    }

    /// `Σ_σ Σ_k n(k) Δ²ā_k − (−C(n+1,p) ā_p + C(n,p−1) ā_{n+1})`.
    pub fn second_diff_sum<S: Scalar>(&self, a: &FreeTopSequence<S>) -> Result<Residual<S>> {
        self.check_len(a.a.len())?;
        let d2 = second_differences(&a.a);
        let mut lhs = S::zero();
        let mut scale = 0.0;
        for cell in &self.cells {
            let term = Self::profile_term(cell, &d2);
            scale += term.magnitude();
            lhs = lhs.add(&term);
        }
        let (n, p) = (self.n, self.p);
        let rhs = S::from_int(binomial(n, p - 1) as i64)
            .mul(&a.a[n + 1])
            .sub(&S::from_int(binomial(n + 1, p) as i64).mul(&a.a[p]));
        scale += rhs.magnitude();
        Ok(Residual {
            value: lhs.sub(&rhs),
            scale,
        })
    }

    /// Tuples avoiding and containing each `j`; both are independent of `j`.
    pub fn edge_class_counts(&self) -> Vec<EdgeClassCount> {
        (0..=self.n)
            .map(|j| {
                let containing = self.cells.iter().filter(|c| c.sigma.contains(j)).count() as u128;
                EdgeClassCount {
                    j,
                    avoiding: self.cells.len() as u128 - containing,
                    containing,
                    expected_avoiding: binomial(self.n, self.p),
                    expected_containing: binomial(self.n, self.p - 1),
                }
            })
            .collect()
    }

    /// Per tuple, the profile term against the box form
    /// `Σ_{j<p, j∉σ}(a_j − a_{j+1}) + Σ_{k≥p, k∈σ}(a_{k+1} − a_k)`.
    pub fn box_form_mismatches<S: Scalar>(&self, a: &BoundarySequence<S>) -> Result<usize> {
        self.check_len(a.a.len())?;
        let d2 = second_differences(&a.a);
        let mut bad = 0;
        for cell in &self.cells {
            let mut boxes = S::zero();
            for j in 0..=self.n {
                let inside = cell.sigma.contains(j);
                if j < self.p && !inside {
                    boxes = boxes.add(&a.a[j].sub(&a.a[j + 1]));
                } else if j >= self.p && inside {
                    boxes = boxes.add(&a.a[j + 1].sub(&a.a[j]));
                }
            }
            let direct: S = Self::profile_term(cell, &d2);
            if !direct.sub(&boxes).vanishes(direct.magnitude() + boxes.magnitude()) {
                bad += 1;
            }
        }
        Ok(bad)
    }
}

/// A computed sum that should vanish, with the total size of its terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<S: Scalar> {
    pub value: S,
    pub scale: f64,
}

impl<S: Scalar> Residual<S> {
    pub fn vanishes(&self) -> bool {
        self.value.vanishes(self.scale)
    }

    pub fn abs(&self) -> f64 {
        self.value.magnitude()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeClassCount {
    pub j: usize,
    pub avoiding: u128,
    pub containing: u128,
    pub expected_avoiding: u128,
    pub expected_containing: u128,
}

impl EdgeClassCount {
    pub fn holds(&self) -> bool {
        self.avoiding == self.expected_avoiding && self.containing == self.expected_containing
    }
}

pub fn balanced_sum<S: Scalar>(a: &BoundarySequence<S>, p: usize) -> Result<Residual<S>> {
    Lattice::new(a.n(), p)?.balanced_sum(a)
}

/// `C(n,p)k` for `k ≤ p`, `C(n,p−1)(n+1−k)` for `k ≥ p`.
pub fn closed_alpha(n: usize, p: usize) -> Vec<u128> {
    (1..=n)
        .map(|k| {
            if k <= p {
                binomial(n, p) * k as u128
            } else {
                binomial(n, p - 1) * (n + 1 - k) as u128
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AkIdentity<S: Scalar> {
    pub extracted_alpha: Vec<u64>,
    pub closed_alpha: Vec<u128>,
    /// `Σ_k α_k Δ²a_k + C(n+1,p) a_p` with the closed coefficients.
    pub residual: Residual<S>,
}

impl<S: Scalar> AkIdentity<S> {
    pub fn holds(&self) -> bool {
        self.residual.vanishes()
            && self
                .extracted_alpha
                .iter()
                .zip(&self.closed_alpha)
                .all(|(e, c)| *e as u128 == *c)
    }
}

pub fn ak_identity_lhs<S: Scalar>(a: &BoundarySequence<S>, p: usize) -> Result<AkIdentity<S>> {
    let lattice = Lattice::new(a.n(), p)?;
    let n = a.n();
    let closed = closed_alpha(n, p);
    let d2 = second_differences(&a.a);
    let mut value = S::from_int(binomial(n + 1, p) as i64).mul(&a.a[p]);
    let mut scale = value.magnitude();
    for (alpha, d) in closed.iter().zip(&d2) {
        let term = S::from_int(*alpha as i64).mul(d);
        scale += term.magnitude();
        value = value.add(&term);
    }
    Ok(AkIdentity {
        extracted_alpha: lattice.extracted_alpha(),
        closed_alpha: closed,
        residual: Residual { value, scale },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSums<S: Scalar> {
    pub weighted: Residual<S>,
    /// `None` when the rectangle is too large to walk every chain.
    pub chain: Option<Residual<S>>,
    pub chain_skipped: Option<CoreError>,
}

impl<S: Scalar> WeightedSums<S> {
    pub fn holds(&self) -> bool {
        self.weighted.vanishes()
            && self.chain.as_ref().is_none_or(|c| {
                c.vanishes() && c.value.sub(&self.weighted.value).vanishes(c.scale + self.weighted.scale)
            })
    }
}

pub fn weighted_balanced_sum<S: Scalar>(a: &BoundarySequence<S>, p: usize) -> Result<WeightedSums<S>> {
    let lattice = Lattice::new(a.n(), p)?;
    let weighted = lattice.weighted_sum(a)?;
    let (chain, chain_skipped) = match lattice.chain_sum(a) {
        Ok(c) => (Some(c), None),
        Err(e @ CoreError::Resource { .. }) => (None, Some(e)),
        Err(e) => return Err(e),
    };
    Ok(WeightedSums {
        weighted,
        chain,
        chain_skipped,
    })
}

pub fn second_diff_sum<S: Scalar>(a: &FreeTopSequence<S>, p: usize) -> Result<Residual<S>> {
    Lattice::new(a.n(), p)?.second_diff_sum(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub p: usize,
    /// From the second-difference recursion.
    pub recursion: i64,
    /// `p(deg + (p−1)(g−1)) − Σ_{k<p}(p−k)σ_k`.
    pub genus_form: i64,
    /// `(n+1−p)/(n+1) Σ_{k≤p} kσ_k + p/(n+1) Σ_{k>p}(n+1−k)σ_k − p(n−p+1)(g−1)`;
    /// equals the others only when the ramification data are consistent.
    #[serde(serialize_with = "ser_rational")]
    pub ramification_form: BigRational,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrillSegre {
    pub n: usize,
    pub genus: i64,
    pub degree: i64,
    pub ramification: Vec<i64>,
    /// `ν_0, …, ν_{n+1}`.
    pub nu: Vec<i64>,
    /// `Σ(n−k+1)σ_k − n(n+1)(g−1) − (n+1)deg`.
    pub residual: i64,
    pub degrees: Vec<DegreeRow>,
    /// Balanced sums of `ν` for `p = 1..=n`, when `ν_{n+1} = 0`.
    #[serde(serialize_with = "ser_rationals")]
    pub balanced: Vec<BigRational>,
    pub negative_degree: bool,
}

fn ser_rationals<S: serde::Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = xs.iter().map(format_rational).collect();
    strings.serialize(s)
}

impl BrillSegre {
    /// The degree identity holds, and the formulas agree with the recursion.
    pub fn holds(&self) -> bool {
        let top = *self.nu.last().expect("nu has n + 2 entries");
        self.residual == 0
            && top == 0
            && !self.negative_degree
            && self
                .degrees
                .iter()
                .all(|d| d.recursion == d.genus_form && int(d.recursion) == d.ramification_form)
            && self.balanced.iter().all(Zero::is_zero)
    }
}

/// Rebuilds `ν_k` from `ν_0 = 0`, `ν_1 = deg` and
/// `ν_{k−1} − 2ν_k + ν_{k+1} = 2g − 2 − σ_k`, then checks the degree formulas.
pub fn brill_segre_check(genus: i64, degree: i64, ramification: &[i64], n: usize) -> Result<BrillSegre> {
    if n == 0 || ramification.len() != n {
        return Err(CoreError::input(format!(
            "need n ≥ 1 ramification indices, got {} for n = {n}",
            ramification.len()
        )));
    }
    let mut nu = vec![0i64, degree];
    for k in 1..=n {
        let next = 2 * nu[k] - nu[k - 1] + 2 * genus - 2 - ramification[k - 1];
        nu.push(next);
    }
    let nn = n as i64;
    let residual = ramification
        .iter()
        .enumerate()
        .map(|(i, s)| (nn - i as i64) * s)
        .sum::<i64>()
        - nn * (nn + 1) * (genus - 1)
        - (nn + 1) * degree;
    let degrees = (1..=n)
        .map(|p| {
            let pp = p as i64;
            let genus_form = pp * (degree + (pp - 1) * (genus - 1))
                - (1..p).map(|k| (pp - k as i64) * ramification[k - 1]).sum::<i64>();
            let low: i64 = (1..=p).map(|k| k as i64 * ramification[k - 1]).sum();
            let high: i64 = (p + 1..=n).map(|k| (nn + 1 - k as i64) * ramification[k - 1]).sum();
            let ramification_form = BigRational::new(BigInt::from((nn + 1 - pp) * low + pp * high), BigInt::from(nn + 1))
                - int(pp * (nn - pp + 1) * (genus - 1));
            DegreeRow {
                p,
                recursion: nu[p],
                genus_form,
                ramification_form,
            }
        })
        .collect();
    let negative_degree = nu.iter().any(|&v| v < 0);
    let balanced = if nu[n + 1] == 0 {
        let seq = BoundarySequence::new(nu.iter().map(|&v| int(v)).collect())?;
        let lattice_sums: Result<Vec<BigRational>> = (1..=n)
            .map(|p| Ok(balanced_sum(&seq, p)?.value))
            .collect();
        lattice_sums?
    } else {
        Vec::new()
    };
    Ok(BrillSegre {
        n,
        genus,
        degree,
        ramification: ramification.to_vec(),
        nu,
        residual,
        degrees,
        balanced,
        negative_degree,
    })
}

/// Integers in `[−100, 100]`.
pub fn random_integers(rng: &mut Rng, len: usize) -> Vec<i64> {
    (0..len).map(|_| rng.random_range(-100..=100)).collect()
}

/// Numerators in `[−100, 100]` over denominators in `[1, 10]`.
pub fn random_rationals(rng: &mut Rng, len: usize) -> Vec<BigRational> {
    (0..len)
        .map(|_| {
            let num: i64 = rng.random_range(-100..=100);
            let den: i64 = rng.random_range(1..=10);
            BigRational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect()
}

pub fn random_boundary(rng: &mut Rng, n: usize) -> BoundarySequence<BigRational> {
    BoundarySequence::from_interior(random_rationals(rng, n)).expect("ends are zero")
}

pub fn random_free_top(rng: &mut Rng, n: usize) -> FreeTopSequence<BigRational> {
    let mut a = vec![<BigRational as Zero>::zero()];
    a.extend(random_rationals(rng, n + 1));
    FreeTopSequence::new(a).expect("starts at zero")
}

/// Random genus, degree and ramification with `σ_n` solved so that `ν_{n+1} = 0`.
/// Draws that need a negative `σ_n` or give a negative `ν_k` are redrawn;
/// after enough misses only `σ_n` is kept nonzero, which is always consistent.
pub fn random_curve_data(rng: &mut Rng, n: usize) -> (i64, i64, Vec<i64>) {
    const ATTEMPTS: usize = 64;
    let genus = rng.random_range(0..=5);
    let degree = rng.random_range(n as i64..=n as i64 + 20);
    for attempt in 0..=ATTEMPTS {
        let mut ramification: Vec<i64> = if attempt < ATTEMPTS {
            (0..n.saturating_sub(1)).map(|_| rng.random_range(0..=3)).collect()
        } else {
            vec![0; n.saturating_sub(1)]
        };
        // ν_{n+1} is linear in σ_n with coefficient −1
        ramification.push(0);
        let probe = brill_segre_check(genus, degree, &ramification, n).expect("n ≥ 1");
        ramification[n - 1] = probe.nu[n + 1];
        if probe.nu[n + 1] >= 0 && !probe.nu[..=n].iter().any(|&v| v < 0) {
            return (genus, degree, ramification);
        }
    }
    unreachable!("zero ramification below the top is consistent for degree ≥ n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    Balanced,
    BalancedFloat,
    AkIdentity,
    Weighted,
    Chain,
    SecondDifference,
    BoxForm,
    BrillSegre,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::Balanced,
        Identity::BalancedFloat,
        Identity::AkIdentity,
        Identity::Weighted,
        Identity::Chain,
        Identity::SecondDifference,
        Identity::BoxForm,
        Identity::BrillSegre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Balanced => "balanced",
            Identity::BalancedFloat => "balanced-float",
            Identity::AkIdentity => "ak-identity",
            Identity::Weighted => "weighted",
            Identity::Chain => "chain",
            Identity::SecondDifference => "second-difference",
            Identity::BoxForm => "box-form",
            Identity::BrillSegre => "brill-segre",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.name() == name)
            .ok_or_else(|| CoreError::input(format!("unknown identity {name:?}")))
    }

    fn stream(self, n: usize, p: usize) -> u64 {
        ((self as u64) << 32) | ((n as u64) << 16) | p as u64
    }
}

/// Outcome of `trials` random evaluations of one identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub identity: Identity,
    pub n: usize,
    pub p: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_abs_residual: f64,
    pub failures: usize,
}

impl Verification {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// Runs `identity` on `trials` sequences drawn from its own stream of `seed`.
/// The chain form fails with a resource error past the chain-walk cap.
pub fn verify_identity(identity: Identity, n: usize, p: usize, trials: usize, seed: u64) -> Result<Verification> {
    let lattice = Lattice::new(n, p)?;
    let mut rng = crate::random::stream(seed, identity.stream(n, p));
    let mut max_abs_residual = 0f64;
    let mut failures = 0;
    let mut record = |residual: f64, ok: bool| {
        max_abs_residual = max_abs_residual.max(residual);
        failures += usize::from(!ok);
    };
    for _ in 0..trials {
        match identity {
            Identity::Balanced => {
                let r = lattice.balanced_sum(&random_boundary(&mut rng, n))?;
                record(r.abs(), r.vanishes());
            }
            Identity::BalancedFloat => {
                let exact = random_boundary(&mut rng, n);
                let floats = exact.values().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
                let r = lattice.balanced_sum(&BoundarySequence::new(floats)?)?;
                record(r.abs(), r.vanishes());
            }
            Identity::AkIdentity => {
                let ak = ak_identity_lhs(&random_boundary(&mut rng, n), p)?;
                record(ak.residual.abs(), ak.holds());
            }
            Identity::Weighted => {
                let r = lattice.weighted_sum(&random_boundary(&mut rng, n))?;
                record(r.abs(), r.vanishes());
            }
            Identity::Chain => {
                let a = random_boundary(&mut rng, n);
                let chain = lattice.chain_sum(&a)?;
                let weighted = lattice.weighted_sum(&a)?;
                let agree = chain.value == weighted.value;
                record(chain.abs(), chain.vanishes() && agree);
            }
            Identity::SecondDifference => {
                let r = lattice.second_diff_sum(&random_free_top(&mut rng, n))?;
                record(r.abs(), r.vanishes());
            }
            Identity::BoxForm => {
                let bad = lattice.box_form_mismatches(&random_boundary(&mut rng, n))?;
                record(bad as f64, bad == 0);
            }
            Identity::BrillSegre => {
                let (genus, degree, ramification) = random_curve_data(&mut rng, n);
                let check = brill_segre_check(genus, degree, &ramification, n)?;
                record(check.residual.unsigned_abs() as f64, check.holds());
            }
        }
    }
    Ok(Verification {
        identity,
        n,
        p,
        trials,
        seed,
        max_abs_residual,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::random::seeded;

    fn exact(interior: &[i64]) -> BoundarySequence<BigRational> {
        BoundarySequence::from_interior(interior.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn boundary_rules() {
        assert!(BoundarySequence::new(vec![int(0), int(1), int(1)]).is_err());
        assert!(BoundarySequence::new(vec![int(1), int(1), int(0)]).is_err());
        assert!(FreeTopSequence::new(vec![int(0), int(1), int(1)]).is_ok());
        let a = exact(&[3, 4]);
        assert!(balanced_sum(&a, 3).is_err());
        assert!(balanced_sum(&a, 0).is_err());
    }

    #[test]
    fn small_examples() {
        let a = BoundarySequence::from_interior(vec![rat(7, 3), rat(-5, 2)]).unwrap();
        assert!(balanced_sum(&a, 1).unwrap().value.is_zero());
        assert!(balanced_sum(&exact(&[0, 0, 0, 0, 0]), 2).unwrap().value.is_zero());
        let w = weighted_balanced_sum(&exact(&[0, 0, 0]), 2).unwrap();
        assert!(w.weighted.value.is_zero() && w.chain.unwrap().value.is_zero());
    }

    #[test]
    fn alpha_coefficients() {
        assert_eq!(closed_alpha(4, 2), vec![6, 12, 8, 4]);
        let id = ak_identity_lhs(&exact(&[5, -2, 9, 1]), 2).unwrap();
        assert_eq!(id.extracted_alpha, vec![6, 12, 8, 4]);
        assert!(id.holds());
        for n in 1..=8 {
            for p in 1..=n {
                assert_eq!(binomial(n, p) * p as u128, binomial(n, p - 1) * (n + 1 - p) as u128);
                let lattice = Lattice::new(n, p).unwrap();
                let extracted: Vec<u128> = lattice.extracted_alpha().iter().map(|&x| x as u128).collect();
                assert_eq!(extracted, closed_alpha(n, p), "n={n} p={p}");
                assert!(lattice.edge_class_counts().iter().all(EdgeClassCount::holds));
            }
        }
    }

    #[test]
    fn column_rectangle_is_unweighted() {
        // p = n: one chain through every tuple
        let a = exact(&[4, -7, 2]);
        let lattice = Lattice::new(3, 3).unwrap();
        assert_eq!(lattice.weighted_sum(&a).unwrap().value, lattice.balanced_sum(&a).unwrap().value);
        assert!(lattice.cells.iter().all(|c| c.weight == BigUint::from(1u32)));
    }

    #[test]
    fn free_top_example() {
        let a = FreeTopSequence::new(vec![int(0), int(1), int(1), int(1), int(1)]).unwrap();
        assert!(second_diff_sum(&a, 2).unwrap().value.is_zero());
        // a zero top reduces to the balanced sum minus the level-0 term
        let b = FreeTopSequence::new(vec![int(0), int(3), int(-1), int(5), int(0)]).unwrap();
        assert!(second_diff_sum(&b, 2).unwrap().value.is_zero());
    }

    #[test]
    fn exact_random_trials() {
        let mut r = seeded(7);
        for n in 1..=7 {
            for p in 1..=n {
                let lattice = Lattice::new(n, p).unwrap();
                for _ in 0..5 {
                    let a = random_boundary(&mut r, n);
                    assert!(lattice.balanced_sum(&a).unwrap().value.is_zero());
                    assert!(lattice.weighted_sum(&a).unwrap().value.is_zero());
                    assert_eq!(lattice.box_form_mismatches(&a).unwrap(), 0);
                    assert!(lattice.second_diff_sum(&random_free_top(&mut r, n)).unwrap().value.is_zero());
                }
            }
        }
    }

    #[test]
    fn chain_form_matches_weighted() {
        let mut r = seeded(11);
        for n in 1..=6 {
            for p in 1..=n {
                let a = random_boundary(&mut r, n);
                let w = weighted_balanced_sum(&a, p).unwrap();
                assert!(w.chain.is_some(), "n={n} p={p}");
                assert!(w.holds());
            }
        }
        // 4 × 5 rectangle is past the chain walk cap
        let w = weighted_balanced_sum(&random_boundary(&mut r, 8), 4).unwrap();
        assert!(w.chain.is_none() && w.chain_skipped.is_some() && w.holds());
    }

    #[test]
    fn float_mode() {
        let a = BoundarySequence::from_interior(vec![0.1, -2.5, 3.75, 1e3]).unwrap();
        for p in 1..=4 {
            assert!(balanced_sum(&a, p).unwrap().vanishes());
            assert!(weighted_balanced_sum(&a, p).unwrap().holds());
        }
        let off = Residual { value: 1e-3, scale: 10.0 };
        assert!(!off.vanishes());
    }

    #[test]
    fn degree_formulas() {
        for n in 1..=7 {
            let bs = brill_segre_check(0, n as i64, &vec![0; n], n).unwrap();
            assert!(bs.holds());
            for row in &bs.degrees {
                assert_eq!(row.recursion, (row.p * (n - row.p + 1)) as i64);
            }
        }
        let bs = brill_segre_check(1, 6, &[0, 0, 0], 3).unwrap();
        assert!(bs.degrees.iter().all(|d| d.genus_form == 6 * d.p as i64));
        // n = 1: σ_1 = 2g − 2 + 2deg
        let bs = brill_segre_check(3, 5, &[2 * 3 - 2 + 2 * 5], 1).unwrap();
        assert_eq!(bs.residual, 0);
        assert!(bs.holds());
        let mut r = seeded(3);
        for n in 1..=8 {
            for _ in 0..10 {
                let (g, d, s) = random_curve_data(&mut r, n);
                let bs = brill_segre_check(g, d, &s, n).unwrap();
                assert_eq!(bs.residual, 0);
                assert!(s.iter().all(|&x| x >= 0));
                assert!(bs.holds(), "{bs:?}");
            }
        }
    }

    #[test]
    fn every_identity_verifies_and_repeats() {
        for identity in Identity::ALL {
            let v = verify_identity(identity, 4, 2, 5, 11).unwrap();
            assert!(v.pass(), "{}", identity.name());
            assert_eq!(v, verify_identity(identity, 4, 2, 5, 11).unwrap());
            assert_eq!(Identity::parse(identity.name()).unwrap(), identity);
        }
        assert!(Identity::parse("nope").is_err());
        let exact = verify_identity(Identity::Balanced, 6, 3, 20, 1).unwrap();
        assert_eq!(exact.max_abs_residual, 0.0);
    }
}
