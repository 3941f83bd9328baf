//! Stochastic vectors, regional amount states, model parameters and the
//! conflict index.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance on the coordinate sum of a [`StochasticVector`].
pub const SUM_TOL: f64 = 1e-12;

/// Relative tolerance between a cached substance total and its coordinate sum.
pub const TOTAL_REL_TOL: f64 = 1e-9;

/// A probability profile over `n >= 2` regions: nonnegative coordinates
/// summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticVector(Vec<f64>);

impl StochasticVector {
    /// Validates `coords` as they are; no rescaling is done.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotStochastic { sum });
        }
        Ok(Self(coords))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewRegions(n));
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    /// Basis vector `e_index`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewRegions(n));
        }
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut coords = vec![0.0; n];
        coords[index] = 1.0;
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_coord(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Conflict index with another vector of the same dimension.
    pub fn inner(&self, other: &Self) -> Result<ConflictIndex> {
        inner(self, other)
    }

    /// Max-norm distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for StochasticVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for StochasticVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

fn check_coords(coords: &[f64]) -> Result<()> {
    if coords.len() < 2 {
        return Err(Error::TooFewRegions(coords.len()));
    }
    for (index, &value) in coords.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < 0.0 {
            return Err(Error::NegativeCoordinate { index, value });
        }
    }
    Ok(())
}

/// Divides nonnegative amounts by their sum.
///
/// Input that already sums to one within `SUM_TOL / 4` is returned
/// unchanged. This makes `normalize` idempotent bitwise and keeps a few ulps
/// of rounding drift from triggering a rescale that would nudge every
/// coordinate.
pub fn normalize(amounts: &[f64]) -> Result<StochasticVector> {
    check_coords(amounts)?;
    let sum: f64 = amounts.iter().sum();
    if sum == 0.0 {
        return Err(Error::ZeroTotal);
    }
    if !sum.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    // Equal positive coordinates normalize to the correctly rounded 1/n.
    if amounts.iter().all(|&x| x == amounts[0]) {
        return Ok(StochasticVector(vec![
            1.0 / amounts.len() as f64;
            amounts.len()
        ]));
    }
    if (sum - 1.0).abs() <= SUM_TOL / 4.0 {
        return Ok(StochasticVector(amounts.to_vec()));
    }
    Ok(StochasticVector(amounts.iter().map(|x| x / sum).collect()))
}

/// The conflict index `θ = Σ u_i v_i`, always inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ConflictIndex(f64);

impl ConflictIndex {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<ConflictIndex> for f64 {
    fn from(c: ConflictIndex) -> f64 {
        c.0
    }
}

pub fn inner(u: &StochasticVector, v: &StochasticVector) -> Result<ConflictIndex> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(ConflictIndex(
        raw_inner(u.coords(), v.coords()).clamp(0.0, 1.0),
    ))
}

pub(crate) fn raw_inner(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// One of the three interacting substances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Substance {
    /// Population.
    P,
    /// Vital resource.
    R,
    /// Threat.
    Q,
}

impl Substance {
    pub const ALL: [Substance; 3] = [Substance::P, Substance::R, Substance::Q];

    pub fn symbol(self) -> char {
        match self {
            Substance::P => 'P',
            Substance::R => 'R',
            Substance::Q => 'Q',
        }
    }
}

/// Absolute regional amounts of the three substances together with their
/// totals.
///
/// Totals are cached at construction and carried along unchanged by the
/// triad map, which conserves them.
#[derive(Debug, Clone, PartialEq)]
pub struct AmountState {
    p: Vec<f64>,
    r: Vec<f64>,
    q: Vec<f64>,
    totals: [f64; 3],
}

impl AmountState {
    pub fn new(p: Vec<f64>, r: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        check_coords(&p)?;
        check_coords(&r)?;
        check_coords(&q)?;
        if r.len() != p.len() {
            return Err(Error::DimensionMismatch {
                left: p.len(),
                right: r.len(),
            });
        }
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                left: p.len(),
                right: q.len(),
            });
        }
        let totals = [p.iter().sum(), r.iter().sum(), q.iter().sum()];
        Ok(Self { p, r, q, totals })
    }

    /// Builds a state whose totals are already known (the conserved values).
    /// Callers guarantee the coordinates are valid.
    pub(crate) fn with_totals(p: Vec<f64>, r: Vec<f64>, q: Vec<f64>, totals: [f64; 3]) -> Self {
        debug_assert!(p.len() == r.len() && r.len() == q.len());
        Self { p, r, q, totals }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn get(&self, substance: Substance) -> &[f64] {
        match substance {
            Substance::P => &self.p,
            Substance::R => &self.r,
            Substance::Q => &self.q,
        }
    }

    pub fn total(&self, substance: Substance) -> f64 {
        self.totals[substance as usize]
    }

    pub fn totals(&self) -> [f64; 3] {
        self.totals
    }

    /// Occupation probabilities of one substance.
    pub fn profile(&self, substance: Substance) -> Result<StochasticVector> {
        normalize(self.get(substance))
    }

    /// Replaces one coordinate, recomputing that substance's total.
    pub fn with_coordinate(&self, substance: Substance, index: usize, value: f64) -> Result<Self> {
        let n = self.n();
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut p = self.p.clone();
        let mut r = self.r.clone();
        let mut q = self.q.clone();
        match substance {
            Substance::P => p[index] = value,
            Substance::R => r[index] = value,
            Substance::Q => q[index] = value,
        }
        Self::new(p, r, q)
    }

    /// All `3n` coordinates in `P, R, Q` order.
    pub fn flat(&self) -> impl Iterator<Item = f64> + '_ {
        self.p.iter().chain(&self.r).chain(&self.q).copied()
    }

    /// Largest relative gap between a cached total and its coordinate sum.
    pub fn total_drift(&self) -> f64 {
        Substance::ALL
            .iter()
            .map(|&s| {
                let total = self.total(s);
                let sum: f64 = self.get(s).iter().sum();
                if total == 0.0 {
                    sum.abs()
                } else {
                    ((sum - total) / total).abs()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Max-norm distance with each substance scaled by its total, making the
    /// three substances comparable.
    pub fn scaled_distance(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for s in Substance::ALL {
            let total = self.total(s);
            let scale = if total > 0.0 { 1.0 / total } else { 1.0 };
            for (a, b) in self.get(s).iter().zip(other.get(s)) {
                worst = worst.max((a - b).abs() * scale);
            }
        }
        worst
    }

    /// Applies a region permutation: region `i` of the result is region
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: perm.len(),
            });
        }
        let pick = |v: &[f64]| perm.iter().map(|&k| v[k]).collect::<Vec<_>>();
        Ok(Self::with_totals(
            pick(&self.p),
            pick(&self.r),
            pick(&self.q),
            self.totals,
        ))
    }
}

/// Rates of the amount update (`d1`, `d2`, `d3`) and intensities of the
/// probabilistic redistribution (`a`, `b`, `c`). All strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriadParams {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriadParams {
    pub fn new(d1: f64, d2: f64, d3: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        let params = Self {
            d1,
            d2,
            d3,
            a,
            b,
            c,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.named() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    pub fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("d1", self.d1),
            ("d2", self.d2),
            ("d3", self.d3),
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
        ]
    }
}

pub(crate) fn write_joined(f: &mut fmt::Formatter<'_>, values: &[f64]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}
