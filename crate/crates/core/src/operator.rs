//! The stealing operator and kasha states, in exact rational arithmetic.
//!
//! Every minute each dragon's bowl is split evenly among its neighbors, so
//! entry `(u, v)` of the operator is `1/deg(v)` when `u` and `v` are
//! adjacent and `0` otherwise. Columns sum to 1. On regular graphs (the
//! cube, cycles) the matrix is symmetric and doubly stochastic; the
//! `1/deg(v)` rule on irregular graphs is an extension of the same idea.

use std::fmt;
use std::ops::{Add, Index, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::topology::Graph;

/// Amounts of kasha per node. Negative amounts are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KashaState(Vec<Rational>);

impl KashaState {
    pub fn new(amounts: Vec<Rational>) -> Self {
        Self(amounts)
    }

    pub fn from_integers(amounts: &[i64]) -> Self {
        Self(amounts.iter().map(|&a| rational::int(a)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    /// The same amount `value` in every one of `n` bowls.
    pub fn constant(n: usize, value: Rational) -> Self {
        Self(vec![value; n])
    }

    /// One unit of kasha at `node`, nothing elsewhere.
    pub fn one_hot(n: usize, node: usize) -> Self {
        let mut s = Self::zeros(n);
        s.0[node] = Rational::one();
        s
    }

    /// Parses comma- or whitespace-separated rationals.
    pub fn parse(text: &str) -> Result<Self> {
        let amounts = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(rational::parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if amounts.is_empty() {
            return Err(Error::InvalidRational(text.to_string()));
        }
        Ok(Self(amounts))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn amounts(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_amounts(self) -> Vec<Rational> {
        self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn mean(&self) -> Rational {
        self.total() / rational::int(self.len() as i64)
    }

    pub fn max(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min(&self) -> Rational {
        self.0.iter().min().cloned().unwrap_or_else(Rational::zero)
    }

    /// `max - min`.
    pub fn range(&self) -> Rational {
        self.max() - self.min()
    }

    /// Largest absolute amount.
    pub fn max_abs(&self) -> Rational {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Max-norm distance to `other`.
    pub fn distance(&self, other: &Self) -> Result<Rational> {
        check_len(self.len(), other.len())?;
        Ok((self - other).max_abs())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::to_f64).collect()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        check_len(n, self.len())
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl Index<usize> for KashaState {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &KashaState {
    type Output = KashaState;

    /// Panics on length mismatch.
    fn add(self, rhs: &KashaState) -> KashaState {
        assert_eq!(self.len(), rhs.len(), "state lengths differ");
        KashaState(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &KashaState {
    type Output = KashaState;

    /// Panics on length mismatch.
    fn sub(self, rhs: &KashaState) -> KashaState {
        assert_eq!(self.len(), rhs.len(), "state lengths differ");
        KashaState(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for KashaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Dense square matrix of exact rationals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StealingOperator {
    size: usize,
    entries: Vec<Rational>,
}

impl StealingOperator {
    /// Builds the operator of `graph`. Every node needs a neighbor to hand
    /// its kasha to.
    pub fn new(graph: &Graph) -> Result<Self> {
        let n = graph.node_count();
        let mut op = Self::zeros(n);
        for v in 0..n {
            let d = graph.degree(v);
            if d == 0 {
                return Err(Error::DegenerateGraph { node: v });
            }
            let share = rational::ratio(1, d as i64);
            for u in graph.neighbors(v) {
                op.entries[u * n + v] = share.clone();
            }
        }
        Ok(op)
    }

    fn zeros(n: usize) -> Self {
        Self { size: n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zeros(n);
        for i in 0..n {
            op.entries[i * n + i] = Rational::one();
        }
        op
    }

    /// Builds an operator from explicit rows. Used to compare against
    /// hand-written matrices.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            check_len(n, row.len())?;
            entries.extend(row);
        }
        Ok(Self { size: n, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Fraction of bowl `v` that ends up in bowl `u` after one step.
    pub fn entry(&self, u: usize, v: usize) -> &Rational {
        &self.entries[u * self.size + v]
    }

    pub fn row(&self, u: usize) -> &[Rational] {
        &self.entries[u * self.size..(u + 1) * self.size]
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        (0..self.size)
            .map(|v| (0..self.size).fold(Rational::zero(), |acc, u| acc + self.entry(u, v)))
            .collect()
    }

    pub fn is_column_stochastic(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
            && self.column_sums().iter().all(One::is_one)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|u| (0..u).all(|v| self.entry(u, v) == self.entry(v, u)))
    }

    /// True when every entry is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().all(Signed::is_positive)
    }

    /// Number of nonzero entries in column `v`: the degree of `v` for an
    /// operator built from a graph.
    pub fn column_support(&self, v: usize) -> usize {
        (0..self.size).filter(|&u| !self.entry(u, v).is_zero()).count()
    }

    /// One round of stealing: the exact product `self · state`.
    pub fn apply(&self, state: &KashaState) -> Result<KashaState> {
        state.check_dim(self.size)?;
        let amounts = (0..self.size)
            .map(|u| {
                self.row(u)
                    .iter()
                    .zip(state.amounts())
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect();
        Ok(KashaState(amounts))
    }

    /// Exact matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        check_len(self.size, rhs.size)?;
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.entry(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The exact `t`-th power by repeated multiplication; `t = 0` gives
    /// the identity. This is the brute-force reference the rest of the
    /// crate is checked against.
    pub fn power(&self, t: usize) -> Self {
        self.powers().nth(t).expect("powers() is infinite")
    }

    /// `I, A, A², …` as an endless iterator.
    pub fn powers(&self) -> Powers<'_> {
        Powers { base: self, next: Some(Self::identity(self.size)) }
    }

    /// Floating-point copy of the entries, row-major rows.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.size).map(|u| self.row(u).iter().map(rational::to_f64).collect()).collect()
    }
}

pub struct Powers<'a> {
    base: &'a StealingOperator,
    next: Option<StealingOperator>,
}

impl Iterator for Powers<'_> {
    type Item = StealingOperator;

    fn next(&mut self) -> Option<StealingOperator> {
        let current = self.next.take()?;
        self.next = Some(current.compose(self.base).expect("same size"));
        Some(current)
    }
}
