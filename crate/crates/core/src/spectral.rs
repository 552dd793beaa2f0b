//! Spectra of stealing operators.
//!
//! Two routes are kept side by side so each can check the other:
//!
//! * closed forms: `{1, -1/2 (×2), 0 (×3)}` for the cube, and
//!   `{cos 2πk/n : 0 ≤ k < n}` for the n-cycle;
//! * a numeric route: cyclic Jacobi rotations on the (symmetrized)
//!   operator, for any graph.
//!
//! For the cube the eigenvalues are also exhibited directly. A state
//! splits into a constant part, a part that is equal on opposite faces
//! with total zero, and a part that is negated on opposite faces. The
//! operator fixes the first, multiplies the second by `-1/2` and kills the
//! third, and all three facts are checked in exact arithmetic by
//! [`verify_scalar_action`].

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operator::{KashaState, StealingOperator};
use crate::rational::{self, Rational};
use crate::topology::Graph;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Eigenvalues closer than this are reported as one value with multiplicity.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;
/// Numeric values this close to 0, ±1/2 or ±1 are reported as exact.
pub const SNAP_TOLERANCE: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// One distinct eigenvalue and how often it occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue {
    pub value: f64,
    /// The exact value, when known.
    pub exact: Option<Rational>,
    pub multiplicity: usize,
}

impl Eigenvalue {
    fn exact(value: Rational, multiplicity: usize) -> Self {
        Self { value: rational::to_f64(&value), exact: Some(value), multiplicity }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// Distinct eigenvalues with multiplicities, sorted by descending value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    eigenvalues: Vec<Eigenvalue>,
}

impl Spectrum {
    /// Groups raw eigenvalues: values within [`CLUSTER_TOLERANCE`] of a
    /// cluster's largest member join it, and clusters near 0, ±1/2, ±1
    /// snap to the exact rational.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let mut eigenvalues: Vec<Eigenvalue> = Vec::new();
        let mut start = 0;
        while start < values.len() {
            let head = values[start];
            let end = start
                + values[start..].iter().take_while(|&&x| head - x <= CLUSTER_TOLERANCE).count();
            let members = &values[start..end];
            let mean = members.iter().sum::<f64>() / members.len() as f64;
            let multiplicity = members.len();
            eigenvalues.push(match snap(mean) {
                Some(q) => Eigenvalue::exact(q, multiplicity),
                None => Eigenvalue { value: mean, exact: None, multiplicity },
            });
            start = end;
        }
        Self { eigenvalues }
    }

    fn from_exact(mut pairs: Vec<(Rational, usize)>) -> Self {
        pairs.sort_by(|a, b| b.0.cmp(&a.0));
        Self {
            eigenvalues: pairs.into_iter().map(|(q, m)| Eigenvalue::exact(q, m)).collect(),
        }
    }

    pub fn eigenvalues(&self) -> &[Eigenvalue] {
        &self.eigenvalues
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    /// Every eigenvalue repeated by multiplicity, descending.
    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    /// Multiplicity of the eigenvalue within `tol` of `value` (0 if absent).
    pub fn multiplicity_of(&self, value: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|e| (e.value - value).abs() <= tol)
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Largest pointwise gap between the sorted value lists, or `None` when
    /// total multiplicities differ.
    pub fn max_discrepancy(&self, other: &Self) -> Option<f64> {
        let (a, b) = (self.values(), other.values());
        (a.len() == b.len())
            .then(|| a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    }
}

impl fmt::Display for Spectrum {
    /// One `value multiplicity exact|approx` line per distinct eigenvalue.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.eigenvalues {
            let tag = if e.is_exact() { "exact" } else { "approx" };
            writeln!(f, "{} {} {}", rational::format_decimal(e.value), e.multiplicity, tag)?;
        }
        Ok(())
    }
}

fn snap(value: f64) -> Option<Rational> {
    [(1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1)]
        .into_iter()
        .find(|&(n, d)| (value - n as f64 / d as f64).abs() <= SNAP_TOLERANCE)
        .map(|(n, d)| rational::ratio(n, d))
}

/// `{1 ×1, 0 ×3, -1/2 ×2}`: identity on constants, zero on opposite-
/// antisymmetric states, `-1/2` on opposite-symmetric zero-sum states.
pub fn cube_spectrum_closed_form() -> Spectrum {
    Spectrum::from_exact(vec![
        (Rational::one(), 1),
        (Rational::zero(), 3),
        (rational::ratio(-1, 2), 2),
    ])
}

/// `{cos 2πk/n : 0 ≤ k < n}`, with `k` and `n - k` merged. The values
/// 1, -1, ±1/2 and 0 are recognized from `k/n` itself and reported exact.
pub fn cycle_spectrum_closed_form(n: usize) -> Result<Spectrum> {
    if n < 3 {
        return Err(Error::InvalidSize { size: n, reason: "a cycle needs at least 3 nodes" });
    }
    let eigenvalues = (0..=n / 2)
        .map(|k| {
            let multiplicity = if k == 0 || 2 * k == n { 1 } else { 2 };
            match exact_cosine(k, n) {
                Some(q) => Eigenvalue::exact(q, multiplicity),
                None => Eigenvalue {
                    value: (std::f64::consts::TAU * k as f64 / n as f64).cos(),
                    exact: None,
                    multiplicity,
                },
            }
        })
        .collect();
    Ok(Spectrum { eigenvalues })
}

/// `cos(2πk/n)` for `0 ≤ k ≤ n/2` when it is rational.
fn exact_cosine(k: usize, n: usize) -> Option<Rational> {
    // k/n ∈ {0, 1/6, 1/4, 1/3, 1/2} are the only rational points on this half.
    let value = match k {
        0 => (1, 1),
        _ if 6 * k == n => (1, 2),
        _ if 4 * k == n => (0, 1),
        _ if 3 * k == n => (-1, 2),
        _ if 2 * k == n => (-1, 1),
        _ => return None,
    };
    Some(rational::ratio(value.0, value.1))
}

/// All eigenvalues of a graph's stealing operator, numerically.
///
/// Irregular graphs give non-symmetric operators; those are first
/// conjugated by `D^{1/2}` (D the diagonal of degrees, read off the column
/// supports), which leaves the eigenvalues unchanged and makes the matrix
/// symmetric.
pub fn spectrum_numeric(op: &StealingOperator) -> Spectrum {
    let n = op.size();
    let mut a = op.to_f64_rows();
    if !op.is_symmetric() {
        let sqrt_deg: Vec<f64> = (0..n).map(|v| (op.column_support(v) as f64).sqrt()).collect();
        for (u, row) in a.iter_mut().enumerate() {
            for (v, x) in row.iter_mut().enumerate() {
                *x *= sqrt_deg[v] / sqrt_deg[u];
            }
        }
    }
    Spectrum::from_values(symmetric_eigenvalues(a))
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// unsorted. Sweeps stop once the off-diagonal Frobenius norm drops below
/// [`JACOBI_TOLERANCE`].
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_TOLERANCE {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let (arp, arq) = (a[r][p], a[r][q]);
                    a[r][p] = c * arp - s * arq;
                    a[p][r] = a[r][p];
                    a[r][q] = s * arp + c * arq;
                    a[q][r] = a[r][q];
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Second-largest eigenvalue modulus: drop one copy of the top eigenvalue
/// and take the largest |λ| of what is left. This is the geometric rate
/// at which a convergent chain approaches its limit.
pub fn slem(spectrum: &Spectrum) -> f64 {
    spectrum.values().iter().skip(1).map(|x| x.abs()).fold(0.0, f64::max)
}

/// Largest |λ| strictly below 1 (by more than [`SNAP_TOLERANCE`]): the
/// decay rate of the transient part on a bipartite graph, where both
/// 1 and -1 persist.
pub fn largest_modulus_below_one(spectrum: &Spectrum) -> f64 {
    spectrum
        .values()
        .iter()
        .map(|x| x.abs())
        .filter(|x| *x < 1.0 - SNAP_TOLERANCE)
        .fold(0.0, f64::max)
}

/// A cube state split along the three invariant subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeDecomposition {
    /// Constant vector: the mean in every bowl.
    pub uniform: KashaState,
    /// Equal on opposite faces, total zero.
    pub symmetric: KashaState,
    /// Negated on opposite faces.
    pub antisymmetric: KashaState,
}

impl CubeDecomposition {
    /// Sum of the three parts.
    pub fn recombine(&self) -> KashaState {
        &(&self.uniform + &self.symmetric) + &self.antisymmetric
    }
}

fn opposite_pairing(cube: &Graph) -> Result<Vec<usize>> {
    if cube.node_count() != 6 {
        return Err(Error::NotCube);
    }
    (0..6).map(|v| cube.opposite(v).ok_or(Error::NotCube)).collect()
}

/// Projects `state` onto the three invariant subspaces of the cube:
///
/// ```text
/// uniform[i]       = mean(s)
/// symmetric[i]     = (s[i] + s[opp(i)]) / 2 - mean(s)
/// antisymmetric[i] = (s[i] - s[opp(i)]) / 2
/// ```
pub fn decompose_cube_state(cube: &Graph, state: &KashaState) -> Result<CubeDecomposition> {
    let opp = opposite_pairing(cube)?;
    if state.len() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, found: state.len() });
    }
    let half = rational::ratio(1, 2);
    let mean = state.mean();
    let s = state.amounts();
    let symmetric = (0..6).map(|i| (&s[i] + &s[opp[i]]) * &half - &mean).collect();
    let antisymmetric = (0..6).map(|i| (&s[i] - &s[opp[i]]) * &half).collect();
    Ok(CubeDecomposition {
        uniform: KashaState::constant(6, mean),
        symmetric: KashaState::new(symmetric),
        antisymmetric: KashaState::new(antisymmetric),
    })
}

/// Checks, exactly, that the cube operator acts as `1`, `-1/2` and `0` on
/// the three parts of `state`, and returns those scalars.
pub fn verify_scalar_action(cube: &Graph, state: &KashaState) -> Result<[Rational; 3]> {
    let parts = decompose_cube_state(cube, state)?;
    if &parts.recombine() != state {
        return Err(Error::InvariantViolation("decomposition does not sum to the state".into()));
    }
    let op = StealingOperator::new(cube)?;
    let scalars = [Rational::one(), rational::ratio(-1, 2), Rational::zero()];
    let checks = [
        ("uniform", &parts.uniform, &scalars[0]),
        ("symmetric", &parts.symmetric, &scalars[1]),
        ("antisymmetric", &parts.antisymmetric, &scalars[2]),
    ];
    for (name, part, scalar) in checks {
        let image = op.apply(part)?;
        if image != part.scale(scalar) {
            return Err(Error::InvariantViolation(format!(
                "operator maps {name} part {part} to {image}, expected {scalar} times it"
            )));
        }
    }
    Ok(scalars)
}
