//! Long-run behavior of the stealing dynamics.
//!
//! Viewing each crumb of kasha as a random walker turns the question into
//! one about Markov chains. On a connected graph the walk is irreducible,
//! and an undirected connected graph is aperiodic exactly when it is not
//! bipartite. Aperiodic graphs converge to the stationary state; bipartite
//! ones settle into a two-step oscillation where the mass on each side of
//! the bipartition jumps across at every step.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::operator::{KashaState, StealingOperator};
use crate::rational::{self, Rational};
use crate::spectral;
use crate::topology::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    ConvergesToStationary,
    PeriodTwoOscillation,
    Reducible,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ConvergesToStationary => "ConvergesToStationary",
            Self::PeriodTwoOscillation => "PeriodTwoOscillation",
            Self::Reducible => "Reducible",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Disconnected graphs are reducible; connected bipartite graphs are
/// periodic with period 2; everything else converges.
pub fn classify(graph: &Graph) -> Classification {
    if !graph.is_connected() {
        Classification::Reducible
    } else if graph.is_bipartite() {
        Classification::PeriodTwoOscillation
    } else {
        Classification::ConvergesToStationary
    }
}

/// Exact states `t = 0..=T` and their ranges (max - min).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    states: Vec<KashaState>,
    ranges: Vec<Rational>,
}

impl Trajectory {
    pub fn states(&self) -> &[KashaState] {
        &self.states
    }

    pub fn ranges(&self) -> &[Rational] {
        &self.ranges
    }

    /// Number of steps taken (`T`).
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn last(&self) -> &KashaState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// `range[t+1] / range[t]`, or `None` where `range[t]` is zero.
    pub fn contraction_ratios(&self) -> Vec<Option<Rational>> {
        self.ranges
            .windows(2)
            .map(|w| (!w[0].is_zero()).then(|| &w[1] / &w[0]))
            .collect()
    }
}

pub fn simulate(graph: &Graph, init: &KashaState, steps: usize) -> Result<Trajectory> {
    simulate_operator(&StealingOperator::new(graph)?, init, steps)
}

pub fn simulate_operator(op: &StealingOperator, init: &KashaState, steps: usize) -> Result<Trajectory> {
    if init.len() != op.size() {
        return Err(Error::DimensionMismatch { expected: op.size(), found: init.len() });
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(init.clone());
    for _ in 0..steps {
        let next = op.apply(states.last().expect("nonempty"))?;
        states.push(next);
    }
    let ranges = states.iter().map(KashaState::range).collect();
    Ok(Trajectory { states, ranges })
}

/// Predicted limits along even and odd times, and the rate at which the
/// rest dies out.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub classification: Classification,
    pub limit_even: KashaState,
    pub limit_odd: KashaState,
    pub convergence_rate: f64,
}

/// Predicts the limit of the dynamics from `init` in exact arithmetic.
///
/// With `m` edges, the stationary state puts `deg(v) · total / 2m` in
/// bowl `v`, which is the plain average on regular graphs. On a bipartite
/// graph with sides `P0`, `P1` holding `S0`, `S1` at time 0, even times
/// approach `deg(v) · S_side(v) / m` and odd times the same with the sides
/// swapped; for a regular graph on `n` nodes that is `2S0/n` and `2S1/n`.
pub fn predict_limit(graph: &Graph, init: &KashaState) -> Result<AsymptoticReport> {
    let n = graph.node_count();
    if init.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: init.len() });
    }
    let classification = classify(graph);
    if classification == Classification::Reducible {
        return Err(Error::Disconnected);
    }
    let op = StealingOperator::new(graph)?;
    let spectrum = spectral::spectrum_numeric(&op);
    let edges = rational::int(graph.edge_count() as i64);
    let degree = |v: usize| rational::int(graph.degree(v) as i64);
    match classification {
        Classification::Reducible => unreachable!("handled above"),
        Classification::ConvergesToStationary => {
            let share = init.total() / (&edges * rational::int(2));
            let limit = KashaState::new((0..n).map(|v| degree(v) * &share).collect());
            Ok(AsymptoticReport {
                classification,
                limit_even: limit.clone(),
                limit_odd: limit,
                convergence_rate: spectral::slem(&spectrum),
            })
        }
        Classification::PeriodTwoOscillation => {
            let colors = graph.two_coloring().expect("bipartite");
            let mut side_totals = [Rational::zero(), Rational::zero()];
            for (v, x) in init.amounts().iter().enumerate() {
                side_totals[colors[v] as usize] += x;
            }
            let limit = |parity: usize| {
                KashaState::new(
                    (0..n)
                        .map(|v| degree(v) * &side_totals[(colors[v] as usize + parity) % 2] / &edges)
                        .collect(),
                )
            };
            Ok(AsymptoticReport {
                classification,
                limit_even: limit(0),
                limit_odd: limit(1),
                convergence_rate: spectral::largest_modulus_below_one(&spectrum),
            })
        }
    }
}

/// Outcome of comparing a simulation against [`predict_limit`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCheck {
    pub classification: Classification,
    pub steps: usize,
    pub tolerance: f64,
    /// Max-norm distance to the prediction; `None` for reducible graphs.
    pub deviation: Option<Rational>,
    pub passed: bool,
    pub contraction_ratios: Vec<Option<Rational>>,
}

/// Simulates `steps` rounds and measures the max-norm distance of the
/// final state (and, for period-2 graphs, the one before it) from the
/// predicted limit of matching parity. Passes iff that distance is at most
/// `tolerance`. Reducible graphs have no prediction and always fail.
pub fn verify_convergence(
    graph: &Graph,
    init: &KashaState,
    steps: usize,
    tolerance: f64,
) -> Result<ConvergenceCheck> {
    if steps == 0 {
        return Err(Error::InvalidSize { size: 0, reason: "verification needs at least one step" });
    }
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvariantViolation(format!("tolerance {tolerance} must be >= 0")));
    }
    let trajectory = simulate(graph, init, steps)?;
    let classification = classify(graph);
    let deviation = match predict_limit(graph, init) {
        Ok(report) => {
            let limit_for = |t: usize| if t.is_multiple_of(2) { &report.limit_even } else { &report.limit_odd };
            let last = trajectory.states()[steps].distance(limit_for(steps))?;
            let deviation = if classification == Classification::PeriodTwoOscillation {
                let prev = trajectory.states()[steps - 1].distance(limit_for(steps - 1))?;
                last.max(prev)
            } else {
                last
            };
            Some(deviation)
        }
        Err(Error::Disconnected) => None,
        Err(e) => return Err(e),
    };
    let passed = deviation.as_ref().is_some_and(|d| {
        if tolerance == 0.0 {
            d.is_zero()
        } else {
            rational::to_f64(d) <= tolerance
        }
    });
    Ok(ConvergenceCheck {
        classification,
        steps,
        tolerance,
        deviation,
        passed,
        contraction_ratios: trajectory.contraction_ratios(),
    })
}

/// One step of three dragons around a cube corner once opposite faces
/// agree: each gets the average of the other two.
pub fn corner_step([a, b, c]: &[Rational; 3]) -> [Rational; 3] {
    let half = rational::ratio(1, 2);
    [(b + c) * &half, (a + c) * &half, (a + b) * &half]
}

/// What [`cube_elementary_check`] observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionLog {
    /// `max - min` at each time `0..=T`.
    pub ranges: Vec<Rational>,
    /// Amounts on the corner faces 0, 1, 2 at each time.
    pub corners: Vec<[Rational; 3]>,
}

/// Runs the cube dynamics for `steps` rounds and checks, exactly, that
///
/// * from `t = 1` on, opposite faces hold equal amounts;
/// * the corner faces 0, 1, 2 then evolve by [`corner_step`];
/// * the range halves at every step from `t = 1` on.
pub fn cube_elementary_check(init: &KashaState, steps: usize) -> Result<ContractionLog> {
    if steps < 2 {
        return Err(Error::InvalidSize { size: steps, reason: "the halving check needs at least 2 steps" });
    }
    let cube = Graph::cube();
    let trajectory = simulate(&cube, init, steps)?;
    let states = trajectory.states();
    for (t, state) in states.iter().enumerate().skip(1) {
        for v in 0..6 {
            let w = cube.opposite(v).expect("cube has opposites");
            if state[v] != state[w] {
                return Err(Error::InvariantViolation(format!(
                    "t = {t}: faces {v} and {w} differ ({} vs {})",
                    state[v], state[w]
                )));
            }
        }
    }
    let corners: Vec<[Rational; 3]> =
        states.iter().map(|s| [s[0].clone(), s[1].clone(), s[2].clone()]).collect();
    for t in 1..steps {
        if corner_step(&corners[t]) != corners[t + 1] {
            return Err(Error::InvariantViolation(format!(
                "t = {t}: corner faces do not follow the pairwise-average step"
            )));
        }
    }
    let ranges = trajectory.ranges().to_vec();
    for t in 1..steps {
        if &ranges[t + 1] * rational::int(2) != ranges[t] {
            return Err(Error::InvariantViolation(format!(
                "t = {t}: range {} is not halved (next {})",
                ranges[t],
                ranges[t + 1]
            )));
        }
    }
    Ok(ContractionLog { ranges, corners })
}

/// Smallest `t ≤ max_t` with every entry of `op^t` strictly positive.
/// Such a `t` exists exactly for irreducible aperiodic chains.
pub fn positive_power_witness(op: &StealingOperator, max_t: usize) -> Option<usize> {
    op.powers().take(max_t + 1).position(|p| p.is_strictly_positive())
}

/// `|x_t[node] - x_{t+1}[node]|`: how far one bowl swings in a step.
pub fn oscillation_gap(trajectory: &Trajectory, node: usize, t: usize) -> Rational {
    let states = trajectory.states();
    (&states[t][node] - &states[t + 1][node]).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn state(values: &[(i64, i64)]) -> KashaState {
        KashaState::new(values.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn simulate_examples() {
        let cube = Graph::cube();
        let tr = simulate(&cube, &KashaState::one_hot(6, 0), 2).unwrap();
        assert_eq!(tr.states()[2], state(&[(1, 4), (1, 8), (1, 8), (1, 8), (1, 8), (1, 4)]));
        assert_eq!(tr.steps(), 2);

        let uniform = KashaState::constant(6, q(7, 3));
        let tr = simulate(&cube, &uniform, 9).unwrap();
        assert!(tr.states().iter().all(|s| s == &uniform));

        let c4 = Graph::cycle(4).unwrap();
        let tr = simulate(&c4, &KashaState::one_hot(4, 0), 2).unwrap();
        assert_eq!(tr.states()[1], state(&[(0, 1), (1, 2), (0, 1), (1, 2)]));
        assert_eq!(tr.states()[2], state(&[(1, 2), (0, 1), (1, 2), (0, 1)]));

        assert!(matches!(
            simulate(&c4, &KashaState::zeros(3), 0),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
        assert!(simulate(&c4, &KashaState::zeros(3), 2).is_err());
        assert_eq!(simulate(&c4, &KashaState::zeros(4), 0).unwrap().states().len(), 1);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Graph::cube()), Classification::ConvergesToStationary);
        assert_eq!(classify(&Graph::cycle(7).unwrap()), Classification::ConvergesToStationary);
        assert_eq!(classify(&Graph::cycle(6).unwrap()), Classification::PeriodTwoOscillation);
        let split = Graph::from_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
        assert_eq!(classify(&split), Classification::Reducible);
    }

    #[test]
    fn cube_limit_is_the_average() {
        let r = predict_limit(&Graph::cube(), &KashaState::from_integers(&[6, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(r.classification, Classification::ConvergesToStationary);
        assert_eq!(r.limit_even, KashaState::from_integers(&[1; 6]));
        assert_eq!(r.limit_even, r.limit_odd);
        assert_eq!(r.convergence_rate, 0.5);
    }

    /// Brute force: `A^t · init` for a large even and odd `t`.
    fn oracle_limits(graph: &Graph, init: &KashaState, t_even: usize) -> (KashaState, KashaState) {
        let op = StealingOperator::new(graph).unwrap();
        let even = op.power(t_even).apply(init).unwrap();
        let odd = op.power(t_even + 1).apply(init).unwrap();
        (even, odd)
    }

    fn assert_close(a: &KashaState, b: &KashaState, tol: f64) {
        let d = rational::to_f64(&a.distance(b).unwrap());
        assert!(d <= tol, "{a} vs {b}: {d}");
    }

    #[test]
    fn four_cycle_alternates() {
        let c4 = Graph::cycle(4).unwrap();
        let init = KashaState::one_hot(4, 0);
        let r = predict_limit(&c4, &init).unwrap();
        assert_eq!(r.classification, Classification::PeriodTwoOscillation);
        assert_eq!(r.limit_even, state(&[(1, 2), (0, 1), (1, 2), (0, 1)]));
        assert_eq!(r.limit_odd, state(&[(0, 1), (1, 2), (0, 1), (1, 2)]));
        let (even, odd) = oracle_limits(&c4, &init, 200);
        assert_eq!(even, r.limit_even);
        assert_eq!(odd, r.limit_odd);
    }

    #[test]
    fn period_two_formula_matches_oracle_on_even_cycles() {
        for n in (4..=12).step_by(2) {
            let g = Graph::cycle(n).unwrap();
            let init = KashaState::new((0..n).map(|i| q(i as i64 * 3 - 5, (i % 4 + 1) as i64)).collect());
            let r = predict_limit(&g, &init).unwrap();
            let (even, odd) = oracle_limits(&g, &init, 400);
            assert_close(&even, &r.limit_even, 1e-9);
            assert_close(&odd, &r.limit_odd, 1e-9);
        }
    }

    #[test]
    fn path_limit_follows_degree() {
        let path = Graph::path(3).unwrap();
        // sides {0,2} and {1} hold 2 each, so both parities agree
        let init = KashaState::from_integers(&[3, 2, -1]);
        let r = predict_limit(&path, &init).unwrap();
        assert_eq!(r.limit_even, KashaState::from_integers(&[1, 2, 1]));
        assert_eq!(r.limit_odd, r.limit_even);
        let (even, odd) = oracle_limits(&path, &init, 200);
        assert_close(&even, &r.limit_even, 1e-9);
        assert_close(&odd, &r.limit_odd, 1e-9);

        // all mass on one side keeps sloshing
        let r = predict_limit(&path, &KashaState::from_integers(&[4, 0, 0])).unwrap();
        assert_eq!(r.limit_even, KashaState::from_integers(&[2, 0, 2]));
        assert_eq!(r.limit_odd, KashaState::from_integers(&[0, 4, 0]));
    }

    #[test]
    fn irregular_aperiodic_limit_follows_degree() {
        // triangle 0-1-2 with a pendant 3 on node 2: degrees 2,2,3,1
        let paw = Graph::from_edge_list("0 1\n1 2\n0 2\n2 3\n").unwrap();
        let init = KashaState::from_integers(&[8, 0, 0, 0]);
        let r = predict_limit(&paw, &init).unwrap();
        assert_eq!(r.classification, Classification::ConvergesToStationary);
        assert_eq!(r.limit_even, KashaState::from_integers(&[2, 2, 3, 1]));
        let (even, odd) = oracle_limits(&paw, &init, 200);
        assert_close(&even, &r.limit_even, 1e-9);
        assert_close(&odd, &r.limit_even, 1e-9);
    }

    #[test]
    fn predict_rejects_disconnected_graphs() {
        let split = Graph::from_edge_list("0 1\n2 3\n").unwrap();
        assert_eq!(predict_limit(&split, &KashaState::zeros(4)), Err(Error::Disconnected));
        assert!(matches!(
            predict_limit(&Graph::cube(), &KashaState::zeros(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn verify_examples() {
        let cube = Graph::cube();
        let init = KashaState::from_integers(&[5, -3, 2, 0, 7, 1]);
        let check = verify_convergence(&cube, &init, 40, 1e-9).unwrap();
        assert!(check.passed);
        let bound = init.range() * Rational::new(1.into(), num_bigint::BigInt::from(2).pow(39));
        assert!(check.deviation.unwrap() <= bound);

        let c6 = Graph::cycle(6).unwrap();
        let check = verify_convergence(&c6, &KashaState::one_hot(6, 0), 200, 1e-6).unwrap();
        assert!(check.passed);
        assert_eq!(check.classification, Classification::PeriodTwoOscillation);

        let check = verify_convergence(&cube, &KashaState::from_integers(&[2; 6]), 1, 1e-12).unwrap();
        assert!(check.passed);
        assert_eq!(check.deviation, Some(int(0)));
        assert_eq!(check.contraction_ratios, vec![None]);

        // zero tolerance only accepts an exact hit
        let check = verify_convergence(&cube, &init, 40, 0.0).unwrap();
        assert!(!check.passed);

        let split = Graph::from_edge_list("0 1\n2 3\n").unwrap();
        let check = verify_convergence(&split, &KashaState::one_hot(4, 0), 5, 1.0).unwrap();
        assert!(!check.passed && check.deviation.is_none());
        assert!(verify_convergence(&cube, &init, 0, 1.0).is_err());
        assert!(verify_convergence(&cube, &init, 3, -1.0).is_err());
    }

    #[test]
    fn cube_contraction_ratios_are_one_half() {
        let check =
            verify_convergence(&Graph::cube(), &KashaState::from_integers(&[1, 9, 4, 0, 0, 2]), 30, 1e-6).unwrap();
        assert!(check.contraction_ratios[1..].iter().all(|r| r.as_ref() == Some(&q(1, 2))));
    }

    #[test]
    fn elementary_check_examples() {
        let log = cube_elementary_check(&KashaState::one_hot(6, 0), 10).unwrap();
        assert_eq!(log.ranges[1], q(1, 4));
        assert_eq!(log.ranges[2], q(1, 8));
        assert_eq!(log.corners[1], [int(0), q(1, 4), q(1, 4)]);

        let [a, b, c] = [int(0), int(1), int(3)];
        let next = corner_step(&[a, b, c]);
        assert_eq!(next, [int(2), q(3, 2), q(1, 2)]);
        assert_eq!(next.iter().max().unwrap() - next.iter().min().unwrap(), q(3, 2));

        let log = cube_elementary_check(&KashaState::from_integers(&[4; 6]), 5).unwrap();
        assert!(log.ranges.iter().all(Zero::is_zero));

        assert!(cube_elementary_check(&KashaState::one_hot(6, 0), 1).is_err());
        assert!(cube_elementary_check(&KashaState::one_hot(5, 0), 3).is_err());
    }

    #[test]
    fn positivity_witnesses() {
        let cube = StealingOperator::new(&Graph::cube()).unwrap();
        assert_eq!(positive_power_witness(&cube, 3), Some(2));
        let c6 = StealingOperator::new(&Graph::cycle(6).unwrap()).unwrap();
        assert_eq!(positive_power_witness(&c6, 20), None);
        let c5 = StealingOperator::new(&Graph::cycle(5).unwrap()).unwrap();
        assert!(positive_power_witness(&c5, 20).is_some());
    }

    proptest! {
        #[test]
        fn cube_halving_holds_for_rational_states(
            v in proptest::collection::vec((-60i64..60, 1i64..15), 6)
        ) {
            let init = KashaState::new(v.into_iter().map(|(a, b)| q(a, b)).collect());
            let log = cube_elementary_check(&init, 25).unwrap();
            prop_assert!(log.ranges[1] <= log.ranges[0]);
        }

        #[test]
        fn cube_deviation_never_grows(
            v in proptest::collection::vec(-30i64..30, 6)
        ) {
            let init = KashaState::from_integers(&v);
            let limit = KashaState::constant(6, init.mean());
            let tr = simulate(&Graph::cube(), &init, 15).unwrap();
            let devs: Vec<Rational> = tr.states().iter().map(|s| s.distance(&limit).unwrap()).collect();
            prop_assert!(devs.windows(2).all(|w| w[1] <= w[0]));
        }

        #[test]
        fn predicted_limits_keep_the_total(
            n in 3usize..14, v in proptest::collection::vec((-20i64..20, 1i64..6), 14)
        ) {
            let g = Graph::cycle(n).unwrap();
            let init = KashaState::new(v[..n].iter().map(|&(a, b)| q(a, b)).collect());
            let r = predict_limit(&g, &init).unwrap();
            prop_assert_eq!(r.limit_even.total(), init.total());
            prop_assert_eq!(r.limit_odd.total(), init.total());
            if r.classification == Classification::ConvergesToStationary {
                prop_assert_eq!(r.limit_even, r.limit_odd);
            }
        }
    }
}
