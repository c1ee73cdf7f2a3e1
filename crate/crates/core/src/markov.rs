//! Cross-entropy rates of finite-alphabet Markov sources.
//!
//! For chains `p` (transition `P`, initial `p₀`) and `q` (`Q`, `q₀`) on K
//! states, the n-symbol cross-entropy is
//!
//! ```text
//! (1/n) H_α(pⁿ; qⁿ) = 1/(n(1−α)) · ln(s · R^{n−1} · 𝟏)
//! R_ij = P(j|i)·Q(j|i)^{α−1},   s_i = p₀(i)·q₀(i)^{α−1}
//! ```
//!
//! and the rate is `ln λ/(1−α)` with λ the growth rate of `s·R^{n−1}·𝟏`: the
//! Perron eigenvalue of R when R is irreducible, and otherwise the largest
//! Perron eigenvalue among the self-communicating classes reachable from the
//! states where `s` is positive.

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::alpha::{AlphaKind, AlphaOrder};
use crate::discrete::{DiscreteDistribution, MASS_TOLERANCE};
use crate::error::{Error, Result};

/// Step at which the Shannon rate is read off as a finite-n slope.
pub const SHANNON_SLOPE_N: usize = 4096;
const PERRON_MAX_ITER: usize = 100_000;
const PERRON_TOL: f64 = 1e-14;

/// A time-invariant Markov source.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSource {
    transition: DMatrix<f64>,
    initial: DiscreteDistribution,
}

impl MarkovSource {
    /// Validates a row-stochastic K×K matrix (rows within 1e−12 of 1) and an
    /// initial distribution over the same K states.
    pub fn new(transition: DMatrix<f64>, initial: DiscreteDistribution) -> Result<Self> {
        let k = transition.nrows();
        if k == 0 || transition.ncols() != k {
            return Err(Error::DimensionMismatch(transition.nrows(), transition.ncols()));
        }
        if initial.alphabet_size() != k {
            return Err(Error::DimensionMismatch(k, initial.alphabet_size()));
        }
        for i in 0..k {
            let row = transition.row(i);
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidParameter(format!("row {i} has a negative or non-finite entry")));
            }
            let sum = row.sum();
            if (sum - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::NotNormalized(sum));
            }
        }
        Ok(MarkovSource { transition, initial })
    }

    /// The i.i.d. uniform source on K states.
    pub fn uniform(k: usize) -> Result<Self> {
        let initial = DiscreteDistribution::uniform(k)?;
        Self::new(DMatrix::from_element(k, k, 1.0 / k as f64), initial)
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn initial(&self) -> &DiscreteDistribution {
        &self.initial
    }

    pub fn states(&self) -> usize {
        self.transition.nrows()
    }
}

/// The matrix R and start vector s.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatrix {
    pub entries: DMatrix<f64>,
    pub start_weights: DVector<f64>,
}

/// p·q^{α−1} with the zero conventions: nothing where p = 0, and 0 where
/// q = 0 < p for α > 1. `None` flags q = 0 < p with α < 1.
fn weight(p: f64, q: f64, e: f64) -> Option<f64> {
    if p == 0.0 {
        Some(0.0)
    } else if q > 0.0 {
        Some(p * q.powf(e))
    } else if e > 0.0 {
        Some(0.0)
    } else {
        None
    }
}

/// Builds `R_ij = P(j|i)·Q(j|i)^{α−1}` and `s_i = p₀(i)·q₀(i)^{α−1}`.
///
/// For α < 1 a zero in Q or q₀ opposite a positive P or p₀ is an error.
pub fn build_weighted(p: &MarkovSource, q: &MarkovSource, alpha: AlphaOrder) -> Result<WeightedMatrix> {
    let k = p.states();
    if q.states() != k {
        return Err(Error::DimensionMismatch(k, q.states()));
    }
    let e = match alpha.kind() {
        AlphaKind::Finite(a) => a - 1.0,
        _ => {
            return Err(Error::UnsupportedAlpha {
                alpha: alpha.to_string(),
                operation: "build_weighted",
            })
        }
    };
    let mut entries = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            entries[(i, j)] = weight(p.transition[(i, j)], q.transition[(i, j)], e)
                .ok_or(Error::ZeroTransition { from: i, to: j })?;
        }
    }
    let mut start = DVector::zeros(k);
    for i in 0..k {
        start[i] = weight(p.initial.probs()[i], q.initial.probs()[i], e).ok_or(Error::ZeroMass(i))?;
    }
    Ok(WeightedMatrix {
        entries,
        start_weights: start,
    })
}

/// Kind of a communicating class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    /// Contains a cycle (size > 1, or a positive self-loop).
    SelfCommunicating,
    /// A single state without a self-loop.
    Inessential,
}

/// Strongly connected classes of the positivity pattern of a nonnegative
/// matrix, with their transitive reachability.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStructure {
    pub classes: Vec<Vec<usize>>,
    pub kinds: Vec<ClassKind>,
    /// `reach[a][b]`: class b is reachable from class a (reflexive).
    pub reach: Vec<Vec<bool>>,
    class_of: Vec<usize>,
}

impl ClassStructure {
    pub fn class_of(&self, state: usize) -> usize {
        self.class_of[state]
    }

    /// One self-communicating class covering every state.
    pub fn is_irreducible(&self) -> bool {
        self.classes.len() == 1 && self.kinds[0] == ClassKind::SelfCommunicating
    }
}

/// Decomposes the graph with an edge i → j iff `m[(i, j)] > 0`.
pub fn classify(m: &DMatrix<f64>) -> ClassStructure {
    let k = m.nrows();
    let mut g = DiGraph::<(), ()>::with_capacity(k, k * k);
    let nodes: Vec<_> = (0..k).map(|_| g.add_node(())).collect();
    for i in 0..k {
        for j in 0..k {
            if m[(i, j)] > 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0; k];
    for (ci, c) in classes.iter().enumerate() {
        for &s in c {
            class_of[s] = ci;
        }
    }
    let kinds = classes
        .iter()
        .map(|c| {
            if c.len() > 1 || m[(c[0], c[0])] > 0.0 {
                ClassKind::SelfCommunicating
            } else {
                ClassKind::Inessential
            }
        })
        .collect();
    let nc = classes.len();
    let mut reach = vec![vec![false; nc]; nc];
    for (a, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![a];
        row[a] = true;
        while let Some(c) = stack.pop() {
            for &i in &classes[c] {
                for j in 0..k {
                    let d = class_of[j];
                    if m[(i, j)] > 0.0 && !row[d] {
                        row[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
    }
    ClassStructure {
        classes,
        kinds,
        reach,
        class_of,
    }
}

/// Perron root and positive right eigenvector (max-normalized) of an
/// irreducible nonnegative matrix.
///
/// Power iteration runs on `M + cI` with `c` half the largest row sum, which
/// makes periodic matrices primitive without slowing aperiodic ones much. It
/// stops when the Collatz–Wielandt bounds `min (Mb)_i/b_i ≤ λ ≤ max (Mb)_i/b_i`
/// agree to 1e−14 relative, which bounds the residual `‖Mb − λb‖∞`.
pub fn perron_pair(m: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let k = m.nrows();
    if k == 0 || m.ncols() != k {
        return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
    }
    if m.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidParameter("matrix must be nonnegative and finite".into()));
    }
    if !classify(m).is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let shift = 0.5 * (0..k).map(|i| m.row(i).sum()).fold(0.0, f64::max);
    let mut b = DVector::from_element(k, 1.0);
    for _ in 0..PERRON_MAX_ITER {
        let mb = m * &b;
        let (lo, hi) = (0..k)
            .map(|i| mb[i] / b[i])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
        if hi - lo <= PERRON_TOL * hi {
            return Ok((0.5 * (lo + hi), b));
        }
        let next = mb + &b * shift;
        b = &next / next.max();
    }
    Err(Error::IterationLimit("perron power iteration"))
}

/// Perron eigenvalue of an irreducible nonnegative matrix.
pub fn perron_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    perron_pair(m).map(|(l, _)| l)
}

fn submatrix(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Growth rate of `s·Rⁿ·𝟏`: the largest Perron eigenvalue over the
/// self-communicating classes reachable from the support of `s`.
pub fn growth_rate(w: &WeightedMatrix) -> Result<f64> {
    let cs = classify(&w.entries);
    let sources: Vec<usize> = (0..w.start_weights.len())
        .filter(|&i| w.start_weights[i] > 0.0)
        .map(|i| cs.class_of(i))
        .collect();
    let mut lambda = 0.0f64;
    for (c, states) in cs.classes.iter().enumerate() {
        if cs.kinds[c] != ClassKind::SelfCommunicating || !sources.iter().any(|&s| cs.reach[s][c]) {
            continue;
        }
        lambda = lambda.max(perron_eigenvalue(&submatrix(&w.entries, states))?);
    }
    Ok(lambda)
}

/// Cross-entropy rate `ln λ/(1−α)`.
///
/// With the Shannon marker the rate is the finite-n slope
/// `n·H(n) − (n−1)·H(n−1)` at `n =` [`SHANNON_SLOPE_N`].
pub fn cross_entropy_rate(p: &MarkovSource, q: &MarkovSource, alpha: AlphaOrder) -> Result<f64> {
    match alpha.kind() {
        AlphaKind::Finite(a) => {
            let w = build_weighted(p, q, alpha)?;
            let lambda = growth_rate(&w)?;
            if lambda <= 0.0 {
                return Err(Error::Degenerate("no self-communicating class is reachable"));
            }
            Ok(lambda.ln() / (1.0 - a))
        }
        AlphaKind::One => shannon_step(p, q, SHANNON_SLOPE_N - 1),
        AlphaKind::Infinity => Err(Error::UnsupportedAlpha {
            alpha: alpha.to_string(),
            operation: "cross_entropy_rate",
        }),
    }
}

/// −Σ p(x) ln q(x) over the support of p.
fn neg_expected_log(p: impl Iterator<Item = f64>, q: impl Iterator<Item = f64>) -> f64 {
    p.zip(q)
        .filter(|(pi, _)| *pi > 0.0)
        .map(|(pi, qi)| if qi > 0.0 { -pi * qi.ln() } else { f64::INFINITY })
        .sum()
}

/// Distribution of the state after `t` steps under `p`.
fn marginal(p: &MarkovSource, t: usize) -> DVector<f64> {
    let mut pi = DVector::from_column_slice(p.initial.probs());
    let pt = p.transition.transpose();
    for _ in 0..t {
        pi = &pt * pi;
    }
    pi
}

/// Per-step conditional cross-entropy −Σ_i π_i Σ_j P(j|i) ln Q(j|i).
fn step_cost(p: &MarkovSource, q: &MarkovSource, pi: &DVector<f64>) -> f64 {
    let k = p.states();
    (0..k)
        .filter(|&i| pi[i] > 0.0)
        .map(|i| {
            let c = neg_expected_log(p.transition.row(i).iter().copied(), q.transition.row(i).iter().copied());
            if c == 0.0 {
                0.0
            } else {
                pi[i] * c
            }
        })
        .sum()
}

/// n·H(n) − (n−1)·H(n−1) for the Shannon case, i.e. the cost of step t.
fn shannon_step(p: &MarkovSource, q: &MarkovSource, t: usize) -> Result<f64> {
    if q.states() != p.states() {
        return Err(Error::DimensionMismatch(p.states(), q.states()));
    }
    Ok(step_cost(p, q, &marginal(p, t)))
}

/// `(1/n)·H_α(pⁿ; qⁿ)` by repeated vector–matrix products with per-step
/// renormalization; the log scale factors are accumulated, so n may be large.
///
/// The Shannon marker gives `−(1/n) E_p[ln q(Xⁿ)]`, summed step by step.
pub fn finite_n_cross_entropy(p: &MarkovSource, q: &MarkovSource, alpha: AlphaOrder, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let a = match alpha.kind() {
        AlphaKind::Finite(a) => a,
        AlphaKind::One => {
            if q.states() != p.states() {
                return Err(Error::DimensionMismatch(p.states(), q.states()));
            }
            let mut total = neg_expected_log(p.initial.probs().iter().copied(), q.initial.probs().iter().copied());
            let mut pi = DVector::from_column_slice(p.initial.probs());
            let pt = p.transition.transpose();
            for _ in 1..n {
                total += step_cost(p, q, &pi);
                pi = &pt * pi;
            }
            return Ok(total / n as f64);
        }
        AlphaKind::Infinity => {
            return Err(Error::UnsupportedAlpha {
                alpha: alpha.to_string(),
                operation: "finite_n_cross_entropy",
            })
        }
    };
    let w = build_weighted(p, q, alpha)?;
    let rt = w.entries.transpose();
    let mut v = w.start_weights.clone();
    let mut log_scale = 0.0;
    for step in 0..n {
        if step > 0 {
            v = &rt * v;
        }
        let total = v.sum();
        if !(total > 0.0) {
            return Err(Error::Degenerate("s·R^(n−1)·1 vanished"));
        }
        log_scale += total.ln();
        v /= total;
    }
    Ok(log_scale / (n as f64 * (1.0 - a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::renyi_cross_entropy;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    fn a(x: f64) -> AlphaOrder {
        AlphaOrder::new(x).unwrap()
    }

    fn chain(rows: &[f64], k: usize) -> MarkovSource {
        MarkovSource::new(DMatrix::from_row_slice(k, k, rows), DiscreteDistribution::uniform(k).unwrap()).unwrap()
    }

    fn two_by_two_root(m: &DMatrix<f64>) -> f64 {
        let (p, q, r, s) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        0.5 * (p + s) + (0.25 * (p - s) * (p - s) + q * r).sqrt()
    }

    #[test]
    fn source_validation() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.5, 0.6, 0.5, 0.5]);
        assert!(MarkovSource::new(bad, DiscreteDistribution::uniform(2).unwrap()).is_err());
        let ok = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(MarkovSource::new(ok.clone(), DiscreteDistribution::uniform(3).unwrap()).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[1.5, -0.5, 0.5, 0.5]);
        assert!(MarkovSource::new(neg, DiscreteDistribution::uniform(2).unwrap()).is_err());
        assert!(MarkovSource::new(ok, DiscreteDistribution::uniform(2).unwrap()).is_ok());
    }

    #[test]
    fn weighted_examples() {
        let u = MarkovSource::uniform(2).unwrap();
        let w = build_weighted(&u, &u, a(2.0)).unwrap();
        assert_eq!(w.entries, DMatrix::from_element(2, 2, 0.25));
        assert_eq!(w.start_weights, DVector::from_element(2, 0.25));

        let p = chain(&[0.3, 0.7, 0.6, 0.4], 2);
        let w = build_weighted(&p, &u, a(2.0)).unwrap();
        assert_relative_eq!(w.entries, p.transition() / 2.0, epsilon = 1e-15);

        let p = chain(&[0.9, 0.1, 0.2, 0.8], 2);
        let w = build_weighted(&p, &p, a(3.0)).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.729, 0.001, 0.008, 0.512]);
        assert_relative_eq!(w.entries, expected, epsilon = 1e-15);
    }

    #[test]
    fn zero_transitions() {
        let p = chain(&[0.5, 0.5, 0.5, 0.5], 2);
        let q = chain(&[1.0, 0.0, 0.5, 0.5], 2);
        assert_eq!(build_weighted(&p, &q, a(0.5)), Err(Error::ZeroTransition { from: 0, to: 1 }));
        let w = build_weighted(&p, &q, a(2.0)).unwrap();
        assert_eq!(w.entries[(0, 1)], 0.0);
        let q0 = MarkovSource::new(
            DMatrix::from_element(2, 2, 0.5),
            DiscreteDistribution::new(vec![1.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(build_weighted(&p, &q0, a(0.5)), Err(Error::ZeroMass(1)));
        assert!(build_weighted(&p, &MarkovSource::uniform(3).unwrap(), a(2.0)).is_err());
    }

    #[test]
    fn classify_examples() {
        let cs = classify(&DMatrix::from_element(3, 3, 0.2));
        assert!(cs.is_irreducible());

        let cs = classify(&DMatrix::from_row_slice(2, 2, &[0.3, 0.0, 0.0, 0.6]));
        assert_eq!(cs.classes, vec![vec![0], vec![1]]);
        assert_eq!(cs.kinds, vec![ClassKind::SelfCommunicating; 2]);
        assert!(!cs.reach[0][1] && !cs.reach[1][0]);

        let cs = classify(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(cs.kinds, vec![ClassKind::Inessential, ClassKind::Inessential]);
        assert!(cs.reach[cs.class_of(0)][cs.class_of(1)]);
        assert!(!cs.reach[cs.class_of(1)][cs.class_of(0)]);
    }

    #[test]
    fn perron_examples() {
        assert_relative_eq!(perron_eigenvalue(&DMatrix::from_element(2, 2, 0.25)).unwrap(), 0.5, epsilon = 1e-15);
        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_relative_eq!(perron_eigenvalue(&swap).unwrap(), 1.0, epsilon = 1e-14);
        let r = DMatrix::from_row_slice(2, 2, &[0.729, 0.001, 0.008, 0.512]);
        let l = perron_eigenvalue(&r).unwrap();
        assert_relative_eq!(l, two_by_two_root(&r), max_relative = 1e-13);
        assert!((l - 0.72904).abs() < 1e-5);
        assert_eq!(
            perron_eigenvalue(&DMatrix::from_row_slice(2, 2, &[0.3, 0.0, 0.0, 0.6])),
            Err(Error::NotIrreducible)
        );
    }

    #[test]
    fn perron_residual_and_periodic_cycle() {
        let cycle = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 0.0, 0.0, 0.0, 3.0, 0.5, 0.0, 0.0]);
        let (l, b) = perron_pair(&cycle).unwrap();
        assert_relative_eq!(l, 3f64.cbrt(), max_relative = 1e-13);
        let res = (&cycle * &b - &b * l).amax();
        assert!(res <= 1e-12 * l);
        assert!(b.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn perron_scales() {
        let m = DMatrix::from_row_slice(3, 3, &[0.2, 0.5, 0.1, 0.3, 0.0, 0.9, 0.4, 0.4, 0.1]);
        let l = perron_eigenvalue(&m).unwrap();
        for c in [0.01, 3.0, 250.0] {
            assert_relative_eq!(perron_eigenvalue(&(&m * c)).unwrap(), c * l, max_relative = 1e-12);
        }
    }

    #[test]
    fn rate_examples() {
        let u = MarkovSource::uniform(2).unwrap();
        assert_relative_eq!(cross_entropy_rate(&u, &u, a(2.0)).unwrap(), LN_2, epsilon = 1e-14);
        let p = chain(&[0.3, 0.7, 0.6, 0.4], 2);
        for al in [0.3, 2.0, 7.0] {
            assert_relative_eq!(cross_entropy_rate(&p, &u, a(al)).unwrap(), LN_2, epsilon = 1e-13);
        }
        assert_relative_eq!(cross_entropy_rate(&p, &u, AlphaOrder::ONE).unwrap(), LN_2, epsilon = 1e-14);

        let id = chain(&[1.0, 0.0, 0.0, 1.0], 2);
        let q = chain(&[0.9, 0.1, 0.2, 0.8], 2);
        let v = cross_entropy_rate(&id, &q, a(2.0)).unwrap();
        assert_relative_eq!(v, -(0.9f64.ln()), epsilon = 1e-14);
        let f = finite_n_cross_entropy(&id, &q, a(2.0), 4000).unwrap();
        assert!((f - v).abs() < 1e-3);
    }

    #[test]
    fn finite_n_examples() {
        let p = chain(&[0.9, 0.1, 0.2, 0.8], 2);
        let q = chain(&[0.6, 0.4, 0.3, 0.7], 2);
        for al in [a(0.5), a(3.0), AlphaOrder::ONE] {
            let one = finite_n_cross_entropy(&p, &q, al, 1).unwrap();
            let marginal = renyi_cross_entropy(p.initial(), q.initial(), al).unwrap();
            assert_relative_eq!(one, marginal, epsilon = 1e-14);
        }
        let u = MarkovSource::uniform(2).unwrap();
        for n in [1, 2, 17, 1000] {
            assert_relative_eq!(finite_n_cross_entropy(&u, &u, a(2.0), n).unwrap(), LN_2, epsilon = 1e-13);
        }
        let v = finite_n_cross_entropy(&p, &p, a(3.0), 4000).unwrap();
        let r = DMatrix::from_row_slice(2, 2, &[0.729, 0.001, 0.008, 0.512]);
        assert!((v - two_by_two_root(&r).ln() / -2.0).abs() < 1e-3);
        assert!((v - 0.15797).abs() < 1e-3);
    }

    #[test]
    fn finite_n_handles_long_horizons() {
        let p = chain(&[0.9, 0.1, 0.2, 0.8], 2);
        let q = chain(&[0.6, 0.4, 0.3, 0.7], 2);
        let v = finite_n_cross_entropy(&p, &q, a(40.0), 1_000_000).unwrap();
        let r = cross_entropy_rate(&p, &q, a(40.0)).unwrap();
        assert!(v.is_finite() && (v - r).abs() < 1e-4);
    }

    #[test]
    fn shannon_rate_against_stationary_formula() {
        let p = chain(&[0.9, 0.1, 0.2, 0.8], 2);
        let q = chain(&[0.6, 0.4, 0.3, 0.7], 2);
        // stationary distribution of p is (2/3, 1/3)
        let exact = -(2.0 / 3.0) * (0.9 * 0.6f64.ln() + 0.1 * 0.4f64.ln())
            - (1.0 / 3.0) * (0.2 * 0.3f64.ln() + 0.8 * 0.7f64.ln());
        assert_relative_eq!(cross_entropy_rate(&p, &q, AlphaOrder::ONE).unwrap(), exact, epsilon = 1e-12);
        let near = cross_entropy_rate(&p, &q, a(1.0 + 1e-6)).unwrap();
        assert!((near - exact).abs() < 1e-4);
    }

    #[test]
    fn reducible_uses_reachable_classes() {
        // state 0 feeds the absorbing state 1; the chain never returns
        let p = chain(&[0.5, 0.5, 0.0, 1.0], 2);
        let q = chain(&[0.5, 0.5, 0.1, 0.9], 2);
        let w = build_weighted(&p, &q, a(2.0)).unwrap();
        let cs = classify(&w.entries);
        assert_eq!(cs.classes.len(), 2);
        let v = cross_entropy_rate(&p, &q, a(2.0)).unwrap();
        // R = [[.25, .25], [0, .9]]: the larger class root wins
        assert_relative_eq!(v, -(0.9f64.ln()), epsilon = 1e-14);
        let f = finite_n_cross_entropy(&p, &q, a(2.0), 4000).unwrap();
        assert!((f - v).abs() < 5e-3);

        // without mass on state 0, its class is unreachable
        let p1 = MarkovSource::new(p.transition().clone(), DiscreteDistribution::new(vec![0.0, 1.0]).unwrap()).unwrap();
        let w = build_weighted(&p1, &q, a(2.0)).unwrap();
        assert_relative_eq!(growth_rate(&w).unwrap(), 0.9, epsilon = 1e-14);
    }
}
