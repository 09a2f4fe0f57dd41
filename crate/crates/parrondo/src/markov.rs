//! Finite discrete-time Markov chains: row-stochastic transition matrices,
//! distribution evolution, irreducibility/regularity classification, and
//! stationary distributions.
//!
//! States are indexed `0..n-1`; callers keep any semantic labeling (capital
//! residues, named states). All types are immutable after construction and
//! every operation is a pure function of its inputs, so everything here is
//! safe to share across threads.

use serde::Serialize;
use thiserror::Error;

/// Absolute tolerance on row sums (and vector sums). Rows whose sums deviate
/// from 1 by less than this are renormalized on construction; larger
/// deviations are rejected as modeling bugs.
pub const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// Residual bound `‖wP − w‖∞` that a computed stationary vector must satisfy.
pub const STATIONARY_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Iteration cap for the power-iteration fallback.
pub const POWER_ITERATION_MAX: usize = 100_000;

/// Max-minus-min gap at which power iteration is considered converged.
pub const POWER_ITERATION_GAP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarkovError {
    #[error("matrix has no rows")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry ({row}, {col}) is negative or not finite")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} sums to {sum:e}, more than {ROW_SUM_TOLERANCE:e} away from 1")]
    RowSumError { row: usize, sum: f64 },
    #[error("vector entry {index} is negative or not finite")]
    VectorNegativeEntry { index: usize },
    #[error("vector sums to {sum:e}, more than {ROW_SUM_TOLERANCE:e} away from 1")]
    VectorSumError { sum: f64 },
    #[error("dimension mismatch: vector has length {vector}, matrix has {matrix} states")]
    DimensionMismatch { vector: usize, matrix: usize },
    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("stationary linear system is numerically singular")]
    SingularSystem,
    #[error("power iteration did not converge after {iterations} iterations (gap {gap:e})")]
    DidNotConverge { iterations: usize, gap: f64 },
    #[error(
        "entry ({row}, {col}) is zero; the contraction bound requires strictly positive entries"
    )]
    ZeroEntry { row: usize, col: usize },
}

/// Square row-stochastic matrix: `entry(i, j)` is the probability of moving
/// from state `i` to state `j` in one step.
///
/// Invariants enforced at construction: every entry lies in `[0, 1]` and
/// every row sums to 1 within [`ROW_SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<f64>, // row-major, n*n
}

impl TransitionMatrix {
    /// Validates `rows` as a row-stochastic matrix. Rows whose sums are
    /// within [`ROW_SUM_TOLERANCE`] of 1 are renormalized exactly.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, MarkovError> {
        let n = rows.len();
        if n == 0 {
            return Err(MarkovError::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MarkovError::NonSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            for (j, &e) in row.iter().enumerate() {
                if e < 0.0 || !e.is_finite() {
                    return Err(MarkovError::NegativeEntry { row: i, col: j });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(MarkovError::RowSumError { row: i, sum });
            }
            entries.extend(row.iter().map(|&e| e / sum));
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { n, entries }
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.n)
    }

    /// Product of two stochastic matrices, with rows renormalized to absorb
    /// floating-point drift. Panics on dimension mismatch (internal use).
    fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions must agree");
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a == 0.0 {
                    continue;
                }
                let other_row = other.row(k);
                let out_row = &mut entries[i * n..(i + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        for row in entries.chunks_exact_mut(n) {
            let sum: f64 = row.iter().sum();
            debug_assert!(
                (sum - 1.0).abs() < 1e-9,
                "stochastic product drifted: {sum}"
            );
            for e in row.iter_mut() {
                *e /= sum;
            }
        }
        Self { n, entries }
    }

    /// `P^n` by binary exponentiation; `P^0` is the identity. The result is
    /// renormalized at each product so it always satisfies the invariants.
    pub fn pow(&self, mut n: usize) -> Self {
        let mut result = Self::identity(self.n);
        if n == 0 {
            return result;
        }
        let mut base = self.clone();
        loop {
            if n & 1 == 1 {
                result = result.multiply(&base);
            }
            n >>= 1;
            if n == 0 {
                return result;
            }
            base = base.multiply(&base);
        }
    }

    /// True iff the directed graph with an edge `i → j` whenever
    /// `entry(i, j) > 0` is strongly connected. Works on the positivity
    /// pattern only; no floating-point products are involved.
    pub fn is_irreducible(&self) -> bool {
        self.reachable_forward() && self.reachable_backward()
    }

    fn reachable_forward(&self) -> bool {
        self.bfs_covers(|from, to| self.entry(from, to) > 0.0)
    }

    fn reachable_backward(&self) -> bool {
        self.bfs_covers(|from, to| self.entry(to, from) > 0.0)
    }

    fn bfs_covers(&self, has_edge: impl Fn(usize, usize) -> bool) -> bool {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for (w, visited) in seen.iter_mut().enumerate() {
                if !*visited && has_edge(v, w) {
                    *visited = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// True iff some power `P^k` with `1 ≤ k ≤ (n−1)² + 1` (the Wielandt
    /// bound) has a strictly positive pattern. Computed with boolean
    /// pattern products, so small entries cannot underflow to zero.
    pub fn is_regular(&self) -> bool {
        let n = self.n;
        let base: Vec<bool> = self.entries.iter().map(|&e| e > 0.0).collect();
        let bound = (n - 1) * (n - 1) + 1;
        let mut current = base.clone();
        for _ in 0..bound {
            if current.iter().all(|&b| b) {
                return true;
            }
            current = bool_product(&current, &base, n);
        }
        current.iter().all(|&b| b)
    }

    /// Stationary distribution `w` with `wP = w` and `Σ w_i = 1`.
    ///
    /// Requires an irreducible chain. The primary method is the direct
    /// linear solve of `(Pᵀ − I) wᵀ = 0` with one equation replaced by the
    /// normalization `Σ w_i = 1`; if that solve degenerates numerically,
    /// power iteration is used as a fallback — but only for regular chains,
    /// since periodic chains do not converge pointwise. The report carries
    /// the power-iteration diagnostics when the fallback runs.
    pub fn stationary(&self) -> Result<(ProbabilityVector, ConvergenceReport), MarkovError> {
        if !self.is_irreducible() {
            return Err(MarkovError::NotIrreducible);
        }
        match self.stationary_direct() {
            Ok(w) => Ok((w, ConvergenceReport::direct())),
            Err(_) if self.is_regular() => self.stationary_power_iteration(),
            Err(e) => Err(e),
        }
    }

    fn stationary_direct(&self) -> Result<ProbabilityVector, MarkovError> {
        let n = self.n;
        // Unknowns w_0..w_{n-1}; equation r (< n-1): Σ_i w_i p_ir − w_r = 0,
        // final equation: Σ_i w_i = 1.
        let mut a = vec![0.0; n * n];
        let mut b = vec![0.0; n];
        for r in 0..n - 1 {
            for i in 0..n {
                a[r * n + i] = self.entry(i, r) - if i == r { 1.0 } else { 0.0 };
            }
        }
        for i in 0..n {
            a[(n - 1) * n + i] = 1.0;
        }
        b[n - 1] = 1.0;
        let w = solve_dense(a, b, n)?;
        self.finish_stationary(w)
    }

    fn finish_stationary(&self, mut w: Vec<f64>) -> Result<ProbabilityVector, MarkovError> {
        for e in w.iter_mut() {
            if *e < 0.0 {
                if *e < -STATIONARY_RESIDUAL_TOLERANCE {
                    return Err(MarkovError::SingularSystem);
                }
                *e = 0.0;
            }
        }
        // The solver can hand back NaN from a degenerate system; reject it
        // along with any badly denormalized solution.
        let sum: f64 = w.iter().sum();
        if sum.is_nan() || (sum - 1.0).abs() > 1e-8 {
            return Err(MarkovError::SingularSystem);
        }
        for e in w.iter_mut() {
            *e /= sum;
        }
        if self.residual(&w) > STATIONARY_RESIDUAL_TOLERANCE {
            return Err(MarkovError::SingularSystem);
        }
        ProbabilityVector::new(w)
    }

    /// `‖wP − w‖∞` for a candidate stationary vector.
    pub fn residual(&self, w: &[f64]) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            let acc: f64 = w
                .iter()
                .enumerate()
                .map(|(i, &wi)| wi * self.entry(i, j))
                .sum();
            worst = worst.max((acc - w[j]).abs());
        }
        worst
    }

    fn stationary_power_iteration(
        &self,
    ) -> Result<(ProbabilityVector, ConvergenceReport), MarkovError> {
        let n = self.n;
        // Iterate M ← M·P starting at M = P; when every column of P^k is
        // nearly constant, each row approximates w.
        let mut m = self.clone();
        let mut gaps = Vec::new();
        let mut gap = column_gap(&m);
        gaps.push(gap);
        let mut iterations = 1usize;
        while gap > POWER_ITERATION_GAP_TOLERANCE && iterations < POWER_ITERATION_MAX {
            m = m.multiply(self);
            iterations += 1;
            gap = column_gap(&m);
            gaps.push(gap);
        }
        if gap > POWER_ITERATION_GAP_TOLERANCE {
            return Err(MarkovError::DidNotConverge { iterations, gap });
        }
        // Average the rows to symmetrize leftover noise.
        let mut w = vec![0.0; n];
        for row in m.rows() {
            for (acc, &e) in w.iter_mut().zip(row) {
                *acc += e;
            }
        }
        for e in w.iter_mut() {
            *e /= n as f64;
        }
        let min_entry = self.entries.iter().cloned().fold(f64::INFINITY, f64::min);
        let report = ConvergenceReport {
            iterations,
            final_gap: gap,
            contraction_factor_bound: if min_entry > 0.0 {
                Some(1.0 - 2.0 * min_entry)
            } else {
                None
            },
            gaps,
            used_power_iteration: true,
        };
        let w = self.finish_stationary(w)?;
        Ok((w, report))
    }

    /// Demonstrates the averaging contraction on an all-positive matrix:
    /// iterates `y ← P·y` (column-vector action) for `steps` steps,
    /// recording the max-minus-min gap after each application. The gap
    /// sequence is checked against the `(1 − 2d)^k` envelope, where `d` is
    /// the smallest entry of `P`; a violation is a library bug and panics.
    pub fn contraction_diagnostics(
        &self,
        y: &[f64],
        steps: usize,
    ) -> Result<ConvergenceReport, MarkovError> {
        let n = self.n;
        if y.len() != n {
            return Err(MarkovError::DimensionMismatch {
                vector: y.len(),
                matrix: n,
            });
        }
        let mut d = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let e = self.entry(i, j);
                if e == 0.0 {
                    return Err(MarkovError::ZeroEntry { row: i, col: j });
                }
                d = d.min(e);
            }
        }
        let factor = 1.0 - 2.0 * d;
        let mut current = y.to_vec();
        let initial_gap = spread(&current);
        let mut gaps = vec![initial_gap];
        let slack = 1e-12 * (1.0 + initial_gap);
        let mut envelope = initial_gap;
        for step in 1..=steps {
            let mut next = vec![0.0; n];
            for (i, out) in next.iter_mut().enumerate() {
                *out = self.row(i).iter().zip(&current).map(|(&p, &v)| p * v).sum();
            }
            current = next;
            let gap = spread(&current);
            envelope *= factor;
            assert!(
                gap <= envelope + slack,
                "contraction envelope violated at step {step}: gap {gap:e} > bound {envelope:e}"
            );
            assert!(
                gap <= gaps[step - 1] + slack,
                "gap sequence increased at step {step}"
            );
            gaps.push(gap);
        }
        Ok(ConvergenceReport {
            iterations: steps,
            final_gap: *gaps.last().expect("gaps is nonempty"),
            contraction_factor_bound: Some(factor),
            gaps,
            used_power_iteration: false,
        })
    }
}

/// Nonnegative row vector summing to 1; a distribution over chain states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates entries and renormalizes sums within [`ROW_SUM_TOLERANCE`].
    pub fn new(probs: Vec<f64>) -> Result<Self, MarkovError> {
        if probs.is_empty() {
            return Err(MarkovError::Empty);
        }
        for (i, &e) in probs.iter().enumerate() {
            if e < 0.0 || !e.is_finite() {
                return Err(MarkovError::VectorNegativeEntry { index: i });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(MarkovError::VectorSumError { sum });
        }
        Ok(Self {
            probs: probs.into_iter().map(|e| e / sum).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on state `i`.
    pub fn point(n: usize, i: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[i] = 1.0;
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Distribution after `steps` steps of the chain: `q·P^steps`, computed
    /// by successive vector-matrix products rather than by forming `P^n`.
    pub fn evolve(
        &self,
        matrix: &TransitionMatrix,
        steps: usize,
    ) -> Result<ProbabilityVector, MarkovError> {
        let n = matrix.n_states();
        if self.probs.len() != n {
            return Err(MarkovError::DimensionMismatch {
                vector: self.probs.len(),
                matrix: n,
            });
        }
        let mut q = self.probs.clone();
        for _ in 0..steps {
            let mut next = vec![0.0; n];
            for (i, &qi) in q.iter().enumerate() {
                if qi == 0.0 {
                    continue;
                }
                for (nj, &p) in next.iter_mut().zip(matrix.row(i)) {
                    *nj += qi * p;
                }
            }
            let sum: f64 = next.iter().sum();
            for e in next.iter_mut() {
                *e /= sum;
            }
            q = next;
        }
        Ok(ProbabilityVector { probs: q })
    }
}

/// Diagnostics from an iterative computation: step count, the final
/// max-minus-min gap, and the `(1 − 2d)` contraction factor when the matrix
/// is strictly positive. `gaps` holds the full recorded gap sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub iterations: usize,
    pub final_gap: f64,
    pub contraction_factor_bound: Option<f64>,
    pub gaps: Vec<f64>,
    pub used_power_iteration: bool,
}

impl ConvergenceReport {
    fn direct() -> Self {
        Self {
            iterations: 0,
            final_gap: 0.0,
            contraction_factor_bound: None,
            gaps: Vec::new(),
            used_power_iteration: false,
        }
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// Largest max-minus-min spread over the columns of `m`.
fn column_gap(m: &TransitionMatrix) -> f64 {
    let n = m.n_states();
    let mut worst = 0.0f64;
    for j in 0..n {
        let mut max = f64::NEG_INFINITY;
        let mut min = f64::INFINITY;
        for i in 0..n {
            let e = m.entry(i, j);
            max = max.max(e);
            min = min.min(e);
        }
        worst = worst.max(max - min);
    }
    worst
}

/// Boolean matrix product on positivity patterns.
fn bool_product(a: &[bool], b: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] {
                for j in 0..n {
                    if b[k * n + j] {
                        out[i * n + j] = true;
                    }
                }
            }
        }
    }
    out
}

/// Gaussian elimination with partial pivoting on a dense row-major system.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>, MarkovError> {
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].abs();
        for r in col + 1..n {
            let mag = a[r * n + col].abs();
            if mag > pivot_mag {
                pivot_row = r;
                pivot_mag = mag;
            }
        }
        if pivot_mag < 1e-14 {
            return Err(MarkovError::SingularSystem);
        }
        if pivot_row != col {
            for c in 0..n {
                a.swap(col * n + c, pivot_row * n + c);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= factor * a[col * n + c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row * n + c] * x[c];
        }
        x[row] = acc / a[row * n + row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fixture: daily bookstore-customer chain.
    fn bookstore() -> TransitionMatrix {
        TransitionMatrix::from_rows(vec![
            vec![0.25, 0.5, 0.25],
            vec![0.0, 0.5, 0.5],
            vec![0.33, 0.33, 0.34],
        ])
        .expect("fixture is stochastic")
    }

    fn flip_flop() -> TransitionMatrix {
        TransitionMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
            assert!(
                (a - e).abs() <= tol,
                "component {i}: {a} vs {e} (tol {tol:e})"
            );
        }
    }

    #[test]
    fn identity_is_valid() {
        let m = TransitionMatrix::from_rows(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(m.n_states(), 3);
        assert_eq!(m, TransitionMatrix::identity(3));
    }

    #[test]
    fn bookstore_is_valid() {
        assert_eq!(bookstore().n_states(), 3);
    }

    #[test]
    fn bad_row_sum_is_rejected() {
        let err = TransitionMatrix::from_rows(vec![vec![0.5, 0.6], vec![0.2, 0.8]]).unwrap_err();
        match err {
            MarkovError::RowSumError { row, sum } => {
                assert_eq!(row, 0);
                assert!((sum - 1.1).abs() < 1e-12);
            }
            other => panic!("expected RowSumError, got {other:?}"),
        }
    }

    #[test]
    fn negative_and_nan_entries_are_rejected() {
        let err = TransitionMatrix::from_rows(vec![vec![1.5, -0.5], vec![0.5, 0.5]]).unwrap_err();
        assert_eq!(err, MarkovError::NegativeEntry { row: 0, col: 1 });
        let err =
            TransitionMatrix::from_rows(vec![vec![f64::NAN, 1.0], vec![0.5, 0.5]]).unwrap_err();
        assert_eq!(err, MarkovError::NegativeEntry { row: 0, col: 0 });
    }

    #[test]
    fn non_square_is_rejected() {
        let err = TransitionMatrix::from_rows(vec![vec![1.0], vec![0.5, 0.5]]).unwrap_err();
        assert!(matches!(err, MarkovError::NonSquare { row: 0, .. }));
        assert_eq!(
            TransitionMatrix::from_rows(Vec::new()).unwrap_err(),
            MarkovError::Empty
        );
    }

    #[test]
    fn bookstore_square_matches_hand_computed_values() {
        let p2 = bookstore().pow(2);
        let expected = [
            [0.145, 0.4575, 0.3975],
            [0.165, 0.415, 0.42],
            [0.1947, 0.4422, 0.3631],
        ];
        for (i, row) in expected.iter().enumerate() {
            assert_close(p2.row(i), row, 1e-12);
        }
    }

    #[test]
    fn pow_zero_is_identity_and_pow_one_is_self() {
        let p = bookstore();
        assert_eq!(p.pow(0), TransitionMatrix::identity(3));
        let p1 = p.pow(1);
        for i in 0..3 {
            assert_close(p1.row(i), p.row(i), 1e-15);
        }
    }

    #[test]
    fn evolve_matches_bookstore_second_day() {
        let q = ProbabilityVector::new(vec![0.0, 0.5, 0.5]).unwrap();
        let q1 = q.evolve(&bookstore(), 1).unwrap();
        assert_close(q1.as_slice(), &[0.165, 0.415, 0.420], 1e-12);
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let q = ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let out = q.evolve(&bookstore(), 0).unwrap();
        assert_close(out.as_slice(), q.as_slice(), 0.0);
    }

    #[test]
    fn evolve_traces_two_cycle() {
        let q = ProbabilityVector::point(2, 0);
        let out = q.evolve(&flip_flop(), 3).unwrap();
        assert_close(out.as_slice(), &[0.0, 1.0], 0.0);
    }

    #[test]
    fn evolve_rejects_dimension_mismatch() {
        let q = ProbabilityVector::point(2, 0);
        let err = q.evolve(&bookstore(), 1).unwrap_err();
        assert_eq!(
            err,
            MarkovError::DimensionMismatch {
                vector: 2,
                matrix: 3
            }
        );
    }

    #[test]
    fn irreducibility_classification() {
        assert!(bookstore().is_irreducible());
        assert!(flip_flop().is_irreducible());
        let absorbing = TransitionMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert!(!absorbing.is_irreducible());
    }

    #[test]
    fn regularity_classification() {
        assert!(bookstore().is_regular());
        // Irreducible but periodic: never regular.
        assert!(!flip_flop().is_regular());
        assert!(!TransitionMatrix::identity(2).is_regular());
    }

    #[test]
    fn stationary_of_flip_flop_is_half_half() {
        let (w, report) = flip_flop().stationary().unwrap();
        assert_close(w.as_slice(), &[0.5, 0.5], 1e-15);
        assert!(!report.used_power_iteration);
    }

    #[test]
    fn stationary_of_bookstore_is_fixed() {
        let (w, _) = bookstore().stationary().unwrap();
        assert!(bookstore().residual(w.as_slice()) <= STATIONARY_RESIDUAL_TOLERANCE);
        assert!(w.as_slice().iter().all(|&e| e > 0.0));
    }

    #[test]
    fn stationary_rejects_reducible_chains() {
        let absorbing = TransitionMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert_eq!(
            absorbing.stationary().unwrap_err(),
            MarkovError::NotIrreducible
        );
    }

    #[test]
    fn power_iteration_fallback_agrees_with_direct_solve() {
        let p = bookstore();
        let (direct, _) = p.stationary().unwrap();
        let (fallback, report) = p.stationary_power_iteration().unwrap();
        assert_close(fallback.as_slice(), direct.as_slice(), 1e-10);
        assert!(report.used_power_iteration);
        assert!(report.final_gap <= POWER_ITERATION_GAP_TOLERANCE);
        // Gap sequence never increases for this all-positive-by-square chain.
        for pair in report.gaps.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15);
        }
    }

    #[test]
    fn contraction_gap_is_zero_for_constant_vector() {
        let p = bookstore().pow(2); // strictly positive
        let report = p.contraction_diagnostics(&[0.7, 0.7, 0.7], 4).unwrap();
        assert!(report.gaps.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn contraction_envelope_on_bookstore_square() {
        let p = bookstore().pow(2); // min entry d = 0.145
        let report = p.contraction_diagnostics(&[1.0, 0.0, 0.0], 5).unwrap();
        let bound = report.contraction_factor_bound.unwrap();
        assert!((bound - 0.71).abs() < 1e-12);
        let mut envelope = report.gaps[0];
        for &gap in &report.gaps[1..] {
            envelope *= bound;
            assert!(gap <= envelope + 1e-12);
        }
        assert_eq!(report.iterations, 5);
    }

    #[test]
    fn rank_one_matrix_contracts_in_one_step() {
        let p = TransitionMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let report = p.contraction_diagnostics(&[3.0, -1.0], 3).unwrap();
        assert!(report.gaps[1] == 0.0 && report.final_gap == 0.0);
    }

    #[test]
    fn contraction_requires_positive_entries() {
        let err = bookstore()
            .contraction_diagnostics(&[1.0, 0.0, 0.0], 2)
            .unwrap_err();
        assert_eq!(err, MarkovError::ZeroEntry { row: 1, col: 0 });
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            ProbabilityVector::new(vec![0.5, 0.6]).unwrap_err(),
            MarkovError::VectorSumError { .. }
        ));
        assert!(matches!(
            ProbabilityVector::new(vec![1.5, -0.5]).unwrap_err(),
            MarkovError::VectorNegativeEntry { index: 1 }
        ));
    }
}
