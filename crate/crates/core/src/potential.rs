//! Potentials for the difference constraints `α_k ≤ α_j + β[k][j]`.
//!
//! A solution exists iff no cycle of pair indices has negative β-sum, and
//! it is unique up to an additive constant iff `B[j][k] + B[k][j] = 0` for
//! every pair of indices, where `B` is the all-pairs shortest-path closure
//! of β. Both facts are decided here with exact arithmetic.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::molecule::{beta_matrix, BetaMatrix};
use crate::rational::{render, Rational};

/// A simple cycle of pair indices whose β-sum is negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeCycleWitness {
    /// Distinct pair indices, rotated so the smallest leads.
    pub cycle: Vec<usize>,
    pub sum: Rational,
}

impl NegativeCycleWitness {
    /// Re-sum the cycle from `beta` and confirm it is simple and negative.
    pub fn verify(&self, beta: &BetaMatrix) -> bool {
        let distinct: BTreeSet<_> = self.cycle.iter().collect();
        !self.cycle.is_empty()
            && distinct.len() == self.cycle.len()
            && self.cycle.iter().all(|&i| i < beta.len())
            && beta.cycle_sum(&self.cycle) == self.sum
            && self.sum.is_negative()
    }

    /// Aligned and crossed distance sums of the cycle:
    /// `Σ d(x_i, y_i)` and `Σ d(x_i, y_next(i))`. The witness is genuine
    /// iff aligned > crossed.
    pub fn distance_sums(
        &self,
        space: &FiniteMetricSpace,
        pairs: &[(usize, usize)],
    ) -> (Rational, Rational) {
        let m = self.cycle.len();
        let mut aligned = Rational::zero();
        let mut crossed = Rational::zero();
        for t in 0..m {
            let (x, y) = pairs[self.cycle[t]];
            let (_, y_next) = pairs[self.cycle[(t + 1) % m]];
            aligned += space.d(x, y);
            crossed += space.d(x, y_next);
        }
        (aligned, crossed)
    }

    /// Human-readable form of the violated cyclical-monotonicity inequality,
    /// e.g. `d(a,0) + d(0,b) = 3 > d(a,b) + d(0,0) = 2`.
    pub fn render_inequality(&self, space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> String {
        let m = self.cycle.len();
        let term = |x: usize, y: usize| format!("d({},{})", space.label(x), space.label(y));
        let lhs: Vec<String> = self
            .cycle
            .iter()
            .map(|&i| term(pairs[i].0, pairs[i].1))
            .collect();
        let rhs: Vec<String> = (0..m)
            .map(|t| term(pairs[self.cycle[t]].0, pairs[self.cycle[(t + 1) % m]].1))
            .collect();
        let (aligned, crossed) = self.distance_sums(space, pairs);
        format!(
            "{} = {} > {} = {}",
            lhs.join(" + "),
            render(&aligned),
            rhs.join(" + "),
            render(&crossed)
        )
    }
}

impl fmt::Display for NegativeCycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.cycle.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "({}) with sum {}", idx.join(","), render(&self.sum))
    }
}

/// The shortest-path closure of β together with one anchored solution.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTable {
    /// `closure[j][k]`: minimal β-sum over paths `j -> ... -> k`.
    closure: Vec<Vec<Rational>>,
    /// `next[j][k]`: successor of `j` on a minimizing path to `k`.
    next: Vec<Vec<usize>>,
    /// `alphas[j] = closure[j][anchor]`.
    alphas: Vec<Rational>,
    anchor: usize,
    rigid_pairs: BTreeSet<(usize, usize)>,
    globally_unique: bool,
}

impl PotentialTable {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn closure(&self) -> &[Vec<Rational>] {
        &self.closure
    }

    #[inline]
    pub fn b(&self, j: usize, k: usize) -> &Rational {
        &self.closure[j][k]
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// Unordered pairs `(j, k)`, `j < k`, with `B[j][k] + B[k][j] = 0`.
    pub fn rigid_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.rigid_pairs
    }

    pub fn globally_unique(&self) -> bool {
        self.globally_unique
    }

    /// `B[j][k] + B[k][j]`; never negative.
    pub fn round_trip(&self, j: usize, k: usize) -> Rational {
        self.b(j, k) + self.b(k, j)
    }

    /// The relaxed rigidity used for infinite families: `B[j][k] + B[k][j] < eps`.
    pub fn is_eps_rigid(&self, j: usize, k: usize, eps: &Rational) -> bool {
        &self.round_trip(j, k) < eps
    }

    /// The alternative anchored solution `α_j = -B[q][j]`.
    pub fn alphas_from_anchor_row(&self) -> Vec<Rational> {
        (0..self.len())
            .map(|j| -self.b(self.anchor, j).clone())
            .collect()
    }

    /// A minimizing path `j -> ... -> k` (inclusive, `[j]` when `j == k`).
    pub fn path(&self, j: usize, k: usize) -> Vec<usize> {
        let mut path = vec![j];
        let mut at = j;
        while at != k {
            at = self.next[at][k];
            path.push(at);
            assert!(path.len() <= self.len(), "closure path is not simple");
        }
        path
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Closure {
    Table(PotentialTable),
    NegativeCycle(NegativeCycleWitness),
}

impl Closure {
    pub fn table(self) -> Option<PotentialTable> {
        match self {
            Closure::Table(t) => Some(t),
            Closure::NegativeCycle(_) => None,
        }
    }
}

/// All-pairs shortest β-paths by a Floyd–Warshall triple loop.
///
/// Returns a simple negative cycle as soon as one exists, otherwise the
/// closure, the solution anchored at pair 0 and the rigidity data.
pub fn closure(beta: &BetaMatrix) -> Closure {
    let n = beta.len();
    let mut dist: Vec<Vec<Rational>> = beta.rows().to_vec();
    let mut next: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();

    for k in 0..n {
        // Pointers from before this round describe simple paths; a negative
        // diagonal produced in this round is rebuilt from them.
        let snapshot = next.clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in 0..n {
                if j == k {
                    continue;
                }
                let via = &dist[i][k] + &dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                    next[i][j] = next[i][k];
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| dist[i][i].is_negative()) {
            let walk = closed_walk(&snapshot, i, k);
            return Closure::NegativeCycle(best_simple_cycle(beta, &walk));
        }
    }

    let anchor = 0;
    let alphas = (0..n).map(|j| dist[j][anchor].clone()).collect();
    let mut rigid_pairs = BTreeSet::new();
    for j in 0..n {
        for k in (j + 1)..n {
            if (&dist[j][k] + &dist[k][j]).is_zero() {
                rigid_pairs.insert((j, k));
            }
        }
    }
    let globally_unique = rigid_pairs.len() == n * n.saturating_sub(1) / 2;
    Closure::Table(PotentialTable {
        closure: dist,
        next,
        alphas,
        anchor,
        rigid_pairs,
        globally_unique,
    })
}

/// The closed walk `i -> k -> i` described by the successor pointers.
fn closed_walk(next: &[Vec<usize>], i: usize, k: usize) -> Vec<usize> {
    let n = next.len();
    let mut walk = vec![i];
    let mut at = i;
    for target in [k, i] {
        while at != target {
            at = next[at][target];
            walk.push(at);
            assert!(walk.len() <= 2 * n + 1, "successor pointers loop");
        }
    }
    walk.pop(); // drop the repeated start
    walk
}

/// Split a closed walk into simple cycles and keep the most negative one.
fn best_simple_cycle(beta: &BetaMatrix, walk: &[usize]) -> NegativeCycleWitness {
    let mut cycles = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &v in walk.iter().chain(std::iter::once(&walk[0])) {
        if let Some(pos) = stack.iter().position(|&u| u == v) {
            cycles.push(stack.split_off(pos));
        }
        stack.push(v);
    }
    let best = cycles
        .into_iter()
        .map(|c| {
            let c = canonical_rotation(c);
            let s = beta.cycle_sum(&c);
            (s, c)
        })
        .min()
        .expect("a closed walk contains a cycle");
    assert!(
        best.0.is_negative(),
        "negative walk without a negative cycle"
    );
    NegativeCycleWitness {
        cycle: best.1,
        sum: best.0,
    }
}

/// Rotate a cycle so its smallest index leads.
pub fn canonical_rotation(mut cycle: Vec<usize>) -> Vec<usize> {
    if let Some(pos) = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(p, _)| p)
    {
        cycle.rotate_left(pos);
    }
    cycle
}

/// A zero-sum cycle through both `j` and `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidChain {
    pub cycle: Vec<usize>,
    /// False when no simple zero cycle through both indices exists and
    /// `cycle` is a closed walk that revisits some index.
    pub simple: bool,
}

/// A zero-sum cycle containing `j` and `k`, or `None` when the pair is not
/// rigid. Prefers the concatenation of the two minimizing paths; falls back
/// to a search over tight arcs when that concatenation repeats an index.
pub fn rigid_chain(
    beta: &BetaMatrix,
    table: &PotentialTable,
    j: usize,
    k: usize,
) -> Result<Option<RigidChain>> {
    if j == k {
        return Err(Error::invalid("rigid_chain needs two different indices"));
    }
    if j >= table.len() || k >= table.len() {
        return Err(Error::invalid("pair index out of range"));
    }
    if !table.round_trip(j, k).is_zero() {
        return Ok(None);
    }
    let mut walk = table.path(j, k);
    let back = table.path(k, j);
    walk.extend_from_slice(&back[1..back.len() - 1]);
    let distinct: BTreeSet<_> = walk.iter().collect();
    if distinct.len() == walk.len() {
        return Ok(Some(RigidChain {
            cycle: walk,
            simple: true,
        }));
    }
    if let Some(cycle) = simple_tight_cycle(beta, table, j, k) {
        return Ok(Some(RigidChain {
            cycle,
            simple: true,
        }));
    }
    Ok(Some(RigidChain {
        cycle: walk,
        simple: false,
    }))
}

/// Depth-first search for a simple cycle `j -> ... -> k -> ... -> j` using
/// only arcs with `α_a - α_b = β[a][b]`; exactly the arcs a zero cycle may use.
fn simple_tight_cycle(
    beta: &BetaMatrix,
    table: &PotentialTable,
    j: usize,
    k: usize,
) -> Option<Vec<usize>> {
    let alphas = table.alphas();
    let n = beta.len();
    let tight = |a: usize, b: usize| a != b && &alphas[a] - &alphas[b] == *beta.get(a, b);

    fn dfs(
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        seen_k: bool,
        j: usize,
        k: usize,
        n: usize,
        tight: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let at = *path.last().unwrap();
        if seen_k && tight(at, j) {
            return true;
        }
        for b in 0..n {
            if !on_path[b] && tight(at, b) {
                on_path[b] = true;
                path.push(b);
                if dfs(path, on_path, seen_k || b == k, j, k, n, tight) {
                    return true;
                }
                path.pop();
                on_path[b] = false;
            }
        }
        false
    }

    let mut path = vec![j];
    let mut on_path = vec![false; n];
    on_path[j] = true;
    dfs(&mut path, &mut on_path, false, j, k, n, &tight).then_some(path)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CyclicalMonotonicity {
    Holds,
    Fails(NegativeCycleWitness),
}

impl CyclicalMonotonicity {
    pub fn holds(&self) -> bool {
        matches!(self, CyclicalMonotonicity::Holds)
    }
}

/// Does every cycle of pairs satisfy
/// `Σ d(x_i, y_i) ≤ Σ d(x_i, y_next(i))`?
pub fn check_cyclical_monotonicity(
    space: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
) -> Result<CyclicalMonotonicity> {
    let beta = beta_matrix(space, pairs)?;
    Ok(match closure(&beta) {
        Closure::Table(_) => CyclicalMonotonicity::Holds,
        Closure::NegativeCycle(w) => CyclicalMonotonicity::Fails(w),
    })
}
