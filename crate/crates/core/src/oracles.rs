//! Brute-force reference implementations for small instances.
//!
//! These share no code with the fast paths beyond the data types: cycles
//! are enumerated exhaustively, and the free norm and norming functions are
//! read off an explicit list of vertices of the dual unit ball.

use std::collections::{BTreeSet, HashSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::molecule::{to_point_masses, BetaMatrix, MoleculeSystem, PointMassElement};
use crate::rational::Rational;

pub const MAX_CYCLE_ORACLE_SIZE: usize = 8;
pub const MAX_DUAL_ORACLE_POINTS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteCycles {
    /// Least β-sum over all simple cycles, including the trivial ones
    /// (so never positive).
    pub min_sum: Rational,
    /// A cycle attaining `min_sum`, smallest index first.
    pub cycle: Vec<usize>,
}

/// Exhaustive search over simple cycles of length at most `max_len`
/// (default: the matrix size).
pub fn brute_cycles(beta: &BetaMatrix, max_len: Option<usize>) -> Result<BruteCycles> {
    let n = beta.len();
    if n > MAX_CYCLE_ORACLE_SIZE {
        return Err(Error::ResourceLimit {
            what: "matrix size for the cycle oracle",
            got: n,
            limit: MAX_CYCLE_ORACLE_SIZE,
        });
    }
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    let max_len = max_len.unwrap_or(n).clamp(1, n);
    let mut best = BruteCycles {
        min_sum: Rational::zero(),
        cycle: vec![0],
    };

    // Cycles are enumerated from their smallest index, visiting only larger
    // indices afterwards.
    fn grow(
        beta: &BetaMatrix,
        path: &mut Vec<usize>,
        sum: &Rational,
        max_len: usize,
        best: &mut BruteCycles,
    ) {
        let start = path[0];
        let last = *path.last().unwrap();
        let closed = sum + beta.get(last, start);
        if closed < best.min_sum {
            best.min_sum = closed;
            best.cycle = path.clone();
        }
        if path.len() == max_len {
            return;
        }
        for next in (start + 1)..beta.len() {
            if !path.contains(&next) {
                let s = sum + beta.get(last, next);
                path.push(next);
                grow(beta, path, &s, max_len, best);
                path.pop();
            }
        }
    }

    for start in 0..n {
        grow(
            beta,
            &mut vec![start],
            &Rational::zero(),
            max_len,
            &mut best,
        );
    }
    Ok(best)
}

/// Every vertex of `{f : f(base) = 0, |f(p) - f(q)| ≤ d(p, q)}`.
///
/// A vertex is fixed by a spanning tree of tight constraints, so each one
/// arises by growing an assignment from the base, giving a new point the
/// value `f(u) ± d(u, v)` for an assigned neighbour `u` and discarding
/// partial assignments that already break the Lipschitz bound.
pub fn dual_vertices(space: &FiniteMetricSpace) -> Result<Vec<Vec<Rational>>> {
    let n = space.len();
    if n > MAX_DUAL_ORACLE_POINTS {
        return Err(Error::ResourceLimit {
            what: "point count for the dual oracle",
            got: n,
            limit: MAX_DUAL_ORACLE_POINTS,
        });
    }
    let mut start = vec![None; n];
    start[space.base()] = Some(Rational::zero());
    let mut seen: HashSet<Vec<Option<Rational>>> = HashSet::new();
    let mut stack = vec![start.clone()];
    seen.insert(start);
    let mut vertices: BTreeSet<Vec<Rational>> = BTreeSet::new();
    while let Some(state) = stack.pop() {
        if state.iter().all(Option::is_some) {
            vertices.insert(state.into_iter().map(Option::unwrap).collect());
            continue;
        }
        for v in (0..n).filter(|&v| state[v].is_none()) {
            for u in (0..n).filter(|&u| state[u].is_some()) {
                let fu = state[u].as_ref().unwrap();
                for value in [fu + space.d(u, v), fu - space.d(u, v)] {
                    let feasible = state.iter().enumerate().all(|(w, fw)| match fw {
                        Some(fw) => &(&value - fw).abs() <= space.d(v, w),
                        None => true,
                    });
                    if feasible {
                        let mut next = state.clone();
                        next[v] = Some(value);
                        if seen.insert(next.clone()) {
                            stack.push(next);
                        }
                    }
                }
            }
        }
    }
    Ok(vertices.into_iter().collect())
}

/// Norm of `element` as the best objective over all dual vertices.
pub fn brute_dual_norm(space: &FiniteMetricSpace, element: &PointMassElement) -> Result<Rational> {
    Ok(dual_vertices(space)?
        .iter()
        .map(|f| element.evaluate(f))
        .max()
        .expect("the dual ball has vertices"))
}

/// Is there exactly one 1-Lipschitz `f` with `f(base) = 0` and
/// `f(μ) = Σ λ_i`? The optimal face of the dual ball is the convex hull of
/// its optimal vertices, so this holds iff exactly one vertex is optimal.
pub fn brute_norming_uniqueness(
    space: &FiniteMetricSpace,
    system: &MoleculeSystem,
) -> Result<bool> {
    let element = to_point_masses(space, system);
    let target = system.total_weight();
    let optimal = dual_vertices(space)?
        .into_iter()
        .filter(|f| element.evaluate(f) == target)
        .count();
    Ok(optimal == 1)
}
