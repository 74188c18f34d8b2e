//! Differentiability of the free-space norm at convex series of molecules.
//!
//! For a finite normalized system `μ = Σ λ_i m(x_i, y_i)` the norm is
//! Fréchet differentiable at `μ` iff it is Gâteaux differentiable there,
//! iff the pairs are cyclically monotone, every pair of indices is rigid,
//! and every point lies on a segment `[s, t]` with `s, t ∈ N` and
//! `f(t) - f(s) = d(t, s)`. This module decides that, reports the
//! ε-relaxed conditions for truncations, and checks the ℓ1-basis property.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::molecule::{beta_matrix, to_point_masses, MoleculeSystem, PointMassElement};
use crate::norming::{
    build_from_alphas, build_on_n, extend_lower, extend_upper, sup_distance, verify_norming,
    LipschitzFunction, PartialFunction,
};
use crate::potential::{closure, Closure, NegativeCycleWitness, PotentialTable};
use crate::rational::{int, render, Rational};

/// Why the norm is not Gâteaux differentiable at the element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// The pairs are not cyclically monotone, so `μ` is not a convex series
    /// of molecules on the unit sphere.
    NotAttaining(NegativeCycleWitness),
    /// Pair indices `j < k` with `B[j][k] + B[k][j] > 0`. `alternatives`
    /// are two distinct norming functions.
    NonUniqueOnN {
        j: usize,
        k: usize,
        round_trip: Rational,
        alternatives: [LipschitzFunction; 2],
    },
    /// No segment `[s, t]` with `f(t) - f(s) = d(t, s)` contains `point`.
    /// `slack` is the least `max(excess, gap)` over `s ≠ t ∈ N`, and
    /// `alternatives` are the base-normalized extremal extensions, which
    /// are distinct norming functions.
    Uncovered {
        point: usize,
        slack: Rational,
        alternatives: [LipschitzFunction; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffVerdict {
    Frechet {
        norming: LipschitzFunction,
        /// Every point `p` mapped to `(s, t)` with `p ∈ [s, t]` and
        /// `f(t) - f(s) = d(t, s)`.
        coverage: BTreeMap<usize, (usize, usize)>,
    },
    NotGateaux(Failure),
}

impl DiffVerdict {
    pub fn is_frechet(&self) -> bool {
        matches!(self, DiffVerdict::Frechet { .. })
    }

    /// Re-check the verdict from the raw space and system.
    pub fn verify(
        &self,
        space: &FiniteMetricSpace,
        system: &MoleculeSystem,
    ) -> std::result::Result<(), String> {
        let pairs = system.pairs();
        match self {
            DiffVerdict::Frechet { norming, coverage } => {
                if !norming.verify(space) || norming.lip() > &Rational::one() {
                    return Err("norming function is not 1-Lipschitz at base 0".into());
                }
                if !verify_norming(space, pairs, norming) {
                    return Err("norming function does not norm every molecule".into());
                }
                let n: BTreeSet<usize> = system.support().into_iter().collect();
                if coverage.keys().copied().ne(0..space.len()) {
                    return Err("coverage map does not list every point".into());
                }
                for (&p, &(s, t)) in coverage {
                    if s == t || !n.contains(&s) || !n.contains(&t) {
                        return Err(format!("bad covering pair for {}", space.label(p)));
                    }
                    if &(norming.value(t) - norming.value(s)) != space.d(t, s) {
                        return Err(format!(
                            "covering pair ({}, {}) is not tight",
                            space.label(s),
                            space.label(t)
                        ));
                    }
                    if !space.excess(s, t, p).is_zero() {
                        return Err(format!("{} is not on its covering segment", space.label(p)));
                    }
                }
                Ok(())
            }
            DiffVerdict::NotGateaux(Failure::NotAttaining(w)) => {
                let beta = beta_matrix(space, pairs).map_err(|e| e.to_string())?;
                if !w.verify(&beta) {
                    return Err("negative cycle does not re-sum to a negative value".into());
                }
                let (aligned, crossed) = w.distance_sums(space, pairs);
                if aligned <= crossed {
                    return Err("cycle does not violate cyclical monotonicity".into());
                }
                Ok(())
            }
            DiffVerdict::NotGateaux(
                Failure::NonUniqueOnN { alternatives, .. }
                | Failure::Uncovered { alternatives, .. },
            ) => {
                for g in alternatives {
                    if !g.verify(space) || g.lip() > &Rational::one() {
                        return Err("alternative is not 1-Lipschitz at base 0".into());
                    }
                    if !verify_norming(space, pairs, g) {
                        return Err("alternative does not norm every molecule".into());
                    }
                }
                if alternatives[0] == alternatives[1] {
                    return Err("the two norming functions coincide".into());
                }
                Ok(())
            }
        }
    }
}

fn require_normalized(system: &MoleculeSystem) -> Result<()> {
    if system.is_empty() {
        return Err(Error::invalid("system has no pairs"));
    }
    if !system.is_normalized() {
        return Err(Error::invalid(format!(
            "weights sum to {}, expected 1",
            render(&system.total_weight())
        )));
    }
    Ok(())
}

fn potential_table(space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> Result<PotentialTable> {
    match closure(&beta_matrix(space, pairs)?) {
        Closure::Table(t) => Ok(t),
        Closure::NegativeCycle(w) => Err(Error::NotAttaining(w)),
    }
}

/// `excess` of `p` over `[s, t]` and `gap = d(t, s) - (f(t) - f(s))`.
fn slack(
    space: &FiniteMetricSpace,
    f: &PartialFunction,
    s: usize,
    t: usize,
    p: usize,
) -> (Rational, Rational) {
    let gap = space.d(t, s) - (&f.values()[&t] - &f.values()[&s]);
    (space.excess(s, t, p), gap)
}

/// First `(s, t)` in lexicographic order over `N × N` covering `p` exactly.
fn exact_cover(
    space: &FiniteMetricSpace,
    f: &PartialFunction,
    n: &[usize],
    p: usize,
) -> Option<(usize, usize)> {
    for &s in n {
        for &t in n {
            if s != t {
                let (excess, gap) = slack(space, f, s, t, p);
                if excess.is_zero() && gap.is_zero() {
                    return Some((s, t));
                }
            }
        }
    }
    None
}

/// The `(s, t)` minimizing `max(excess, gap)`, first in lexicographic
/// order among ties.
fn best_cover(
    space: &FiniteMetricSpace,
    f: &PartialFunction,
    n: &[usize],
    p: usize,
) -> Option<(usize, usize, Rational)> {
    let mut best: Option<(usize, usize, Rational)> = None;
    for &s in n {
        for &t in n {
            if s != t {
                let (excess, gap) = slack(space, f, s, t, p);
                let m = excess.max(gap);
                if best.as_ref().is_none_or(|b| m < b.2) {
                    best = Some((s, t, m));
                }
            }
        }
    }
    best
}

fn distinct_norming(
    space: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
    a: &PartialFunction,
    b: &PartialFunction,
) -> Result<[LipschitzFunction; 2]> {
    let alts = [
        extend_upper(space, a)?.normalized(space),
        extend_lower(space, b)?.normalized(space),
    ];
    if alts[0] == alts[1] || !alts.iter().all(|g| verify_norming(space, pairs, g)) {
        return Err(Error::Certificate(
            "could not exhibit two distinct norming functions".into(),
        ));
    }
    Ok(alts)
}

/// Decide Fréchet (equivalently Gâteaux) differentiability of the norm at
/// the normalized system's element.
pub fn decide(space: &FiniteMetricSpace, system: &MoleculeSystem) -> Result<DiffVerdict> {
    require_normalized(system)?;
    let pairs = system.pairs();
    let table = match potential_table(space, pairs) {
        Ok(t) => t,
        Err(Error::NotAttaining(w)) => {
            return Ok(DiffVerdict::NotGateaux(Failure::NotAttaining(w)))
        }
        Err(e) => return Err(e),
    };

    let m = pairs.len();
    for j in 0..m {
        for k in (j + 1)..m {
            let round_trip = table.round_trip(j, k);
            if round_trip.is_positive() {
                // Anchoring at j from either side gives two potentials whose
                // j-k differences differ by the round trip.
                let a1: Vec<Rational> = (0..m).map(|i| table.b(i, j).clone()).collect();
                let a2: Vec<Rational> = (0..m).map(|i| -table.b(j, i).clone()).collect();
                let f1 = build_from_alphas(space, pairs, &a1);
                let f2 = build_from_alphas(space, pairs, &a2);
                let alternatives = distinct_norming(space, pairs, &f1, &f2)?;
                return Ok(DiffVerdict::NotGateaux(Failure::NonUniqueOnN {
                    j,
                    k,
                    round_trip,
                    alternatives,
                }));
            }
        }
    }

    let f = build_on_n(space, pairs, &table);
    let n = system.support();
    let mut coverage = BTreeMap::new();
    for p in 0..space.len() {
        match exact_cover(space, &f, &n, p) {
            Some(st) => {
                coverage.insert(p, st);
            }
            None => {
                let (_, _, slack) = best_cover(space, &f, &n, p).expect("N has two points");
                let alternatives = distinct_norming(space, pairs, &f, &f)?;
                return Ok(DiffVerdict::NotGateaux(Failure::Uncovered {
                    point: p,
                    slack,
                    alternatives,
                }));
            }
        }
    }
    let norming = extend_upper(space, &f)?.normalized(space);
    Ok(DiffVerdict::Frechet { norming, coverage })
}

/// A pair of indices violating the ε-rigidity condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsPairFailure {
    pub j: usize,
    pub k: usize,
    pub round_trip: Rational,
}

/// A point with no ε-covering segment, with its closest candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsPointFailure {
    pub point: usize,
    pub s: usize,
    pub t: usize,
    pub slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GateauxEpsReport {
    /// Pairs with `B[j][k] + B[k][j] ≥ eps`.
    pub cond_i: Vec<EpsPairFailure>,
    /// Points `x` with no `s ≠ t ∈ N` such that `x ∈ [s, t]_eps` and
    /// `f(t) - f(s) > d(t, s) - eps`.
    pub cond_ii: Vec<EpsPointFailure>,
}

impl GateauxEpsReport {
    pub fn is_empty(&self) -> bool {
        self.cond_i.is_empty() && self.cond_ii.is_empty()
    }
}

fn positive_eps(eps: &Rational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "eps must be positive, got {}",
            render(eps)
        )))
    }
}

/// The ε-relaxed rigidity and coverage conditions for the system.
pub fn check_gateaux_eps(
    space: &FiniteMetricSpace,
    system: &MoleculeSystem,
    eps: &Rational,
) -> Result<GateauxEpsReport> {
    positive_eps(eps)?;
    let pairs = system.pairs();
    let table = potential_table(space, pairs)?;
    let mut report = GateauxEpsReport::default();
    for j in 0..pairs.len() {
        for k in (j + 1)..pairs.len() {
            if !table.is_eps_rigid(j, k, eps) {
                report.cond_i.push(EpsPairFailure {
                    j,
                    k,
                    round_trip: table.round_trip(j, k),
                });
            }
        }
    }
    let f = build_on_n(space, pairs, &table);
    let n = system.support();
    for p in 0..space.len() {
        if let Some((s, t, slack)) = best_cover(space, &f, &n, p) {
            // covered iff excess < eps and gap < eps
            if &slack >= eps {
                report.cond_ii.push(EpsPointFailure {
                    point: p,
                    s,
                    t,
                    slack,
                });
            }
        }
    }
    Ok(report)
}

/// Smallest `n` such that every point lies in some `[s, t]_eps` with
/// `s, t` among the first `n` pairs' points and `f(s) - f(t) > d(s, t) - eps`.
pub fn coverage_eps_prefix(
    space: &FiniteMetricSpace,
    system: &MoleculeSystem,
    eps: &Rational,
) -> Result<Option<usize>> {
    positive_eps(eps)?;
    let pairs = system.pairs();
    let table = potential_table(space, pairs)?;
    let f = build_on_n(space, pairs, &table);
    let covered_by = |n: usize| {
        let pts = crate::molecule::support_of(&pairs[..n]);
        (0..space.len())
            .all(|p| best_cover(space, &f, &pts, p).is_some_and(|(_, _, slack)| &slack < eps))
    };
    Ok((1..=pairs.len()).find(|&n| covered_by(n)))
}

pub const DEFAULT_L1_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum L1Verdict {
    IsometricL1,
    Fails {
        /// `flipped[i]` is true when pair `i` is used as `(y_i, x_i)`.
        flipped: Vec<bool>,
        witness: NegativeCycleWitness,
    },
}

impl L1Verdict {
    pub fn is_isometric(&self) -> bool {
        matches!(self, L1Verdict::IsometricL1)
    }
}

fn oriented(pairs: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    let n = pairs.len();
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            // pair 0 is never flipped; pair 1 is the most significant bit
            let flip = i > 0 && (mask >> (n - 1 - i)) & 1 == 1;
            if flip {
                (y, x)
            } else {
                (x, y)
            }
        })
        .collect()
}

/// Do the molecules span an isometric copy of the ℓ1 basis? Checks cyclical
/// monotonicity of every orientation pattern with the first pair fixed.
pub fn l1_basis_check(
    space: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
    cap: usize,
) -> Result<L1Verdict> {
    if pairs.len() > cap || pairs.len() > 63 {
        return Err(Error::ResourceLimit {
            what: "pair count for the l1 check",
            got: pairs.len(),
            limit: cap.min(63),
        });
    }
    crate::molecule::check_pairs(space, pairs)?;
    if pairs.is_empty() {
        return Ok(L1Verdict::IsometricL1);
    }
    let patterns = 1u64 << (pairs.len() - 1);
    let failing = (0..patterns).into_par_iter().find_first(|&mask| {
        let beta = beta_matrix(space, &oriented(pairs, mask)).expect("pairs checked");
        matches!(closure(&beta), Closure::NegativeCycle(_))
    });
    Ok(match failing {
        None => L1Verdict::IsometricL1,
        Some(mask) => {
            let beta = beta_matrix(space, &oriented(pairs, mask))?;
            let Closure::NegativeCycle(witness) = closure(&beta) else {
                unreachable!("pattern failed a moment ago")
            };
            let n = pairs.len();
            let flipped = (0..n)
                .map(|i| i > 0 && (mask >> (n - 1 - i)) & 1 == 1)
                .collect();
            L1Verdict::Fails { flipped, witness }
        }
    })
}

/// Pairs with the given orientation pattern applied.
pub fn apply_orientation(pairs: &[(usize, usize)], flipped: &[bool]) -> Vec<(usize, usize)> {
    pairs
        .iter()
        .zip(flipped)
        .map(|(&(x, y), &f)| if f { (y, x) } else { (x, y) })
        .collect()
}

/// `K = (4/θ + 1) n² D` for the stability estimate near a Fréchet point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityBound {
    pub theta: Rational,
    pub diameter: Rational,
    pub n: usize,
    pub k: Rational,
}

pub fn stability_bound(space: &FiniteMetricSpace, system: &MoleculeSystem) -> StabilityBound {
    let theta = space.theta().clone();
    let diameter = space.diameter().clone();
    let n = system.len();
    let n2 = int(n as i64) * int(n as i64);
    let k = (int(4) / &theta + int(1)) * n2 * &diameter;
    StabilityBound {
        theta,
        diameter,
        n,
        k,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// `g(μ) > 1 - eps / min λ`.
    pub hypothesis: bool,
    pub g_of_mu: Rational,
    /// `max_p |(f - f(y_1))(p) - (g - g(y_1))(p)|`.
    pub distance: Rational,
    /// `K · eps`.
    pub bound: Rational,
    /// `distance ≤ bound`, or true when the hypothesis fails.
    pub holds: bool,
}

/// Precomputed data for repeated stability checks at one Fréchet point.
#[derive(Clone, Debug)]
pub struct StabilityContext {
    norming: LipschitzFunction,
    element: PointMassElement,
    bound: StabilityBound,
    min_weight: Rational,
    pin: usize,
}

impl StabilityContext {
    pub fn new(space: &FiniteMetricSpace, system: &MoleculeSystem) -> Result<Self> {
        let norming = match decide(space, system)? {
            DiffVerdict::Frechet { norming, .. } => norming,
            DiffVerdict::NotGateaux(_) => {
                return Err(Error::invalid("stability needs a Frechet verdict"))
            }
        };
        Ok(StabilityContext {
            norming,
            element: to_point_masses(space, system),
            bound: stability_bound(space, system),
            min_weight: system.min_weight().expect("nonempty").clone(),
            pin: system.pairs()[0].1,
        })
    }

    pub fn norming(&self) -> &LipschitzFunction {
        &self.norming
    }

    pub fn bound(&self) -> &StabilityBound {
        &self.bound
    }

    pub fn min_weight(&self) -> &Rational {
        &self.min_weight
    }

    pub fn element(&self) -> &PointMassElement {
        &self.element
    }

    /// Both functions are compared after pinning them to vanish at `y_1`.
    pub fn check(&self, g: &LipschitzFunction, eps: &Rational) -> Result<StabilityReport> {
        positive_eps(eps)?;
        if g.values().len() != self.norming.values().len() {
            return Err(Error::invalid("function does not match the space"));
        }
        if g.lip() > &Rational::one() {
            return Err(Error::invalid(format!(
                "g has Lipschitz constant {}, expected at most 1",
                render(g.lip())
            )));
        }
        let g_of_mu = g.evaluate(&self.element);
        let hypothesis = g_of_mu > Rational::one() - eps / &self.min_weight;
        let pin_f = self.norming.value(self.pin);
        let pin_g = g.value(self.pin);
        let f_pinned: Vec<Rational> = self.norming.values().iter().map(|v| v - pin_f).collect();
        let g_pinned: Vec<Rational> = g.values().iter().map(|v| v - pin_g).collect();
        let distance = sup_distance(&f_pinned, &g_pinned);
        let bound = &self.bound.k * eps;
        let holds = !hypothesis || distance <= bound;
        Ok(StabilityReport {
            hypothesis,
            g_of_mu,
            distance,
            bound,
            holds,
        })
    }
}

/// One-shot form of [`StabilityContext::check`].
pub fn verify_stability(
    space: &FiniteMetricSpace,
    system: &MoleculeSystem,
    g: &LipschitzFunction,
    eps: &Rational,
) -> Result<bool> {
    Ok(StabilityContext::new(space, system)?.check(g, eps)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{line, star, triangle};
    use crate::rational::{pow2_neg, ratio};

    fn pow2_system(space: &FiniteMetricSpace, pairs: Vec<(usize, usize)>) -> MoleculeSystem {
        let w: Vec<Rational> = (1..=pairs.len() as u32).map(pow2_neg).collect();
        MoleculeSystem::new(space, pairs, w).unwrap().normalized()
    }

    #[test]
    fn star_is_frechet() {
        let space = star(5);
        let sys = pow2_system(&space, (1..=5).map(|n| (n, 0)).collect());
        let v = decide(&space, &sys).unwrap();
        v.verify(&space, &sys).unwrap();
        match v {
            DiffVerdict::Frechet { norming, coverage } => {
                assert_eq!(
                    norming.values(),
                    &[int(0), int(1), int(1), int(1), int(1), int(1)]
                );
                assert_eq!(coverage[&3], (0, 3));
                assert_eq!(coverage[&0], (0, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triangle_is_uncovered_at_b() {
        let space = triangle();
        let sys = MoleculeSystem::new(&space, vec![(1, 0)], vec![int(1)]).unwrap();
        let v = decide(&space, &sys).unwrap();
        v.verify(&space, &sys).unwrap();
        match v {
            DiffVerdict::NotGateaux(Failure::Uncovered {
                point,
                slack,
                alternatives,
            }) => {
                assert_eq!(point, 2);
                assert_eq!(slack, int(1));
                assert_eq!(alternatives[0].value(2) - alternatives[1].value(2), int(1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_cycle_is_not_attaining() {
        let space = triangle();
        let sys = MoleculeSystem::uniform(&space, vec![(1, 0), (0, 2)]).unwrap();
        let v = decide(&space, &sys).unwrap();
        assert!(matches!(
            v,
            DiffVerdict::NotGateaux(Failure::NotAttaining(_))
        ));
        v.verify(&space, &sys).unwrap();
    }

    #[test]
    fn loose_pairs_are_not_unique() {
        // round trip of (1,0),(3,2) on the line: 0 + 2
        let space = line(4);
        let sys = MoleculeSystem::uniform(&space, vec![(1, 0), (3, 2)]).unwrap();
        let v = decide(&space, &sys).unwrap();
        v.verify(&space, &sys).unwrap();
        match v {
            DiffVerdict::NotGateaux(Failure::NonUniqueOnN {
                j, k, round_trip, ..
            }) => {
                assert_eq!((j, k, round_trip), (0, 1, int(2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unnormalized_is_rejected() {
        let space = triangle();
        let sys = MoleculeSystem::new(&space, vec![(1, 0)], vec![int(2)]).unwrap();
        assert!(matches!(
            decide(&space, &sys),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn eps_reports() {
        let space = triangle();
        let sys = MoleculeSystem::new(&space, vec![(1, 0)], vec![int(1)]).unwrap();
        let r = check_gateaux_eps(&space, &sys, &ratio(1, 2)).unwrap();
        assert!(r.cond_i.is_empty());
        assert_eq!(r.cond_ii.len(), 1);
        assert_eq!(r.cond_ii[0].point, 2);
        assert!(check_gateaux_eps(&space, &sys, &int(2)).unwrap().is_empty());
        assert!(check_gateaux_eps(&space, &sys, &int(0)).is_err());

        let bad = MoleculeSystem::uniform(&space, vec![(1, 0), (0, 2)]).unwrap();
        assert!(matches!(
            check_gateaux_eps(&space, &bad, &int(1)),
            Err(Error::NotAttaining(_))
        ));
    }

    #[test]
    fn prefix_on_star() {
        let space = star(5);
        let sys = pow2_system(&space, (1..=5).map(|n| (n, 0)).collect());
        assert_eq!(
            coverage_eps_prefix(&space, &sys, &ratio(1, 2)).unwrap(),
            Some(5)
        );
        assert_eq!(coverage_eps_prefix(&space, &sys, &int(5)).unwrap(), Some(1));
        let tri = triangle();
        let single = MoleculeSystem::new(&tri, vec![(1, 0)], vec![int(1)]).unwrap();
        assert_eq!(
            coverage_eps_prefix(&tri, &single, &ratio(1, 2)).unwrap(),
            None
        );
    }

    #[test]
    fn l1_checks() {
        let space = star(8);
        let pairs: Vec<_> = (1..=8).map(|n| (n, 0)).collect();
        assert!(l1_basis_check(&space, &pairs, DEFAULT_L1_CAP)
            .unwrap()
            .is_isometric());
        assert!(l1_basis_check(&space, &pairs, 4).is_err());
        assert!(l1_basis_check(&space, &pairs[..1], DEFAULT_L1_CAP)
            .unwrap()
            .is_isometric());
    }

    #[test]
    fn stability_constant_on_star() {
        let space = star(3);
        let sys = pow2_system(&space, (1..=3).map(|n| (n, 0)).collect());
        assert_eq!(stability_bound(&space, &sys).k, int(90));
        let ctx = StabilityContext::new(&space, &sys).unwrap();
        let r = ctx.check(&ctx.norming().clone(), &ratio(1, 16)).unwrap();
        assert!(r.hypothesis && r.holds && r.distance.is_zero());
    }
}
