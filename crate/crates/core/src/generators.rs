//! Deterministic example spaces and seeded random instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, RawSpace};
use crate::molecule::{MoleculeSystem, PointMassElement};
use crate::norming::LipschitzFunction;
use crate::rational::{int, one, pow2_neg, ratio, Rational};
use crate::transport::decompose_to_molecules;

/// Random distances use denominators up to this bound.
pub const DEFAULT_MAX_DENOMINATOR: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Star,
    C0Truncation,
    Line,
    Random,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Profile {
    #[default]
    Generic,
    /// Tree-like metrics with many exact segment alignments.
    NearDegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: Kind,
    /// `k` for star and c0 (giving `k + 1` points), the point count otherwise.
    pub size: usize,
    pub seed: u64,
    pub profile: Profile,
}

pub fn generate(spec: &GeneratorSpec) -> Result<FiniteMetricSpace> {
    match spec.kind {
        Kind::Star => gen_star(spec.size),
        Kind::C0Truncation => gen_c0_truncation(spec.size),
        Kind::Line => gen_line(spec.size),
        Kind::Random => gen_random(spec.size, spec.seed, spec.profile),
    }
}

fn build(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> FiniteMetricSpace {
    FiniteMetricSpace::new(RawSpace {
        labels,
        base: "0".into(),
        dist,
    })
    .expect("generated spaces are metric")
}

/// Points `0, 1, ..., k` with `d(n, 0) = 1` and `d(m, n) = 2`.
pub fn gen_star(k: usize) -> Result<FiniteMetricSpace> {
    if k < 1 {
        return Err(Error::invalid("star needs k >= 1"));
    }
    let dist = (0..=k)
        .map(|i| {
            (0..=k)
                .map(|j| match (i, j) {
                    _ if i == j => int(0),
                    (0, _) | (_, 0) => int(1),
                    _ => int(2),
                })
                .collect()
        })
        .collect();
    Ok(build((0..=k).map(|i| i.to_string()).collect(), dist))
}

/// Points `0, x1, ..., xk` of c0 with `x1 = 2e1`, `xn = e1 + (1 + 2^-n) en`,
/// under the sup norm.
pub fn gen_c0_truncation(k: usize) -> Result<FiniteMetricSpace> {
    if k < 2 {
        return Err(Error::invalid("c0 truncation needs k >= 2"));
    }
    if k > 60 {
        return Err(Error::ResourceLimit {
            what: "c0 truncation size",
            got: k,
            limit: 60,
        });
    }
    // index 0 is the origin, index n is x_n
    let d = |a: usize, b: usize| -> Rational {
        let (m, n) = (a.min(b), a.max(b));
        match (m, n) {
            _ if m == n => int(0),
            (0, 1) => int(2),
            (0, n) | (1, n) => one() + pow2_neg(n as u32),
            (m, _) => one() + pow2_neg(m as u32),
        }
    };
    let dist = (0..=k)
        .map(|a| (0..=k).map(|b| d(a, b)).collect())
        .collect();
    let labels = std::iter::once("0".to_string())
        .chain((1..=k).map(|n| format!("x{n}")))
        .collect();
    Ok(build(labels, dist))
}

/// Points `0, 1, ..., n-1` on the real line.
pub fn gen_line(n: usize) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::invalid("line needs at least 2 points"));
    }
    let dist = (0..n)
        .map(|i| (0..n).map(|j| int(i.abs_diff(j) as i64)).collect())
        .collect();
    Ok(build((0..n).map(|i| i.to_string()).collect(), dist))
}

/// Shortest-path closure of a symmetric matrix of positive edge lengths.
/// Leaves a metric unchanged.
pub fn repair_metric(mut dist: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = dist.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &dist[i][k] + &dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

fn has_collinear_triple(dist: &[Vec<Rational>]) -> bool {
    let n = dist.len();
    (0..n).any(|x| {
        (0..n).any(|y| {
            x != y && (0..n).any(|z| z != x && z != y && &dist[x][z] + &dist[z][y] == dist[x][y])
        })
    })
}

/// Seeded random metric on `points` points labelled `0, 1, ...`.
///
/// The generic profile draws every distance with one common denominator
/// `q ≤ 64` and repairs by shortest paths. The near-degenerate profile
/// takes shortest paths in a random weighted tree plus a few chords with
/// small denominators, falling back to the bare tree if the chords erase
/// every exact alignment.
pub fn gen_random(points: usize, seed: u64, profile: Profile) -> Result<FiniteMetricSpace> {
    if points < 2 {
        return Err(Error::invalid("random space needs at least 2 points"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = points;
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let dist = match profile {
        Profile::Generic => {
            let q = rng.gen_range(1..=DEFAULT_MAX_DENOMINATOR);
            let mut d = vec![vec![int(0); n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = ratio(rng.gen_range(q..=3 * q), q);
                    d[i][j] = v.clone();
                    d[j][i] = v;
                }
            }
            repair_metric(d)
        }
        Profile::NearDegenerate => {
            let q = rng.gen_range(1..=4);
            // unreachable pairs start at a bound above any path length
            let far = int(4 * n as i64);
            let mut tree = vec![vec![far; n]; n];
            for (i, row) in tree.iter_mut().enumerate() {
                row[i] = int(0);
            }
            for i in 1..n {
                let parent = rng.gen_range(0..i);
                let w = ratio(rng.gen_range(1..=2 * q), q);
                tree[i][parent] = w.clone();
                tree[parent][i] = w;
            }
            let mut chords = tree.clone();
            for _ in 0..rng.gen_range(0..=n / 2) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    let w = ratio(rng.gen_range(1..=4 * q), q);
                    if w < chords[a][b] {
                        chords[a][b] = w.clone();
                        chords[b][a] = w;
                    }
                }
            }
            let with_chords = repair_metric(chords);
            if n < 3 || has_collinear_triple(&with_chords) {
                with_chords
            } else {
                repair_metric(tree)
            }
        }
    };
    Ok(build(labels, dist))
}

/// Random element with small rational coefficients on a random subset of
/// the non-base points; may be zero.
pub fn random_element(space: &FiniteMetricSpace, rng: &mut impl Rng) -> PointMassElement {
    let mut coeffs = BTreeMap::new();
    for p in 0..space.len() {
        if p != space.base() && rng.gen_bool(0.6) {
            let num = rng.gen_range(-6..=6);
            let den = rng.gen_range(1..=4);
            coeffs.insert(p, ratio(num, den));
        }
    }
    PointMassElement::new(space, coeffs).expect("indices are in range")
}

/// Random normalized system with between 1 and `max_pairs` pairs.
///
/// Half of the draws pick pairs independently (often touching the base
/// point); the other half read pairs off an optimal transport plan, which
/// makes them cyclically monotone.
pub fn random_system(
    space: &FiniteMetricSpace,
    max_pairs: usize,
    rng: &mut impl Rng,
) -> MoleculeSystem {
    assert!(max_pairs >= 1 && space.len() >= 2);
    let n = space.len();
    let base = space.base();
    let count = rng.gen_range(1..=max_pairs);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if rng.gen_bool(0.5) {
        let decomposed = decompose_to_molecules(space, &random_element(space, rng));
        pairs = decomposed.pairs().to_vec();
        pairs.shuffle(rng);
        pairs.truncate(count);
    }
    if pairs.is_empty() {
        while pairs.len() < count {
            let p = rng.gen_range(0..n);
            let q = if rng.gen_bool(0.35) {
                base
            } else {
                rng.gen_range(0..n)
            };
            if p == q {
                continue;
            }
            pairs.push(if rng.gen_bool(0.5) { (p, q) } else { (q, p) });
        }
    }
    let weights = pairs.iter().map(|_| int(rng.gen_range(1..=8))).collect();
    MoleculeSystem::new(space, pairs, weights)
        .expect("pairs are distinct points")
        .normalized()
}

/// Random 1-Lipschitz function vanishing at the base point. Points get
/// values in the interval allowed by the points already assigned, on a
/// grid of 16 steps that includes both endpoints.
pub fn random_lipschitz(space: &FiniteMetricSpace, rng: &mut impl Rng) -> LipschitzFunction {
    let n = space.len();
    let base = space.base();
    let mut order: Vec<usize> = (0..n).filter(|&p| p != base).collect();
    order.shuffle(rng);
    let mut values: Vec<Option<Rational>> = vec![None; n];
    values[base] = Some(int(0));
    for &v in &order {
        let assigned = || {
            values
                .iter()
                .enumerate()
                .filter_map(|(q, f)| f.as_ref().map(|f| (q, f)))
        };
        let lo = assigned().map(|(q, f)| f - space.d(q, v)).max().unwrap();
        let hi = assigned().map(|(q, f)| f + space.d(q, v)).min().unwrap();
        let step = rng.gen_range(0..=16);
        values[v] = Some(&lo + (hi - &lo) * ratio(step, 16));
    }
    LipschitzFunction::new(space, values.into_iter().map(Option::unwrap).collect())
        .expect("base value is zero")
}

/// Convex combination `(1 - t) f + t g` of two functions on the same space.
pub fn blend(
    space: &FiniteMetricSpace,
    f: &LipschitzFunction,
    g: &LipschitzFunction,
    t: &Rational,
) -> LipschitzFunction {
    let values = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a + (b - a) * t)
        .collect();
    LipschitzFunction::new(space, values).expect("base value is zero")
}
