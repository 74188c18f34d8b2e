//! Norming functions for molecule families.
//!
//! Given feasible potentials α, the function `f(y_i) = α_i`,
//! `f(x_i) = α_i + d(x_i, y_i)` is 1-Lipschitz on `N = {x_i, y_i}` and
//! takes every molecule to 1. It extends to the whole space by the largest
//! and smallest 1-Lipschitz extensions
//! `g1(x) = min_p (f(p) + d(p, x))` and `g2(x) = max_p (f(p) - d(p, x))`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::molecule::PointMassElement;
use crate::potential::PotentialTable;
use crate::rational::Rational;

/// Exact Lipschitz constant of `values` over all pairs of points.
pub fn lipschitz_constant(space: &FiniteMetricSpace, values: &[Rational]) -> Rational {
    let mut lip = Rational::zero();
    for p in 0..space.len() {
        for q in (p + 1)..space.len() {
            let slope = (&values[p] - &values[q]).abs() / space.d(p, q);
            if slope > lip {
                lip = slope;
            }
        }
    }
    lip
}

/// First pair `(p, q)` with `values[p] - values[q] > d(p, q)`, scanning
/// only the given points.
fn first_violation(
    space: &FiniteMetricSpace,
    points: &[(usize, &Rational)],
) -> Option<(usize, usize)> {
    for &(p, fp) in points {
        for &(q, fq) in points {
            if p != q && &(fp - fq) > space.d(p, q) {
                return Some((p, q));
            }
        }
    }
    None
}

/// A function on every point of a space, vanishing at the base point, with
/// its exact Lipschitz constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzFunction {
    values: Vec<Rational>,
    lip: Rational,
}

impl LipschitzFunction {
    pub fn new(space: &FiniteMetricSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::invalid(format!(
                "function has {} values for {} points",
                values.len(),
                space.len()
            )));
        }
        if !values[space.base()].is_zero() {
            return Err(Error::invalid(format!(
                "function must vanish at the base point {}",
                space.label(space.base())
            )));
        }
        let lip = lipschitz_constant(space, &values);
        Ok(LipschitzFunction { values, lip })
    }

    pub fn zero(space: &FiniteMetricSpace) -> Self {
        LipschitzFunction {
            values: vec![Rational::zero(); space.len()],
            lip: Rational::zero(),
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, p: usize) -> &Rational {
        &self.values[p]
    }

    pub fn lip(&self) -> &Rational {
        &self.lip
    }

    /// Recompute the Lipschitz constant from raw data and compare.
    pub fn verify(&self, space: &FiniteMetricSpace) -> bool {
        self.values.len() == space.len()
            && self.values[space.base()].is_zero()
            && lipschitz_constant(space, &self.values) == self.lip
    }

    pub fn evaluate(&self, element: &PointMassElement) -> Rational {
        element.evaluate(&self.values)
    }

    /// `max_p |self(p) - other(p)|`.
    pub fn sup_distance(&self, other: &LipschitzFunction) -> Rational {
        sup_distance(&self.values, &other.values)
    }
}

pub fn sup_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Values on a subset `N` of the points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFunction {
    values: BTreeMap<usize, Rational>,
    /// True iff the base point lies in the domain, which fixes the free
    /// additive constant.
    base_pinned: bool,
}

impl PartialFunction {
    pub fn new(space: &FiniteMetricSpace, values: BTreeMap<usize, Rational>) -> Result<Self> {
        for &p in values.keys() {
            space.check_index(p)?;
        }
        let base_pinned = values.contains_key(&space.base());
        Ok(PartialFunction {
            values,
            base_pinned,
        })
    }

    pub fn values(&self) -> &BTreeMap<usize, Rational> {
        &self.values
    }

    pub fn get(&self, p: usize) -> Option<&Rational> {
        self.values.get(&p)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn base_pinned(&self) -> bool {
        self.base_pinned
    }

    /// Reject a partial function that is not 1-Lipschitz on its domain.
    pub fn check_one_lipschitz(&self, space: &FiniteMetricSpace) -> Result<()> {
        let pts: Vec<(usize, &Rational)> = self.values.iter().map(|(&p, v)| (p, v)).collect();
        match first_violation(space, &pts) {
            None => Ok(()),
            Some((p, q)) => Err(Error::invalid(format!(
                "partial function is not 1-Lipschitz: f({}) - f({}) = {} > d = {}",
                space.label(p),
                space.label(q),
                crate::rational::render(&(&self.values[&p] - &self.values[&q])),
                crate::rational::render(space.d(p, q)),
            ))),
        }
    }
}

/// `f(y_i) = α_i`, `f(x_i) = α_i + d(x_i, y_i)`, shifted to vanish at the
/// base point when the base lies in `N`.
///
/// Panics on conflicting assignments at a coincident point: with feasible
/// potentials those cannot occur, so a conflict is a bug.
pub fn build_on_n(
    space: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
    table: &PotentialTable,
) -> PartialFunction {
    build_from_alphas(space, pairs, table.alphas())
}

/// [`build_on_n`] for an arbitrary feasible potential vector.
pub fn build_from_alphas(
    space: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
    alphas: &[Rational],
) -> PartialFunction {
    assert_eq!(
        pairs.len(),
        alphas.len(),
        "potentials do not match the pairs"
    );
    // (value, pair index, is the x end)
    let mut values: BTreeMap<usize, (Rational, usize, bool)> = BTreeMap::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        for (p, v, is_x) in [
            (y, alphas[i].clone(), false),
            (x, &alphas[i] + space.d(x, y), true),
        ] {
            match values.get(&p) {
                Some((prev, j, prev_x)) => assert!(
                    *prev == v,
                    "conflicting values at {}: {} from the {} end of pair {}, {} from the {} end of pair {}",
                    space.label(p),
                    crate::rational::render(prev),
                    if *prev_x { "x" } else { "y" },
                    j + 1,
                    crate::rational::render(&v),
                    if is_x { "x" } else { "y" },
                    i + 1,
                ),
                None => {
                    values.insert(p, (v, i, is_x));
                }
            }
        }
    }
    let base = space.base();
    let shift = values
        .get(&base)
        .map(|(v, _, _)| v.clone())
        .unwrap_or_else(Rational::zero);
    PartialFunction {
        base_pinned: values.contains_key(&base),
        values: values
            .into_iter()
            .map(|(p, (v, _, _))| (p, v - &shift))
            .collect(),
    }
}

/// A 1-Lipschitz extension of a partial function to every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    values: Vec<Rational>,
    lip: Rational,
    /// False when the base point is outside the domain; the values are then
    /// reported without shifting and need not vanish at the base.
    base_pinned: bool,
}

impl Extension {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn lip(&self) -> &Rational {
        &self.lip
    }

    pub fn base_pinned(&self) -> bool {
        self.base_pinned
    }

    /// Shift by the base value so the result vanishes at the base point.
    pub fn normalized(&self, space: &FiniteMetricSpace) -> LipschitzFunction {
        let shift = self.values[space.base()].clone();
        LipschitzFunction {
            values: self.values.iter().map(|v| v - &shift).collect(),
            lip: self.lip.clone(),
        }
    }
}

fn extend(
    space: &FiniteMetricSpace,
    partial: &PartialFunction,
    pick: impl Fn(&Rational, &Rational) -> bool,
    sign: bool,
) -> Result<Extension> {
    if partial.values.is_empty() {
        return Err(Error::invalid("cannot extend a function with empty domain"));
    }
    partial.check_one_lipschitz(space)?;
    let values: Vec<Rational> = (0..space.len())
        .map(|x| {
            let mut best: Option<Rational> = None;
            for (&p, fp) in &partial.values {
                let cand = if sign {
                    fp + space.d(p, x)
                } else {
                    fp - space.d(p, x)
                };
                if best.as_ref().is_none_or(|b| pick(&cand, b)) {
                    best = Some(cand);
                }
            }
            best.expect("nonempty domain")
        })
        .collect();
    let lip = lipschitz_constant(space, &values);
    assert!(
        lip <= Rational::one(),
        "extension of a 1-Lipschitz function has lip > 1"
    );
    Ok(Extension {
        values,
        lip,
        base_pinned: partial.base_pinned,
    })
}

/// Largest 1-Lipschitz extension: `g1(x) = min_p (f(p) + d(p, x))`.
pub fn extend_upper(space: &FiniteMetricSpace, partial: &PartialFunction) -> Result<Extension> {
    extend(space, partial, |c, b| c < b, true)
}

/// Smallest 1-Lipschitz extension: `g2(x) = max_p (f(p) - d(p, x))`.
pub fn extend_lower(space: &FiniteMetricSpace, partial: &PartialFunction) -> Result<Extension> {
    extend(space, partial, |c, b| c > b, false)
}

/// True iff `f` is 1-Lipschitz and `f(x_i) - f(y_i) = d(x_i, y_i)` for
/// every pair, which makes `f` norming for every positive weighting.
pub fn verify_norming(
    space: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
    f: &LipschitzFunction,
) -> bool {
    f.lip <= Rational::one()
        && pairs
            .iter()
            .all(|&(x, y)| &(&f.values[x] - &f.values[y]) == space.d(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{star, triangle};
    use crate::molecule::beta_matrix;
    use crate::potential::closure;
    use crate::rational::{int, ratio};

    fn table_for(space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> PotentialTable {
        closure(&beta_matrix(space, pairs).unwrap())
            .table()
            .unwrap()
    }

    #[test]
    fn star_values_on_n() {
        let space = star(3);
        let pairs = [(1, 0), (2, 0)];
        let f = build_on_n(&space, &pairs, &table_for(&space, &pairs));
        assert!(f.base_pinned());
        assert_eq!(
            f.values(),
            &BTreeMap::from([(0, int(0)), (1, int(1)), (2, int(1))])
        );
    }

    #[test]
    fn single_pair_values() {
        let space = triangle();
        let pairs = [(1, 0)];
        let f = build_on_n(&space, &pairs, &table_for(&space, &pairs));
        assert_eq!(f.values(), &BTreeMap::from([(0, int(0)), (1, int(2))]));
    }

    #[test]
    fn base_outside_n_is_unpinned() {
        let space = star(3);
        let pairs = [(1, 2)];
        let f = build_on_n(&space, &pairs, &table_for(&space, &pairs));
        assert!(!f.base_pinned());
        // anchored at α_1 = 0
        assert_eq!(f.values(), &BTreeMap::from([(1, int(2)), (2, int(0))]));
        let g1 = extend_upper(&space, &f).unwrap();
        let g2 = extend_lower(&space, &f).unwrap();
        assert!(!g1.base_pinned());
        assert_eq!(g1.values()[0], int(1));
        assert_eq!(g2.values()[0], int(1));
        let n = g1.normalized(&space);
        assert_eq!(n.values(), &[int(0), int(1), int(-1), int(1)]);
    }

    #[test]
    fn triangle_extensions() {
        let space = triangle();
        let partial =
            PartialFunction::new(&space, BTreeMap::from([(0, int(0)), (1, int(2))])).unwrap();
        let g1 = extend_upper(&space, &partial).unwrap();
        let g2 = extend_lower(&space, &partial).unwrap();
        assert_eq!(g1.values(), &[int(0), int(2), int(1)]);
        assert_eq!(g2.values(), &[int(0), int(2), int(0)]);
        assert!(g1.lip() <= &int(1) && g2.lip() <= &int(1));
    }

    #[test]
    fn full_domain_extension_is_identity() {
        let space = triangle();
        let vals = BTreeMap::from([(0, int(0)), (1, int(1)), (2, ratio(-1, 2))]);
        let partial = PartialFunction::new(&space, vals).unwrap();
        let expect = [int(0), int(1), ratio(-1, 2)];
        assert_eq!(
            extend_upper(&space, &partial).unwrap().values(),
            &expect[..]
        );
        assert_eq!(
            extend_lower(&space, &partial).unwrap().values(),
            &expect[..]
        );
    }

    #[test]
    fn non_lipschitz_partial_is_rejected() {
        let space = triangle();
        let partial =
            PartialFunction::new(&space, BTreeMap::from([(0, int(0)), (1, int(3))])).unwrap();
        let err = extend_upper(&space, &partial).unwrap_err();
        assert!(err.to_string().contains("f(a) - f(0)"), "{err}");
    }

    #[test]
    fn norming_checks() {
        let space = star(3);
        let f = LipschitzFunction::new(&space, vec![int(0), int(1), int(1), int(1)]).unwrap();
        assert_eq!(f.lip(), &int(1));
        assert!(verify_norming(&space, &[(1, 0), (2, 0), (3, 0)], &f));
        let zero = LipschitzFunction::zero(&space);
        assert!(!verify_norming(&space, &[(1, 0)], &zero));
        assert!(verify_norming(&space, &[], &zero));
        let steep = LipschitzFunction::new(&space, vec![int(0), int(3), int(1), int(1)]).unwrap();
        assert_eq!(steep.lip(), &int(3));
        assert!(!verify_norming(&space, &[(1, 0)], &steep));
    }

    #[test]
    fn lipschitz_function_requires_base_zero() {
        let space = triangle();
        assert!(LipschitzFunction::new(&space, vec![int(1), int(0), int(0)]).is_err());
        assert!(LipschitzFunction::new(&space, vec![int(0)]).is_err());
    }
}
