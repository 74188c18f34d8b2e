//! Weighted molecule families `Σ λ_i m(x_i, y_i)` and their derived forms.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

/// An ordered list of point pairs with strictly positive weights.
///
/// Pair order is preserved; it is the truncation order used by the
/// coverage-prefix search. Duplicate pairs are kept distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct MoleculeSystem {
    pairs: Vec<(usize, usize)>,
    weights: Vec<Rational>,
}

impl MoleculeSystem {
    pub fn new(
        space: &FiniteMetricSpace,
        pairs: Vec<(usize, usize)>,
        weights: Vec<Rational>,
    ) -> Result<Self> {
        if pairs.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} pairs but {} weights",
                pairs.len(),
                weights.len()
            )));
        }
        check_pairs(space, &pairs)?;
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::invalid(format!(
                "weight of pair {} must be strictly positive",
                i + 1
            )));
        }
        Ok(MoleculeSystem { pairs, weights })
    }

    /// Equal weights `1/n`.
    pub fn uniform(space: &FiniteMetricSpace, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = pairs.len() as i64;
        let w = crate::rational::ratio(1, n.max(1));
        let weights = vec![w; pairs.len()];
        Self::new(space, pairs, weights)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn total_weight(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total_weight().is_one()
    }

    pub fn min_weight(&self) -> Option<&Rational> {
        self.weights.iter().min()
    }

    /// The same pairs rescaled to total weight one.
    pub fn normalized(&self) -> Self {
        let total = self.total_weight();
        MoleculeSystem {
            pairs: self.pairs.clone(),
            weights: self.weights.iter().map(|w| w / &total).collect(),
        }
    }

    /// Points appearing in some pair, sorted.
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.pairs)
    }
}

/// Points appearing in `pairs`, sorted and deduplicated.
pub fn support_of(pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut pts: Vec<usize> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    pts.sort_unstable();
    pts.dedup();
    pts
}

pub fn check_pairs(space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> Result<()> {
    for (i, &(x, y)) in pairs.iter().enumerate() {
        space.check_index(x)?;
        space.check_index(y)?;
        if x == y {
            return Err(Error::invalid(format!(
                "pair {} joins a point to itself",
                i + 1
            )));
        }
    }
    Ok(())
}

/// `beta[j][k] = d(x_j, y_k) - d(x_j, y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaMatrix {
    rows: Vec<Vec<Rational>>,
}

impl BetaMatrix {
    /// Wrap an arbitrary square matrix with zero diagonal.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("beta matrix must be square"));
        }
        if rows.iter().enumerate().any(|(i, r)| !r[i].is_zero()) {
            return Err(Error::invalid("beta matrix must have a zero diagonal"));
        }
        Ok(BetaMatrix { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> &Rational {
        &self.rows[j][k]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Sum of `beta` along the closed cycle `c_0 -> c_1 -> ... -> c_0`.
    pub fn cycle_sum(&self, cycle: &[usize]) -> Rational {
        let mut sum = Rational::zero();
        for (i, &a) in cycle.iter().enumerate() {
            let b = cycle[(i + 1) % cycle.len()];
            sum += self.get(a, b);
        }
        sum
    }

    /// Sum of `beta` along the open path `p_0 -> ... -> p_last`.
    pub fn path_sum(&self, path: &[usize]) -> Rational {
        path.windows(2).map(|w| self.get(w[0], w[1])).sum()
    }
}

pub fn beta_matrix(space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> Result<BetaMatrix> {
    check_pairs(space, pairs)?;
    let rows = pairs
        .iter()
        .map(|&(xj, yj)| {
            let own = space.d(xj, yj);
            pairs.iter().map(|&(_, yk)| space.d(xj, yk) - own).collect()
        })
        .collect();
    Ok(BetaMatrix { rows })
}

/// A finitely supported element `Σ c_p δ_p` with the base point dropped
/// (`δ_0 = 0` in the free space) and no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointMassElement {
    coeffs: BTreeMap<usize, Rational>,
}

impl PointMassElement {
    /// Builds the canonical form: base entry and zeros are discarded.
    pub fn new(space: &FiniteMetricSpace, coeffs: BTreeMap<usize, Rational>) -> Result<Self> {
        for &p in coeffs.keys() {
            space.check_index(p)?;
        }
        let base = space.base();
        Ok(PointMassElement {
            coeffs: coeffs
                .into_iter()
                .filter(|(p, c)| *p != base && !c.is_zero())
                .collect(),
        })
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, p: usize) -> Rational {
        self.coeffs.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Pairing with a function given by its values on every point.
    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(&p, c)| c * &values[p]).sum()
    }

    /// The balanced measure `c - (Σc) δ_base` over all points.
    pub fn balanced_measure(&self, space: &FiniteMetricSpace) -> Vec<Rational> {
        let mut m = vec![Rational::zero(); space.len()];
        let mut total = Rational::zero();
        for (&p, c) in &self.coeffs {
            m[p] = c.clone();
            total += c;
        }
        m[space.base()] = -total;
        m
    }
}

/// Expand `Σ λ_i (δ_{x_i} - δ_{y_i}) / d(x_i, y_i)` into point masses.
pub fn to_point_masses(space: &FiniteMetricSpace, system: &MoleculeSystem) -> PointMassElement {
    let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
    for (&(x, y), w) in system.pairs.iter().zip(&system.weights) {
        let c = w / space.d(x, y);
        *coeffs.entry(x).or_insert_with(Rational::zero) += &c;
        *coeffs.entry(y).or_insert_with(Rational::zero) -= c;
    }
    let base = space.base();
    PointMassElement {
        coeffs: coeffs
            .into_iter()
            .filter(|(p, c)| *p != base && !c.is_zero())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{star, triangle};
    use crate::rational::{int, ratio};

    #[test]
    fn star_beta_vanishes() {
        let space = star(5);
        let beta = beta_matrix(&space, &[(1, 0), (2, 0), (3, 0)]).unwrap();
        assert!(beta.rows().iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn single_pair_beta_is_zero() {
        let space = star(2);
        let beta = beta_matrix(&space, &[(1, 2)]).unwrap();
        assert_eq!(beta.rows(), &[vec![int(0)]]);
    }

    #[test]
    fn triangle_beta_entries() {
        // points 0, a=1, b=2 with d(a,0)=2, d(b,0)=1, d(a,b)=2
        let space = triangle();
        let beta = beta_matrix(&space, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(beta.get(0, 1), &int(0));
        assert_eq!(beta.get(1, 0), &int(-1));
        assert_eq!(beta.cycle_sum(&[0, 1]), int(-1));
    }

    #[test]
    fn degenerate_pairs_are_rejected() {
        let space = triangle();
        assert!(beta_matrix(&space, &[(1, 1)]).is_err());
        assert!(MoleculeSystem::new(&space, vec![(1, 0)], vec![int(0)]).is_err());
        assert!(MoleculeSystem::new(&space, vec![(1, 0)], vec![]).is_err());
        assert!(MoleculeSystem::new(&space, vec![(1, 7)], vec![int(1)]).is_err());
    }

    #[test]
    fn point_mass_expansion() {
        let space = triangle();
        let single = MoleculeSystem::new(&space, vec![(1, 0)], vec![int(1)]).unwrap();
        assert_eq!(
            to_point_masses(&space, &single).coeffs(),
            &BTreeMap::from([(1, ratio(1, 2))])
        );

        let cancel =
            MoleculeSystem::new(&space, vec![(1, 2), (2, 1)], vec![ratio(1, 2), ratio(1, 2)])
                .unwrap();
        assert!(to_point_masses(&space, &cancel).is_zero());

        let mixed =
            MoleculeSystem::new(&space, vec![(1, 0), (0, 2)], vec![ratio(1, 2), ratio(1, 2)])
                .unwrap();
        assert_eq!(
            to_point_masses(&space, &mixed).coeffs(),
            &BTreeMap::from([(1, ratio(1, 4)), (2, ratio(-1, 2))])
        );
    }

    #[test]
    fn unit_molecule_has_unit_coefficients() {
        let space = triangle();
        for (x, y) in [(1, 2), (2, 1), (1, 0), (0, 2)] {
            let sys =
                MoleculeSystem::new(&space, vec![(x, y)], vec![space.d(x, y).clone()]).unwrap();
            let e = to_point_masses(&space, &sys);
            let mut expect = BTreeMap::from([(x, int(1)), (y, int(-1))]);
            expect.remove(&space.base());
            assert_eq!(e.coeffs(), &expect);
        }
    }

    #[test]
    fn balanced_measure_sums_to_zero() {
        let space = triangle();
        let e = PointMassElement::new(
            &space,
            BTreeMap::from([(1, ratio(1, 4)), (2, ratio(-1, 2))]),
        )
        .unwrap();
        let m = e.balanced_measure(&space);
        assert_eq!(m.iter().sum::<Rational>(), int(0));
        assert_eq!(m[0], ratio(1, 4));
    }
}
