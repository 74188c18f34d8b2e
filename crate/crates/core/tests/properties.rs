//! Randomized properties checked against the brute-force oracles.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lipfree::differentiability::{
    apply_orientation, coverage_eps_prefix, decide, l1_basis_check, DiffVerdict,
};
use lipfree::generators::{
    gen_random, random_element, random_lipschitz, random_system, repair_metric, Profile,
};
use lipfree::metric::{validate_space, DEFAULT_VIOLATION_LIMIT};
use lipfree::molecule::{beta_matrix, to_point_masses};
use lipfree::norming::{build_on_n, extend_lower, extend_upper, verify_norming};
use lipfree::oracles::{brute_cycles, brute_dual_norm};
use lipfree::potential::{check_cyclical_monotonicity, closure, Closure};
use lipfree::rational::{int, ratio, Rational};
use lipfree::transport::{attains, decompose_to_molecules, free_norm};
use lipfree::{FiniteMetricSpace, MoleculeSystem};

fn profile_strategy() -> impl Strategy<Value = Profile> {
    prop_oneof![Just(Profile::Generic), Just(Profile::NearDegenerate)]
}

fn instance(
    seed: u64,
    points: usize,
    profile: Profile,
) -> (FiniteMetricSpace, MoleculeSystem, ChaCha8Rng) {
    let space = gen_random(points, seed, profile).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let system = random_system(&space, 5, &mut rng);
    (space, system, rng)
}

/// Feasible potentials: `α_k ≤ α_j + β[k][j]` for all `j, k`.
fn feasible(beta: &lipfree::BetaMatrix, alphas: &[Rational]) -> bool {
    (0..alphas.len()).all(|j| (0..alphas.len()).all(|k| alphas[k] <= &alphas[j] + beta.get(k, j)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_spaces_are_metric(seed in any::<u64>(), points in 2usize..=8, profile in profile_strategy()) {
        let space = gen_random(points, seed, profile).unwrap();
        let raw = space.to_raw();
        prop_assert!(validate_space(&raw, DEFAULT_VIOLATION_LIMIT).unwrap().ok);
        prop_assert_eq!(repair_metric(raw.dist.clone()), raw.dist);
        prop_assert_eq!(gen_random(points, seed, profile).unwrap(), space);
    }

    #[test]
    fn segments_grow_with_eps(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy(), den in 1i64..=16) {
        let space = gen_random(points, seed, profile).unwrap();
        let eps = ratio(1, den);
        for s in 0..points {
            for t in (0..points).filter(|&t| t != s) {
                let exact = space.segment(s, t).unwrap();
                let relaxed = space.segment_eps(s, t, &eps).unwrap();
                prop_assert!(exact.is_subset(&relaxed));
                prop_assert!(exact.contains(&s) && exact.contains(&t));
            }
        }
    }

    #[test]
    fn closure_matches_cycle_enumeration(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let (space, system, _) = instance(seed, points, profile);
        let beta = beta_matrix(&space, system.pairs()).unwrap();
        let brute = brute_cycles(&beta, None).unwrap();
        match closure(&beta) {
            Closure::Table(t) => {
                prop_assert!(brute.min_sum >= int(0));
                prop_assert!(feasible(&beta, t.alphas()));
                let row = t.alphas_from_anchor_row();
                prop_assert!(feasible(&beta, &row));
                if t.globally_unique() {
                    let shift = &row[0] - &t.alphas()[0];
                    prop_assert!(row.iter().zip(t.alphas()).all(|(a, b)| a - b == shift));
                }
                for j in 0..beta.len() {
                    for k in 0..beta.len() {
                        prop_assert!(t.b(j, k) <= beta.get(j, k));
                        prop_assert_eq!(&beta.path_sum(&t.path(j, k)), t.b(j, k));
                    }
                }
            }
            Closure::NegativeCycle(w) => {
                prop_assert!(brute.min_sum < int(0));
                prop_assert!(w.verify(&beta));
                prop_assert!(w.sum >= brute.min_sum);
            }
        }
    }

    #[test]
    fn transport_duality(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let space = gen_random(points, seed, profile).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let element = random_element(&space, &mut rng);
        let cert = free_norm(&space, &element);
        prop_assert_eq!(cert.verify(&space, &element), Ok(()));
        prop_assert_eq!(&brute_dual_norm(&space, &element).unwrap(), &cert.value);
        prop_assert_eq!(free_norm(&space, &element), cert);
    }

    #[test]
    fn attainment_is_monotonicity(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let (space, system, _) = instance(seed, points, profile);
        prop_assert_eq!(
            attains(&space, &system),
            check_cyclical_monotonicity(&space, system.pairs()).unwrap().holds()
        );
    }

    #[test]
    fn decomposition_attains(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let space = gen_random(points, seed, profile).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let element = random_element(&space, &mut rng);
        let system = decompose_to_molecules(&space, &element);
        if element.is_zero() {
            prop_assert!(system.is_empty());
        } else {
            prop_assert_eq!(system.total_weight(), free_norm(&space, &element).value);
            prop_assert_eq!(to_point_masses(&space, &system), element);
            prop_assert!(check_cyclical_monotonicity(&space, system.pairs()).unwrap().holds());
        }
    }

    #[test]
    fn extensions_bracket_every_extension(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let (space, system, mut rng) = instance(seed, points, profile);
        let beta = beta_matrix(&space, system.pairs()).unwrap();
        let Closure::Table(table) = closure(&beta) else { return Ok(()) };
        let partial = build_on_n(&space, system.pairs(), &table);
        prop_assert!(partial.check_one_lipschitz(&space).is_ok());
        let g1 = extend_upper(&space, &partial).unwrap();
        let g2 = extend_lower(&space, &partial).unwrap();
        prop_assert!(g1.lip() <= &int(1) && g2.lip() <= &int(1));
        let f = g1.normalized(&space);
        prop_assert!(verify_norming(&space, system.pairs(), &f));
        prop_assert!(verify_norming(&space, system.pairs(), &g2.normalized(&space)));

        // Some other extension, grown point by point inside the feasible interval.
        let mut h: BTreeMap<usize, Rational> = partial.values().clone();
        for p in 0..space.len() {
            if h.contains_key(&p) {
                continue;
            }
            let lo = h.iter().map(|(&q, v)| v - space.d(q, p)).max().unwrap();
            let hi = h.iter().map(|(&q, v)| v + space.d(q, p)).min().unwrap();
            prop_assert!(lo <= hi);
            let step = rng.gen_range(0..=8);
            h.insert(p, &lo + (&hi - &lo) * ratio(step, 8));
        }
        for p in 0..space.len() {
            prop_assert!(g2.values()[p] <= h[&p] && h[&p] <= g1.values()[p]);
        }
    }

    #[test]
    fn decide_matches_rigidity_and_extensions(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let (space, system, _) = instance(seed, points, profile);
        let beta = beta_matrix(&space, system.pairs()).unwrap();
        let verdict = decide(&space, &system).unwrap();
        prop_assert_eq!(verdict.verify(&space, &system), Ok(()));
        match closure(&beta) {
            Closure::NegativeCycle(_) => prop_assert!(!verdict.is_frechet()),
            Closure::Table(table) => {
                let partial = build_on_n(&space, system.pairs(), &table);
                let same = extend_upper(&space, &partial).unwrap().values()
                    == extend_lower(&space, &partial).unwrap().values();
                prop_assert_eq!(verdict.is_frechet(), table.globally_unique() && same);
            }
        }
        if verdict.is_frechet() {
            prop_assert!(coverage_eps_prefix(&space, &system, &ratio(1, 64)).unwrap().is_some());
        }
        prop_assert_eq!(decide(&space, &system).unwrap(), verdict);
    }

    #[test]
    fn l1_check_ignores_global_orientation(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let (space, system, _) = instance(seed, points, profile);
        let pairs = system.pairs();
        let verdict = l1_basis_check(&space, pairs, 20).unwrap();
        let reversed = apply_orientation(pairs, &vec![true; pairs.len()]);
        prop_assert_eq!(
            l1_basis_check(&space, &reversed, 20).unwrap().is_isometric(),
            verdict.is_isometric()
        );
    }

    #[test]
    fn molecules_evaluate_linearly(seed in any::<u64>(), points in 2usize..=6, profile in profile_strategy()) {
        let (space, system, mut rng) = instance(seed, points, profile);
        let f = random_lipschitz(&space, &mut rng);
        let element = to_point_masses(&space, &system);
        let direct: Rational = system
            .pairs()
            .iter()
            .zip(system.weights())
            .map(|(&(x, y), w)| w * (f.value(x) - f.value(y)) / space.d(x, y))
            .sum();
        prop_assert_eq!(f.evaluate(&element), direct);
        prop_assert!(f.lip() <= &int(1));
        if let DiffVerdict::Frechet { norming, .. } = decide(&space, &system).unwrap() {
            prop_assert_eq!(norming.evaluate(&element), int(1));
        }
    }
}
