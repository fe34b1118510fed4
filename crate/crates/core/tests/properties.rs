//! Property tests spanning several modules.

use credal::bernstein::{Polynomial, SimplexPoint};
use credal::combinatorics::{
    count_vectors, lift_count_gamble, muhy, muhy_extend, muhy_gamble, permute_gamble, symmetrize, CountDomain,
    CountGamble, CountVector, Domain, Gamble, GambleOn, Space, TupleDomain,
};
use credal::exchangeability::{
    check_time_consistency, count_marginal, exchangeable_mass, reconstruct_lower_prevision, sampling_rows,
};
use credal::extension::{ExtensionProblem, ExtensionVerdict};
use credal::prevision::{Assessment, CountModel, CredalSet, LowerPrevision, Model};
use credal::rational::{int, rat};
use credal::representation::{comn_mass, frequency_convergence_report, RepresentingPrevision};
use credal::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space(labels: usize) -> Space {
    Space::new(["a", "b", "c"].into_iter().take(labels)).unwrap()
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

fn gamble<D: Domain>(rng: &mut ChaCha8Rng, domain: &D) -> GambleOn<D> {
    GambleOn::from_values(domain.clone(), (0..domain.len()).map(|_| small_rational(rng)).collect()).unwrap()
}

fn mass(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..len).map(|_| if rng.gen_bool(0.25) { 0 } else { rng.gen_range(1..=4) }).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| rat(x, total)).collect();
        }
    }
}

fn point(rng: &mut ChaCha8Rng, space: &Space) -> SimplexPoint {
    SimplexPoint::new(space.clone(), mass(rng, space.len())).unwrap()
}

/// A count assessment that avoids sure loss: prices at or below the
/// expectations under a hidden mass.
fn count_assessment(rng: &mut ChaCha8Rng, domain: &CountDomain) -> CountModel {
    let hidden = mass(rng, domain.len());
    let mut a = Assessment::new(domain.clone());
    for _ in 0..rng.gen_range(1..=3) {
        let g = gamble(rng, domain);
        let price = g.expectation(&hidden) - rat(rng.gen_range(0..=2), 3);
        a.push(g, price).unwrap();
    }
    Model::Assessed(a)
}

fn count_envelope(rng: &mut ChaCha8Rng, domain: &CountDomain) -> CountModel {
    let points = (0..rng.gen_range(1..=3)).map(|_| mass(rng, domain.len())).collect();
    Model::Envelope(CredalSet::new(domain.clone(), points).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn muhy_is_permutation_invariant(seed in any::<u64>(), labels in 2usize..=3, arity in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = TupleDomain::new(space(labels), arity).unwrap();
        let f = gamble(&mut rng, &domain);
        let mut perm: Vec<usize> = (0..arity as usize).collect();
        perm.shuffle(&mut rng);
        let pf = permute_gamble(&f, &perm).unwrap();
        for m in count_vectors(labels, arity) {
            prop_assert_eq!(muhy(&pf, &m).unwrap(), muhy(&f, &m).unwrap());
        }
    }

    #[test]
    fn symmetrize_is_idempotent_linear_and_count_dependent(seed in any::<u64>(), labels in 2usize..=3, arity in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = TupleDomain::new(space(labels), arity).unwrap();
        let (f, g) = (gamble(&mut rng, &domain), gamble(&mut rng, &domain));
        let c = small_rational(&mut rng);
        let hat = symmetrize(&f);
        prop_assert_eq!(symmetrize(&hat), hat.clone());
        prop_assert_eq!(symmetrize(&(&f.scale(&c) + &g)), &hat.scale(&c) + &symmetrize(&g));
        for z in domain.tuples() {
            for w in domain.tuples() {
                if CountVector::of_tuple(labels, &z) == CountVector::of_tuple(labels, &w) {
                    prop_assert_eq!(hat.at(&z), hat.at(&w));
                }
            }
        }
    }

    /// Previsions of the form Q(MuHy(·)) are permutable and vanish on f - πf.
    #[test]
    fn reconstructed_previsions_are_exchangeable(seed in any::<u64>(), arity in 2u32..=3, envelope in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = TupleDomain::new(space(2), arity).unwrap();
        let counts = domain.count_domain();
        let q = if envelope { count_envelope(&mut rng, &counts) } else { count_assessment(&mut rng, &counts) };
        let f = gamble(&mut rng, &domain);
        let mut perm: Vec<usize> = (0..arity as usize).collect();
        perm.shuffle(&mut rng);
        let pf = permute_gamble(&f, &perm).unwrap();
        prop_assert_eq!(reconstruct_lower_prevision(&q, &pf).unwrap(), reconstruct_lower_prevision(&q, &f).unwrap());
        prop_assert!(reconstruct_lower_prevision(&q, &(&f - &pf)).unwrap().is_zero());
    }

    /// Lifting a count gamble and reconstructing returns the count model's value.
    #[test]
    fn reconstruction_roundtrip(seed in any::<u64>(), labels in 2usize..=3, arity in 1u32..=4) {
        prop_assume!(labels == 2 || arity <= 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = TupleDomain::new(space(labels), arity).unwrap();
        let counts = domain.count_domain();
        let q = count_assessment(&mut rng, &counts);
        let h = gamble(&mut rng, &counts);
        let lifted = lift_count_gamble(&h, &domain).unwrap();
        prop_assert_eq!(muhy_gamble(&lifted), h.clone());
        prop_assert_eq!(reconstruct_lower_prevision(&q, &lifted).unwrap(), q.lower(&h).unwrap());
    }

    /// The level-n marginal h ↦ Q(h̄) of a coherent level-(n+k) model is coherent.
    #[test]
    fn marginals_are_coherent(seed in any::<u64>(), n in 1u32..=2, k in 1u32..=2, envelope in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let big = CountDomain::new(space(2), n + k);
        let small = big.with_level(n);
        let q = if envelope { count_envelope(&mut rng, &big) } else { count_assessment(&mut rng, &big) };
        let marginal = |h: &CountGamble| q.lower(&muhy_extend(h, n + k).unwrap()).unwrap();
        let (f, g) = (gamble(&mut rng, &small), gamble(&mut rng, &small));
        let lambda = rat(rng.gen_range(0..=4), rng.gen_range(1..=3));
        prop_assert!(marginal(&f) >= f.min());
        prop_assert!(marginal(&f) <= -marginal(&-&f));
        prop_assert_eq!(marginal(&f.scale(&lambda)), &lambda * marginal(&f));
        prop_assert!(marginal(&(&f + &g)) >= marginal(&f) + marginal(&g));
        if let Model::Envelope(c) = &q {
            let rows = sampling_rows(&small, n + k);
            for p in c.points() {
                let m = count_marginal(&rows, small.len(), p);
                prop_assert!(m.iter().all(|v| *v >= Rational::zero()));
                prop_assert_eq!(m.iter().sum::<Rational>(), Rational::one());
            }
        }
    }

    /// Representing values are coherent on polynomials.
    #[test]
    fn representing_value_is_coherent(seed in any::<u64>(), labels in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = space(labels);
        let points: Vec<SimplexPoint> = (0..rng.gen_range(1..=3)).map(|_| point(&mut rng, &s)).collect();
        let r = RepresentingPrevision::vacuous_mixture(points).unwrap();
        let poly = |rng: &mut ChaCha8Rng| {
            let terms: Vec<(Vec<u32>, Rational)> =
                (0..=2).flat_map(|d| count_vectors(labels, d)).map(|m| (m.counts().to_vec(), small_rational(rng))).collect();
            Polynomial::new(s.clone(), terms).unwrap()
        };
        let (p, q) = (poly(&mut rng), poly(&mut rng));
        let value = |p: &Polynomial| r.value_of_polynomial(p).unwrap();
        let b = p.to_bernstein(2).unwrap();
        prop_assert!(value(&p) >= b.coefficients().min());
        let lambda = rat(rng.gen_range(0..=4), 2);
        let scaled = Polynomial::new(s.clone(), p.terms().iter().map(|(e, c)| (e.clone(), c * &lambda))).unwrap();
        prop_assert_eq!(value(&scaled), &lambda * value(&p));
        let sum = Polynomial::new(s.clone(), p.terms().clone().into_iter().chain(q.terms().clone())).unwrap();
        prop_assert!(value(&sum) >= value(&p) + value(&q));
    }

    /// Families built from representing previsions are time consistent, and the
    /// family backing recovers the mixture values.
    #[test]
    fn representation_families_roundtrip(seed in any::<u64>(), precise in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = space(2);
        let points: Vec<SimplexPoint> = (0..rng.gen_range(1..=2)).map(|_| point(&mut rng, &s)).collect();
        let weights = mass(&mut rng, points.len());
        let r = if precise {
            RepresentingPrevision::precise_mixture(weights.clone(), points.clone()).unwrap()
        } else {
            RepresentingPrevision::vacuous_mixture(points.clone()).unwrap()
        };
        let family = r.family(3).unwrap();
        for (n, k) in [(1, 1), (1, 2), (2, 1)] {
            prop_assert!(check_time_consistency(&family, n, k).unwrap().consistent);
        }
        let backed = RepresentingPrevision::from_family(family).unwrap();
        let p = Polynomial::new(
            s.clone(),
            (0..=3).flat_map(|d| count_vectors(2, d)).map(|m| (m.counts().to_vec(), small_rational(&mut rng))),
        )
        .unwrap();
        let values: Vec<Rational> = points.iter().map(|t| p.eval(t)).collect();
        let expected = if precise {
            weights.iter().zip(&values).map(|(w, v)| w * v).sum()
        } else {
            values.iter().min().unwrap().clone()
        };
        prop_assert_eq!(backed.value_of_polynomial(&p).unwrap(), expected);
    }

    /// Smallest extension: restricting back reproduces the base, and for a
    /// precise base it is the minimum over the vertices of the extension polytope.
    #[test]
    fn smallest_extension_properties(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = space(2);
        let small = CountDomain::new(s.clone(), 2);
        let theta = point(&mut rng, &s);
        let base = Model::precise(small.clone(), comn_mass(&small, &theta).unwrap()).unwrap();
        let problem = ExtensionProblem::new(base.clone(), 1);
        let verdict = problem.extendable().unwrap();
        let extendable = matches!(verdict.verdict, ExtensionVerdict::Extendable { .. });
        prop_assert!(extendable);
        let g = gamble(&mut rng, &small);
        let bar = muhy_extend(&g, 3).unwrap();
        prop_assert_eq!(problem.smallest_extension(&bar).unwrap(), base.lower(&g).unwrap());

        let big = small.with_level(3);
        let h = gamble(&mut rng, &big);
        let (dual, q) = problem.smallest_extension_dual(&h).unwrap();
        prop_assert_eq!(problem.smallest_extension(&h).unwrap(), dual.clone());
        prop_assert!(problem.verify_witness(&q).unwrap());
        let rows = sampling_rows(&small, 3);
        let p = comn_mass(&small, &theta).unwrap();
        let oracle = extension_vertices(&rows, &p, big.len())
            .iter()
            .map(|v| h.expectation(v))
            .min()
            .expect("a feasible extension");
        prop_assert_eq!(dual, oracle);
    }

    #[test]
    fn frequency_gaps_shrink_along_doubling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = space(2);
        let r = RepresentingPrevision::precise(point(&mut rng, &s));
        let h = Polynomial::new(s, [(vec![0, 2], int(1)), (vec![1, 1], small_rational(&mut rng))]).unwrap();
        let report = frequency_convergence_report(&r, &h, [2, 4, 8, 16]).unwrap();
        let gaps: Vec<Rational> = report.gaps().unwrap().into_iter().map(|(_, g)| g).collect();
        prop_assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{:?}", gaps);
    }
}

/// Vertices of `{q ≥ 0 : Σ_µ w(m, µ) q(µ) = p(m) for all m}` by enumerating
/// supports.
fn extension_vertices(rows: &[Vec<(usize, Rational)>], p: &[Rational], big: usize) -> Vec<Vec<Rational>> {
    let mut vertices = Vec::new();
    for zeros in 0u32..(1 << big) {
        let mut a: Vec<Vec<Rational>> = vec![vec![Rational::zero(); big]; p.len()];
        for (mu, row) in rows.iter().enumerate() {
            for (m, w) in row {
                a[*m][mu] = w.clone();
            }
        }
        let mut b = p.to_vec();
        for i in 0..big {
            if zeros & (1 << i) != 0 {
                let mut row = vec![Rational::zero(); big];
                row[i] = Rational::one();
                a.push(row);
                b.push(Rational::zero());
            }
        }
        if let Some(q) = unique_solution(a, b) {
            if q.iter().all(|v| *v >= Rational::zero()) {
                vertices.push(q);
            }
        }
    }
    vertices
}

/// The unique solution of a consistent system, or `None`.
fn unique_solution(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let cols = a[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..a.len()).find(|&r| !a[r][col].is_zero())?;
        a.swap(rank, pivot);
        b.swap(rank, pivot);
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[rank][col];
                for c in 0..cols {
                    let delta = &factor * &a[rank][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[rank];
                b[r] -= delta;
            }
        }
        rank += 1;
    }
    if b[rank..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some((0..cols).map(|i| &b[i] / &a[i][i]).collect())
}

#[test]
fn exchangeable_masses_have_symmetric_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let domain = TupleDomain::new(space(3), 3).unwrap();
    let q = mass(&mut rng, domain.count_domain().len());
    let p = exchangeable_mass(&domain, &q);
    let f = gamble(&mut rng, &domain);
    assert_eq!(f.expectation(&p), symmetrize(&f).expectation(&p));
    let indicator = Gamble::indicator(domain.clone(), &[0, 1, 2]);
    assert_eq!(indicator.expectation(&p), Gamble::indicator(domain, &[2, 1, 0]).expectation(&p));
}
