//! Exchangeability on `X^N`: exchangeable masses and envelopes, the passage
//! between tuple models and count models, the finite representation, and
//! time consistency of families of count models.
//!
//! An exchangeable model is stored by its count model `Q` on `N_X^N`; its
//! value at a gamble `f` on `X^N` is `Q(MuHy(f|·))`.

use crate::combinatorics::{
    count_of, count_rank, draw_weight, muhy_extend, muhy_gamble, CountDomain, CountGamble, Domain,
    Gamble, Space, TupleDomain,
};
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, Sense};
use crate::prevision::{
    Assessment, CountAssessment, CountCredalSet, CountModel, CredalSet, LowerPrevision, Model,
    TupleAssessment,
};
use crate::rational::{from_biguint, int, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// The adjacent transpositions `(k k+1)` of `0..arity`, as position maps.
pub fn adjacent_transpositions(arity: u32) -> Vec<Vec<usize>> {
    let n = arity as usize;
    (0..n.saturating_sub(1))
        .map(|k| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(k, k + 1);
            perm
        })
        .collect()
}

fn swapped_index(domain: &TupleDomain, tuple: &[usize], k: usize) -> usize {
    let mut other = tuple.to_vec();
    other.swap(k, k + 1);
    domain.index(&other)
}

/// `p(x) = p(τx)` for every adjacent transposition `τ`.
pub fn is_exchangeable_mass(domain: &TupleDomain, mass: &[Rational]) -> bool {
    let positions = domain.arity() as usize;
    domain.tuples().enumerate().all(|(i, z)| {
        (0..positions.saturating_sub(1)).all(|k| mass[i] == mass[swapped_index(domain, &z, k)])
    })
}

pub fn is_exchangeable_envelope(c: &CredalSet<TupleDomain>) -> bool {
    c.points().iter().all(|p| is_exchangeable_mass(c.domain(), p))
}

/// Decides `P(τf - f) ≥ 0` for all gambles `f` and all permutations, where
/// `P` is the natural extension of `a`. Checking `f = ±I_x` against the
/// adjacent transpositions suffices: the accepted gambles form a convex cone
/// and adjacent transpositions generate every permutation.
pub fn is_exchangeable_assessment(a: &TupleAssessment) -> Result<bool> {
    let domain = a.domain().clone();
    let positions = domain.arity() as usize;
    for (i, z) in domain.tuples().enumerate() {
        for k in 0..positions.saturating_sub(1) {
            let j = swapped_index(&domain, &z, k);
            if j <= i {
                continue;
            }
            // τI_x - I_x = I_{τx} - I_x
            let diff = &Gamble::unit(domain.clone(), j) - &Gamble::unit(domain.clone(), i);
            if a.natural_extension(&diff)? < Rational::zero() || a.natural_extension(&-&diff)? < Rational::zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The count distribution `q(m) = Σ_{z ∈ [m]} p(z)` of a mass on `X^N`.
pub fn count_mass(domain: &TupleDomain, mass: &[Rational]) -> Vec<Rational> {
    let counts = domain.count_domain();
    let mut q = vec![Rational::zero(); counts.len()];
    for (z, p) in domain.tuples().zip(mass) {
        q[count_rank(&count_of(domain, &z))] += p;
    }
    q
}

/// The exchangeable mass `p(z) = q(T z) / ν(T z)` with count distribution `q`.
pub fn exchangeable_mass(domain: &TupleDomain, q: &[Rational]) -> Vec<Rational> {
    domain
        .tuples()
        .map(|z| {
            let m = count_of(domain, &z);
            &q[count_rank(&m)] / from_biguint(&m.atom_size())
        })
        .collect()
}

/// The count form of an exchangeable credal set on `X^N`.
pub fn count_credal_set(c: &CredalSet<TupleDomain>) -> Result<CountCredalSet> {
    if !is_exchangeable_envelope(c) {
        return Err(Error::InvalidArgument(
            "credal set has a non-exchangeable extreme point".into(),
        ));
    }
    CredalSet::new(
        c.domain().count_domain(),
        c.points().iter().map(|p| count_mass(c.domain(), p)).collect(),
    )
}

/// Replaces each `(f, P(f))` by `(MuHy(f|·), P(f))`.
pub fn induce_count_assessment(a: &TupleAssessment) -> CountAssessment {
    let mut out = Assessment::new(a.domain().count_domain());
    for item in a.items() {
        out.push(muhy_gamble(&item.gamble), item.lower.clone())
            .expect("count domain of the assessment");
    }
    out
}

/// `Q(MuHy(f|·))`.
pub fn reconstruct_lower_prevision<Q: LowerPrevision<CountDomain>>(q: &Q, f: &Gamble) -> Result<Rational> {
    q.lower(&muhy_gamble(f))
}

/// An exchangeable lower prevision on `X^N`, stored by its count model.
#[derive(Clone, Debug, PartialEq)]
pub struct Exchangeable {
    domain: TupleDomain,
    counts: CountModel,
}

impl Exchangeable {
    pub fn new(domain: TupleDomain, counts: CountModel) -> Result<Self> {
        if *counts.domain() != domain.count_domain() {
            return Err(Error::DomainMismatch(format!(
                "count model on {} for {}",
                counts.domain().describe(),
                domain.describe()
            )));
        }
        Ok(Self { domain, counts })
    }

    pub fn from_envelope(c: &CredalSet<TupleDomain>) -> Result<Self> {
        Self::new(c.domain().clone(), Model::Envelope(count_credal_set(c)?))
    }

    pub fn counts(&self) -> &CountModel {
        &self.counts
    }
}

impl LowerPrevision<TupleDomain> for Exchangeable {
    fn domain(&self) -> &TupleDomain {
        &self.domain
    }

    fn lower(&self, f: &Gamble) -> Result<Rational> {
        reconstruct_lower_prevision(&self.counts, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteRepresentation {
    /// `E(f)`
    pub lower: Rational,
    /// `E(f̂)`
    pub lower_symmetrized: Rational,
    /// `E(f - f̂)`
    pub lower_difference: Rational,
    /// `E(f̂ - f)`
    pub lower_reverse_difference: Rational,
}

impl FiniteRepresentation {
    pub fn holds(&self) -> bool {
        self.lower == self.lower_symmetrized
            && self.lower_difference.is_zero()
            && self.lower_reverse_difference.is_zero()
    }
}

/// Evaluates `E(f)`, `E(f̂)`, `E(f - f̂)` and `E(f̂ - f)` under `e`.
pub fn verify_finite_representation<E: LowerPrevision<TupleDomain>>(e: &E, f: &Gamble) -> Result<FiniteRepresentation> {
    let hat = crate::combinatorics::symmetrize(f);
    Ok(FiniteRepresentation {
        lower: e.lower(f)?,
        lower_symmetrized: e.lower(&hat)?,
        lower_difference: e.lower(&(f - &hat))?,
        lower_reverse_difference: e.lower(&(&hat - f))?,
    })
}

/// Sparse rows of the sampling map `g ↦ ḡ`: row `µ` of level `target` holds
/// `(rank m, ν(m)ν(µ-m)/ν(µ))` for the level-`n` count vectors `m ≤ µ`.
pub fn sampling_rows(from: &CountDomain, target: u32) -> Vec<Vec<(usize, Rational)>> {
    let small = from.vectors();
    from.with_level(target)
        .vectors()
        .iter()
        .map(|mu| {
            small
                .iter()
                .enumerate()
                .filter(|(_, m)| m.fits_in(mu))
                .map(|(i, m)| (i, draw_weight(m, mu)))
                .collect()
        })
        .collect()
}

/// The level-`n` count distribution of `n` draws without replacement from an
/// urn whose level-`(n+k)` count distribution is `q`.
pub fn count_marginal(rows: &[Vec<(usize, Rational)>], small_len: usize, q: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); small_len];
    for (row, qmu) in rows.iter().zip(q) {
        for (i, w) in row {
            out[*i] += w * qmu;
        }
    }
    out
}

/// Count models for a contiguous range of levels over one space.
#[derive(Clone, Debug, PartialEq)]
pub struct CountFamily {
    space: Space,
    levels: BTreeMap<u32, CountModel>,
}

impl CountFamily {
    /// Levels must all be over `space` and form a contiguous range.
    pub fn new(space: Space, models: Vec<CountModel>) -> Result<Self> {
        let mut levels = BTreeMap::new();
        for model in models {
            let domain = model.domain().clone();
            if *domain.space() != space {
                return Err(Error::DomainMismatch(format!(
                    "level over {:?} in a family over {:?}",
                    domain.space().labels(),
                    space.labels()
                )));
            }
            if levels.insert(domain.level(), model).is_some() {
                return Err(Error::InvalidArgument(format!("level {} given twice", domain.level())));
            }
        }
        let (Some(&lo), Some(&hi)) = (levels.keys().next(), levels.keys().next_back()) else {
            return Err(Error::InvalidArgument("a family needs at least one level".into()));
        };
        if (hi - lo + 1) as usize != levels.len() {
            return Err(Error::InvalidArgument(format!("levels {lo}..={hi} have gaps")));
        }
        Ok(Self { space, levels })
    }

    /// The family `n ↦ f(n)` for `n = 1..=n_max`.
    pub fn from_fn(space: Space, n_max: u32, f: impl Fn(&CountDomain) -> Result<CountModel>) -> Result<Self> {
        let models = (1..=n_max)
            .map(|n| f(&CountDomain::new(space.clone(), n)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, models)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn level(&self, n: u32) -> Result<&CountModel> {
        self.levels.get(&n).ok_or(Error::LevelUnavailable(n))
    }

    pub fn min_level(&self) -> u32 {
        *self.levels.keys().next().expect("non-empty family")
    }

    pub fn max_level(&self) -> u32 {
        *self.levels.keys().next_back().expect("non-empty family")
    }

    pub fn levels(&self) -> impl Iterator<Item = (u32, &CountModel)> {
        self.levels.iter().map(|(n, m)| (*n, m))
    }
}

/// A level-`n` gamble on which the two sides of time consistency differ.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyWitness {
    pub gamble: CountGamble,
    /// `Q^n(h)`
    pub level_value: Rational,
    /// `Q^{n+k}(ḡ)`
    pub extended_value: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeConsistency {
    pub consistent: bool,
    pub witness: Option<ConsistencyWitness>,
    /// Whether a positive verdict is exact. When `false`, a positive verdict
    /// only means that no tested gamble and no available exact check found a
    /// discrepancy.
    pub complete: bool,
}

/// Number of seeded random non-negative combinations of indicators tested
/// (each also negated).
const RANDOM_COMBINATIONS: usize = 8;
const SEED: u64 = 0x5eed;

/// Generating masses of a model: its envelope points, or its unique mass
/// when an assessment is linear.
fn generators(model: &CountModel) -> Result<Option<Vec<Vec<Rational>>>> {
    match model {
        Model::Envelope(c) => Ok(Some(c.points().to_vec())),
        Model::Assessed(a) => Ok(a.linear_mass()?.map(|p| vec![p])),
    }
}

/// `max_h [Q(Wh) - r·h]` over `h ∈ [-1, 1]^d`, where row `i` of `rows` gives
/// the `i`-th value of `Wh`. Positive exactly when `r` lies outside the
/// credal set of `h ↦ Q(Wh)`.
fn separation(model: &CountModel, rows: &[Vec<(usize, Rational)>], r: &[Rational]) -> Result<(Rational, Vec<Rational>)> {
    let d = r.len();
    let t = d;
    let aux = d + 1;
    let mut objective: Vec<Rational> = r.iter().map(|v| -v).collect();
    objective.push(Rational::one());
    objective.extend(std::iter::repeat_n(Rational::zero(), model.auxiliary_count()));
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for j in 0..d {
        lp.set_bounds(j, Some(-Rational::one()), Some(Rational::one()));
    }
    lp.set_free(t);
    model.bound_lower(&mut lp, rows, t, aux);
    let solution = solve(&lp)?.optimal().expect("bounded separation program");
    Ok((solution.value, solution.x[..d].to_vec()))
}

/// Tests `Q^n(h) = Q^{n+k}(ḡ)` for level-`n` gambles `h`.
///
/// Indicators, negated indicators and seeded random combinations are tested
/// first. Then, whichever exact checks the representations allow are run:
/// `Q^{n+k}(ḡ) ≥ Q^n(h)` for all `h` is decided exactly when level `n` is an
/// assessment or level `n+k` has generating masses, and `Q^n(h) ≥ Q^{n+k}(ḡ)`
/// for all `h` when level `n` has generating masses.
pub fn check_time_consistency(fam: &CountFamily, n: u32, k: u32) -> Result<TimeConsistency> {
    let low = fam.level(n)?;
    let high = fam.level(n + k)?;
    if !low.avoids_sure_loss()? || !high.avoids_sure_loss()? {
        return Err(Error::SureLoss);
    }
    let domain = low.domain().clone();
    let size = domain.len();
    let rows = sampling_rows(&domain, n + k);

    let compare = |h: CountGamble| -> Result<Option<ConsistencyWitness>> {
        let level_value = low.lower(&h)?;
        let extended_value = high.lower(&muhy_extend(&h, n + k)?)?;
        Ok((level_value != extended_value).then_some(ConsistencyWitness {
            gamble: h,
            level_value,
            extended_value,
        }))
    };
    let inconsistent = |w: ConsistencyWitness| TimeConsistency {
        consistent: false,
        witness: Some(w),
        complete: true,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut tests: Vec<CountGamble> = Vec::new();
    for i in 0..size {
        let unit = CountGamble::unit(domain.clone(), i);
        tests.push(-&unit);
        tests.push(unit);
    }
    for _ in 0..RANDOM_COMBINATIONS {
        let values = (0..size).map(|_| int(rng.gen_range(0..5))).collect();
        let h = CountGamble::from_values(domain.clone(), values)?;
        tests.push(-&h);
        tests.push(h);
    }
    for h in tests {
        if let Some(w) = compare(h)? {
            return Ok(inconsistent(w));
        }
    }

    let low_generators = generators(low)?;
    let high_generators = generators(high)?;
    let identity: Vec<Vec<(usize, Rational)>> = (0..size).map(|i| vec![(i, Rational::one())]).collect();
    let vanishes = |(value, h): (Rational, Vec<Rational>)| -> Result<Option<ConsistencyWitness>> {
        if value > Rational::zero() {
            let w = compare(CountGamble::from_values(domain.clone(), h)?)?;
            assert!(w.is_some(), "a separating gamble is a witness");
            Ok(w)
        } else {
            Ok(None)
        }
    };

    // marginal credal set ⊆ credal set of level n
    let mut exact_up = true;
    match (low, &high_generators) {
        (Model::Assessed(a), _) => {
            for item in a.items() {
                if let Some(w) = compare(item.gamble.clone())? {
                    return Ok(inconsistent(w));
                }
            }
        }
        (_, Some(points)) => {
            for q in points {
                let marginal = count_marginal(&rows, size, q);
                if let Some(w) = vanishes(separation(low, &identity, &marginal)?)? {
                    return Ok(inconsistent(w));
                }
            }
        }
        _ => exact_up = false,
    }

    // credal set of level n ⊆ marginal credal set
    let mut exact_down = true;
    match &low_generators {
        Some(points) => {
            for p in points {
                if let Some(w) = vanishes(separation(high, &rows, p)?)? {
                    return Ok(inconsistent(w));
                }
            }
        }
        None => exact_down = false,
    }

    Ok(TimeConsistency { consistent: true, witness: None, complete: exact_up && exact_down })
}
