//! Exchangeable natural extension of local assessments on `X^N`, and the
//! extension of an exchangeable count model from `n` to `n + k` variables.
//!
//! # Smallest extension as one linear program
//!
//! Write `Q` for the base count model at level `n` and `ḡ` for the sampling
//! map image of a level-`n` gamble `g` at level `n + k`. The smallest
//! extension is `E(h) = sup { Q(g) : ḡ ≤ h }`. For a base assessment
//! `{(g_j, P_j)}`, natural extension gives
//! `Q(g) = sup { α : g - Σ_j λ_j (g_j - P_j) ≥ α, λ ≥ 0 }`, so
//!
//! ```text
//! E(h) = max  α
//!        s.t. α + Σ_j λ_j (g_j(m) - P_j) - g(m) ≤ 0     for every m
//!             Σ_m w(m, µ) g(m) ≤ h(µ)                   for every µ
//!             g free, α free, λ ≥ 0.
//! ```
//!
//! For a base envelope with points `p_i`, the first family of rows becomes
//! `α ≤ Σ_m p_i(m) g(m)` per point. Both suprema are attained, so the joint
//! program is exact. Its dual is `min { q'·h : q' a mass on N_X^{n+k} whose
//! marginal lies in the credal set of Q }`, which is computed separately as
//! a cross-check.

use crate::combinatorics::{muhy_extend, muhy_gamble, CountDomain, CountGamble, Domain, Gamble, TupleDomain};
use crate::error::{Error, Result};
use crate::exchangeability::{count_marginal, sampling_rows};
use crate::lp::{solve, LinearProgram, LpOutcome, Relation, Sense};
use crate::prevision::{Assessment, CountAssessment, CountModel, LowerPrevision, Model, SureLossVerdict, TupleAssessment};
use crate::rational::{primitive_integer_ray, Rational};
use num_traits::{One, Zero};

/// `min_m MuHy(f|m)`, the smallest exchangeable coherent lower prevision.
pub fn vacuous_exchangeable(f: &Gamble) -> Rational {
    muhy_gamble(f).min()
}

/// Local assessments on `X^N` combined with a judgement of exchangeability.
#[derive(Clone, Debug, PartialEq)]
pub struct EneProblem {
    local: TupleAssessment,
}

impl EneProblem {
    pub fn new(local: TupleAssessment) -> Self {
        Self { local }
    }

    pub fn domain(&self) -> &TupleDomain {
        self.local.domain()
    }

    pub fn local(&self) -> &TupleAssessment {
        &self.local
    }

    /// The count assessment `Q(MuHy(f|·)) = P(f)`. Distinct gambles with the
    /// same image keep the largest price.
    pub fn induced(&self) -> CountAssessment {
        let mut merged: Vec<(CountGamble, Rational)> = Vec::new();
        for item in self.local.items() {
            let image = muhy_gamble(&item.gamble);
            match merged.iter_mut().find(|(g, _)| *g == image) {
                Some((_, price)) => {
                    if item.lower > *price {
                        *price = item.lower.clone();
                    }
                }
                None => merged.push((image, item.lower.clone())),
            }
        }
        let mut q = Assessment::new(self.domain().count_domain());
        for (g, price) in merged {
            q.push(g, price).expect("count domain of the problem");
        }
        q
    }

    /// Whether some exchangeable coherent lower prevision dominates the
    /// local assessment. The certificate refers to the items of [`Self::induced`].
    pub fn exists(&self) -> Result<SureLossVerdict> {
        self.induced().avoids_sure_loss()
    }

    /// The exchangeable natural extension at `f`.
    pub fn value(&self, f: &Gamble) -> Result<Rational> {
        match self.induced().natural_extension(&muhy_gamble(f)) {
            Err(Error::SureLoss) => Err(Error::NoExchangeableDominator),
            other => other,
        }
    }
}

/// A level-`n` gamble with `Q(g) > max ḡ`, proving that no coherent
/// exchangeable model on `n + k` variables extends the base.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatingGamble {
    pub gamble: CountGamble,
    /// `Q(g)`
    pub base_value: Rational,
    /// `max_µ ḡ(µ)`
    pub extended_max: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExtensionVerdict {
    /// A level-`(n+k)` count mass whose marginal lies in the base credal set.
    Extendable { witness: Vec<Rational> },
    NotExtendable { certificate: SeparatingGamble },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extendability {
    pub verdict: ExtensionVerdict,
    /// Whether the smallest extension marginalizes back to the base itself.
    /// Decided when the base has generating masses (an envelope, or a linear
    /// assessment); `None` otherwise.
    pub preserves_base: Option<bool>,
}

impl Extendability {
    pub fn is_extendable(&self) -> bool {
        matches!(self.verdict, ExtensionVerdict::Extendable { .. })
    }
}

/// Extending an exchangeable count model from level `n` to level `n + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionProblem {
    base: CountModel,
    k: u32,
}

impl ExtensionProblem {
    pub fn new(base: CountModel, k: u32) -> Self {
        Self { base, k }
    }

    pub fn base(&self) -> &CountModel {
        &self.base
    }

    pub fn level(&self) -> u32 {
        self.base.domain().level()
    }

    pub fn target_level(&self) -> u32 {
        self.level() + self.k
    }

    pub fn target_domain(&self) -> CountDomain {
        self.base.domain().with_level(self.target_level())
    }

    fn rows(&self) -> Vec<Vec<(usize, Rational)>> {
        sampling_rows(self.base.domain(), self.target_level())
    }

    fn check_base(&self) -> Result<()> {
        if self.base.avoids_sure_loss()? {
            Ok(())
        } else {
            Err(Error::SureLoss)
        }
    }

    /// `max { Q(g) - max ḡ : g ∈ [0, 1]^{N_X^n} }`, with a maximizer. Positive
    /// exactly when no extension exists, since `Q` and the sampling map both
    /// commute with adding constants and positive scaling.
    fn separation(&self) -> Result<(Rational, Vec<Rational>)> {
        let d = self.base.domain().len();
        let (t, s, aux) = (d, d + 1, d + 2);
        let mut objective = vec![Rational::zero(); aux + self.base.auxiliary_count()];
        objective[t] = Rational::one();
        objective[s] = -Rational::one();
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        for j in 0..d {
            lp.set_bounds(j, Some(Rational::zero()), Some(Rational::one()));
        }
        lp.set_free(t).set_free(s);
        let identity: Vec<Vec<(usize, Rational)>> = (0..d).map(|i| vec![(i, Rational::one())]).collect();
        self.base.bound_lower(&mut lp, &identity, t, aux);
        let width = lp.num_vars();
        for row in self.rows() {
            // ḡ(µ) ≤ s
            let mut coefficients = vec![Rational::zero(); width];
            for (m, w) in row {
                coefficients[m] = w;
            }
            coefficients[s] = -Rational::one();
            lp.constrain(coefficients, Relation::Le, Rational::zero());
        }
        let solution = solve(&lp)?.optimal().expect("bounded separation program");
        Ok((solution.value, solution.x[..d].to_vec()))
    }

    /// Variables: `q'` on level `n + k`, then envelope weights. Rows: `q'`
    /// sums to one and its marginal lies in the base credal set.
    fn witness_program(&self, objective_on_q: Vec<Rational>, sense: Sense) -> LinearProgram {
        let big = self.target_domain().len();
        let rows = self.rows();
        let generators = match &self.base {
            Model::Envelope(c) => c.points().len(),
            Model::Assessed(_) => 0,
        };
        let mut objective = objective_on_q;
        objective.resize(big + generators, Rational::zero());
        let mut lp = LinearProgram::new(sense, objective);
        let mut total = vec![Rational::one(); big];
        total.resize(big + generators, Rational::zero());
        lp.constrain(total, Relation::Eq, Rational::one());
        match &self.base {
            Model::Assessed(a) => {
                for item in a.items() {
                    let extended = muhy_extend(&item.gamble, self.target_level()).expect("upward");
                    let mut row = extended.into_values();
                    row.resize(big + generators, Rational::zero());
                    lp.constrain(row, Relation::Ge, item.lower.clone());
                }
            }
            Model::Envelope(c) => {
                // marginal(q')(m) = Σ_i w_i p_i(m); Σ w_i = 1 is implied
                let small = self.base.domain().len();
                let mut coefficients = vec![vec![Rational::zero(); big + generators]; small];
                for (mu, row) in rows.iter().enumerate() {
                    for (m, w) in row {
                        coefficients[*m][mu] = w.clone();
                    }
                }
                for (i, p) in c.points().iter().enumerate() {
                    for (m, pm) in p.iter().enumerate() {
                        coefficients[m][big + i] = -pm;
                    }
                }
                for row in coefficients {
                    lp.constrain(row, Relation::Eq, Rational::zero());
                }
            }
        }
        lp
    }

    /// Decides whether some coherent exchangeable model on `n + k` variables
    /// dominates the base, i.e. whether `max ḡ ≥ Q(g)` for every level-`n`
    /// gamble `g`.
    pub fn extendable(&self) -> Result<Extendability> {
        self.check_base()?;
        let (gap, g) = self.separation()?;
        if gap > Rational::zero() {
            let gamble = CountGamble::from_values(self.base.domain().clone(), primitive_integer_ray(&g))?;
            let base_value = self.base.lower(&gamble)?;
            let extended_max = muhy_extend(&gamble, self.target_level())?.max();
            return Ok(Extendability {
                verdict: ExtensionVerdict::NotExtendable {
                    certificate: SeparatingGamble { gamble, base_value, extended_max },
                },
                preserves_base: Some(false),
            });
        }
        let big = self.target_domain().len();
        let lp = self.witness_program(vec![Rational::zero(); big], Sense::Maximize);
        let witness = match solve(&lp)? {
            LpOutcome::Optimal(s) => s.x[..big].to_vec(),
            _ => unreachable!("a non-positive separation gap implies a witness"),
        };
        Ok(Extendability {
            verdict: ExtensionVerdict::Extendable { witness },
            preserves_base: self.preserves_base()?,
        })
    }

    /// Whether every generating mass of the base is the marginal of some
    /// level-`(n+k)` mass.
    fn preserves_base(&self) -> Result<Option<bool>> {
        let points = match &self.base {
            Model::Envelope(c) => c.points().to_vec(),
            Model::Assessed(a) => match a.linear_mass()? {
                Some(p) => vec![p],
                None => return Ok(None),
            },
        };
        let big = self.target_domain().len();
        let rows = self.rows();
        for p in points {
            let mut lp = LinearProgram::feasibility(big);
            let mut coefficients = vec![vec![Rational::zero(); big]; p.len()];
            for (mu, row) in rows.iter().enumerate() {
                for (m, w) in row {
                    coefficients[*m][mu] = w.clone();
                }
            }
            for (row, pm) in coefficients.into_iter().zip(p) {
                lp.constrain(row, Relation::Eq, pm);
            }
            if solve(&lp)?.is_infeasible() {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    }

    /// Whether `q` is a mass on level `n + k` whose marginal lies in the base
    /// credal set.
    pub fn verify_witness(&self, q: &[Rational]) -> Result<bool> {
        let target = self.target_domain();
        if q.len() != target.len() {
            return Ok(false);
        }
        let marginal = count_marginal(&self.rows(), self.base.domain().len(), q);
        match crate::prevision::CredalSet::new(target, vec![q.to_vec()]) {
            Ok(_) => self.base.contains_mass(&marginal),
            Err(Error::InvalidMass(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn check_target(&self, h: &CountGamble) -> Result<()> {
        if *h.domain() != self.target_domain() {
            return Err(Error::DomainMismatch(format!(
                "gamble on {} for an extension to {}",
                h.domain().describe(),
                self.target_domain().describe()
            )));
        }
        Ok(())
    }

    /// `sup { Q(g) : ḡ ≤ h }`, the smallest coherent exchangeable extension at `h`.
    pub fn smallest_extension(&self, h: &CountGamble) -> Result<Rational> {
        Ok(self.smallest_extension_with_gamble(h)?.0)
    }

    /// The smallest extension at `h` with a maximizing level-`n` gamble `g`.
    pub fn smallest_extension_with_gamble(&self, h: &CountGamble) -> Result<(Rational, CountGamble)> {
        self.check_target(h)?;
        self.check_base()?;
        let d = self.base.domain().len();
        let (t, aux) = (d, d + 1);
        let mut objective = vec![Rational::zero(); aux + self.base.auxiliary_count()];
        objective[t] = Rational::one();
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        for j in 0..=d {
            lp.set_free(j);
        }
        let identity: Vec<Vec<(usize, Rational)>> = (0..d).map(|i| vec![(i, Rational::one())]).collect();
        self.base.bound_lower(&mut lp, &identity, t, aux);
        let width = lp.num_vars();
        for (row, hmu) in self.rows().into_iter().zip(h.values()) {
            let mut coefficients = vec![Rational::zero(); width];
            for (m, w) in row {
                coefficients[m] = w;
            }
            lp.constrain(coefficients, Relation::Le, hmu.clone());
        }
        match solve(&lp)? {
            LpOutcome::Optimal(s) => {
                let g = CountGamble::from_values(self.base.domain().clone(), s.x[..d].to_vec())?;
                Ok((s.value, g))
            }
            LpOutcome::Unbounded => Err(Error::NotExtendable(self.target_level())),
            LpOutcome::Infeasible(_) => unreachable!("a constant g = min h is feasible"),
        }
    }

    /// `min { q'·h }` over level-`(n+k)` masses whose marginal lies in the
    /// base credal set, with a minimizer.
    pub fn smallest_extension_dual(&self, h: &CountGamble) -> Result<(Rational, Vec<Rational>)> {
        self.check_target(h)?;
        self.check_base()?;
        let big = h.values().len();
        let lp = self.witness_program(h.values().to_vec(), Sense::Minimize);
        match solve(&lp)? {
            LpOutcome::Optimal(s) => Ok((s.value, s.x[..big].to_vec())),
            LpOutcome::Infeasible(_) => Err(Error::NotExtendable(self.target_level())),
            LpOutcome::Unbounded => unreachable!("masses are bounded"),
        }
    }

    /// The smallest extension as a count model at level `n + k`.
    pub fn extended_model(&self) -> Result<Extended<'_>> {
        if !self.extendable()?.is_extendable() {
            return Err(Error::NotExtendable(self.target_level()));
        }
        Ok(Extended { problem: self, domain: self.target_domain() })
    }
}

/// The smallest extension, viewed as a lower prevision at level `n + k`.
#[derive(Clone, Debug)]
pub struct Extended<'a> {
    problem: &'a ExtensionProblem,
    domain: CountDomain,
}

impl LowerPrevision<CountDomain> for Extended<'_> {
    fn domain(&self) -> &CountDomain {
        &self.domain
    }

    fn lower(&self, h: &CountGamble) -> Result<Rational> {
        self.problem.smallest_extension(h)
    }
}
