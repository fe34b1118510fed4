//! Lower previsions on a finite domain: finite assessments, avoiding sure
//! loss, coherence, natural extension, and lower envelopes of finitely many
//! mass functions.
//!
//! Natural extension is computed from the bounded dual side: the minimum of
//! the expectation of `f` over the mass functions that satisfy every assessed
//! lower price. The unbounded primal (a supremum over non-negative multipliers
//! of the assessed transactions) is available separately so that both sides
//! can be compared.
//!
//! On a finite domain every gamble is simple, so continuity with respect to
//! uniform convergence holds automatically and gets no dedicated check.

use crate::combinatorics::{CountDomain, Domain, GambleOn, TupleDomain};
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{primitive_integer_ray, Rational};
use num_traits::{One, Signed, Zero};

/// A gamble together with its assessed supremum buying price.
#[derive(Clone, Debug, PartialEq)]
pub struct AssessedGamble<D: Domain> {
    pub gamble: GambleOn<D>,
    pub lower: Rational,
}

/// A finite lower prevision assessment on a common domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Assessment<D: Domain> {
    domain: D,
    items: Vec<AssessedGamble<D>>,
}

/// Something that assigns lower previsions to every gamble on its domain.
pub trait LowerPrevision<D: Domain> {
    fn domain(&self) -> &D;

    fn lower(&self, f: &GambleOn<D>) -> Result<Rational>;

    /// The conjugate upper prevision `-lower(-f)`.
    fn upper(&self, f: &GambleOn<D>) -> Result<Rational> {
        Ok(-self.lower(&-f)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SureLossVerdict {
    /// Some mass function dominates every assessed price.
    Avoids { dominating_mass: Vec<Rational> },
    /// Non-negative multipliers, one per item, with
    /// `sup_x Σ λ_k [f_k(x) - P(f_k)] < 0`, scaled to a primitive integer vector.
    SureLoss { multipliers: Vec<Rational> },
}

impl SureLossVerdict {
    pub fn avoids(&self) -> bool {
        matches!(self, Self::Avoids { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coherence {
    Coherent,
    SureLoss { multipliers: Vec<Rational> },
    /// The first item whose price natural extension raises.
    PriceRaised { index: usize, assessed: Rational, natural_extension: Rational },
}

impl Coherence {
    pub fn is_coherent(&self) -> bool {
        matches!(self, Self::Coherent)
    }
}

impl<D: Domain> Assessment<D> {
    /// The empty (vacuous) assessment.
    pub fn new(domain: D) -> Self {
        Self { domain, items: Vec::new() }
    }

    pub fn push(&mut self, gamble: GambleOn<D>, lower: Rational) -> Result<&mut Self> {
        if *gamble.domain() != self.domain {
            return Err(Error::DomainMismatch(format!(
                "gamble on {} added to an assessment on {}",
                gamble.domain().describe(),
                self.domain.describe()
            )));
        }
        self.items.push(AssessedGamble { gamble, lower });
        Ok(self)
    }

    pub fn with(mut self, gamble: GambleOn<D>, lower: Rational) -> Result<Self> {
        self.push(gamble, lower)?;
        Ok(self)
    }

    /// The assessment `{(I_x, mass(x))}` whose natural extension is the
    /// expectation under `mass`.
    pub fn precise(domain: D, mass: &[Rational]) -> Result<Self> {
        check_mass(&domain, mass)?;
        let mut a = Self::new(domain.clone());
        for (i, p) in mass.iter().enumerate() {
            a.push(GambleOn::unit(domain.clone(), i), p.clone())?;
        }
        Ok(a)
    }

    pub fn items(&self) -> &[AssessedGamble<D>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Rows `Σ_x p(x) f_k(x) ≥ P(f_k)` and `Σ_x p(x) = 1` over the mass `p`.
    fn dominating_mass_program(&self, objective: Vec<Rational>, sense: Sense) -> LinearProgram {
        let n = self.domain.len();
        let mut lp = LinearProgram::new(sense, objective);
        lp.constrain(vec![Rational::one(); n], Relation::Eq, Rational::one());
        for item in &self.items {
            lp.constrain(item.gamble.values().to_vec(), Relation::Ge, item.lower.clone());
        }
        lp
    }

    /// Non-negative multipliers with `Σ λ_k [f_k(x) - P(f_k)] ≤ -1` for all
    /// `x`, of minimal total weight, when such exist.
    fn sure_loss_multipliers(&self) -> Result<Option<Vec<Rational>>> {
        let k = self.items.len();
        let mut lp = LinearProgram::new(Sense::Minimize, vec![Rational::one(); k]);
        for x in 0..self.domain.len() {
            let row = self
                .items
                .iter()
                .map(|item| &item.gamble.values()[x] - &item.lower)
                .collect();
            lp.constrain(row, Relation::Le, -Rational::one());
        }
        Ok(solve(&lp)?.optimal().map(|s| primitive_integer_ray(&s.x)))
    }

    pub fn avoids_sure_loss(&self) -> Result<SureLossVerdict> {
        let lp = self.dominating_mass_program(vec![Rational::zero(); self.domain.len()], Sense::Maximize);
        match solve(&lp)? {
            LpOutcome::Optimal(s) => Ok(SureLossVerdict::Avoids { dominating_mass: s.x }),
            LpOutcome::Infeasible(_) => {
                let multipliers = self
                    .sure_loss_multipliers()?
                    .expect("infeasible dominating-mass system implies a sure-loss combination");
                Ok(SureLossVerdict::SureLoss { multipliers })
            }
            LpOutcome::Unbounded => unreachable!("zero objective"),
        }
    }

    /// Natural extension `E(f)`, as the minimum expectation over dominating masses.
    pub fn natural_extension(&self, f: &GambleOn<D>) -> Result<Rational> {
        Ok(self.natural_extension_with_mass(f)?.0)
    }

    /// Natural extension together with a minimizing mass function.
    pub fn natural_extension_with_mass(&self, f: &GambleOn<D>) -> Result<(Rational, Vec<Rational>)> {
        self.check(f)?;
        let lp = self.dominating_mass_program(f.values().to_vec(), Sense::Minimize);
        match solve(&lp)? {
            LpOutcome::Optimal(s) => Ok((s.value, s.x)),
            LpOutcome::Infeasible(_) => Err(Error::SureLoss),
            LpOutcome::Unbounded => unreachable!("the mass simplex is bounded"),
        }
    }

    /// Natural extension from the primal side:
    /// `sup { α : f(x) - Σ λ_k [f_k(x) - P(f_k)] ≥ α for all x, λ ≥ 0 }`.
    pub fn natural_extension_primal(&self, f: &GambleOn<D>) -> Result<Rational> {
        self.check(f)?;
        let k = self.items.len();
        // variables: λ_1..λ_k, α
        let mut objective = vec![Rational::zero(); k + 1];
        objective[k] = Rational::one();
        let mut lp = LinearProgram::new(Sense::Maximize, objective);
        lp.set_free(k);
        for x in 0..self.domain.len() {
            let mut row: Vec<Rational> = self
                .items
                .iter()
                .map(|item| &item.gamble.values()[x] - &item.lower)
                .collect();
            row.push(Rational::one());
            lp.constrain(row, Relation::Le, f.values()[x].clone());
        }
        match solve(&lp)? {
            LpOutcome::Optimal(s) => Ok(s.value),
            LpOutcome::Unbounded => Err(Error::SureLoss),
            LpOutcome::Infeasible(_) => unreachable!("λ = 0 with α = min f is feasible"),
        }
    }

    pub fn upper_natural_extension(&self, f: &GambleOn<D>) -> Result<Rational> {
        Ok(-self.natural_extension(&-f)?)
    }

    /// Coherence: avoids sure loss, and natural extension reproduces every
    /// assessed price.
    pub fn coherence(&self) -> Result<Coherence> {
        if let SureLossVerdict::SureLoss { multipliers } = self.avoids_sure_loss()? {
            return Ok(Coherence::SureLoss { multipliers });
        }
        for (index, item) in self.items.iter().enumerate() {
            let e = self.natural_extension(&item.gamble)?;
            if e != item.lower {
                return Ok(Coherence::PriceRaised {
                    index,
                    assessed: item.lower.clone(),
                    natural_extension: e,
                });
            }
        }
        Ok(Coherence::Coherent)
    }

    pub fn is_coherent(&self) -> Result<bool> {
        Ok(self.coherence()?.is_coherent())
    }

    /// The unique dominating mass function, when natural extension is a
    /// linear prevision; `None` otherwise.
    pub fn linear_mass(&self) -> Result<Option<Vec<Rational>>> {
        let n = self.domain.len();
        let mut mass = Vec::with_capacity(n);
        for x in 0..n {
            let indicator = GambleOn::unit(self.domain.clone(), x);
            let lower = self.natural_extension(&indicator)?;
            let upper = self.upper_natural_extension(&indicator)?;
            if lower != upper {
                return Ok(None);
            }
            mass.push(lower);
        }
        Ok(Some(mass))
    }

    /// Whether natural extension is self-conjugate, checked on the indicator basis.
    pub fn is_linear(&self) -> Result<bool> {
        Ok(self.linear_mass()?.is_some())
    }

    fn check(&self, f: &GambleOn<D>) -> Result<()> {
        if *f.domain() != self.domain {
            return Err(Error::DomainMismatch(format!(
                "gamble on {} evaluated under an assessment on {}",
                f.domain().describe(),
                self.domain.describe()
            )));
        }
        Ok(())
    }
}

impl<D: Domain> LowerPrevision<D> for Assessment<D> {
    fn domain(&self) -> &D {
        &self.domain
    }

    fn lower(&self, f: &GambleOn<D>) -> Result<Rational> {
        self.natural_extension(f)
    }
}

fn check_mass<D: Domain>(domain: &D, mass: &[Rational]) -> Result<()> {
    if mass.len() != domain.len() {
        return Err(Error::InvalidMass(format!(
            "{} masses for a domain of size {}",
            mass.len(),
            domain.len()
        )));
    }
    if mass.iter().any(|p| p.is_negative()) {
        return Err(Error::InvalidMass("negative mass".into()));
    }
    if mass.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::InvalidMass("masses do not sum to one".into()));
    }
    Ok(())
}

/// A finitely generated credal set, given by its (candidate) extreme points.
#[derive(Clone, Debug, PartialEq)]
pub struct CredalSet<D: Domain> {
    domain: D,
    points: Vec<Vec<Rational>>,
}

impl<D: Domain> CredalSet<D> {
    pub fn new(domain: D, points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for p in &points {
            check_mass(&domain, p)?;
        }
        Ok(Self { domain, points })
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// `min_p Σ_x p(x) f(x)`.
    pub fn envelope_value(&self, f: &GambleOn<D>) -> Result<Rational> {
        if *f.domain() != self.domain {
            return Err(Error::DomainMismatch(format!(
                "gamble on {} evaluated under a credal set on {}",
                f.domain().describe(),
                self.domain.describe()
            )));
        }
        Ok(self
            .points
            .iter()
            .map(|p| f.expectation(p))
            .min()
            .expect("non-empty credal set"))
    }

    /// The common mass function when all generating points coincide.
    pub fn linear_mass(&self) -> Option<&[Rational]> {
        let first = &self.points[0];
        self.points.iter().all(|p| p == first).then_some(first.as_slice())
    }
}

impl<D: Domain> LowerPrevision<D> for CredalSet<D> {
    fn domain(&self) -> &D {
        &self.domain
    }

    fn lower(&self, f: &GambleOn<D>) -> Result<Rational> {
        self.envelope_value(f)
    }
}

/// Either representation of a coherent lower prevision on a finite domain.
#[derive(Clone, Debug, PartialEq)]
pub enum Model<D: Domain> {
    /// Natural extension of a finite assessment.
    Assessed(Assessment<D>),
    /// Lower envelope of finitely many mass functions.
    Envelope(CredalSet<D>),
}

impl<D: Domain> Model<D> {
    pub fn vacuous(domain: D) -> Self {
        Self::Assessed(Assessment::new(domain))
    }

    pub fn precise(domain: D, mass: Vec<Rational>) -> Result<Self> {
        Ok(Self::Envelope(CredalSet::new(domain, vec![mass])?))
    }

    /// The mass function of a linear model, `None` when the model is imprecise.
    pub fn linear_mass(&self) -> Result<Option<Vec<Rational>>> {
        match self {
            Self::Assessed(a) => a.linear_mass(),
            Self::Envelope(c) => Ok(c.linear_mass().map(<[Rational]>::to_vec)),
        }
    }

    pub fn avoids_sure_loss(&self) -> Result<bool> {
        match self {
            Self::Assessed(a) => Ok(a.avoids_sure_loss()?.avoids()),
            Self::Envelope(_) => Ok(true),
        }
    }

    /// Whether `mass` lies in the credal set of the model.
    pub fn contains_mass(&self, mass: &[Rational]) -> Result<bool> {
        check_mass(self.domain(), mass)?;
        match self {
            Self::Assessed(a) => Ok(a
                .items
                .iter()
                .all(|item| item.gamble.expectation(mass) >= item.lower)),
            Self::Envelope(c) => {
                // Σ_i w_i p_i = mass, w ≥ 0; Σ w_i = 1 is implied
                let mut lp = LinearProgram::feasibility(c.points.len());
                for x in 0..mass.len() {
                    let row = c.points.iter().map(|p| p[x].clone()).collect();
                    lp.constrain(row, Relation::Eq, mass[x].clone());
                }
                Ok(!solve(&lp)?.is_infeasible())
            }
        }
    }
}

impl<D: Domain> Model<D> {
    /// Number of auxiliary variables used by [`Model::bound_lower`].
    pub(crate) fn auxiliary_count(&self) -> usize {
        match self {
            Self::Assessed(a) => a.len(),
            Self::Envelope(_) => 0,
        }
    }

    /// Adds rows to `lp` forcing `x[t] ≤ lower(g)`, where `g` is the gamble
    /// whose value at the `i`-th domain point is the sparse linear form
    /// `expr[i]` over `lp`'s variables. The auxiliary variables
    /// `aux..aux + auxiliary_count()` must be non-negative and otherwise unused.
    /// The rows are exact for a model that avoids sure loss.
    pub(crate) fn bound_lower(
        &self,
        lp: &mut LinearProgram,
        expr: &[Vec<(usize, Rational)>],
        t: usize,
        aux: usize,
    ) {
        let width = lp.num_vars();
        match self {
            Self::Assessed(a) => {
                // g(x) - Σ λ_k [f_k(x) - P(f_k)] ≥ t
                for (x, form) in expr.iter().enumerate() {
                    let mut row = vec![Rational::zero(); width];
                    row[t] += Rational::one();
                    for (k, item) in a.items.iter().enumerate() {
                        row[aux + k] += &item.gamble.values()[x] - &item.lower;
                    }
                    for (var, c) in form {
                        row[*var] -= c;
                    }
                    lp.constrain(row, Relation::Le, Rational::zero());
                }
            }
            Self::Envelope(c) => {
                for p in &c.points {
                    let mut row = vec![Rational::zero(); width];
                    row[t] += Rational::one();
                    for (form, px) in expr.iter().zip(p) {
                        for (var, coef) in form {
                            row[*var] -= coef * px;
                        }
                    }
                    lp.constrain(row, Relation::Le, Rational::zero());
                }
            }
        }
    }
}

impl<D: Domain> LowerPrevision<D> for Model<D> {
    fn domain(&self) -> &D {
        match self {
            Self::Assessed(a) => a.domain(),
            Self::Envelope(c) => c.domain(),
        }
    }

    fn lower(&self, f: &GambleOn<D>) -> Result<Rational> {
        match self {
            Self::Assessed(a) => a.natural_extension(f),
            Self::Envelope(c) => c.envelope_value(f),
        }
    }
}

pub type TupleAssessment = Assessment<TupleDomain>;
pub type CountAssessment = Assessment<CountDomain>;
pub type CountCredalSet = CredalSet<CountDomain>;
pub type CountModel = Model<CountDomain>;

/// `inf f`, the vacuous lower prevision.
pub fn vacuous_lower<D: Domain>(f: &GambleOn<D>) -> Rational {
    f.min()
}
