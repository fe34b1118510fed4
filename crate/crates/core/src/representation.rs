//! Exchangeable sequences through their count models: multinomial
//! previsions, the representing lower prevision on simplex polynomials,
//! frequency and sample-mean distributions, and the mean-square bound on
//! sample means.
//!
//! The representing prevision is only ever evaluated on polynomials, where it
//! is determined by any level at least the polynomial's degree.

use crate::bernstein::{BernsteinPoly, Polynomial, SimplexPoint};
use crate::combinatorics::{
    draw_weight, CountDomain, CountGamble, Domain, Gamble, Space, TupleDomain,
};
use crate::error::{Error, Result};
use crate::exchangeability::{check_time_consistency, CountFamily};
use crate::prevision::{CountModel, CredalSet, LowerPrevision, Model};
use crate::rational::{int, Rational};
use num_traits::{One, Signed, Zero};

fn check_space(theta: &SimplexPoint, space: &Space) -> Result<()> {
    if theta.space() != space {
        return Err(Error::DomainMismatch(format!(
            "point over {:?} for a model over {:?}",
            theta.space().labels(),
            space.labels()
        )));
    }
    Ok(())
}

/// The count multinomial mass `m ↦ B_m(θ)` on `N_X^n`.
pub fn comn_mass(domain: &CountDomain, theta: &SimplexPoint) -> Result<Vec<Rational>> {
    check_space(theta, domain.space())?;
    Ok(domain
        .vectors()
        .iter()
        .map(|m| crate::bernstein::basis_eval(m, theta))
        .collect())
}

/// `CoMn(g|θ) = Σ_m g(m) B_m(θ)`.
pub fn comn(g: &CountGamble, theta: &SimplexPoint) -> Result<Rational> {
    BernsteinPoly::new(g.clone()).eval(theta)
}

/// The multinomial mass `z ↦ Π_x θ_x^{T_x(z)}` on `X^N`.
pub fn mn_mass(domain: &TupleDomain, theta: &SimplexPoint) -> Result<Vec<Rational>> {
    check_space(theta, domain.space())?;
    Ok(domain
        .tuples()
        .map(|z| z.iter().map(|&x| theta.theta()[x].clone()).product())
        .collect())
}

/// `Mn(f|θ) = Σ_z f(z) Π_x θ_x^{T_x(z)}`.
pub fn mn(f: &Gamble, theta: &SimplexPoint) -> Result<Rational> {
    Ok(f.expectation(&mn_mass(f.domain(), theta)?))
}

/// How a representing lower prevision on polynomials is given.
#[derive(Clone, Debug, PartialEq)]
pub enum RepresentingPrevision {
    /// `p ↦ Σ_i w_i p(θ_i)`.
    PreciseMixture { weights: Vec<Rational>, points: Vec<SimplexPoint> },
    /// `p ↦ min_i p(θ_i)`.
    VacuousMixture { points: Vec<SimplexPoint> },
    /// `p ↦ Q^n(b_p^n)` for a time-consistent family of count models.
    Family(CountFamily),
}

impl RepresentingPrevision {
    pub fn precise(theta: SimplexPoint) -> Self {
        Self::PreciseMixture { weights: vec![Rational::one()], points: vec![theta] }
    }

    pub fn precise_mixture(weights: Vec<Rational>, points: Vec<SimplexPoint>) -> Result<Self> {
        check_points(&points)?;
        if weights.len() != points.len() {
            return Err(Error::InvalidMass(format!("{} weights for {} points", weights.len(), points.len())));
        }
        if weights.iter().any(|w| w.is_negative()) || weights.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidMass("mixture weights must be non-negative and sum to one".into()));
        }
        Ok(Self::PreciseMixture { weights, points })
    }

    pub fn vacuous_mixture(points: Vec<SimplexPoint>) -> Result<Self> {
        check_points(&points)?;
        Ok(Self::VacuousMixture { points })
    }

    /// Accepts a family only when every pair of consecutive levels passes
    /// [`check_time_consistency`]; consecutive levels suffice because
    /// sampling maps compose.
    pub fn from_family(family: CountFamily) -> Result<Self> {
        for n in family.min_level()..family.max_level() {
            if !check_time_consistency(&family, n, 1)?.consistent {
                return Err(Error::NotTimeConsistent { level: n, next: n + 1 });
            }
        }
        Ok(Self::Family(family))
    }

    pub fn space(&self) -> &Space {
        match self {
            Self::PreciseMixture { points, .. } | Self::VacuousMixture { points } => points[0].space(),
            Self::Family(f) => f.space(),
        }
    }

    /// Highest available level, `None` when every level is available.
    pub fn max_level(&self) -> Option<u32> {
        match self {
            Self::Family(f) => Some(f.max_level()),
            _ => None,
        }
    }

    /// The count model at level `n`.
    pub fn level(&self, n: u32) -> Result<CountModel> {
        let domain = CountDomain::new(self.space().clone(), n);
        match self {
            Self::PreciseMixture { weights, points } => {
                let mut mass = vec![Rational::zero(); domain.len()];
                for (w, theta) in weights.iter().zip(points) {
                    for (acc, b) in mass.iter_mut().zip(comn_mass(&domain, theta)?) {
                        *acc += w * b;
                    }
                }
                Model::precise(domain, mass)
            }
            Self::VacuousMixture { points } => Ok(Model::Envelope(CredalSet::new(
                domain.clone(),
                points.iter().map(|t| comn_mass(&domain, t)).collect::<Result<_>>()?,
            )?)),
            Self::Family(f) => f.level(n).cloned(),
        }
    }

    /// The count models at levels `1..=n_max`.
    pub fn family(&self, n_max: u32) -> Result<CountFamily> {
        match self {
            Self::Family(f) if f.min_level() == 1 && f.max_level() == n_max => Ok(f.clone()),
            _ => CountFamily::new(
                self.space().clone(),
                (1..=n_max).map(|n| self.level(n)).collect::<Result<_>>()?,
            ),
        }
    }

    /// The level used to evaluate a polynomial of degree `degree`.
    fn level_for(&self, degree: u32) -> Result<u32> {
        match self {
            Self::Family(f) => {
                if degree > f.max_level() {
                    Err(Error::DegreeUnavailable { degree, available: f.max_level() })
                } else {
                    Ok(degree.max(f.min_level()))
                }
            }
            _ => Ok(degree.max(1)),
        }
    }

    /// `Q^n(b_p^n)` at the lowest available level `n ≥ deg p`.
    pub fn value(&self, p: &BernsteinPoly) -> Result<Rational> {
        self.value_at(p, self.level_for(p.degree())?)
    }

    /// `Q^n(b_p^n)` at the given level `n ≥ deg p`.
    pub fn value_at(&self, p: &BernsteinPoly, n: u32) -> Result<Rational> {
        if p.space() != self.space() {
            return Err(Error::DomainMismatch("polynomial and representing prevision spaces differ".into()));
        }
        if n < p.degree() {
            return Err(Error::DegreeTooLow { degree: p.degree(), target: n });
        }
        if let Some(available) = self.max_level() {
            if n > available {
                return Err(Error::DegreeUnavailable { degree: n, available });
            }
        }
        let model = self.level(n)?;
        model.lower(p.elevate(n - p.degree()).coefficients())
    }

    pub fn value_of_polynomial(&self, p: &Polynomial) -> Result<Rational> {
        let n = self.level_for(p.degree())?;
        self.value_at(&p.to_bernstein(n)?, n)
    }

    /// The conjugate `-value(-p)`.
    pub fn upper_value_of_polynomial(&self, p: &Polynomial) -> Result<Rational> {
        let negated = Polynomial::new(p.space().clone(), p.terms().iter().map(|(e, c)| (e.clone(), -c)))?;
        Ok(-self.value_of_polynomial(&negated)?)
    }
}

fn check_points(points: &[SimplexPoint]) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(Error::EmptySet);
    };
    if points.iter().any(|p| p.space() != first.space()) {
        return Err(Error::DomainMismatch("mixture points over different spaces".into()));
    }
    Ok(())
}

/// `Q^n(h(·/n))`, the lower prevision of `h` under the distribution of the
/// level-`n` frequency vector.
pub fn frequency_distribution_value(
    model: &CountModel,
    h: impl Fn(&SimplexPoint) -> Rational,
) -> Result<Rational> {
    let domain = model.domain().clone();
    let space = domain.space().clone();
    model.lower(&CountGamble::from_fn(domain, |m| h(&SimplexPoint::frequency(space.clone(), m))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyConvergence {
    /// `(n, P_{F_n}(h))` for each requested level.
    pub values: Vec<(u32, Rational)>,
    /// The representing value `S(h)`, when the polynomial's degree is available.
    pub limit: Option<Rational>,
}

impl FrequencyConvergence {
    /// `|P_{F_n}(h) - S(h)|` per level.
    pub fn gaps(&self) -> Option<Vec<(u32, Rational)>> {
        let limit = self.limit.as_ref()?;
        Some(self.values.iter().map(|(n, v)| (*n, (v - limit).abs())).collect())
    }
}

/// The lower previsions of the polynomial `h` under the frequency
/// distributions at `levels`, with the representing value of `h`.
pub fn frequency_convergence_report(
    r: &RepresentingPrevision,
    h: &Polynomial,
    levels: impl IntoIterator<Item = u32>,
) -> Result<FrequencyConvergence> {
    let values = levels
        .into_iter()
        .map(|n| {
            if n == 0 {
                return Err(Error::InvalidArgument("frequency levels start at 1".into()));
            }
            Ok((n, frequency_distribution_value(&r.level(n)?, |t| h.eval(t))?))
        })
        .collect::<Result<_>>()?;
    let limit = match r.value_of_polynomial(h) {
        Ok(v) => Some(v),
        Err(Error::DegreeUnavailable { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FrequencyConvergence { values, limit })
}

/// `S_X(f|θ) = Σ_x f(x) θ_x` for a gamble on a single variable.
pub fn sample_mean(f: &Gamble, theta: &[Rational]) -> Rational {
    f.values().iter().zip(theta).map(|(v, t)| v * t).sum()
}

fn check_single_variable(f: &Gamble, space: &Space) -> Result<()> {
    if f.arity() != 1 || f.domain().space() != space {
        return Err(Error::DomainMismatch(format!(
            "expected a gamble on one variable over {:?}, got {}",
            space.labels(),
            f.domain().describe()
        )));
    }
    Ok(())
}

/// `Q^n(m ↦ h(S_X(f|m/n)))`, the lower prevision of `h` of the sample mean
/// of `f` over `n` observations.
pub fn sample_mean_distribution(
    model: &CountModel,
    f: &Gamble,
    h: impl Fn(&Rational) -> Rational,
) -> Result<Rational> {
    check_single_variable(f, model.domain().space())?;
    frequency_distribution_value(model, |t| h(&sample_mean(f, t.theta())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanSquareBound {
    /// Upper prevision of `[S_{n+p}(f) - S_n(f)]²`.
    pub value: Rational,
    /// `2p / (n(n+p)) · max f²`.
    pub bound: Rational,
}

impl MeanSquareBound {
    pub fn holds(&self) -> bool {
        self.value <= self.bound
    }
}

/// Compares the upper prevision of the squared difference between the
/// sample means of `f` over the first `n` and over all `n + p` observations
/// with `2p / (n(n+p)) · max f²`. `model` is the count model at level `n + p`.
pub fn mean_square_bound_check(model: &CountModel, f: &Gamble, n: u32, p: u32) -> Result<MeanSquareBound> {
    let domain = model.domain().clone();
    check_single_variable(f, domain.space())?;
    if n == 0 {
        return Err(Error::InvalidArgument("the shorter sample needs at least one observation".into()));
    }
    if domain.level() != n + p {
        return Err(Error::LevelUnavailable(n + p));
    }
    let small = domain.with_level(n).vectors();
    // G(µ) = Σ_{m ≤ µ} w(m, µ) [S(µ/(n+p)) - S(m/n)]²
    let g = CountGamble::from_fn(domain, |mu| {
        let whole = sample_mean(f, &mu.frequencies());
        small
            .iter()
            .filter(|m| m.fits_in(mu))
            .map(|m| {
                let d = &whole - sample_mean(f, &m.frequencies());
                draw_weight(m, mu) * &d * &d
            })
            .sum()
    });
    let value = model.upper(&g)?;
    let sup_square = f.values().iter().map(|v| v * v).max().expect("non-empty space");
    let bound = int(2 * p as i64) / int(n as i64 * (n + p) as i64) * sup_square;
    Ok(MeanSquareBound { value, bound })
}

/// Lower moments `S(θ_1^j)`, `j = 0..=n_max`, of a representing prevision on a
/// two-label space, `θ_1` being the second label's component.
pub fn binary_moments(r: &RepresentingPrevision, n_max: u32) -> Result<Vec<Rational>> {
    let space = r.space().clone();
    if space.len() != 2 {
        return Err(Error::InvalidSpace(format!("moments need two labels, got {}", space.len())));
    }
    (0..=n_max)
        .map(|j| {
            let p = Polynomial::new(space.clone(), [(vec![0, j], Rational::one())])?;
            r.value_of_polynomial(&p)
        })
        .collect()
}
