//! Polynomials on the simplex `Σ_X` in Bernstein form: basis evaluation,
//! conversion from monomial form, degree elevation, and range enclosure.
//!
//! A polynomial of degree `n` is stored by its Bernstein coefficients, a
//! count gamble on `N_X^n`. Monomial form is an input format only.

use crate::combinatorics::{
    count_space_size, count_vectors, multinomial, muhy_extend, CountDomain, CountGamble,
    CountVector, Domain, Space,
};
use crate::error::{Error, Result};
use crate::rational::{from_biguint, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// A point `θ` of the simplex `Σ_X`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexPoint {
    space: Space,
    theta: Vec<Rational>,
}

impl SimplexPoint {
    pub fn new(space: Space, theta: Vec<Rational>) -> Result<Self> {
        if theta.len() != space.len() {
            return Err(Error::InvalidSimplexPoint(format!(
                "{} components for {} labels",
                theta.len(),
                space.len()
            )));
        }
        if theta.iter().any(|t| t.is_negative()) {
            return Err(Error::InvalidSimplexPoint("negative component".into()));
        }
        if theta.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidSimplexPoint("components do not sum to one".into()));
        }
        Ok(Self { space, theta })
    }

    /// From `(label, value)` pairs; omitted labels get 0.
    pub fn from_labels<S: AsRef<str>>(space: Space, pairs: &[(S, Rational)]) -> Result<Self> {
        let mut theta = vec![Rational::zero(); space.len()];
        for (label, value) in pairs {
            theta[space.index_of(label.as_ref())?] = value.clone();
        }
        Self::new(space, theta)
    }

    pub fn vertex(space: Space, label: usize) -> Self {
        let mut theta = vec![Rational::zero(); space.len()];
        theta[label] = Rational::one();
        Self { space, theta }
    }

    /// The frequency vector `m / |m|`.
    pub fn frequency(space: Space, m: &CountVector) -> Self {
        let theta = m.frequencies();
        Self { space, theta }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    /// `θ_x^e` for `e = 0..=degree`, per label.
    fn powers(&self, degree: u32) -> Vec<Vec<Rational>> {
        self.theta
            .iter()
            .map(|t| {
                let mut row = Vec::with_capacity(degree as usize + 1);
                row.push(Rational::one());
                for e in 1..=degree as usize {
                    let next = &row[e - 1] * t;
                    row.push(next);
                }
                row
            })
            .collect()
    }
}

/// `Π_x θ_x^{m_x}`, with `0^0 = 1`.
fn monomial_value(powers: &[Vec<Rational>], exponents: &[u32]) -> Rational {
    exponents
        .iter()
        .zip(powers)
        .map(|(&e, row)| row[e as usize].clone())
        .product()
}

/// `B_m(θ) = ν(m) Π_x θ_x^{m_x}`.
pub fn basis_eval(m: &CountVector, theta: &SimplexPoint) -> Rational {
    let powers = theta.powers(m.total());
    from_biguint(&m.atom_size()) * monomial_value(&powers, m.counts())
}

/// A polynomial in monomial form: exponent vectors (in label order) to coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    space: Space,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    /// Zero coefficients are dropped.
    pub fn new(space: Space, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (exponents, c) in terms {
            if exponents.len() != space.len() {
                return Err(Error::InvalidArgument(format!(
                    "exponent vector {exponents:?} for {} labels",
                    space.len()
                )));
            }
            *map.entry(exponents).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { space, terms: map })
    }

    pub fn constant(space: Space, c: Rational) -> Self {
        let zero = vec![0; space.len()];
        Self::new(space, [(zero, c)]).expect("matching length")
    }

    /// `θ_x`.
    pub fn coordinate(space: Space, label: usize) -> Self {
        let mut e = vec![0; space.len()];
        e[label] = 1;
        Self::new(space, [(e, Rational::one())]).expect("matching length")
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    /// Largest total degree of a term; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, theta: &SimplexPoint) -> Rational {
        let powers = theta.powers(self.degree());
        self.terms
            .iter()
            .map(|(e, c)| c * monomial_value(&powers, e))
            .sum()
    }

    /// The Bernstein form of degree `n`.
    pub fn to_bernstein(&self, n: u32) -> Result<BernsteinPoly> {
        BernsteinPoly::decompose(self, n)
    }
}

/// A polynomial on `Σ_X` given by its Bernstein coefficients at a fixed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinPoly {
    coefficients: CountGamble,
}

impl BernsteinPoly {
    pub fn new(coefficients: CountGamble) -> Self {
        Self { coefficients }
    }

    pub fn constant(space: Space, degree: u32, c: Rational) -> Self {
        Self::new(CountGamble::constant(CountDomain::new(space, degree), c))
    }

    pub fn degree(&self) -> u32 {
        self.coefficients.level()
    }

    pub fn space(&self) -> &Space {
        self.coefficients.domain().space()
    }

    pub fn coefficients(&self) -> &CountGamble {
        &self.coefficients
    }

    pub fn check_point(&self, theta: &SimplexPoint) -> Result<()> {
        if theta.space() != self.space() {
            return Err(Error::DomainMismatch(format!(
                "point over {:?} for a polynomial over {:?}",
                theta.space().labels(),
                self.space().labels()
            )));
        }
        Ok(())
    }

    /// `Σ_m b(m) B_m(θ)`.
    pub fn eval(&self, theta: &SimplexPoint) -> Result<Rational> {
        self.check_point(theta)?;
        let powers = theta.powers(self.degree());
        let domain = self.coefficients.domain();
        Ok(domain
            .vectors()
            .iter()
            .zip(self.coefficients.values())
            .filter(|(_, b)| !b.is_zero())
            .map(|(m, b)| b * from_biguint(&m.atom_size()) * monomial_value(&powers, m.counts()))
            .sum())
    }

    /// The same polynomial at degree `n + k`, by Zhou's formula
    /// `b^{n+k}(µ) = Σ_m ν(m)ν(µ-m)/ν(µ) b^n(m)`.
    pub fn elevate(&self, k: u32) -> Self {
        Self::new(muhy_extend(&self.coefficients, self.degree() + k).expect("upward extension"))
    }

    /// The unique Bernstein coefficients of degree `n`, found by multiplying
    /// each term of degree `d` by `(Σ_x θ_x)^{n-d}` and collecting.
    pub fn decompose(p: &Polynomial, n: u32) -> Result<Self> {
        let degree = p.degree();
        if n < degree {
            return Err(Error::DegreeTooLow { degree, target: n });
        }
        let domain = CountDomain::new(p.space().clone(), n);
        let values = domain
            .vectors()
            .iter()
            .map(|m| {
                let coefficient: Rational = p
                    .terms()
                    .iter()
                    .filter_map(|(a, c)| {
                        let rest = m.checked_sub(&CountVector::new(a.clone()))?;
                        Some(c * from_biguint(&multinomial(rest.counts())))
                    })
                    .sum();
                coefficient / from_biguint(&m.atom_size())
            })
            .collect();
        Ok(Self::new(CountGamble::from_values(domain, values)?))
    }

    /// `[min b, max b]`, which contains the range of the polynomial on `Σ_X`.
    pub fn enclosure(&self) -> (Rational, Rational) {
        (self.coefficients.min(), self.coefficients.max())
    }
}

/// `b(m) = h(m/n)`: the approximating Bernstein polynomial of degree `n`.
pub fn bernstein_approximant(space: &Space, n: u32, h: impl Fn(&SimplexPoint) -> Rational) -> BernsteinPoly {
    let domain = CountDomain::new(space.clone(), n);
    BernsteinPoly::new(CountGamble::from_fn(domain, |m| h(&SimplexPoint::frequency(space.clone(), m))))
}

/// Values of `p` on the grid `{µ/g : µ ∈ N_X^g}`.
pub fn grid_values(p: &BernsteinPoly, g: u32) -> Vec<Rational> {
    count_vectors(p.space().len(), g)
        .iter()
        .map(|mu| p.eval(&SimplexPoint::frequency(p.space().clone(), mu)).expect("same space"))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnclosureStep {
    pub degree: u32,
    pub lower: Rational,
    pub upper: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnclosureReport {
    pub steps: Vec<EnclosureStep>,
    /// Resolution `g` of the grid `{µ/g}`.
    pub grid: u32,
    pub grid_min: Rational,
    pub grid_max: Rational,
}

impl EnclosureReport {
    /// Every interval contains the next one.
    pub fn nested(&self) -> bool {
        self.steps
            .windows(2)
            .all(|w| w[0].lower <= w[1].lower && w[1].upper <= w[0].upper)
    }

    /// `max b - max_grid p` at the last degree; an upper bound on the
    /// distance from the enclosure to the true maximum.
    pub fn upper_gap(&self) -> Rational {
        &self.steps.last().expect("non-empty report").upper - &self.grid_max
    }

    /// `min_grid p - min b` at the last degree.
    pub fn lower_gap(&self) -> Rational {
        &self.grid_min - &self.steps.last().expect("non-empty report").lower
    }

    pub fn within(&self, tolerance: &Rational) -> bool {
        self.upper_gap() <= *tolerance && self.lower_gap() <= *tolerance
    }
}

/// Enclosures of `p` at the given degrees (each at least `p`'s degree, in
/// increasing order), with a grid evaluation of `p` for comparison.
pub fn enclosure_convergence(p: &BernsteinPoly, degrees: &[u32], grid: u32) -> Result<EnclosureReport> {
    if degrees.is_empty() || grid == 0 {
        return Err(Error::InvalidArgument("need at least one degree and a positive grid".into()));
    }
    let mut steps = Vec::with_capacity(degrees.len());
    let mut previous = p.degree();
    let mut current = p.clone();
    for &degree in degrees {
        if degree < previous {
            return Err(Error::DegreeTooLow { degree: previous, target: degree });
        }
        current = current.elevate(degree - previous);
        previous = degree;
        let (lower, upper) = current.enclosure();
        steps.push(EnclosureStep { degree, lower, upper });
    }
    let values = grid_values(p, grid);
    Ok(EnclosureReport {
        steps,
        grid,
        grid_min: values.iter().min().expect("non-empty grid").clone(),
        grid_max: values.iter().max().expect("non-empty grid").clone(),
    })
}

/// Number of Bernstein coefficients at degree `n`.
pub fn basis_size(space: &Space, n: u32) -> usize {
    count_space_size(space.len(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn binary_point(t: Rational) -> SimplexPoint {
        SimplexPoint::new(Space::binary(), vec![Rational::one() - &t, t]).unwrap()
    }

    fn ternary() -> Space {
        Space::new(["a", "b", "c"]).unwrap()
    }

    fn coefficients(space: &Space, n: u32, values: Vec<Rational>) -> BernsteinPoly {
        BernsteinPoly::new(CountGamble::from_values(CountDomain::new(space.clone(), n), values).unwrap())
    }

    /// θ_1(1 - θ_1) on the binary simplex, written as θ_1 - θ_1².
    fn theta_one_minus_theta() -> Polynomial {
        Polynomial::new(Space::binary(), [(vec![0, 1], int(1)), (vec![0, 2], int(-1))]).unwrap()
    }

    #[test]
    fn simplex_point_validation() {
        assert!(SimplexPoint::new(Space::binary(), vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(SimplexPoint::new(Space::binary(), vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(SimplexPoint::new(Space::binary(), vec![int(1)]).is_err());
        let p = SimplexPoint::from_labels(ternary(), &[("c", rat(1, 4)), ("a", rat(3, 4))]).unwrap();
        assert_eq!(p.theta(), &[rat(3, 4), int(0), rat(1, 4)]);
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis_eval(&CountVector::new(vec![1, 1]), &binary_point(rat(1, 2))), rat(1, 2));
        let space = ternary();
        for label in 0..3 {
            let vertex = SimplexPoint::vertex(space.clone(), label);
            let m = CountDomain::new(space.clone(), 4).pure(label);
            assert_eq!(basis_eval(&m, &vertex), int(1));
            let other = CountDomain::new(space.clone(), 4).pure((label + 1) % 3);
            assert_eq!(basis_eval(&other, &vertex), int(0));
        }
    }

    #[test]
    fn eval_examples() {
        let t = binary_point(rat(2, 7));
        assert_eq!(BernsteinPoly::constant(Space::binary(), 3, rat(5, 3)).eval(&t).unwrap(), rat(5, 3));
        let m = CountVector::new(vec![1, 2]);
        let single = BernsteinPoly::new(CountGamble::indicator(CountDomain::new(Space::binary(), 3), &m).unwrap());
        assert_eq!(single.eval(&t).unwrap(), basis_eval(&m, &t));
        let identity = coefficients(&Space::binary(), 2, vec![int(0), rat(1, 2), int(1)]);
        assert_eq!(identity.eval(&t).unwrap(), rat(2, 7));
    }

    #[test]
    fn elevation_examples() {
        let theta = coefficients(&Space::binary(), 1, vec![int(0), int(1)]);
        assert_eq!(theta.elevate(1).coefficients().values(), &[int(0), rat(1, 2), int(1)]);
        assert_eq!(
            BernsteinPoly::constant(ternary(), 2, int(7)).elevate(3),
            BernsteinPoly::constant(ternary(), 5, int(7))
        );
    }

    #[test]
    fn decomposition_examples() {
        let space = Space::binary();
        assert_eq!(
            Polynomial::constant(space.clone(), int(1)).to_bernstein(2).unwrap().coefficients().values(),
            &[int(1), int(1), int(1)]
        );
        assert_eq!(
            Polynomial::coordinate(space.clone(), 1).to_bernstein(1).unwrap().coefficients().values(),
            &[int(0), int(1)]
        );
        let square = Polynomial::new(space.clone(), [(vec![0, 2], int(1))]).unwrap();
        assert_eq!(
            square.to_bernstein(3).unwrap().coefficients().values(),
            &[int(0), int(0), rat(1, 3), int(1)]
        );
        assert_eq!(
            square.to_bernstein(1),
            Err(Error::DegreeTooLow { degree: 2, target: 1 })
        );
    }

    #[test]
    fn enclosure_examples() {
        assert_eq!(BernsteinPoly::constant(ternary(), 3, int(2)).enclosure(), (int(2), int(2)));
        for n in 1..6 {
            let p = Polynomial::coordinate(Space::binary(), 1).to_bernstein(n).unwrap();
            assert_eq!(p.enclosure(), (int(0), int(1)));
        }
        let q = theta_one_minus_theta().to_bernstein(2).unwrap();
        assert_eq!(q.coefficients().values(), &[int(0), rat(1, 2), int(0)]);
        assert_eq!(q.enclosure(), (int(0), rat(1, 2)));
    }

    #[test]
    fn enclosure_of_theta_one_minus_theta() {
        let p = theta_one_minus_theta().to_bernstein(2).unwrap();
        // max_s s(n-s) / (n(n-1))
        let consecutive = enclosure_convergence(&p, &[2, 3, 4, 5], 10).unwrap();
        let maxima: Vec<Rational> = consecutive.steps.iter().map(|s| s.upper.clone()).collect();
        assert_eq!(maxima, vec![rat(1, 2), rat(1, 3), rat(1, 3), rat(3, 10)]);
        assert!(consecutive.nested());

        let doubling = enclosure_convergence(&p, &[2, 4, 8, 16], 16).unwrap();
        let maxima: Vec<Rational> = doubling.steps.iter().map(|s| s.upper.clone()).collect();
        assert_eq!(maxima, vec![rat(1, 2), rat(1, 3), rat(2, 7), rat(4, 15)]);
        assert_eq!(doubling.grid_max, rat(1, 4));
        assert_eq!(doubling.upper_gap(), rat(1, 60));
        assert!(doubling.within(&rat(1, 16)));
    }

    #[test]
    fn linear_polynomials_have_exact_enclosures() {
        let p = Polynomial::new(ternary(), [(vec![1, 0, 0], int(3)), (vec![0, 0, 1], int(-2))]).unwrap();
        let report = enclosure_convergence(&p.to_bernstein(1).unwrap(), &[1, 2, 3, 4], 4).unwrap();
        for step in &report.steps {
            assert_eq!((step.lower.clone(), step.upper.clone()), (int(-2), int(3)));
        }
        assert_eq!(report.upper_gap(), int(0));
    }

    #[test]
    fn approximants() {
        let space = Space::binary();
        let constant = bernstein_approximant(&space, 4, |_| rat(2, 9));
        assert_eq!(constant, BernsteinPoly::constant(space.clone(), 4, rat(2, 9)));
        let identity = bernstein_approximant(&space, 2, |t| t.theta()[1].clone());
        assert_eq!(identity.coefficients().values(), &[int(0), rat(1, 2), int(1)]);

        // the approximant of θ² at degree n is θ² + θ(1-θ)/n
        let square = |t: &SimplexPoint| &t.theta()[1] * &t.theta()[1];
        let mut previous: Option<Rational> = None;
        for n in [2, 4, 8] {
            let approx = bernstein_approximant(&space, n, square);
            let gap = (0..=20)
                .map(|i| {
                    let t = binary_point(rat(i, 20));
                    (approx.eval(&t).unwrap() - square(&t)).abs()
                })
                .max()
                .unwrap();
            assert_eq!(gap, rat(1, 4 * n as i64));
            if let Some(p) = previous {
                assert_eq!(gap * int(2), p);
            }
            previous = Some(rat(1, 4 * n as i64));
        }
    }

    fn small_point(space: &Space, weights: &[u32]) -> SimplexPoint {
        let total: u32 = weights.iter().sum::<u32>().max(1);
        let theta = if weights.iter().all(|&w| w == 0) {
            let mut v = vec![Rational::zero(); space.len()];
            v[0] = Rational::one();
            v
        } else {
            weights.iter().map(|&w| rat(w as i64, total as i64)).collect()
        };
        SimplexPoint::new(space.clone(), theta).unwrap()
    }

    proptest! {
        #[test]
        fn partition_of_unity_and_positivity(n in 0u32..5, w in proptest::collection::vec(0u32..7, 3)) {
            let space = ternary();
            let theta = small_point(&space, &w);
            let mut sum = Rational::zero();
            for m in count_vectors(3, n) {
                let b = basis_eval(&m, &theta);
                prop_assert!(!b.is_negative());
                sum += b;
            }
            prop_assert_eq!(sum, Rational::one());
        }

        #[test]
        fn elevation_preserves_values(
            n in 0u32..4,
            k in 0u32..4,
            j in 0u32..3,
            coefs in proptest::collection::vec(-5i64..6, 10),
            w in proptest::collection::vec(0u32..7, 3),
        ) {
            let space = ternary();
            let size = basis_size(&space, n);
            let p = coefficients(&space, n, coefs[..size].iter().map(|&c| int(c)).collect());
            let theta = small_point(&space, &w);
            let up = p.elevate(k);
            prop_assert_eq!(up.eval(&theta).unwrap(), p.eval(&theta).unwrap());
            prop_assert_eq!(p.elevate(j).elevate(k), p.elevate(j + k));
            let (lo, hi) = p.enclosure();
            let (ulo, uhi) = up.enclosure();
            prop_assert!(lo <= ulo && uhi <= hi);
        }

        #[test]
        fn decomposition_matches_monomial_values(
            terms in proptest::collection::vec((proptest::collection::vec(0u32..3, 3), -4i64..5), 0..5),
            extra in 0u32..3,
            w in proptest::collection::vec(0u32..7, 3),
        ) {
            let space = ternary();
            let p = Polynomial::new(space.clone(), terms.into_iter().map(|(e, c)| (e, int(c)))).unwrap();
            let b = p.to_bernstein(p.degree() + extra).unwrap();
            let theta = small_point(&space, &w);
            prop_assert_eq!(b.eval(&theta).unwrap(), p.eval(&theta));
        }
    }
}
