//! Finite possibility spaces, their `N`-fold products, count vectors and
//! invariant atoms, gambles on tuples and on counts, and the multiple
//! hypergeometric (sampling without replacement) prevision.
//!
//! Tuples are enumerated lexicographically in label order, the first position
//! being the most significant. Count vectors of a level are enumerated in
//! lexicographically *descending* order, so that for a two-label space
//! `{a, b}` the order is "number of `b`s" = 0, 1, ..., N.

use crate::error::{Error, Result};
use crate::rational::{from_biguint, Rational};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Maximum number of tuples materialized by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// An ordered finite set of distinct category labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Space {
    labels: Arc<[String]>,
}

impl Space {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSpace("a space needs at least one label".into()));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::InvalidSpace(format!("duplicate label `{label}`")));
            }
        }
        Ok(Self { labels: labels.into() })
    }

    /// The space `{0, 1}`.
    pub fn binary() -> Self {
        Self::new(["0", "1"]).expect("valid labels")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space{:?}", &*self.labels)
    }
}

/// A tuple of `X^N`, stored as label indices.
pub type Tuple = Vec<usize>;

/// The finite set a gamble is defined on.
pub trait Domain: Clone + fmt::Debug + PartialEq {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn space(&self) -> &Space;
    fn describe(&self) -> String;
}

/// `X^N`, materializable within an enumeration cap.
#[derive(Clone, Debug)]
pub struct TupleDomain {
    space: Space,
    arity: u32,
    size: usize,
}

impl PartialEq for TupleDomain {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.arity == other.arity
    }
}

impl TupleDomain {
    pub fn new(space: Space, arity: u32) -> Result<Self> {
        Self::with_cap(space, arity, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(space: Space, arity: u32, cap: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidArgument("arity must be positive".into()));
        }
        let size = (space.len())
            .checked_pow(arity)
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::CapExceeded {
                requested: format!("{}^{}", space.len(), arity),
                cap,
            })?;
        Ok(Self { space, arity, size })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Position of a tuple in the lexicographic enumeration.
    pub fn index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity as usize);
        let k = self.space.len();
        tuple.iter().fold(0, |acc, &x| acc * k + x)
    }

    pub fn tuple(&self, mut index: usize) -> Tuple {
        let k = self.space.len();
        let mut tuple = vec![0; self.arity as usize];
        for slot in tuple.iter_mut().rev() {
            *slot = index % k;
            index /= k;
        }
        tuple
    }

    pub fn tuples(&self) -> impl Iterator<Item = Tuple> + '_ {
        (0..self.size).map(move |i| self.tuple(i))
    }

    /// Parses a tuple given by its labels.
    pub fn tuple_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Tuple> {
        if labels.len() != self.arity as usize {
            return Err(Error::DomainMismatch(format!(
                "tuple has {} components, expected {}",
                labels.len(),
                self.arity
            )));
        }
        labels.iter().map(|l| self.space.index_of(l.as_ref())).collect()
    }

    pub fn tuple_labels(&self, tuple: &[usize]) -> Vec<&str> {
        tuple.iter().map(|&x| self.space.label(x)).collect()
    }

    pub fn count_domain(&self) -> CountDomain {
        CountDomain::new(self.space.clone(), self.arity)
    }
}

impl Domain for TupleDomain {
    fn len(&self) -> usize {
        self.size
    }
    fn space(&self) -> &Space {
        &self.space
    }
    fn describe(&self) -> String {
        format!("{:?}^{}", self.space.labels(), self.arity)
    }
}

/// Lists `X^N` lexicographically, subject to the default cap.
pub fn enumerate_tuples(space: &Space, arity: u32) -> Result<Vec<Tuple>> {
    enumerate_tuples_capped(space, arity, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_tuples_capped(space: &Space, arity: u32, cap: usize) -> Result<Vec<Tuple>> {
    let domain = TupleDomain::with_cap(space.clone(), arity, cap)?;
    Ok(domain.tuples().collect())
}

/// Occurrence counts of each label, in space order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountVector(Vec<u32>);

impl CountVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn of_tuple(space_len: usize, tuple: &[usize]) -> Self {
        let mut counts = vec![0; space_len];
        for &x in tuple {
            counts[x] += 1;
        }
        Self(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn fits_in(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - other`, or `None` when some component would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// `ν(m) = N! / Π m_x!`, the number of tuples in the invariant atom.
    pub fn atom_size(&self) -> BigUint {
        multinomial(&self.0)
    }

    /// The frequency vector `m / N`.
    pub fn frequencies(&self) -> Vec<Rational> {
        let total = Rational::from_integer(self.total().into());
        self.0
            .iter()
            .map(|&c| Rational::from_integer(c.into()) / &total)
            .collect()
    }
}

/// Count vector of a tuple given by labels.
pub fn count_vector<S: AsRef<str>>(space: &Space, tuple: &[S]) -> Result<CountVector> {
    let indices = tuple
        .iter()
        .map(|l| space.index_of(l.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CountVector::of_tuple(space.len(), &indices))
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn multinomial(counts: &[u32]) -> BigUint {
    let total: u32 = counts.iter().sum();
    counts
        .iter()
        .fold(factorial(total), |acc, &c| acc / factorial(c))
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `|N_X^n| = C(n + |X| - 1, |X| - 1)`.
pub fn count_space_size(space_len: usize, level: u32) -> usize {
    binomial(level as u64 + space_len as u64 - 1, space_len as u64 - 1) as usize
}

/// All count vectors of total `level` over `space_len` labels, in canonical
/// (lexicographically descending) order.
pub fn count_vectors(space_len: usize, level: u32) -> Vec<CountVector> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<CountVector>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(CountVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for v in (0..=remaining).rev() {
            prefix.push(v);
            fill(prefix, remaining - v, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(count_space_size(space_len, level));
    fill(&mut Vec::with_capacity(space_len), level, space_len, &mut out);
    out
}

/// Position of `m` in [`count_vectors`].
pub fn count_rank(m: &CountVector) -> usize {
    let k = m.0.len();
    let mut remaining = m.total();
    let mut rank = 0usize;
    for (i, &mi) in m.0.iter().enumerate().take(k.saturating_sub(1)) {
        let parts = k - i - 1;
        for v in (mi + 1)..=remaining {
            rank += binomial((remaining - v) as u64 + parts as u64 - 1, parts as u64 - 1) as usize;
        }
        remaining -= mi;
    }
    rank
}

/// `N_X^n`: the count vectors of a fixed level.
#[derive(Clone, Debug, PartialEq)]
pub struct CountDomain {
    space: Space,
    level: u32,
}

impl CountDomain {
    pub fn new(space: Space, level: u32) -> Self {
        Self { space, level }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vectors(&self) -> Vec<CountVector> {
        count_vectors(self.space.len(), self.level)
    }

    pub fn index(&self, m: &CountVector) -> Result<usize> {
        if m.0.len() != self.space.len() || m.total() != self.level {
            return Err(Error::DomainMismatch(format!(
                "count vector {:?} is not in N^{} over {} labels",
                m.0,
                self.level,
                self.space.len()
            )));
        }
        Ok(count_rank(m))
    }

    /// The count vector with all `level` components on `label`.
    pub fn pure(&self, label: usize) -> CountVector {
        let mut counts = vec![0; self.space.len()];
        counts[label] = self.level;
        CountVector(counts)
    }

    pub fn with_level(&self, level: u32) -> Self {
        Self::new(self.space.clone(), level)
    }

    /// Renders `m` as `label:count` pairs, omitting zero counts.
    pub fn format_vector(&self, m: &CountVector) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, c)| format!("{}:{}", self.space.label(i), c))
            .collect();
        parts.join(",")
    }
}

impl Domain for CountDomain {
    fn len(&self) -> usize {
        count_space_size(self.space.len(), self.level)
    }
    fn space(&self) -> &Space {
        &self.space
    }
    fn describe(&self) -> String {
        format!("counts of {} over {:?}", self.level, self.space.labels())
    }
}

/// A gamble: a total map from a finite domain to the rationals, stored densely
/// in the domain's canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct GambleOn<D: Domain> {
    domain: D,
    values: Vec<Rational>,
}

/// A gamble on `X^N`.
pub type Gamble = GambleOn<TupleDomain>;
/// A gamble on `N_X^n`.
pub type CountGamble = GambleOn<CountDomain>;

impl<D: Domain> GambleOn<D> {
    pub fn from_values(domain: D, values: Vec<Rational>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::DomainMismatch(format!(
                "{} values given for a domain of size {}",
                values.len(),
                domain.len()
            )));
        }
        Ok(Self { domain, values })
    }

    pub fn constant(domain: D, value: Rational) -> Self {
        let values = vec![value; domain.len()];
        Self { domain, values }
    }

    pub fn zero(domain: D) -> Self {
        Self::constant(domain, Rational::zero())
    }

    pub fn unit(domain: D, index: usize) -> Self {
        let mut g = Self::zero(domain);
        g.values[index] = Rational::one();
        g
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn min(&self) -> Rational {
        self.values.iter().min().cloned().expect("non-empty domain")
    }

    pub fn max(&self) -> Rational {
        self.values.iter().max().cloned().expect("non-empty domain")
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self { domain: self.domain.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        self.check_domain(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(Self { domain: self.domain.clone(), values })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.map(|v| v * factor)
    }

    /// `Σ_x mass(x) f(x)`.
    pub fn expectation(&self, mass: &[Rational]) -> Rational {
        debug_assert_eq!(mass.len(), self.values.len());
        self.values.iter().zip(mass).map(|(v, p)| v * p).sum()
    }

    pub fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.domain.describe(),
                other.domain.describe()
            )));
        }
        Ok(())
    }
}

macro_rules! gamble_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<D: Domain> $trait<&GambleOn<D>> for &GambleOn<D> {
            type Output = GambleOn<D>;
            fn $method(self, rhs: &GambleOn<D>) -> GambleOn<D> {
                self.zip_with(rhs, |a, b| a $op b).expect("gambles on the same domain")
            }
        }
    };
}
gamble_binop!(Add, add, +);
gamble_binop!(Sub, sub, -);

impl<D: Domain> Neg for &GambleOn<D> {
    type Output = GambleOn<D>;
    fn neg(self) -> GambleOn<D> {
        self.map(|v| -v)
    }
}

impl<D: Domain> Mul<&Rational> for &GambleOn<D> {
    type Output = GambleOn<D>;
    fn mul(self, rhs: &Rational) -> GambleOn<D> {
        self.scale(rhs)
    }
}

impl<D: Domain> Add<&Rational> for &GambleOn<D> {
    type Output = GambleOn<D>;
    fn add(self, rhs: &Rational) -> GambleOn<D> {
        self.map(|v| v + rhs)
    }
}

impl Gamble {
    pub fn from_fn(domain: TupleDomain, f: impl Fn(&[usize]) -> Rational) -> Self {
        let values = domain.tuples().map(|t| f(&t)).collect();
        Self { domain, values }
    }

    pub fn indicator(domain: TupleDomain, tuple: &[usize]) -> Self {
        let index = domain.index(tuple);
        Self::unit(domain, index)
    }

    /// Indicator of a set of tuples given by a predicate.
    pub fn indicator_where(domain: TupleDomain, pred: impl Fn(&[usize]) -> bool) -> Self {
        Self::from_fn(domain, |t| if pred(t) { Rational::one() } else { Rational::zero() })
    }

    pub fn at(&self, tuple: &[usize]) -> &Rational {
        &self.values[self.domain.index(tuple)]
    }

    pub fn arity(&self) -> u32 {
        self.domain.arity()
    }
}

impl CountGamble {
    pub fn from_fn(domain: CountDomain, f: impl Fn(&CountVector) -> Rational) -> Self {
        let values = domain.vectors().iter().map(f).collect();
        Self { domain, values }
    }

    pub fn indicator(domain: CountDomain, m: &CountVector) -> Result<Self> {
        let index = domain.index(m)?;
        Ok(Self::unit(domain, index))
    }

    pub fn at(&self, m: &CountVector) -> Result<&Rational> {
        Ok(&self.values[self.domain.index(m)?])
    }

    pub fn level(&self) -> u32 {
        self.domain.level()
    }
}

/// Count vector of a tuple (given as label indices).
pub fn count_of(domain: &TupleDomain, tuple: &[usize]) -> CountVector {
    CountVector::of_tuple(domain.space().len(), tuple)
}

/// `ν(m)` as a machine integer when it fits.
pub fn atom_size(m: &CountVector) -> BigUint {
    m.atom_size()
}

/// The tuples of the invariant atom `[m]`, in lexicographic order.
pub fn invariant_atom(m: &CountVector) -> Result<Vec<Tuple>> {
    invariant_atom_capped(m, DEFAULT_ENUMERATION_CAP)
}

pub fn invariant_atom_capped(m: &CountVector, cap: usize) -> Result<Vec<Tuple>> {
    let size = m.atom_size();
    if size > BigUint::from(cap) {
        return Err(Error::CapExceeded { requested: format!("atom of size {size}"), cap });
    }
    fn rec(remaining: &mut Vec<u32>, prefix: &mut Tuple, len: usize, out: &mut Vec<Tuple>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for x in 0..remaining.len() {
            if remaining[x] > 0 {
                remaining[x] -= 1;
                prefix.push(x);
                rec(remaining, prefix, len, out);
                prefix.pop();
                remaining[x] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let len = m.total() as usize;
    rec(&mut m.0.clone(), &mut Vec::with_capacity(len), len, &mut out);
    Ok(out)
}

/// Checks that `perm` is a bijection of `0..len`.
pub fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    let bad = || Error::BadPermutation { perm: perm.to_vec(), len };
    if perm.len() != len {
        return Err(bad());
    }
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(bad());
        }
    }
    Ok(())
}

/// `πf = f ∘ π` with `(πx)_k = x_{π(k)}`; positions are zero-based.
pub fn permute_gamble(f: &Gamble, perm: &[usize]) -> Result<Gamble> {
    let domain = f.domain().clone();
    check_permutation(perm, domain.arity() as usize)?;
    Ok(Gamble::from_fn(domain, |x| {
        let permuted: Vec<usize> = perm.iter().map(|&p| x[p]).collect();
        f.at(&permuted).clone()
    }))
}

/// `MuHy(f|m)`: the average of `f` over the invariant atom `[m]`.
pub fn muhy(f: &Gamble, m: &CountVector) -> Result<Rational> {
    let domain = f.domain();
    if m.counts().len() != domain.space().len() || m.total() != domain.arity() {
        return Err(Error::DomainMismatch(format!(
            "count vector {:?} does not match {}",
            m.counts(),
            domain.describe()
        )));
    }
    let atom = invariant_atom(m)?;
    let sum: Rational = atom.iter().map(|z| f.at(z).clone()).sum();
    Ok(sum / from_biguint(&m.atom_size()))
}

/// The count gamble `m ↦ MuHy(f|m)`, computed in one pass over `X^N`.
pub fn muhy_gamble(f: &Gamble) -> CountGamble {
    let domain = f.domain();
    let counts = domain.count_domain();
    let mut sums = vec![Rational::zero(); counts.len()];
    for (index, z) in domain.tuples().enumerate() {
        sums[count_rank(&count_of(domain, &z))] += &f.values()[index];
    }
    let vectors = counts.vectors();
    let values = sums
        .into_iter()
        .zip(&vectors)
        .map(|(s, m)| s / from_biguint(&m.atom_size()))
        .collect();
    CountGamble { domain: counts, values }
}

/// `h ∘ T`: the permutation-invariant gamble on `X^N` taking value `h(m)` on `[m]`.
pub fn lift_count_gamble(h: &CountGamble, domain: &TupleDomain) -> Result<Gamble> {
    if domain.count_domain() != *h.domain() {
        return Err(Error::DomainMismatch(format!(
            "{} vs {}",
            h.domain().describe(),
            domain.describe()
        )));
    }
    Ok(Gamble::from_fn(domain.clone(), |z| {
        h.values()[count_rank(&count_of(domain, z))].clone()
    }))
}

/// `f̂ = Σ_m I_[m] MuHy(f|m)`.
pub fn symmetrize(f: &Gamble) -> Gamble {
    lift_count_gamble(&muhy_gamble(f), f.domain()).expect("matching domains")
}

/// `ν(m) ν(µ−m) / ν(µ)`, the probability of drawing composition `m` when
/// drawing `|m|` balls without replacement from an urn of composition `µ`.
pub fn draw_weight(m: &CountVector, mu: &CountVector) -> Rational {
    match mu.checked_sub(m) {
        Some(rest) => {
            from_biguint(&(m.atom_size() * rest.atom_size())) / from_biguint(&mu.atom_size())
        }
        None => Rational::zero(),
    }
}

/// `ḡ(µ) = Σ_{m ≤ µ} ν(m)ν(µ−m)/ν(µ) g(m)`.
pub fn muhy_marginal(g: &CountGamble, mu: &CountVector) -> Result<Rational> {
    let space_len = g.domain().space().len();
    if mu.counts().len() != space_len || mu.total() < g.level() {
        return Err(Error::DomainMismatch(format!(
            "urn {:?} cannot be sampled for {} draws",
            mu.counts(),
            g.level()
        )));
    }
    Ok(g.domain()
        .vectors()
        .iter()
        .zip(g.values())
        .filter(|(m, _)| m.fits_in(mu))
        .map(|(m, v)| draw_weight(m, mu) * v)
        .sum())
}

/// The whole gamble `ḡ` on `N_X^{target}`.
pub fn muhy_extend(g: &CountGamble, target: u32) -> Result<CountGamble> {
    if target < g.level() {
        return Err(Error::InvalidArgument(format!(
            "cannot extend level {} down to {target}",
            g.level()
        )));
    }
    let domain = g.domain().with_level(target);
    let vectors = domain.vectors();
    let values = vectors
        .iter()
        .map(|mu| muhy_marginal(g, mu))
        .collect::<Result<Vec<_>>>()?;
    CountGamble::from_values(domain, values)
}

/// `f*(z_1..z_N) = f(z_1..z_n)`.
pub fn cylindrical_extension(f: &Gamble, target: u32) -> Result<Gamble> {
    let arity = f.arity() as usize;
    if (target as usize) < arity {
        return Err(Error::InvalidArgument(format!(
            "cannot extend arity {arity} down to {target}"
        )));
    }
    let domain = TupleDomain::new(f.domain().space().clone(), target)?;
    Ok(Gamble::from_fn(domain, |z| f.at(&z[..arity]).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ternary() -> Space {
        Space::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(Space::new(Vec::<String>::new()).is_err());
        assert!(Space::new(["a", "a"]).is_err());
        assert_eq!(ternary().index_of("c").unwrap(), 2);
        assert_eq!(ternary().index_of("z"), Err(Error::UnknownLabel("z".into())));
    }

    #[test]
    fn binary_pairs_in_lexicographic_order() {
        let tuples = enumerate_tuples(&Space::binary(), 2).unwrap();
        assert_eq!(tuples, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn singleton_space_has_one_tuple() {
        let s = Space::new(["a"]).unwrap();
        assert_eq!(enumerate_tuples(&s, 3).unwrap(), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn binary_triples() {
        let tuples = enumerate_tuples(&Space::binary(), 3).unwrap();
        assert_eq!(tuples.len(), 8);
        assert_eq!(tuples[0], vec![0, 0, 0]);
        assert_eq!(tuples[7], vec![1, 1, 1]);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_tuples_capped(&Space::binary(), 11, 1024).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(enumerate_tuples_capped(&Space::binary(), 10, 1024).is_ok());
        assert!(matches!(
            TupleDomain::new(Space::binary(), 64),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn count_vectors_of_tuples() {
        let s = Space::binary();
        assert_eq!(count_vector(&s, &["1", "0", "1"]).unwrap().counts(), &[1, 2]);
        assert_eq!(count_vector(&s, &["0", "1"]).unwrap().counts(), &[1, 1]);
        let a = Space::new(["a"]).unwrap();
        assert_eq!(count_vector(&a, &["a", "a", "a"]).unwrap().counts(), &[3]);
        assert_eq!(count_vector(&s, &["0", "2"]), Err(Error::UnknownLabel("2".into())));
    }

    #[test]
    fn atom_sizes() {
        assert_eq!(CountVector::new(vec![1, 2]).atom_size(), BigUint::from(3u32));
        assert_eq!(CountVector::new(vec![0, 3]).atom_size(), BigUint::from(1u32));
        let sizes: Vec<BigUint> = count_vectors(2, 3).iter().map(|m| m.atom_size()).collect();
        let expected: Vec<BigUint> = [1u32, 3, 3, 1].into_iter().map(BigUint::from).collect();
        assert_eq!(sizes, expected);
    }

    #[test]
    fn binary_count_order_is_by_number_of_ones() {
        let ones: Vec<u32> = count_vectors(2, 4).iter().map(|m| m.counts()[1]).collect();
        assert_eq!(ones, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn rank_matches_enumeration() {
        for k in 1..=4 {
            for n in 0..=5 {
                let vs = count_vectors(k, n);
                assert_eq!(vs.len(), count_space_size(k, n));
                for (i, m) in vs.iter().enumerate() {
                    assert_eq!(count_rank(m), i);
                }
            }
        }
    }

    #[test]
    fn atoms_enumerate_matching_tuples() {
        let atom = invariant_atom(&CountVector::new(vec![1, 2])).unwrap();
        assert_eq!(atom, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(invariant_atom(&CountVector::new(vec![0, 3, 0])).unwrap(), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn atoms_agree_with_brute_force_ternary() {
        let domain = TupleDomain::new(ternary(), 3).unwrap();
        for m in count_vectors(3, 3) {
            let brute: Vec<Tuple> = domain.tuples().filter(|z| count_of(&domain, z) == m).collect();
            let atom = invariant_atom(&m).unwrap();
            assert_eq!(atom, brute);
            assert_eq!(BigUint::from(atom.len()), m.atom_size());
        }
    }

    #[test]
    fn atom_sizes_sum_to_tuple_count() {
        for k in 1..=3 {
            for n in 1..=5u32 {
                let total: BigUint = count_vectors(k, n).iter().map(|m| m.atom_size()).sum();
                assert_eq!(total, BigUint::from(k).pow(n));
            }
        }
    }

    #[test]
    fn permutation_relabels_indicator() {
        let d = TupleDomain::new(Space::binary(), 2).unwrap();
        let f = Gamble::indicator(d.clone(), &[1, 0]);
        assert_eq!(permute_gamble(&f, &[1, 0]).unwrap(), Gamble::indicator(d.clone(), &[0, 1]));
        assert_eq!(permute_gamble(&f, &[0, 1]).unwrap(), f);
        assert!(matches!(permute_gamble(&f, &[0, 0]), Err(Error::BadPermutation { .. })));
        assert!(matches!(permute_gamble(&f, &[0]), Err(Error::BadPermutation { .. })));
    }

    #[test]
    fn permutation_composition_law() {
        // π(σf) = f∘σ∘π as maps on tuples; on positions k ↦ π(σ(k))
        let d = TupleDomain::new(Space::binary(), 3).unwrap();
        let f = Gamble::from_values(d, (0..8).map(|i| int(i * i - 3 * i)).collect()).unwrap();
        let perms = [[0, 1, 2], [1, 0, 2], [2, 0, 1], [1, 2, 0], [0, 2, 1], [2, 1, 0]];
        for sigma in &perms {
            for pi in &perms {
                let lhs = permute_gamble(&permute_gamble(&f, sigma).unwrap(), pi).unwrap();
                let composed: Vec<usize> = (0..3).map(|k| pi[sigma[k]]).collect();
                let rhs = permute_gamble(&f, &composed).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn symmetrized_indicator() {
        let d = TupleDomain::new(Space::binary(), 3).unwrap();
        let f = Gamble::indicator(d.clone(), &[1, 0, 1]);
        let hat = symmetrize(&f);
        for z in d.tuples() {
            let expected = if count_of(&d, &z).counts()[1] == 2 { rat(1, 3) } else { int(0) };
            assert_eq!(hat.at(&z), &expected);
        }
        let c = Gamble::constant(d, rat(5, 7));
        assert_eq!(symmetrize(&c), c);
    }

    #[test]
    fn muhy_values() {
        let d = TupleDomain::new(Space::binary(), 3).unwrap();
        let m = CountVector::new(vec![1, 2]);
        assert_eq!(muhy(&Gamble::indicator(d.clone(), &[1, 0, 1]), &m).unwrap(), rat(1, 3));
        for m in count_vectors(2, 3) {
            assert_eq!(muhy(&Gamble::constant(d.clone(), int(1)), &m).unwrap(), int(1));
        }
        let first_success = Gamble::indicator_where(d.clone(), |z| z[0] == 1);
        assert_eq!(muhy(&first_success, &m).unwrap(), rat(2, 3));
        assert!(muhy(&first_success, &CountVector::new(vec![1, 1])).is_err());
    }

    #[test]
    fn muhy_gamble_agrees_with_atom_average() {
        let d = TupleDomain::new(ternary(), 3).unwrap();
        let f = Gamble::from_values(d.clone(), (0..27).map(|i| rat(i % 5 - 2, 1 + i % 3)).collect())
            .unwrap();
        let h = muhy_gamble(&f);
        for m in d.count_domain().vectors() {
            assert_eq!(h.at(&m).unwrap(), &muhy(&f, &m).unwrap());
        }
    }

    #[test]
    fn marginal_values() {
        let level2 = CountDomain::new(Space::binary(), 2);
        let one = CountGamble::constant(level2.clone(), int(1));
        for mu in count_vectors(2, 4) {
            assert_eq!(muhy_marginal(&one, &mu).unwrap(), int(1));
        }
        let g = CountGamble::indicator(level2, &CountVector::new(vec![1, 1])).unwrap();
        assert_eq!(muhy_marginal(&g, &CountVector::new(vec![2, 1])).unwrap(), rat(2, 3));
        assert_eq!(muhy_marginal(&g, &CountVector::new(vec![3, 0])).unwrap(), int(0));
    }

    #[test]
    fn draw_weights_sum_to_one() {
        for k in 1..=3 {
            for n in 0..=3 {
                for extra in 0..=3 {
                    for mu in count_vectors(k, n + extra) {
                        let total: Rational =
                            count_vectors(k, n).iter().map(|m| draw_weight(m, &mu)).sum();
                        assert_eq!(total, int(1));
                    }
                }
            }
        }
    }

    #[test]
    fn cylindrical_extensions() {
        let d1 = TupleDomain::new(Space::binary(), 1).unwrap();
        let f = Gamble::indicator(d1.clone(), &[1]);
        let ext = cylindrical_extension(&f, 2).unwrap();
        let d2 = TupleDomain::new(Space::binary(), 2).unwrap();
        let expected = &Gamble::indicator(d2.clone(), &[1, 0]) + &Gamble::indicator(d2, &[1, 1]);
        assert_eq!(ext, expected);
        assert_eq!(cylindrical_extension(&f, 1).unwrap(), f);
        let c = Gamble::constant(d1, int(4));
        assert!(cylindrical_extension(&c, 4).unwrap().values().iter().all(|v| *v == int(4)));
    }

    #[test]
    fn cylinder_muhy_matches_marginal_exhaustively() {
        for space in [Space::binary(), ternary()] {
            for n in 1..=3u32 {
                let d = TupleDomain::new(space.clone(), n).unwrap();
                // a fixed non-symmetric gamble
                let f = Gamble::from_values(
                    d.clone(),
                    (0..d.len() as i64).map(|i| rat((i * 7) % 11 - 5, 1 + i % 4)).collect(),
                )
                .unwrap();
                let g = muhy_gamble(&f);
                for big in n..=5u32 {
                    let ext = muhy_gamble(&cylindrical_extension(&f, big).unwrap());
                    assert_eq!(ext, muhy_extend(&g, big).unwrap(), "n={n} N={big}");
                }
            }
        }
    }
}
