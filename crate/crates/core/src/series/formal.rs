use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Grading, Monomial};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{self, Rational};

/// Parity selectors. The `*Xy` modes look at `k + l`, the `*X` modes at `k`;
/// `ε` never contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    EvenXy,
    OddXy,
    EvenX,
    OddX,
}

impl Parity {
    pub fn accepts(self, mono: &Monomial) -> bool {
        match self {
            Parity::EvenXy => mono.xy_degree().is_multiple_of(2),
            Parity::OddXy => mono.xy_degree() % 2 == 1,
            Parity::EvenX => mono.k.is_multiple_of(2),
            Parity::OddX => mono.k % 2 == 1,
        }
    }

    pub fn complement(self) -> Parity {
        match self {
            Parity::EvenXy => Parity::OddXy,
            Parity::OddXy => Parity::EvenXy,
            Parity::EvenX => Parity::OddX,
            Parity::OddX => Parity::EvenX,
        }
    }
}

/// A truncated formal power series in `(x, y, ε)` with exact rational
/// coefficients.
///
/// Every stored monomial has weight at most `order` under `grading`, and no
/// stored coefficient is zero. All arithmetic discards monomials above the
/// order, so a value stands for the polynomial it stores plus terms of weight
/// greater than `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    terms: BTreeMap<Monomial, Rational>,
    grading: Grading,
    order: u32,
}

impl FormalSeries {
    pub fn zero(grading: Grading, order: u32) -> Self {
        FormalSeries {
            terms: BTreeMap::new(),
            grading,
            order,
        }
    }

    pub fn constant(grading: Grading, order: u32, c: Rational) -> Self {
        Self::monomial(grading, order, Monomial::ONE, c)
    }

    pub fn one(grading: Grading, order: u32) -> Self {
        Self::constant(grading, order, Rational::one())
    }

    pub fn monomial(grading: Grading, order: u32, mono: Monomial, c: Rational) -> Self {
        Self::from_terms(grading, order, [(mono, c)])
    }

    pub fn x(grading: Grading, order: u32) -> Self {
        Self::monomial(grading, order, Monomial::X, Rational::one())
    }

    pub fn y(grading: Grading, order: u32) -> Self {
        Self::monomial(grading, order, Monomial::Y, Rational::one())
    }

    /// Builds a series from `(monomial, coefficient)` pairs, summing repeated
    /// monomials and dropping zeros and monomials above `order`.
    pub fn from_terms<I>(grading: Grading, order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (mono, c) in terms {
            if grading.weight(&mono) <= order {
                *map.entry(mono).or_insert_with(Rational::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        FormalSeries {
            terms: map,
            grading,
            order,
        }
    }

    /// Convenience constructor from `(k, l, m, p, q)` tuples meaning
    /// `p/q x^k y^l ε^m`.
    pub fn from_ints(grading: Grading, order: u32, terms: &[(u32, u32, u32, i64, i64)]) -> Self {
        Self::from_terms(
            grading,
            order,
            terms
                .iter()
                .map(|&(k, l, m, p, q)| (Monomial::new(k, l, m), rational::frac(p, q))),
        )
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn context(&self) -> (Grading, u32) {
        (self.grading, self.order)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, k: u32, l: u32, m: u32) -> Rational {
        self.coefficient(&Monomial::new(k, l, m))
    }

    pub fn weight(&self, mono: &Monomial) -> u32 {
        self.grading.weight(mono)
    }

    /// Lowest weight present, `None` for the zero series.
    pub fn lowest_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.grading.weight(m)).min()
    }

    pub fn highest_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.grading.weight(m)).max()
    }

    pub fn same_context(&self, other: &FormalSeries) -> bool {
        self.grading == other.grading && self.order == other.order
    }

    fn check(&self, other: &FormalSeries) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::incompatible(self.context(), other.context()))
        }
    }

    fn with_terms(&self, terms: BTreeMap<Monomial, Rational>) -> Self {
        FormalSeries {
            terms,
            grading: self.grading,
            order: self.order,
        }
    }

    /// Applies `f` to every term; zero results and monomials above the order
    /// are dropped.
    fn map_terms<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&Monomial, &Rational) -> Option<(Monomial, Rational)>,
    {
        Self::from_terms(
            self.grading,
            self.order,
            self.terms.iter().filter_map(|(m, c)| f(m, c)),
        )
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        self.with_terms(
            self.terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        )
    }

    pub fn try_add(&self, other: &FormalSeries) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(*m).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(self.with_terms(terms))
    }

    pub fn try_sub(&self, other: &FormalSeries) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &FormalSeries) -> Result<Self> {
        self.check(other)?;
        let products = self.len() * other.len();
        if par::enabled() && products >= par::MUL_PAR_THRESHOLD {
            Ok(self.mul_chunked(other, par::chunk_count()))
        } else {
            Ok(self.mul_sequential(other))
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return self.with_terms(BTreeMap::new());
        }
        self.with_terms(self.terms.iter().map(|(m, v)| (*m, v * c)).collect())
    }

    /// Multiplies by the monomial `c x^k y^l ε^m`.
    pub fn shift(&self, mono: Monomial, c: &Rational) -> Self {
        self.map_terms(|m, v| Some((m.times(mono), v * c)))
    }

    fn weighted(&self) -> Vec<(u32, Monomial, &Rational)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (self.grading.weight(m), *m, c))
            .collect();
        v.sort_by_key(|t| t.0);
        v
    }

    fn mul_block(
        lhs: &[(u32, Monomial, &Rational)],
        rhs: &[(u32, Monomial, &Rational)],
        order: u32,
        acc: &mut BTreeMap<Monomial, Rational>,
    ) {
        for (w1, m1, c1) in lhs {
            if *w1 > order {
                break;
            }
            let limit = order - w1;
            for (w2, m2, c2) in rhs {
                if *w2 > limit {
                    break;
                }
                let prod = *c1 * *c2;
                *acc.entry(m1.times(*m2)).or_insert_with(Rational::zero) += prod;
            }
        }
    }

    /// Single-threaded truncated product.
    pub fn mul_sequential(&self, other: &FormalSeries) -> Self {
        assert!(self.same_context(other), "incompatible series context");
        let lhs = self.weighted();
        let rhs = other.weighted();
        let mut acc = BTreeMap::new();
        Self::mul_block(&lhs, &rhs, self.order, &mut acc);
        acc.retain(|_, c| !c.is_zero());
        self.with_terms(acc)
    }

    /// Truncated product with the left operand split into `chunks` blocks
    /// whose partial sums are merged in block order.
    pub fn mul_chunked(&self, other: &FormalSeries, chunks: usize) -> Self {
        assert!(self.same_context(other), "incompatible series context");
        let lhs = self.weighted();
        let rhs = other.weighted();
        let size = lhs.len().div_ceil(chunks.max(1)).max(1);
        let blocks: Vec<_> = lhs.chunks(size).collect();
        let order = self.order;
        let partials = par::map_ordered(&blocks, |block| {
            let mut acc = BTreeMap::new();
            Self::mul_block(block, &rhs, order, &mut acc);
            acc
        });
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for part in partials {
            for (m, c) in part {
                *acc.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        self.with_terms(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.grading, self.order);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn dx(&self) -> Self {
        self.map_terms(|m, c| {
            (m.k > 0).then(|| (Monomial::new(m.k - 1, m.l, m.m), c * rational::int(m.k as i64)))
        })
    }

    pub fn dy(&self) -> Self {
        self.map_terms(|m, c| {
            (m.l > 0).then(|| (Monomial::new(m.k, m.l - 1, m.m), c * rational::int(m.l as i64)))
        })
    }

    /// `{self, other} = ∂x self ∂y other − ∂y self ∂x other`.
    pub fn poisson(&self, other: &FormalSeries) -> Result<Self> {
        self.check(other)?;
        Ok(&(&self.dx() * &other.dy()) - &(&self.dy() * &other.dx()))
    }

    /// The quasi-homogeneous part of weight `p`.
    pub fn qh_project(&self, p: u32) -> QhPart {
        let grading = self.grading;
        QhPart {
            weight: p,
            series: self.filter(|m| grading.weight(m) == p),
        }
    }

    /// Quasi-homogeneous parts indexed by weight, lowest first.
    pub fn qh_parts(&self) -> BTreeMap<u32, FormalSeries> {
        let mut out: BTreeMap<u32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(self.grading.weight(m))
                .or_default()
                .insert(*m, c.clone());
        }
        out.into_iter()
            .map(|(w, t)| (w, self.with_terms(t)))
            .collect()
    }

    pub fn parity_project(&self, parity: Parity) -> Self {
        self.filter(|m| parity.accepts(m))
    }

    /// `f(-x, y)`.
    pub fn reflect_x(&self) -> Self {
        self.with_terms(
            self.terms
                .iter()
                .map(|(m, c)| (*m, if m.k % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        )
    }

    /// `f(-x, -y)`.
    pub fn reflect_xy(&self) -> Self {
        self.with_terms(
            self.terms
                .iter()
                .map(|(m, c)| (*m, if m.xy_degree() % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        )
    }

    /// Removes the pure-`ε` terms (including the constant term).
    pub fn drop_pure_eps(&self) -> Self {
        self.filter(|m| !m.is_pure_eps())
    }

    /// Restricts to monomials of weight at most `order` and lowers the
    /// truncation order accordingly.
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let grading = self.grading;
        FormalSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| grading.weight(m) <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            grading,
            order,
        }
    }

    /// Re-wraps the coefficients under another grading. The new order is the
    /// largest one at which every monomial is still covered by the old
    /// truncation; stored monomials above it are dropped.
    pub fn regrade(&self, grading: Grading) -> Self {
        let order = self.grading.complete_horizon(self.order, grading);
        self.regrade_to(grading, order)
    }

    /// Same terms under a different truncation order. Raising the order is
    /// only sound when the caller knows the missing weights vanish.
    pub(crate) fn with_order(&self, order: u32) -> Self {
        self.regrade_to(self.grading, order)
    }

    pub(crate) fn regrade_to(&self, grading: Grading, order: u32) -> Self {
        FormalSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| grading.weight(m) <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            grading,
            order,
        }
    }

    /// Lowest weight at which `self` and `other` differ.
    pub fn lowest_difference(&self, other: &FormalSeries) -> Result<Option<u32>> {
        Ok(self.try_sub(other)?.lowest_weight())
    }

    /// True iff all quasi-homogeneous parts of weight `<= p` agree.
    pub fn equal_to_order(&self, other: &FormalSeries, p: u32) -> Result<bool> {
        Ok(match self.lowest_difference(other)? {
            None => true,
            Some(w) => w > p,
        })
    }

    /// `2^-p` where `p` is the lowest differing weight; zero if the series
    /// agree through the truncation order.
    pub fn metric_distance(&self, other: &FormalSeries) -> Result<Rational> {
        Ok(match self.lowest_difference(other)? {
            None => Rational::zero(),
            Some(p) => Rational::new(1.into(), num_bigint::BigInt::from(2u32).pow(p)),
        })
    }

    /// First monomial (in weight, then lexicographic order) whose
    /// coefficient differs.
    pub fn first_difference(&self, other: &FormalSeries) -> Option<(Monomial, Rational, Rational)> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort_by_key(|m| (self.grading.weight(m), **m));
        keys.dedup();
        keys.into_iter().find_map(|m| {
            let a = self.coefficient(m);
            let b = other.coefficient(m);
            (a != b).then_some((*m, a, b))
        })
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let s = rational::format(c);
            if first {
                write!(f, "{s}")?;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
            if *m != Monomial::ONE {
                write!(f, "*{m}")?;
            }
            first = false;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands have different gradings or orders; use
        /// the `try_*` methods for a checked variant.
        impl $trait<&FormalSeries> for &FormalSeries {
            type Output = FormalSeries;
            fn $method(self, rhs: &FormalSeries) -> FormalSeries {
                self.$checked(rhs).expect("incompatible series context")
            }
        }
        impl $trait<FormalSeries> for FormalSeries {
            type Output = FormalSeries;
            fn $method(self, rhs: FormalSeries) -> FormalSeries {
                (&self).$checked(&rhs).expect("incompatible series context")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        self.with_terms(self.terms.iter().map(|(m, c)| (*m, -c)).collect())
    }
}

impl Neg for FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        -&self
    }
}

/// A series all of whose monomials have the same weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QhPart {
    weight: u32,
    series: FormalSeries,
}

impl QhPart {
    /// Wraps `series` if it is quasi-homogeneous of weight `weight`.
    pub fn new(series: FormalSeries, weight: u32) -> Option<Self> {
        let g = series.grading();
        let homogeneous = series.terms().all(|(m, _)| g.weight(m) == weight);
        homogeneous.then_some(QhPart { weight, series })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn into_series(self) -> FormalSeries {
        self.series
    }
}

impl Deref for QhPart {
    type Target = FormalSeries;
    fn deref(&self) -> &FormalSeries {
        &self.series
    }
}
