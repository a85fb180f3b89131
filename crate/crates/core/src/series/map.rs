use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{FormalSeries, Grading, Monomial};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// The two components of a planar map, sharing grading and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSeriesPair {
    pub x: FormalSeries,
    pub y: FormalSeries,
}

impl MapSeriesPair {
    pub fn new(x: FormalSeries, y: FormalSeries) -> Result<Self> {
        if !x.same_context(&y) {
            return Err(Error::incompatible(x.context(), y.context()));
        }
        Ok(MapSeriesPair { x, y })
    }

    pub fn identity(grading: Grading, order: u32) -> Self {
        MapSeriesPair {
            x: FormalSeries::x(grading, order),
            y: FormalSeries::y(grading, order),
        }
    }

    pub fn grading(&self) -> Grading {
        self.x.grading()
    }

    pub fn order(&self) -> u32 {
        self.x.order()
    }

    pub fn map(&self, f: impl Fn(&FormalSeries) -> FormalSeries) -> Self {
        MapSeriesPair {
            x: f(&self.x),
            y: f(&self.y),
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        self.map(|s| s.truncate(order))
    }

    pub fn regrade(&self, grading: Grading) -> Self {
        self.map(|s| s.regrade(grading))
    }

    /// `(x, y) ↦ -F(x, y)`.
    pub fn negate(&self) -> Self {
        self.map(|s| -s)
    }

    /// `Diag(-1, 1) ∘ F`.
    pub fn flip_x(&self) -> Self {
        MapSeriesPair {
            x: -&self.x,
            y: self.y.clone(),
        }
    }

    /// `self ∘ inner`: substitutes the components of `inner` for `(x, y)`.
    /// `ε` is a passive parameter.
    pub fn compose(&self, inner: &MapSeriesPair) -> Result<Self> {
        Ok(MapSeriesPair {
            x: substitute(&self.x, inner)?,
            y: substitute(&self.y, inner)?,
        })
    }

    /// The Jacobian determinant `∂x X ∂y Y − ∂y X ∂x Y`, i.e. `{X, Y}`.
    pub fn jacobian_determinant(&self) -> FormalSeries {
        self.x
            .poisson(&self.y)
            .expect("components share a context")
    }

    /// Orders through which the components are determined by a
    /// Hamiltonian known through `order`: the x-component loses the weight
    /// of `y` and the y-component the weight of `x`.
    pub fn paired_orders(grading: Grading, order: u32) -> (u32, u32) {
        (
            order.saturating_sub(grading.l0),
            order.saturating_sub(grading.k0),
        )
    }

    /// Agreement in the paired sense of [`MapSeriesPair::paired_orders`].
    pub fn agrees_paired(&self, other: &MapSeriesPair, order: u32) -> Result<bool> {
        let (ox, oy) = Self::paired_orders(self.grading(), order);
        Ok(self.x.equal_to_order(&other.x, ox)? && self.y.equal_to_order(&other.y, oy)?)
    }

    /// Coefficients of `x` and `y` at `ε = 0`.
    pub fn linear_part(&self) -> LinearMap {
        LinearMap {
            a: self.x.coefficient(&Monomial::X),
            b: self.x.coefficient(&Monomial::Y),
            c: self.y.coefficient(&Monomial::X),
            d: self.y.coefficient(&Monomial::Y),
        }
    }

    /// True when both components vanish at `x = y = ε = 0`.
    pub fn fixes_origin(&self) -> bool {
        self.x.coefficient(&Monomial::ONE).is_zero() && self.y.coefficient(&Monomial::ONE).is_zero()
    }
}

impl fmt::Display for MapSeriesPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `f(inner.x, inner.y, ε)`, truncated at the common order.
pub fn substitute(f: &FormalSeries, inner: &MapSeriesPair) -> Result<FormalSeries> {
    if !f.same_context(&inner.x) {
        return Err(Error::incompatible(f.context(), inner.x.context()));
    }
    for comp in [&inner.x, &inner.y] {
        let c = comp.coefficient(&Monomial::ONE);
        if !c.is_zero() {
            return Err(Error::CompositionDomain(rational::format(&c)));
        }
    }
    let (grading, order) = f.context();

    // f = Σ_l y^l Σ_k x^k c_kl(ε), evaluated as Σ_l Y^l (Σ_k X^k c_kl(ε)).
    let mut groups: BTreeMap<u32, BTreeMap<u32, Vec<(u32, Rational)>>> = BTreeMap::new();
    for (m, c) in f.terms() {
        groups
            .entry(m.l)
            .or_default()
            .entry(m.k)
            .or_default()
            .push((m.m, c.clone()));
    }
    let kmax = f.terms().map(|(m, _)| m.k).max().unwrap_or(0) as usize;
    let lmax = f.terms().map(|(m, _)| m.l).max().unwrap_or(0) as usize;
    let powers = |base: &FormalSeries, n: usize| {
        let mut out = vec![FormalSeries::one(grading, order)];
        for i in 1..=n {
            let next = &out[i - 1] * base;
            out.push(next);
        }
        out
    };
    let px = powers(&inner.x, kmax);
    let py = powers(&inner.y, lmax);

    let mut result = FormalSeries::zero(grading, order);
    for (l, ks) in groups {
        let mut inner_sum = FormalSeries::zero(grading, order);
        for (k, eps_terms) in ks {
            let eps_poly = FormalSeries::from_terms(
                grading,
                order,
                eps_terms.into_iter().map(|(m, c)| (Monomial::new(0, 0, m), c)),
            );
            inner_sum = &inner_sum + &(&px[k as usize] * &eps_poly);
        }
        let term = if l == 0 {
            inner_sum
        } else {
            &py[l as usize] * &inner_sum
        };
        result = &result + &term;
    }
    Ok(result)
}

/// The linear map `(x, y) ↦ (a x + b y, c x + d y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl LinearMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        LinearMap { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        LinearMap::new(rational::int(a), rational::int(b), rational::int(c), rational::int(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn scalar(s: Rational) -> Self {
        LinearMap::new(s.clone(), Rational::zero(), Rational::zero(), s)
    }

    /// `(x, y) ↦ (s x, y / s)`.
    pub fn scaling(s: &Rational) -> Self {
        LinearMap::new(s.clone(), Rational::zero(), Rational::zero(), s.recip())
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Matrix product `self · other`, i.e. the map `self ∘ other`.
    pub fn then_apply(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(LinearMap {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        })
    }

    pub fn as_pair(&self, grading: Grading, order: u32) -> MapSeriesPair {
        let comp = |p: &Rational, q: &Rational| {
            FormalSeries::from_terms(
                grading,
                order,
                [(Monomial::X, p.clone()), (Monomial::Y, q.clone())],
            )
        };
        MapSeriesPair {
            x: comp(&self.a, &self.b),
            y: comp(&self.c, &self.d),
        }
    }

    /// `T⁻¹ ∘ F ∘ T`.
    pub fn conjugate(&self, f: &MapSeriesPair) -> Result<MapSeriesPair> {
        let inv = self
            .inverse()
            .ok_or_else(|| Error::Parameter("singular linear map".into()))?;
        let (g, n) = (f.grading(), f.order());
        inv.as_pair(g, n).compose(&f.compose(&self.as_pair(g, n))?)
    }

    /// Whether substituting this map keeps every monomial at or above its
    /// weight, so truncated series stay exact.
    pub fn preserves_filtration(&self, grading: Grading) -> bool {
        let inv = match self.inverse() {
            Some(i) => i,
            None => return false,
        };
        [self, &inv].iter().all(|t| {
            (t.b.is_zero() || grading.l0 >= grading.k0) && (t.c.is_zero() || grading.k0 >= grading.l0)
        })
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            rational::format(&self.a),
            rational::format(&self.b),
            rational::format(&self.c),
            rational::format(&self.d)
        )
    }
}

impl Default for LinearMap {
    fn default() -> Self {
        Self::identity()
    }
}
