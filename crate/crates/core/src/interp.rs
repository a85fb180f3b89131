//! Classification of the linear part, area-preservation checks and formal
//! interpolation of a map family by the time-one flow of a Hamiltonian.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::{self, Generator};
use crate::nf::{GeneratorLog, LogStep};
use crate::rational::{self, Rational};
use crate::series::{divergence, FormalSeries, Grading, LinearMap, MapSeriesPair, Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Linear part `[[1, 1], [0, 1]]`.
    JordanPlus,
    /// Linear part `[[−1, −1], [0, −1]]`.
    JordanMinus,
    /// Linear part `I`.
    DiagPlus,
    /// Linear part `−I`.
    DiagMinus,
    /// Linear part `Diag(−1, 1)`, orientation reversing.
    Reversing,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [
        CaseTag::JordanPlus,
        CaseTag::JordanMinus,
        CaseTag::DiagPlus,
        CaseTag::DiagMinus,
        CaseTag::Reversing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::JordanPlus => "jordan+",
            CaseTag::JordanMinus => "jordan-",
            CaseTag::DiagPlus => "diag+",
            CaseTag::DiagMinus => "diag-",
            CaseTag::Reversing => "reversing",
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Expected Jacobian determinant.
    pub fn det_sign(self) -> i32 {
        if self == CaseTag::Reversing {
            -1
        } else {
            1
        }
    }

    /// Grading the pipeline for this case works in.
    pub fn grading(self) -> Grading {
        match self {
            CaseTag::JordanPlus | CaseTag::JordanMinus => Grading::NONDIAG,
            _ => Grading::DIAG,
        }
    }

    pub fn standard_linear_part(self) -> LinearMap {
        match self {
            CaseTag::JordanPlus => LinearMap::from_ints(1, 1, 0, 1),
            CaseTag::JordanMinus => LinearMap::from_ints(-1, -1, 0, -1),
            CaseTag::DiagPlus => LinearMap::from_ints(1, 0, 0, 1),
            CaseTag::DiagMinus => LinearMap::from_ints(-1, 0, 0, -1),
            CaseTag::Reversing => LinearMap::from_ints(-1, 0, 0, 1),
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A map family brought to the standard linear part of its case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFamily {
    pub pair: MapSeriesPair,
    pub case: CaseTag,
    /// Coefficient of `x²` in the y-component.
    pub c_quad: Rational,
    /// Linear changes applied to reach the standard linear part.
    pub provenance: GeneratorLog,
    /// Linear part of the input, before normalization.
    pub input_linear: LinearMap,
}

/// Detects the case of `f` and conjugates it to the standard linear part,
/// regrading to the case's working grading.
pub fn classify_linear_part(f: &MapSeriesPair) -> Result<MapFamily> {
    if !f.fixes_origin() {
        return Err(Error::UnsupportedLinearPart(
            "the origin is not a fixed point at eps = 0".into(),
        ));
    }
    let l = f.linear_part();
    let (det, tr) = (l.det(), l.trace());
    let two = rational::int(2);
    let (case, steps) = if det.is_one() && tr == two {
        if l.is_identity() {
            (CaseTag::DiagPlus, Vec::new())
        } else {
            (CaseTag::JordanPlus, jordan_steps(&l, &Rational::one())?)
        }
    } else if det.is_one() && tr == -two {
        if l == LinearMap::scalar(-Rational::one()) {
            (CaseTag::DiagMinus, Vec::new())
        } else {
            (CaseTag::JordanMinus, jordan_steps(&l, &-Rational::one())?)
        }
    } else if det == -Rational::one() && tr.is_zero() {
        (CaseTag::Reversing, reversing_steps(&l))
    } else {
        return Err(Error::UnsupportedLinearPart(format!(
            "multipliers are not +-1 (linear part {l}, det {}, trace {})",
            rational::format(&det),
            rational::format(&tr)
        )));
    };
    let mut pair = f.clone();
    for step in &steps {
        pair = step.apply(&pair)?;
    }
    if pair.grading() != case.grading() {
        pair = pair.regrade(case.grading());
    }
    debug_assert_eq!(pair.linear_part(), case.standard_linear_part());
    Ok(MapFamily {
        c_quad: pair.y.coeff(2, 0, 0),
        pair,
        case,
        provenance: steps.into(),
        input_linear: l,
    })
}

/// Conjugations taking `μ (I + N)` to `μ [[1, 1], [0, 1]]`.
fn jordan_steps(l: &LinearMap, mu: &Rational) -> Result<Vec<LogStep>> {
    let n = LinearMap::new(
        &l.a / mu - Rational::one(),
        &l.b / mu,
        &l.c / mu,
        &l.d / mu - Rational::one(),
    );
    let unsupported = || {
        Error::UnsupportedLinearPart(format!(
            "Jordan block {l} is not conjugate to the standard block by a rational unimodular map"
        ))
    };
    if n.c.is_zero() {
        let q = n.b;
        if q.is_one() {
            return Ok(Vec::new());
        }
        if q == -Rational::one() {
            return Ok(vec![LogStep::Reflect]);
        }
        if let Some(s) = rational::sqrt_exact(&q) {
            return Ok(vec![LogStep::Linear(LinearMap::scaling(&s))]);
        }
        if let Some(s) = rational::sqrt_exact(&-&q) {
            return Ok(vec![LogStep::Reflect, LogStep::Linear(LinearMap::scaling(&s))]);
        }
        return Err(unsupported());
    }
    // Columns N e1 and e1 bring N to [[0, 1], [0, 0]] up to scale.
    let r = n.c.clone();
    let t0 = LinearMap::new(n.a.clone(), Rational::one(), r.clone(), Rational::zero());
    if let Some(alpha) = rational::sqrt_exact(&(-r.recip())) {
        return Ok(vec![LogStep::Linear(t0.then_apply(&LinearMap::scalar(alpha)))]);
    }
    if let Some(alpha) = rational::sqrt_exact(&r.recip()) {
        let d = LinearMap::new(alpha.clone(), Rational::zero(), Rational::zero(), -alpha);
        return Ok(vec![LogStep::Linear(t0.then_apply(&d)), LogStep::Reflect]);
    }
    Err(unsupported())
}

/// Eigenvector similarity taking a reversing linear part to `Diag(−1, 1)`.
fn reversing_steps(l: &LinearMap) -> Vec<LogStep> {
    if *l == CaseTag::Reversing.standard_linear_part() {
        return Vec::new();
    }
    let kernel = |m: LinearMap| {
        if !m.a.is_zero() || !m.b.is_zero() {
            (-m.b, m.a)
        } else {
            (-m.d, m.c)
        }
    };
    let one = Rational::one();
    let minus = kernel(LinearMap::new(&l.a + &one, l.b.clone(), l.c.clone(), &l.d + &one));
    let plus = kernel(LinearMap::new(&l.a - &one, l.b.clone(), l.c.clone(), &l.d - &one));
    let det = &minus.0 * &plus.1 - &minus.1 * &plus.0;
    let beta = det.recip();
    vec![LogStep::Linear(LinearMap::new(
        minus.0,
        &plus.0 * &beta,
        minus.1,
        &plus.1 * &beta,
    ))]
}

/// Highest weight through which the Jacobian determinant of a map known
/// through its order is exact.
pub fn determinant_horizon(grading: Grading, order: u32) -> u32 {
    order.saturating_sub(grading.k0.max(grading.l0))
}

/// Compares `det DF` with `expected` through [`determinant_horizon`] and
/// reports the first offending monomial.
pub fn check_area_preserving(f: &MapSeriesPair, expected: i32) -> Result<()> {
    let (g, n) = (f.grading(), f.order());
    let horizon = determinant_horizon(g, n);
    let det = f.jacobian_determinant().truncate(horizon);
    let target = FormalSeries::constant(g, horizon, rational::int(expected as i64));
    match det.first_difference(&target) {
        None => Ok(()),
        Some((monomial, got, _)) => Err(Error::NotAreaPreserving {
            expected,
            monomial,
            coefficient: rational::format(&(got - target.coefficient(&monomial))),
        }),
    }
}

/// The Hamiltonian `h` with `∂y h = f` and `−∂x h = g`, free of pure-`ε`
/// terms.
pub fn solve_hamiltonian_from_field(f: &FormalSeries, g: &FormalSeries) -> Result<FormalSeries> {
    let div = divergence(f, g)?;
    if let Some((m, c)) = div.terms().next() {
        return Err(Error::UnsolvableField {
            k: m.k + 1,
            l: m.l + 1,
            m: m.m,
            value: rational::format(c),
        });
    }
    let (grading, order) = f.context();
    let mut terms = Vec::new();
    for (m, a) in f.terms() {
        terms.push((Monomial::new(m.k, m.l + 1, m.m), a / Rational::from_integer((m.l + 1).into())));
    }
    for (m, b) in g.terms().filter(|(m, _)| m.l == 0) {
        terms.push((Monomial::new(m.k + 1, 0, m.m), -b / Rational::from_integer((m.k + 1).into())));
    }
    Ok(FormalSeries::from_terms(grading, order, terms))
}

/// Interpolates `f` by the time-one map of a Hamiltonian in the grading of
/// `f`. Requires `f − id` to start at the orders a generator produces: in
/// the Jordan grading the linear part is `[[1, β], [0, 1]]`, in the diagonal
/// grading it is `I`.
pub fn interpolate(f: &MapSeriesPair) -> Result<FormalSeries> {
    let (grading, n) = (f.grading(), f.order());
    let threshold = grading.generator_threshold();
    let id = MapSeriesPair::identity(grading, n);
    let dx = f.x.try_sub(&id.x)?;
    let dy = f.y.try_sub(&id.y)?;
    let low = |s: &FormalSeries, bound: u32| s.lowest_weight().is_some_and(|w| w < bound);
    if low(&dx, threshold - grading.l0) || low(&dy, threshold - grading.k0) {
        return Err(Error::UnsupportedLinearPart(format!(
            "linear part {} is not the time-one map of a Hamiltonian in grading {grading}",
            f.linear_part()
        )));
    }
    check_area_preserving(f, 1)?;

    let mut h = FormalSeries::zero(grading, n);
    for w in threshold..=n {
        let chi = Generator::new(h.truncate(w))?;
        let phi = lie::time_one_map(&chi)?;
        let rx = f.x.truncate(w).try_sub(&phi.x)?.qh_project(w - grading.l0).into_series();
        let ry = f.y.truncate(w).try_sub(&phi.y)?.qh_project(w - grading.k0).into_series();
        let hw = solve_hamiltonian_from_field(&rx, &ry).map_err(|e| Error::Inconsistency {
            order: w,
            detail: e.to_string(),
        })?;
        h = h.try_add(&hw.with_order(n))?;
    }

    let phi = lie::time_one_map(&Generator::new(h.clone())?)?;
    if !phi.agrees_paired(f, n)? {
        return Err(Error::Inconsistency {
            order: n,
            detail: "time-one map of the interpolating Hamiltonian differs from the input".into(),
        });
    }
    Ok(h)
}

/// Interpolation in the Jordan grading.
pub fn interpolate_nondiag(family: &MapFamily) -> Result<FormalSeries> {
    if family.case != CaseTag::JordanPlus {
        return Err(Error::CaseMismatch {
            requested: CaseTag::JordanPlus.to_string(),
            detected: family.case.to_string(),
        });
    }
    interpolate(&family.pair)
}

/// Interpolation of a map with identity linear part in the diagonal grading.
pub fn interpolate_diag(f: &MapSeriesPair) -> Result<FormalSeries> {
    if f.grading() != Grading::DIAG {
        return Err(Error::Parameter(format!(
            "diagonal interpolation needs grading {}, got {}",
            Grading::DIAG,
            f.grading()
        )));
    }
    interpolate(f)
}
