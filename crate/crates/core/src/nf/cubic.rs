//! Linear normalization of the cubic leading part in the diagonal case.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::series::{substitute, FormalSeries, Grading, LinearMap, Monomial};

/// `h3 ∘ T` for a cubic `h3`.
fn transform(h3: &FormalSeries, t: &LinearMap) -> Result<FormalSeries> {
    substitute(h3, &t.as_pair(h3.grading(), h3.order()))
}

/// `[c0, c1, c2, c3]` with `h3 = c0 x³ + c1 x²y + c2 xy² + c3 y³`.
fn coefficients(h3: &FormalSeries) -> [Rational; 4] {
    [h3.coeff(3, 0, 0), h3.coeff(2, 1, 0), h3.coeff(1, 2, 0), h3.coeff(0, 3, 0)]
}

/// Rational roots of `c0 α³ + c1 α² + c2 α + c3`, sorted by `|α|` then
/// sign (positive first).
fn rational_roots(c: &[Rational; 4]) -> Vec<Rational> {
    let lcm = c.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = c.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect();
    // Strip the factor α^z for roots at zero.
    let mut roots = Vec::new();
    let mut top = 3;
    while top > 0 && ints[top].is_zero() {
        roots.push(Rational::zero());
        top -= 1;
    }
    let lead = ints.iter().take(top + 1).find(|v| !v.is_zero()).cloned();
    if let Some(lead) = lead {
        let first = ints.iter().position(|v| !v.is_zero()).unwrap();
        if first < top {
            for p in rational::divisors(&ints[top].abs()) {
                for q in rational::divisors(&lead.abs()) {
                    for sign in [1, -1] {
                        let cand = Rational::new(&p * sign, q.clone());
                        let value = c
                            .iter()
                            .fold(Rational::zero(), |acc, ci| acc * &cand + ci);
                        if value.is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
    }
    roots.sort_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
    roots.dedup();
    roots
}

/// Brings `h3` to `x Q(x, y)` with `Q = d0 x² + d2 y²` and `d2 = 1`,
/// starting from a map `t1` after which `x` divides the cubic.
fn finish(h3: &FormalSeries, t1: LinearMap) -> Result<Option<(Rational, LinearMap)>> {
    let moved = transform(h3, &t1)?;
    let [d0, d1, d2, d3] = coefficients(&moved);
    debug_assert!(d3.is_zero());
    if d2.is_zero() {
        return Ok(None);
    }
    let c = -&d1 / (&d2 * rational::int(2));
    let shear = LinearMap::new(Rational::one(), Rational::zero(), c.clone(), Rational::one());
    let d0 = &d0 + &d1 * &c + &d2 * &c * &c;
    let t = t1.then_apply(&shear).then_apply(&LinearMap::scaling(&d2));
    let a = d0 * rational::pow(&d2, 3);
    Ok(Some((a, t)))
}

/// Finds a unit-determinant rational `T` with `h3 ∘ T = a x³ + xy²`.
/// Candidates are tried in the order identity, shears `(x + αy, y)` with
/// the smallest `|α|` first, then the swap `(y, −x)`.
pub fn normalize_cubic(h3: &FormalSeries) -> Result<(Rational, LinearMap)> {
    let c = coefficients(h3);
    if c.iter().all(|v| v.is_zero()) {
        return Err(Error::DegenerateCubic("the cubic part vanishes".into()));
    }
    let mut candidates = Vec::new();
    for alpha in rational_roots(&c) {
        if alpha.is_zero() {
            candidates.insert(0, LinearMap::identity());
        } else {
            candidates.push(LinearMap::new(Rational::one(), alpha, Rational::zero(), Rational::one()));
        }
    }
    if c[0].is_zero() {
        candidates.push(LinearMap::from_ints(0, 1, -1, 0));
    }
    if candidates.is_empty() {
        return Err(Error::IrrationalNormalization(format!(
            "the cubic {h3} has no rational linear factor"
        )));
    }
    for t1 in candidates {
        if let Some(found) = finish(h3, t1)? {
            return Ok(found);
        }
    }
    Err(Error::DegenerateCubic(format!("the cubic {h3} has no simple linear factor")))
}

/// Normalization restricted to `(x, y) ↦ (λx, y/λ)` for cubics odd in `x`.
pub fn normalize_cubic_reversing(h3: &FormalSeries) -> Result<(Rational, LinearMap)> {
    let [c0, c1, c2, c3] = coefficients(h3);
    if !c1.is_zero() || !c3.is_zero() {
        return Err(Error::Shape(format!("cubic {h3} is not odd in x")));
    }
    if c2.is_zero() {
        return Err(Error::DegenerateLeadingOrder(format!(
            "the xy^2 coefficient of the cubic {h3} vanishes"
        )));
    }
    let a = c0 * rational::pow(&c2, 3);
    Ok((a, LinearMap::scaling(&c2)))
}

/// `a x³ + xy²` in the diagonal grading.
pub fn diag_lead(a: &Rational, order: u32) -> FormalSeries {
    FormalSeries::from_terms(
        Grading::DIAG,
        order,
        [(Monomial::new(3, 0, 0), a.clone()), (Monomial::new(1, 2, 0), Rational::one())],
    )
}
