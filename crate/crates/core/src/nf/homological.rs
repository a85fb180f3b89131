//! Helpers shared by the reductions, and the generic homological solver
//! that cross-checks the recurrences.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::Generator;
use crate::rational::Rational;
use crate::series::{FormalSeries, Monomial};

/// How a reduction solves its homological equation at each order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Explicit recurrences over the powers of `y`.
    #[default]
    Recurrence,
    /// Row reduction on the monomial basis.
    Generic,
}

/// Splits `h = Σ yⁱ Uᵢ(x, ε)` into its coefficients `Uᵢ`.
pub(crate) fn y_coefficients(h: &FormalSeries) -> BTreeMap<u32, FormalSeries> {
    let (g, n) = h.context();
    let mut out: BTreeMap<u32, Vec<(Monomial, Rational)>> = BTreeMap::new();
    for (m, c) in h.terms() {
        out.entry(m.l).or_default().push((Monomial::new(m.k, 0, m.m), c.clone()));
    }
    out.into_iter()
        .map(|(i, t)| (i, FormalSeries::from_terms(g, n, t)))
        .collect()
}

/// `Σ yʲ Vⱼ`.
pub(crate) fn assemble_in_y(parts: &BTreeMap<u32, FormalSeries>, template: &FormalSeries) -> FormalSeries {
    let (g, n) = template.context();
    let mut terms = Vec::new();
    for (j, v) in parts {
        for (m, c) in v.terms() {
            terms.push((Monomial::new(m.k, m.l + j, m.m), c.clone()));
        }
    }
    FormalSeries::from_terms(g, n, terms)
}

/// Antiderivative in `x` with zero constant of integration.
pub(crate) fn integrate_x(s: &FormalSeries) -> FormalSeries {
    let (g, n) = s.context();
    FormalSeries::from_terms(
        g,
        n,
        s.terms()
            .map(|(m, c)| (Monomial::new(m.k + 1, m.l, m.m), c / Rational::from_integer((m.k + 1).into()))),
    )
}

/// Solves `target + {lead, χ} = residual` with the residual supported on
/// `allowed` monomials, by exact row reduction over the weight-`p`
/// monomials (pure `ε` excluded, since `{lead, εᵐ} = 0`).
///
/// Columns matching `defer` are ordered last, so that they are the ones
/// left free and set to zero when the system is underdetermined.
pub fn generic_homological_solve(
    lead: &FormalSeries,
    target: &FormalSeries,
    p: u32,
    allowed: &dyn Fn(&Monomial) -> bool,
    defer: &dyn Fn(&Monomial) -> bool,
) -> Result<(Generator, FormalSeries)> {
    let (g, n) = lead.context();
    let mut cols: Vec<Monomial> = g
        .monomials_of_weight(p)
        .into_iter()
        .filter(|m| !m.is_pure_eps())
        .collect();
    cols.sort_by_key(|m| defer(m));
    let images: Vec<FormalSeries> = cols
        .iter()
        .map(|m| lead.poisson(&FormalSeries::monomial(g, n, *m, Rational::from_integer(1.into()))))
        .collect::<Result<_>>()?;

    let mut rows: Vec<Monomial> = images
        .iter()
        .flat_map(|s| s.terms().map(|(m, _)| *m))
        .chain(target.terms().map(|(m, _)| *m))
        .filter(|m| !allowed(m))
        .collect();
    rows.sort();
    rows.dedup();

    let width = cols.len();
    let mut matrix: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> = images.iter().map(|s| s.coefficient(r)).collect();
            row.push(-target.coefficient(r));
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..width {
        let Some(found) = (next..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(next, found);
        rows.swap(next, found);
        let inv = matrix[next][col].recip();
        for v in matrix[next].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = matrix[next].clone();
        for (r, row) in matrix.iter_mut().enumerate() {
            if r != next && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    let obstructions: Vec<Monomial> = (next..matrix.len())
        .filter(|&r| !matrix[r][width].is_zero())
        .map(|r| rows[r])
        .collect();
    if !obstructions.is_empty() {
        return Err(Error::Infeasible(obstructions));
    }

    let chi = FormalSeries::from_terms(
        g,
        n,
        pivots
            .iter()
            .enumerate()
            .map(|(r, &c)| (cols[c], matrix[r][width].clone())),
    );
    let residual = target.try_add(&lead.poisson(&chi)?)?;
    Ok((Generator::new(chi)?, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Grading;

    const ND: Grading = Grading::NONDIAG;

    fn s(t: &[(u32, u32, u32, i64, i64)]) -> FormalSeries {
        FormalSeries::from_ints(ND, 16, t)
    }

    #[test]
    fn already_allowed_target() {
        let lead = s(&[(0, 2, 0, 1, 2), (3, 0, 0, 1, 1)]);
        let target = s(&[(4, 0, 0, 2, 1)]);
        let (chi, res) = generic_homological_solve(&lead, &target, 7, &|m| m.l == 0, &|m| m.k == 0).unwrap();
        assert!(chi.is_zero());
        assert_eq!(res, target);
    }

    #[test]
    fn removes_y_dependence() {
        let lead = s(&[(0, 2, 0, 1, 2), (3, 0, 0, 1, 1)]);
        let target = s(&[(2, 2, 0, 1, 1)]);
        let (chi, res) = generic_homological_solve(&lead, &target, 9, &|m| m.l == 0, &|m| m.k == 0).unwrap();
        assert!(!chi.is_zero());
        assert!(res.terms().all(|(m, _)| m.l == 0));
    }

    #[test]
    fn reports_obstructions() {
        let lead = s(&[(0, 2, 0, 1, 2)]);
        let target = s(&[(5, 0, 0, 1, 1)]);
        let err = generic_homological_solve(&lead, &target, 9, &|_| false, &|_| false).unwrap_err();
        assert_eq!(err, Error::Infeasible(vec![Monomial::new(5, 0, 0)]));
    }

    #[test]
    fn splitting_in_y() {
        let h = s(&[(1, 2, 0, 1, 1), (3, 0, 1, 2, 1), (0, 2, 0, 1, 2)]);
        let parts = y_coefficients(&h);
        assert_eq!(parts.len(), 2);
        assert_eq!(assemble_in_y(&parts, &h), h);
        assert_eq!(integrate_x(&s(&[(2, 0, 1, 3, 1)])), s(&[(3, 0, 1, 1, 1)]));
    }
}
