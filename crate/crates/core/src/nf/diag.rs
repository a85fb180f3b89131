//! Unique normal form `xy² + ax³ + A(x, ε) + y B(xy², ε)` in the diagonal
//! grading.

use std::collections::BTreeMap;

use num_traits::One;

use super::cubic::diag_lead;
use super::homological::{assemble_in_y, generic_homological_solve, y_coefficients, Strategy};
use super::{GeneratorLog, LogStep};
use crate::error::{Error, Result};
use crate::lie::{self, Generator};
use crate::rational::{self, Rational};
use crate::series::{FormalSeries, Grading, Monomial};

/// Monomials allowed in the diagonal normal form above the cubic.
pub fn diag_allowed(m: &Monomial) -> bool {
    m.l == 0 || m.l == 2 * m.k + 1
}

/// `y (xy²)^k εᵐ`, whose coefficients no elimination can change at first
/// order.
pub fn is_resonant(m: &Monomial) -> bool {
    m.l == 2 * m.k + 1
}

/// Generator monomials `(xy²)^k εᵐ` that the recurrence leaves free.
fn kernel_like(m: &Monomial) -> bool {
    m.k >= 1 && m.l == 2 * m.k
}

/// Outcome of [`unique_nf_diag`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagNormalForm {
    pub h: FormalSeries,
    pub log: GeneratorLog,
    pub a: Rational,
}

/// From the top power of `y` down, chooses the coefficient `ν` of each
/// `x^s y^{i−1} εᵐ` in `χ` to cancel `x^s yⁱ εᵐ` in
/// `Uᵢ + 3a(i+1)x² V_{i+1} + (i−1−2s) ν`; resonant monomials keep `ν = 0`.
fn recurrence(ht: &FormalSeries, a: &Rational) -> FormalSeries {
    let (g, order) = ht.context();
    let zero = FormalSeries::zero(g, order);
    let us = y_coefficients(ht);
    let top = us.keys().copied().max().unwrap_or(0);
    let mut vs: BTreeMap<u32, FormalSeries> = BTreeMap::new();
    for i in (1..=top).rev() {
        let mut r = us.get(&i).cloned().unwrap_or_else(|| zero.clone());
        if let Some(v) = vs.get(&(i + 1)) {
            let factor = a * rational::int(3 * (i as i64 + 1));
            r = &r + &v.shift(Monomial::new(2, 0, 0), &factor);
        }
        let terms: Vec<(Monomial, Rational)> = r
            .terms()
            .filter_map(|(m, c)| {
                let f = i as i64 - 1 - 2 * m.k as i64;
                (f != 0).then(|| (*m, -c / rational::int(f)))
            })
            .collect();
        let v = FormalSeries::from_terms(g, order, terms);
        if !v.is_zero() {
            vs.insert(i - 1, v);
        }
    }
    assemble_in_y(&vs, ht)
}

/// Reduces `h` with cubic part `a x³ + xy²` to the diagonal normal form.
pub fn unique_nf_diag(h: &FormalSeries, strategy: Strategy) -> Result<DiagNormalForm> {
    if h.grading() != Grading::DIAG {
        return Err(Error::Shape(format!("diagonal normal form needs grading {}", Grading::DIAG)));
    }
    let mut h = h.drop_pure_eps();
    let h3 = h.qh_project(3).into_series();
    let a = h3.coeff(3, 0, 0);
    if !h3.coeff(1, 2, 0).is_one() || h3 != diag_lead(&a, h.order()) {
        return Err(Error::Shape(format!("cubic part {h3} is not a*x^3 + x*y^2")));
    }
    let lead = diag_lead(&a, h.order());
    let mut log = GeneratorLog::new();
    for t in 4..=h.order() {
        let ht = h.qh_project(t).drop_pure_eps();
        if ht.terms().all(|(m, _)| diag_allowed(m)) {
            continue;
        }
        let chi = match strategy {
            Strategy::Recurrence => recurrence(&ht, &a),
            Strategy::Generic => generic_homological_solve(&lead, &ht, t - 1, &diag_allowed, &kernel_like)?
                .0
                .chi()
                .clone(),
        };
        if chi.is_zero() {
            continue;
        }
        let chi = Generator::new(chi)?;
        h = lie::exp_lie(&h, &chi)?.drop_pure_eps();
        if h.qh_project(t).terms().any(|(m, _)| !diag_allowed(m)) {
            return Err(Error::Inconsistency {
                order: t,
                detail: "non-resonant terms survive the diagonal reduction".into(),
            });
        }
        log.push(LogStep::Generator(chi));
    }
    Ok(DiagNormalForm { h, log, a })
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: Grading = Grading::DIAG;

    fn s(t: &[(u32, u32, u32, i64, i64)]) -> FormalSeries {
        FormalSeries::from_ints(D, 8, t)
    }

    #[test]
    fn normal_input_is_unchanged() {
        let h = s(&[(1, 2, 0, 1, 1), (3, 0, 0, 2, 1)]);
        let out = unique_nf_diag(&h, Strategy::Recurrence).unwrap();
        assert_eq!(out.h, h);
        assert!(out.log.is_empty());
    }

    #[test]
    fn resonant_term_is_kept() {
        let h = s(&[(1, 2, 0, 1, 1), (3, 0, 0, 1, 1), (1, 3, 0, 1, 1)]);
        let out = unique_nf_diag(&h, Strategy::Recurrence).unwrap();
        assert_eq!(out.h.coeff(1, 3, 0), rational::int(1));
        assert!(out.h.terms().all(|(m, _)| diag_allowed(m) || m.xy_degree() == 3));
    }

    #[test]
    fn strategies_agree() {
        let h = s(&[(1, 2, 0, 1, 1), (3, 0, 0, 1, 1), (2, 2, 0, 1, 1), (0, 4, 0, -1, 2), (1, 1, 1, 3, 1), (2, 3, 0, 1, 1)]);
        let rec = unique_nf_diag(&h, Strategy::Recurrence).unwrap();
        let gen = unique_nf_diag(&h, Strategy::Generic).unwrap();
        assert_eq!(rec.h, gen.h);
        assert!(rec.h.terms().all(|(m, _)| m.xy_degree() == 3 || diag_allowed(m)));
    }

    #[test]
    fn unnormalized_cubic_is_rejected() {
        let h = s(&[(1, 2, 0, 2, 1), (3, 0, 0, 1, 1)]);
        assert!(matches!(unique_nf_diag(&h, Strategy::Recurrence), Err(Error::Shape(_))));
    }
}
