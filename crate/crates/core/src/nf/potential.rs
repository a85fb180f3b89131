//! Reduction of a Jordan-case Hamiltonian to the potential form
//! `y²/2 + U(x, ε)` and to its unique normal form.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::homological::{assemble_in_y, generic_homological_solve, integrate_x, y_coefficients, Strategy};
use super::{GeneratorLog, LogStep};
use crate::error::{Error, Result};
use crate::lie::{self, Generator};
use crate::rational::{frac, Rational};
use crate::series::{FormalSeries, Grading, Monomial};

/// Outcome of [`unique_nf_potential`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialNormalForm {
    pub h: FormalSeries,
    pub log: GeneratorLog,
    /// Leading power `n` and coefficient `b` of `U`, if found within the
    /// truncation.
    pub leading: Option<(u32, Rational)>,
}

/// `y²/2 + b xⁿ` in the grading of `template`.
pub fn potential_lead(template: &FormalSeries, n: u32, b: &Rational) -> FormalSeries {
    let (g, order) = template.context();
    FormalSeries::from_terms(
        g,
        order,
        [(Monomial::new(0, 2, 0), frac(1, 2)), (Monomial::new(n, 0, 0), b.clone())],
    )
}

/// Solves `V_{i−1} = ∫ (Uᵢ + n b (i+1) x^{n−1} V_{i+1}) dx` from the top
/// power of `y` down, adding `constants[j]` to `Vⱼ`. Returns `χ = Σ yʲ Vⱼ`
/// and the new y-free part `U₀ + n b x^{n−1} V₁`.
fn recurrence(
    ht: &FormalSeries,
    n: u32,
    b: &Rational,
    constants: &BTreeMap<u32, FormalSeries>,
) -> (FormalSeries, FormalSeries) {
    let (g, order) = ht.context();
    let zero = FormalSeries::zero(g, order);
    let us = y_coefficients(ht);
    let top = us
        .keys()
        .copied()
        .chain(constants.keys().map(|j| j + 1))
        .max()
        .unwrap_or(0);
    let mut vs: BTreeMap<u32, FormalSeries> = BTreeMap::new();
    let nb = b * Rational::from_integer(n.into());
    let feed = |v: Option<&FormalSeries>, i: u32| match v {
        Some(v) if !nb.is_zero() => v.shift(
            Monomial::new(n - 1, 0, 0),
            &(&nb * Rational::from_integer((i + 1).into())),
        ),
        _ => zero.clone(),
    };
    for i in (1..=top).rev() {
        let r = us.get(&i).unwrap_or(&zero) + &feed(vs.get(&(i + 1)), i);
        let mut v = integrate_x(&r);
        if let Some(c) = constants.get(&(i - 1)) {
            v = &v + c;
        }
        if !v.is_zero() {
            vs.insert(i - 1, v);
        }
    }
    let u0 = us.get(&0).unwrap_or(&zero) + &feed(vs.get(&1), 0);
    (assemble_in_y(&vs, ht), u0)
}

fn check_lead(h: &FormalSeries, n: u32) -> Result<Rational> {
    let g = h.grading();
    let w = 2 * g.l0;
    let lead = h.qh_project(w).drop_pure_eps();
    let b = lead.coeff(n, 0, 0);
    if lead != potential_lead(h, n, &b) {
        return Err(Error::Shape(format!(
            "leading part of weight {w} is {lead}, expected y^2/2 + b*x^{n}"
        )));
    }
    Ok(b)
}

fn apply(h: &FormalSeries, chi: &Generator) -> Result<FormalSeries> {
    Ok(lie::exp_lie(h, chi)?.drop_pure_eps())
}

/// Removes every y-dependent term beyond `y²/2` order by order. Requires
/// the Jordan grading and leading part `y²/2 + b x³` (`b = 0` allowed).
pub fn to_potential_form(h: &FormalSeries, strategy: Strategy) -> Result<(FormalSeries, GeneratorLog)> {
    if h.grading() != Grading::NONDIAG {
        return Err(Error::Shape(format!("potential form needs grading {}", Grading::NONDIAG)));
    }
    let h = h.drop_pure_eps();
    let b = check_lead(&h, 3)?;
    let lead = potential_lead(&h, 3, &b);
    let mut h = h;
    let mut log = GeneratorLog::new();
    for t in 7..=h.order() {
        let ht = h.qh_project(t).drop_pure_eps();
        if ht.terms().all(|(m, _)| m.l == 0) {
            continue;
        }
        let chi = match strategy {
            Strategy::Recurrence => recurrence(&ht, 3, &b, &BTreeMap::new()).0,
            Strategy::Generic => {
                generic_homological_solve(&lead, &ht, t - 1, &|m| m.l == 0, &|m| m.k == 0)?
                    .0
                    .chi()
                    .clone()
            }
        };
        let chi = Generator::new(chi)?;
        h = apply(&h, &chi)?;
        if h.qh_project(t).terms().any(|(m, _)| m.l > 0) {
            return Err(Error::Inconsistency {
                order: t,
                detail: "y-dependent terms survive the potential reduction".into(),
            });
        }
        log.push(LogStep::Generator(chi));
    }
    Ok((h, log))
}

/// Smallest `n ≥ 3` with a nonzero `xⁿ` coefficient, within the truncation.
pub fn detect_leading_power(h: &FormalSeries) -> Option<(u32, Rational)> {
    h.terms()
        .filter(|(m, _)| m.l == 0 && m.m == 0 && m.k >= 3)
        .map(|(m, c)| (m.k, c.clone()))
        .next()
}

/// Unique normal form of a potential-form Hamiltonian: in the grading
/// `(2, n, 2n)` every `x^k εᵐ` with `k ≡ −1 (mod n)` above the leading
/// order is removed. When no leading power is found the input is returned
/// unchanged.
pub fn unique_nf_potential(h: &FormalSeries, strategy: Strategy) -> Result<PotentialNormalForm> {
    let h = h.drop_pure_eps();
    if h.terms().any(|(m, _)| m.l > 0 && *m != Monomial::new(0, 2, 0)) {
        return Err(Error::Shape("input is not in potential form".into()));
    }
    let Some((n, b)) = detect_leading_power(&h) else {
        return Ok(PotentialNormalForm {
            h,
            log: GeneratorLog::new(),
            leading: None,
        });
    };
    let grading = Grading::potential(n);
    let mut h = if h.grading() == grading { h } else { h.regrade(grading) };
    check_lead(&h, n)?;
    let lead = potential_lead(&h, n, &b);
    let excluded = move |m: &Monomial| m.l == 0 && m.k % n == n - 1;
    let mut log = GeneratorLog::new();
    for t in 2 * n + 1..=h.order() {
        let ht = h.qh_project(t).drop_pure_eps();
        if ht.terms().all(|(m, _)| m.l == 0 && !excluded(m)) {
            continue;
        }
        let p = t + 2 - n;
        let chi = match strategy {
            Strategy::Recurrence => {
                let (_, u0) = recurrence(&ht, n, &b, &BTreeMap::new());
                let mut constants = BTreeMap::new();
                for (m, c) in u0.terms().filter(|(m, _)| excluded(m)) {
                    let j = 2 * ((m.k + 1) / n - 1) + 1;
                    let unit = FormalSeries::monomial(h.grading(), h.order(), Monomial::new(0, 0, m.m), Rational::from_integer(1.into()));
                    let zero = FormalSeries::zero(h.grading(), h.order());
                    let (_, response) = recurrence(&zero, n, &b, &BTreeMap::from([(j, unit.clone())]));
                    let r = response.coefficient(m);
                    constants.insert(j, unit.scale(&(-c / r)));
                }
                recurrence(&ht, n, &b, &constants).0
            }
            Strategy::Generic => {
                generic_homological_solve(&lead, &ht, p, &|m| m.l == 0 && !excluded(m), &|m| m.k == 0)?
                    .0
                    .chi()
                    .clone()
            }
        };
        let chi = Generator::new(chi)?;
        h = apply(&h, &chi)?;
        if h.qh_project(t).terms().any(|(m, _)| m.l > 0 || excluded(m)) {
            return Err(Error::Inconsistency {
                order: t,
                detail: "excluded terms survive the unique potential reduction".into(),
            });
        }
        log.push(LogStep::Generator(chi));
    }
    Ok(PotentialNormalForm {
        h,
        log,
        leading: Some((n, b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const ND: Grading = Grading::NONDIAG;

    fn s(n: u32, t: &[(u32, u32, u32, i64, i64)]) -> FormalSeries {
        FormalSeries::from_ints(ND, n, t)
    }

    fn replay_on_h(h: &FormalSeries, log: &GeneratorLog) -> FormalSeries {
        let mut h = h.clone();
        for step in log.steps() {
            let LogStep::Generator(chi) = step else { panic!() };
            if h.grading() != chi.chi().grading() {
                h = h.regrade(chi.chi().grading());
            }
            h = lie::exp_lie(&h, chi).unwrap().drop_pure_eps();
        }
        h
    }

    #[test]
    fn already_potential() {
        let h = s(16, &[(0, 2, 0, 1, 2), (3, 0, 0, 2, 1)]);
        let (out, log) = to_potential_form(&h, Strategy::Recurrence).unwrap();
        assert_eq!(out, h);
        assert!(log.is_empty());
    }

    #[test]
    fn removes_y_dependence_and_replays() {
        let h = s(16, &[(0, 2, 0, 1, 2), (3, 0, 0, 1, 1), (2, 2, 0, 1, 1)]);
        for strategy in [Strategy::Recurrence, Strategy::Generic] {
            let (out, log) = to_potential_form(&h, strategy).unwrap();
            assert!(out.terms().all(|(m, _)| m.l == 0 || *m == Monomial::new(0, 2, 0)));
            assert_eq!(replay_on_h(&h, &log), out);
        }
        let even = s(16, &[(0, 2, 0, 1, 2), (4, 0, 0, 1, 1), (2, 2, 0, 1, 1)]);
        let (out, _) = to_potential_form(&even, Strategy::Recurrence).unwrap();
        assert!(out.terms().all(|(m, _)| (m.k + m.l) % 2 == 0));
    }

    #[test]
    fn wrong_lead_is_a_shape_error() {
        let h = s(16, &[(0, 2, 0, 1, 1), (3, 0, 0, 1, 1)]);
        assert!(matches!(to_potential_form(&h, Strategy::Recurrence), Err(Error::Shape(_))));
    }

    #[test]
    fn unique_form_examples() {
        let cubic = s(16, &[(0, 2, 0, 1, 2), (3, 0, 0, 1, 1)]);
        let out = unique_nf_potential(&cubic, Strategy::Recurrence).unwrap();
        assert_eq!(out.leading, Some((3, int(1))));
        assert_eq!(out.h, cubic);

        let quintic = s(16, &[(0, 2, 0, 1, 2), (3, 0, 0, 1, 1), (5, 0, 0, 1, 1)]);
        let out = unique_nf_potential(&quintic, Strategy::Recurrence).unwrap();
        assert!(out.h.coeff(5, 0, 0).is_zero());
        assert_eq!(replay_on_h(&quintic, &out.log), out.h);
        let generic = unique_nf_potential(&quintic, Strategy::Generic).unwrap();
        assert_eq!(generic.h, out.h);

        let kept = s(16, &[(0, 2, 0, 1, 2), (3, 0, 0, 1, 1), (1, 0, 1, 1, 1)]);
        let out = unique_nf_potential(&kept, Strategy::Recurrence).unwrap();
        assert_eq!(out.h.coeff(1, 0, 1), int(1));

        let flat = s(16, &[(0, 2, 0, 1, 2)]);
        assert_eq!(unique_nf_potential(&flat, Strategy::Recurrence).unwrap().leading, None);
    }

    #[test]
    fn quartic_potential_uses_its_own_grading() {
        let h = s(18, &[(0, 2, 0, 1, 2), (4, 0, 0, 1, 1), (7, 0, 0, 2, 1), (5, 0, 0, 1, 1)]);
        let out = unique_nf_potential(&h, Strategy::Recurrence).unwrap();
        assert_eq!(out.leading, Some((4, int(1))));
        assert_eq!(out.h.grading(), Grading::potential(4));
        assert!(out.h.coeff(7, 0, 0).is_zero());
        assert_eq!(out.h, unique_nf_potential(&h, Strategy::Generic).unwrap().h);
    }
}
