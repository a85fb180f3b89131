//! Parity normalization by canonical conjugation: removes the terms that
//! break the symmetry generated by the linear part.

use crate::error::{Error, Result};
use crate::interp::{check_area_preserving, solve_hamiltonian_from_field, CaseTag, MapFamily};
use crate::lie::{self, Generator};
use crate::nf::{GeneratorLog, LogStep};
use crate::rational::{frac, Rational};
use crate::series::{MapSeriesPair, Parity};

/// Which parity component of each map component must vanish, and the
/// factors turning that component into the generating field.
struct Pattern {
    forbidden: (Parity, Parity),
    factors: (Rational, Rational),
}

/// Conjugates `f` order by order until the forbidden parity components
/// vanish through the paired orders of `f`.
fn normalize_parity(f: &MapSeriesPair, pattern: &Pattern) -> Result<(MapSeriesPair, GeneratorLog)> {
    let (grading, n) = (f.grading(), f.order());
    let mut f = f.clone();
    let mut log = GeneratorLog::new();
    for p in grading.generator_threshold()..=n {
        let (px, py) = (p - grading.l0, p - grading.k0);
        let ex = f.x.qh_project(px).parity_project(pattern.forbidden.0);
        let ey = f.y.qh_project(py).parity_project(pattern.forbidden.1);
        if ex.is_zero() && ey.is_zero() {
            continue;
        }
        let chi = solve_hamiltonian_from_field(&ex.scale(&pattern.factors.0), &ey.scale(&pattern.factors.1))
            .map_err(|e| Error::Inconsistency {
                order: p,
                detail: e.to_string(),
            })?;
        let chi = Generator::new(chi)?;
        f = lie::conjugate(&f, &chi)?;
        let left_x = f.x.qh_project(px).parity_project(pattern.forbidden.0);
        let left_y = f.y.qh_project(py).parity_project(pattern.forbidden.1);
        if !left_x.is_zero() || !left_y.is_zero() {
            return Err(Error::Inconsistency {
                order: p,
                detail: "forbidden parity terms survive the conjugation".into(),
            });
        }
        log.push(LogStep::Generator(chi));
    }
    Ok((f, log))
}

fn expect_case(family: &MapFamily, case: CaseTag) -> Result<()> {
    if family.case != case {
        return Err(Error::CaseMismatch {
            requested: case.to_string(),
            detected: family.case.to_string(),
        });
    }
    check_area_preserving(&family.pair, case.det_sign())
}

fn odd_pattern() -> Pattern {
    Pattern {
        forbidden: (Parity::EvenXy, Parity::EvenXy),
        factors: (frac(1, 2), frac(1, 2)),
    }
}

fn with_pair(family: &MapFamily, pair: MapSeriesPair) -> MapFamily {
    MapFamily {
        c_quad: pair.y.coeff(2, 0, 0),
        pair,
        ..family.clone()
    }
}

/// Makes a family with linear part `−[[1, 1], [0, 1]]` odd in `(x, y)`.
pub fn oddify_nondiag(family: &MapFamily) -> Result<(MapFamily, GeneratorLog)> {
    expect_case(family, CaseTag::JordanMinus)?;
    let (pair, log) = normalize_parity(&family.pair, &odd_pattern())?;
    Ok((with_pair(family, pair), log))
}

/// Makes a family with linear part `−I` odd in `(x, y)`.
pub fn oddify_diag_minus(family: &MapFamily) -> Result<(MapFamily, GeneratorLog)> {
    expect_case(family, CaseTag::DiagMinus)?;
    let (pair, log) = normalize_parity(&family.pair, &odd_pattern())?;
    Ok((with_pair(family, pair), log))
}

/// Makes a family with linear part `Diag(−1, 1)` commute with that
/// reflection: x-component odd in `x`, y-component even in `x`.
pub fn reversing_oddify(family: &MapFamily) -> Result<(MapFamily, GeneratorLog)> {
    expect_case(family, CaseTag::Reversing)?;
    let pattern = Pattern {
        forbidden: (Parity::EvenX, Parity::OddX),
        factors: (frac(1, 2), frac(-1, 2)),
    };
    let (pair, log) = normalize_parity(&family.pair, &pattern)?;
    Ok((with_pair(family, pair), log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::classify_linear_part;
    use crate::series::{FormalSeries, Grading};

    const ND: Grading = Grading::NONDIAG;
    const D: Grading = Grading::DIAG;

    fn s(g: Grading, n: u32, t: &[(u32, u32, u32, i64, i64)]) -> FormalSeries {
        FormalSeries::from_ints(g, n, t)
    }

    fn flow(g: Grading, n: u32, h: &[(u32, u32, u32, i64, i64)]) -> MapSeriesPair {
        lie::time_one_map(&Generator::new(s(g, n, h)).unwrap()).unwrap()
    }

    fn forbidden(f: &MapSeriesPair, px: Parity, py: Parity) -> bool {
        let (ox, oy) = MapSeriesPair::paired_orders(f.grading(), f.order());
        !f.x.truncate(ox).parity_project(px).is_zero() || !f.y.truncate(oy).parity_project(py).is_zero()
    }

    #[test]
    fn odd_input_is_unchanged() {
        let f = MapSeriesPair::new(s(ND, 12, &[(1, 0, 0, -1, 1), (0, 1, 0, -1, 1)]), s(ND, 12, &[(0, 1, 0, -1, 1)])).unwrap();
        let fam = classify_linear_part(&f).unwrap();
        let (out, log) = oddify_nondiag(&fam).unwrap();
        assert!(log.is_empty());
        assert_eq!(out.pair, f);
    }

    #[test]
    fn removes_even_terms_in_jordan_case() {
        // −Φ¹ of a Hamiltonian with an odd part, conjugated by an even-making χ.
        let base = flow(ND, 14, &[(0, 2, 0, 1, 2), (4, 0, 0, 1, 1), (3, 0, 0, 1, 1), (1, 1, 1, 2, 1)]).negate();
        let chi = Generator::new(s(ND, 14, &[(3, 0, 0, 1, 2), (2, 1, 0, -1, 1)])).unwrap();
        let f = lie::conjugate(&base, &chi).unwrap();
        let fam = classify_linear_part(&f).unwrap();
        assert_eq!(fam.case, CaseTag::JordanMinus);
        let (out, log) = oddify_nondiag(&fam).unwrap();
        assert!(!log.is_empty());
        assert!(!forbidden(&out.pair, Parity::EvenXy, Parity::EvenXy));
        assert!(check_area_preserving(&out.pair, 1).is_ok());
        assert_eq!(log.replay(&fam.pair).unwrap(), out.pair);
    }

    #[test]
    fn diag_minus_and_reversing() {
        let minus = flow(D, 8, &[(3, 0, 0, 1, 1), (1, 2, 0, 1, 1), (2, 0, 1, 1, 1)]).negate();
        let fam = classify_linear_part(&minus).unwrap();
        assert_eq!(fam.case, CaseTag::DiagMinus);
        let (out, _) = oddify_diag_minus(&fam).unwrap();
        assert!(!forbidden(&out.pair, Parity::EvenXy, Parity::EvenXy));

        let rev = flow(D, 8, &[(3, 0, 0, 1, 1), (1, 2, 0, 1, 1), (0, 3, 0, 2, 1), (0, 1, 1, 1, 1)]).flip_x();
        let fam = classify_linear_part(&rev).unwrap();
        assert_eq!(fam.case, CaseTag::Reversing);
        let (out, log) = reversing_oddify(&fam).unwrap();
        assert!(!log.is_empty());
        assert!(!forbidden(&out.pair, Parity::EvenX, Parity::OddX));
        assert!(check_area_preserving(&out.pair, -1).is_ok());

        let patterned = flow(D, 8, &[(3, 0, 0, 1, 1), (1, 2, 0, 1, 1)]).flip_x();
        let fam = classify_linear_part(&patterned).unwrap();
        let (out, log) = reversing_oddify(&fam).unwrap();
        assert!(log.is_empty());
        assert_eq!(out.pair, patterned);
    }
}
