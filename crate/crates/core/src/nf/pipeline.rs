use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::cubic::{normalize_cubic, normalize_cubic_reversing};
use super::diag::unique_nf_diag;
use super::potential::{detect_leading_power, to_potential_form, unique_nf_potential};
use super::{GeneratorLog, LogStep, Strategy};
use crate::birkhoff::{oddify_diag_minus, oddify_nondiag, reversing_oddify};
use crate::error::{Error, Result, StageExt};
use crate::interp::{check_area_preserving, classify_linear_part, interpolate, interpolate_diag, CaseTag};
use crate::rational::Rational;
use crate::series::{substitute, FormalSeries, MapSeriesPair, Monomial};

type Table = BTreeMap<(u32, u32), Rational>;

/// Formal invariants read off a normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantTables {
    /// `u_{km}` of `U = Σ u_{km} x^k εᵐ` (potential cases).
    pub potential: Table,
    /// Cubic coefficient `a` (diagonal cases).
    pub a: Option<Rational>,
    /// `a_{km}` of `A(x, ε)`.
    pub a_table: Table,
    /// `b_{km}` of `B(xy², ε)`.
    pub b_table: Table,
    /// Leading power and coefficient of `U`.
    pub n: Option<u32>,
    pub b: Option<Rational>,
}

impl InvariantTables {
    fn potential_from(h: &FormalSeries) -> Table {
        h.terms()
            .filter(|(m, _)| m.l == 0)
            .map(|(m, c)| ((m.k, m.m), c.clone()))
            .collect()
    }

    fn diag_from(h: &FormalSeries, a: Rational) -> Self {
        let mut out = InvariantTables {
            a: Some(a),
            ..Default::default()
        };
        for (m, c) in h.terms() {
            if m.l == 0 && *m != Monomial::new(3, 0, 0) {
                out.a_table.insert((m.k, m.m), c.clone());
            } else if m.l == 2 * m.k + 1 {
                out.b_table.insert((m.k, m.m), c.clone());
            }
        }
        out
    }

    /// Describes the first entry in which the tables differ.
    pub fn first_difference(&self, other: &InvariantTables) -> Option<String> {
        if self.n != other.n {
            return Some("n".into());
        }
        if self.b != other.b {
            return Some("b".into());
        }
        if self.a != other.a {
            return Some("a".into());
        }
        let tables = [
            ("u", &self.potential, &other.potential),
            ("A", &self.a_table, &other.a_table),
            ("B", &self.b_table, &other.b_table),
        ];
        for (name, left, right) in tables {
            let mut keys: Vec<_> = left.keys().chain(right.keys()).copied().collect();
            keys.sort();
            keys.dedup();
            if let Some((k, m)) = keys.into_iter().find(|key| left.get(key) != right.get(key)) {
                return Some(format!("{name}({k},{m})"));
            }
        }
        None
    }
}

/// Normal form of a map family together with its invariants and the
/// changes of variables that produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormResult {
    pub case: CaseTag,
    pub h_normal: FormalSeries,
    pub invariants: InvariantTables,
    pub unique: bool,
    pub log: GeneratorLog,
}

impl NormalFormResult {
    /// Replays the log on `f`; the outcome should be the time-one map of
    /// `h_normal` through the paired orders.
    pub fn replay_matches(&self, f: &MapSeriesPair) -> Result<bool> {
        let mut replayed = self.log.replay(f)?;
        let g = self.h_normal.grading();
        if replayed.grading() != g {
            replayed = replayed.regrade(g);
        }
        let n = replayed.order().min(self.h_normal.order());
        let phi = crate::lie::time_one_map(&crate::lie::Generator::new(self.h_normal.truncate(n))?)?;
        phi.agrees_paired(&replayed.truncate(n), n)
    }
}

/// [`normalize_with`] with automatic case detection and the recurrence
/// solvers.
pub fn normalize(f: &MapSeriesPair) -> Result<NormalFormResult> {
    normalize_with(f, None, Strategy::Recurrence)
}

/// Full pipeline: classification, parity normalization, interpolation and
/// reduction of the Hamiltonian to its normal form.
pub fn normalize_with(f: &MapSeriesPair, requested: Option<CaseTag>, strategy: Strategy) -> Result<NormalFormResult> {
    let family = classify_linear_part(f).stage("classify")?;
    if let Some(req) = requested {
        if req != family.case {
            return Err(Error::CaseMismatch {
                requested: req.to_string(),
                detected: family.case.to_string(),
            });
        }
    }
    let case = family.case;
    check_area_preserving(&family.pair, case.det_sign()).stage("area")?;
    let mut log = family.provenance.clone();

    match case {
        CaseTag::JordanPlus | CaseTag::JordanMinus => {
            let pair = if case == CaseTag::JordanMinus {
                let (odd, l) = oddify_nondiag(&family).stage("birkhoff")?;
                log.extend(l);
                log.push(LogStep::Central);
                odd.pair.negate()
            } else {
                family.pair
            };
            let h = interpolate(&pair).stage("interpolate")?;
            let (hp, l) = to_potential_form(&h, strategy).stage("potential")?;
            log.extend(l);
            let (h_normal, leading, unique) = if case == CaseTag::JordanPlus {
                let unf = unique_nf_potential(&hp, strategy).stage("unique")?;
                log.extend(unf.log);
                let unique = unf.leading.is_some();
                (unf.h, unf.leading, unique)
            } else {
                let leading = detect_leading_power(&hp);
                (hp, leading, true)
            };
            let invariants = InvariantTables {
                potential: InvariantTables::potential_from(&h_normal),
                n: leading.as_ref().map(|l| l.0),
                b: leading.map(|l| l.1),
                ..Default::default()
            };
            Ok(NormalFormResult {
                case,
                h_normal,
                invariants,
                unique,
                log,
            })
        }
        CaseTag::DiagPlus | CaseTag::DiagMinus | CaseTag::Reversing => {
            let pair = match case {
                CaseTag::DiagMinus => {
                    let (odd, l) = oddify_diag_minus(&family).stage("birkhoff")?;
                    log.extend(l);
                    log.push(LogStep::Central);
                    odd.pair.negate()
                }
                CaseTag::Reversing => {
                    let (pat, l) = reversing_oddify(&family).stage("birkhoff")?;
                    log.extend(l);
                    log.push(LogStep::AxisReflect);
                    pat.pair.flip_x()
                }
                _ => family.pair,
            };
            let h = interpolate_diag(&pair).stage("interpolate")?.drop_pure_eps();
            let h3 = h.qh_project(3).drop_pure_eps();
            let (a, t) = if case == CaseTag::Reversing {
                normalize_cubic_reversing(&h3)
            } else {
                normalize_cubic(&h3)
            }
            .stage("cubic")?;
            let h = if t.is_identity() {
                h
            } else {
                log.push(LogStep::Linear(t.clone()));
                substitute(&h, &t.as_pair(h.grading(), h.order()))?
            };
            let dnf = unique_nf_diag(&h, strategy).stage("diag")?;
            log.extend(dnf.log);
            let unique = case == CaseTag::Reversing || !a.is_negative();
            debug_assert!(dnf.a == a || a.is_zero() && dnf.a.is_zero());
            Ok(NormalFormResult {
                case,
                invariants: InvariantTables::diag_from(&dnf.h, a),
                h_normal: dnf.h,
                unique,
                log,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{self, Generator};
    use crate::rational::{frac, int};
    use crate::series::Grading;

    const ND: Grading = Grading::NONDIAG;
    const D: Grading = Grading::DIAG;

    fn s(g: Grading, n: u32, t: &[(u32, u32, u32, i64, i64)]) -> FormalSeries {
        FormalSeries::from_ints(g, n, t)
    }

    fn flow(g: Grading, n: u32, h: &[(u32, u32, u32, i64, i64)]) -> MapSeriesPair {
        lie::time_one_map(&Generator::new(s(g, n, h)).unwrap()).unwrap()
    }

    #[test]
    fn shear() {
        let f = flow(ND, 12, &[(0, 2, 0, 1, 2)]);
        let r = normalize(&f).unwrap();
        assert_eq!(r.case, CaseTag::JordanPlus);
        assert_eq!(r.h_normal, s(ND, 12, &[(0, 2, 0, 1, 2)]));
        assert!(r.invariants.potential.is_empty());
        assert!(!r.unique);
        assert!(r.replay_matches(&f).unwrap());
    }

    #[test]
    fn cubic_potential() {
        let f = flow(ND, 16, &[(0, 2, 0, 1, 2), (3, 0, 0, -1, 3)]);
        let r = normalize(&f).unwrap();
        assert_eq!(r.invariants.n, Some(3));
        assert_eq!(r.invariants.b, Some(frac(-1, 3)));
        assert!(r.unique);
        assert!(r.replay_matches(&f).unwrap());
    }

    #[test]
    fn jordan_minus_shear() {
        let f = MapSeriesPair::new(s(ND, 12, &[(1, 0, 0, -1, 1), (0, 1, 0, -1, 1)]), s(ND, 12, &[(0, 1, 0, -1, 1)])).unwrap();
        let r = normalize(&f).unwrap();
        assert_eq!(r.case, CaseTag::JordanMinus);
        assert_eq!(r.h_normal, s(ND, 12, &[(0, 2, 0, 1, 2)]));
        assert!(r.replay_matches(&f).unwrap());
    }

    #[test]
    fn diag_plus_and_reversing() {
        let f = flow(D, 8, &[(1, 2, 0, 1, 1), (3, 0, 0, 1, 1), (2, 1, 0, 1, 1), (2, 2, 0, 1, 1)]);
        let r = normalize(&f).unwrap();
        assert_eq!(r.case, CaseTag::DiagPlus);
        assert!(r.h_normal.coeff(2, 1, 0).is_zero());
        assert!(r.replay_matches(&f).unwrap());

        let f = flow(D, 8, &[(1, 2, 0, 1, 1), (3, 0, 0, 1, 1)]).flip_x();
        let r = normalize(&f).unwrap();
        assert_eq!(r.case, CaseTag::Reversing);
        assert_eq!(r.invariants.a, Some(int(1)));
        assert!(r.invariants.a_table.is_empty() && r.invariants.b_table.is_empty());
        assert!(r.unique);
        assert!(r.replay_matches(&f).unwrap());

        let bare = MapSeriesPair::new(s(D, 8, &[(1, 0, 0, -1, 1)]), s(D, 8, &[(0, 1, 0, 1, 1)])).unwrap();
        assert!(matches!(normalize(&bare).unwrap_err().root(), Error::DegenerateLeadingOrder(_)));
    }

    #[test]
    fn diag_minus_has_no_cubic() {
        let f = flow(D, 8, &[(2, 2, 0, 1, 1), (4, 0, 0, 1, 1)]).negate();
        assert!(matches!(normalize(&f).unwrap_err().root(), Error::DegenerateCubic(_)));
    }

    #[test]
    fn requested_case_must_match() {
        let f = flow(ND, 12, &[(0, 2, 0, 1, 2)]);
        let err = normalize_with(&f, Some(CaseTag::DiagPlus), Strategy::Recurrence).unwrap_err();
        assert!(matches!(err, Error::CaseMismatch { .. }));
    }
}
