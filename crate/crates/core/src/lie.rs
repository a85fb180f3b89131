//! Lie derivatives, Lie-series exponentials and time-one maps.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::{FormalSeries, Grading, MapSeriesPair};

/// A Hamiltonian generator whose Lie derivative raises the order, so that
/// its exponential is well defined on truncated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    chi: FormalSeries,
    min_weight: Option<u32>,
}

impl Generator {
    pub fn new(chi: FormalSeries) -> Result<Self> {
        let min_weight = chi.lowest_weight();
        if let Some(w) = min_weight {
            let required = chi.grading().generator_threshold();
            if w < required {
                return Err(Error::GeneratorOrder {
                    min_weight: w,
                    required,
                });
            }
        }
        Ok(Generator { chi, min_weight })
    }

    pub fn zero(grading: Grading, order: u32) -> Self {
        Generator {
            chi: FormalSeries::zero(grading, order),
            min_weight: None,
        }
    }

    pub fn chi(&self) -> &FormalSeries {
        &self.chi
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.min_weight
    }

    pub fn is_zero(&self) -> bool {
        self.chi.is_zero()
    }

    pub fn negated(&self) -> Self {
        Generator {
            chi: -&self.chi,
            min_weight: self.min_weight,
        }
    }
}

/// `L_χ g = {g, χ}`.
pub fn lie_derivative(g: &FormalSeries, chi: &Generator) -> Result<FormalSeries> {
    g.poisson(&chi.chi)
}

/// `exp(L_χ) g = Σ L_χ^k g / k!`.
pub fn exp_lie(g: &FormalSeries, chi: &Generator) -> Result<FormalSeries> {
    if !g.same_context(&chi.chi) {
        return Err(Error::incompatible(g.context(), chi.chi.context()));
    }
    let q = match g.lowest_weight() {
        Some(q) => q,
        None => return Ok(g.clone()),
    };
    if chi.is_zero() {
        return Ok(g.clone());
    }
    // Each application raises the lowest weight by at least one.
    let k_max = g.order().saturating_sub(q) + 1;
    let mut sum = g.clone();
    let mut term = g.clone();
    for k in 1..=k_max {
        term = lie_derivative(&term, chi)?.scale(&Rational::new(1.into(), k.into()));
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    Ok(sum)
}

/// `Φ¹_χ = (exp(L_χ) x, exp(L_χ) y)`.
pub fn time_one_map(chi: &Generator) -> Result<MapSeriesPair> {
    let (g, n) = chi.chi.context();
    Ok(MapSeriesPair {
        x: exp_lie(&FormalSeries::x(g, n), chi)?,
        y: exp_lie(&FormalSeries::y(g, n), chi)?,
    })
}

/// The time-one map of `-χ`.
pub fn inverse_time_one_map(chi: &Generator) -> Result<MapSeriesPair> {
    time_one_map(&chi.negated())
}

/// `g ∘ Φ¹_χ`.
pub fn pullback(g: &FormalSeries, chi: &Generator) -> Result<FormalSeries> {
    exp_lie(g, chi)
}

/// `Φ⁻¹_χ ∘ F ∘ Φ¹_χ`.
pub fn conjugate(f: &MapSeriesPair, chi: &Generator) -> Result<MapSeriesPair> {
    if chi.is_zero() {
        return Ok(f.clone());
    }
    let pulled = MapSeriesPair::new(pullback(&f.x, chi)?, pullback(&f.y, chi)?)?;
    inverse_time_one_map(chi)?.compose(&pulled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    const ND: Grading = Grading::NONDIAG;

    fn s(g: Grading, n: u32, t: &[(u32, u32, u32, i64, i64)]) -> FormalSeries {
        FormalSeries::from_ints(g, n, t)
    }

    fn gen(g: Grading, n: u32, t: &[(u32, u32, u32, i64, i64)]) -> Generator {
        Generator::new(s(g, n, t)).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let half_y2 = gen(ND, 12, &[(0, 2, 0, 1, 2)]);
        assert_eq!(lie_derivative(&FormalSeries::x(ND, 12), &half_y2).unwrap(), FormalSeries::y(ND, 12));
        assert!(lie_derivative(&FormalSeries::y(ND, 12), &half_y2).unwrap().is_zero());
        let x3 = gen(ND, 12, &[(3, 0, 0, 1, 1)]);
        assert_eq!(
            lie_derivative(&FormalSeries::y(ND, 12), &x3).unwrap(),
            s(ND, 12, &[(2, 0, 0, -3, 1)])
        );
    }

    #[test]
    fn generator_order_is_checked() {
        let err = Generator::new(s(Grading::DIAG, 6, &[(1, 1, 0, 1, 1)])).unwrap_err();
        assert_eq!(
            err,
            Error::GeneratorOrder {
                min_weight: 2,
                required: 3
            }
        );
    }

    #[test]
    fn simple_flows() {
        let shear = time_one_map(&gen(ND, 12, &[(0, 2, 0, 1, 2)])).unwrap();
        assert_eq!(shear.x, s(ND, 12, &[(1, 0, 0, 1, 1), (0, 1, 0, 1, 1)]));
        assert_eq!(shear.y, FormalSeries::y(ND, 12));
        let inv = inverse_time_one_map(&gen(ND, 12, &[(0, 2, 0, 1, 2)])).unwrap();
        assert_eq!(inv.x, s(ND, 12, &[(1, 0, 0, 1, 1), (0, 1, 0, -1, 1)]));
        let kick = time_one_map(&gen(ND, 12, &[(3, 0, 0, 1, 1)])).unwrap();
        assert_eq!(kick.x, FormalSeries::x(ND, 12));
        assert_eq!(kick.y, s(ND, 12, &[(0, 1, 0, 1, 1), (2, 0, 0, -3, 1)]));
        let zero = Generator::zero(ND, 12);
        assert_eq!(time_one_map(&zero).unwrap(), MapSeriesPair::identity(ND, 12));
    }

    #[test]
    fn cubic_potential_flow_low_orders() {
        // χ = y²/2 − x³/3: ẋ = y, ẏ = x², so
        // x(1) = x + y + x²/2 + ..., y(1) = y + x² + xy + ...
        let chi = gen(ND, 12, &[(0, 2, 0, 1, 2), (3, 0, 0, -1, 3)]);
        let phi = time_one_map(&chi).unwrap();
        assert_eq!(phi.x.truncate(4), s(ND, 4, &[(1, 0, 0, 1, 1), (0, 1, 0, 1, 1), (2, 0, 0, 1, 2)]));
        assert_eq!(
            phi.y.truncate(5),
            s(ND, 5, &[(0, 1, 0, 1, 1), (2, 0, 0, 1, 1), (1, 1, 0, 1, 1)])
        );
        // x⃛ = 2xẋ gives the xy/3 term.
        assert_eq!(phi.x.coeff(1, 1, 0), frac(1, 3));
    }

    #[test]
    fn hamiltonian_is_invariant_under_its_flow() {
        let h = s(ND, 14, &[(0, 2, 0, 1, 2), (3, 0, 0, -1, 3), (4, 0, 1, 1, 1)]);
        let chi = Generator::new(h.clone()).unwrap();
        assert_eq!(pullback(&h, &chi).unwrap(), h);
        assert!(lie_derivative(&h, &chi).unwrap().is_zero());
    }

    #[test]
    fn conjugation_matches_compositions() {
        let f = MapSeriesPair::new(
            s(ND, 12, &[(1, 0, 0, 1, 1), (0, 1, 0, 1, 1)]),
            FormalSeries::y(ND, 12),
        )
        .unwrap();
        let chi = gen(ND, 12, &[(3, 0, 0, 1, 1)]);
        let direct = inverse_time_one_map(&chi)
            .unwrap()
            .compose(&f.compose(&time_one_map(&chi).unwrap()).unwrap())
            .unwrap();
        assert_eq!(conjugate(&f, &chi).unwrap(), direct);
        assert_eq!(conjugate(&f, &Generator::zero(ND, 12)).unwrap(), f);
    }
}
