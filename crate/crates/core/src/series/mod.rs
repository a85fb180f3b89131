//! Exact sparse formal power series in `(x, y, ε)` with a quasi-homogeneous
//! grading, and planar maps built from them.

mod formal;
mod map;
mod monomial;

pub use formal::{FormalSeries, Parity, QhPart};
pub use map::{substitute, LinearMap, MapSeriesPair};
pub use monomial::{Grading, Monomial};

/// `∂x f + ∂y g`.
pub fn divergence(f: &FormalSeries, g: &FormalSeries) -> crate::Result<FormalSeries> {
    f.dx().try_add(&g.dy())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_examples() {
        let g = Grading::NONDIAG;
        let s = |t: &[(u32, u32, u32, i64, i64)]| FormalSeries::from_ints(g, 12, t);
        assert!(divergence(&s(&[(0, 1, 0, 1, 1)]), &s(&[(2, 0, 0, 5, 1)])).unwrap().is_zero());
        assert_eq!(
            divergence(&s(&[(1, 0, 0, 1, 1)]), &s(&[(0, 1, 0, 1, 1)])).unwrap(),
            s(&[(0, 0, 0, 2, 1)])
        );
        assert!(divergence(&s(&[(2, 0, 0, 1, 1)]), &s(&[(1, 1, 0, -2, 1)])).unwrap().is_zero());
    }
}
