//! Exact-arithmetic normal forms for families of area-preserving planar maps
//! with a parabolic fixed point (multipliers ±1).
//!
//! Maps and Hamiltonians are truncated formal power series in `(x, y, ε)`
//! with rational coefficients, graded by a quasi-homogeneous weight. The
//! pipeline interpolates a map family by the time-one flow of a formal
//! Hamiltonian and reduces that Hamiltonian to a unique normal form whose
//! coefficients are formal invariants of the family.

pub mod birkhoff;
pub mod error;
pub mod harness;
pub mod interp;
pub mod lie;
pub mod nf;
pub mod par;
pub mod psf;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{FormalSeries, Grading, LinearMap, MapSeriesPair, Monomial, Parity, QhPart};
