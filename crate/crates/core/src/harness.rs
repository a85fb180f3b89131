//! Seeded random series and the verification experiments built on them.
//!
//! The random stream is SplitMix64, so a seed reproduces the same series on
//! every platform. Coefficients are small rationals `p/q` with
//! `1 ≤ |p| ≤ 9` and `1 ≤ q ≤ 4`, which keeps coefficient growth in check
//! at high orders.

use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::interp::interpolate;
use crate::lie::{self, Generator};
use crate::nf::{normalize, InvariantTables};
use crate::par;
use crate::rational::{self, Rational};
use crate::series::{substitute, FormalSeries, Grading, MapSeriesPair, Monomial};

pub type Seed = u64;

/// Deterministic source of small rationals and inclusion decisions.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: Seed) -> Self {
        Sampler {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Nonzero `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 4`.
    pub fn rational(&mut self) -> Rational {
        let v = self.next_u64();
        let p = (v % 9) as i64 + 1;
        let q = ((v >> 8) % 4) as i64 + 1;
        let sign = if (v >> 16) & 1 == 1 { -1 } else { 1 };
        rational::frac(sign * p, q)
    }

    /// Random series on the monomials of weight in `min_w..=max_w`, pure
    /// powers of `ε` excluded. Each monomial is kept with probability
    /// `density`.
    pub fn series(&mut self, grading: Grading, order: u32, min_w: u32, max_w: u32, density: f64) -> FormalSeries {
        let mut terms = Vec::new();
        for w in min_w..=max_w.min(order) {
            for m in grading.monomials_of_weight(w) {
                if m.is_pure_eps() {
                    continue;
                }
                if self.unit() < density {
                    terms.push((m, self.rational()));
                }
            }
        }
        FormalSeries::from_terms(grading, order, terms)
    }
}

fn check_window(grading: Grading, order: u32, min_w: u32, max_w: u32, density: f64) -> Result<()> {
    let threshold = grading.generator_threshold();
    if min_w < threshold {
        return Err(Error::Parameter(format!(
            "min weight {min_w} is below the generator threshold {threshold}"
        )));
    }
    if min_w > max_w || min_w > order {
        return Err(Error::Parameter(format!("empty weight window {min_w}..={max_w} at order {order}")));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Parameter(format!("density {density} is outside [0, 1]")));
    }
    Ok(())
}

/// Random generator supported on weights `min_w..=max_w`.
pub fn random_generator(
    seed: Seed,
    grading: Grading,
    order: u32,
    min_w: u32,
    max_w: u32,
    density: f64,
) -> Result<Generator> {
    check_window(grading, order, min_w, max_w, density)?;
    Generator::new(Sampler::new(seed).series(grading, order, min_w, max_w, density))
}

/// Random admissible Hamiltonian: `y²/2` plus random terms in the Jordan
/// grading, purely random terms from the cubic order on in the diagonal
/// grading.
pub fn random_hamiltonian(seed: Seed, grading: Grading, order: u32, density: f64) -> Result<FormalSeries> {
    let threshold = grading.generator_threshold();
    check_window(grading, order, threshold, order, density)?;
    let random = Sampler::new(seed).series(grading, order, threshold, order, density);
    if grading == Grading::DIAG {
        return Ok(random);
    }
    let quad = Monomial::new(0, 2, 0);
    let lead = FormalSeries::monomial(grading, order, quad, rational::frac(1, 2));
    Ok(&lead + &random.filter(|m| *m != quad))
}

/// Outcome of one conjugation trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrialOutcome {
    Identical,
    /// First invariant entry that differs.
    Mismatch(String),
    /// The pipeline failed on the conjugated map.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub trials: Vec<TrialOutcome>,
    /// `false` when the pipeline does not claim uniqueness for this case.
    pub asserted: bool,
}

impl InvarianceReport {
    pub fn passed(&self) -> usize {
        self.trials.iter().filter(|t| **t == TrialOutcome::Identical).count()
    }

    pub fn success(&self) -> bool {
        self.passed() == self.trials.len()
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} invariance trials passed", self.passed(), self.trials.len())?;
        if !self.asserted {
            write!(f, " (uniqueness not asserted)")?;
        }
        for (i, t) in self.trials.iter().enumerate() {
            match t {
                TrialOutcome::Identical => {}
                TrialOutcome::Mismatch(at) => write!(f, "\ntrial {i}: tables differ at {at}")?,
                TrialOutcome::Failed(e) => write!(f, "\ntrial {i}: {e}")?,
            }
        }
        Ok(())
    }
}

/// Conjugates `f` by `trials` random canonical changes and checks that the
/// renormalized invariant tables are identical to those of `f`.
pub fn invariance_check(f: &MapSeriesPair, trials: usize, seed: Seed) -> Result<InvarianceReport> {
    let base = normalize(f)?;
    let mut master = Sampler::new(seed);
    let seeds: Vec<Seed> = (0..trials).map(|_| master.next_u64()).collect();
    let trials = par::map_ordered(&seeds, |&s| run_trial(f, &base.invariants, s));
    Ok(InvarianceReport {
        trials,
        asserted: base.unique,
    })
}

/// Weight span of the random changes of variables.
const CHANGE_SPAN: u32 = 6;

fn run_trial(f: &MapSeriesPair, base: &InvariantTables, seed: Seed) -> TrialOutcome {
    let (g, n) = (f.grading(), f.order());
    let lo = g.generator_threshold();
    let outcome = random_generator(seed, g, n, lo, (lo + CHANGE_SPAN).min(n), 0.5)
        .and_then(|chi| lie::conjugate(f, &chi))
        .and_then(|moved| normalize(&moved));
    match outcome {
        Ok(r) => match r.invariants.first_difference(base) {
            None => TrialOutcome::Identical,
            Some(at) => TrialOutcome::Mismatch(at),
        },
        Err(e) => TrialOutcome::Failed(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripReport {
    /// `interpolate(Φ¹_h) = h`.
    pub interpolation: bool,
    /// `h ∘ Φ¹_h = h`.
    pub integral: bool,
    pub notes: Vec<String>,
}

impl RoundtripReport {
    pub fn success(&self) -> bool {
        self.interpolation && self.integral
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |ok: bool| if ok { "pass" } else { "FAIL" };
        write!(
            f,
            "round trip: {}, formal integral: {}",
            word(self.interpolation),
            word(self.integral)
        )?;
        for note in &self.notes {
            write!(f, "\nnote: {note}")?;
        }
        Ok(())
    }
}

/// Interpolates the time-one map of `h` and compares with `h`, then checks
/// that `h` is a formal integral of that map. Pure `ε` terms are dropped
/// first since interpolation cannot see them.
pub fn roundtrip_check(h: &FormalSeries) -> RoundtripReport {
    let mut notes = Vec::new();
    let gauge = h.drop_pure_eps();
    if gauge != *h {
        notes.push("pure eps terms dropped before comparison".into());
    }
    let map = match Generator::new(gauge.clone()).and_then(|chi| lie::time_one_map(&chi)) {
        Ok(map) => map,
        Err(e) => {
            notes.push(e.to_string());
            return RoundtripReport {
                interpolation: false,
                integral: false,
                notes,
            };
        }
    };
    let interpolation = match interpolate(&map) {
        Ok(back) => match back.first_difference(&gauge) {
            None => true,
            Some((m, got, want)) => {
                notes.push(format!("interpolation differs at {m}: {got} vs {want}"));
                false
            }
        },
        Err(e) => {
            notes.push(e.to_string());
            false
        }
    };
    let integral = match substitute(&gauge, &map).and_then(|moved| moved.try_sub(&gauge)) {
        Ok(diff) if diff.is_zero() => true,
        Ok(diff) => {
            notes.push(format!("h o F - h = {diff}"));
            false
        }
        Err(e) => {
            notes.push(e.to_string());
            false
        }
    };
    RoundtripReport {
        interpolation,
        integral,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ND: Grading = Grading::NONDIAG;
    const D: Grading = Grading::DIAG;

    #[test]
    fn generators_are_deterministic() {
        let a = random_generator(1, ND, 16, 6, 12, 0.5).unwrap();
        let b = random_generator(1, ND, 16, 6, 12, 0.5).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_zero());
        assert!(a.chi().terms().all(|(m, _)| (6..=12).contains(&ND.weight(m)) && !m.is_pure_eps()));
        assert!(random_generator(1, ND, 16, 6, 12, 0.0).unwrap().is_zero());
        assert!(matches!(random_generator(1, ND, 16, 5, 12, 0.5), Err(Error::Parameter(_))));
        assert!(matches!(random_generator(1, ND, 16, 9, 8, 0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn rationals_are_small() {
        let mut s = Sampler::new(3);
        for _ in 0..200 {
            let r = s.rational();
            assert!(r.numer().magnitude() <= &9u32.into() && r.denom() <= &4.into());
            assert!(r != Rational::from_integer(0.into()));
        }
    }

    #[test]
    fn roundtrips() {
        let h = FormalSeries::from_ints(ND, 24, &[(0, 2, 0, 1, 2), (3, 0, 0, -1, 3), (4, 0, 1, 1, 1)]);
        let r = roundtrip_check(&h);
        assert!(r.success(), "{r}");
        assert!(r.notes.is_empty());

        let with_gauge = &h + &FormalSeries::from_ints(ND, 24, &[(0, 0, 1, 1, 1)]);
        let r = roundtrip_check(&with_gauge);
        assert!(r.success());
        assert_eq!(r.notes.len(), 1);

        let h = random_hamiltonian(5, D, 8, 0.4).unwrap();
        assert!(roundtrip_check(&h).success());
    }

    #[test]
    fn invariance_of_cubic_potential() {
        let h = FormalSeries::from_ints(ND, 14, &[(0, 2, 0, 1, 2), (3, 0, 0, -1, 3)]);
        let f = lie::time_one_map(&Generator::new(h).unwrap()).unwrap();
        let r = invariance_check(&f, 3, 7).unwrap();
        assert!(r.success(), "{r}");
        assert_eq!(r.to_string(), "3/3 invariance trials passed");
        assert!(invariance_check(&f, 0, 7).unwrap().trials.is_empty());
    }
}
