use crate::error::Result;
use crate::lie::{self, Generator};
use crate::series::{Grading, LinearMap, MapSeriesPair};

/// One canonical step `S` of a normalization. Conjugation steps act as
/// `F ↦ S⁻¹ ∘ F ∘ S`; `Central` and `AxisReflect` peel a linear factor off
/// the left instead.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum LogStep {
    /// Unit-determinant linear change of variables.
    Linear(LinearMap),
    /// Conjugation by `(x, y) ↦ (−x, y)`.
    Reflect,
    /// Conjugation by the time-one map of `χ`.
    Generator(Generator),
    /// `F ↦ −F`.
    Central,
    /// `F ↦ Diag(−1, 1) ∘ F`.
    AxisReflect,
}

impl LogStep {
    pub fn name(&self) -> &'static str {
        match self {
            LogStep::Linear(_) => "linear",
            LogStep::Reflect => "reflect",
            LogStep::Generator(_) => "generator",
            LogStep::Central => "central",
            LogStep::AxisReflect => "axis",
        }
    }

    /// Applies the step to a map family.
    pub fn apply(&self, f: &MapSeriesPair) -> Result<MapSeriesPair> {
        match self {
            LogStep::Linear(t) => {
                let f = if t.preserves_filtration(f.grading()) {
                    f.clone()
                } else {
                    f.regrade(Grading::DIAG)
                };
                t.conjugate(&f)
            }
            LogStep::Reflect => LinearMap::from_ints(-1, 0, 0, 1).conjugate(f),
            LogStep::Generator(chi) => {
                let f = if f.grading() == chi.chi().grading() {
                    f.clone()
                } else {
                    f.regrade(chi.chi().grading())
                };
                let n = f.order().min(chi.chi().order());
                let f = f.truncate(n);
                let chi = Generator::new(chi.chi().truncate(n))?;
                lie::conjugate(&f, &chi)
            }
            LogStep::Central => Ok(f.negate()),
            LogStep::AxisReflect => Ok(f.flip_x()),
        }
    }
}

/// Ordered record of the canonical transformations applied by a pipeline.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneratorLog {
    steps: Vec<LogStep>,
}

impl GeneratorLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: LogStep) {
        self.steps.push(step);
    }

    /// Records a generator unless it is zero.
    pub fn push_generator(&mut self, chi: Generator) {
        if !chi.is_zero() {
            self.steps.push(LogStep::Generator(chi));
        }
    }

    pub fn extend(&mut self, other: GeneratorLog) {
        self.steps.extend(other.steps);
    }

    pub fn steps(&self) -> &[LogStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step in order.
    pub fn replay(&self, f: &MapSeriesPair) -> Result<MapSeriesPair> {
        let mut f = f.clone();
        for step in &self.steps {
            f = step.apply(&f)?;
        }
        Ok(f)
    }
}

impl From<Vec<LogStep>> for GeneratorLog {
    fn from(steps: Vec<LogStep>) -> Self {
        GeneratorLog { steps }
    }
}
