//! Random group elements: the Haar reference and the three chains under test.

mod haar;
mod jor;
mod walks;

use serde::{Deserialize, Serialize};

pub use haar::haar_orthogonal;
pub use jor::{jor_transform, project_to_special, JorOperator};
pub use walks::{
    apply_reflection, kac_step, kac_walk, random_unit_vector, reflection_product,
    reflection_walk, rotate_rows,
};

use crate::error::{Error, Result};
use crate::linalg::GroupElement;
use crate::rng::RngStream;

/// Which generator to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Haar,
    Kac,
    Reflections,
    Jor,
}

/// Chain length: a step count, or an explicit JOR factor split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Steps {
    Count(usize),
    Jor { m1: usize, m2: usize },
}

impl Steps {
    /// JOR factor counts. A plain count `k` is read as `M1 + M2 = k` with
    /// `M1 = ⌈k/2⌉`.
    pub fn jor_split(self) -> (usize, usize) {
        match self {
            Steps::Count(k) => (k.div_ceil(2), k / 2),
            Steps::Jor { m1, m2 } => (m1, m2),
        }
    }

    pub fn count(self) -> usize {
        match self {
            Steps::Count(k) => k,
            Steps::Jor { m1, m2 } => m1 + m2,
        }
    }

    pub fn label(self) -> String {
        match self {
            Steps::Count(k) => k.to_string(),
            Steps::Jor { m1, m2 } => format!("{m1}+{m2}"),
        }
    }
}

impl From<usize> for Steps {
    fn from(k: usize) -> Self {
        Steps::Count(k)
    }
}

/// Full description of one generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub dim: usize,
    #[serde(default = "zero_steps")]
    pub steps: Steps,
    #[serde(default)]
    pub seed: u64,
    /// Map determinant −1 outputs into SO(n). Defaults to on for JOR, whose
    /// permutations give either sign, and off otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub project_to_special: Option<bool>,
}

fn zero_steps() -> Steps {
    Steps::Count(0)
}

impl SamplerSpec {
    pub fn new(kind: SamplerKind, dim: usize, steps: impl Into<Steps>) -> Self {
        Self {
            kind,
            dim,
            steps: steps.into(),
            seed: 0,
            project_to_special: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn projects(&self) -> bool {
        self.project_to_special
            .unwrap_or(self.kind == SamplerKind::Jor)
    }

    pub fn validate(&self) -> Result<()> {
        let min_dim = if self.kind == SamplerKind::Haar { 1 } else { 2 };
        if self.dim < min_dim {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: format!("{:?} sampler needs dim >= {min_dim}", self.kind),
            });
        }
        Ok(())
    }

    /// Draws one element from `rng`.
    pub fn draw(&self, rng: &mut RngStream) -> GroupElement {
        let g = match self.kind {
            SamplerKind::Haar => haar_orthogonal(self.dim, rng),
            SamplerKind::Kac => kac_walk(self.dim, self.steps.count(), rng),
            SamplerKind::Reflections => reflection_walk(self.dim, self.steps.count(), rng),
            SamplerKind::Jor => {
                let (m1, m2) = self.steps.jor_split();
                jor_transform(self.dim, m1, m2, rng)
            }
        };
        if self.projects() {
            project_to_special(g)
        } else {
            g
        }
    }

    /// Draws `count` elements; element `i` uses `rng.split(i)`.
    pub fn draw_sample(&self, count: usize, rng: &RngStream) -> Vec<GroupElement> {
        (0..count as u64)
            .map(|i| self.draw(&mut rng.split(i)))
            .collect()
    }

    /// Draws a sample from the spec's own seed.
    pub fn sample(&self, count: usize) -> Result<Vec<GroupElement>> {
        self.validate()?;
        Ok(self.draw_sample(count, &RngStream::from_seed(self.seed)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jor_split_rounds_left() {
        assert_eq!(Steps::Count(1).jor_split(), (1, 0));
        assert_eq!(Steps::Count(4).jor_split(), (2, 2));
        assert_eq!(Steps::Count(5).jor_split(), (3, 2));
        assert_eq!(Steps::Jor { m1: 0, m2: 3 }.jor_split(), (0, 3));
    }

    #[test]
    fn steps_serde_shapes() {
        let a: Steps = serde_json::from_str("7").unwrap();
        assert_eq!(a, Steps::Count(7));
        let b: Steps = serde_json::from_str(r#"{"m1":1,"m2":2}"#).unwrap();
        assert_eq!(b, Steps::Jor { m1: 1, m2: 2 });
    }

    #[test]
    fn spec_validation() {
        assert!(SamplerSpec::new(SamplerKind::Kac, 1, 3).validate().is_err());
        assert!(SamplerSpec::new(SamplerKind::Haar, 1, 0).validate().is_ok());
    }
}
