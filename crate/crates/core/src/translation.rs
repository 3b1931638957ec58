use serde::{Deserialize, Serialize};

use crate::cohomology::ClassValue;

/// A translation number split into the part measured on a lift and the
/// integer deck offset of the cover element, so that shifting by the deck
/// action changes the value by exactly that integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationNumber {
    pub lift_part: f64,
    pub deck: i64,
    pub error_radius: f64,
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub k: u64,
    pub estimate: f64,
    pub error_bound: f64,
}

/// `1, 2, 4, …` up to `k_max`, ending at `k_max`.
pub fn convergence_ks(k_max: u64) -> Vec<u64> {
    let mut ks: Vec<u64> = std::iter::successors(Some(1u64), |k| k.checked_mul(2))
        .take_while(|&k| k <= k_max)
        .collect();
    if ks.last() != Some(&k_max) && k_max > 0 {
        ks.push(k_max);
    }
    ks
}

impl TranslationNumber {
    pub fn value(&self) -> f64 {
        self.lift_part + self.deck as f64
    }

    /// The induced rotation number in ℝ/ℤ. The deck part drops out.
    pub fn rotation(&self) -> ClassValue {
        ClassValue::from_real(self.lift_part, self.error_radius)
    }

    pub fn shifted(&self, m: i64) -> Self {
        Self {
            deck: self.deck + m,
            ..*self
        }
    }
}
