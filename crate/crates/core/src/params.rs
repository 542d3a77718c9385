use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Background of the pure step: `q = 0` for `x ≤ R` and `A·e^{2iBx}` for `x > R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl StepParams {
    /// Validates `A ≥ 0`, `R ≥ 0` and finiteness. `A = 0` is accepted as the trivial datum.
    pub fn new(a: f64, b: f64, r: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && r.is_finite()) {
            return invalid(format!("non-finite step parameters A={a}, B={b}, R={r}"));
        }
        if a < 0.0 {
            return invalid(format!("amplitude A must be non-negative, got {a}"));
        }
        if r < 0.0 {
            return invalid(format!("shift R must be non-negative, got {r}"));
        }
        Ok(Self { a, b, r })
    }

    /// `4|B|R`, the quantity bounded by π in the winding and zero-classification results.
    pub fn shift_phase(&self) -> f64 {
        4.0 * self.b.abs() * self.r
    }

    /// Requires `0 < 4|B|R < π` (strict on the right when `strict` is set).
    pub fn require_winding_regime(&self, strict: bool) -> Result<()> {
        let s = self.shift_phase();
        let upper_ok = if strict {
            s < std::f64::consts::PI
        } else {
            s <= std::f64::consts::PI
        };
        if !(s > 0.0 && upper_ok) {
            return invalid(format!(
                "requires 0 < 4|B|R {} pi, got 4|B|R = {s}",
                if strict { "<" } else { "<=" }
            ));
        }
        if self.a <= 0.0 {
            return invalid("requires A > 0");
        }
        Ok(())
    }
}
