use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::params::StepParams;

/// Periodic grid `x_j = −L + j·2L/N`, `j = 0…N−1`. The map `j ↦ (N − j) mod N` is `x ↦ −x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimGrid {
    pub half_length: f64,
    pub points: usize,
}

impl SimGrid {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + self.spacing() * j as f64
    }

    pub fn reflect(&self, j: usize) -> usize {
        (self.points - j) % self.points
    }

    /// Index of the node closest to `x`, if `x` lies on the grid interval.
    pub fn nearest(&self, x: f64) -> Option<usize> {
        let j = ((x + self.half_length) / self.spacing()).round();
        if j < 0.0 || j >= self.points as f64 {
            None
        } else {
            Some(j as usize)
        }
    }

    /// `πN/(2L)`, the largest resolved wavenumber.
    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    /// Angular wavenumber of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.points as i64;
        let j = j as i64;
        let s = if j < n / 2 { j } else { j - n };
        PI / self.half_length * s as f64
    }
}

/// Split-step run parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub grid: SimGrid,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
    pub mollify_width: f64,
    /// Width of the raised-cosine seam window as a fraction of `L`.
    pub seam_fraction: f64,
    /// `k_max = buffer_safety·πN/(2L)` in the seam buffer `4·k_max·t_final`.
    pub buffer_safety: f64,
    /// Divergence is flagged once `|q|` exceeds this multiple of the initial maximum.
    pub blowup_factor: f64,
}

pub const DEFAULT_POINTS: usize = 1 << 15;
pub const DEFAULT_DT: f64 = 5e-4;
pub const DEFAULT_T_FINAL: f64 = 40.0;
pub const DEFAULT_SEAM_FRACTION: f64 = 0.05;
pub const DEFAULT_BUFFER_SAFETY: f64 = 0.05;
pub const DEFAULT_BLOWUP_FACTOR: f64 = 50.0;

/// `L = 200π/|B|`, capped at 800 and rounded down to a multiple of `π/|B|`; 800 when `B = 0`.
pub fn default_half_length(b: f64) -> f64 {
    if b == 0.0 {
        return 800.0;
    }
    let unit = PI / b.abs();
    let cells = (800.0 / unit).floor().clamp(1.0, 200.0);
    cells * unit
}

impl SimConfig {
    /// Desk-scale configuration with snapshots at `t = 10, 20, 30, 40`.
    pub fn desk(params: &StepParams) -> Self {
        Self {
            grid: SimGrid {
                half_length: default_half_length(params.b),
                points: DEFAULT_POINTS,
            },
            dt: DEFAULT_DT,
            t_final: DEFAULT_T_FINAL,
            snapshot_times: vec![10.0, 20.0, 30.0, 40.0],
            mollify_width: 0.2,
            seam_fraction: DEFAULT_SEAM_FRACTION,
            buffer_safety: DEFAULT_BUFFER_SAFETY,
            blowup_factor: DEFAULT_BLOWUP_FACTOR,
        }
    }

    pub fn seam_width(&self) -> f64 {
        self.seam_fraction * self.grid.half_length
    }

    pub fn k_max(&self) -> f64 {
        self.buffer_safety * self.grid.nyquist()
    }

    pub fn seam_buffer(&self) -> f64 {
        4.0 * self.k_max() * self.t_final
    }

    /// `[−L + buffer, L − seam − buffer]`; empty when the buffer eats the domain.
    pub fn trusted_region(&self) -> (f64, f64) {
        let l = self.grid.half_length;
        (
            -l + self.seam_buffer(),
            l - self.seam_width() - self.seam_buffer(),
        )
    }

    /// Number of steps to reach `t`, if `t` is a whole number of steps.
    pub fn steps_to(&self, t: f64) -> Option<usize> {
        let s = t / self.dt;
        let r = s.round();
        ((s - r).abs() <= 1e-6 * r.max(1.0)).then_some(r as usize)
    }

    pub fn validate(&self, params: &StepParams) -> Result<()> {
        let g = &self.grid;
        if !(g.half_length > 0.0 && g.half_length.is_finite()) {
            return invalid(format!(
                "half-length L must be positive, got {}",
                g.half_length
            ));
        }
        if g.points < 16 || !g.points.is_power_of_two() {
            return invalid(format!("N must be a power of two >= 16, got {}", g.points));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return invalid(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return invalid(format!("t_final must be positive, got {}", self.t_final));
        }
        if self.steps_to(self.t_final).is_none() {
            return invalid(format!(
                "t_final = {} is not a multiple of dt = {}",
                self.t_final, self.dt
            ));
        }
        for &t in &self.snapshot_times {
            if !(0.0..=self.t_final).contains(&t) || self.steps_to(t).is_none() {
                return invalid(format!(
                    "snapshot time {t} must be a multiple of dt in [0, t_final]"
                ));
            }
        }
        if params.b != 0.0 {
            let turns = params.b * g.half_length / PI;
            if (turns - turns.round()).abs() > 1e-9 * turns.abs().max(1.0) {
                return invalid(format!(
                    "B*L/pi = {turns} must be an integer for a periodic background"
                ));
            }
        }
        let h = g.spacing();
        if !(self.mollify_width >= 4.0 * h) {
            return invalid(format!(
                "mollify width {} is below 4 grid spacings ({})",
                self.mollify_width,
                4.0 * h
            ));
        }
        if !(self.seam_fraction > 0.0 && self.seam_fraction < 0.5) || self.seam_width() < 4.0 * h {
            return invalid(format!(
                "seam window {} must be in (0, 0.5)·L and span >= 4 grid spacings",
                self.seam_fraction
            ));
        }
        if !(params.r + self.mollify_width < g.half_length - self.seam_width()) {
            return invalid("the step transition overlaps the seam window");
        }
        if !(self.buffer_safety > 0.0) || !(self.blowup_factor > 1.0) {
            return invalid("buffer safety must be positive and the blow-up factor above 1");
        }
        Ok(())
    }
}
