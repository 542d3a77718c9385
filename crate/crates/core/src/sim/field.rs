use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::config::{SimConfig, SimGrid};
use crate::error::{invalid, Error, Result};
use crate::params::StepParams;
use crate::scattering::mollified_step_value;

/// Field samples on a [`SimGrid`] at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub grid: SimGrid,
    pub values: Vec<C64>,
}

impl FieldSnapshot {
    pub fn zeros(grid: SimGrid, t: f64) -> Self {
        Self {
            t,
            grid,
            values: vec![C64::new(0.0, 0.0); grid.points],
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Value at the grid node nearest to `x`.
    pub fn at(&self, x: f64) -> Option<(f64, C64)> {
        self.grid
            .nearest(x)
            .map(|j| (self.grid.x(j), self.values[j]))
    }

    /// `q(x)·conj(q(−x))` at every node.
    pub fn pt_product(&self) -> Vec<C64> {
        (0..self.grid.points)
            .map(|j| self.values[j] * self.values[self.grid.reflect(j)].conj())
            .collect()
    }

    /// `x ↦ conj(q(−x))`.
    pub fn pt_reflect(&self) -> Self {
        let values = (0..self.grid.points)
            .map(|j| self.values[self.grid.reflect(j)].conj())
            .collect();
        Self {
            t: self.t,
            grid: self.grid,
            values,
        }
    }
}

/// Raised-cosine window: 1 left of `L − w`, falling to 0 at `x = L`.
pub fn seam_window(x: f64, half_length: f64, width: f64) -> f64 {
    let start = half_length - width;
    if x <= start {
        1.0
    } else if x >= half_length {
        0.0
    } else {
        0.5 * (1.0 + (PI * (x - start) / width).cos())
    }
}

/// Mollified step on the simulation grid, tapered to 0 by the seam window.
pub fn mollified_step(
    params: &StepParams,
    width: f64,
    grid: SimGrid,
    seam_width: f64,
) -> Result<FieldSnapshot> {
    if !(width > 0.0) {
        return invalid(format!("mollify width must be positive, got {width}"));
    }
    if width < 4.0 * grid.spacing() {
        return invalid(format!(
            "mollify width {width} is below 4 grid spacings ({})",
            4.0 * grid.spacing()
        ));
    }
    let values = (0..grid.points)
        .map(|j| {
            let x = grid.x(j);
            mollified_step_value(params, width, x) * seam_window(x, grid.half_length, seam_width)
        })
        .collect();
    Ok(FieldSnapshot {
        t: 0.0,
        grid,
        values,
    })
}

/// Initial datum for `config`.
pub fn initial_field(params: &StepParams, config: &SimConfig) -> Result<FieldSnapshot> {
    config.validate(params)?;
    mollified_step(
        params,
        config.mollify_width,
        config.grid,
        config.seam_width(),
    )
}

/// Exact flow of `iq_t = −2q²·conj(q(−x))` over `dt`: `q ← q·exp(2i·dt·q·conj(q(−x)))`.
pub fn nonlinear_substep(field: &[C64], dt: f64) -> Vec<C64> {
    let n = field.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    nonlinear_into(field, dt, &mut out);
    out
}

/// Writes the substep of `src` into `dst`; returns `max |dst|`, NaN if any value is not finite.
pub(crate) fn nonlinear_into(src: &[C64], dt: f64, dst: &mut [C64]) -> f64 {
    let n = src.len();
    let mut peak: f64 = 0.0;
    for j in 0..n {
        let v = src[j];
        let p = v * src[(n - j) % n].conj();
        let w = v * (C64::new(0.0, 2.0 * dt) * p).exp();
        let m = w.norm();
        peak = if m.is_finite() && peak.is_finite() {
            peak.max(m)
        } else {
            f64::NAN
        };
        dst[j] = w;
    }
    peak
}

#[derive(Serialize, Deserialize)]
struct SnapshotRow {
    t: f64,
    x: f64,
    re: f64,
    im: f64,
    abs: f64,
}

/// CSV with columns `t, x, re, im, abs`, one row per node and snapshot.
pub fn write_snapshots_csv<W: Write>(snapshots: &[FieldSnapshot], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in snapshots {
        for (j, v) in s.values.iter().enumerate() {
            w.serialize(SnapshotRow {
                t: s.t,
                x: s.grid.x(j),
                re: v.re,
                im: v.im,
                abs: v.norm(),
            })
            .map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_snapshots_csv`]; the grid is recovered from the first snapshot's nodes.
pub fn read_snapshots_csv<R: Read>(input: R) -> Result<Vec<FieldSnapshot>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut groups: Vec<(f64, Vec<f64>, Vec<C64>)> = Vec::new();
    for row in rd.deserialize::<SnapshotRow>() {
        let row = row.map_err(|e| Error::Parse(e.to_string()))?;
        match groups.last_mut() {
            Some((t, xs, vs)) if *t == row.t => {
                xs.push(row.x);
                vs.push(C64::new(row.re, row.im));
            }
            _ => groups.push((row.t, vec![row.x], vec![C64::new(row.re, row.im)])),
        }
    }
    let mut out = Vec::with_capacity(groups.len());
    for (t, xs, values) in groups {
        let n = xs.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Parse(format!(
                "snapshot at t = {t} has {n} nodes, expected a power of two"
            )));
        }
        let half_length = -xs[0];
        let grid = SimGrid {
            half_length,
            points: n,
        };
        if xs
            .iter()
            .enumerate()
            .any(|(j, &x)| (x - grid.x(j)).abs() > 1e-9 * half_length)
        {
            return Err(Error::Parse(format!(
                "snapshot at t = {t} is not on a symmetric periodic grid"
            )));
        }
        out.push(FieldSnapshot { t, grid, values });
    }
    Ok(out)
}
