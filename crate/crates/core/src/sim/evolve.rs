use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::config::{SimConfig, SimGrid};
use super::field::{nonlinear_into, FieldSnapshot};
use crate::error::{invalid, Result};

/// Where and why a run stopped early.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub t: f64,
    pub max_abs: f64,
    pub threshold: f64,
}

/// Requested snapshots in time order. On divergence the last entry is the last good state.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub snapshots: Vec<FieldSnapshot>,
    pub divergence: Option<Divergence>,
}

/// Linear flow `q̂ ← e^{−ik²dt}·q̂`.
pub struct LinearPropagator {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    multiplier: Vec<C64>,
    scratch: Vec<C64>,
}

impl LinearPropagator {
    pub fn new(grid: SimGrid, dt: f64) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.points;
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scale = 1.0 / n as f64;
        let multiplier = (0..n)
            .map(|j| {
                let k = grid.wavenumber(j);
                C64::from_polar(scale, -k * k * dt)
            })
            .collect();
        let len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            multiplier,
            scratch: vec![C64::new(0.0, 0.0); len],
        }
    }

    pub fn apply(&mut self, field: &mut [C64]) {
        self.forward.process_with_scratch(field, &mut self.scratch);
        for (v, m) in field.iter_mut().zip(&self.multiplier) {
            *v *= m;
        }
        self.inverse.process_with_scratch(field, &mut self.scratch);
    }
}

/// Free Schrödinger evolution `iq_t + q_xx = 0` of `field` over time `t`, exact in Fourier space.
pub fn free_evolution(field: &FieldSnapshot, t: f64) -> FieldSnapshot {
    let mut values = field.values.clone();
    LinearPropagator::new(field.grid, t).apply(&mut values);
    FieldSnapshot {
        t: field.t + t,
        grid: field.grid,
        values,
    }
}

/// How often (in steps) a synchronised copy is kept for divergence recovery.
const CHECKPOINT_EVERY: usize = 200;

/// Strang splitting `N(dt/2)·L(dt)·N(dt/2)` from `initial.t` to `initial.t + t_final`.
/// Consecutive half nonlinear substeps are fused; they compose exactly because `q·conj(q(−x))`
/// is conserved by that flow.
pub fn evolve(initial: &FieldSnapshot, config: &SimConfig) -> Result<Evolution> {
    if initial.grid != config.grid {
        return invalid("initial field and config disagree on the grid");
    }
    let total = config.steps_to(config.t_final).ok_or_else(|| {
        crate::error::Error::InvalidParam("t_final is not a multiple of dt".into())
    })?;
    let mut marks: Vec<(usize, f64)> = Vec::new();
    for &t in &config.snapshot_times {
        let s = config.steps_to(t).filter(|&s| s <= total);
        match s {
            Some(s) => marks.push((s, t)),
            None => {
                return invalid(format!(
                    "snapshot time {t} must be a multiple of dt in [0, t_final]"
                ))
            }
        }
    }
    marks.sort_by_key(|m| m.0);
    marks.dedup_by_key(|m| m.0);

    let threshold = config.blowup_factor * initial.max_modulus();
    let dt = config.dt;
    let t0 = initial.t;
    let mut prop = LinearPropagator::new(config.grid, dt);
    let mut q = initial.values.clone();
    let mut tmp = vec![C64::new(0.0, 0.0); q.len()];
    let mut snapshots = Vec::with_capacity(marks.len());
    let mut next = marks.iter().peekable();
    let mut good = (0usize, q.clone());

    while let Some(&&(0, t)) = next.peek() {
        snapshots.push(FieldSnapshot {
            t: t0 + t,
            grid: config.grid,
            values: q.clone(),
        });
        next.next();
    }

    let mut pending = false;
    let diverged =
        |step: usize, peak: f64, good: &(usize, Vec<C64>), snaps: &mut Vec<FieldSnapshot>| {
            let t = t0 + step as f64 * dt;
            let t_good = t0 + good.0 as f64 * dt;
            if snaps.last().is_none_or(|s| s.t != t_good) {
                snaps.push(FieldSnapshot {
                    t: t_good,
                    grid: config.grid,
                    values: good.1.clone(),
                });
            }
            Evolution {
                snapshots: std::mem::take(snaps),
                divergence: Some(Divergence {
                    t,
                    max_abs: peak,
                    threshold,
                }),
            }
        };
    for step in 1..=total {
        let h = if pending { dt } else { 0.5 * dt };
        let peak = nonlinear_into(&q, h, &mut tmp);
        std::mem::swap(&mut q, &mut tmp);
        if !(peak <= threshold) {
            return Ok(diverged(step, peak, &good, &mut snapshots));
        }
        prop.apply(&mut q);
        let at_mark = next.peek().is_some_and(|m| m.0 == step);
        if at_mark || step == total || step % CHECKPOINT_EVERY == 0 {
            let peak = nonlinear_into(&q, 0.5 * dt, &mut tmp);
            std::mem::swap(&mut q, &mut tmp);
            pending = false;
            if !(peak <= threshold) {
                return Ok(diverged(step, peak, &good, &mut snapshots));
            }
            good.0 = step;
            good.1.copy_from_slice(&q);
            if at_mark {
                let &(_, t) = next.next().expect("peeked");
                snapshots.push(FieldSnapshot {
                    t: t0 + t,
                    grid: config.grid,
                    values: q.clone(),
                });
            }
        } else {
            pending = true;
        }
    }
    Ok(Evolution {
        snapshots,
        divergence: None,
    })
}
