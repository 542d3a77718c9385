//! Jost solutions of the x-equation `Ψ' = −ikσ₃Ψ + UΨ + iκΨσ₃` (`κ = k ∓ B`), started from the
//! exact tail solutions and integrated inward.
//!
//! Each step uses the integrating factor `e^{−ikσ₃s}`, so the free part is propagated exactly and
//! RK4 only sees the coupling `[[0, q e^{2iks}], [−q̄(−x) e^{−2iks}, 0]]`.

use num_complex::Complex64 as C64;

use super::datum::InitialDatum;
use crate::error::{Error, Result};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Which Jost solution: `Left` is Ψ₁ (normalized at −∞), `Right` is Ψ₂ (normalized at +∞).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Ψ₁ or Ψ₂ at a given `(x, k)`, stored row-major.
#[derive(Clone, Copy, Debug)]
pub struct JostMatrix {
    pub side: Side,
    pub x: f64,
    pub k: C64,
    pub m: [[C64; 2]; 2],
}

impl JostMatrix {
    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn column(&self, c: usize) -> [C64; 2] {
        [self.m[0][c], self.m[1][c]]
    }
}

/// Step-size control for the inward integration.
#[derive(Clone, Copy, Debug)]
pub struct JostOptions {
    /// Step is at most `step_factor / (1 + |k| + max|q|)`, and never above the grid spacing.
    pub step_factor: f64,
}

impl Default for JostOptions {
    fn default() -> Self {
        Self { step_factor: 0.025 }
    }
}

impl JostOptions {
    pub fn max_step(&self, datum: &InitialDatum, k: C64) -> f64 {
        (self.step_factor / (1.0 + k.norm() + datum.max_modulus())).min(datum.dx)
    }
}

fn kappa(side: Side, k: C64, b: f64) -> C64 {
    match side {
        Side::Left => k - b,
        Side::Right => k + b,
    }
}

/// Exact tail value of column `col` at `x` (inside the exact region of `side`).
fn tail_column(datum: &InitialDatum, side: Side, col: usize, k: C64, x: f64) -> Result<[C64; 2]> {
    let a = datum.background.a;
    let b = datum.background.b;
    let ep = (I * b * x).exp();
    let em = (-I * b * x).exp();
    match (side, col) {
        (Side::Left, 0) => {
            if a == 0.0 {
                return Ok([em, ZERO]);
            }
            if k == C64::new(b, 0.0) {
                return Err(Error::OutOfDomain(format!(
                    "first column of the left Jost solution is singular at k = B = {b}"
                )));
            }
            Ok([em, ep * (-I * a / (2.0 * (k - b)))])
        }
        (Side::Left, _) => Ok([ZERO, ep]),
        (Side::Right, 0) => Ok([ep, ZERO]),
        (Side::Right, _) => {
            if a == 0.0 {
                return Ok([ZERO, em]);
            }
            if k == C64::new(-b, 0.0) {
                return Err(Error::OutOfDomain(format!(
                    "second column of the right Jost solution is singular at k = -B = {}",
                    -b
                )));
            }
            Ok([ep * (-I * a / (2.0 * (k + b))), em])
        }
    }
}

struct Coupling {
    q: C64,
    qr: C64,
}

fn coupling(datum: &InitialDatum, x: f64) -> Coupling {
    Coupling {
        q: datum.potential(x),
        qr: datum.potential(-x).conj(),
    }
}

#[inline]
fn apply(c: &Coupling, e2: C64, v: [C64; 2]) -> [C64; 2] {
    [c.q * e2 * v[1], -c.qr / e2 * v[0]]
}

/// Advances one column from `x0` by signed step `h`.
#[allow(clippy::too_many_arguments)]
fn lawson_rk4(
    start: &Coupling,
    mid: &Coupling,
    end: &Coupling,
    k: C64,
    kap: C64,
    sign: f64,
    h: f64,
    v: [C64; 2],
) -> [C64; 2] {
    let one = C64::new(1.0, 0.0);
    let emid = (2.0 * I * k * (0.5 * h)).exp();
    let eend = emid * emid;
    let k1 = apply(start, one, v);
    let y2 = [v[0] + k1[0] * (0.5 * h), v[1] + k1[1] * (0.5 * h)];
    let k2 = apply(mid, emid, y2);
    let y3 = [v[0] + k2[0] * (0.5 * h), v[1] + k2[1] * (0.5 * h)];
    let k3 = apply(mid, emid, y3);
    let y4 = [v[0] + k3[0] * h, v[1] + k3[1] * h];
    let k4 = apply(end, eend, y4);
    let w = [
        v[0] + (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) * (h / 6.0),
        v[1] + (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) * (h / 6.0),
    ];
    let col_phase = (I * kap * (sign * h)).exp();
    [
        w[0] * (-I * k * h).exp() * col_phase,
        w[1] * (I * k * h).exp() * col_phase,
    ]
}

/// One column of Ψ₁ (`Left`) or Ψ₂ (`Right`) at `(x_eval, k)`, with an explicit maximal step.
pub fn jost_column_with_step(
    datum: &InitialDatum,
    side: Side,
    col: usize,
    k: C64,
    x_eval: f64,
    max_step: f64,
) -> Result<[C64; 2]> {
    let x_start = match side {
        Side::Left => datum.exact_left(),
        Side::Right => datum.exact_right(),
    };
    let inside_tail = match side {
        Side::Left => x_eval <= x_start,
        Side::Right => x_eval >= x_start,
    };
    if inside_tail {
        return tail_column(datum, side, col, k, x_eval);
    }
    let mut v = tail_column(datum, side, col, k, x_start)?;
    let kap = kappa(side, k, datum.background.b);
    let sign = if col == 0 { 1.0 } else { -1.0 };

    let (lo, hi) = if x_start < x_eval {
        (x_start, x_eval)
    } else {
        (x_eval, x_start)
    };
    let mut knots: Vec<f64> = datum
        .breakpoints()
        .into_iter()
        .filter(|&p| p > lo && p < hi)
        .collect();
    // Grid nodes as knots keep every step inside one cell of the piecewise-cubic interpolant.
    let j0 = ((lo - datum.x0) / datum.dx).floor().max(0.0) as usize;
    let j1 = (((hi - datum.x0) / datum.dx).ceil().max(0.0) as usize).min(datum.len());
    knots.extend(
        (j0..j1)
            .map(|j| datum.grid_x(j))
            .filter(|&x| x > lo && x < hi),
    );
    knots.push(lo);
    knots.push(hi);
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    if side == Side::Right {
        knots.reverse();
    }
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = ((b - a).abs() / max_step).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        // Nudge the samples off the piece ends so one-sided limits are used at jumps.
        let eps = 1e-13 * (1.0 + a.abs().max(b.abs()));
        let dir = h.signum();
        let mut cur = coupling(datum, a + dir * eps);
        for j in 0..n {
            let x = a + h * j as f64;
            let mid = coupling(datum, x + 0.5 * h);
            let x_end = if j + 1 == n { b - dir * eps } else { x + h };
            let end = coupling(datum, x_end);
            v = lawson_rk4(&cur, &mid, &end, k, kap, sign, h, v);
            cur = if j + 1 == n {
                end
            } else {
                coupling(datum, x + h)
            };
        }
        if !(v[0].re.is_finite()
            && v[0].im.is_finite()
            && v[1].re.is_finite()
            && v[1].im.is_finite())
        {
            return Err(Error::Numerical(format!(
                "Jost integration overflowed at k = {k} (step {max_step:.3e})"
            )));
        }
    }
    Ok(v)
}

pub fn jost_column(
    datum: &InitialDatum,
    side: Side,
    col: usize,
    k: C64,
    x_eval: f64,
    opts: &JostOptions,
) -> Result<[C64; 2]> {
    jost_column_with_step(datum, side, col, k, x_eval, opts.max_step(datum, k))
}

/// Full Ψ₁ (`Left`) or Ψ₂ (`Right`) at `(x_eval, k)`, t = 0.
pub fn integrate_jost(datum: &InitialDatum, side: Side, k: C64, x_eval: f64) -> Result<JostMatrix> {
    integrate_jost_with(datum, side, k, x_eval, &JostOptions::default())
}

pub fn integrate_jost_with(
    datum: &InitialDatum,
    side: Side,
    k: C64,
    x_eval: f64,
    opts: &JostOptions,
) -> Result<JostMatrix> {
    let c0 = jost_column(datum, side, 0, k, x_eval, opts)?;
    let c1 = jost_column(datum, side, 1, k, x_eval, opts)?;
    Ok(JostMatrix {
        side,
        x: x_eval,
        k,
        m: [[c0[0], c1[0]], [c0[1], c1[1]]],
    })
}

pub fn det2(u: [C64; 2], v: [C64; 2]) -> C64 {
    u[0] * v[1] - u[1] * v[0]
}
