//! Continuous argument tracking along parametrised paths.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Refinement controls for argument tracking.
#[derive(Clone, Copy, Debug)]
pub struct ArgOptions {
    /// Largest accepted argument change between neighbouring samples.
    pub max_jump: f64,
    /// `|f|` below this value aborts tracking (path too close to a zero).
    pub floor: f64,
    /// Maximal number of bisections of an initial cell.
    pub max_depth: u32,
}

impl Default for ArgOptions {
    fn default() -> Self {
        Self {
            max_jump: PI / 8.0,
            floor: 1e-6,
            max_depth: 48,
        }
    }
}

/// One sample of a tracked path: parameter, function value, continuous argument.
#[derive(Clone, Copy, Debug)]
pub struct ArgSample {
    pub s: f64,
    pub value: C64,
    pub arg: f64,
}

/// Samples `f` on `[a, b]` (starting from `samples` uniform cells) and bisects cells until every
/// neighbouring argument change is below `max_jump`. The continuous argument starts at
/// `start_arg`, which must be a branch of `arg f(a)`.
pub fn track_argument<F>(
    f: F,
    a: f64,
    b: f64,
    samples: usize,
    start_arg: f64,
    opts: &ArgOptions,
) -> Result<Vec<ArgSample>>
where
    F: Fn(f64) -> Result<C64>,
{
    let eval = |s: f64| -> Result<C64> {
        let v = f(s)?;
        if !v.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite value while tracking the argument at {s}"
            )));
        }
        if v.norm() < opts.floor {
            return Err(Error::Numerical(format!(
                "path passes within {} of a zero at parameter {s}; perturb the contour",
                opts.floor
            )));
        }
        Ok(v)
    };
    let n = samples.max(1);
    let mut out = Vec::with_capacity(4 * n);
    let mut prev = ArgSample {
        s: a,
        value: eval(a)?,
        arg: start_arg,
    };
    out.push(prev);
    for i in 1..=n {
        let s1 = if i == n {
            b
        } else {
            a + (b - a) * i as f64 / n as f64
        };
        let v1 = eval(s1)?;
        // depth-first bisection of (prev, s1)
        let mut stack = vec![(s1, v1, 0u32)];
        while let Some(&(s, v, depth)) = stack.last() {
            let jump = (v / prev.value).arg();
            let sm = 0.5 * (prev.s + s);
            let vm = eval(sm)?;
            // a small jump is accepted only if the midpoint agrees, which catches whole turns
            // hidden between two samples
            let halves = (vm / prev.value).arg() + (v / vm).arg();
            if jump.abs() <= opts.max_jump && (halves - jump).abs() < 1e-9 {
                stack.pop();
                prev = ArgSample {
                    s,
                    value: v,
                    arg: prev.arg + jump,
                };
                out.push(prev);
                continue;
            }
            if depth >= opts.max_depth {
                return Err(Error::Numerical(format!(
                    "argument jump {jump:.3} unresolved near parameter {s}"
                )));
            }
            stack.push((sm, vm, depth + 1));
            // the far half keeps its own depth budget
            let last = stack.len() - 2;
            stack[last].2 = depth + 1;
        }
    }
    Ok(out)
}

/// Argument increment of `f` along `[a, b]`.
pub fn argument_increment<F>(f: F, a: f64, b: f64, samples: usize, opts: &ArgOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<C64>,
{
    let path = track_argument(f, a, b, samples, 0.0, opts)?;
    Ok(path.last().map_or(0.0, |p| p.arg))
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// Number of zeros minus poles of `f` inside `rect`, from the winding of `f` along its boundary.
pub fn count_zeros_argument_principle<F>(f: F, rect: Rect, samples_per_side: usize) -> Result<i64>
where
    F: Fn(C64) -> Result<C64>,
{
    if !(rect.x0 < rect.x1 && rect.y0 < rect.y1) {
        return Err(Error::InvalidParam(format!(
            "degenerate rectangle {rect:?}"
        )));
    }
    let corners = [
        C64::new(rect.x0, rect.y0),
        C64::new(rect.x1, rect.y0),
        C64::new(rect.x1, rect.y1),
        C64::new(rect.x0, rect.y1),
    ];
    let opts = ArgOptions::default();
    let mut total = 0.0;
    for i in 0..4 {
        let (p, q) = (corners[i], corners[(i + 1) % 4]);
        total += argument_increment(|s| f(p + (q - p) * s), 0.0, 1.0, samples_per_side, &opts)?;
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 0.05 {
        return Err(Error::Numerical(format!(
            "winding number {w} is not close to an integer"
        )));
    }
    Ok(n as i64)
}
