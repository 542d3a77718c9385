//! Grid-sampled initial data with exact analytic tails.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::params::StepParams;

const I: C64 = C64::new(0.0, 1.0);

/// Uniform grid on `[−half_width, half_width]` with `points` nodes (both ends included).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }
}

/// Compactly supported perturbation added to the background step.
#[derive(Clone)]
pub struct Perturbation {
    pub support: (f64, f64),
    profile: Arc<dyn Fn(f64) -> C64 + Send + Sync>,
}

impl fmt::Debug for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Perturbation")
            .field("support", &self.support)
            .finish()
    }
}

impl Perturbation {
    /// Wraps `profile`; values outside `support` are ignored.
    pub fn new(
        support: (f64, f64),
        profile: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(support.0 < support.1) || !support.0.is_finite() || !support.1.is_finite() {
            return invalid(format!("bad perturbation support {support:?}"));
        }
        Ok(Self {
            support,
            profile: Arc::new(profile),
        })
    }

    /// Smooth bump `c·exp(1 − 1/(1 − s²))`, `s = (x − center)/half_width`, supported on the interval.
    pub fn bump(center: f64, half_width: f64, amplitude: C64) -> Result<Self> {
        if !(half_width > 0.0) {
            return invalid("bump half-width must be positive");
        }
        Self::new((center - half_width, center + half_width), move |x| {
            let s = (x - center) / half_width;
            if s.abs() >= 1.0 {
                C64::new(0.0, 0.0)
            } else {
                amplitude * (1.0 - 1.0 / (1.0 - s * s)).exp()
            }
        })
    }

    pub fn eval(&self, x: f64) -> C64 {
        if x <= self.support.0 || x >= self.support.1 {
            C64::new(0.0, 0.0)
        } else {
            (self.profile)(x)
        }
    }
}

/// C^∞ transition from 0 (s ≤ 0) to 1 (s ≥ 1).
pub fn smooth_transition(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let f = |z: f64| (-1.0 / z).exp();
    let u = f(s);
    u / (u + f(1.0 - s))
}

/// Sharp step value: 0 for `x ≤ R`, `A·e^{2iBx}` beyond.
pub fn sharp_step(p: &StepParams, x: f64) -> C64 {
    if x <= p.r {
        C64::new(0.0, 0.0)
    } else {
        plane_wave(p, x)
    }
}

pub fn plane_wave(p: &StepParams, x: f64) -> C64 {
    p.a * (2.0 * I * p.b * x).exp()
}

/// Step smoothed over `[R − w, R + w]`; `w = 0` gives the sharp step.
pub fn mollified_step_value(p: &StepParams, width: f64, x: f64) -> C64 {
    if width == 0.0 {
        return sharp_step(p, x);
    }
    let s = smooth_transition((x - (p.r - width)) / (2.0 * width));
    if s == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        plane_wave(p, x) * s
    }
}

/// Sampled initial profile. Between the tail bounds the profile is the sharp background step plus
/// an interpolated residual; outside it is the exact tail.
#[derive(Clone, Debug)]
pub struct InitialDatum {
    pub background: StepParams,
    pub x0: f64,
    pub dx: f64,
    pub samples: Vec<C64>,
    pub left_tail_bound: f64,
    pub right_tail_bound: f64,
    residual: Vec<C64>,
}

/// Interpolation segments inside the tail bounds. The residual can jump only at `R`.
#[derive(Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    include_lo: bool,
}

impl InitialDatum {
    /// Assembles a datum from raw samples, validating the tail invariants.
    pub fn from_samples(
        background: StepParams,
        x0: f64,
        dx: f64,
        samples: Vec<C64>,
        left_tail_bound: f64,
        right_tail_bound: f64,
    ) -> Result<Self> {
        if samples.len() < 2 || !(dx > 0.0) || !x0.is_finite() {
            return invalid("datum needs at least two samples on an increasing uniform grid");
        }
        if !(left_tail_bound <= right_tail_bound) {
            return invalid(format!(
                "left tail bound {left_tail_bound} exceeds right tail bound {right_tail_bound}"
            ));
        }
        if background.b != 0.0 && dx > std::f64::consts::PI / (2.0 * background.b.abs()) {
            return invalid(format!(
                "grid spacing {dx} too coarse for background oscillation period {}",
                std::f64::consts::PI / background.b.abs()
            ));
        }
        let x_last = x0 + dx * (samples.len() - 1) as f64;
        let reach = left_tail_bound.abs().max(right_tail_bound.abs());
        if x0 > -reach + 1e-12 * reach.max(1.0) || x_last < reach - 1e-12 * reach.max(1.0) {
            return invalid(format!(
                "grid [{x0}, {x_last}] must cover ±{reach} (reflected tail bounds)"
            ));
        }
        let mut residual = Vec::with_capacity(samples.len());
        for (j, &q) in samples.iter().enumerate() {
            let x = x0 + dx * j as f64;
            let tol = 1e-12 * (1.0 + background.a);
            if x <= left_tail_bound && q.norm() > tol {
                return invalid(format!(
                    "sample at x = {x} left of the tail bound is not zero"
                ));
            }
            if x >= right_tail_bound
                && x > left_tail_bound
                && (q - plane_wave(&background, x)).norm() > tol
            {
                return invalid(format!(
                    "sample at x = {x} right of the tail bound differs from A e^(2iBx)"
                ));
            }
            residual.push(q - sharp_step(&background, x));
        }
        Ok(Self {
            background,
            x0,
            dx,
            samples,
            left_tail_bound,
            right_tail_bound,
            residual,
        })
    }

    pub fn grid_x(&self, j: usize) -> f64 {
        self.x0 + self.dx * j as f64
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Points where `q(x)` or `q(−x)` may be non-smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let r = self.background.r;
        let mut v = vec![
            self.left_tail_bound,
            -self.left_tail_bound,
            self.right_tail_bound,
            -self.right_tail_bound,
            r,
            -r,
        ];
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Largest abscissa left of which `q(x) = 0` and `q(−x) = A e^{−2iBx}` exactly.
    pub fn exact_left(&self) -> f64 {
        self.left_tail_bound.min(-self.right_tail_bound)
    }

    /// Smallest abscissa right of which `q(x) = A e^{2iBx}` and `q(−x) = 0` exactly.
    pub fn exact_right(&self) -> f64 {
        self.right_tail_bound.max(-self.left_tail_bound)
    }

    pub fn max_modulus(&self) -> f64 {
        self.samples
            .iter()
            .map(|q| q.norm())
            .fold(self.background.a, f64::max)
    }

    fn segment_of(&self, x: f64) -> Segment {
        let (l, r, rr) = (
            self.left_tail_bound,
            self.right_tail_bound,
            self.background.r,
        );
        if rr > l && rr < r {
            if x <= rr {
                Segment {
                    lo: l,
                    hi: rr,
                    include_lo: true,
                }
            } else {
                Segment {
                    lo: rr,
                    hi: r,
                    include_lo: false,
                }
            }
        } else {
            Segment {
                lo: l,
                hi: r,
                include_lo: true,
            }
        }
    }

    fn residual_at(&self, x: f64) -> C64 {
        let seg = self.segment_of(x);
        let n = self.samples.len() as isize;
        // Index range of grid nodes inside the segment.
        let lo_f = (seg.lo - self.x0) / self.dx;
        let mut first = (lo_f.ceil() as isize - 1).max(0);
        let inside = |j: isize| {
            let xj = self.grid_x(j as usize);
            if seg.include_lo {
                xj >= seg.lo
            } else {
                xj > seg.lo
            }
        };
        while first < n && !inside(first) {
            first += 1;
        }
        let mut last = (((seg.hi - self.x0) / self.dx).floor() as isize + 1).min(n - 1);
        // nodes are classified exactly as the residual was built
        while last >= 0 && self.grid_x(last as usize) > seg.hi {
            last -= 1;
        }
        let first = first.max(0);
        if last < first {
            return C64::new(0.0, 0.0);
        }
        let count = (last - first + 1).min(4);
        let j = ((x - self.x0) / self.dx).floor() as isize;
        let mut start = j - 1;
        start = start.min(last - count + 1).max(first);
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..count {
            let im = start + m;
            let xm = self.grid_x(im as usize);
            let mut w = 1.0;
            for l in 0..count {
                if l != m {
                    let xl = self.grid_x((start + l) as usize);
                    w *= (x - xl) / (xm - xl);
                }
            }
            acc += self.residual[im as usize] * w;
        }
        acc
    }

    /// `q(x)` for any real `x`.
    pub fn potential(&self, x: f64) -> C64 {
        if x <= self.left_tail_bound {
            return C64::new(0.0, 0.0);
        }
        if x >= self.right_tail_bound {
            return plane_wave(&self.background, x);
        }
        sharp_step(&self.background, x) + self.residual_at(x)
    }
}

/// Builds the datum `q₀ = (mollified) step + perturbation` on the requested grid.
pub fn build_initial_datum(
    params: StepParams,
    perturbation: Option<&Perturbation>,
    mollify_width: f64,
    grid: GridSpec,
) -> Result<InitialDatum> {
    if !(mollify_width >= 0.0) {
        return invalid("mollify width must be non-negative");
    }
    if grid.points < 2 || !(grid.half_width > 0.0) {
        return invalid("grid needs a positive half-width and at least two points");
    }
    let dx = grid.spacing();
    let x0 = -grid.half_width;
    let mut left = params.r - mollify_width;
    let mut right = params.r + mollify_width;
    if mollify_width == 0.0 {
        left = params.r;
        right = params.r;
    }
    if let Some(p) = perturbation {
        if p.support.0 < -grid.half_width || p.support.1 > grid.half_width {
            return invalid(format!(
                "perturbation support {:?} outside grid [-{}, {}]",
                p.support, grid.half_width, grid.half_width
            ));
        }
        left = left.min(p.support.0);
        right = right.max(p.support.1);
    }
    let samples = (0..grid.points)
        .map(|j| {
            let x = x0 + dx * j as f64;
            let mut q = mollified_step_value(&params, mollify_width, x);
            if let Some(p) = perturbation {
                q += p.eval(x);
            }
            q
        })
        .collect();
    InitialDatum::from_samples(params, x0, dx, samples, left, right).map_err(|e| match e {
        Error::InvalidParam(m) => Error::InvalidParam(format!("cannot build datum: {m}")),
        other => other,
    })
}
