use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::field::FieldSnapshot;
use crate::asymptotics::{classify_ray, RayFormula, RaySector};
use crate::error::{invalid, Error, Result};
use crate::scattering::ScatteringData;
use crate::spectrum::SpectrumReport;

/// Simulated and asymptotic values at one node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub t: f64,
    pub x: f64,
    pub xi: f64,
    pub q_sim: C64,
    pub q_as: C64,
    pub abs_err: f64,
    /// `|q_sim − q_as|/|q_as|`; `None` where the leading term vanishes.
    pub rel_err: Option<f64>,
    /// `||q_sim| − |q_as||/|q_as|`.
    pub modulus_rel_err: Option<f64>,
    /// `‖q_sim − q_as‖₂/‖q_as‖₂` over one background period `|x − x₀| ≤ π/(2|B|)`, each node
    /// compared with the formula of its own ray.
    pub window_rel_err: Option<f64>,
}

/// Least-squares fit of `log|q_sim|` against `log t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayComparison {
    pub xi: f64,
    pub sector: RaySector,
    pub rows: Vec<CompareRow>,
    pub slope: Option<SlopeFit>,
}

fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Compares the snapshots along the ray `x = 4ξt` with the leading asymptotic term.
/// Snapshots whose node falls outside the trusted region are dropped.
pub fn compare_ray(
    snapshots: &[FieldSnapshot],
    config: &SimConfig,
    data: &ScatteringData,
    report: &SpectrumReport,
    xi: f64,
) -> Result<RayComparison> {
    let sector = classify_ray(xi, report)?;
    let formula = RayFormula::prepare(xi, sector, data, report)?;
    let (lo, hi) = config.trusted_region();
    let picked: Vec<&FieldSnapshot> = snapshots
        .iter()
        .filter(|s| s.t > 0.0 && s.grid == config.grid)
        .filter(|s| {
            let x = 4.0 * xi * s.t;
            x >= lo && x <= hi
        })
        .collect();
    if picked.is_empty() {
        return Err(Error::OutOfDomain(format!(
            "empty cone after buffer exclusion: ray xi = {xi} leaves the trusted region [{lo:.3}, {hi:.3}] \
             (seam buffer {:.3})",
            config.seam_buffer()
        )));
    }
    let rows: Vec<CompareRow> = picked
        .par_iter()
        .map(|s| {
            let (x, q_sim) = s
                .at(4.0 * xi * s.t)
                .expect("node inside the trusted region");
            let q_as = formula.eval_at(x, s.t)?.value;
            let abs_err = (q_sim - q_as).norm();
            let m = q_as.norm();
            let (rel_err, modulus_rel_err) = if m > 0.0 {
                (Some(abs_err / m), Some((q_sim.norm() - m).abs() / m))
            } else {
                (None, None)
            };
            let window_rel_err = if m > 0.0 {
                window_error(s, x, data, report)?
            } else {
                None
            };
            Ok(CompareRow {
                t: s.t,
                x,
                xi: x / (4.0 * s.t),
                q_sim,
                q_as,
                abs_err,
                rel_err,
                modulus_rel_err,
                window_rel_err,
            })
        })
        .collect::<Result<_>>()?;
    let slope = match formula.decay_power() {
        Some(expected) if rows.len() >= 2 => {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .map(|r| (r.t.ln(), r.q_sim.norm().ln()))
                .collect();
            let (slope, intercept) = fit_line(&pts);
            Some(SlopeFit {
                slope,
                intercept,
                expected,
            })
        }
        _ => None,
    };
    Ok(RayComparison {
        xi,
        sector,
        rows,
        slope,
    })
}

fn window_error(
    s: &FieldSnapshot,
    x0: f64,
    data: &ScatteringData,
    report: &SpectrumReport,
) -> Result<Option<f64>> {
    let b = data.wavenumber();
    let half = if b == 0.0 { 1.0 } else { PI / (2.0 * b.abs()) };
    let g = s.grid;
    let (Some(j0), Some(j1)) = (g.nearest(x0 - half), g.nearest(x0 + half)) else {
        return Ok(None);
    };
    let sums = (j0..=j1)
        .into_par_iter()
        .map(|j| -> Result<Option<(f64, f64)>> {
            let x = g.x(j);
            let xi = x / (4.0 * s.t);
            let Ok(sector) = classify_ray(xi, report) else {
                return Ok(None);
            };
            let q_as = RayFormula::prepare(xi, sector, data, report)?
                .eval_at(x, s.t)?
                .value;
            Ok(Some(((s.values[j] - q_as).norm_sqr(), q_as.norm_sqr())))
        })
        .collect::<Result<Vec<_>>>()?;
    if sums.iter().any(Option::is_none) {
        return Ok(None);
    }
    let (e, r) = sums
        .into_iter()
        .flatten()
        .fold((0.0, 0.0), |a, v| (a.0 + v.0, a.1 + v.1));
    Ok((r > 0.0).then(|| (e / r).sqrt()))
}

/// Dominant spatial period of `|q|` over `[x_lo, x_hi]`, from the peak of a zero-padded,
/// Hann-windowed FFT with parabolic refinement.
pub fn measure_period(snapshot: &FieldSnapshot, x_lo: f64, x_hi: f64) -> Result<f64> {
    let g = snapshot.grid;
    let (Some(j0), Some(j1)) = (g.nearest(x_lo), g.nearest(x_hi)) else {
        return invalid(format!("window [{x_lo}, {x_hi}] leaves the grid"));
    };
    if j1 < j0 + 16 {
        return invalid(format!("window [{x_lo}, {x_hi}] holds fewer than 16 nodes"));
    }
    let samples: Vec<f64> = snapshot.values[j0..=j1].iter().map(|v| v.norm()).collect();
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let padded = (16 * n).next_power_of_two();
    let mut buf = vec![C64::new(0.0, 0.0); padded];
    for (j, v) in samples.iter().enumerate() {
        let w = 0.5 - 0.5 * (2.0 * PI * j as f64 / (n - 1) as f64).cos();
        buf[j] = C64::new((v - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let power: Vec<f64> = buf[..padded / 2].iter().map(|c| c.norm_sqr()).collect();
    // skip the bins dominated by the window's main lobe around zero frequency
    let first = 2 * padded / n + 1;
    let (peak, _) = power
        .iter()
        .enumerate()
        .skip(first)
        .take(padded / 2 - first - 1)
        .fold(
            (first, f64::MIN),
            |acc, (j, &p)| if p > acc.1 { (j, p) } else { acc },
        );
    let (a, b, c) = (power[peak - 1].ln(), power[peak].ln(), power[peak + 1].ln());
    let shift = if (a - 2.0 * b + c).abs() > 0.0 {
        0.5 * (a - c) / (a - 2.0 * b + c)
    } else {
        0.0
    };
    let freq = (peak as f64 + shift) / (padded as f64 * g.spacing());
    Ok(1.0 / freq)
}

/// Measured and predicted `x`-period of `|q|` in the middle sector for `B < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodCheck {
    pub t: f64,
    pub measured: f64,
    pub expected: f64,
    /// `|measured − expected|` in grid spacings.
    pub grid_cells: f64,
}

/// Period of `|q|` over the rays `ξ ∈ [xi_lo, xi_hi]` against `π/(2|B|)`.
pub fn compare_period(
    snapshot: &FieldSnapshot,
    config: &SimConfig,
    b: f64,
    xi_lo: f64,
    xi_hi: f64,
) -> Result<PeriodCheck> {
    if !(b < 0.0) {
        return invalid(format!("periodic oscillations need B < 0, got {b}"));
    }
    if !(snapshot.t > 0.0) || !(xi_lo < xi_hi) {
        return invalid("need t > 0 and an increasing ray interval");
    }
    let (lo, hi) = config.trusted_region();
    let (x_lo, x_hi) = (4.0 * xi_lo * snapshot.t, 4.0 * xi_hi * snapshot.t);
    if x_lo < lo || x_hi > hi {
        return Err(Error::OutOfDomain(format!(
            "empty cone after buffer exclusion: [{x_lo:.3}, {x_hi:.3}] leaves the trusted region [{lo:.3}, {hi:.3}]"
        )));
    }
    let measured = measure_period(snapshot, x_lo, x_hi)?;
    let expected = PI / (2.0 * b.abs());
    Ok(PeriodCheck {
        t: snapshot.t,
        measured,
        expected,
        grid_cells: (measured - expected).abs() / config.grid.spacing(),
    })
}
