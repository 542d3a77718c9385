//! Rays `ξ = x/(4t)` and the sectors they fall into.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{Case, SpectrumReport};

/// `θ(k, ξ) = 4kξ + 2k²`, stationary at `k = −ξ`.
pub fn phase_theta(k: C64, xi: f64) -> C64 {
    4.0 * k * xi + 2.0 * k * k
}

/// Sector kinds when the winding count `n` is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindingKind {
    /// `−Re p_{n−m} < ξ < −ω_{n−m+1}`: plane wave with a rational prefactor.
    PlaneWave,
    /// `ω_{n−m+1} < ξ < Re p_{n−m}`: decay.
    DecayLeft,
    /// `−ω_{n−m} < ξ < −Re p_{n−m}`: decay.
    DecayRight,
    /// `Re p_{n−m} < ξ < ω_{n−m}`: reciprocal plane wave.
    InversePlaneWave,
    /// `0 < |ξ| < |B|`, `B > 0`: decay.
    MiddleDecay,
    /// `0 < |ξ| < |B|`, `B < 0`: periodic oscillations.
    MiddlePeriodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectorLabel {
    #[serde(rename = "ZM_decay_left")]
    ZmDecayLeft,
    #[serde(rename = "plane_wave_right")]
    PlaneWaveRight,
    #[serde(rename = "ZM_decay_mid")]
    ZmDecayMid,
    #[serde(rename = "periodic_mid")]
    PeriodicMid,
    #[serde(rename = "winding")]
    Winding(WindingKind),
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SectorLabel::ZmDecayLeft => "ZM_decay_left",
            SectorLabel::PlaneWaveRight => "plane_wave_right",
            SectorLabel::ZmDecayMid => "ZM_decay_mid",
            SectorLabel::PeriodicMid => "periodic_mid",
            SectorLabel::Winding(k) => match k {
                WindingKind::PlaneWave => "winding_plane_wave",
                WindingKind::DecayLeft => "winding_decay_left",
                WindingKind::DecayRight => "winding_decay_right",
                WindingKind::InversePlaneWave => "winding_inverse_plane_wave",
                WindingKind::MiddleDecay => "winding_middle_decay",
                WindingKind::MiddlePeriodic => "winding_middle_periodic",
            },
        };
        f.write_str(s)
    }
}

/// Sector of a ray: label, index `m` and the open interval `(lower, upper)` of `ξ`
/// (`None` for an infinite end).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaySector {
    pub label: SectorLabel,
    pub m: usize,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl RaySector {
    pub fn contains(&self, xi: f64) -> bool {
        self.lower.is_none_or(|l| xi > l) && self.upper.is_none_or(|u| xi < u)
    }
}

/// Relative distance below which `ξ` counts as lying on a boundary ray.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Sorted list of boundary rays: `±|B|`, `±ωⱼ`, `±Re pⱼ`, and `0` in Case I.
pub fn boundary_rays(report: &SpectrumReport) -> Vec<f64> {
    let b = report.params.b.abs();
    let mut v = vec![-b, b];
    for &w in &report.omegas {
        v.push(w);
        v.push(-w);
    }
    for p in &report.pairs {
        v.push(p.re);
        v.push(-p.re);
    }
    if report.case == Case::I {
        v.push(0.0);
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn all_sectors(report: &SpectrumReport) -> Vec<RaySector> {
    let b = report.params.b;
    let babs = b.abs();
    let n = report.n;
    let mut out = Vec::new();
    let middle = |label, lower: f64, upper: f64| RaySector {
        label,
        m: 0,
        lower: Some(lower),
        upper: Some(upper),
    };
    if n == 0 {
        out.push(RaySector {
            label: SectorLabel::ZmDecayLeft,
            m: 0,
            lower: None,
            upper: Some(-babs),
        });
        out.push(RaySector {
            label: SectorLabel::PlaneWaveRight,
            m: 0,
            lower: Some(babs),
            upper: None,
        });
        let label = if b > 0.0 {
            SectorLabel::ZmDecayMid
        } else {
            SectorLabel::PeriodicMid
        };
        if report.case == Case::I {
            out.push(middle(label, -babs, 0.0));
            out.push(middle(label, 0.0, babs));
        } else {
            out.push(middle(label, -babs, babs));
        }
        return out;
    }
    // Re p_0 := −|B|, ω_0 = −|B|, ω_{n+1} = −∞; pairs are stored with Re p₁ > Re p₂ > …
    let re_p = |j: usize| {
        if j == 0 {
            -babs
        } else {
            report.pairs[j - 1].re
        }
    };
    let omega = |j: usize| -> Option<f64> {
        match j {
            0 => Some(-babs),
            j if j == n + 1 => None,
            j => Some(report.omegas[j - 1]),
        }
    };
    let winding = |kind, m, lower, upper| RaySector {
        label: SectorLabel::Winding(kind),
        m,
        lower,
        upper,
    };
    for m in 0..=n {
        let j = n - m;
        out.push(winding(
            WindingKind::PlaneWave,
            m,
            Some(-re_p(j)),
            omega(j + 1).map(|w| -w),
        ));
        out.push(winding(
            WindingKind::DecayLeft,
            m,
            omega(j + 1),
            Some(re_p(j)),
        ));
        if m < n {
            out.push(winding(
                WindingKind::DecayRight,
                m,
                omega(j).map(|w| -w),
                Some(-re_p(j)),
            ));
            out.push(winding(
                WindingKind::InversePlaneWave,
                m,
                Some(re_p(j)),
                omega(j),
            ));
        }
    }
    let kind = if b > 0.0 {
        WindingKind::MiddleDecay
    } else {
        WindingKind::MiddlePeriodic
    };
    if report.case == Case::I {
        out.push(winding(kind, n, Some(-babs), Some(0.0)));
        out.push(winding(kind, n, Some(0.0), Some(babs)));
    } else {
        out.push(winding(kind, n, Some(-babs), Some(babs)));
    }
    out
}

/// Sector of the ray `ξ`. Rays on a boundary (transition regions) are refused with
/// [`Error::BoundaryRay`], which names the sectors on either side.
pub fn classify_ray(xi: f64, report: &SpectrumReport) -> Result<RaySector> {
    if !xi.is_finite() {
        return Err(Error::InvalidParam(format!("non-finite xi {xi}")));
    }
    if report.params.b == 0.0 {
        return Err(Error::InvalidParam(
            "ray classification requires B != 0".into(),
        ));
    }
    if report.n > 0 && (report.omegas.len() != report.n || report.pairs.len() < report.n) {
        return Err(Error::Inconsistent(format!(
            "winding count n = {} needs {} omegas and pairs, got {} and {}",
            report.n,
            report.n,
            report.omegas.len(),
            report.pairs.len()
        )));
    }
    let sectors = all_sectors(report);
    for &r in &boundary_rays(report) {
        if (xi - r).abs() <= BOUNDARY_TOL * r.abs().max(1.0) {
            let name = |x: f64| {
                sectors
                    .iter()
                    .find(|s| s.contains(x))
                    .map_or_else(|| "none".to_string(), |s| s.label.to_string())
            };
            let gap = 1e-6 * r.abs().max(1.0);
            return Err(Error::BoundaryRay {
                xi,
                boundary: r,
                below: name(r - gap),
                above: name(r + gap),
            });
        }
    }
    sectors.into_iter().find(|s| s.contains(xi)).ok_or_else(|| {
        Error::Inconsistent(format!(
            "no sector contains xi = {xi}; the boundary rays are not ordered"
        ))
    })
}
