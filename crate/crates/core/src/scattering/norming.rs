use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::datum::InitialDatum;
use super::jost::{jost_column, JostOptions, Side};
use crate::error::{Error, Result};

/// Proportionality constants `Ψ₁⁽¹⁾ = c·Ψ₂⁽²⁾` at the zeros of `a₁`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormingConstants {
    /// At `k = ik₀`; unimodular.
    pub gamma0: Option<C64>,
    /// At each `pⱼ`.
    pub etas: Vec<C64>,
    /// At each `−p̄ⱼ`; equal to `1/conj(ηⱼ)`.
    pub eta_hats: Vec<C64>,
}

const PROPORTIONALITY_TOL: f64 = 1e-6;

fn ratio_at(datum: &InitialDatum, k: C64) -> Result<C64> {
    let opts = JostOptions::default();
    let u = jost_column(datum, Side::Left, 0, k, 0.0, &opts)?;
    let v = jost_column(datum, Side::Right, 1, k, 0.0, &opts)?;
    let vv = v[0].norm_sqr() + v[1].norm_sqr();
    let c = (v[0].conj() * u[0] + v[1].conj() * u[1]) / vv;
    let res = ((u[0] - c * v[0]).norm_sqr() + (u[1] - c * v[1]).norm_sqr()).sqrt();
    let scale = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    if res > PROPORTIONALITY_TOL * scale {
        return Err(Error::Inconsistent(format!(
            "Jost columns are not proportional at k = {k} (relative residual {:.3e})",
            res / scale
        )));
    }
    Ok(c)
}

/// Norming constants at `ik₀` and at the pairs `{pⱼ, −p̄ⱼ}`.
pub fn norming_constants(
    datum: &InitialDatum,
    k0: Option<f64>,
    pairs: &[C64],
) -> Result<NormingConstants> {
    let gamma0 = match k0 {
        Some(k0) => {
            let g = ratio_at(datum, C64::new(0.0, k0))?;
            if (g.norm() - 1.0).abs() > PROPORTIONALITY_TOL {
                return Err(Error::Inconsistent(format!(
                    "|gamma0| = {} deviates from 1",
                    g.norm()
                )));
            }
            Some(g)
        }
        None => None,
    };
    let mut etas = Vec::with_capacity(pairs.len());
    let mut eta_hats = Vec::with_capacity(pairs.len());
    for &p in pairs {
        let eta = ratio_at(datum, p)?;
        let hat = ratio_at(datum, -p.conj())?;
        let expect = 1.0 / eta.conj();
        if (hat - expect).norm() > PROPORTIONALITY_TOL * expect.norm().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "norming constants at {p} and its mirror violate eta_hat = 1/conj(eta)"
            )));
        }
        etas.push(eta);
        eta_hats.push(hat);
    }
    Ok(NormingConstants {
        gamma0,
        etas,
        eta_hats,
    })
}
