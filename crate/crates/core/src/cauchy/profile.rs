//! CSV dump of `δ` or `δ̂` along a list of points.

use std::io::Write;

use num_complex::Complex64 as C64;

use super::delta::{CutSide, DeltaEvaluator};
use crate::error::{Error, Result};

/// One row per point: `re_k, im_k, re_delta, im_delta, abs_delta`. Real points on the cut are
/// written as upper boundary values.
pub fn write_delta_profile<W: Write>(ev: &DeltaEvaluator, points: &[C64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re_k", "im_k", "re_delta", "im_delta", "abs_delta"])
        .map_err(|e| Error::Parse(e.to_string()))?;
    for &k in points {
        let side = if k.im == 0.0 {
            Some(CutSide::Plus)
        } else {
            None
        };
        let d = ev.eval(k, side)?;
        w.write_record([k.re, k.im, d.re, d.im, d.norm()].map(|v| v.to_string()))
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
