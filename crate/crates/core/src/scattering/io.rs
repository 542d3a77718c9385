//! CSV forms of initial data and scattering tables.

use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;

use super::datum::InitialDatum;
use super::numeric::ScatteringRow;
use crate::error::{Error, Result};
use crate::params::StepParams;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Writes `# key=value` header lines followed by `x,re,im` rows.
pub fn write_datum_csv<W: Write>(datum: &InitialDatum, mut out: W) -> Result<()> {
    let p = datum.background;
    writeln!(out, "# A={}", p.a)?;
    writeln!(out, "# B={}", p.b)?;
    writeln!(out, "# R={}", p.r)?;
    writeln!(out, "# left_tail_bound={}", datum.left_tail_bound)?;
    writeln!(out, "# right_tail_bound={}", datum.right_tail_bound)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "re", "im"])
        .map_err(|e| parse_err(e.to_string()))?;
    for (j, q) in datum.samples.iter().enumerate() {
        w.write_record([
            datum.grid_x(j).to_string(),
            q.re.to_string(),
            q.im.to_string(),
        ])
        .map_err(|e| parse_err(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_datum_csv<R: BufRead>(input: R) -> Result<InitialDatum> {
    let mut header = std::collections::HashMap::new();
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("bad header value in '{line}'")))?;
                header.insert(k.trim().to_string(), v);
            }
        } else {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let get = |k: &str| {
        header
            .get(k)
            .copied()
            .ok_or_else(|| parse_err(format!("missing header field {k}")))
    };
    let params = StepParams::new(get("A")?, get("B")?, get("R")?)?;
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut xs = Vec::new();
    let mut qs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(e.to_string()))?;
        if rec.len() != 3 {
            return Err(parse_err("datum rows need exactly x,re,im"));
        }
        let f = |i: usize| -> Result<f64> {
            rec[i]
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad number '{}'", &rec[i])))
        };
        xs.push(f(0)?);
        qs.push(C64::new(f(1)?, f(2)?));
    }
    if xs.len() < 2 {
        return Err(parse_err("datum needs at least two rows"));
    }
    let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    for (j, &x) in xs.iter().enumerate() {
        if (x - (xs[0] + dx * j as f64)).abs() > 1e-9 * dx {
            return Err(parse_err(format!("grid is not uniform at row {j}")));
        }
    }
    InitialDatum::from_samples(
        params,
        xs[0],
        dx,
        qs,
        get("left_tail_bound")?,
        get("right_tail_bound")?,
    )
}

/// Writes `k,re_a1,im_a1,re_a2,im_a2,re_b,im_b` for rows on the real line.
pub fn write_scattering_csv<W: Write>(rows: &[ScatteringRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "re_a1", "im_a1", "re_a2", "im_a2", "re_b", "im_b"])
        .map_err(|e| parse_err(e.to_string()))?;
    for r in rows {
        let (Some(a1), Some(a2), Some(b)) = (r.a1, r.a2, r.b) else {
            return Err(Error::InvalidParam(format!(
                "row at k = {} is not on the real line",
                r.k
            )));
        };
        w.write_record([r.k.re, a1.re, a1.im, a2.re, a2.im, b.re, b.im].map(|v| v.to_string()))
            .map_err(|e| parse_err(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scattering_csv<R: std::io::Read>(input: R) -> Result<Vec<ScatteringRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(e.to_string()))?;
        if rec.len() != 7 {
            return Err(parse_err("scattering rows need 7 columns"));
        }
        let v: Vec<f64> = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(format!("bad number '{s}'")))
            })
            .collect::<Result<_>>()?;
        rows.push(ScatteringRow {
            k: C64::new(v[0], 0.0),
            a1: Some(C64::new(v[1], v[2])),
            a2: Some(C64::new(v[3], v[4])),
            b: Some(C64::new(v[5], v[6])),
        });
    }
    Ok(rows)
}
