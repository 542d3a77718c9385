use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::config::FileConfig;
use super::{Cli, Command, Format, PointArgs, RayArgs, ScatterArgs, SimArgs};
use crate::asymptotics::{classify_ray, sweep, write_sweep_csv, RaySector};
use crate::error::{invalid, Error, Result};
use crate::params::StepParams;
use crate::scattering::{build_initial_datum, compute_scattering, default_puncture, io, GridSpec};
use crate::sim::{
    compare_period, compare_ray, evolve, initial_field, write_snapshots_csv, Divergence,
    FieldSnapshot, PeriodCheck, RayComparison, SimConfig,
};
use crate::spectrum::{step_spectral_functions, winding_profile, SpectrumReport, WindingProfile};

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "NNLS_SPECTRA_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingOutput {
    pub params: StepParams,
    pub winding_at_zero_over_pi: f64,
    #[serde(flatten)]
    pub profile: WindingProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub xi: f64,
    pub label: String,
    pub m: usize,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl ClassifyOutput {
    fn new(xi: f64, s: &RaySector) -> Self {
        Self {
            xi,
            label: s.label.to_string(),
            m: s.m,
            lower: s.lower,
            upper: s.upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotJson {
    pub t: f64,
    pub half_length: f64,
    pub values: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateSummary {
    pub params: StepParams,
    pub config: SimConfig,
    pub divergence: Option<Divergence>,
    pub snapshots: Vec<SnapshotJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareOutput {
    pub params: StepParams,
    pub config: SimConfig,
    pub rays: Vec<RayComparison>,
    pub period: Option<PeriodCheck>,
}

/// One CSV line of `compare`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub ray: f64,
    pub sector: String,
    pub t: f64,
    pub x: f64,
    pub re_sim: f64,
    pub im_sim: f64,
    pub re_as: f64,
    pub im_as: f64,
    pub abs_err: f64,
    pub rel_err: Option<f64>,
    pub modulus_rel_err: Option<f64>,
    pub window_rel_err: Option<f64>,
}

struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    fn emit(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match &self.dir {
            Some(d) => {
                std::fs::create_dir_all(d)?;
                std::fs::write(d.join(name), bytes)?;
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
            }
        }
        Ok(())
    }

    /// Side outputs go to stderr when there is no output directory.
    fn emit_side(&self, name: &str, bytes: &[u8]) -> Result<()> {
        match &self.dir {
            Some(_) => self.emit(name, bytes),
            None => {
                std::io::stderr().write_all(bytes)?;
                Ok(())
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Parse(e.to_string()))
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    let n =
        match std::env::var(THREADS_ENV) {
            Ok(s) if !s.trim().is_empty() => Some(s.trim().parse::<usize>().map_err(|_| {
                Error::InvalidParam(format!("{THREADS_ENV} = '{s}' is not a count"))
            })?),
            _ => flag,
        };
    if n == Some(0) {
        return invalid("thread count must be positive");
    }
    Ok(n)
}

fn params(cli: &Cli, file: &FileConfig) -> Result<StepParams> {
    let g = &cli.global;
    let bg = &file.background;
    let get = |flag: Option<f64>, f: Option<f64>, name: &str| {
        flag.or(f).ok_or_else(|| {
            Error::InvalidParam(format!("missing --{name} (or [background] {name})"))
        })
    };
    StepParams::new(
        get(g.a, bg.a, "A")?,
        get(g.b, bg.b, "B")?,
        get(g.r, bg.r, "R")?,
    )
}

fn sim_config(p: &StepParams, file: &FileConfig, args: &SimArgs) -> Result<SimConfig> {
    let mut c = SimConfig::desk(p);
    let (g, t) = (&file.grid, &file.time);
    if let Some(v) = args.half_length.or(g.half_length) {
        c.grid.half_length = v;
    }
    if let Some(v) = args.points.or(g.points) {
        c.grid.points = v;
    }
    if let Some(v) = args.mollify_width.or(g.mollify_width) {
        c.mollify_width = v;
    }
    if let Some(v) = g.seam_fraction {
        c.seam_fraction = v;
    }
    if let Some(v) = g.buffer_safety {
        c.buffer_safety = v;
    }
    if let Some(v) = g.blowup_factor {
        c.blowup_factor = v;
    }
    if let Some(v) = args.dt.or(t.dt) {
        c.dt = v;
    }
    if let Some(v) = args.t_final.or(t.t_final) {
        c.t_final = v;
        if args.snapshots.is_none() && t.snapshots.is_none() {
            c.snapshot_times = (1..=4).map(|j| v * j as f64 / 4.0).collect();
        }
    }
    if let Some(v) = args.snapshots.clone().or_else(|| t.snapshots.clone()) {
        c.snapshot_times = v;
    }
    c.validate(p)?;
    Ok(c)
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.global.format.unwrap_or(default)
}

fn json_only(cli: &Cli, what: &str) -> Result<()> {
    if cli.global.format == Some(Format::Csv) {
        return invalid(format!(
            "conflicting options: `{what}` emits JSON only, but --format csv was given"
        ));
    }
    Ok(())
}

pub(super) fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = thread_count(cli.global.threads)? {
        // a second initialisation in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let file = match &cli.global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let p = params(cli, &file)?;
    let sink = Sink {
        dir: cli.global.out.clone(),
    };
    if cli.global.seed_report {
        sink.emit_side(
            "spectrum_report.json",
            &to_json(&SpectrumReport::for_step(p)?)?,
        )?;
    }
    match &cli.command {
        Command::Scatter(a) => scatter(cli, &sink, p, a),
        Command::Zeros => {
            json_only(cli, "zeros")?;
            sink.emit("zeros.json", &to_json(&SpectrumReport::for_step(p)?)?)
        }
        Command::Winding => {
            json_only(cli, "winding")?;
            let profile = winding_profile(&step_spectral_functions(p))?;
            let out = WindingOutput {
                params: p,
                winding_at_zero_over_pi: profile.winding_at_zero / std::f64::consts::PI,
                profile,
            };
            sink.emit("winding.json", &to_json(&out)?)
        }
        Command::Classify(a) => classify(cli, &sink, p, a),
        Command::Asymptote(a) => asymptote(cli, &sink, p, a),
        Command::Simulate(a) => simulate(cli, &sink, p, &file, a),
        Command::Compare(a) => compare(cli, &sink, p, &file, a),
    }
}

fn scatter(cli: &Cli, sink: &Sink, p: StepParams, a: &ScatterArgs) -> Result<()> {
    if a.k_count == 0
        || !(a.k_min.is_finite() && a.k_max.is_finite())
        || (a.k_count > 1 && !(a.k_min < a.k_max))
    {
        return invalid(format!(
            "bad k grid [{}, {}] with {} points",
            a.k_min, a.k_max, a.k_count
        ));
    }
    if !(a.mollify >= 0.0) || a.x_points < 2 {
        return invalid("mollify width must be non-negative and the x grid needs two points");
    }
    let half_width = (p.r + a.mollify + 1.0).max(2.0);
    let datum = build_initial_datum(
        p,
        None,
        a.mollify,
        GridSpec {
            half_width,
            points: a.x_points,
        },
    )?;
    let step = if a.k_count > 1 {
        (a.k_max - a.k_min) / (a.k_count - 1) as f64
    } else {
        0.0
    };
    let grid: Vec<C64> = (0..a.k_count)
        .map(|j| C64::new(a.k_min + step * j as f64, 0.0))
        .collect();
    let table = compute_scattering(&datum, &grid, default_puncture(p.b))?;
    match format_or(cli, Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            io::write_scattering_csv(&table.rows, &mut buf)?;
            sink.emit("scatter.csv", &buf)
        }
        Format::Json => sink.emit("scatter.json", &to_json(&table.rows)?),
    }
}

fn classify(cli: &Cli, sink: &Sink, p: StepParams, a: &RayArgs) -> Result<()> {
    let report = SpectrumReport::for_step(p)?;
    let out = ClassifyOutput::new(a.xi, &classify_ray(a.xi, &report)?);
    match format_or(cli, Format::Json) {
        Format::Json => sink.emit("classify.json", &to_json(&out)?),
        Format::Csv => sink.emit("classify.csv", &csv_rows(&[out])?),
    }
}

fn asymptote(cli: &Cli, sink: &Sink, p: StepParams, a: &PointArgs) -> Result<()> {
    if !(a.t > 0.0 && a.t.is_finite() && a.xi.is_finite()) {
        return invalid(format!(
            "need finite xi and t > 0, got xi = {}, t = {}",
            a.xi, a.t
        ));
    }
    let report = SpectrumReport::for_step(p)?;
    let data = step_spectral_functions(p);
    let x = 4.0 * a.xi * a.t;
    let row = sweep(&[(x, a.t)], &data, &report)
        .pop()
        .expect("one point")?;
    match format_or(cli, Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(&[row], &mut buf)?;
            sink.emit("asymptote.csv", &buf)
        }
        Format::Json => sink.emit("asymptote.json", &to_json(&row)?),
    }
}

fn divergence_error(d: &Divergence) -> Error {
    Error::BlowUp {
        t: d.t,
        reason: format!("|q| = {:.3e} exceeds {:.3e}", d.max_abs, d.threshold),
    }
}

fn simulate(cli: &Cli, sink: &Sink, p: StepParams, file: &FileConfig, a: &SimArgs) -> Result<()> {
    let config = sim_config(&p, file, a)?;
    let q0 = initial_field(&p, &config)?;
    let ev = evolve(&q0, &config)?;
    match format_or(cli, Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_snapshots_csv(&ev.snapshots, &mut buf)?;
            sink.emit("snapshots.csv", &buf)?;
        }
        Format::Json => {
            let snapshots = ev
                .snapshots
                .iter()
                .map(|s: &FieldSnapshot| SnapshotJson {
                    t: s.t,
                    half_length: s.grid.half_length,
                    values: s.values.clone(),
                })
                .collect();
            let out = SimulateSummary {
                params: p,
                config: config.clone(),
                divergence: ev.divergence.clone(),
                snapshots,
            };
            sink.emit("snapshots.json", &to_json(&out)?)?;
        }
    }
    match &ev.divergence {
        Some(d) => Err(divergence_error(d)),
        None => Ok(()),
    }
}

fn compare(cli: &Cli, sink: &Sink, p: StepParams, file: &FileConfig, a: &SimArgs) -> Result<()> {
    let config = sim_config(&p, file, a)?;
    let rays = a
        .rays
        .clone()
        .or_else(|| file.compare.rays.clone())
        .unwrap_or_else(|| {
            let b = p.b.abs();
            vec![-2.0 * b, 2.0 * b]
        });
    let window = match (&a.period_window, file.compare.period_window) {
        (Some(v), _) if v.len() == 2 => Some([v[0], v[1]]),
        (Some(v), _) => return invalid(format!("--period-window needs two rays, got {}", v.len())),
        (None, Some(w)) => Some(w),
        (None, None) if p.b < 0.0 => Some([0.2 * p.b.abs(), 0.6 * p.b.abs()]),
        _ => None,
    };
    let report = SpectrumReport::for_step(p)?;
    let data = step_spectral_functions(p);
    for &xi in &rays {
        classify_ray(xi, &report)?;
    }
    let q0 = initial_field(&p, &config)?;
    let ev = evolve(&q0, &config)?;
    if let Some(d) = &ev.divergence {
        return Err(divergence_error(d));
    }
    let results = rays
        .iter()
        .map(|&xi| compare_ray(&ev.snapshots, &config, &data, &report, xi))
        .collect::<Result<Vec<_>>>()?;
    let period = match (window, ev.snapshots.last()) {
        (Some([lo, hi]), Some(last)) => Some(compare_period(last, &config, p.b, lo, hi)?),
        _ => None,
    };
    match format_or(cli, Format::Json) {
        Format::Json => {
            let out = CompareOutput {
                params: p,
                config,
                rays: results,
                period,
            };
            sink.emit("compare.json", &to_json(&out)?)
        }
        Format::Csv => {
            let records: Vec<CompareRecord> = results
                .iter()
                .flat_map(|c| {
                    c.rows.iter().map(move |r| CompareRecord {
                        ray: c.xi,
                        sector: c.sector.label.to_string(),
                        t: r.t,
                        x: r.x,
                        re_sim: r.q_sim.re,
                        im_sim: r.q_sim.im,
                        re_as: r.q_as.re,
                        im_as: r.q_as.im,
                        abs_err: r.abs_err,
                        rel_err: r.rel_err,
                        modulus_rel_err: r.modulus_rel_err,
                        window_rel_err: r.window_rel_err,
                    })
                })
                .collect();
            sink.emit("compare.csv", &csv_rows(&records)?)?;
            if let Some(pc) = period {
                sink.emit_side("period.json", &to_json(&pc)?)?;
            }
            Ok(())
        }
    }
}
