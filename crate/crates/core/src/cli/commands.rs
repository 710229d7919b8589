use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::config::{OutputFormat, RunConfig};
use super::format::{GridAxis, Sink};
use crate::cat::{cat_state, wigner_grid, WignerMethod};
use crate::eigenstates::{full_solution, phase_series};
use crate::error::{Error, Result};
use crate::observables::uncertainty_at;

/// Parameter snapshot written next to every table.
pub fn config_meta(cfg: &RunConfig) -> Value {
    let mut v = json!({
        "preset": cfg.preset,
        "hbar": cfg.hbar,
        "x0": cfg.x0,
        "normalize": cfg.normalize,
        "mass": cfg.mass,
        "invariant": cfg.invariant,
    });
    if let Ok(p) = cfg.params() {
        v["kappa0"] = json!(p.kappa0());
    }
    v
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Config(format!("time {t} must be finite and non-negative")));
    }
    Ok(())
}

/// Times t0 + (t1 − t0) i / steps for i = 0..=steps.
pub fn time_samples(t0: f64, t1: f64, steps: usize) -> Result<Vec<f64>> {
    check_time(t0)?;
    if !(t1 > t0) || !t1.is_finite() {
        return Err(Error::Config(format!("need t1 > t0, got t0 = {t0}, t1 = {t1}")));
    }
    if steps < 2 {
        return Err(Error::Config(format!("need at least 2 steps, got {steps}")));
    }
    Ok((0..=steps)
        .map(|i| {
            if i == steps {
                t1
            } else {
                t0 + (t1 - t0) * i as f64 / steps as f64
            }
        })
        .collect())
}

/// Density of ψ₀ (`single`) or of the two-packet state.
pub fn run_density(cfg: &RunConfig, t: f64, grid: &GridAxis, x0: Option<f64>, single: bool, sink: &Sink) -> Result<()> {
    check_time(t)?;
    let params = cfg.params()?;
    let profile = cfg.profile()?;
    let xs = grid.values();
    let mut meta = config_meta(cfg);
    meta["t"] = json!(t);
    let rows: Vec<Vec<f64>> = if single {
        meta["state"] = json!("ground");
        let psi = full_solution(&params, &profile, t, 0, cfg.normalize)?;
        xs.iter().map(|&x| vec![x, psi.value(x).norm_sqr()]).collect()
    } else {
        let x0 = x0.unwrap_or(cfg.x0);
        meta["state"] = json!("two-packet");
        meta["x0"] = json!(x0);
        let cat = cat_state(&params, &profile, t, x0, cfg.normalize)?;
        xs.iter().map(|&x| vec![x, cat.density(x)]).collect()
    };
    sink.write_table(&["x", "rho"], &rows, &meta)
}

pub fn run_uncertainty(cfg: &RunConfig, t0: f64, t1: f64, steps: usize, sink: &Sink) -> Result<()> {
    let times = time_samples(t0, t1, steps)?;
    let params = cfg.params()?;
    let profile = cfg.profile()?;
    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        let r = uncertainty_at(&params, &profile, t)?;
        rows.push(vec![r.t, r.dx, r.dp, r.product, r.s1_sq, r.s2_sq]);
    }
    let mut meta = config_meta(cfg);
    meta["t0"] = json!(t0);
    meta["t1"] = json!(t1);
    meta["steps"] = json!(steps);
    sink.write_table(&["t", "dx", "dp", "product", "s1_sq", "s2_sq"], &rows, &meta)
}

pub fn wigner_file_name(t: f64, format: OutputFormat) -> String {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    format!("wigner_t{t}.{ext}")
}

/// One table per time. With several times `out_dir` is required.
#[allow(clippy::too_many_arguments)]
pub fn run_wigner(
    cfg: &RunConfig,
    times: &[f64],
    x: &GridAxis,
    p: &GridAxis,
    method: WignerMethod,
    x0: Option<f64>,
    out_dir: Option<&Path>,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    if times.is_empty() {
        return Err(Error::Config("need at least one time in the t list".into()));
    }
    for &t in times {
        check_time(t)?;
    }
    if out_dir.is_none() && times.len() > 1 {
        return Err(Error::Config("several times need --out DIR".into()));
    }
    let params = cfg.params()?;
    let profile = cfg.profile()?;
    let x0 = x0.unwrap_or(cfg.x0);
    let mut written = Vec::new();
    for &t in times {
        let cat = cat_state(&params, &profile, t, x0, cfg.normalize)?;
        let grid = wigner_grid(&cat, (x.min, x.max), (p.min, p.max), x.points, p.points, method)?;
        let mut rows = Vec::with_capacity(x.points * p.points);
        for (i, &xv) in grid.x_axis.iter().enumerate() {
            for (j, &pv) in grid.p_axis.iter().enumerate() {
                rows.push(vec![xv, pv, grid.values[i][j]]);
            }
        }
        let mut meta = config_meta(cfg);
        meta["t"] = json!(t);
        meta["x0"] = json!(x0);
        meta["method"] = json!(method.as_str());
        meta["selfcheck_max_err"] = json!(grid.meta.selfcheck_max_err);
        meta["max_imag_residue"] = json!(grid.meta.max_imag_residue);
        meta["origin_value"] = json!(cat.wigner_closed(0.0, 0.0));
        meta["origin_interference_term"] = json!(cat.cross_term_closed(0.0, 0.0));
        let path = out_dir.map(|d| d.join(wigner_file_name(t, format)));
        let sink = Sink { path: path.clone(), format };
        sink.write_table(&["x", "p", "w"], &rows, &meta)?;
        written.extend(path);
    }
    Ok(written)
}

pub fn run_eigenstate(cfg: &RunConfig, n: usize, t: f64, grid: &GridAxis, sink: &Sink) -> Result<()> {
    check_time(t)?;
    let params = cfg.params()?;
    let profile = cfg.profile()?;
    let psi = full_solution(&params, &profile, t, n, cfg.normalize)?;
    let rows: Vec<Vec<f64>> = grid
        .values()
        .into_iter()
        .map(|x| {
            let v = psi.value(x);
            vec![x, v.re, v.im, v.norm_sqr()]
        })
        .collect();
    let mut meta = config_meta(cfg);
    meta["t"] = json!(t);
    meta["n"] = json!(n);
    meta["eigenvalue"] = json!(params.eigenvalue(n));
    sink.write_table(&["x", "re", "im", "abs2"], &rows, &meta)
}

pub fn run_phases(cfg: &RunConfig, n: usize, t0: f64, t1: f64, steps: usize, sink: &Sink) -> Result<()> {
    let times = time_samples(t0, t1, steps)?;
    let params = cfg.params()?;
    let profile = cfg.profile()?;
    let rows: Vec<Vec<f64>> = phase_series(&params, &profile, &times, n)?
        .into_iter()
        .map(|(t, ph)| {
            vec![
                t,
                ph.theta_d,
                ph.theta_g.re,
                ph.theta_g.im,
                ph.theta_total.re,
                ph.theta_total.im,
            ]
        })
        .collect();
    let mut meta = config_meta(cfg);
    meta["n"] = json!(n);
    sink.write_table(
        &["t", "theta_d", "re_theta_g", "im_theta_g", "re_theta_total", "im_theta_total"],
        &rows,
        &meta,
    )
}
