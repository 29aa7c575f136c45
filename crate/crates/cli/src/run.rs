use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use qpgf_core::bie::solve_scattering;
use qpgf_core::greens::complete_green;
use qpgf_core::validation::{fit_decay_rate, probe_points};
use qpgf_core::{Complex64, Vec3, WindowKind};

use crate::config::{Mode, RunConfig};
use crate::output::{PointReport, RateSummary, Reference, Row, RunReport, TableWriter};

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    pub output: Option<PathBuf>,
    pub mode: Option<Mode>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Solve => "solve",
        Mode::SweepA => "sweep_A",
        Mode::SweepK => "sweep_k",
        Mode::GreenConv => "green_conv",
        Mode::MakeRef => "make_ref",
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Runs the configured study; returns a short text summary.
pub fn run(opts: &RunOptions) -> Result<String> {
    let mut cfg = RunConfig::load(&opts.config)?;
    let mode = opts.mode.unwrap_or(cfg.mode);
    cfg.mode = mode;
    cfg.check_mode(mode)?;
    let base = opts.config.parent().map(Path::to_path_buf).unwrap_or_default();
    let out_dir = match &opts.output {
        Some(dir) => dir.clone(),
        None => resolve(&base, &cfg.output),
    };
    if let Some(n) = opts.threads {
        // an already initialised pool (repeated calls in one process) is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let reference = match &cfg.reference {
        Some(p) if mode != Mode::MakeRef && mode != Mode::GreenConv => Some(Reference::load(&resolve(&base, p))?),
        _ => None,
    };
    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;

    let start = Instant::now();
    match mode {
        Mode::GreenConv => green_conv(&cfg, &out_dir, start),
        _ => solves(&cfg, mode, &out_dir, reference.as_ref().map(Reference::b00), start),
    }
}

fn sweep_points(cfg: &RunConfig, mode: Mode) -> Vec<(f64, f64)> {
    let k = cfg.problem.k;
    let a = cfg.green.a;
    match mode {
        Mode::SweepA => cfg.sweep.a.iter().map(|&a| (k, a)).collect(),
        Mode::SweepK => cfg.sweep.k.iter().map(|&k| (k, a)).collect(),
        _ => vec![(k, a)],
    }
}

fn solves(cfg: &RunConfig, mode: Mode, out_dir: &Path, reference: Option<Complex64>, start: Instant) -> Result<String> {
    let points = sweep_points(cfg, mode);
    // validate every point before any expensive work
    let configs = points
        .iter()
        .map(|&(k, a)| cfg.solve_config(k, a).with_context(|| format!("invalid configuration at k = {k}, A = {a}")))
        .collect::<Result<Vec<_>>>()?;

    let mut table = TableWriter::create(&out_dir.join("results.csv"))?;
    let mut reports = Vec::new();
    let mut summary = String::new();
    let mut failures = 0;
    let mut last = None;
    for (&(k, a), sc) in points.iter().zip(&configs) {
        let t = Instant::now();
        let mut row = Row {
            k,
            n: cfg.surface.n,
            m: cfg.surface.m,
            a,
            p: cfg.green.p,
            d: cfg.green.d,
            bc: format!("{:?}", cfg.problem.bc).to_lowercase(),
            ..Row::default()
        };
        let mut point = PointReport {
            k,
            a,
            seconds: 0.0,
            b00: None,
            iterations: None,
            eps: None,
            eps1: None,
            max_error: None,
            resolution_warning: None,
            error: None,
        };
        match solve_scattering(sc, reference) {
            Ok((sol, spec, report)) => {
                let b00 = spec.b00();
                row.iters = Some(sol.iterations);
                row.eps = Some(report.errors.eps);
                row.eps1 = report.errors.eps1;
                row.b00 = Some(b00);
                point.b00 = Some([b00.re, b00.im]);
                point.iterations = Some(sol.iterations);
                point.eps = Some(report.errors.eps);
                point.eps1 = report.errors.eps1;
                point.resolution_warning = spec.resolution_warning;
                last = Some((b00, report.errors.eps, sol.iterations));
            }
            Err(err) => {
                failures += 1;
                row.error = Some(err.to_string());
                point.error = Some(err.to_string());
            }
        }
        point.seconds = t.elapsed().as_secs_f64();
        table.push(&row)?;
        let _ = writeln!(
            summary,
            "k={} A={} iters={} eps={} eps1={}{}",
            k,
            a,
            row.iters.map_or("-".into(), |i| i.to_string()),
            row.eps.map_or("-".into(), |e| format!("{e:.3e}")),
            row.eps1.map_or("-".into(), |e| format!("{e:.3e}")),
            row.error.as_ref().map_or(String::new(), |e| format!(" error: {e}")),
        );
        reports.push(point);
    }

    RunReport {
        mode: mode_name(mode).into(),
        total_seconds: start.elapsed().as_secs_f64(),
        config: cfg.clone(),
        fit: None,
        points: reports,
    }
    .save(&out_dir.join("report.toml"))?;

    if mode == Mode::MakeRef {
        if let Some((b00, eps, iterations)) = last {
            Reference {
                b00: [b00.re, b00.im],
                eps,
                iterations,
                config: cfg.clone(),
            }
            .save(&out_dir.join("reference.toml"))?;
        }
    }
    if failures > 0 {
        bail!("{failures} of {} points failed; see results.csv\n{summary}", points.len());
    }
    Ok(summary)
}

fn green_conv(cfg: &RunConfig, out_dir: &Path, start: Instant) -> Result<String> {
    let k = cfg.problem.k;
    let lat = cfg.lattice()?;
    let pts: Vec<Vec3> = if cfg.green_conv.points.is_empty() {
        probe_points(&lat)
    } else {
        cfg.green_conv.points.iter().map(|&[x, y, z]| Vec3::new(x, y, z)).collect()
    };
    let reference_gp = cfg
        .green_params(k, cfg.green_conv.reference_a)?
        .with_window(WindowKind::Smooth);
    let reference = pts
        .iter()
        .map(|&x| complete_green(x, &reference_gp).map(|g| g.value))
        .collect::<qpgf_core::Result<Vec<_>>>()?;

    let mut samples = Vec::new();
    let mut reports = Vec::new();
    let mut text = String::from("A,max_error\n");
    let mut summary = String::new();
    for &a in &cfg.green_conv.a {
        let t = Instant::now();
        let gp = cfg.green_params(k, a)?;
        let mut err: f64 = 0.0;
        for (x, r) in pts.iter().zip(&reference) {
            err = err.max((complete_green(*x, &gp)?.value - r).norm());
        }
        samples.push((a, err));
        let _ = writeln!(text, "{a},{err:e}");
        let _ = writeln!(summary, "A={a} max_error={err:.3e}");
        reports.push(PointReport {
            k,
            a,
            seconds: t.elapsed().as_secs_f64(),
            b00: None,
            iterations: None,
            eps: None,
            eps1: None,
            max_error: Some(err),
            resolution_warning: None,
            error: None,
        });
    }
    std::fs::write(out_dir.join("green_conv.csv"), text)?;
    let fit = fit_decay_rate(&samples)?;
    let _ = writeln!(summary, "slope={:.3} r2={:.4}", fit.slope, fit.r_squared);
    RunReport {
        mode: mode_name(Mode::GreenConv).into(),
        total_seconds: start.elapsed().as_secs_f64(),
        config: cfg.clone(),
        fit: Some(RateSummary {
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
        }),
        points: reports,
    }
    .save(&out_dir.join("report.toml"))?;
    Ok(summary)
}
