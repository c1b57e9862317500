//! Run configuration, orchestration and CSV output.
//!
//! Configuration is a flat `key = value` text file plus command-line
//! overrides (override wins), so batch sweeps stay scriptable. All output
//! is plain UTF-8 CSV with `.` decimals: data cells carry 17 significant
//! digits so re-parsing reproduces the exact binary values.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::dsw::{self, DswParams, SolutionVariant};
use crate::error::{Error, Result};
use crate::experiment::{
    self, pointwise_table, run_solve, ConvergencePoint, PointwiseTable, RefinementAxis,
    SolveConfig, SweepPoint, Variable,
};
use crate::integrate::TimeGrid;
use crate::kernel::{KernelFamily, KernelSpec};
use crate::operator::{
    build_interpolation_matrix, condition_estimate, radial_distance, NodeSet, DEFAULT_PIVOT_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Solve,
    Sweep,
    Converge,
    Residual,
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::Sweep => "sweep",
            Mode::Converge => "converge",
            Mode::Residual => "residual",
        }
    }
}

/// Fully resolved run configuration. Defaults mirror the reference
/// experiment: domain [-4, 4], h = 0.1, dt = 1e-4, t_end = 0.5, Gaussian
/// kernel with shape 3400, wave speed 1, wave number 0.001, samples at
/// x, t in {0.1, ..., 0.5}.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub kernel_family: KernelFamily,
    pub shape: f64,
    pub wave_speed: f64,
    pub wave_number: f64,
    pub domain_a: f64,
    pub domain_b: f64,
    /// Uniform node spacing; ignored when explicit nodes are given.
    pub spacing: Option<f64>,
    pub explicit_nodes: Option<Vec<f64>>,
    pub dt: f64,
    pub t_end: f64,
    pub sample_xs: Vec<f64>,
    pub sample_ts: Vec<f64>,
    pub variant: SolutionVariant,
    pub pivot_tol: f64,
    pub shapes: Vec<f64>,
    pub h_list: Vec<f64>,
    pub dt_list: Vec<f64>,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let samples = vec![0.1, 0.2, 0.3, 0.4, 0.5];
        RunConfig {
            mode: Mode::Solve,
            kernel_family: KernelFamily::Gaussian,
            shape: 3400.0,
            wave_speed: 1.0,
            wave_number: 0.001,
            domain_a: -4.0,
            domain_b: 4.0,
            spacing: Some(0.1),
            explicit_nodes: None,
            dt: 1e-4,
            t_end: 0.5,
            sample_xs: samples.clone(),
            sample_ts: samples,
            variant: SolutionVariant::PaperConstant,
            pivot_tol: DEFAULT_PIVOT_TOL,
            shapes: Vec::new(),
            h_list: Vec::new(),
            dt_list: Vec::new(),
            out_dir: PathBuf::from("out"),
        }
    }
}

/// Command-line overrides; every field beats both defaults and config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub kernel: Option<KernelFamily>,
    pub shape: Option<f64>,
    pub wave_speed: Option<f64>,
    pub wave_number: Option<f64>,
    pub domain_a: Option<f64>,
    pub domain_b: Option<f64>,
    pub spacing: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub sample_xs: Option<Vec<f64>>,
    pub sample_ts: Option<Vec<f64>>,
    pub variant: Option<SolutionVariant>,
    pub pivot_tol: Option<f64>,
    pub shapes: Option<Vec<f64>>,
    pub h_list: Option<Vec<f64>>,
    pub dt_list: Option<Vec<f64>>,
    pub out_dir: Option<PathBuf>,
}

/// Resolve defaults -> config file -> overrides, then validate.
pub fn parse_config(
    mode: Mode,
    config_file: Option<&Path>,
    overrides: &Overrides,
) -> Result<RunConfig> {
    let mut cfg = RunConfig {
        mode,
        ..RunConfig::default()
    };
    if let Some(path) = config_file {
        let text = std::fs::read_to_string(path)?;
        apply_file(&mut cfg, &text)?;
    }
    apply_overrides(&mut cfg, overrides);
    validate(&cfg)?;
    Ok(cfg)
}

fn apply_file(cfg: &mut RunConfig, text: &str) -> Result<()> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        apply_key(cfg, key.trim(), value.trim())
            .map_err(|e| Error::config(format!("line {}: {e}", lineno + 1)))?;
    }
    Ok(())
}

fn parse_num(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::config(format!("{key}: cannot parse '{value}' as a number")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_num(key, v.trim()))
        .collect()
}

fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "kernel" => cfg.kernel_family = value.parse()?,
        "shape" => cfg.shape = parse_num(key, value)?,
        "wave_speed" => cfg.wave_speed = parse_num(key, value)?,
        "wave_number" => cfg.wave_number = parse_num(key, value)?,
        "domain_a" => cfg.domain_a = parse_num(key, value)?,
        "domain_b" => cfg.domain_b = parse_num(key, value)?,
        "h" => {
            cfg.spacing = Some(parse_num(key, value)?);
            cfg.explicit_nodes = None;
        }
        "nodes" => {
            cfg.explicit_nodes = Some(parse_list(key, value)?);
            cfg.spacing = None;
        }
        "dt" => cfg.dt = parse_num(key, value)?,
        "t_end" => cfg.t_end = parse_num(key, value)?,
        "sample_xs" => cfg.sample_xs = parse_list(key, value)?,
        "sample_ts" => cfg.sample_ts = parse_list(key, value)?,
        "variant" => cfg.variant = value.parse()?,
        "pivot_tol" => cfg.pivot_tol = parse_num(key, value)?,
        "shapes" => cfg.shapes = parse_list(key, value)?,
        "h_list" => cfg.h_list = parse_list(key, value)?,
        "dt_list" => cfg.dt_list = parse_list(key, value)?,
        "out" => cfg.out_dir = PathBuf::from(value),
        other => {
            return Err(Error::config(format!(
                "unknown key '{other}' (known: kernel, shape, wave_speed, wave_number, \
                 domain_a, domain_b, h, nodes, dt, t_end, sample_xs, sample_ts, variant, \
                 pivot_tol, shapes, h_list, dt_list, out)"
            )))
        }
    }
    Ok(())
}

fn apply_overrides(cfg: &mut RunConfig, o: &Overrides) {
    if let Some(v) = o.kernel {
        cfg.kernel_family = v;
    }
    if let Some(v) = o.shape {
        cfg.shape = v;
    }
    if let Some(v) = o.wave_speed {
        cfg.wave_speed = v;
    }
    if let Some(v) = o.wave_number {
        cfg.wave_number = v;
    }
    if let Some(v) = o.domain_a {
        cfg.domain_a = v;
    }
    if let Some(v) = o.domain_b {
        cfg.domain_b = v;
    }
    if let Some(v) = o.spacing {
        cfg.spacing = Some(v);
        cfg.explicit_nodes = None;
    }
    if let Some(v) = o.dt {
        cfg.dt = v;
    }
    if let Some(v) = o.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = &o.sample_xs {
        cfg.sample_xs = v.clone();
    }
    if let Some(v) = &o.sample_ts {
        cfg.sample_ts = v.clone();
    }
    if let Some(v) = o.variant {
        cfg.variant = v;
    }
    if let Some(v) = o.pivot_tol {
        cfg.pivot_tol = v;
    }
    if let Some(v) = &o.shapes {
        cfg.shapes = v.clone();
    }
    if let Some(v) = &o.h_list {
        cfg.h_list = v.clone();
    }
    if let Some(v) = &o.dt_list {
        cfg.dt_list = v.clone();
    }
    if let Some(v) = &o.out_dir {
        cfg.out_dir = v.clone();
    }
}

fn validate(cfg: &RunConfig) -> Result<()> {
    if !(cfg.shape.is_finite() && cfg.shape > 0.0) {
        return Err(Error::config(format!(
            "shape must be positive, got {}",
            cfg.shape
        )));
    }
    if !(cfg.domain_a.is_finite() && cfg.domain_b.is_finite() && cfg.domain_a < cfg.domain_b) {
        return Err(Error::config(format!(
            "domain [{}, {}] must satisfy a < b",
            cfg.domain_a, cfg.domain_b
        )));
    }
    match (&cfg.spacing, &cfg.explicit_nodes) {
        (Some(h), None) => {
            if !(h.is_finite() && *h > 0.0) {
                return Err(Error::config(format!("h must be positive, got {h}")));
            }
            let ratio = (cfg.domain_b - cfg.domain_a) / h;
            if (ratio - ratio.round()).abs() > 1e-9 {
                return Err(Error::config(format!(
                    "h = {h} does not divide the domain: (b-a)/h = {ratio} is not an integer"
                )));
            }
        }
        (None, Some(nodes)) => {
            if nodes.len() < 4 {
                return Err(Error::config("need at least 4 explicit nodes"));
            }
        }
        _ => {
            return Err(Error::config(
                "exactly one of h or an explicit node list is required",
            ))
        }
    }
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
        return Err(Error::config(format!("dt must be positive, got {}", cfg.dt)));
    }
    if !(cfg.t_end.is_finite() && cfg.t_end > 0.0) {
        return Err(Error::config(format!(
            "t_end must be positive, got {}",
            cfg.t_end
        )));
    }
    let steps = cfg.t_end / cfg.dt;
    if (steps - steps.round()).abs() > 1e-6 {
        return Err(Error::config(format!(
            "t_end = {} is not a whole number of dt = {} steps",
            cfg.t_end, cfg.dt
        )));
    }
    for &ts in &cfg.sample_ts {
        if !(0.0..=cfg.t_end).contains(&ts) {
            return Err(Error::config(format!(
                "sample time {ts} outside [0, {}]",
                cfg.t_end
            )));
        }
        let m = (ts / cfg.dt).round();
        if (ts - m * cfg.dt).abs() > 1e-6 * cfg.dt {
            return Err(Error::config(format!(
                "sample time {ts} is not a multiple of dt = {}",
                cfg.dt
            )));
        }
    }
    if cfg.sample_ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("sample_ts must be strictly increasing"));
    }
    for &x in &cfg.sample_xs {
        if !(cfg.domain_a..=cfg.domain_b).contains(&x) {
            return Err(Error::config(format!(
                "sample x = {x} outside the domain [{}, {}]",
                cfg.domain_a, cfg.domain_b
            )));
        }
    }
    if !(cfg.pivot_tol.is_finite() && cfg.pivot_tol > 0.0) {
        return Err(Error::config(format!(
            "pivot_tol must be positive, got {}",
            cfg.pivot_tol
        )));
    }
    match cfg.mode {
        Mode::Sweep if cfg.shapes.is_empty() => {
            Err(Error::config("sweep mode needs a nonempty shapes list"))
        }
        Mode::Converge => match (cfg.h_list.is_empty(), cfg.dt_list.is_empty()) {
            (false, true) | (true, false) => Ok(()),
            _ => Err(Error::config(
                "converge mode needs exactly one of h_list or dt_list",
            )),
        },
        _ => Ok(()),
    }?;
    Ok(())
}

/// Materialize the domain objects for a solve.
pub fn build_solve_config(cfg: &RunConfig) -> Result<SolveConfig> {
    let kernel = KernelSpec::new(cfg.kernel_family, cfg.shape)?;
    let params = DswParams::new(
        cfg.wave_speed,
        cfg.wave_number,
        (cfg.domain_a, cfg.domain_b),
        cfg.variant,
    )?;
    let nodes = match (&cfg.spacing, &cfg.explicit_nodes) {
        (Some(h), None) => NodeSet::uniform(cfg.domain_a, cfg.domain_b, *h)?,
        (None, Some(pts)) => {
            let a = pts[0];
            let b = *pts.last().unwrap();
            NodeSet::new(pts.clone(), a, b)?
        }
        _ => unreachable!("validated"),
    };
    let grid = TimeGrid::new(0.0, cfg.t_end, cfg.dt, cfg.sample_ts.clone())?;
    Ok(SolveConfig {
        kernel,
        params,
        nodes,
        grid,
        pivot_tol: cfg.pivot_tol,
    })
}

// ---------------------------------------------------------------------------
// CSV serialization
// ---------------------------------------------------------------------------

/// 17 significant digits; re-parsing reproduces the exact f64.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt(v),
        None => "nan".to_string(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::Write {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut w = std::io::BufWriter::new(file);
    w.write_all(contents.as_bytes()).map_err(|e| Error::Write {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

/// Pointwise error table in the t-rows by x-columns layout.
fn render_error_table(table: &PointwiseTable) -> String {
    let mut s = String::from("t/x");
    for &x in &table.xs {
        let _ = write!(s, ",{x}");
    }
    s.push('\n');
    for (row, &t) in table.errors.iter().zip(&table.ts) {
        let _ = write!(s, "{t}");
        for &e in row {
            let _ = write!(s, ",{}", fmt(e));
        }
        s.push('\n');
    }
    s
}

fn render_sweep(points: &[SweepPoint]) -> String {
    let mut s = String::from("shape,linf_u,linf_v,cond2,status\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt(p.shape),
            fmt_opt(p.linf_u),
            fmt_opt(p.linf_v),
            fmt_opt(p.cond2),
            p.status.label()
        );
    }
    s
}

fn render_convergence(points: &[ConvergencePoint]) -> String {
    let mut s = String::from("parameter,linf_u,linf_v,rate_u,rate_v,status\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt(p.parameter),
            fmt_opt(p.linf_u),
            fmt_opt(p.linf_v),
            fmt_opt(p.rate_u),
            fmt_opt(p.rate_v),
            p.status.label()
        );
    }
    s
}

// ---------------------------------------------------------------------------
// Run orchestration
// ---------------------------------------------------------------------------

/// Execute the configured mode, writing CSV outputs into the out directory.
pub fn run(cfg: &RunConfig) -> Result<()> {
    let solve_cfg = build_solve_config(cfg)?;
    std::fs::create_dir_all(&cfg.out_dir)?;

    // The conditioning diagnostics belong in every banner: shape selection
    // works by watching cond2 against the error.
    let a = build_interpolation_matrix(solve_cfg.nodes.points(), &solve_cfg.kernel)?;
    let cond2 = condition_estimate(&a);
    let delta = radial_distance(solve_cfg.nodes.points());
    drop(a);
    println!(
        "mode={} kernel={} shape={} c={} k={} domain=[{}, {}] N={} dt={} t_end={} variant={}",
        cfg.mode.label(),
        cfg.kernel_family,
        cfg.shape,
        cfg.wave_speed,
        cfg.wave_number,
        cfg.domain_a,
        cfg.domain_b,
        solve_cfg.nodes.len(),
        cfg.dt,
        cfg.t_end,
        cfg.variant.label(),
    );
    println!("cond2(A) = {cond2:.6e}   radial distance = {delta:.6e}");

    match cfg.mode {
        Mode::Solve => run_solve_mode(cfg, &solve_cfg, cond2, delta),
        Mode::Sweep => {
            let points = experiment::shape_sweep(&solve_cfg, &cfg.shapes)?;
            let path = cfg.out_dir.join("sweep.csv");
            write_file(&path, &render_sweep(&points))?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Mode::Converge => {
            let (axis, values) = if cfg.h_list.is_empty() {
                (RefinementAxis::Time, &cfg.dt_list)
            } else {
                (RefinementAxis::Space, &cfg.h_list)
            };
            let points = experiment::convergence_study(&solve_cfg, axis, values)?;
            for p in &points {
                match (p.linf_u, p.rate_u) {
                    (Some(e), Some(r)) => {
                        println!("  {} -> linf_u {e:.6e} (rate {r:.2})", p.parameter)
                    }
                    (Some(e), None) => println!("  {} -> linf_u {e:.6e}", p.parameter),
                    _ => println!("  {} -> {}", p.parameter, p.status.label()),
                }
            }
            let path = cfg.out_dir.join("converge.csv");
            write_file(&path, &render_convergence(&points))?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Mode::Residual => run_residual_mode(cfg, &solve_cfg),
    }
}

fn run_solve_mode(cfg: &RunConfig, solve_cfg: &SolveConfig, cond2: f64, delta: f64) -> Result<()> {
    let out = run_solve(solve_cfg)?;

    let mut summary = String::from("variable,linf,rms,cond2,delta\n");
    for variable in [Variable::U, Variable::V] {
        let report = experiment::error_report(solve_cfg, &out, variable)?;
        let _ = writeln!(
            summary,
            "{},{},{},{},{}",
            variable.label(),
            fmt(report.linf),
            fmt(report.rms),
            fmt(cond2),
            fmt(delta)
        );
        println!(
            "{}: linf = {:.6e}  rms = {:.6e}",
            variable.label(),
            report.linf,
            report.rms
        );

        let table = pointwise_table(solve_cfg, &out, &cfg.sample_xs, &cfg.sample_ts, variable)?;
        let path = cfg
            .out_dir
            .join(format!("errors_{}.csv", variable.label()));
        write_file(&path, &render_error_table(&table))?;
        println!("wrote {}", path.display());
    }
    let path = cfg.out_dir.join("summary.csv");
    write_file(&path, &summary)?;
    println!("wrote {}", path.display());

    // One solution profile per snapshot, labeled by the requested sample
    // time (or t_end for the automatic final snapshot).
    let half_step = solve_cfg.grid.dt() / 2.0;
    for snap in &out.snapshots {
        let label = cfg
            .sample_ts
            .iter()
            .find(|&&ts| (snap.t - ts).abs() <= half_step)
            .copied()
            .unwrap_or(cfg.t_end);
        let mut profile = String::from("x,u_num,v_num,u_ref,v_ref\n");
        for (i, &x) in solve_cfg.nodes.points().iter().enumerate() {
            let _ = writeln!(
                profile,
                "{},{},{},{},{}",
                fmt(x),
                fmt(snap.u[i]),
                fmt(snap.v[i]),
                fmt(dsw::reference_u(&solve_cfg.params, x, snap.t)),
                fmt(dsw::reference_v(&solve_cfg.params, x, snap.t))
            );
        }
        let path = cfg.out_dir.join(format!("profile_t{label}.csv"));
        write_file(&path, &profile)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_residual_mode(cfg: &RunConfig, solve_cfg: &SolveConfig) -> Result<()> {
    // Closed-form and finite-difference residuals of the reference solution
    // over nodes x sample times. Matching columns certify (or expose) how
    // well the reference satisfies the system.
    let mut s = String::from("x,t,r1,r2,r1_fd,r2_fd\n");
    let mut worst_r2_dev: f64 = 0.0;
    let mut r2_scale: f64 = 0.0;
    let times: Vec<f64> = if cfg.sample_ts.is_empty() {
        vec![0.0, cfg.t_end]
    } else {
        cfg.sample_ts.clone()
    };
    for &x in solve_cfg.nodes.points() {
        for &t in &times {
            let (r1, r2) = dsw::reference_residual(&solve_cfg.params, x, t);
            let (r1_fd, r2_fd) = dsw::fd_residual(&solve_cfg.params, x, t);
            worst_r2_dev = worst_r2_dev.max((r2_fd - r2).abs());
            r2_scale = r2_scale.max(r2.abs());
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                fmt(x),
                fmt(t),
                fmt(r1),
                fmt(r2),
                fmt(r1_fd),
                fmt(r2_fd)
            );
        }
    }
    let path = cfg.out_dir.join("residual.csv");
    write_file(&path, &s)?;
    println!(
        "max |r2_fd - r2_closed| = {worst_r2_dev:.3e} (closed-form scale {r2_scale:.3e})"
    );
    println!("wrote {}", path.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_reference_setup() {
        let cfg = parse_config(Mode::Solve, None, &Overrides::default()).unwrap();
        assert_eq!(cfg.kernel_family, KernelFamily::Gaussian);
        assert_eq!(cfg.shape, 3400.0);
        assert_eq!(cfg.wave_speed, 1.0);
        assert_eq!(cfg.wave_number, 0.001);
        assert_eq!((cfg.domain_a, cfg.domain_b), (-4.0, 4.0));
        assert_eq!(cfg.spacing, Some(0.1));
        assert_eq!(cfg.dt, 1e-4);
        assert_eq!(cfg.t_end, 0.5);
        assert_eq!(cfg.sample_ts, vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(cfg.variant, SolutionVariant::PaperConstant);
        let solve = build_solve_config(&cfg).unwrap();
        assert_eq!(solve.nodes.len(), 81);
        assert_eq!(solve.grid.step_count(), 5000);
    }

    #[test]
    fn rejects_nonintegral_spacing() {
        let o = Overrides {
            spacing: Some(0.3),
            ..Default::default()
        };
        match parse_config(Mode::Solve, None, &o) {
            Err(Error::Config(msg)) => assert!(msg.contains("0.3"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_misaligned_sample_times() {
        let o = Overrides {
            dt: Some(3e-4),
            sample_ts: Some(vec![0.1]),
            t_end: Some(0.3),
            ..Default::default()
        };
        match parse_config(Mode::Solve, None, &o) {
            Err(Error::Config(msg)) => assert!(msg.contains("0.1"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_config_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "shapee = 12\n").unwrap();
        match parse_config(Mode::Solve, Some(&path), &Overrides::default()) {
            Err(Error::Config(msg)) => assert!(msg.contains("shapee"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn config_file_and_override_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(
            &path,
            "# comment\nkernel = mq\nshape = 2.5\nwave_speed = 4\nwave_number = 0.01\n",
        )
        .unwrap();
        let o = Overrides {
            shape: Some(7.0),
            ..Default::default()
        };
        let cfg = parse_config(Mode::Solve, Some(&path), &o).unwrap();
        assert_eq!(cfg.kernel_family, KernelFamily::Multiquadric);
        assert_eq!(cfg.shape, 7.0); // override beats file
        assert_eq!(cfg.wave_speed, 4.0);
    }

    #[test]
    fn mode_specific_requirements() {
        assert!(parse_config(Mode::Sweep, None, &Overrides::default()).is_err());
        let o = Overrides {
            shapes: Some(vec![100.0, 200.0]),
            ..Default::default()
        };
        assert!(parse_config(Mode::Sweep, None, &o).is_ok());

        assert!(parse_config(Mode::Converge, None, &Overrides::default()).is_err());
        let both = Overrides {
            h_list: Some(vec![0.2, 0.1]),
            dt_list: Some(vec![1e-3, 5e-4]),
            ..Default::default()
        };
        assert!(parse_config(Mode::Converge, None, &both).is_err());
        let o = Overrides {
            h_list: Some(vec![0.2, 0.1]),
            ..Default::default()
        };
        assert!(parse_config(Mode::Converge, None, &o).is_ok());
    }

    #[test]
    fn csv_numbers_round_trip_bitwise() {
        for v in [
            0.1,
            -7.499_5e-13,
            3400.0,
            f64::MIN_POSITIVE,
            1.0 / 3.0,
            6.02e23,
        ] {
            let s = fmt(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    #[test]
    fn solve_mode_writes_expected_files() {
        let dir = tempfile::tempdir().unwrap();
        let o = Overrides {
            dt: Some(1e-3),
            t_end: Some(0.02),
            sample_ts: Some(vec![0.01, 0.02]),
            sample_xs: Some(vec![0.1, 0.2, 0.3]),
            out_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let cfg = parse_config(Mode::Solve, None, &o).unwrap();
        run(&cfg).unwrap();
        let errors_u = std::fs::read_to_string(dir.path().join("errors_u.csv")).unwrap();
        let lines: Vec<&str> = errors_u.lines().collect();
        assert_eq!(lines.len(), 3); // header + 2 sample times
        assert!(lines[0].starts_with("t/x,0.1,0.2,0.3"));
        assert!(dir.path().join("errors_v.csv").exists());
        assert!(dir.path().join("summary.csv").exists());
        assert!(dir.path().join("profile_t0.01.csv").exists());
        assert!(dir.path().join("profile_t0.02.csv").exists());
    }
}
