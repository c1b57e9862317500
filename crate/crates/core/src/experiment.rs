//! Error metrics, pointwise error tables, shape sweeps and refinement
//! studies.

use rayon::prelude::*;

use crate::dsw::{self, DswParams, SolverState};
use crate::error::{Error, Result};
use crate::integrate::{integrate, TimeGrid};
use crate::kernel::KernelSpec;
use crate::operator::{
    build_diff_operators_with_tol, build_interpolation_matrix, condition_estimate, NodeSet,
};

/// Which solution component a metric refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    U,
    V,
}

impl Variable {
    pub fn label(&self) -> &'static str {
        match self {
            Variable::U => "u",
            Variable::V => "v",
        }
    }
}

/// Everything needed to run one solve.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub kernel: KernelSpec,
    pub params: DswParams,
    pub nodes: NodeSet,
    pub grid: TimeGrid,
    pub pivot_tol: f64,
}

/// Snapshots plus the conditioning diagnostics of the operator build.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<SolverState>,
    pub cond2: f64,
    pub delta: f64,
}

pub fn run_solve(cfg: &SolveConfig) -> Result<RunOutput> {
    let ops = build_diff_operators_with_tol(&cfg.nodes, &cfg.kernel, cfg.pivot_tol)?;
    let initial = dsw::initial_state(&cfg.params, &cfg.nodes);
    let snapshots = integrate(initial, &cfg.grid, &ops, &cfg.params, &cfg.nodes)?;
    Ok(RunOutput {
        snapshots,
        cond2: ops.cond2,
        delta: ops.delta,
    })
}

/// max_i |numeric_i - exact_i|
pub fn error_linf(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    if numeric.len() != exact.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {}",
            numeric.len(),
            exact.len()
        )));
    }
    Ok(numeric
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// sqrt(mean of squared errors)
pub fn error_rms(numeric: &[f64], exact: &[f64]) -> Result<f64> {
    if numeric.is_empty() {
        return Err(Error::invalid("rms of empty vectors"));
    }
    if numeric.len() != exact.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {}",
            numeric.len(),
            exact.len()
        )));
    }
    let sum_sq: f64 = numeric.iter().zip(exact).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((sum_sq / numeric.len() as f64).sqrt())
}

/// One (x, t) error sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointError {
    pub x: f64,
    pub t: f64,
    pub abs_error: f64,
}

/// Error summary of one variable over a run.
///
/// `linf` is the maximum over every node at every snapshot; `rms` aggregates
/// over all nodes at the final snapshot (the pointwise data keeps every
/// alternative aggregation recoverable).
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub variable: Variable,
    pub linf: f64,
    pub rms: f64,
    pub pointwise: Vec<PointError>,
}

fn reference_values(p: &DswParams, nodes: &NodeSet, t: f64, variable: Variable) -> Vec<f64> {
    nodes
        .points()
        .iter()
        .map(|&x| match variable {
            Variable::U => dsw::reference_u(p, x, t),
            Variable::V => dsw::reference_v(p, x, t),
        })
        .collect()
}

fn numeric_values(state: &SolverState, variable: Variable) -> &[f64] {
    match variable {
        Variable::U => &state.u,
        Variable::V => &state.v,
    }
}

pub fn error_report(cfg: &SolveConfig, out: &RunOutput, variable: Variable) -> Result<ErrorReport> {
    if out.snapshots.is_empty() {
        return Err(Error::invalid("run produced no snapshots"));
    }
    let mut pointwise = Vec::new();
    let mut linf: f64 = 0.0;
    for snap in &out.snapshots {
        let exact = reference_values(&cfg.params, &cfg.nodes, snap.t, variable);
        let numeric = numeric_values(snap, variable);
        for (i, &x) in cfg.nodes.points().iter().enumerate() {
            let e = (numeric[i] - exact[i]).abs();
            linf = linf.max(e);
            pointwise.push(PointError {
                x,
                t: snap.t,
                abs_error: e,
            });
        }
    }
    let last = out.snapshots.last().unwrap();
    let exact = reference_values(&cfg.params, &cfg.nodes, last.t, variable);
    let rms = error_rms(numeric_values(last, variable), &exact)?;
    Ok(ErrorReport {
        variable,
        linf,
        rms,
        pointwise,
    })
}

/// Pointwise |numeric - reference| laid out t-rows by x-columns.
#[derive(Debug, Clone)]
pub struct PointwiseTable {
    pub variable: Variable,
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    /// errors[row][col] for ts[row], xs[col].
    pub errors: Vec<Vec<f64>>,
}

/// Extract the error table at the requested sample points. Each x must
/// coincide with a grid node to within 1e-12 and each t with a recorded
/// snapshot to within half a step.
pub fn pointwise_table(
    cfg: &SolveConfig,
    out: &RunOutput,
    sample_xs: &[f64],
    sample_ts: &[f64],
    variable: Variable,
) -> Result<PointwiseTable> {
    let mut col_indices = Vec::with_capacity(sample_xs.len());
    for &x in sample_xs {
        match cfg.nodes.index_of(x, 1e-12) {
            Some(ix) => col_indices.push(ix),
            None => {
                return Err(Error::invalid(format!(
                    "sample x = {x} does not coincide with a grid node"
                )))
            }
        }
    }
    let half_step = cfg.grid.dt() / 2.0;
    let mut errors = Vec::with_capacity(sample_ts.len());
    for &t in sample_ts {
        let snap = out
            .snapshots
            .iter()
            .find(|s| (s.t - t).abs() <= half_step)
            .ok_or_else(|| {
                Error::invalid(format!("no snapshot recorded at sample time {t}"))
            })?;
        let numeric = numeric_values(snap, variable);
        let row = col_indices
            .iter()
            .map(|&ix| {
                let x = cfg.nodes.points()[ix];
                let exact = match variable {
                    Variable::U => dsw::reference_u(&cfg.params, x, snap.t),
                    Variable::V => dsw::reference_v(&cfg.params, x, snap.t),
                };
                (numeric[ix] - exact).abs()
            })
            .collect();
        errors.push(row);
    }
    Ok(PointwiseTable {
        variable,
        xs: sample_xs.to_vec(),
        ts: sample_ts.to_vec(),
        errors,
    })
}

/// Outcome class of one sweep or refinement solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Ok,
    NearSingular,
    BlowUp,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Ok => "OK",
            SolveStatus::NearSingular => "NearSingular",
            SolveStatus::BlowUp => "BlowUp",
        }
    }
}

fn classify(err: &Error) -> SolveStatus {
    match err {
        Error::NearSingular { .. } => SolveStatus::NearSingular,
        Error::BlowUp { .. } => SolveStatus::BlowUp,
        Error::Step { source, .. } => classify(source),
        // Anything else is a configuration bug; surface it as blow-up-like
        // data rather than aborting a sweep.
        _ => SolveStatus::BlowUp,
    }
}

/// One point of a shape sweep. Error fields are present only for OK solves;
/// the condition number is reported whenever the matrix could be formed.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub shape: f64,
    pub linf_u: Option<f64>,
    pub linf_v: Option<f64>,
    pub cond2: Option<f64>,
    pub status: SolveStatus,
}

/// Full solve per shape; failures become data instead of aborting the sweep.
/// Results are ordered by shape.
pub fn shape_sweep(base: &SolveConfig, shapes: &[f64]) -> Result<Vec<SweepPoint>> {
    if shapes.is_empty() {
        return Err(Error::invalid("empty shape list"));
    }
    if shapes.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
        return Err(Error::invalid("shapes must be finite and positive"));
    }
    let mut points: Vec<SweepPoint> = shapes
        .par_iter()
        .map(|&shape| sweep_one(base, shape))
        .collect();
    points.sort_by(|a, b| a.shape.total_cmp(&b.shape));
    Ok(points)
}

fn sweep_one(base: &SolveConfig, shape: f64) -> SweepPoint {
    let kernel = match KernelSpec::new(base.kernel.family(), shape) {
        Ok(k) => k,
        Err(_) => {
            return SweepPoint {
                shape,
                linf_u: None,
                linf_v: None,
                cond2: None,
                status: SolveStatus::NearSingular,
            }
        }
    };
    let cond2 = build_interpolation_matrix(base.nodes.points(), &kernel)
        .ok()
        .map(|a| condition_estimate(&a));
    let cfg = SolveConfig {
        kernel,
        ..base.clone()
    };
    match run_solve(&cfg) {
        Ok(out) => {
            let linf_u = error_report(&cfg, &out, Variable::U).map(|r| r.linf).ok();
            let linf_v = error_report(&cfg, &out, Variable::V).map(|r| r.linf).ok();
            SweepPoint {
                shape,
                linf_u,
                linf_v,
                cond2,
                status: SolveStatus::Ok,
            }
        }
        Err(e) => SweepPoint {
            shape,
            linf_u: None,
            linf_v: None,
            cond2,
            status: classify(&e),
        },
    }
}

/// Refinement axis of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementAxis {
    /// Refine the node spacing h, keeping the time grid fixed.
    Space,
    /// Refine the time step dt, keeping the node set fixed.
    Time,
}

/// One refinement level. `rate_u`/`rate_v` are the observed orders
/// log(e₁/e₂)/log(p₁/p₂) against the previous OK level.
#[derive(Debug, Clone)]
pub struct ConvergencePoint {
    pub parameter: f64,
    pub linf_u: Option<f64>,
    pub linf_v: Option<f64>,
    pub rate_u: Option<f64>,
    pub rate_v: Option<f64>,
    pub status: SolveStatus,
}

/// One solve per refinement value (finest last), measuring the final-time
/// error. Values must be positive, strictly decreasing and duplicate-free.
pub fn convergence_study(
    base: &SolveConfig,
    axis: RefinementAxis,
    values: &[f64],
) -> Result<Vec<ConvergencePoint>> {
    if values.is_empty() {
        return Err(Error::invalid("empty refinement list"));
    }
    if values.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
        return Err(Error::invalid("refinement values must be positive"));
    }
    if values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid(
            "refinement values must be strictly decreasing (duplicates make rates undefined)",
        ));
    }

    let configs: Vec<Result<SolveConfig>> = values
        .iter()
        .map(|&value| refine_config(base, axis, value))
        .collect();
    let results: Vec<_> = configs
        .into_par_iter()
        .map(|cfg| {
            let cfg = cfg?;
            let out = run_solve(&cfg)?;
            let u = error_report(&cfg, &out, Variable::U)?.linf;
            let v = error_report(&cfg, &out, Variable::V)?.linf;
            Ok::<_, Error>((u, v))
        })
        .collect();

    let mut points = Vec::with_capacity(values.len());
    let mut prev_ok: Option<(f64, f64, f64)> = None;
    for (&value, result) in values.iter().zip(results) {
        match result {
            Ok((linf_u, linf_v)) => {
                let (rate_u, rate_v) = match prev_ok {
                    Some((p_prev, u_prev, v_prev)) => {
                        let scale = (p_prev / value).ln();
                        (
                            Some((u_prev / linf_u).ln() / scale),
                            Some((v_prev / linf_v).ln() / scale),
                        )
                    }
                    None => (None, None),
                };
                prev_ok = Some((value, linf_u, linf_v));
                points.push(ConvergencePoint {
                    parameter: value,
                    linf_u: Some(linf_u),
                    linf_v: Some(linf_v),
                    rate_u,
                    rate_v,
                    status: SolveStatus::Ok,
                });
            }
            Err(e) => match e {
                Error::InvalidInput(_) | Error::Config(_) => return Err(e),
                other => points.push(ConvergencePoint {
                    parameter: value,
                    linf_u: None,
                    linf_v: None,
                    rate_u: None,
                    rate_v: None,
                    status: classify(&other),
                }),
            },
        }
    }
    Ok(points)
}

fn refine_config(base: &SolveConfig, axis: RefinementAxis, value: f64) -> Result<SolveConfig> {
    match axis {
        RefinementAxis::Space => {
            let (a, b) = base.nodes.domain();
            Ok(SolveConfig {
                nodes: NodeSet::uniform(a, b, value)?,
                ..base.clone()
            })
        }
        RefinementAxis::Time => {
            // Final-time error only: sample lists tied to the old dt would
            // not stay step-aligned across refinements.
            let grid = TimeGrid::new(base.grid.t0(), base.grid.t_end(), value, vec![])?;
            Ok(SolveConfig {
                grid,
                ..base.clone()
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsw::SolutionVariant;
    use crate::kernel::KernelFamily;
    use proptest::prelude::*;

    fn table1_config(shape: f64, t_end: f64, dt: f64, samples: Vec<f64>) -> SolveConfig {
        SolveConfig {
            kernel: KernelSpec::new(KernelFamily::Gaussian, shape).unwrap(),
            params: DswParams::new(1.0, 0.001, (-4.0, 4.0), SolutionVariant::PaperConstant)
                .unwrap(),
            nodes: NodeSet::uniform(-4.0, 4.0, 0.1).unwrap(),
            grid: TimeGrid::new(0.0, t_end, dt, samples).unwrap(),
            pivot_tol: 1e-14,
        }
    }

    #[test]
    fn linf_basics() {
        assert_eq!(error_linf(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(error_linf(&[1.0, 2.0], &[1.5, 2.0]).unwrap(), 0.5);
        assert_eq!(error_linf(&[0.0, 0.0, 0.0], &[1.0, -2.0, 0.5]).unwrap(), 2.0);
        assert!(error_linf(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn rms_basics() {
        assert_eq!(error_rms(&[4.0, 5.0], &[4.0, 5.0]).unwrap(), 0.0);
        assert_eq!(error_rms(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(error_rms(&[3.0], &[0.0]).unwrap(), 3.0);
        assert!(error_rms(&[], &[]).is_err());
        assert!(error_rms(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn table_at_t0_is_identically_zero() {
        let cfg = table1_config(3400.0, 0.002, 1e-3, vec![0.0]);
        let out = run_solve(&cfg).unwrap();
        let xs = [0.1, 0.2, 0.3];
        let table = pointwise_table(&cfg, &out, &xs, &[0.0], Variable::U).unwrap();
        assert!(table.errors[0].iter().all(|&e| e == 0.0));
        let table_v = pointwise_table(&cfg, &out, &xs, &[0.0], Variable::V).unwrap();
        assert!(table_v.errors[0].iter().all(|&e| e == 0.0));
    }

    #[test]
    fn table_rejects_off_grid_x() {
        let cfg = table1_config(3400.0, 0.002, 1e-3, vec![0.0]);
        let out = run_solve(&cfg).unwrap();
        let err = pointwise_table(&cfg, &out, &[0.123], &[0.0], Variable::U);
        match err {
            Err(Error::InvalidInput(msg)) => assert!(msg.contains("0.123")),
            other => panic!("expected invalid input, got {other:?}"),
        }
    }

    #[test]
    fn sweep_single_shape_matches_direct_run() {
        let cfg = table1_config(3400.0, 0.01, 1e-3, vec![0.01]);
        let direct = run_solve(&cfg).unwrap();
        let direct_linf = error_report(&cfg, &direct, Variable::U).unwrap().linf;
        let sweep = shape_sweep(&cfg, &[3400.0]).unwrap();
        assert_eq!(sweep.len(), 1);
        assert_eq!(sweep[0].status, SolveStatus::Ok);
        assert_eq!(sweep[0].linf_u, Some(direct_linf));
    }

    #[test]
    fn sweep_has_one_point_per_shape_in_order() {
        let cfg = table1_config(3400.0, 0.01, 1e-3, vec![0.01]);
        let shapes = [500.0, 100.0, 1000.0, 200.0, 700.0];
        let sweep = shape_sweep(&cfg, &shapes).unwrap();
        assert_eq!(sweep.len(), shapes.len());
        assert!(sweep.windows(2).all(|w| w[0].shape < w[1].shape));
    }

    #[test]
    fn sweep_records_failures_as_data() {
        // A wildly flat Gaussian makes the collocation matrix numerically
        // singular; the sweep must keep going and label the point.
        let cfg = table1_config(3400.0, 0.01, 1e-3, vec![0.01]);
        let sweep = shape_sweep(&cfg, &[1e-8, 3400.0]).unwrap();
        assert_eq!(sweep.len(), 2);
        assert_eq!(sweep[0].status, SolveStatus::NearSingular);
        assert!(sweep[0].linf_u.is_none());
        assert_eq!(sweep[1].status, SolveStatus::Ok);
    }

    #[test]
    fn sweep_rejects_bad_shapes() {
        let cfg = table1_config(3400.0, 0.01, 1e-3, vec![0.01]);
        assert!(shape_sweep(&cfg, &[]).is_err());
        assert!(shape_sweep(&cfg, &[1.0, -2.0]).is_err());
    }

    #[test]
    fn convergence_study_shapes() {
        let cfg = table1_config(3400.0, 0.01, 1e-3, vec![]);
        // Single level: one entry, no rates.
        let one = convergence_study(&cfg, RefinementAxis::Space, &[0.1]).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].rate_u.is_none());
        // Duplicates rejected.
        assert!(convergence_study(&cfg, RefinementAxis::Space, &[0.1, 0.1]).is_err());
        assert!(convergence_study(&cfg, RefinementAxis::Time, &[1e-3, 1e-3]).is_err());
        // Increasing rejected.
        assert!(convergence_study(&cfg, RefinementAxis::Time, &[1e-4, 1e-3]).is_err());
    }

    #[test]
    fn reports_have_consistent_metadata() {
        let cfg = table1_config(3400.0, 0.01, 1e-3, vec![0.005, 0.01]);
        let out = run_solve(&cfg).unwrap();
        assert!((out.delta - 0.05).abs() <= 1e-12);
        assert!((out.cond2 - 1.0).abs() <= 0.01);
        let report = error_report(&cfg, &out, Variable::U).unwrap();
        assert_eq!(report.pointwise.len(), 2 * cfg.nodes.len());
        assert!(report.rms <= report.linf);
        assert!(report.linf.is_finite());
    }

    proptest! {
        #[test]
        fn metric_symmetry_and_ordering(
            a in proptest::collection::vec(-1e6f64..1e6, 1..40),
            shift in -1e3f64..1e3,
        ) {
            let b: Vec<f64> = a.iter().map(|x| x + shift).collect();
            let linf_ab = error_linf(&a, &b).unwrap();
            let linf_ba = error_linf(&b, &a).unwrap();
            prop_assert_eq!(linf_ab, linf_ba);
            let rms_ab = error_rms(&a, &b).unwrap();
            let rms_ba = error_rms(&b, &a).unwrap();
            prop_assert_eq!(rms_ab, rms_ba);
            // RMS never exceeds the max error (up to rounding of the mean).
            prop_assert!(rms_ab <= linf_ab * (1.0 + 1e-12) + 1e-300);
        }
    }
}
