//! Manufactured solutions and the verification studies built on them.
//!
//! A [`ManufacturedCase`] bundles a prescribed pair `(u*, v*)` with the source
//! terms that make it an exact solution of the forced system
//!
//! ```text
//! ∂t u = d_u Δu − u v² + F (1 − u) + S_u
//! ∂t v = d_v Δv + u v² − (F + k) v + S_v
//! ```
//!
//! The sources are hand-derived closed forms; [`residual_check`] validates them
//! against finite differences of `(u*, v*)`, independently of the scheme.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{CellField, Quadrature};
use crate::imex::{self, GrayScottParams, RunConfig, SimState, SourceFn, Sources};
use crate::mesh::UniformMesh;

/// Tolerance for matching sample times against the terminal time.
const TIME_TOL: f64 = 1e-9;

/// Kinetics used by the manufactured cases unless overridden.
pub const DEFAULT_FEED: f64 = 0.037;
pub const DEFAULT_KILL: f64 = 0.060;

/// Default diffusion with [`DEFAULT_FEED`] and [`DEFAULT_KILL`].
pub fn default_params() -> GrayScottParams {
    GrayScottParams::with_default_diffusion(DEFAULT_FEED, DEFAULT_KILL).expect("positive defaults")
}

/// Exact solution `(u*, v*)` together with its forcing.
#[derive(Clone)]
pub struct ManufacturedCase {
    pub label: String,
    pub params: GrayScottParams,
    pub u_star: SourceFn,
    pub v_star: SourceFn,
    pub sources: Sources,
}

impl std::fmt::Debug for ManufacturedCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedCase")
            .field("label", &self.label)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl ManufacturedCase {
    /// Projected exact pair at time `t` (3x3 Gauss cell averages).
    pub fn exact_state(&self, mesh: &Arc<UniformMesh>, t: f64) -> (CellField, CellField) {
        let (us, vs) = (&self.u_star, &self.v_star);
        (
            CellField::project(mesh, |x, y| us(t, x, y), Quadrature::Gauss3),
            CellField::project(mesh, |x, y| vs(t, x, y), Quadrature::Gauss3),
        )
    }

    /// Initial state for the scheme: projected exact data at `t = 0`.
    pub fn initial_state(&self, mesh: &Arc<UniformMesh>) -> SimState {
        let (u, v) = self.exact_state(mesh, 0.0);
        SimState::new(u, v).expect("same mesh")
    }

    /// Same exact pair with the source of `u` shifted by a constant.
    pub fn with_u_source_offset(&self, offset: f64) -> Self {
        let inner = self.sources.clone();
        let mut case = self.clone();
        case.sources = Sources::joint(move |t, x, y| {
            let [su, sv] = inner.eval(t, x, y);
            [su + offset, sv]
        });
        case.label = format!("{} (S_u + {offset})", self.label);
        case
    }
}

/// Default amplitude for the trigonometric case.
pub const DEFAULT_TRIG_AMPLITUDE: f64 = 0.5;

/// `u* = 1 − a cos(αx)cos(αy)cos(ωt)`, `v* = ¼ + ¼ cos(αx)cos(αy)cos(ωt)`, `α = ω = 2π`.
pub fn trig_case(a: f64, params: GrayScottParams) -> Result<ManufacturedCase> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::DomainError(format!(
            "amplitude a must lie in (0, 1), got {a}"
        )));
    }
    let alpha = 2.0 * PI;
    let omega = 2.0 * PI;
    let GrayScottParams {
        d_u,
        d_v,
        feed,
        kill,
    } = params;

    let u_star = move |t: f64, x: f64, y: f64| {
        1.0 - a * (alpha * x).cos() * (alpha * y).cos() * (omega * t).cos()
    };
    let v_star = move |t: f64, x: f64, y: f64| {
        0.25 + 0.25 * (alpha * x).cos() * (alpha * y).cos() * (omega * t).cos()
    };

    let sources = move |t: f64, x: f64, y: f64| {
        let cc = (alpha * x).cos() * (alpha * y).cos();
        let (sin_t, cos_t) = (omega * t).sin_cos();
        let u = 1.0 - a * cc * cos_t;
        let v = 0.25 + 0.25 * cc * cos_t;
        let uvv = u * v * v;
        let s_u = a * omega * cc * sin_t
            - 2.0 * a * d_u * alpha * alpha * cc * cos_t
            - (feed * (1.0 - u) - uvv);
        let s_v = -0.25 * omega * cc * sin_t + 0.5 * d_v * alpha * alpha * cc * cos_t
            - (-(feed + kill) * v + uvv);
        [s_u, s_v]
    };

    Ok(ManufacturedCase {
        label: format!("trig(a={a})"),
        params,
        u_star: Arc::new(u_star),
        v_star: Arc::new(v_star),
        sources: Sources::joint(sources),
    })
}

/// Level-set function of the moving interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum InterfaceGeometry {
    /// `r = cos(2π(x−½)) + cos(2π(y−½))` with derivatives taken from this `r`.
    #[default]
    Centered,
    /// `r = cos(πx) + cos(πy)`, whose derivatives `|∇r|² = π²(sin²πx + sin²πy)`
    /// and `Δr = −π² r` are the ones sometimes quoted for the centered form.
    Diagonal,
}

impl InterfaceGeometry {
    /// `(r, |∇r|², Δr)` at `(x, y)`.
    #[inline]
    fn eval(self, x: f64, y: f64) -> (f64, f64, f64) {
        match self {
            InterfaceGeometry::Centered => {
                let w = 2.0 * PI;
                let (sx, cx) = (w * (x - 0.5)).sin_cos();
                let (sy, cy) = (w * (y - 0.5)).sin_cos();
                let r = cx + cy;
                (r, w * w * (sx * sx + sy * sy), -w * w * r)
            }
            InterfaceGeometry::Diagonal => {
                let (sx, cx) = (PI * x).sin_cos();
                let (sy, cy) = (PI * y).sin_cos();
                let r = cx + cy;
                (r, PI * PI * (sx * sx + sy * sy), -PI * PI * r)
            }
        }
    }
}

/// Parameters of the moving tanh interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TanhConfig {
    /// Interface thickness `ε`.
    pub eps: f64,
    /// Baseline level `r₀₀`.
    pub r00: f64,
    /// Oscillation amplitude `A`.
    pub amplitude: f64,
    /// Angular frequency `λ`.
    pub lambda: f64,
    pub geometry: InterfaceGeometry,
}

impl TanhConfig {
    pub fn with_eps(eps: f64) -> Self {
        Self {
            eps,
            ..Self::default()
        }
    }
}

impl Default for TanhConfig {
    fn default() -> Self {
        Self {
            eps: 0.1,
            r00: 0.25,
            amplitude: 0.25,
            lambda: 2.0 * PI,
            geometry: InterfaceGeometry::Centered,
        }
    }
}

/// `u* = ½[1 + tanh(s/ε)]`, `v* = 1 − u*`, `s = r₀(t) − r(x, y)`, `r₀(t) = r₀₀ + A sin(λt)`.
pub fn tanh_case(cfg: TanhConfig, params: GrayScottParams) -> Result<ManufacturedCase> {
    let TanhConfig {
        eps,
        r00,
        amplitude,
        lambda,
        geometry,
    } = cfg;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::DomainError(format!(
            "interface thickness must be > 0, got {eps}"
        )));
    }
    let GrayScottParams {
        d_u,
        d_v,
        feed,
        kill,
    } = params;

    let r0 = move |t: f64| r00 + amplitude * (lambda * t).sin();
    let u_star = move |t: f64, x: f64, y: f64| {
        let (r, _, _) = geometry.eval(x, y);
        0.5 * (1.0 + ((r0(t) - r) / eps).tanh())
    };
    let v_star = move |t: f64, x: f64, y: f64| 1.0 - u_star(t, x, y);

    // Δu* = −ε⁻² sech²(z) tanh(z) |∇r|² − (2ε)⁻¹ sech²(z) Δr with z = s/ε; v* = 1 − u*.
    let parts = move |t: f64, x: f64, y: f64| {
        let (r, grad_sq, lap_r) = geometry.eval(x, y);
        let z = (r0(t) - r) / eps;
        let th = z.tanh();
        let sech2 = 1.0 - th * th;
        let dr0 = amplitude * lambda * (lambda * t).cos();
        let u = 0.5 * (1.0 + th);
        let v = 1.0 - u;
        let dt_u = sech2 * dr0 / (2.0 * eps);
        let lap_u = -sech2 * th * grad_sq / (eps * eps) - sech2 * lap_r / (2.0 * eps);
        (u, v, dt_u, lap_u)
    };
    let sources = move |t: f64, x: f64, y: f64| {
        let (u, v, dt_u, lap_u) = parts(t, x, y);
        let uvv = u * v * v;
        [
            dt_u - d_u * lap_u - (feed * (1.0 - u) - uvv),
            -dt_u + d_v * lap_u - (-(feed + kill) * v + uvv),
        ]
    };

    Ok(ManufacturedCase {
        label: format!("tanh(eps={eps})"),
        params,
        u_star: Arc::new(u_star),
        v_star: Arc::new(v_star),
        sources: Sources::joint(sources),
    })
}

/// Steady pair `(1, 0)` with zero forcing.
pub fn steady_case(params: GrayScottParams) -> ManufacturedCase {
    ManufacturedCase {
        label: "steady".into(),
        params,
        u_star: Arc::new(|_, _, _| 1.0),
        v_star: Arc::new(|_, _, _| 0.0),
        sources: Sources::joint(|_, _, _| [0.0, 0.0]),
    }
}

/// Largest pointwise defect of `(u*, v*)` in the forced system, with the time
/// derivative replaced by a central difference of width `2 dt_fd` and the
/// Laplacian by the 5-point difference at spacing `h` around each cell center.
pub fn residual_check(
    case: &ManufacturedCase,
    t: f64,
    mesh: &UniformMesh,
    dt_fd: f64,
) -> Result<(f64, f64)> {
    if !(dt_fd > 0.0) || t - dt_fd < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need dt_fd > 0 and t - dt_fd >= 0 (t = {t}, dt_fd = {dt_fd})"
        )));
    }
    let h = mesh.h();
    let p = case.params;
    let (us, vs) = (&case.u_star, &case.v_star);
    let fd = |w: &SourceFn, x: f64, y: f64| {
        let dt = (w(t + dt_fd, x, y) - w(t - dt_fd, x, y)) / (2.0 * dt_fd);
        let lap = (w(t, x + h, y) + w(t, x - h, y) + w(t, x, y + h) + w(t, x, y - h)
            - 4.0 * w(t, x, y))
            / (h * h);
        (dt, lap)
    };
    let mut defect_u = 0.0f64;
    let mut defect_v = 0.0f64;
    for [x, y] in mesh.centers() {
        let (u, v) = (us(t, x, y), vs(t, x, y));
        let (dtu, lapu) = fd(us, x, y);
        let (dtv, lapv) = fd(vs, x, y);
        let [su, sv] = case.sources.eval(t, x, y);
        let ru = dtu - p.d_u * lapu - p.f(u, v) - su;
        let rv = dtv - p.d_v * lapv - p.g(u, v) - sv;
        defect_u = defect_u.max(ru.abs());
        defect_v = defect_v.max(rv.abs());
    }
    Ok((defect_u, defect_v))
}

/// One run of a study: discrete `L∞(L²)` and `L∞(L∞)` errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRow {
    pub h: f64,
    pub dt: f64,
    pub err_linf_l2_u: f64,
    pub err_linf_l2_v: f64,
    pub err_linf_linf_u: f64,
    pub err_linf_linf_v: f64,
    pub runtime_s: f64,
    /// The run completed with finite values and no solver failure.
    pub finite: bool,
}

impl ErrorRow {
    /// Errors in the order of the table columns.
    pub fn errors(&self) -> [f64; 4] {
        [
            self.err_linf_l2_u,
            self.err_linf_l2_v,
            self.err_linf_linf_u,
            self.err_linf_linf_v,
        ]
    }

    fn failed(h: f64, dt: f64, runtime_s: f64) -> Self {
        Self {
            h,
            dt,
            err_linf_l2_u: f64::NAN,
            err_linf_l2_v: f64::NAN,
            err_linf_linf_u: f64::NAN,
            err_linf_linf_v: f64::NAN,
            runtime_s,
            finite: false,
        }
    }
}

/// Abscissa used for observed orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StudyAxis {
    /// Cell volume `h²`.
    CellVolume,
    /// Time step.
    TimeStep,
    /// Interface thickness `ε`.
    InterfaceThickness,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorTable {
    pub label: String,
    pub axis: StudyAxis,
    /// Abscissa per row (`h²`, `dt` or `ε`).
    pub keys: Vec<f64>,
    pub rows: Vec<ErrorRow>,
    /// Least-squares slopes of `log(err)` against `log(key)`, per error column.
    pub orders: [f64; 4],
    pub sample_times: Vec<f64>,
    pub t_end: f64,
}

impl ErrorTable {
    pub fn new(
        label: String,
        axis: StudyAxis,
        keys: Vec<f64>,
        rows: Vec<ErrorRow>,
        sample_times: Vec<f64>,
        t_end: f64,
    ) -> Self {
        let orders = observed_orders(&keys, &rows);
        Self {
            label,
            axis,
            keys,
            rows,
            orders,
            sample_times,
            t_end,
        }
    }

    pub fn all_finite(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.finite && r.errors().iter().all(|e| e.is_finite()))
    }
}

/// Slopes per error column. Rows with non-positive or non-finite errors are skipped.
pub fn observed_orders(keys: &[f64], rows: &[ErrorRow]) -> [f64; 4] {
    let mut out = [f64::NAN; 4];
    for (col, slot) in out.iter_mut().enumerate() {
        let (x, y): (Vec<f64>, Vec<f64>) = keys
            .iter()
            .zip(rows)
            .map(|(&k, r)| (k, r.errors()[col]))
            .filter(|&(k, e)| k > 0.0 && e > 0.0 && e.is_finite())
            .unzip();
        if x.len() >= 2 {
            *slot = log_log_slope(&x, &y);
        }
    }
    out
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// `{T/10, 2T/10, …, T}`.
pub fn default_sample_times(t_end: f64) -> Vec<f64> {
    (1..=10).map(|i| t_end * i as f64 / 10.0).collect()
}

/// Errors against the projected exact solution, maximised over `sample_times`.
///
/// The scheme runs from the projected exact data with step `dt`; a step that
/// would overshoot a sample time is shortened to land on it.
pub fn error_norms(
    case: &ManufacturedCase,
    mesh: &Arc<UniformMesh>,
    dt: f64,
    t_end: f64,
    sample_times: &[f64],
) -> Result<ErrorRow> {
    error_norms_with(
        case,
        mesh,
        dt,
        t_end,
        sample_times,
        crate::diffusion::DEFAULT_TOL,
    )
}

pub fn error_norms_with(
    case: &ManufacturedCase,
    mesh: &Arc<UniformMesh>,
    dt: f64,
    t_end: f64,
    sample_times: &[f64],
    solver_tol: f64,
) -> Result<ErrorRow> {
    let mut prev = 0.0;
    for &ts in sample_times {
        if !(ts >= prev) || ts > t_end * (1.0 + TIME_TOL) {
            return Err(Error::SampleTimeUnreachable(ts));
        }
        prev = ts;
    }
    let start = Instant::now();
    let mut state = case.initial_state(mesh);
    let mut worst = [0.0f64; 4];
    let mut record = |state: &SimState, t: f64| {
        let (ue, ve) = case.exact_state(mesh, t);
        let eu = state.u.sub(&ue).expect("same mesh");
        let ev = state.v.sub(&ve).expect("same mesh");
        let errs = [
            eu.norm_l2_h(),
            ev.norm_l2_h(),
            eu.norm_linf(),
            ev.norm_linf(),
        ];
        for (w, e) in worst.iter_mut().zip(errs) {
            *w = w.max(e);
        }
    };
    for &ts in sample_times {
        let span = ts - state.t;
        if span > TIME_TOL * ts.max(1.0) {
            let mut cfg = RunConfig::new(dt.min(span), span)?;
            cfg.monitor_bounds = false;
            cfg.monitor_energy = false;
            cfg.solver_tol = solver_tol;
            let (next, _) = imex::run(&state, &case.params, &cfg, Some(&case.sources), &mut [])?;
            state = next;
            state.t = ts;
        }
        record(&state, ts);
    }
    Ok(ErrorRow {
        h: mesh.h(),
        dt,
        err_linf_l2_u: worst[0],
        err_linf_l2_v: worst[1],
        err_linf_linf_u: worst[2],
        err_linf_linf_v: worst[3],
        runtime_s: start.elapsed().as_secs_f64(),
        finite: worst.iter().all(|e| e.is_finite()),
    })
}

/// Refinement study with `dt = h²`; orders are measured against `h²`.
pub fn convergence_study(
    case: &ManufacturedCase,
    mesh_sizes: &[usize],
    t_end: f64,
    sample_times: &[f64],
) -> Result<ErrorTable> {
    if mesh_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "mesh sizes must be strictly ascending".into(),
        ));
    }
    let rows = mesh_sizes
        .par_iter()
        .map(|&n| {
            let mesh = Arc::new(UniformMesh::unit_square(n)?);
            let h = mesh.h();
            error_norms(case, &mesh, h * h, t_end, sample_times)
        })
        .collect::<Result<Vec<_>>>()?;
    let keys = rows.iter().map(|r| r.h * r.h).collect();
    Ok(ErrorTable::new(
        format!("convergence {}", case.label),
        StudyAxis::CellVolume,
        keys,
        rows,
        sample_times.to_vec(),
        t_end,
    ))
}

/// Sample times for a stability study: multiples of the largest step up to `T`.
pub fn stability_sample_times(h: f64, multipliers: &[f64], t_end: f64) -> Vec<f64> {
    let dt_max = multipliers.iter().copied().fold(0.0, f64::max) * h;
    let count = (t_end / dt_max * (1.0 + TIME_TOL)).floor() as usize;
    let mut times: Vec<f64> = (1..=count).map(|i| i as f64 * dt_max).collect();
    if times
        .last()
        .is_none_or(|&t| (t - t_end).abs() > TIME_TOL * t_end)
    {
        times.push(t_end);
    }
    times
}

/// Fixed mesh, `dt = k h` for each multiplier `k`. Failed runs are recorded
/// with NaN errors instead of aborting the study.
pub fn stability_study(
    case: &ManufacturedCase,
    nx: usize,
    multipliers: &[f64],
    t_end: f64,
) -> Result<ErrorTable> {
    if multipliers.is_empty() || multipliers.iter().any(|&k| !(k > 0.0)) {
        return Err(Error::InvalidParameter(
            "multipliers must be positive".into(),
        ));
    }
    let mesh = Arc::new(UniformMesh::unit_square(nx)?);
    let h = mesh.h();
    let samples = stability_sample_times(h, multipliers, t_end);
    let rows = multipliers
        .par_iter()
        .map(|&k| {
            let dt = k * h;
            let start = Instant::now();
            match error_norms(case, &mesh, dt, t_end, &samples) {
                Ok(row) => Ok(row),
                Err(e) if e.is_numerical() => {
                    Ok(ErrorRow::failed(h, dt, start.elapsed().as_secs_f64()))
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let keys = rows.iter().map(|r| r.dt).collect();
    Ok(ErrorTable::new(
        format!("stability {}", case.label),
        StudyAxis::TimeStep,
        keys,
        rows,
        samples,
        t_end,
    ))
}

/// Default interface thicknesses, coarsest first.
pub const DEFAULT_EPS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Error against interface thickness at fixed mesh and time step.
pub fn interface_study(
    params: GrayScottParams,
    base: TanhConfig,
    eps_list: &[f64],
    nx: usize,
    dt: f64,
    t_end: f64,
    sample_times: &[f64],
) -> Result<ErrorTable> {
    let mesh = Arc::new(UniformMesh::unit_square(nx)?);
    let h = mesh.h();
    if eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidParameter(
            "interface thicknesses must be strictly descending".into(),
        ));
    }
    if let Some(&eps) = eps_list.iter().find(|&&e| e <= 2.0 * h) {
        return Err(Error::UnresolvableInterface { eps, h });
    }
    let rows = eps_list
        .par_iter()
        .map(|&eps| {
            let case = tanh_case(TanhConfig { eps, ..base }, params)?;
            error_norms(&case, &mesh, dt, t_end, sample_times)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorTable::new(
        "interface tanh".into(),
        StudyAxis::InterfaceThickness,
        eps_list.to_vec(),
        rows,
        sample_times.to_vec(),
        t_end,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab() -> GrayScottParams {
        GrayScottParams::with_default_diffusion(0.037, 0.060).unwrap()
    }

    #[test]
    fn slope_of_exact_power_law() {
        let x = [1.0 / 256.0, 1.0 / 1024.0, 1.0 / 4096.0];
        let y: Vec<f64> = x.iter().map(|v| 3.7 * v).collect();
        assert!((log_log_slope(&x, &y) - 1.0).abs() < 1e-12);
        let y2: Vec<f64> = x.iter().map(|v| 0.01 * v * v).collect();
        assert!((log_log_slope(&x, &y2) - 2.0).abs() < 1e-12);
        // invariant under rescaling
        let y3: Vec<f64> = y2.iter().map(|v| 1e6 * v).collect();
        assert!((log_log_slope(&x, &y3) - log_log_slope(&x, &y2)).abs() < 1e-12);
    }

    #[test]
    fn trig_values_at_origin() {
        let c = trig_case(0.5, lab()).unwrap();
        assert_eq!((c.u_star)(0.0, 0.0, 0.0), 0.5);
        assert_eq!((c.v_star)(0.0, 0.0, 0.0), 0.5);
        // −2·0.5·1.6e-5·4π² − (0.037·0.5 − 0.5·0.25)
        let expect = -2.0 * 0.5 * 1.6e-5 * 4.0 * PI * PI - (0.037 * 0.5 - 0.5 * 0.25);
        assert!((c.sources.s_u(0.0, 0.0, 0.0) - expect).abs() < 1e-15);
        assert!((c.sources.s_u(0.0, 0.0, 0.0) - 0.105_868_34).abs() < 1e-8);
        assert!(matches!(trig_case(1.0, lab()), Err(Error::DomainError(_))));
        assert!(matches!(trig_case(0.0, lab()), Err(Error::DomainError(_))));
    }

    #[test]
    fn tanh_definitions() {
        let c = tanh_case(TanhConfig::default(), lab()).unwrap();
        for &(t, x, y) in &[(0.1, 0.2, 0.7), (0.77, 0.5, 0.5), (0.3, 0.01, 0.93)] {
            let u = (c.u_star)(t, x, y);
            assert_eq!((c.v_star)(t, x, y), 1.0 - u);
        }
        // at t = 0 the level is r₀ = 0.25; on y = 0.5 that is 1 + cos(2π(x−½)) = 0.25
        let x = 0.5 + (-0.75f64).acos() / (2.0 * PI);
        assert!(((c.u_star)(0.0, x, 0.5) - 0.5).abs() < 1e-14);
        assert!(matches!(
            tanh_case(TanhConfig::with_eps(0.0), lab()),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn fd_consistent_source_has_zero_defect() {
        // sources defined by the same stencils the checker uses
        let base = trig_case(0.5, lab()).unwrap();
        let mesh = UniformMesh::unit_square(16).unwrap();
        let (h, dt_fd, t) = (mesh.h(), 1e-3, 0.3);
        let p = base.params;
        let (us, vs) = (base.u_star.clone(), base.v_star.clone());
        let stencil = move |w: &SourceFn, tt: f64, x: f64, y: f64| {
            let dt = (w(tt + dt_fd, x, y) - w(tt - dt_fd, x, y)) / (2.0 * dt_fd);
            let lap = (w(tt, x + h, y) + w(tt, x - h, y) + w(tt, x, y + h) + w(tt, x, y - h)
                - 4.0 * w(tt, x, y))
                / (h * h);
            (dt, lap)
        };
        let (u1, v1) = (us.clone(), vs.clone());
        let s_u: SourceFn = Arc::new(move |tt, x, y| {
            let (d, l) = stencil(&u1, tt, x, y);
            d - p.d_u * l - p.f(u1(tt, x, y), v1(tt, x, y))
        });
        let (u2, v2) = (us.clone(), vs.clone());
        let s_v: SourceFn = Arc::new(move |tt, x, y| {
            let (d, l) = stencil(&v2, tt, x, y);
            d - p.d_v * l - p.g(u2(tt, x, y), v2(tt, x, y))
        });
        let case = ManufacturedCase {
            sources: Sources::new(s_u, s_v),
            ..base
        };
        let (du, dv) = residual_check(&case, t, &mesh, dt_fd).unwrap();
        assert!(du < 1e-12 && dv < 1e-12, "{du} {dv}");
    }

    #[test]
    fn trig_sources_converge_at_second_order() {
        let c = trig_case(0.5, lab()).unwrap();
        let mut prev = None;
        for n in [32usize, 64] {
            let m = UniformMesh::unit_square(n).unwrap();
            let h = m.h();
            let (du, dv) = residual_check(&c, 0.3, &m, h * h).unwrap();
            if let Some((pu, pv)) = prev {
                assert!(pu / du >= 3.5, "{pu} / {du}");
                assert!(pv / dv >= 3.5, "{pv} / {dv}");
            }
            prev = Some((du, dv));
        }
    }

    #[test]
    fn tanh_sources_converge_at_second_order() {
        // with eps = 0.1 the 5-point stencil is pre-asymptotic at 64²
        let c = tanh_case(TanhConfig::default(), lab()).unwrap();
        let mut prev = None;
        for n in [128usize, 256, 512] {
            let m = UniformMesh::unit_square(n).unwrap();
            let h = m.h();
            let (du, dv) = residual_check(&c, 0.2, &m, h * h).unwrap();
            if let Some((pu, pv)) = prev {
                assert!(pu / du >= 3.5, "{pu} / {du}");
                assert!(pv / dv >= 3.5, "{pv} / {dv}");
            }
            prev = Some((du, dv));
        }
    }

    #[test]
    fn corrupted_source_is_detected() {
        let c = trig_case(0.5, lab()).unwrap().with_u_source_offset(0.01);
        let m = UniformMesh::unit_square(32).unwrap();
        let (du, dv) = residual_check(&c, 0.3, &m, m.h() * m.h()).unwrap();
        assert!(du >= 0.009);
        assert!(dv < 1e-3);
        assert!(residual_check(&c, 0.0, &m, 0.1).is_err());
    }

    #[test]
    fn diagonal_geometry_is_self_consistent() {
        let cfg = TanhConfig {
            geometry: InterfaceGeometry::Diagonal,
            ..TanhConfig::default()
        };
        let c = tanh_case(cfg, lab()).unwrap();
        let coarse = UniformMesh::unit_square(64).unwrap();
        let fine = UniformMesh::unit_square(128).unwrap();
        let (a, _) = residual_check(&c, 0.2, &coarse, coarse.h().powi(2)).unwrap();
        let (b, _) = residual_check(&c, 0.2, &fine, fine.h().powi(2)).unwrap();
        assert!(a / b >= 3.5, "{a} {b}");
    }

    #[test]
    fn steady_pair_has_no_error() {
        let c = steady_case(lab());
        let m = Arc::new(UniformMesh::unit_square(8).unwrap());
        let row = error_norms(&c, &m, 0.1, 1.0, &default_sample_times(1.0)).unwrap();
        for e in row.errors() {
            assert!(e <= 1e-12);
        }
        assert!(row.finite);
    }

    #[test]
    fn initial_snapshot_error() {
        let c = trig_case(0.5, lab()).unwrap();
        let m = Arc::new(UniformMesh::unit_square(16).unwrap());
        let row = error_norms(&c, &m, 0.01, 1.0, &[0.0]).unwrap();
        assert!(row.errors().iter().all(|&e| e <= 1e-10));
    }

    #[test]
    fn unreachable_sample_times() {
        let c = steady_case(lab());
        let m = Arc::new(UniformMesh::unit_square(4).unwrap());
        assert!(matches!(
            error_norms(&c, &m, 0.1, 1.0, &[0.5, 2.0]),
            Err(Error::SampleTimeUnreachable(_))
        ));
        assert!(matches!(
            error_norms(&c, &m, 0.1, 1.0, &[0.5, 0.2]),
            Err(Error::SampleTimeUnreachable(_))
        ));
    }

    #[test]
    fn refinement_reduces_error() {
        let c = trig_case(0.5, lab()).unwrap();
        let samples = default_sample_times(1.0);
        let coarse = Arc::new(UniformMesh::unit_square(16).unwrap());
        let fine = Arc::new(UniformMesh::unit_square(32).unwrap());
        let a = error_norms(&c, &coarse, coarse.h().powi(2), 1.0, &samples).unwrap();
        let b = error_norms(&c, &fine, fine.h().powi(2), 1.0, &samples).unwrap();
        for (ea, eb) in a.errors().iter().zip(b.errors()) {
            assert!(eb < *ea && eb.is_finite());
        }
    }

    #[test]
    fn stability_samples_are_reachable() {
        let t = stability_sample_times(1.0 / 128.0, &[1.0, 2.0, 4.0, 16.0, 32.0, 64.0], 1.0);
        assert_eq!(t, vec![0.5, 1.0]);
        let t = stability_sample_times(0.1, &[3.0], 1.0);
        assert_eq!(t.len(), 4);
        assert_eq!(*t.last().unwrap(), 1.0);
    }

    #[test]
    fn interface_guard() {
        let err = interface_study(
            lab(),
            TanhConfig::default(),
            &[0.1, 0.01],
            64,
            0.01,
            0.1,
            &[0.1],
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnresolvableInterface { .. }));
    }

    #[test]
    fn wider_interface_is_less_steep() {
        let m = Arc::new(UniformMesh::unit_square(64).unwrap());
        let mut prev = f64::INFINITY;
        for eps in DEFAULT_EPS.iter().rev() {
            let c = tanh_case(TanhConfig::with_eps(*eps), lab()).unwrap();
            let (u, _) = c.exact_state(&m, 0.0);
            let steep = m
                .faces()
                .iter()
                .map(|f| (u.values()[f.k] - u.values()[f.l]).abs() / m.h())
                .fold(0.0, f64::max);
            assert!(steep < prev);
            prev = steep;
        }
    }
}
