//! Semi-implicit time stepping: explicit kinetics, implicit diffusion.
//!
//! One step maps `(u^n, v^n)` to `(u^{n+1}, v^{n+1})` by solving
//!
//! ```text
//! A_u u^{n+1} = h² (u^n + dt f(u^n, v^n) + dt S_u(t^n))
//! A_v v^{n+1} = h² (v^n + dt g(u^n, v^n) + dt S_v(t^n))
//! ```
//!
//! where `A_s = h² I + dt d_s L` (see [`crate::diffusion`]). Both kinetics use
//! the old pair; the `v` update does not see `u^{n+1}`.

use std::sync::Arc;

use serde::Serialize;

use crate::diffusion::{ImplicitDiffusionOperator, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::field::CellField;
use crate::mesh::UniformMesh;

/// Diffusion coefficient of `u` used for every experiment.
pub const DEFAULT_D_U: f64 = 1.6e-5;
/// Diffusion coefficient of `v`, half that of `u`.
pub const DEFAULT_D_V: f64 = DEFAULT_D_U / 2.0;

/// Relative tolerance for deciding that `T / dt` is an integer.
const STEP_COUNT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrayScottParams {
    pub d_u: f64,
    pub d_v: f64,
    /// Feed rate `F`.
    pub feed: f64,
    /// Removal rate `k`.
    pub kill: f64,
}

impl GrayScottParams {
    pub fn new(d_u: f64, d_v: f64, feed: f64, kill: f64) -> Result<Self> {
        for (name, value) in [("d_u", d_u), ("d_v", d_v), ("F", feed), ("k", kill)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {value}"
                )));
            }
        }
        Ok(Self {
            d_u,
            d_v,
            feed,
            kill,
        })
    }

    /// Given kinetics with `d_u = 1.6e-5`, `d_v = d_u / 2`.
    pub fn with_default_diffusion(feed: f64, kill: f64) -> Result<Self> {
        Self::new(DEFAULT_D_U, DEFAULT_D_V, feed, kill)
    }

    #[inline]
    pub fn f(&self, u: f64, v: f64) -> f64 {
        reaction_f(u, v, self.feed)
    }

    #[inline]
    /// Largest step with `dt (F + k) ≤ 1`, under which the explicit kinetics
    /// cannot flip the sign of `v`.
    pub fn sign_step_limit(&self) -> f64 {
        1.0 / (self.feed + self.kill)
    }

    pub fn g(&self, u: f64, v: f64) -> f64 {
        reaction_g(u, v, self.feed, self.kill)
    }
}

/// Kinetics of `u`: `−u v² + F (1 − u)`.
#[inline]
pub fn reaction_f(u: f64, v: f64, feed: f64) -> f64 {
    -u * v * v + feed * (1.0 - u)
}

/// Kinetics of `v`: `u v² − (F + k) v`.
#[inline]
pub fn reaction_g(u: f64, v: f64, feed: f64, kill: f64) -> f64 {
    u * v * v - (feed + kill) * v
}

/// Source term `S(t, x, y)`.
pub type SourceFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Additive forcing for both species, evaluated together so shared
/// subexpressions are computed once per point.
#[derive(Clone)]
pub struct Sources {
    eval: Arc<dyn Fn(f64, f64, f64) -> [f64; 2] + Send + Sync>,
}

impl Sources {
    pub fn new(s_u: SourceFn, s_v: SourceFn) -> Self {
        Self::joint(move |t, x, y| [s_u(t, x, y), s_v(t, x, y)])
    }

    /// From a function returning `[S_u, S_v]`.
    pub fn joint(f: impl Fn(f64, f64, f64) -> [f64; 2] + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f) }
    }

    #[inline]
    pub fn eval(&self, t: f64, x: f64, y: f64) -> [f64; 2] {
        (self.eval)(t, x, y)
    }

    pub fn s_u(&self, t: f64, x: f64, y: f64) -> f64 {
        self.eval(t, x, y)[0]
    }

    pub fn s_v(&self, t: f64, x: f64, y: f64) -> f64 {
        self.eval(t, x, y)[1]
    }
}

impl std::fmt::Debug for Sources {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Sources { .. }")
    }
}

/// Time level and the discrete pair at that level.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub n: usize,
    pub t: f64,
    pub u: CellField,
    pub v: CellField,
}

impl SimState {
    pub fn new(u: CellField, v: CellField) -> Result<Self> {
        u.check_mesh(&v)?;
        Ok(Self { n: 0, t: 0.0, u, v })
    }

    pub fn mesh(&self) -> &Arc<UniformMesh> {
        self.u.mesh()
    }

    pub fn is_valid(&self) -> bool {
        self.u.is_valid() && self.v.is_valid()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub dt: f64,
    pub t_end: f64,
    pub monitor_bounds: bool,
    pub monitor_energy: bool,
    pub bound_tolerance: f64,
    pub v_max: f64,
    pub solver_tol: f64,
    pub max_iter: usize,
}

impl RunConfig {
    pub fn new(dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            dt,
            t_end,
            monitor_bounds: true,
            monitor_energy: true,
            bound_tolerance: 1e-12,
            v_max: 1.0,
            solver_tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt * (1.0 - STEP_COUNT_TOL)) {
            return Err(Error::InvalidParameter(format!(
                "terminal time {} must be at least dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(())
    }

    /// Number of steps and, when `T / dt` is not an integer, the length of
    /// the shortened final step.
    pub fn schedule(&self) -> (usize, Option<f64>) {
        let ratio = self.t_end / self.dt;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= STEP_COUNT_TOL * ratio {
            (nearest as usize, None)
        } else {
            let n = ratio.ceil() as usize;
            (n, Some(self.t_end - (n - 1) as f64 * self.dt))
        }
    }
}

/// Iterative solver settings for each implicit solve.
#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// One fixed-size step, with both implicit operators built once.
#[derive(Debug, Clone)]
pub struct Stepper {
    params: GrayScottParams,
    dt: f64,
    op_u: ImplicitDiffusionOperator,
    op_v: ImplicitDiffusionOperator,
    solver: SolverSettings,
}

/// CG iterations spent on one step.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepStats {
    pub iterations_u: usize,
    pub iterations_v: usize,
}

impl Stepper {
    pub fn new(
        mesh: &Arc<UniformMesh>,
        params: GrayScottParams,
        dt: f64,
        solver: SolverSettings,
    ) -> Result<Self> {
        Ok(Self {
            params,
            dt,
            op_u: ImplicitDiffusionOperator::new(mesh, params.d_u, dt)?,
            op_v: ImplicitDiffusionOperator::new(mesh, params.d_v, dt)?,
            solver,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance one step. The new time is `t + dt`; callers that need exact
    /// `n·dt` bookkeeping overwrite it.
    pub fn step(
        &self,
        state: &SimState,
        sources: Option<&Sources>,
    ) -> Result<(SimState, StepStats)> {
        let mesh = self.op_u.mesh();
        if !state.u.on_mesh(mesh) || !state.v.on_mesh(mesh) {
            return Err(Error::MeshMismatch);
        }
        let h2 = mesh.cell_area();
        let dt = self.dt;
        let (u, v) = (state.u.values(), state.v.values());

        let mut rhs_u = Vec::with_capacity(u.len());
        let mut rhs_v = Vec::with_capacity(u.len());
        for k in 0..u.len() {
            let (uk, vk) = (u[k], v[k]);
            let mut du = self.params.f(uk, vk);
            let mut dv = self.params.g(uk, vk);
            if let Some(src) = sources {
                let [x, y] = mesh.center_unchecked(k);
                let [su, sv] = src.eval(state.t, x, y);
                du += su;
                dv += sv;
            }
            rhs_u.push(h2 * (uk + dt * du));
            rhs_v.push(h2 * (vk + dt * dv));
        }
        if rhs_u.iter().chain(&rhs_v).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { step: state.n + 1 });
        }

        let rhs_u = CellField::from_values(mesh, rhs_u)?;
        let rhs_v = CellField::from_values(mesh, rhs_v)?;
        let (u_new, su) = self
            .op_u
            .solve(&rhs_u, self.solver.tol, self.solver.max_iter)?;
        let (v_new, sv) = self
            .op_v
            .solve(&rhs_v, self.solver.tol, self.solver.max_iter)?;
        Ok((
            SimState {
                n: state.n + 1,
                t: state.t + dt,
                u: u_new,
                v: v_new,
            },
            StepStats {
                iterations_u: su.iterations,
                iterations_v: sv.iterations,
            },
        ))
    }
}

/// Single step with default solver settings.
pub fn step(
    state: &SimState,
    params: &GrayScottParams,
    dt: f64,
    sources: Option<&Sources>,
) -> Result<SimState> {
    let stepper = Stepper::new(state.mesh(), *params, dt, SolverSettings::default())?;
    stepper.step(state, sources).map(|(s, _)| s)
}

/// One row of the discrete energy ledger.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnergyEntry {
    pub n: usize,
    pub t: f64,
    /// `‖u‖² + ‖v‖²` in the discrete L² norm.
    pub l2_sq: f64,
    /// `Σ_{m ≤ n} dt_m (d_u |u^m|²_1 + d_v |v^m|²_1)`.
    pub dissipation: f64,
}

/// Bound and energy observations collected during a run.
#[derive(Debug, Clone, Serialize)]
pub struct MonitorReport {
    pub steps: usize,
    pub shortened_last_step: Option<f64>,
    pub min_u: f64,
    pub max_u: f64,
    pub min_v: f64,
    pub max_v: f64,
    pub bound_violations: usize,
    pub first_violation_step: Option<usize>,
    /// Whether `dt (F + k) ≤ 1` held for the run.
    pub sign_condition: bool,
    pub energy: Vec<EnergyEntry>,
    pub total_cg_iterations: usize,
    pub max_cg_iterations: usize,
}

impl MonitorReport {
    fn new() -> Self {
        Self {
            steps: 0,
            shortened_last_step: None,
            min_u: f64::INFINITY,
            max_u: f64::NEG_INFINITY,
            min_v: f64::INFINITY,
            max_v: f64::NEG_INFINITY,
            bound_violations: 0,
            first_violation_step: None,
            sign_condition: true,
            energy: Vec::new(),
            total_cg_iterations: 0,
            max_cg_iterations: 0,
        }
    }

    fn observe_bounds(&mut self, state: &SimState, cfg: &RunConfig) {
        let (umin, umax) = (state.u.min(), state.u.max());
        let (vmin, vmax) = (state.v.min(), state.v.max());
        self.min_u = self.min_u.min(umin);
        self.max_u = self.max_u.max(umax);
        self.min_v = self.min_v.min(vmin);
        self.max_v = self.max_v.max(vmax);
        let tol = cfg.bound_tolerance;
        if umin < -tol || umax > 1.0 + tol || vmin < -tol || vmax > cfg.v_max + tol {
            self.bound_violations += 1;
            self.first_violation_step.get_or_insert(state.n);
        }
    }

    fn observe_energy(&mut self, state: &SimState, params: &GrayScottParams, dt: f64) {
        let l2_sq = state.u.norm_l2_h().powi(2) + state.v.norm_l2_h().powi(2);
        let prev = self.energy.last().map_or(0.0, |e| e.dissipation);
        let increment = if state.n == 0 {
            0.0
        } else {
            dt * (params.d_u * state.u.grad_form_h(&state.u).expect("same mesh")
                + params.d_v * state.v.grad_form_h(&state.v).expect("same mesh"))
        };
        self.energy.push(EnergyEntry {
            n: state.n,
            t: state.t,
            l2_sq,
            dissipation: prev + increment,
        });
    }

    /// `max_n (‖u^n‖² + ‖v^n‖²)`.
    pub fn max_l2_sq(&self) -> f64 {
        self.energy
            .iter()
            .map(|e| e.l2_sq)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Cumulative dissipation at the final step.
    pub fn total_dissipation(&self) -> f64 {
        self.energy.last().map_or(0.0, |e| e.dissipation)
    }

    /// Ledger value `max_n (‖u‖² + ‖v‖²) + Σ dt (d_u |u|² + d_v |v|²)`.
    pub fn ledger(&self) -> f64 {
        self.max_l2_sq() + self.total_dissipation()
    }

    /// Smallest `C` with `ledger(n) ≤ ledger(0) e^{C t_n}` for every recorded `n`.
    pub fn fitted_growth_rate(&self) -> Option<f64> {
        let first = self.energy.first()?;
        let base = first.l2_sq;
        if base <= 0.0 {
            return None;
        }
        let mut running_max = f64::NEG_INFINITY;
        let mut rate = 0.0f64;
        for e in &self.energy {
            running_max = running_max.max(e.l2_sq);
            if e.t > 0.0 {
                rate = rate.max(((running_max + e.dissipation) / base).ln() / e.t);
            }
        }
        Some(rate)
    }

    pub fn bounds_hold(&self) -> bool {
        self.bound_violations == 0
    }
}

/// Observer called with the state after every step.
pub type Observer<'a> = dyn FnMut(&SimState) + 'a;

/// March from `initial` to `config.t_end`.
///
/// Steps use `config.dt`; if `T / dt` is not an integer the final step is
/// shortened so that the run ends exactly at `T`.
pub fn run(
    initial: &SimState,
    params: &GrayScottParams,
    config: &RunConfig,
    sources: Option<&Sources>,
    observers: &mut [&mut Observer<'_>],
) -> Result<(SimState, MonitorReport)> {
    config.validate()?;
    if !initial.is_valid() {
        return Err(Error::NonFinite { step: initial.n });
    }
    let mesh = initial.mesh();
    let solver = SolverSettings {
        tol: config.solver_tol,
        max_iter: config.max_iter,
    };
    let stepper = Stepper::new(mesh, *params, config.dt, solver)?;
    let (steps, last) = config.schedule();

    let mut report = MonitorReport::new();
    report.shortened_last_step = last;
    report.sign_condition = config.dt <= params.sign_step_limit();
    if config.monitor_bounds {
        report.observe_bounds(initial, config);
    }
    if config.monitor_energy {
        report.observe_energy(initial, params, config.dt);
    }

    let n0 = initial.n;
    let t0 = initial.t;
    let mut state = initial.clone();
    for i in 0..steps {
        let is_last = i + 1 == steps;
        let (next, stats) = match (is_last, last) {
            (true, Some(short)) => {
                Stepper::new(mesh, *params, short, solver)?.step(&state, sources)
            }
            _ => stepper.step(&state, sources),
        }
        .map_err(|e| match e {
            Error::NonFinite { .. } => Error::NonFinite { step: n0 + i + 1 },
            other => Error::StepFailed {
                step: n0 + i + 1,
                source: Box::new(other),
            },
        })?;
        state = next;
        state.t = if is_last && last.is_some() {
            t0 + config.t_end
        } else {
            t0 + (i + 1) as f64 * config.dt
        };
        if !state.is_valid() {
            return Err(Error::NonFinite { step: state.n });
        }

        let iters = stats.iterations_u + stats.iterations_v;
        report.total_cg_iterations += iters;
        report.max_cg_iterations = report
            .max_cg_iterations
            .max(stats.iterations_u.max(stats.iterations_v));
        report.steps += 1;
        if config.monitor_bounds {
            report.observe_bounds(&state, config);
        }
        if config.monitor_energy {
            let dt = if is_last {
                last.unwrap_or(config.dt)
            } else {
                config.dt
            };
            report.observe_energy(&state, params, dt);
        }
        for obs in observers.iter_mut() {
            obs(&state);
        }
    }
    Ok((state, report))
}
