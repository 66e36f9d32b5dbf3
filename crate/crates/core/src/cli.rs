//! Command-line front end.
//!
//! Settings resolve as: command-line flag, then the JSON file given with
//! `--config`, then the built-in default. Each command that writes files puts
//! a single `manifest.json` into its output directory.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 I/O failure. `GSFV_THREADS` caps the worker pool.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imex::{GrayScottParams, MonitorReport, DEFAULT_D_U, DEFAULT_D_V};
use crate::mesh::UniformMesh;
use crate::mms::{self, ErrorTable, InterfaceGeometry, ManufacturedCase, TanhConfig};
use crate::output::{self, RunManifest, SnapshotFormat, MANIFEST_FILE};
use crate::patterns::{self, PatternPreset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const THREADS_ENV: &str = "GSFV_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "gsfv",
    version,
    about = "Finite-volume IMEX solver for the Gray-Scott system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pattern run from the boxed initial condition.
    Simulate(SimulateArgs),
    /// Manufactured-solution studies.
    #[command(subcommand)]
    Mms(MmsCommand),
    /// List the pattern presets.
    Presets,
}

#[derive(Debug, Subcommand)]
enum MmsCommand {
    /// Mesh refinement with dt = h².
    Convergence(ConvergenceArgs),
    /// Fixed mesh, dt = k h.
    Stability(StabilityArgs),
    /// Error against interface thickness.
    Interface(InterfaceArgs),
    /// Finite-difference defect of the exact pair in the forced system.
    Residual(ResidualArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Trig,
    Tanh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Centered,
    Diagonal,
}

impl From<GeometryKind> for InterfaceGeometry {
    fn from(g: GeometryKind) -> Self {
        match g {
            GeometryKind::Centered => InterfaceGeometry::Centered,
            GeometryKind::Diagonal => InterfaceGeometry::Diagonal,
        }
    }
}

/// Keys accepted in the `--config` file. Every key is optional.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub nx: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub out: Option<PathBuf>,
    pub d_u: Option<f64>,
    pub d_v: Option<f64>,
    pub feed: Option<f64>,
    pub kill: Option<f64>,
    pub case: Option<CaseKind>,
    pub sizes: Option<Vec<usize>>,
    pub multipliers: Option<Vec<f64>>,
    pub eps: Option<Vec<f64>>,
    pub amplitude: Option<f64>,
    pub tanh_eps: Option<f64>,
    pub geometry: Option<GeometryKind>,
    pub t: Option<f64>,
    pub with_v: Option<bool>,
    pub csv: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Args)]
struct Common {
    /// JSON file with default settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d_u: Option<f64>,
    #[arg(long)]
    d_v: Option<f64>,
}

#[derive(Debug, Args)]
struct CaseArgs {
    #[arg(long, value_enum)]
    case: Option<CaseKind>,
    #[arg(long)]
    feed: Option<f64>,
    #[arg(long)]
    kill: Option<f64>,
    /// Amplitude `a` of the trigonometric case.
    #[arg(long)]
    amplitude: Option<f64>,
    /// Interface thickness of the tanh case.
    #[arg(long)]
    tanh_eps: Option<f64>,
    #[arg(long, value_enum)]
    geometry: Option<GeometryKind>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write snapshots of v.
    #[arg(long)]
    with_v: bool,
    /// Also write CSV value grids.
    #[arg(long)]
    csv: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    case: CaseArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct StabilityArgs {
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    multipliers: Option<Vec<f64>>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    case: CaseArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct InterfaceArgs {
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    feed: Option<f64>,
    #[arg(long)]
    kill: Option<f64>,
    #[arg(long, value_enum)]
    geometry: Option<GeometryKind>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ResidualArgs {
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Evaluation time.
    #[arg(long)]
    t: Option<f64>,
    #[command(flatten)]
    case: CaseArgs,
    #[command(flatten)]
    common: Common,
}

/// Run the command line `argv` (program name first) and return the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    init_thread_pool();
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("gsfv: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else if matches!(e, Error::IoFailure { .. }) {
        EXIT_IO
    } else {
        EXIT_USAGE
    }
}

fn init_thread_pool() {
    let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
    else {
        return;
    };
    if n > 0 {
        // A pool built earlier in the same process is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Presets => {
            for p in patterns::all_presets() {
                println!("{:<16} F={:.3} k={:.3}", p.name, p.feed, p.kill);
            }
            Ok(())
        }
        Command::Simulate(a) => simulate(a),
        Command::Mms(MmsCommand::Convergence(a)) => convergence(a),
        Command::Mms(MmsCommand::Stability(a)) => stability(a),
        Command::Mms(MmsCommand::Interface(a)) => interface(a),
        Command::Mms(MmsCommand::Residual(a)) => residual(a),
    }
}

fn file_config(common: &Common) -> Result<FileConfig> {
    common
        .config
        .as_deref()
        .map_or(Ok(FileConfig::default()), FileConfig::load)
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn require_out(out: Option<PathBuf>) -> Result<PathBuf> {
    let dir = out.ok_or_else(|| Error::InvalidParameter("--out is required".into()))?;
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn diffusion(common: &Common, cfg: &FileConfig) -> (f64, f64) {
    (
        common.d_u.or(cfg.d_u).unwrap_or(DEFAULT_D_U),
        common.d_v.or(cfg.d_v).unwrap_or(DEFAULT_D_V),
    )
}

/// Resolved manufactured-case settings.
#[derive(Debug, Clone, Serialize)]
struct CaseSettings {
    case: CaseKind,
    params: GrayScottParams,
    amplitude: f64,
    tanh: TanhConfig,
}

impl CaseSettings {
    fn resolve(a: &CaseArgs, common: &Common, cfg: &FileConfig) -> Result<Self> {
        let (d_u, d_v) = diffusion(common, cfg);
        let params = GrayScottParams::new(
            d_u,
            d_v,
            a.feed.or(cfg.feed).unwrap_or(mms::DEFAULT_FEED),
            a.kill.or(cfg.kill).unwrap_or(mms::DEFAULT_KILL),
        )?;
        let mut tanh = TanhConfig::default();
        tanh.eps = a.tanh_eps.or(cfg.tanh_eps).unwrap_or(tanh.eps);
        if let Some(g) = a.geometry.or(cfg.geometry) {
            tanh.geometry = g.into();
        }
        Ok(Self {
            case: a.case.or(cfg.case).unwrap_or(CaseKind::Trig),
            params,
            amplitude: a
                .amplitude
                .or(cfg.amplitude)
                .unwrap_or(mms::DEFAULT_TRIG_AMPLITUDE),
            tanh,
        })
    }

    fn build(&self) -> Result<ManufacturedCase> {
        match self.case {
            CaseKind::Trig => mms::trig_case(self.amplitude, self.params),
            CaseKind::Tanh => mms::tanh_case(self.tanh, self.params),
        }
    }

    fn name(&self) -> &'static str {
        match self.case {
            CaseKind::Trig => "trig",
            CaseKind::Tanh => "tanh",
        }
    }
}

#[derive(Debug, Serialize)]
struct SimulateSettings {
    preset: PatternPreset,
    nx: usize,
    dt: f64,
    t_end: f64,
    params: GrayScottParams,
    snapshot_times: Vec<f64>,
    solver_tol: f64,
    solver_max_iter: usize,
}

#[derive(Debug, Serialize)]
struct MonitorSummary {
    steps: usize,
    min_u: f64,
    max_u: f64,
    min_v: f64,
    max_v: f64,
    bound_violations: usize,
    first_violation_step: Option<usize>,
    sign_condition: bool,
    max_l2_sq: f64,
    total_dissipation: f64,
    fitted_growth_rate: Option<f64>,
    total_cg_iterations: usize,
    max_cg_iterations: usize,
}

impl From<&MonitorReport> for MonitorSummary {
    fn from(r: &MonitorReport) -> Self {
        Self {
            steps: r.steps,
            min_u: r.min_u,
            max_u: r.max_u,
            min_v: r.min_v,
            max_v: r.max_v,
            bound_violations: r.bound_violations,
            first_violation_step: r.first_violation_step,
            sign_condition: r.sign_condition,
            max_l2_sq: r.max_l2_sq(),
            total_dissipation: r.total_dissipation(),
            fitted_growth_rate: r.fitted_growth_rate(),
            total_cg_iterations: r.total_cg_iterations,
            max_cg_iterations: r.max_cg_iterations,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Format(e.to_string()))
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let cfg = file_config(&a.common)?;
    let name = a
        .preset
        .clone()
        .or(cfg.preset.clone())
        .unwrap_or_else(|| "labyrinthine".into());
    let mut preset = patterns::preset(&name)?;
    let nx = a.nx.or(cfg.nx).unwrap_or(128);
    let dt = a.dt.or(cfg.dt).unwrap_or(patterns::DEFAULT_DT);
    let t_end = a.t_end.or(cfg.t_end).unwrap_or(2000.0);
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    let (d_u, d_v) = diffusion(&a.common, &cfg);
    let with_v = a.with_v || cfg.with_v.unwrap_or(false);
    let csv = a.csv || cfg.csv.unwrap_or(false);
    let out = require_out(a.out.or(cfg.out))?;

    let mut times: Vec<f64> = preset
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t < t_end)
        .collect();
    times.push(t_end);
    preset.snapshot_times = times.clone();
    let mesh = Arc::new(UniformMesh::unit_square(nx)?);
    let settings = SimulateSettings {
        params: GrayScottParams::new(d_u, d_v, preset.feed, preset.kill)?,
        preset: preset.clone(),
        nx,
        dt,
        t_end,
        snapshot_times: times,
        solver_tol: crate::diffusion::DEFAULT_TOL,
        solver_max_iter: crate::diffusion::DEFAULT_MAX_ITER,
    };
    let mut manifest = RunManifest::new(command_line(), to_json(&settings)?);
    let run = patterns::run_pattern(&preset, d_u, d_v, &mesh, dt, None)?;

    let comment = format!("gsfv {} {MANIFEST_FILE}", env!("CARGO_PKG_VERSION"));
    for snap in &run.snapshots {
        let mut fields = vec![("u", &snap.u)];
        if with_v {
            fields.push(("v", &snap.v));
        }
        for (species, field) in fields {
            let stem = format!("{species}_t{}", snap.t);
            let pgm = out.join(format!("{stem}.pgm"));
            output::write_pgm(field, &pgm, (0.0, 1.0), Some(&comment))?;
            manifest.outputs.push(file_name(&pgm));
            if csv {
                let path = out.join(format!("{stem}.{}", SnapshotFormat::Csv.extension()));
                output::write_field_snapshot(field, &path, SnapshotFormat::Csv)?;
                manifest.outputs.push(file_name(&path));
            }
        }
    }
    let energy = out.join("energy.csv");
    write_energy(&run.report, &energy)?;
    manifest.outputs.push(file_name(&energy));
    manifest.monitor = Some(to_json(&MonitorSummary::from(&run.report))?);
    manifest.write(&out)?;
    println!(
        "{}: {} steps, u in [{:.6}, {:.6}], v in [{:.6}, {:.6}], {} bound violations",
        preset.name,
        run.report.steps,
        run.report.min_u,
        run.report.max_u,
        run.report.min_v,
        run.report.max_v,
        run.report.bound_violations
    );
    Ok(())
}

fn write_energy(report: &MonitorReport, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(file);
    let fmt = |e: csv::Error| Error::Format(e.to_string());
    wtr.write_record(["n", "t", "l2_sq", "dissipation"])
        .map_err(fmt)?;
    for e in &report.energy {
        wtr.write_record([
            e.n.to_string(),
            e.t.to_string(),
            e.l2_sq.to_string(),
            e.dissipation.to_string(),
        ])
        .map_err(fmt)?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn write_table(
    table: &ErrorTable,
    out: &Path,
    stem: &str,
    config: serde_json::Value,
) -> Result<()> {
    let mut manifest = RunManifest::new(command_line(), config);
    let csv = out.join(format!("{stem}.csv"));
    let dat = out.join(format!("{stem}.dat"));
    output::write_error_table(table, &csv)?;
    output::write_plot_data(table, &dat, MANIFEST_FILE)?;
    manifest.outputs = vec![file_name(&csv), file_name(&dat)];
    manifest.monitor = Some(serde_json::json!({
        "keys": table.keys,
        "orders": table.orders,
        "all_finite": table.all_finite(),
    }));
    manifest.write(out)?;
    print_table(table);
    Ok(())
}

fn print_table(table: &ErrorTable) {
    println!("{}", table.label);
    for (k, r) in table.keys.iter().zip(&table.rows) {
        let [a, b, c, d] = r.errors();
        println!(
            "  key {k:.4e}  h {:.4e}  dt {:.4e}  {a:.4e} {b:.4e} {c:.4e} {d:.4e}  {:.2}s",
            r.h, r.dt, r.runtime_s
        );
    }
    let [a, b, c, d] = table.orders;
    println!("  order  L2_u {a:.3}  L2_v {b:.3}  Linf_u {c:.3}  Linf_v {d:.3}");
}

fn convergence(a: ConvergenceArgs) -> Result<()> {
    let cfg = file_config(&a.common)?;
    let settings = CaseSettings::resolve(&a.case, &a.common, &cfg)?;
    let sizes = a
        .sizes
        .or(cfg.sizes.clone())
        .unwrap_or_else(|| vec![16, 32, 64, 128]);
    let t_end = a.t_end.or(cfg.t_end).unwrap_or(1.0);
    let out = require_out(a.out.or(cfg.out.clone()))?;
    let samples = mms::default_sample_times(t_end);
    let table = mms::convergence_study(&settings.build()?, &sizes, t_end, &samples)?;
    let config = serde_json::json!({
        "study": "convergence",
        "case": to_json(&settings)?,
        "sizes": sizes,
        "t_end": t_end,
        "dt_rule": "h^2",
        "sample_times": samples,
        "solver_tol": crate::diffusion::DEFAULT_TOL,
    });
    write_table(
        &table,
        &out,
        &format!("convergence_{}", settings.name()),
        config,
    )
}

fn stability(a: StabilityArgs) -> Result<()> {
    let cfg = file_config(&a.common)?;
    let settings = CaseSettings::resolve(&a.case, &a.common, &cfg)?;
    let nx = a.nx.or(cfg.nx).unwrap_or(128);
    let multipliers = a
        .multipliers
        .or(cfg.multipliers.clone())
        .unwrap_or_else(|| vec![1.0, 2.0, 4.0, 16.0, 32.0, 64.0]);
    let t_end = a.t_end.or(cfg.t_end).unwrap_or(1.0);
    let out = require_out(a.out.or(cfg.out.clone()))?;
    let table = mms::stability_study(&settings.build()?, nx, &multipliers, t_end)?;
    let config = serde_json::json!({
        "study": "stability",
        "case": to_json(&settings)?,
        "nx": nx,
        "multipliers": multipliers,
        "t_end": t_end,
        "sample_times": table.sample_times,
        "solver_tol": crate::diffusion::DEFAULT_TOL,
    });
    write_table(
        &table,
        &out,
        &format!("stability_{}", settings.name()),
        config,
    )
}

fn interface(a: InterfaceArgs) -> Result<()> {
    let cfg = file_config(&a.common)?;
    let (d_u, d_v) = diffusion(&a.common, &cfg);
    let params = GrayScottParams::new(
        d_u,
        d_v,
        a.feed.or(cfg.feed).unwrap_or(mms::DEFAULT_FEED),
        a.kill.or(cfg.kill).unwrap_or(mms::DEFAULT_KILL),
    )?;
    let mut base = TanhConfig::default();
    if let Some(g) = a.geometry.or(cfg.geometry) {
        base.geometry = g.into();
    }
    let eps = a
        .eps
        .or(cfg.eps.clone())
        .unwrap_or_else(|| mms::DEFAULT_EPS.to_vec());
    let nx = a.nx.or(cfg.nx).unwrap_or(128);
    let dt = a.dt.or(cfg.dt).unwrap_or(1.0 / 256.0);
    let t_end = a.t_end.or(cfg.t_end).unwrap_or(1.0);
    let out = require_out(a.out.or(cfg.out.clone()))?;
    let samples = mms::default_sample_times(t_end);
    let table = mms::interface_study(params, base, &eps, nx, dt, t_end, &samples)?;
    let config = serde_json::json!({
        "study": "interface",
        "params": to_json(&params)?,
        "tanh": to_json(&base)?,
        "eps": eps,
        "nx": nx,
        "dt": dt,
        "t_end": t_end,
        "sample_times": samples,
        "solver_tol": crate::diffusion::DEFAULT_TOL,
    });
    write_table(&table, &out, "interface_tanh", config)
}

fn residual(a: ResidualArgs) -> Result<()> {
    let cfg = file_config(&a.common)?;
    let settings = CaseSettings::resolve(&a.case, &a.common, &cfg)?;
    let (default_sizes, default_t) = match settings.case {
        CaseKind::Trig => (vec![32, 64], 0.3),
        CaseKind::Tanh => (vec![128, 256, 512], 0.2),
    };
    let sizes = a.sizes.or(cfg.sizes.clone()).unwrap_or(default_sizes);
    let t = a.t.or(cfg.t).unwrap_or(default_t);
    let case = settings.build()?;
    println!("residual {} at t = {t}, dt_fd = h^2", settings.name());
    let mut prev: Option<(f64, f64)> = None;
    for n in sizes {
        let mesh = UniformMesh::unit_square(n)?;
        let h = mesh.h();
        let (du, dv) = mms::residual_check(&case, t, &mesh, h * h)?;
        match prev {
            Some((pu, pv)) => println!(
                "  n {n:>5}  defect_u {du:.6e}  defect_v {dv:.6e}  ratio_u {:.3}  ratio_v {:.3}",
                pu / du,
                pv / dv
            ),
            None => println!("  n {n:>5}  defect_u {du:.6e}  defect_v {dv:.6e}"),
        }
        prev = Some((du, dv));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        main_with_args(std::iter::once("gsfv").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors() {
        assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code(&["simulate", "--nx", "abc"]), EXIT_USAGE);
        assert_eq!(
            code(&["mms", "convergence", "--case", "circle"]),
            EXIT_USAGE
        );
        assert_eq!(code(&["--help"]), EXIT_OK);
    }

    #[test]
    fn exit_code_classes() {
        assert_eq!(exit_code(&Error::NonFinite { step: 3 }), EXIT_NUMERICAL);
        assert_eq!(
            exit_code(&Error::NoConvergence {
                iterations: 1,
                residual: 1.0
            }),
            EXIT_NUMERICAL
        );
        let io = Error::io(Path::new("x"), std::io::Error::other("boom"));
        assert_eq!(exit_code(&io), EXIT_IO);
        assert_eq!(exit_code(&Error::UnknownPreset("x".into())), EXIT_USAGE);
    }

    #[test]
    fn unknown_preset_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        assert_eq!(
            code(&["simulate", "--preset", "stripes", "--out", out]),
            EXIT_USAGE
        );
    }

    #[test]
    fn config_file_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"case": "tanh", "feed": 0.02, "tanh_eps": 0.05}"#).unwrap();
        let cfg = FileConfig::load(&path).unwrap();
        let common = Common {
            config: None,
            d_u: None,
            d_v: None,
        };
        let args = CaseArgs {
            case: None,
            feed: Some(0.03),
            kill: None,
            amplitude: None,
            tanh_eps: None,
            geometry: None,
        };
        let s = CaseSettings::resolve(&args, &common, &cfg).unwrap();
        assert_eq!(s.case, CaseKind::Tanh);
        assert_eq!(s.params.feed, 0.03);
        assert_eq!(s.params.kill, mms::DEFAULT_KILL);
        assert_eq!(s.tanh.eps, 0.05);

        std::fs::write(&path, r#"{"unknown_key": 1}"#).unwrap();
        assert!(matches!(
            FileConfig::load(&path),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            FileConfig::load(&dir.path().join("missing.json")),
            Err(Error::IoFailure { .. })
        ));
    }

    #[test]
    fn unwritable_output_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        std::fs::write(&file, "x").unwrap();
        let out = file.join("sub");
        assert_eq!(
            code(&[
                "simulate",
                "--nx",
                "8",
                "--t-end",
                "2",
                "--out",
                out.to_str().unwrap()
            ]),
            EXIT_IO
        );
    }
}
