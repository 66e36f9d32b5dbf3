//! Pattern-forming presets started from a perturbed homogeneous state.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CellField;
use crate::imex::{self, GrayScottParams, MonitorReport, RunConfig, SimState};
use crate::mesh::UniformMesh;

/// Snapshot times shared by all presets.
pub const SNAPSHOT_TIMES: [f64; 4] = [100.0, 500.0, 1000.0, 2000.0];

/// Default step for pattern runs.
pub const DEFAULT_DT: f64 = 1.0;

/// Half-width of the perturbed box around the domain center.
const BOX_HALF_WIDTH: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternPreset {
    pub name: &'static str,
    pub feed: f64,
    pub kill: f64,
    pub snapshot_times: Vec<f64>,
}

const PRESETS: [(&str, f64, f64); 3] = [
    ("labyrinthine", 0.037, 0.060),
    ("moving_spots", 0.014, 0.054),
    ("pulsating_spots", 0.025, 0.060),
];

impl PatternPreset {
    pub fn params(&self) -> GrayScottParams {
        GrayScottParams::with_default_diffusion(self.feed, self.kill)
            .expect("presets have positive rates")
    }
}

pub fn preset(name: &str) -> Result<PatternPreset> {
    PRESETS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|&(name, feed, kill)| PatternPreset {
            name,
            feed,
            kill,
            snapshot_times: SNAPSHOT_TIMES.to_vec(),
        })
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

pub fn all_presets() -> Vec<PatternPreset> {
    PRESETS
        .iter()
        .map(|(n, _, _)| preset(n).expect("known"))
        .collect()
}

/// `(u, v) = (1, 0)` except in cells whose centers lie in the central
/// `0.2 × 0.2` box, where `(u, v) = (0.5, 0.25)`.
pub fn pattern_initial_condition(mesh: &Arc<UniformMesh>) -> (CellField, CellField) {
    let (lx, ly) = mesh.lengths();
    let [ox, oy] = mesh.origin();
    let (cx, cy) = (ox + 0.5 * lx, oy + 0.5 * ly);
    let inside = |k: usize| {
        let [x, y] = mesh.cell_center(k).expect("in range");
        (x - cx).abs() <= BOX_HALF_WIDTH && (y - cy).abs() <= BOX_HALF_WIDTH
    };
    (
        CellField::from_fn(mesh, |k| if inside(k) { 0.5 } else { 1.0 }),
        CellField::from_fn(mesh, |k| if inside(k) { 0.25 } else { 0.0 }),
    )
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub u: CellField,
    pub v: CellField,
}

#[derive(Debug, Clone)]
pub struct PatternRun {
    pub snapshots: Vec<Snapshot>,
    pub final_state: SimState,
    pub report: MonitorReport,
}

/// Run from `initial` up to the last of `snapshot_times`, keeping the fields
/// at each snapshot time. Bound and energy monitors are on.
pub fn run_from(
    initial: SimState,
    params: GrayScottParams,
    dt: f64,
    snapshot_times: &[f64],
    observer: Option<&mut dyn FnMut(&SimState)>,
) -> Result<PatternRun> {
    let mut steps = Vec::with_capacity(snapshot_times.len());
    for &t in snapshot_times {
        let n = (t / dt).round();
        if !(t > 0.0) || (n * dt - t).abs() > 1e-9 * t {
            return Err(Error::SampleTimeUnreachable(t));
        }
        steps.push(n as usize);
    }
    let t_end = snapshot_times.iter().copied().fold(0.0, f64::max);
    let cfg = RunConfig::new(dt, t_end)?;

    let mut snapshots = Vec::new();
    let mut capture = |s: &SimState| {
        if steps.contains(&s.n) {
            snapshots.push(Snapshot {
                t: s.t,
                u: s.u.clone(),
                v: s.v.clone(),
            });
        }
    };
    let (final_state, report) = match observer {
        Some(obs) => imex::run(&initial, &params, &cfg, None, &mut [&mut capture, obs])?,
        None => imex::run(&initial, &params, &cfg, None, &mut [&mut capture])?,
    };
    Ok(PatternRun {
        snapshots,
        final_state,
        report,
    })
}

/// Preset run from the boxed initial condition.
pub fn run_pattern(
    preset: &PatternPreset,
    d_u: f64,
    d_v: f64,
    mesh: &Arc<UniformMesh>,
    dt: f64,
    observer: Option<&mut dyn FnMut(&SimState)>,
) -> Result<PatternRun> {
    let params = GrayScottParams::new(d_u, d_v, preset.feed, preset.kill)?;
    let (u0, v0) = pattern_initial_condition(mesh);
    run_from(
        SimState::new(u0, v0)?,
        params,
        dt,
        &preset.snapshot_times,
        observer,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imex::{DEFAULT_D_U, DEFAULT_D_V};

    #[test]
    fn preset_values() {
        let l = preset("labyrinthine").unwrap();
        assert_eq!((l.feed, l.kill), (0.037, 0.060));
        let m = preset("moving_spots").unwrap();
        assert_eq!((m.feed, m.kill), (0.014, 0.054));
        let p = preset("pulsating_spots").unwrap();
        assert_eq!((p.feed, p.kill), (0.025, 0.060));
        assert_eq!(p.snapshot_times, vec![100.0, 500.0, 1000.0, 2000.0]);
        assert!(matches!(preset("stripes"), Err(Error::UnknownPreset(_))));
        assert_eq!(all_presets().len(), 3);
    }

    #[test]
    fn boxed_initial_condition() {
        let mesh = Arc::new(UniformMesh::unit_square(10).unwrap());
        let (u, v) = pattern_initial_condition(&mesh);
        let flagged: Vec<usize> = (0..100).filter(|&k| u.values()[k] == 0.5).collect();
        assert_eq!(flagged, vec![44, 45, 54, 55]);
        for &k in &flagged {
            assert_eq!(v.values()[k], 0.25);
        }
        assert!((u.mean() - 0.98).abs() < 1e-15);
        assert_eq!((u.values()[0], v.values()[0]), (1.0, 0.0));
        assert_eq!((u.values()[99], v.values()[99]), (1.0, 0.0));
    }

    #[test]
    fn smoke_run_respects_bounds() {
        let mesh = Arc::new(UniformMesh::unit_square(64).unwrap());
        let p = preset("labyrinthine").unwrap();
        let (u0, v0) = pattern_initial_condition(&mesh);
        let run = run_from(
            SimState::new(u0, v0).unwrap(),
            p.params(),
            0.5,
            &[5.0, 10.0],
            None,
        )
        .unwrap();
        assert_eq!(run.snapshots.len(), 2);
        assert_eq!(run.snapshots[1].t, 10.0);
        assert!(run.report.bounds_hold(), "{:?}", run.report);
        assert!(run.final_state.is_valid());
    }

    #[test]
    fn homogeneous_control_stays_put() {
        let mesh = Arc::new(UniformMesh::unit_square(16).unwrap());
        let s = SimState::new(CellField::constant(&mesh, 1.0), CellField::zeros(&mesh)).unwrap();
        let p = GrayScottParams::new(DEFAULT_D_U, DEFAULT_D_V, 0.037, 0.060).unwrap();
        let run = run_from(s, p, 1.0, &[10.0, 50.0], None).unwrap();
        for snap in &run.snapshots {
            assert!(snap.u.std_dev() < 1e-12);
            assert!((snap.u.max() - 1.0).abs() < 1e-12 && snap.v.norm_linf() < 1e-12);
        }
    }

    #[test]
    fn snapshot_times_must_be_reachable() {
        let mesh = Arc::new(UniformMesh::unit_square(4).unwrap());
        let (u0, v0) = pattern_initial_condition(&mesh);
        let p = preset("labyrinthine").unwrap();
        let err = run_from(
            SimState::new(u0, v0).unwrap(),
            p.params(),
            0.3,
            &[1.0],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SampleTimeUnreachable(_)));
    }

    #[test]
    fn reproducible() {
        let mesh = Arc::new(UniformMesh::unit_square(32).unwrap());
        let p = preset("moving_spots").unwrap();
        let short = PatternPreset {
            snapshot_times: vec![20.0],
            ..p
        };
        let a = run_pattern(&short, DEFAULT_D_U, DEFAULT_D_V, &mesh, 1.0, None).unwrap();
        let b = run_pattern(&short, DEFAULT_D_U, DEFAULT_D_V, &mesh, 1.0, None).unwrap();
        assert_eq!(a.snapshots[0].u, b.snapshots[0].u);
        assert_eq!(a.snapshots[0].v, b.snapshots[0].v);
    }
}
