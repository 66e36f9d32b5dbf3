// Short labyrinthine run from the boxed initial condition, with PGM
// snapshots of `u` written next to a manifest.

use std::path::PathBuf;
use std::sync::Arc;

use gsfv::output::{self, RunManifest, SnapshotFormat};
use gsfv::patterns::{self, PatternRun};
use gsfv::UniformMesh;

pub fn run_example() -> gsfv::Result<(PathBuf, PatternRun)> {
    let dir = std::env::temp_dir().join(format!("gsfv-patterns-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| gsfv::Error::IoFailure {
        path: dir.clone(),
        source: e,
    })?;

    let mesh = Arc::new(UniformMesh::unit_square(64)?);
    let mut preset = patterns::preset("labyrinthine")?;
    preset.snapshot_times = vec![50.0, 100.0];
    let params = preset.params();

    let mut steps = 0usize;
    let mut count = |_: &gsfv::SimState| steps += 1;
    let run = patterns::run_pattern(
        &preset,
        params.d_u,
        params.d_v,
        &mesh,
        1.0,
        Some(&mut count),
    )?;

    let mut manifest = RunManifest::new(
        "pattern_snapshots example",
        serde_json::json!({ "preset": preset }),
    );
    for snap in &run.snapshots {
        let name = format!("u_t{}.pgm", snap.t);
        output::write_field_snapshot(&snap.u, &dir.join(&name), SnapshotFormat::Pgm)?;
        manifest.outputs.push(name);
        println!("t = {:>5}: std(u) = {:.4}", snap.t, snap.u.std_dev());
    }
    manifest.write(&dir)?;
    println!(
        "{steps} steps, {} bound violations, wrote {}",
        run.report.bound_violations,
        dir.display()
    );
    Ok((dir, run))
}

#[allow(dead_code)]
fn main() -> gsfv::Result<()> {
    run_example().map(|_| ())
}
