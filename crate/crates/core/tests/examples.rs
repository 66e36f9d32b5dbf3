//! Every runnable example, executed as a test.

#[allow(dead_code)]
mod implicit_diffusion {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/implicit_diffusion.rs"
    ));
}

#[allow(dead_code)]
mod single_step {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/single_step.rs"
    ));
}

#[allow(dead_code)]
mod pattern_snapshots {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/pattern_snapshots.rs"
    ));
}

#[allow(dead_code)]
mod mms_convergence {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/mms_convergence.rs"
    ));
}

#[allow(dead_code)]
mod stability_sweep {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/stability_sweep.rs"
    ));
}

#[allow(dead_code)]
mod interface_sensitivity {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/interface_sensitivity.rs"
    ));
}

#[allow(dead_code)]
mod source_residual {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/source_residual.rs"
    ));
}

#[test]
fn implicit_diffusion_example_runs() {
    let (iterations, rel) =
        implicit_diffusion::run_example().expect("implicit diffusion example should run");
    assert!(iterations > 0);
    assert!(rel <= 1e-9, "{rel}");
}

#[test]
fn single_step_example_runs() {
    let s = single_step::run_example().expect("single step example should run");
    assert!((s.u.max() - 0.48725).abs() < 1e-14 && (s.u.min() - 0.48725).abs() < 1e-14);
    assert!((s.v.max() - 0.257).abs() < 1e-14 && (s.v.min() - 0.257).abs() < 1e-14);
}

#[test]
fn pattern_snapshots_example_runs() {
    let (dir, run) = pattern_snapshots::run_example().expect("pattern example should run");
    assert_eq!(run.snapshots.len(), 2);
    assert!(run.report.bounds_hold());
    assert!(dir.join("manifest.json").is_file());
    assert!(dir.join("u_t100.pgm").is_file());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn mms_convergence_example_runs() {
    let t = mms_convergence::run_example().expect("convergence example should run");
    assert_eq!(t.rows.len(), 3);
    assert!(t.orders[0] > 0.8 && t.orders[0] < 1.2, "{:?}", t.orders);
}

#[test]
fn stability_sweep_example_runs() {
    let t = stability_sweep::run_example().expect("stability example should run");
    assert!(t.all_finite());
    assert!(t.rows[2].err_linf_l2_u > t.rows[0].err_linf_l2_u);
}

#[test]
fn interface_sensitivity_example_runs() {
    let t = interface_sensitivity::run_example().expect("interface example should run");
    assert_eq!(t.rows.len(), 3);
    assert!(t.all_finite());
}

#[test]
fn source_residual_example_runs() {
    let (ru, rv) = source_residual::run_example().expect("residual example should run");
    assert!(ru >= 3.5 && rv >= 3.5, "{ru} {rv}");
}
