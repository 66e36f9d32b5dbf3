// Check hand-coded manufactured sources against finite differences of the
// exact solution.

use gsfv::mms;
use gsfv::UniformMesh;

/// Defect ratios `(u, v)` between a mesh and its refinement.
pub fn run_example() -> gsfv::Result<(f64, f64)> {
    let case = mms::trig_case(0.5, mms::default_params())?;
    let mut defects = Vec::new();
    for n in [32, 64] {
        let mesh = UniformMesh::unit_square(n)?;
        let h = mesh.h();
        let (du, dv) = mms::residual_check(&case, 0.3, &mesh, h * h)?;
        println!("n = {n:>3}: defect u = {du:.4e}, v = {dv:.4e}");
        defects.push((du, dv));
    }
    let ratios = (defects[0].0 / defects[1].0, defects[0].1 / defects[1].1);
    println!("ratios: {:.2} {:.2}", ratios.0, ratios.1);
    Ok(ratios)
}

#[allow(dead_code)]
fn main() -> gsfv::Result<()> {
    run_example().map(|_| ())
}
