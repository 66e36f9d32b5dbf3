// Solve one implicit diffusion system `(h² I + dt d L) x = b` matrix-free.

use std::sync::Arc;

use gsfv::{CellField, ImplicitDiffusionOperator, UniformMesh};

/// Returns the iteration count and the relative residual of the solve.
pub fn run_example() -> gsfv::Result<(usize, f64)> {
    let mesh = Arc::new(UniformMesh::unit_square(64)?);
    let op = ImplicitDiffusionOperator::new(&mesh, 1.6e-5, 1.0)?;

    // A bump in the middle of the domain.
    let bump = CellField::from_fn(&mesh, |k| {
        let [x, y] = mesh.cell_center(k).expect("in range");
        (-((x - 0.5).powi(2) + (y - 0.5).powi(2)) / 0.01).exp()
    });
    let rhs = bump.scale(mesh.cell_area());

    let (x, stats) = op.solve(&rhs, 1e-10, 10_000)?;
    let back = op.apply(&x)?;
    let rel = back.sub(&rhs)?.norm_l2_h() / rhs.norm_l2_h();

    println!("cg iterations: {}", stats.iterations);
    println!("relative residual: {rel:.3e}");
    println!(
        "mass before {:.12} after {:.12}",
        bump.integral(),
        x.integral()
    );
    Ok((stats.iterations, rel))
}

#[allow(dead_code)]
fn main() -> gsfv::Result<()> {
    run_example().map(|_| ())
}
