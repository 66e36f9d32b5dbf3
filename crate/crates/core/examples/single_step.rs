// One IMEX step: explicit kinetics, implicit diffusion.

use std::sync::Arc;

use gsfv::imex;
use gsfv::{CellField, GrayScottParams, SimState, UniformMesh};

pub fn run_example() -> gsfv::Result<SimState> {
    let mesh = Arc::new(UniformMesh::unit_square(32)?);
    let params = GrayScottParams::with_default_diffusion(0.037, 0.060)?;

    // Uniform data: the diffusion solve leaves it unchanged, so the step is a
    // single explicit kinetics update.
    let state = SimState::new(
        CellField::constant(&mesh, 0.5),
        CellField::constant(&mesh, 0.25),
    )?;
    let next = imex::step(&state, &params, 1.0, None)?;

    println!("f(0.5, 0.25) = {}", params.f(0.5, 0.25));
    println!("g(0.5, 0.25) = {}", params.g(0.5, 0.25));
    println!("u1 in [{}, {}]", next.u.min(), next.u.max());
    println!("v1 in [{}, {}]", next.v.min(), next.v.max());
    Ok(next)
}

#[allow(dead_code)]
fn main() -> gsfv::Result<()> {
    run_example().map(|_| ())
}
