// Large time steps on a fixed mesh: dt = k h.

use gsfv::mms::{self, ErrorTable};

pub fn run_example() -> gsfv::Result<ErrorTable> {
    let case = mms::trig_case(0.5, mms::default_params())?;
    let table = mms::stability_study(&case, 32, &[1.0, 4.0, 16.0], 1.0)?;
    for (k, r) in [1, 4, 16].iter().zip(&table.rows) {
        println!(
            "k = {k:>2}  dt = {:.4}  L2 err u = {:.4e}  finite = {}",
            r.dt, r.err_linf_l2_u, r.finite
        );
    }
    Ok(table)
}

#[allow(dead_code)]
fn main() -> gsfv::Result<()> {
    run_example().map(|_| ())
}
