// Mesh refinement study on the trigonometric manufactured solution, dt = h².

use gsfv::mms::{self, ErrorTable};

pub fn run_example() -> gsfv::Result<ErrorTable> {
    let case = mms::trig_case(0.5, mms::default_params())?;
    let t_end = 0.5;
    let table = mms::convergence_study(
        &case,
        &[8, 16, 32],
        t_end,
        &mms::default_sample_times(t_end),
    )?;

    println!("{:>10} {:>12} {:>12}", "h", "L2 err u", "L2 err v");
    for r in &table.rows {
        println!(
            "{:>10.5} {:>12.4e} {:>12.4e}",
            r.h, r.err_linf_l2_u, r.err_linf_l2_v
        );
    }
    println!(
        "observed order in h²: u {:.3}, v {:.3}",
        table.orders[0], table.orders[1]
    );
    Ok(table)
}

#[allow(dead_code)]
fn main() -> gsfv::Result<()> {
    run_example().map(|_| ())
}
