// Error of the moving tanh interface as the thickness ε shrinks.

use gsfv::mms::{self, ErrorTable, TanhConfig};

pub fn run_example() -> gsfv::Result<ErrorTable> {
    let t_end = 0.5;
    let table = mms::interface_study(
        mms::default_params(),
        TanhConfig::default(),
        &[0.2, 0.1, 0.05],
        64,
        1.0 / 128.0,
        t_end,
        &mms::default_sample_times(t_end),
    )?;
    for (eps, r) in table.keys.iter().zip(&table.rows) {
        println!(
            "eps = {eps:<6} L2 err u = {:.4e}  Linf err u = {:.4e}",
            r.err_linf_l2_u, r.err_linf_linf_u
        );
    }
    println!("slope against eps: {:.3}", table.orders[0]);
    Ok(table)
}

#[allow(dead_code)]
fn main() -> gsfv::Result<()> {
    run_example().map(|_| ())
}
