// Run one acceptance suite programmatically and print its table.

use uwq::verify::{all_pass, render_table, run_verify, Suite, VerifyParams};

pub fn run_example() -> uwq::Result<()> {
    let params = VerifyParams::default();
    let reports = run_verify(Suite::Compose, &params)?;
    print!("{}", render_table(&reports, &params));
    assert!(all_pass(&reports));
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
