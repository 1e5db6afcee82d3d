// Symbol spec files: parse, sample on a grid, write back.

use uwq::config::{parse_symbol, Format};
use uwq::grid::AxisGrid;

pub fn run_example() -> uwq::Result<()> {
    let text = "kind = \"poly\"\nd = 1\nn = 64\nL = 8.0\nterms = [[2, 0, 1.0, 0.0], [0, 2, 1.0, 0.0]]\n";
    let spec = parse_symbol(text, Format::Toml)?;
    let axis = spec.axis(&AxisGrid::standard(1))?;
    let a = spec.sample(&axis)?;
    println!("{} points, max |a| = {}", a.values().len(), a.max_abs());
    print!("{}", spec.to_toml());
    assert_eq!(parse_symbol(&spec.to_toml(), Format::Toml)?, spec);

    let json = r#"{"kind": "poly", "d": 1, "terms": [[1, 1, 0.0, 1.0]]}"#;
    println!("{}", parse_symbol(json, Format::Json)?.as_poly().expect("poly"));

    match parse_symbol("d = 1\nterms = []\n", Format::Toml) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("kind is required"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> uwq::Result<()> {
    run_example()
}
