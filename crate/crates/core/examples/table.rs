//! Rows of fields `L_{l,S}` over `F_3(x)` and over the genus-2 curve.

use rayclass::harness::output::write_rows;
use rayclass::harness::verify::example_ground;
use rayclass::harness::{generate_table, Format, Ground, SetFamily};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rational = Ground::Rational { q: 3, family: SetFamily::Sizes(vec![1, 2, 3]) };
    write_rows(&generate_table(&rational, 1..=3)?, Format::Text, std::io::stdout())?;
    println!();
    let curve = Ground::Curve(Box::new(example_ground()?));
    write_rows(&generate_table(&curve, 1..=5)?, Format::Text, std::io::stdout())?;
    Ok(())
}
