//! All descriptions of sets of rational places of `F_8(x)`, up to affine maps.

use rayclass::harness::output::write_census;
use rayclass::harness::{census, CensusOptions, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = census(&CensusOptions { cross_check: true, ..CensusOptions::new(8) })?;
    write_census(&report, Format::Text, std::io::stdout())?;
    Ok(())
}
