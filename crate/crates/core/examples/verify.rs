//! Recomputes the rational-ground rows of the bundled corpus over prime fields and `F_4`.

use rayclass::harness::output::write_report;
use rayclass::harness::{verify, Format, GoldenCorpus, RowGroup, VerifyOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = VerifyOptions {
        groups: vec![RowGroup::RationalPrime, RowGroup::RationalQ4, RowGroup::Example],
        census: false,
        ..Default::default()
    };
    let report = verify(&GoldenCorpus::bundled(), &opts)?;
    write_report(&report, Format::Text, std::io::stdout())?;
    std::process::exit(if report.ok() { 0 } else { 1 });
}
