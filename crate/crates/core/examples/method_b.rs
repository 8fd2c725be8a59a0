//! One-unit vectors and descriptions for `S`-units on the genus-2 curve at `(0, 0)`.

use rayclass::curve::{BiPoly, PlaceSpec, PlaneCurve};
use rayclass::ffield::Fq;
use rayclass::method_b::{describe_units, factor_vector, lambda_seq_b, UnitSystem};

const CURVE: &str = include_str!("../data/example_curve.txt");
const UNITS: &str = include_str!("../data/example_units.txt");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = PlaneCurve::parse(CURVE)?;
    let f = curve.field();
    let place = PlaceSpec::affine(Fq::ZERO, Fq::ZERO);
    for (text, v) in [("y", 3), ("y+x^2", 2)] {
        let g = BiPoly::parse(f, text)?;
        println!("mu^(6)(({text}) / pi^{v}) = {}", factor_vector(&curve, &place, &g, v, 6)?);
    }
    let units = UnitSystem::parse(f, UNITS)?;
    for r in 1..=3 {
        let d = describe_units(&curve, &place, &units.prefix(r), None)?;
        let lam = lambda_seq_b(&d.description, f.p(), f.e(), 14);
        println!("{r} unit(s): delta = {}, lambda^(1..) = {:?}", d.description, lam.from_one());
    }
    Ok(())
}
