//! Point counts, zeta numerator and class number of a genus-2 curve over `F_2`.

use rayclass::curve::PlaneCurve;

const CURVE: &str = include_str!("../data/example_curve.txt");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let curve = PlaneCurve::parse(CURVE)?;
    println!("curve of genus {} over F_{}", curve.genus(), curve.field().q());
    for d in 1..=4 {
        println!("  N_{d} = {}", curve.count_points(d)?);
    }
    let l = curve.zeta_numerator()?;
    let coeffs: Vec<String> = l.iter().map(|c| c.to_string()).collect();
    println!("L(t) coefficients: [{}]", coeffs.join(", "));
    println!("class number h = L(1) = {}", curve.class_number()?);
    Ok(())
}
