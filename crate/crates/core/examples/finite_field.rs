//! Arithmetic in `F_16`: generator powers, logarithms and Frobenius orbits.

use rayclass::ffield::FieldCtx;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = FieldCtx::with_order(16)?;
    println!("F_{} = F_{}[w]/({:?}), coefficients low to high", f.q(), f.p(), f.modulus());
    let a = f.parse_elem("w^3")?;
    let b = f.parse_elem("[1,1,0,0]")?;
    let sum = f.add(a, b);
    let quot = f.div(a, b);
    println!("w^3 + (1 + w) = {} = {:?}", f.format_elem(sum), f.coords(sum));
    println!("w^3 / (1 + w) = {}, log {}", f.format_elem(quot), f.dlog(quot)?);
    println!("Frobenius orbits of exponents:");
    for orbit in f.frobenius_orbits() {
        println!("  {orbit:?}");
    }
    Ok(())
}
