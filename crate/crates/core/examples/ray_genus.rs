//! Genus of ray class fields from a description, by three routes, and the Hayes formulas.

use rayclass::lambda::{Description, LambdaSeq, LambdaSource};
use rayclass::raygenus::{genus_l, genus_via_different, genus_via_discriminant, hayes_genus, CyclePart};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let desc = Description::parse("t^2 + t^5").ok_or("bad description")?;
    let lam = LambdaSeq::from_description(&desc, 2, 1, 40, LambdaSource::MethodB);
    println!("{:>2} {:>3} {:>6} {:>6} {:>6}", "l", "n", "closed", "disc", "diff");
    for l in 1..=6 {
        let n = lam.conductor_exponent(l)?;
        let a = genus_l(2, 1, &lam, l)?;
        let b = genus_via_discriminant(2, 1, &lam, l)?;
        let c = genus_via_different(2, 1, &lam, l)?;
        println!("{l:>2} {n:>3} {a:>6} {b:>6} {c:>6}");
    }
    for (q, m) in [(2, 3), (2, 4), (3, 3), (5, 2)] {
        let g = hayes_genus(q, &[CyclePart { degree: 1, mult: m }], 1, 0)?;
        println!("ray class field of F_{q}(x) modulo P^{m} at a rational place: genus {g}");
    }
    Ok(())
}
