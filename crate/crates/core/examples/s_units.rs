//! Hermite normal form of a valuation matrix and the index of the unit lattice.

use rayclass::sunits::{hnf_with, lattice_index, subset_basis, to_big, PivotOrder, Residues};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // valuations of x, x + 1, y, y + x^2 at P_inf, P_1, .., P_4 on the genus-2 curve
    let d = to_big(&[
        vec![-2, 1, 0, 0, 1],
        vec![-2, 0, 1, 1, 0],
        vec![-5, 0, 2, 0, 3],
        vec![-5, 0, 0, 3, 2],
    ]);
    println!("index of the generated lattice: {}", lattice_index(&d, &[1; 5])?);
    let r = hnf_with(&d, PivotOrder::RightToLeft, Residues::Symmetric);
    println!("H = U D:");
    for (h, u) in r.h.iter().zip(&r.u) {
        let h: Vec<String> = h.iter().map(|v| format!("{v:>4}")).collect();
        let u: Vec<String> = u.iter().map(|v| format!("{v:>3}")).collect();
        println!("  [{}]   U row [{}]", h.join(""), u.join(""));
    }
    for k in 1..=3 {
        let basis = subset_basis(&r, k)?;
        println!("units on the first {} places: exponents {:?}", k + 1, basis.exponents);
    }
    Ok(())
}
