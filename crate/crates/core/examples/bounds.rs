//! Upper bounds on the number of rational places for a few `(q, g)`.

use rayclass::bounds::{hbar, oesterle_nbar, BoundReport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>3} {:>6} {:>6} {:>9} {:>5}", "q", "g", "HW", "Serre", "Oesterle", "best");
    for (q, g) in [(2, 2), (2, 10), (3, 4), (4, 67), (8, 2), (16, 5), (27, 12)] {
        let r = BoundReport::new(q, g);
        println!("{q:>3} {g:>3} {:>6} {:>6} {:>9} {:>5}", r.hasse_weil, r.serre, r.oesterle, r.best());
    }
    let h = hbar(2, 2, 5)?;
    println!("class-number bound for q = 2, g = 2, N = 5: {h} ~ {:.6}", h.to_f64());
    println!("below 2: {}", h.cmp_int(2).is_lt());
    println!("N_2(10) <= {}", oesterle_nbar(2, 10));
    Ok(())
}
