//! Dimension profile and description of a set of rational places of `F_16(x)`.

use rayclass::ffield::FieldCtx;
use rayclass::method_a::{lambda_seq_a, RationalSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = FieldCtx::with_order(16)?;
    for exps in [vec![15], vec![1, 2, 15], vec![1, 2, 4, 15], vec![3, 6, 9, 12, 15]] {
        let set = RationalSet::from_exponents(&f, &exps)?;
        let (profile, lambda) = lambda_seq_a(&f, &set, 16);
        let status = if profile.fully_valid() { "valid throughout".to_string() } else {
            format!("valid up to n = {:?}", profile.valid_to())
        };
        println!("I_S = {exps:?}, |S| = {}: delta = {}, {status}", set.size(), profile.description());
        println!("  lambda^(1..) = {:?}", lambda.from_one());
    }
    Ok(())
}
