pub mod bounds;
pub mod curve;
pub mod harness;
pub mod ffield;
pub mod lambda;
pub mod method_a;
pub mod method_b;
pub mod raygenus;
pub mod series;
pub mod sunits;
