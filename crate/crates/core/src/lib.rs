//! Galois groups of modular-curve function fields, from q-expansions of
//! cusp forms on Γ₀(N).

pub mod arith;
pub mod cli;
pub mod fppoly;
pub mod galois;
pub mod linalg;
pub mod modcurve;
pub mod poly;
pub mod qexp;
pub mod relation;
