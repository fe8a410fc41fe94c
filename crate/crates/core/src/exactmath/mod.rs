//! Exact scalar and linear-algebra kernel: Q/Z phases, cyclotomic fields,
//! integer Smith normal form, and linear solving over Z/n.

pub mod cyclotomic;
pub mod matrix;
pub mod modsolve;
pub mod qz;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use matrix::{smith_normal_form, IntMatrix, SnfResult};
pub use modsolve::solve_mod;
pub use qz::Qz;
