//! Symbolic Lie point-symmetry analysis of the generalized Fisher equation
//! in cylindrical coordinates, `u_t - (1/x)(x f(u) u_x)_x - g(u) = 0`.

pub mod catalogue;
pub mod conservation;
pub mod dsl;
pub mod expr;
pub mod special;
pub mod jet;
pub mod lie;
pub mod linalg;
pub mod numeric;
pub mod optimal;
pub mod par;
pub mod reduction;
pub mod report;
pub mod suite;
pub mod symmetry;
