//! Computations around the group `G_m` of primitive solutions of
//! `x^2 + m y^2 = z^2`, its subgroup `P_m` generated by Pell solutions, the
//! ideal class map into `Cl(Q(sqrt(-m)))`, and certified order-2 elements
//! of `G_m / P_m`.

pub mod classgroup;
pub mod error;
pub mod intkernel;
pub mod lambdasieve;
pub mod pell;
pub mod polyfp;
pub mod scan;
pub mod triplegroup;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
