//! Exact linear algebra over `F_p` and `Z`.

pub mod fp;
pub mod snf;

pub use fp::{apply_mod, in_image_mod, rank_mod, FpSystem};
pub use snf::{elementary_divisors, integer_kernel, solve_integer, Diagonalization};
